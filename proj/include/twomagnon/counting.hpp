#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "bisect.hpp"
#include "height.hpp"
#include "model.hpp"

namespace twomagnon
{

// tan^2 x of the real pair (x - phi, x + phi) with equal labels.
// The N-th root of L = ((c - i tan 2phi)/(c + i tan 2phi))^2 is taken as the continuous
// lift exp(-4i Phi(2phi)/N), rotated by exp(2 pi i n/N). With D+- = (1 +- i t tan phi)^2 and
// E+- = (t +- i tan phi)^2 the quotient (C E+ - E-)/(D- - C D+) factors into
//   -(t^2 + tan^2 phi)/(1 + t^2 tan^2 phi) * sin(theta + 2 beta)/sin(theta + 2 alpha),
// theta = arg(C)/2, alpha = atan(t tan phi), beta = atan(tan phi / t), which is real by
// construction and free of the O(1) cancellation of the complex form at small phi.
inline cplx tan2x_of_phi(double phi, int n, const ChainParams &p)
{
  const double t = p.t;
  const double tp = std::tan(phi);
  const double theta = (-2.0 * scattering_phase(2 * phi, p) + pi * n) / p.N;
  const double alpha = std::atan(t * tp), beta = std::atan(tp / t);
  const double den = std::sin(theta + 2 * alpha);
  if (std::abs(den) < 1e-15)
    throw Error(ErrorKind::DenominatorVanishes, "phi=" + std::to_string(phi));
  return -(t * t + tp * tp) / (1 + t * t * tp * tp) * std::sin(theta + 2 * beta) / den;
}

// The literal complex quotient, kept for cross-checking the factored form.
inline cplx tan2x_of_phi_direct(double phi, int n, const ChainParams &p)
{
  const double t = p.t;
  const double tp = std::tan(phi);
  const cplx I(0.0, 1.0);
  const cplx Dp = -t * t * tp * tp + 2.0 * I * t * tp + 1.0;
  const cplx Dm = -t * t * tp * tp - 2.0 * I * t * tp + 1.0;
  const cplx Ep = t * t + 2.0 * I * t * tp - tp * tp;
  const cplx Em = t * t - 2.0 * I * t * tp - tp * tp;
  const cplx C = std::exp(I * (-4.0 * scattering_phase(2 * phi, p) + 2 * pi * n) / static_cast<double>(p.N));
  const cplx den = Dm - C * Dp;
  if (std::abs(den) < 1e-13)
    throw Error(ErrorKind::DenominatorVanishes, "phi=" + std::to_string(phi));
  cplx X = (C * Ep - Em) / den;
  if (std::abs(X.imag()) >= 1e-10 * std::max(1.0, std::abs(X.real())))
    throw Error(ErrorKind::BranchInconsistent, "Im tan^2 x = " + std::to_string(X.imag()));
  return X;
}

// phi -> 0 limit of tan^2 x.
inline double tan2x_phi_limit(const ChainParams &p)
{
  const double coth = 1.0 / p.c;
  return (2 * coth * p.t * p.t - p.N * p.t) / (p.N * p.t - 2 * coth);
}

// N W: the label J1 = J2 implied by phi on the real branch with sign(x) = sign_x.
inline double counting_W(double phi, const ChainParams &p, int sign_x = 1)
{
  double X = tan2x_of_phi(phi, 0, p).real();
  if (X < 0)
    throw Error(ErrorKind::NegativeTanSquare, "phi=" + std::to_string(phi));
  double x = (sign_x >= 0 ? 1 : -1) * std::atan(std::sqrt(X));
  return p.N / (2 * pi) * (magnon_phase(x - phi, p) + magnon_phase(x + phi, p)) -
         gauss_floor((-4 * phi + pi) / (2 * pi));
}

// NaN where the real branch does not exist.
inline double counting_W_or_nan(double phi, const ChainParams &p, int sign_x = 1)
{
  try {
    return counting_W(phi, p, sign_x);
  } catch (const Error &) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

inline std::vector<double> phi_grid(int n = 2048) { return geomspace(1e-9, half_pi - 1e-9, n); }

// Real pair (x - phi, x + phi) with equal labels J.
inline RapidityPair solve_equal(HalfInt j, const ChainParams &p)
{
  p.require_even();
  if (j.twice < 0)
    return solve_equal(-j, p).negated();

  const double target = j.value();
  std::vector<double> g = phi_grid();
  std::vector<double> f(g.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    f[i] = counting_W_or_nan(g[i], p) - target;

  std::vector<RapidityPair> found;
  int total_it = 0;
  for (std::size_t i : sign_changes(f)) {
    auto res = bisect([&](double ph) { return counting_W_or_nan(ph, p) - target; }, g[i], g[i + 1], 1e-17);
    total_it += res.iterations;
    double phi = res.x;
    double X = tan2x_of_phi(phi, 0, p).real();
    if (X < 0)
      continue;
    double x = std::atan(std::sqrt(X));
    RapidityPair s;
    s.lambda1 = x - phi;
    s.lambda2 = x + phi;
    try {
      if (!(bae_defect(s, p) < 1e-2))
        continue; // a jump of the counting function, not a root
      polish_real_pair(s, j, j, p);
    } catch (const Error &) {
      continue;
    }
    if (!labels_match(s.lambda1.real(), s.lambda2.real(), j, j, p))
      continue;
    bool dup = false;
    for (auto &q : found)
      dup = dup || detail::same_state(q.lambda1.real(), q.lambda2.real(), s.lambda1.real(), s.lambda2.real());
    if (dup)
      continue;
    s.meta.solver = "counting";
    s.meta.phi = phi;
    s.meta.x = x;
    s.meta.n = 0;
    found.push_back(s);
  }
  if (found.empty())
    throw Error(ErrorKind::NoRealSolution, "no real pair for (" + j.str() + "," + j.str() + ")");
  if (found.size() > 1)
    throw Error(ErrorKind::AmbiguousRoot, std::to_string(found.size()) + " real pairs for (" + j.str() + "," + j.str() + ")");
  found[0].iterations = total_it;
  if (found[0].residual > 1e-10)
    throw Error(ErrorKind::ToleranceNotReached, "defect " + std::to_string(found[0].residual));
  return found[0];
}

} // namespace twomagnon

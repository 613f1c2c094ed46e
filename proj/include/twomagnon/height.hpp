#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "bisect.hpp"
#include "model.hpp"

namespace twomagnon
{

struct ContourBracket
{
  HalfInt j1;
  double k_left;
  double k_right;
  double lambda_star;
};

namespace detail
{
// Unwrapped lambda2 - lambda1 solving the first equation for label J1.
inline double raw_P(double mu1, HalfInt j1, const ChainParams &p)
{
  return -scattering_phase_inverse(p.N * magnon_phase(mu1, p) - pi * j1.value(), p);
}

inline double wrap_half_pi(double x)
{
  return x - pi * std::round(x / pi);
}
} // namespace detail

// mu2 in (-pi/2, pi/2) such that (mu1, mu2) satisfies the first logarithmic equation for J1.
inline double mu2_of_mu1(double mu1, HalfInt j1, const ChainParams &p)
{
  double m2 = detail::wrap_half_pi(mu1 + detail::raw_P(mu1, j1, p));
  if (half_pi - std::abs(m2) < 1e-13)
    throw Error(ErrorKind::AtDiscontinuity, "mu1=" + std::to_string(mu1) + " sits at a discontinuity");
  return m2;
}

inline double diff_P(double mu1, HalfInt j1, const ChainParams &p) { return mu2_of_mu1(mu1, j1, p) - mu1; }

// Closed form for mu2 through tan, kept as an independent check on mu2_of_mu1.
inline double mu2_closed_form(double mu1, HalfInt j1, const ChainParams &p)
{
  double T = std::tan(p.N * magnon_phase(mu1, p) - pi * j1.value());
  double tl = std::tan(mu1);
  return std::atan((tl - p.c * T) / (1.0 + tl * p.c * T));
}

// Abscissa where mu2 reaches pi/2, i.e. the left end of the J1 contour.
inline double discontinuity_K(HalfInt j1, const ChainParams &p)
{
  const int top = p.N - 1;
  if (j1.twice <= -top)
    return -half_pi;
  if (j1.twice > top)
    return half_pi;
  auto f = [&](double m) { return p.N * magnon_phase(m, p) - pi * j1.value() - scattering_phase(m - half_pi, p); };
  double lo = -half_pi + 1e-15, hi = half_pi - 1e-15;
  double flo = f(lo), fhi = f(hi);
  if ((flo > 0) == (fhi > 0))
    throw Error(ErrorKind::NoRootInInterval, "no discontinuity for J1=" + j1.str());
  return bisect(f, lo, hi, 1e-16).x;
}

// mu1 with P = -pi/2 inside the J1 contour; J1 + 1/2 for positive labels and,
// by the mirror symmetry, J1 - 1/2 for negative ones.
inline double lambda_star(HalfInt j1, const ChainParams &p)
{
  double s = j1.twice > 0 ? 0.5 : -0.5;
  return std::atan(p.t * std::tan(pi * (j1.value() + s) / p.N));
}

inline ContourBracket contour_bracket(HalfInt j1, const ChainParams &p)
{
  ContourBracket b{j1, discontinuity_K(j1, p), discontinuity_K(j1 + 1, p), lambda_star(j1, p)};
  return b;
}

// Height h(J1; mu1): the second label implied by mu1 on the J1 contour.
inline double height(double mu1, HalfInt j1, const ChainParams &p)
{
  double m2 = mu2_of_mu1(mu1, j1, p);
  return p.N / pi * magnon_phase(m2, p) - scattering_phase(m2 - mu1, p) / pi;
}

inline double height_or_nan(double mu1, HalfInt j1, const ChainParams &p)
{
  try {
    return height(mu1, j1, p);
  } catch (const Error &) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

// Open contour. The endpoint offset is far below the width because the
// height stays finite at K and roots can sit within 1e-9 of it at small zeta.
inline std::pair<double, double> contour_interior(const ContourBracket &b)
{
  double w = b.k_right - b.k_left;
  double eps = std::max(1e-15 * w, 4 * std::numeric_limits<double>::epsilon() * std::max(std::abs(b.k_left), std::abs(b.k_right)));
  return {b.k_left + eps, b.k_right - eps};
}

// Cosine grid on the contour plus log-spaced points towards both ends.
inline std::vector<double> contour_grid(const ContourBracket &b, int n)
{
  auto [lo, hi] = contour_interior(b);
  const double w = hi - lo;
  std::vector<double> g;
  g.reserve(n + 64);
  for (int i = 0; i < n; ++i) {
    double s = static_cast<double>(i) / (n - 1);
    g.push_back(lo + w * 0.5 * (1.0 - std::cos(pi * s)));
  }
  for (double e : geomspace(1e-15, 1e-4, 30)) {
    if (lo + e * w < hi)
      g.push_back(lo + e * w);
    if (hi - e * w > lo)
      g.push_back(hi - e * w);
  }
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

// Labels (N a(l_j) - Phi(l_j - l_k)) / pi of a real pair. Defined modulo N.
inline std::pair<double, double> log_labels(double l1, double l2, const ChainParams &p)
{
  return {(p.N * magnon_phase(l1, p) - scattering_phase(l1 - l2, p)) / pi,
          (p.N * magnon_phase(l2, p) - scattering_phase(l2 - l1, p)) / pi};
}

inline bool labels_match(double l1, double l2, HalfInt j1, HalfInt j2, const ChainParams &p)
{
  auto [a, b] = log_labels(l1, l2, p);
  auto off = [&](double v, HalfInt j) {
    double d = v - j.value();
    return std::abs(d - p.N * std::round(d / p.N));
  };
  return off(a, j1) < 1e-6 && off(b, j2) < 1e-6;
}

namespace detail
{
inline bool same_state(double a1, double a2, double b1, double b2)
{
  auto m = [](double x) {
    double r = std::fmod(x, pi);
    if (r < 0)
      r += pi;
    return r;
  };
  auto close = [&](double x, double y) {
    double d = std::abs(m(x) - m(y));
    return std::min(d, pi - d) < 1e-8;
  };
  return (close(a1, b1) && close(a2, b2)) || (close(a1, b2) && close(a2, b1));
}
} // namespace detail

// At most 5 Newton steps on the logarithmic equations
//   N a(l_j) - Phi(l_j - l_k) = pi J_j  (mod pi)
// with both rapidities as unknowns. Recovers the digits lost when lambda2 is
// formed as mu1 + P near mu1 = pi/2. Keeps the input unless the defect drops.
inline void polish_real_pair(RapidityPair &r, HalfInt j1, HalfInt j2, const ChainParams &p)
{
  auto da = [&](double l) {
    double s = std::sin(l), c = std::cos(l);
    return p.t / (s * s + p.t * p.t * c * c);
  };
  auto dphi = [&](double u) {
    double s = std::sin(u), c = std::cos(u);
    return p.c / (s * s + p.c * p.c * c * c);
  };
  auto wrap = [](double v) { return v - pi * std::round(v / pi); };
  double l1 = r.lambda1.real(), l2 = r.lambda2.real();
  double best = bae_defect(cplx(l1), cplx(l2), p);
  for (int it = 0; it < 5 && best > 1e-15; ++it) {
    double u = l1 - l2;
    double F1 = wrap(p.N * magnon_phase(l1, p) - scattering_phase(u, p) - pi * j1.value());
    double F2 = wrap(p.N * magnon_phase(l2, p) - scattering_phase(-u, p) - pi * j2.value());
    double g = dphi(u);
    double a11 = p.N * da(l1) - g, a12 = g, a21 = g, a22 = p.N * da(l2) - g;
    double det = a11 * a22 - a12 * a21;
    if (!(std::abs(det) > 0))
      break;
    double n1 = l1 - (a22 * F1 - a12 * F2) / det;
    double n2 = l2 - (a11 * F2 - a21 * F1) / det;
    double d;
    try {
      d = bae_defect(cplx(n1), cplx(n2), p);
    } catch (const Error &) {
      break;
    }
    if (!(d < best))
      break;
    l1 = n1;
    l2 = n2;
    best = d;
    ++r.iterations;
  }
  r.lambda1 = l1;
  r.lambda2 = l2;
  r.residual = best;
}

// Real solution with distinct labels; J1 fixes the contour and J2 the height.
// Labels with J1 + J2 < 0 are solved through their mirror.
inline RapidityPair solve_distinct(HalfInt j1, HalfInt j2, const ChainParams &p, int grid = 8193)
{
  p.require_even();
  if (j1 == j2 && std::abs(j1.twice) != p.N - 1)
    throw Error(ErrorKind::InvalidParams, "distinct labels required off the top contour");
  if (j1.twice + j2.twice < 0 || (j1.twice + j2.twice == 0 && j1.twice < 0))
    return solve_distinct(-j1, -j2, p, grid).negated();

  const int top = p.N - 1;
  RapidityPair r;
  r.meta.solver = "height";

  // h -> 1/2 as mu1 -> pi/2 on the top contour: the endpoint is itself a solution
  if (j1.twice == top && j2.twice == 1) {
    r.lambda1 = half_pi;
    r.lambda2 = 0.0;
    r.meta.mu1 = half_pi;
    r.residual = bae_defect(r, p);
    return r;
  }
  if (j1.twice == -top && j2.twice == -1)
    return solve_distinct(-j1, -j2, p, grid).negated();

  ContourBracket b = contour_bracket(j1, p);
  std::vector<double> g = contour_grid(b, grid);
  std::vector<double> f(g.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    f[i] = height_or_nan(g[i], j1, p) - j2.value();

  std::vector<RapidityPair> found;
  int total_it = 0;
  for (std::size_t i : sign_changes(f)) {
    auto res = bisect([&](double m) { return height_or_nan(m, j1, p) - j2.value(); }, g[i], g[i + 1], 1e-16);
    total_it += res.iterations;
    double m1 = res.x, m2;
    try {
      m2 = mu2_of_mu1(m1, j1, p);
    } catch (const Error &) {
      continue; // bisection closed in on a jump of h
    }
    if (std::abs(m1 - m2) < 1e-6)
      continue; // coinciding rapidities: not a state
    RapidityPair s;
    s.lambda1 = m1;
    s.lambda2 = m2;
    s.iterations = res.iterations;
    // jump crossings have O(1) defects; only near-roots are polished
    try {
      if (!(bae_defect(s, p) < 1e-2))
        continue;
      polish_real_pair(s, j1, j2, p);
    } catch (const Error &) {
      continue;
    }
    if (!labels_match(s.lambda1.real(), s.lambda2.real(), j1, j2, p))
      continue;
    bool dup = false;
    for (auto &q : found)
      dup = dup || detail::same_state(q.lambda1.real(), q.lambda2.real(), s.lambda1.real(), s.lambda2.real());
    if (dup)
      continue;
    s.meta.solver = "height";
    s.meta.mu1 = m1;
    found.push_back(s);
  }
  if (found.empty())
    throw Error(ErrorKind::NoRootInBracket, "height never reaches " + j2.str() + " on contour " + j1.str());
  if (found.size() > 1)
    throw Error(ErrorKind::AmbiguousRoot, std::to_string(found.size()) + " roots for (" + j1.str() + "," + j2.str() + ")");
  found[0].iterations = total_it;
  if (found[0].residual > 1e-10)
    throw Error(ErrorKind::ToleranceNotReached, "defect " + std::to_string(found[0].residual));
  return found[0];
}

} // namespace twomagnon

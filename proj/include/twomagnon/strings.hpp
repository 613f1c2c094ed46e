#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "bisect.hpp"
#include "model.hpp"

namespace twomagnon
{

enum class StringBranch
{
  Narrow, // -zeta/2 < dev < 0
  Wide,   // dev > 0
};

// w = tanh(zeta/2 + dev) / tanh(zeta/2)
inline double w_of_dev(double dev, const ChainParams &p) { return std::tanh(p.zeta / 2 + dev) / p.t; }

inline double dev_of_w(double w, const ChainParams &p)
{
  if (!(w > 0) || !(w * p.t < 1))
    throw Error(ErrorKind::InvalidParams, "w out of range");
  return std::atanh(w * p.t) - p.zeta / 2;
}

namespace detail
{
struct WParts
{
  double w;
  double omw; // 1 - w without cancellation
};

inline WParts w_parts(double dev, const ChainParams &p)
{
  double y = p.zeta / 2 + dev;
  return {std::tanh(y) / p.t, -std::sinh(dev) / (p.t * std::cosh(p.zeta / 2) * std::cosh(y))};
}
} // namespace detail

// tan^2 x of the two-string x +- i(zeta/2 + dev). The quadratic A X^2 + B X + C = 0 is
// written in terms of r - 1 (r the ratio of the two N-th roots) so that dev -> 0 and
// w -> 0 keep their digits.
inline double tan2x_of_dev(double dev, const ChainParams &p)
{
  if (dev == 0.0)
    throw Error(ErrorKind::DenominatorVanishes, "dev = 0");
  auto [w, omw] = detail::w_parts(dev, p);
  const double t2 = p.t * p.t;
  const double lr = (2.0 / p.N) * (std::log(std::abs(omw)) + std::log1p(-w * t2) - std::log1p(w) - std::log1p(w * t2));
  const double rm1 = std::expm1(lr);
  const double r = rm1 + 1.0;
  const double A = w * w * ((1 + w * t2) * (1 + w * t2) * rm1 + 4 * w * t2);
  const double B = ((1 - w * w * t2) * (1 - w * w * t2) / t2) * rm1 + 2 * w * (1 + w) * (1 + w * t2) * r +
                   2 * w * omw * (1 - w * t2);
  const double C = (1 + w) * (1 + w) * rm1 + 4 * w;
  const double disc = B * B - 4 * A * C;
  if (disc < 0)
    throw Error(ErrorKind::NegativeDiscriminant, "dev=" + std::to_string(dev));
  const double X = (B < 0) ? 2 * C / (-B + std::sqrt(disc)) : (-B - std::sqrt(disc)) / (2 * A);
  if (!(X >= 0) || !std::isfinite(X))
    throw Error(ErrorKind::NegativeTanSquare, "dev=" + std::to_string(dev));
  return X;
}

inline double tan2x_of_w(double w, const ChainParams &p) { return tan2x_of_dev(dev_of_w(w, p), p); }

// N Z1: the label J1 implied by the string deviation. x > 0 branch.
inline double counting_Z1_dev(double dev, const ChainParams &p)
{
  const double X = tan2x_of_dev(dev, p);
  auto [w, omw] = detail::w_parts(dev, p);
  const double t2 = p.t * p.t;
  const double tx = std::sqrt(X);
  const double den = 1 + X * w * w * t2;
  const double a = tx * (1 - w * w * t2) / (p.t * den);
  const double b = (1 + X) * w / den;
  const double omb = (omw - X * w * (1 - w * t2)) / den; // 1 - b
  const double q1 = (omb != 0.0) ? std::atan(a / omb) : std::copysign(half_pi, a);
  auto H = [](double v) { return v > 0 ? 1.0 : 0.0; };
  return p.N * ((q1 + std::atan(a / (1 + b))) / (2 * pi) + 0.5 * (H(-omb) + 2 * H(omb) * H(-a) - H(dev) / p.N));
}

// Z1 as a function of w (not multiplied by N).
inline double Z1(double w, const ChainParams &p) { return counting_Z1_dev(dev_of_w(w, p), p) / p.N; }

inline double counting_Z1_or_nan(double dev, const ChainParams &p)
{
  try {
    return counting_Z1_dev(dev, p);
  } catch (const Error &) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

// Deviations sampled on a branch, ordered by increasing |dev|.
// Below 10^(-7N) the string is numerically indistinguishable from its collapse.
inline std::vector<double> dev_grid(StringBranch br, const ChainParams &p, int n = 4096)
{
  double lo = std::max(1e-300, std::pow(10.0, -7.0 * p.N));
  double hi = br == StringBranch::Narrow ? p.zeta / 2 * (1 - 1e-12) : 40.0;
  auto g = geomspace(lo, hi, n);
  if (br == StringBranch::Narrow)
    for (auto &v : g)
      v = -v;
  return g;
}

// Two-string with N Z1 = J on the given branch, x > 0 for J > 0.
inline RapidityPair solve_string(HalfInt j, StringBranch br, const ChainParams &p)
{
  p.require_even();
  if (j.twice < 0)
    return solve_string(-j, br, p).negated();
  const double target = j.value();
  const double sgn = br == StringBranch::Narrow ? -1.0 : 1.0;
  std::vector<double> g = dev_grid(br, p);
  std::vector<double> f(g.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    f[i] = counting_Z1_or_nan(g[i], p) - target;

  std::vector<RapidityPair> found;
  int total_it = 0;
  for (std::size_t i : sign_changes(f)) {
    // bisect in log|dev|
    auto fn = [&](double u) { return counting_Z1_or_nan(sgn * std::exp(u), p) - target; };
    auto res = bisect(fn, std::log(std::abs(g[i])), std::log(std::abs(g[i + 1])), 1e-16);
    total_it += res.iterations;
    double dev = sgn * std::exp(res.x);
    double X;
    try {
      X = tan2x_of_dev(dev, p);
    } catch (const Error &) {
      continue;
    }
    double x = std::atan(std::sqrt(X));
    double d = string_defect(x, dev, p);
    if (!(d < 1e-8))
      continue;
    RapidityPair s = make_string(x, dev, p);
    s.residual = d;
    s.meta.solver = br == StringBranch::Narrow ? "string-narrow" : "string-wide";
    s.meta.w = detail::w_parts(dev, p).w;
    found.push_back(s);
  }
  const char *bn = br == StringBranch::Narrow ? "narrow" : "wide";
  if (found.empty())
    throw Error(ErrorKind::NoRootOnBranch, std::string("no ") + bn + " string with label " + j.str());
  if (found.size() > 1)
    throw Error(ErrorKind::AmbiguousRoot, std::to_string(found.size()) + " " + bn + " strings with label " + j.str());
  found[0].iterations = total_it;
  return found[0];
}

inline RapidityPair singular_solution(const ChainParams &p)
{
  RapidityPair r;
  r.lambda1 = cplx(0.0, p.zeta / 2);
  r.lambda2 = cplx(0.0, -p.zeta / 2);
  r.residual = singular_defect(r.lambda1, r.lambda2, p);
  r.meta.solver = "singular";
  r.meta.x = 0.0;
  r.meta.dev = 0.0;
  return r;
}

// Zero-momentum bound pair pi/2 +- i y with y > zeta/2. Its centre sits at tan x = inf,
// outside the reach of the tan^2 x parametrisation, so it is solved directly from
// N log(cosh(y+zeta/2)/cosh(y-zeta/2)) = log(sinh(2y+zeta)/sinh(2y-zeta)).
inline RapidityPair zero_momentum_pair(const ChainParams &p)
{
  p.require_even();
  const double h = p.zeta / 2;
  auto g = [&](double dev) {
    double y = h + dev;
    // log(cosh(y+h)/cosh(y-h)) and log(sinh(2y+zeta)/sinh(2y-zeta)) with 2y - zeta = 2 dev
    double lhs = p.N * (std::log(std::cosh(y + h)) - std::log(std::cosh(dev)));
    double rhs = std::log(std::sinh(2 * y + p.zeta)) - std::log(std::sinh(2 * dev));
    return lhs - rhs;
  };
  // g -> -inf as dev -> 0+, g -> (N-2) zeta as dev -> inf
  auto grid = geomspace(1e-300, 40.0, 4096);
  std::vector<double> f(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    f[i] = g(grid[i]);
  auto sc = sign_changes(f);
  if (sc.size() != 1)
    throw Error(ErrorKind::NoRootOnBranch, "zero-momentum pair: " + std::to_string(sc.size()) + " roots");
  auto res = bisect([&](double u) { return g(std::exp(u)); }, std::log(grid[sc[0]]), std::log(grid[sc[0] + 1]), 1e-16);
  double dev = std::exp(res.x);
  RapidityPair r = make_string(half_pi, dev, p);
  r.residual = string_defect(half_pi, dev, p);
  r.iterations = res.iterations;
  r.meta.solver = "zero-momentum";
  return r;
}

} // namespace twomagnon

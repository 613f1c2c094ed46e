#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "model.hpp"

namespace twomagnon
{

struct RegimeReport
{
  bool stable = false;
  double F = std::numeric_limits<double>::infinity();
  HalfInt K;
  int m_collapsed = 0;
  bool extra_two_string = false;
};

// (N/pi) atan(sqrt((N-(1+t^2))/(1-(N-1)t^2))): the phi->0 value of the equal-label
// counting function. Infinite when 1-(N-1)t^2 <= 0 (stable regime).
inline double threshold_F(const ChainParams &p)
{
  const double t2 = p.t * p.t;
  const double den = 1.0 - (p.N - 1) * t2;
  if (den <= 0.0)
    return std::numeric_limits<double>::infinity();
  return p.N / pi * std::atan(std::sqrt((p.N - (1.0 + t2)) / den));
}

// tanh^2(zeta/2) - 1/(N-1); negative in the unstable regime.
inline double stability_margin(const ChainParams &p) { return p.t * p.t - 1.0 / (p.N - 1); }

namespace detail
{
// Comparison values (N-1)/2 - k, k = 0,1,..., that F is tested against.
inline void check_boundary(double F, int N)
{
  if (!std::isfinite(F))
    return;
  for (int k = 0; 2 * k < N; ++k) {
    double v = (N - 1) / 2.0 - k;
    if (std::abs(F - v) <= 1e-12 * std::max(1.0, v))
      throw Error(ErrorKind::BoundaryDegenerate, "F=" + std::to_string(F) + " sits on " + std::to_string(v));
  }
}
} // namespace detail

inline bool has_extra_two_string(const ChainParams &p)
{
  double F = threshold_F(p);
  detail::check_boundary(F, p.N);
  return F > (p.N - 1) / 2.0;
}

// Number m >= 1 with (N-(3+2m))/2 < F < (N-(1+2m))/2, else 0.
inline int collapse_count(const ChainParams &p)
{
  double F = threshold_F(p);
  detail::check_boundary(F, p.N);
  int m = 0;
  for (int k = 1; 2 * k < p.N; ++k)
    if (F < (p.N - 1) / 2.0 - k)
      m = k;
  return m;
}

inline RegimeReport classify_regime(const ChainParams &p)
{
  RegimeReport r;
  r.F = threshold_F(p);
  r.stable = !std::isfinite(r.F);
  r.extra_two_string = has_extra_two_string(p);
  r.m_collapsed = collapse_count(p);
  // largest half-odd integer below F, capped at the top label
  int cap = (p.N % 2 == 0) ? p.N - 1 : p.N - 2;
  int tw = cap;
  if (!r.stable)
    tw = std::min(cap, 2 * static_cast<int>(std::floor(r.F - 0.5)) + 1);
  r.K = HalfInt(tw);
  return r;
}

// Regime label from the direct inequalities on tanh^2(zeta/2):
// extra when t^2((N-1)-T0^2) > 1-(N-1)T0^2 with T0 = tan(pi/2N);
// k-th collapse when t^2((N-1)-Tk^2) < 1-(N-1)Tk^2 with Tk = tan((2k+1)pi/2N).
inline std::string regime_label_from_inequalities(int N, double t2)
{
  auto lhs = [&](double T) { return t2 * ((N - 1) - T * T); };
  auto rhs = [&](double T) { return 1.0 - (N - 1) * T * T; };
  const double T0 = std::tan(pi / (2.0 * N));
  if (lhs(T0) > rhs(T0))
    return "extra";
  int m = 0;
  for (int k = 1; 2 * k + 1 < N; ++k) {
    double T = std::tan((2 * k + 1) * pi / (2.0 * N));
    if (lhs(T) < rhs(T))
      m = k;
  }
  return m == 0 ? "none" : "m" + std::to_string(m);
}

inline std::string regime_label(const RegimeReport &r)
{
  if (r.extra_two_string)
    return "extra";
  return r.m_collapsed == 0 ? "none" : "m" + std::to_string(r.m_collapsed);
}

} // namespace twomagnon

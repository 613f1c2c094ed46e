#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

namespace twomagnon
{

struct BisectResult
{
  double x;
  double width;
  int iterations;
};

// Plain bisection on [lo, hi] assuming f(lo), f(hi) differ in sign.
// Stops once the bracket is narrower than xtol or stops shrinking in floating point.
template <class F>
BisectResult bisect(F &&f, double lo, double hi, double xtol = 1e-15, int max_iter = 200)
{
  double flo = f(lo);
  int it = 0;
  for (; it < max_iter; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi || hi - lo <= xtol)
      break;
    double fm = f(mid);
    if (fm == 0.0) {
      lo = hi = mid;
      break;
    }
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return {0.5 * (lo + hi), hi - lo, it};
}

// Indices i with a sign change between samples i and i+1. NaN samples break brackets.
inline std::vector<std::size_t> sign_changes(const std::vector<double> &v)
{
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    if (std::isnan(v[i]) || std::isnan(v[i + 1]))
      continue;
    if ((v[i] > 0) != (v[i + 1] > 0) || v[i] == 0.0)
      out.push_back(i);
  }
  return out;
}

inline std::vector<double> geomspace(double a, double b, int n)
{
  std::vector<double> out(n);
  double la = std::log(a), lb = std::log(b);
  for (int i = 0; i < n; ++i)
    out[i] = std::exp(la + (lb - la) * i / (n - 1));
  out.front() = a;
  out.back() = b;
  return out;
}

} // namespace twomagnon

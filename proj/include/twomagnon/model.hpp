#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace twomagnon
{
using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double half_pi = std::numbers::pi / 2;

enum class ErrorKind
{
  InvalidParams,
  PoleEncountered,
  BoundaryDegenerate,
  AtDiscontinuity,
  NoRootInInterval,
  NoRootInBracket,
  AmbiguousRoot,
  ToleranceNotReached,
  DenominatorVanishes,
  BranchInconsistent,
  NegativeTanSquare,
  NegativeDiscriminant,
  NoRealSolution,
  NoRootOnBranch,
  DimensionOverflow,
  ZeroVector,
  IncompleteSpectrum,
  NotInFamily,
};

inline const char *to_string(ErrorKind k)
{
  switch (k) {
  case ErrorKind::InvalidParams: return "InvalidParams";
  case ErrorKind::PoleEncountered: return "PoleEncountered";
  case ErrorKind::BoundaryDegenerate: return "BoundaryDegenerate";
  case ErrorKind::AtDiscontinuity: return "AtDiscontinuity";
  case ErrorKind::NoRootInInterval: return "NoRootInInterval";
  case ErrorKind::NoRootInBracket: return "NoRootInBracket";
  case ErrorKind::AmbiguousRoot: return "AmbiguousRoot";
  case ErrorKind::ToleranceNotReached: return "ToleranceNotReached";
  case ErrorKind::DenominatorVanishes: return "DenominatorVanishes";
  case ErrorKind::BranchInconsistent: return "BranchInconsistent";
  case ErrorKind::NegativeTanSquare: return "NegativeTanSquare";
  case ErrorKind::NegativeDiscriminant: return "NegativeDiscriminant";
  case ErrorKind::NoRealSolution: return "NoRealSolution";
  case ErrorKind::NoRootOnBranch: return "NoRootOnBranch";
  case ErrorKind::DimensionOverflow: return "DimensionOverflow";
  case ErrorKind::ZeroVector: return "ZeroVector";
  case ErrorKind::IncompleteSpectrum: return "IncompleteSpectrum";
  case ErrorKind::NotInFamily: return "NotInFamily";
  }
  return "Unknown";
}

class Error : public std::runtime_error
{
public:
  Error(ErrorKind k, const std::string &msg)
      : std::runtime_error(std::string(to_string(k)) + ": " + msg), kind_(k)
  {}
  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

// Chain of N sites at anisotropy Delta = cosh(zeta) > 1.
// Odd N is accepted here so the regime formulas can be evaluated for any
// size; enumeration and the solvers call require_even().
struct ChainParams
{
  int N;
  double zeta;
  double delta; // cosh(zeta)
  double t;     // tanh(zeta/2)
  double c;     // tanh(zeta)

  ChainParams(int n, double z) : N(n), zeta(z)
  {
    if (n < 3)
      throw Error(ErrorKind::InvalidParams, "N must be >= 3");
    if (!(z > 0.0) || !std::isfinite(z))
      throw Error(ErrorKind::InvalidParams, "zeta must be a finite positive number");
    delta = std::cosh(z);
    t = std::tanh(z / 2);
    c = std::tanh(z);
  }

  void require_even() const
  {
    if (N % 2 != 0 || N < 4)
      throw Error(ErrorKind::InvalidParams, "even N >= 4 required, got N=" + std::to_string(N));
  }
};

// Half-odd integer stored as twice its value.
struct HalfInt
{
  int twice = 1;

  constexpr HalfInt() = default;
  constexpr explicit HalfInt(int tw) : twice(tw) {}

  static constexpr HalfInt from_twice(int tw) { return HalfInt(tw); }

  constexpr double value() const { return twice / 2.0; }
  constexpr HalfInt operator-() const { return HalfInt(-twice); }
  constexpr HalfInt operator+(int k) const { return HalfInt(twice + 2 * k); }
  constexpr HalfInt operator-(int k) const { return HalfInt(twice - 2 * k); }
  constexpr auto operator<=>(const HalfInt &) const = default;

  std::string str() const
  {
    if (twice % 2 == 0)
      return std::to_string(twice / 2);
    return std::to_string(twice) + "/2";
  }
};

// Parses "7/2", "-7/2", "3.5" or "-0.5".
inline HalfInt parse_half_int(const std::string &s)
{
  auto bad = [&] { return Error(ErrorKind::InvalidParams, "not a half-odd integer: '" + s + "'"); };
  if (s.empty())
    throw bad();
  std::size_t pos = 0;
  int twice = 0;
  auto slash = s.find('/');
  try {
    if (slash != std::string::npos) {
      if (s.substr(slash + 1) != "2")
        throw bad();
      twice = std::stoi(s.substr(0, slash), &pos);
      if (pos != slash)
        throw bad();
    } else {
      double v = std::stod(s, &pos);
      if (pos != s.size())
        throw bad();
      double tw = 2 * v;
      if (tw != std::round(tw))
        throw bad();
      twice = static_cast<int>(tw);
    }
  } catch (const std::logic_error &) {
    throw bad();
  }
  if (twice % 2 == 0)
    throw bad();
  return HalfInt(twice);
}

enum class SolutionClass
{
  StandardReal,
  InfiniteFamilyReal,
  EqualQNReal,
  NarrowPairComplex,
  WidePairComplex,
  ExtraTwoString,
  Singular,
};

inline const char *to_string(SolutionClass c)
{
  switch (c) {
  case SolutionClass::StandardReal: return "StandardReal";
  case SolutionClass::InfiniteFamilyReal: return "InfiniteFamilyReal";
  case SolutionClass::EqualQNReal: return "EqualQNReal";
  case SolutionClass::NarrowPairComplex: return "NarrowPairComplex";
  case SolutionClass::WidePairComplex: return "WidePairComplex";
  case SolutionClass::ExtraTwoString: return "ExtraTwoString";
  case SolutionClass::Singular: return "Singular";
  }
  return "Unknown";
}

inline bool is_complex_class(SolutionClass c)
{
  return c == SolutionClass::NarrowPairComplex || c == SolutionClass::WidePairComplex ||
         c == SolutionClass::ExtraTwoString || c == SolutionClass::Singular;
}

struct QuantumPair
{
  HalfInt j1;
  HalfInt j2;
  SolutionClass cls = SolutionClass::StandardReal;

  auto operator<=>(const QuantumPair &) const = default;

  // wide pairs keep the (J, J+1) order
  QuantumPair mirrored() const
  {
    if (cls == SolutionClass::WidePairComplex)
      return {-j2, -j1, cls};
    return {-j1, -j2, cls};
  }
};

// Solver bookkeeping. Fields unused by a solver stay NaN / 0.
struct BranchMeta
{
  std::string solver;
  double mu1 = std::numeric_limits<double>::quiet_NaN();
  double phi = std::numeric_limits<double>::quiet_NaN();
  double x = std::numeric_limits<double>::quiet_NaN();
  double dev = std::numeric_limits<double>::quiet_NaN(); // string deviation from +-i zeta/2
  double w = std::numeric_limits<double>::quiet_NaN();
  int n = 0;
  bool mirrored = false;
};

struct RapidityPair
{
  cplx lambda1;
  cplx lambda2;
  double residual = 0.0;
  int iterations = 0;
  BranchMeta meta;

  bool is_string() const { return std::isfinite(meta.x) && std::isfinite(meta.dev); }

  RapidityPair negated() const
  {
    RapidityPair r = *this;
    r.lambda1 = -lambda1;
    r.lambda2 = -lambda2;
    if (std::isfinite(r.meta.x))
      r.meta.x = -r.meta.x;
    if (std::isfinite(r.meta.mu1))
      r.meta.mu1 = -r.meta.mu1;
    r.meta.mirrored = !meta.mirrored;
    return r;
  }
};

inline int gauss_floor(double x) { return static_cast<int>(std::floor(x)); }

// One-magnon phase a(lambda) = atan(tan(lambda)/t), principal branch.
inline double magnon_phase(double lambda, const ChainParams &p)
{
  return std::atan(std::tan(lambda) / p.t);
}

// Two-body phase made continuous: atan(tan u / tanh zeta) + pi*[ (2u+pi)/2pi ].
inline double scattering_phase(double u, const ChainParams &p)
{
  return std::atan(std::tan(u) / p.c) + pi * gauss_floor((2 * u + pi) / (2 * pi));
}

// Inverse of scattering_phase (it is a strictly increasing bijection of the reals).
inline double scattering_phase_inverse(double v, const ChainParams &p)
{
  double k = std::round(v / pi);
  double r = v - k * pi;
  return std::atan(p.c * std::tan(r)) + k * pi;
}

// e^{ip} = sin(lambda + i zeta/2) / sin(lambda - i zeta/2)
inline cplx magnon_z(cplx lambda, const ChainParams &p)
{
  const cplx h(0.0, p.zeta / 2);
  return std::sin(lambda + h) / std::sin(lambda - h);
}

// Single-magnon energy cos p - Delta.
inline cplx magnon_energy(cplx lambda, const ChainParams &p)
{
  return -std::sinh(p.zeta) * std::sinh(p.zeta) / (p.delta - std::cos(2.0 * lambda));
}

namespace detail
{
inline double scaled_gap(cplx lhs, cplx rhs) { return std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)); }
} // namespace detail

// Product-form BAE defect: max_j |z_j^N - S_jk| / max(1,|S_jk|).
// For real rapidities |S_jk| = 1 and this is the plain absolute defect.
inline double bae_defect(cplx l1, cplx l2, const ChainParams &p)
{
  const cplx ih(0.0, p.zeta / 2);
  const cplx iz(0.0, p.zeta);
  double out = 0.0;
  const cplx ls[2] = {l1, l2};
  for (int j = 0; j < 2; ++j) {
    cplx a = ls[j], b = ls[1 - j];
    cplx den1 = std::sin(a - ih);
    cplx den2 = std::sin(a - b - iz);
    if (std::abs(den1) < 1e-14 || std::abs(den2) < 1e-14)
      throw Error(ErrorKind::PoleEncountered, "BAE denominator vanishes");
    cplx lhs = std::pow(std::sin(a + ih) / den1, p.N);
    cplx rhs = std::sin(a - b + iz) / den2;
    out = std::max(out, detail::scaled_gap(lhs, rhs));
  }
  return out;
}

inline double bae_defect(const RapidityPair &r, const ChainParams &p)
{
  return bae_defect(r.lambda1, r.lambda2, p);
}

// Cross-multiplied BAE, free of poles; zero at the exact singular pair.
inline double singular_defect(cplx l1, cplx l2, const ChainParams &p)
{
  const cplx ih(0.0, p.zeta / 2);
  const cplx iz(0.0, p.zeta);
  double out = 0.0;
  const cplx ls[2] = {l1, l2};
  for (int j = 0; j < 2; ++j) {
    cplx a = ls[j], b = ls[1 - j];
    cplx lhs = std::pow(std::sin(a + ih), p.N) * std::sin(a - b - iz);
    cplx rhs = std::pow(std::sin(a - ih), p.N) * std::sin(a - b + iz);
    out = std::max(out, std::abs(lhs - rhs));
  }
  return out;
}

// Conjugate pair x +- i(zeta/2 + dev) evaluated from (x, dev) directly so a
// tiny deviation keeps its relative precision.
inline double string_defect(double x, double dev, const ChainParams &p)
{
  cplx z1 = std::sin(cplx(x, p.zeta + dev)) / std::sin(cplx(x, dev));
  double rhs = std::sinh(2 * p.zeta + 2 * dev) / std::sinh(2 * dev);
  cplx lhs = std::pow(z1, p.N);
  // second equation is the conjugate inverse of the first
  cplx lhs2 = 1.0 / std::conj(lhs);
  return std::max(detail::scaled_gap(lhs, rhs), detail::scaled_gap(lhs2, 1.0 / rhs));
}

inline RapidityPair make_string(double x, double dev, const ChainParams &p)
{
  RapidityPair r;
  r.lambda1 = cplx(x, p.zeta / 2 + dev);
  r.lambda2 = std::conj(r.lambda1);
  r.meta.x = x;
  r.meta.dev = dev;
  return r;
}

} // namespace twomagnon

#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "enumerate.hpp"
#include "solve.hpp"

namespace twomagnon
{

// Two down spins at sites x1 < x2 (0-based), periodic chain.
struct SectorHamiltonian
{
  int N = 0;
  double delta = 0.0;
  std::vector<std::pair<int, int>> basis;
  Eigen::MatrixXd matrix;

  std::size_t dimension() const { return basis.size(); }

  std::size_t index(int a, int b) const
  {
    if (a > b)
      std::swap(a, b);
    // row a holds N-1-a entries
    return static_cast<std::size_t>(a) * (2 * N - a - 1) / 2 + (b - a - 1);
  }
};

inline constexpr std::size_t default_max_dim = 1000000;

inline void check_dimension(int N, std::size_t max_dim)
{
  std::size_t dim = expected_count(N);
  if (dim > max_dim)
    throw Error(ErrorKind::DimensionOverflow,
                "sector dimension " + std::to_string(dim) + " exceeds cap " + std::to_string(max_dim));
}

// H = 1/4 sum_j [sx sx + sy sy + Delta (sz sz - 1)]: each anti-aligned bond contributes
// -Delta/2 on the diagonal, and flipping it costs a hopping amplitude 1/2.
inline SectorHamiltonian build_hamiltonian(const ChainParams &p, std::size_t max_dim = default_max_dim)
{
  check_dimension(p.N, max_dim);
  SectorHamiltonian h;
  h.N = p.N;
  h.delta = p.delta;
  for (int a = 0; a < p.N; ++a)
    for (int b = a + 1; b < p.N; ++b)
      h.basis.emplace_back(a, b);
  const auto dim = static_cast<Eigen::Index>(h.basis.size());
  h.matrix = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    auto [a, b] = h.basis[i];
    for (int j = 0; j < p.N; ++j) {
      int k = (j + 1) % p.N;
      bool dj = (j == a || j == b), dk = (k == a || k == b);
      if (dj == dk)
        continue;
      h.matrix(i, i) -= p.delta / 2;
      int from = dj ? j : k, to = dj ? k : j;
      int na = (a == from) ? to : a;
      int nb = (b == from) ? to : b;
      h.matrix(static_cast<Eigen::Index>(h.index(na, nb)), i) += 0.5;
    }
  }
  return h;
}

inline Eigen::VectorXd ed_spectrum(const SectorHamiltonian &h)
{
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.matrix, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

struct BetheVector
{
  Eigen::VectorXcd amplitudes;
  double norm = 0.0;
};

inline bool is_singular_pair(const RapidityPair &r, const ChainParams &p)
{
  const cplx ih(0.0, p.zeta / 2);
  return std::abs(std::sin(r.lambda1 - ih)) < 1e-14 || std::abs(std::sin(r.lambda2 - ih)) < 1e-14 ||
         std::abs(std::sin(r.lambda1 + ih)) < 1e-14 || std::abs(std::sin(r.lambda2 + ih)) < 1e-14;
}

// Regularisation shift for the singular pair; the vector error grows like eps/zeta.
inline double singular_eps(const ChainParams &p) { return 1e-6 * std::min(1.0, p.zeta); }

// psi(x1<x2) = A12 z1^x1 z2^x2 + A21 z1^x2 z2^x1 on sites 1..N, with
// A12 = sin(u + i zeta), A21 = sin(u - i zeta), u = lambda1 - lambda2
// (proportional to 1 + z1 z2 - 2 Delta z1 and -(1 + z1 z2 - 2 Delta z2)).
// For a string u - i zeta = 2i dev is taken from the stored deviation, since the
// amplitude vanishes as the string collapses and would otherwise be pure rounding.
// The singular pair is regularised to (i zeta/2 + eps, -i zeta/2 + eps) and built from
// the periodicity amplitudes A12 = 1, A21 = z1^-N instead, which stay finite as eps -> 0.
inline BetheVector bethe_vector(const RapidityPair &r, const ChainParams &p)
{
  cplx l1 = r.lambda1, l2 = r.lambda2;
  bool singular = is_singular_pair(r, p);
  if (singular) {
    l1 = cplx(singular_eps(p), p.zeta / 2);
    l2 = cplx(singular_eps(p), -p.zeta / 2);
  }
  const cplx z1 = magnon_z(l1, p), z2 = magnon_z(l2, p);
  cplx A12, A21;
  if (singular) {
    A12 = 1.0;
    A21 = 1.0; // times z1^-N, folded into the exponent below
  } else if (r.is_string()) {
    double s = r.lambda1.imag() >= 0 ? 1.0 : -1.0; // lambda1 above or below the axis
    A12 = cplx(0.0, s * std::sinh(2 * p.zeta + 2 * r.meta.dev));
    A21 = cplx(0.0, s * std::sinh(2 * r.meta.dev));
    if (s < 0)
      std::swap(A12, A21);
  } else {
    const cplx u = l1 - l2, iz(0.0, p.zeta);
    A12 = std::sin(u + iz);
    A21 = std::sin(u - iz);
  }
  BetheVector v;
  const int N = p.N;
  v.amplitudes.resize(static_cast<Eigen::Index>(expected_count(N)));
  Eigen::Index i = 0;
  // z1^a z2^b = (z1 z2)^a z2^(b-a); |z1 z2| stays near 1 while z1, z2 alone may not
  const int shift = singular ? N : 0;
  const cplx zz = z1 * z2;
  for (int a = 1; a <= N; ++a) {
    const cplx za = std::pow(zz, a);
    for (int b = a + 1; b <= N; ++b)
      v.amplitudes(i++) = za * (A12 * std::pow(z2, b - a) + A21 * std::pow(z1, b - a - shift));
  }
  v.norm = v.amplitudes.norm();
  if (!(v.norm > 1e-10) || !std::isfinite(v.norm))
    throw Error(ErrorKind::ZeroVector, "Bethe vector norm " + std::to_string(v.norm));
  v.amplitudes /= v.norm;
  return v;
}

// Bethe energy relative to the ferromagnetic state. The singular pair is taken in
// its regularised limit, where the two divergent magnon energies sum to -cosh zeta.
inline double bethe_energy(const RapidityPair &r, const ChainParams &p)
{
  if (is_singular_pair(r, p))
    return -p.delta;
  return (magnon_energy(r.lambda1, p) + magnon_energy(r.lambda2, p)).real();
}

struct Rayleigh
{
  cplx energy;
  double residual;
};

inline Rayleigh rayleigh(const SectorHamiltonian &h, const BetheVector &v)
{
  Eigen::VectorXcd Hv = h.matrix.cast<cplx>() * v.amplitudes;
  cplx nn = v.amplitudes.squaredNorm();
  cplx E = v.amplitudes.dot(Hv) / nn;
  double res = (Hv - E * v.amplitudes).norm() / std::sqrt(nn.real());
  return {E, res};
}

// One Bethe state taking part in the spectrum comparison.
struct StateRecord
{
  std::optional<QuantumPair> label; // empty for the supplementary zero-momentum pair
  RapidityPair solution;
  bool singular = false;
  double energy = 0.0;
  double energy_im = 0.0;
  double residual = 0.0;
  long matched = -1; // index into the ED spectrum
  double energy_error = 0.0; // relative
  std::optional<long> duplicate_of;
};

struct SpectrumMatch
{
  int N = 0;
  double zeta = 0.0;
  std::size_t dimension = 0;
  std::vector<StateRecord> states;
  std::vector<SolveOutcome> failures;
  std::vector<double> eigenvalues;
  std::vector<std::size_t> unmatched_eigenvalues;
  std::vector<std::string> conflicts;
  std::vector<std::string> ambiguities; // levels closer than the matching tolerance
  std::size_t matched = 0;
  std::size_t duplicates = 0;
  std::size_t supplementary = 0;
  double max_energy_error = 0.0;
  double max_residual = 0.0;
  double singular_residual = 0.0;
  double min_independence = 1.0; // smallest singular value over degenerate ED clusters
  bool complete = false;
};

inline constexpr double energy_tol = 1e-6;
inline constexpr double residual_tol = 1e-8;
inline constexpr double singular_tol = 1e-4;

namespace detail
{
inline bool same_rapidities(const RapidityPair &a, const RapidityPair &b)
{
  auto m = [](cplx z) {
    double r = std::fmod(z.real(), pi);
    if (r < 0)
      r += pi;
    return cplx(r, z.imag());
  };
  auto close = [&](cplx x, cplx y) {
    cplx d = m(x) - m(y);
    double dr = std::abs(d.real());
    dr = std::min(dr, pi - dr);
    return dr < 1e-8 && std::abs(d.imag()) < 1e-8;
  };
  return (close(a.lambda1, b.lambda1) && close(a.lambda2, b.lambda2)) ||
         (close(a.lambda1, b.lambda2) && close(a.lambda2, b.lambda1));
}

inline double rel_gap(double e, double ref) { return std::abs(e - ref) / std::max(1.0, std::abs(ref)); }
} // namespace detail

// Solves every labelled pair, builds the Bethe vectors and matches their Rayleigh
// energies against the full ED spectrum. Label pairs that land on an already
// found state are recorded as duplicates; the zero-momentum pair is added as a
// supplementary state since no label pair reaches it.
inline SpectrumMatch completeness_check(const ChainParams &p, std::size_t max_dim = default_max_dim, int jobs = 1)
{
  p.require_even();
  check_dimension(p.N, max_dim);
  SpectrumMatch sm;
  sm.N = p.N;
  sm.zeta = p.zeta;
  const SectorHamiltonian H = build_hamiltonian(p, max_dim);
  sm.dimension = H.dimension();
  Eigen::VectorXd ev = ed_spectrum(H);
  sm.eigenvalues.assign(ev.data(), ev.data() + ev.size());

  auto outcomes = solve_many(enumerate_all(p), p, jobs);
  std::vector<BetheVector> vecs;
  auto add_state = [&](std::optional<QuantumPair> label, const RapidityPair &r) {
    StateRecord s;
    s.label = label;
    s.solution = r;
    s.singular = is_singular_pair(r, p);
    for (std::size_t k = 0; k < sm.states.size(); ++k)
      if (!s.singular && !sm.states[k].singular && detail::same_rapidities(sm.states[k].solution, r)) {
        s.duplicate_of = static_cast<long>(k);
        break;
      }
    BetheVector v = bethe_vector(r, p);
    Rayleigh ry = rayleigh(H, v);
    s.energy = ry.energy.real();
    s.energy_im = ry.energy.imag();
    s.residual = ry.residual;
    sm.states.push_back(s);
    vecs.push_back(std::move(v));
  };
  for (auto &o : outcomes) {
    if (!o.solution) {
      sm.failures.push_back(o);
      continue;
    }
    try {
      add_state(o.pair, *o.solution);
    } catch (const Error &e) {
      o.error = e.kind();
      o.message = e.what();
      sm.failures.push_back(o);
    }
  }
  try {
    add_state(std::nullopt, zero_momentum_pair(p));
    ++sm.supplementary;
  } catch (const Error &e) {
    sm.conflicts.push_back(std::string("zero-momentum pair: ") + e.what());
  }

  // greedy nearest match, lowest Bethe energy first
  std::vector<std::size_t> order;
  for (std::size_t k = 0; k < sm.states.size(); ++k)
    if (!sm.states[k].duplicate_of)
      order.push_back(k);
    else
      ++sm.duplicates;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return sm.states[a].energy < sm.states[b].energy; });
  std::vector<bool> used(sm.eigenvalues.size(), false);
  for (auto k : order) {
    auto &s = sm.states[k];
    long best = -1;
    double bd = 0.0;
    for (std::size_t e = 0; e < sm.eigenvalues.size(); ++e) {
      if (used[e])
        continue;
      double d = detail::rel_gap(s.energy, sm.eigenvalues[e]);
      if (best < 0 || d < bd) {
        best = static_cast<long>(e);
        bd = d;
      }
    }
    double tol = s.singular ? singular_tol : energy_tol;
    if (best >= 0 && bd <= tol) {
      used[best] = true;
      s.matched = best;
      s.energy_error = bd;
      ++sm.matched;
      sm.max_energy_error = std::max(sm.max_energy_error, bd);
    } else {
      sm.conflicts.push_back("state E=" + std::to_string(s.energy) + " has no free eigenvalue within tolerance");
    }
    if (s.singular)
      sm.singular_residual = std::max(sm.singular_residual, s.residual);
    else
      sm.max_residual = std::max(sm.max_residual, s.residual);
    if (std::abs(s.energy_im) > 1e-10 * std::max(1.0, std::abs(s.energy)))
      sm.conflicts.push_back("state E=" + std::to_string(s.energy) + " has imaginary part " + std::to_string(s.energy_im));
  }
  for (std::size_t e = 0; e < used.size(); ++e)
    if (!used[e])
      sm.unmatched_eigenvalues.push_back(e);

  // audit: within each ED cluster the number of claiming states equals the
  // cluster size and their vectors are linearly independent
  std::size_t a = 0;
  while (a < sm.eigenvalues.size()) {
    std::size_t b = a + 1;
    while (b < sm.eigenvalues.size() && detail::rel_gap(sm.eigenvalues[b], sm.eigenvalues[b - 1]) < 1e-8)
      ++b;
    std::vector<std::size_t> members;
    for (auto k : order)
      if (sm.states[k].matched >= static_cast<long>(a) && sm.states[k].matched < static_cast<long>(b))
        members.push_back(k);
    // the singular state only counts where it was matched; its wider tolerance
    // would otherwise reach neighbouring levels
    std::size_t claimants = 0;
    for (auto k : order) {
      const auto &s = sm.states[k];
      bool in = s.singular ? (s.matched >= static_cast<long>(a) && s.matched < static_cast<long>(b))
                           : detail::rel_gap(s.energy, sm.eigenvalues[a]) <= energy_tol;
      claimants += in ? 1 : 0;
    }
    if (claimants != b - a)
      sm.ambiguities.push_back(std::to_string(claimants) + " states claim the " + std::to_string(b - a) +
                             "-fold eigenvalue " + std::to_string(sm.eigenvalues[a]));
    if (members.size() > 1) {
      Eigen::MatrixXcd M(static_cast<Eigen::Index>(sm.dimension), static_cast<Eigen::Index>(members.size()));
      for (std::size_t c = 0; c < members.size(); ++c)
        M.col(static_cast<Eigen::Index>(c)) = vecs[members[c]].amplitudes;
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
      double smin = svd.singularValues().minCoeff();
      sm.min_independence = std::min(sm.min_independence, smin);
      if (smin < 1e-6)
        sm.conflicts.push_back("dependent Bethe vectors at eigenvalue " + std::to_string(sm.eigenvalues[a]));
    }
    a = b;
  }

  sm.complete = sm.failures.empty() && sm.conflicts.empty() && sm.unmatched_eigenvalues.empty() &&
                sm.matched == sm.dimension && sm.max_residual < residual_tol && sm.singular_residual < singular_tol;
  return sm;
}

} // namespace twomagnon

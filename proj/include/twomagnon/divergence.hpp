#pragma once

#include <vector>

#include "solve.hpp"

namespace twomagnon
{

struct DivergenceSample
{
  double zeta;
  cplx lambda1;
  cplx lambda2;
  double lambda1_over_zeta;
};

struct DivergenceTrace
{
  QuantumPair pair;
  std::vector<DivergenceSample> samples;
};

// Below this zeta the reduced rapidity of the family is expected to sit in [pi/4, pi/2).
inline double small_zeta_bound(int N) { return 0.1 * pi / N; }

// Follows lambda1 of a labelled pair down a decreasing zeta schedule.
// Pairs outside the top-label family are accepted so bounded solutions can be compared.
inline DivergenceTrace trace_divergence(const QuantumPair &q, const ChainParams &p0, const std::vector<double> &schedule)
{
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (!(schedule[i] > 0))
      throw Error(ErrorKind::InvalidParams, "schedule entries must be positive");
    if (i > 0 && !(schedule[i] < schedule[i - 1]))
      throw Error(ErrorKind::InvalidParams, "schedule must be strictly decreasing");
  }
  DivergenceTrace tr{q, {}};
  for (double z : schedule) {
    ChainParams p(p0.N, z);
    RapidityPair r;
    try {
      r = solve(q, p);
    } catch (const Error &e) {
      throw Error(e.kind(), std::string(e.what()) + " at zeta=" + std::to_string(z));
    }
    tr.samples.push_back({z, r.lambda1, r.lambda2, r.lambda1.real() / z});
  }
  return tr;
}

inline bool in_infinite_family(const QuantumPair &q, int N)
{
  return (q.j1.twice == N - 1 && q.j2.twice > 0) || (q.j1.twice == -(N - 1) && q.j2.twice < 0);
}

} // namespace twomagnon

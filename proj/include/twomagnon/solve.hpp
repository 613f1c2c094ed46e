#pragma once

#include <atomic>
#include <optional>
#include <thread>
#include <vector>

#include "counting.hpp"
#include "height.hpp"
#include "model.hpp"
#include "strings.hpp"

namespace twomagnon
{

// Routes a labelled pair to the solver for its class.
inline RapidityPair solve(const QuantumPair &q, const ChainParams &p)
{
  p.require_even();
  switch (q.cls) {
  case SolutionClass::StandardReal:
    return solve_distinct(q.j1, q.j2, p);
  case SolutionClass::InfiniteFamilyReal:
    if (std::abs(q.j1.twice) != p.N - 1)
      throw Error(ErrorKind::NotInFamily, "(" + q.j1.str() + "," + q.j2.str() + ") is not in the infinite family");
    if (q.j1 != q.j2)
      return solve_distinct(q.j1, q.j2, p);
    try {
      return solve_equal(q.j1, p);
    } catch (const Error &e) {
      // near the XXX point the pair hugs lambda = pi/2, where the counting function
      // jumps; the top contour still resolves it
      if (e.kind() != ErrorKind::NoRealSolution)
        throw;
      return solve_distinct(q.j1, q.j2, p);
    }
  case SolutionClass::EqualQNReal:
    return solve_equal(q.j1, p);
  case SolutionClass::NarrowPairComplex:
  case SolutionClass::ExtraTwoString:
    return solve_string(q.j1, StringBranch::Narrow, p);
  case SolutionClass::WidePairComplex:
    // (J, J+1) is labelled by J; its mirror (-J-1, -J) by the negated upper label
    if (q.j1.twice + q.j2.twice >= 0)
      return solve_string(q.j1, StringBranch::Wide, p);
    return solve_string(-q.j2, StringBranch::Wide, p).negated();
  case SolutionClass::Singular:
    return singular_solution(p);
  }
  throw Error(ErrorKind::InvalidParams, "unknown class");
}

struct SolveOutcome
{
  QuantumPair pair;
  std::optional<RapidityPair> solution;
  std::optional<ErrorKind> error;
  std::string message;
};

inline SolveOutcome solve_outcome(const QuantumPair &q, const ChainParams &p)
{
  SolveOutcome o{q, std::nullopt, std::nullopt, {}};
  try {
    o.solution = solve(q, p);
  } catch (const Error &e) {
    o.error = e.kind();
    o.message = e.what();
  }
  return o;
}

// Solves every pair; result order matches the input regardless of the worker count.
inline std::vector<SolveOutcome> solve_many(const std::vector<QuantumPair> &qs, const ChainParams &p, int jobs = 1)
{
  std::vector<SolveOutcome> out(qs.size());
  jobs = std::max(1, std::min<int>(jobs, static_cast<int>(qs.size())));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < qs.size(); i = next++)
      out[i] = solve_outcome(qs[i], p);
  };
  if (jobs == 1) {
    work();
    return out;
  }
  std::vector<std::thread> pool;
  for (int k = 0; k < jobs; ++k)
    pool.emplace_back(work);
  for (auto &th : pool)
    th.join();
  return out;
}

} // namespace twomagnon

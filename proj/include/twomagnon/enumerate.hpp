#pragma once

#include <algorithm>
#include <vector>

#include "model.hpp"
#include "regime.hpp"

namespace twomagnon
{

// Ordering used for all emitted lists: by (2J1, 2J2), then class.
inline bool qn_less(const QuantumPair &a, const QuantumPair &b)
{
  if (a.j1.twice != b.j1.twice)
    return a.j1.twice < b.j1.twice;
  if (a.j2.twice != b.j2.twice)
    return a.j2.twice < b.j2.twice;
  return a.cls < b.cls;
}

// Full label list for even N. Size is always N(N-1)/2.
//
// Infinite-family pairs are written with the top label first, ((N-1)/2, k) and
// (-(N-1)/2, -k), because the top label fixes the contour they are solved on.
inline std::vector<QuantumPair> enumerate_all(const ChainParams &p)
{
  p.require_even();
  const RegimeReport reg = classify_regime(p);
  const int N = p.N;
  const int top = N - 1; // twice (N-1)/2
  std::vector<QuantumPair> out;
  auto push_pm = [&](int a, int b, SolutionClass c) {
    out.push_back({HalfInt(a), HalfInt(b), c});
    out.push_back({HalfInt(-b), HalfInt(-a), c});
  };

  // distinct labels strictly inside the range
  for (int a = -top + 2; a <= top - 2; a += 2)
    for (int b = a + 2; b <= top - 2; b += 2)
      out.push_back({HalfInt(a), HalfInt(b), SolutionClass::StandardReal});

  // wide pairs (J, J+1) for N/4 - 1/2 < J <= (N-3)/2; these coexist with the
  // real pair carrying the same labels
  for (int a = 1; a + 2 <= top; a += 2)
    if (2 * a > N - 2)
      push_pm(a, a + 2, SolutionClass::WidePairComplex);

  if (N % 4 == 0)
    out.push_back({HalfInt(N / 2 - 1), HalfInt(N / 2 + 1), SolutionClass::Singular});
  else
    out.push_back({HalfInt(N / 2), HalfInt(N / 2), SolutionClass::Singular});

  // equal labels N/4 < J <= (N-3)/2: narrow string below F, collapsed real pair above
  for (int a = 1; a <= top - 2; a += 2) {
    if (2 * a <= N)
      continue;
    SolutionClass c = (a / 2.0 < reg.F) ? SolutionClass::NarrowPairComplex : SolutionClass::EqualQNReal;
    push_pm(a, a, c);
  }

  // infinite family on the top contour
  for (int b = 1; b <= top - 2; b += 2) {
    out.push_back({HalfInt(top), HalfInt(b), SolutionClass::InfiniteFamilyReal});
    out.push_back({HalfInt(-top), HalfInt(-b), SolutionClass::InfiniteFamilyReal});
  }
  push_pm(top, top, reg.extra_two_string ? SolutionClass::ExtraTwoString : SolutionClass::InfiniteFamilyReal);

  std::sort(out.begin(), out.end(), qn_less);
  return out;
}

inline std::size_t expected_count(int N) { return static_cast<std::size_t>(N) * (N - 1) / 2; }

} // namespace twomagnon

#include <gtest/gtest.h>

#include "twomagnon/twomagnon.hpp"

using namespace twomagnon;

TEST(Strings, WAndDeviationRoundTrip)
{
  ChainParams p(8, 0.6);
  for (double dev : {-0.29, -0.1, -1e-6, 1e-6, 0.2, 3.0})
    EXPECT_NEAR(dev_of_w(w_of_dev(dev, p), p), dev, 1e-9 * std::max(1.0, std::abs(dev)));
}

TEST(Strings, NarrowPairAtEightSites)
{
  ChainParams p(8, 0.6);
  RapidityPair r = solve_string(HalfInt(5), StringBranch::Narrow, p);
  EXPECT_NEAR(r.lambda1.real(), 0.21910539421566344, 1e-12);
  EXPECT_NEAR(r.lambda1.imag(), 0.29991028805495917, 1e-12);
  EXPECT_EQ(r.lambda2, std::conj(r.lambda1));
  EXPECT_GT(r.meta.dev, -0.3);
  EXPECT_LT(r.meta.dev, 0.0);
  EXPECT_LT(bae_defect(r, p), 1e-8);
  EXPECT_NEAR(counting_Z1_dev(r.meta.dev, p), 2.5, 1e-9);
}

TEST(Strings, WidePairAtEightSites)
{
  ChainParams p(8, 0.6);
  RapidityPair r = solve(QuantumPair{HalfInt(5), HalfInt(7), SolutionClass::WidePairComplex}, p);
  EXPECT_NEAR(r.lambda1.real(), 0.48230201405622736, 1e-12);
  EXPECT_NEAR(r.lambda1.imag(), 0.31014401085223192, 1e-12);
  EXPECT_GT(r.meta.dev, 0.0);
  EXPECT_LT(bae_defect(r, p), 1e-8);
  RapidityPair m = solve(QuantumPair{HalfInt(-7), HalfInt(-5), SolutionClass::WidePairComplex}, p);
  EXPECT_EQ(m.lambda1, -r.lambda1);
  EXPECT_EQ(m.lambda2, -r.lambda2);
}

TEST(Strings, ExtraStringAfterTransition)
{
  ChainParams p(12, 0.57);
  RapidityPair r = solve(QuantumPair{HalfInt(11), HalfInt(11), SolutionClass::ExtraTwoString}, p);
  EXPECT_NEAR(r.lambda1.real(), 1.1242896457627363, 1e-12);
  EXPECT_NEAR(r.lambda1.imag(), 0.090826133358462124, 1e-12);
  EXPECT_LT(r.meta.dev, 0.0);
}

TEST(Strings, Z1MonotoneOnEachBranch)
{
  for (auto [n, z] : std::vector<std::pair<int, double>>{{8, 0.6}, {12, 0.57}, {20, 1.0}}) {
    ChainParams p(n, z);
    // w < 1 narrow: decreasing in w
    double prev = std::numeric_limits<double>::infinity();
    for (double w : geomspace(1e-3, 1 - 1e-6, 1000)) {
      double v = counting_Z1_or_nan(dev_of_w(w, p), p);
      if (std::isnan(v))
        continue;
      EXPECT_LT(v, prev) << n << " w=" << w;
      prev = v;
    }
    // w > 1 wide: increasing in w
    prev = -std::numeric_limits<double>::infinity();
    for (double w : geomspace(1 + 1e-6, 1 / p.t * (1 - 1e-9), 1000)) {
      double v = counting_Z1_or_nan(dev_of_w(w, p), p);
      if (std::isnan(v))
        continue;
      EXPECT_GT(v, prev) << n << " w=" << w;
      prev = v;
    }
  }
}

TEST(Strings, MeetsRealBranchWhereImaginaryPartVanishes)
{
  // the narrow string x +- i(zeta/2 + dev) with dev -> -zeta/2 and the real pair x -+ phi
  // with phi -> 0 describe the same coinciding rapidities
  for (auto [n, z] : std::vector<std::pair<int, double>>{{12, 0.52}, {12, 0.6}, {8, 0.6}}) {
    ChainParams p(n, z);
    double L = tan2x_phi_limit(p);
    EXPECT_NEAR(tan2x_of_dev(-z / 2 + 1e-6 * z, p), L, 1e-7 * L) << n << " " << z;
  }
}

TEST(Strings, NoNarrowStringForCollapsedLabel)
{
  // N=22, zeta=1e-3: the outermost sub-top equal label has collapsed to a real pair
  ChainParams p(22, 1e-3);
  for (auto &q : enumerate_all(p))
    if (q.cls == SolutionClass::EqualQNReal && q.j1.twice > 0) {
      try {
        solve_string(q.j1, StringBranch::Narrow, p);
        FAIL() << "string found for collapsed " << q.j1.str();
      } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::NoRootOnBranch);
      }
    }
}

TEST(Singular, ExactPair)
{
  ChainParams p(8, 0.6);
  RapidityPair r = singular_solution(p);
  EXPECT_EQ(r.lambda1, cplx(0, 0.3));
  EXPECT_EQ(r.lambda2, cplx(0, -0.3));
  EXPECT_LT(r.residual, 1e-14);
}

TEST(ZeroMomentum, BoundPairBeyondHalfZeta)
{
  ChainParams p(8, 0.6);
  RapidityPair r = zero_momentum_pair(p);
  EXPECT_EQ(r.lambda1.real(), half_pi);
  EXPECT_GT(r.lambda1.imag(), 0.3);
  EXPECT_LT(r.residual, 1e-8);
}

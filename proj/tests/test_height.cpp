#include <gtest/gtest.h>

#include "twomagnon/twomagnon.hpp"

using namespace twomagnon;

TEST(Mu2, AgreesWithClosedForm)
{
  ChainParams p(12, 0.7);
  const HalfInt j1(7);
  // closed form evaluated independently, frozen
  EXPECT_NEAR(mu2_of_mu1(0.40, j1, p), 0.528525675878736, 1e-13);
  auto b = contour_bracket(j1, p);
  for (double m : geomspace(1e-6, 1.0, 50)) {
    double mu1 = b.k_left + m * (b.k_right - b.k_left) * (1 - 1e-9);
    EXPECT_NEAR(mu2_of_mu1(mu1, j1, p), mu2_closed_form(mu1, j1, p), 1e-10) << mu1;
  }
}

TEST(Mu2, SatisfiesFirstEquation)
{
  ChainParams p(12, 0.7);
  const HalfInt j1(7);
  auto b = contour_bracket(j1, p);
  for (int i = 1; i < 20; ++i) {
    double mu1 = b.k_left + (b.k_right - b.k_left) * i / 20.0;
    double m2 = mu2_of_mu1(mu1, j1, p);
    double lhs = p.N * magnon_phase(mu1, p) - scattering_phase(mu1 - m2, p);
    double d = (lhs - pi * j1.value()) / pi;
    EXPECT_NEAR(d, std::round(d), 1e-10);
  }
}

TEST(Contour, BracketAtTwelveSites)
{
  auto b = contour_bracket(HalfInt(7), ChainParams(12, 0.7));
  EXPECT_GT(b.k_left, 0.32);
  EXPECT_LT(b.k_right, 0.57);
  EXPECT_LT(b.k_left, b.lambda_star);
  EXPECT_LT(b.lambda_star, b.k_right);
}

TEST(Contour, OuterConventions)
{
  ChainParams p(8, 0.6);
  EXPECT_EQ(discontinuity_K(HalfInt(-7), p), -half_pi);
  EXPECT_EQ(discontinuity_K(HalfInt(9), p), half_pi);
}

TEST(DiffP, LimitsAroundContour)
{
  ChainParams p(12, 0.7);
  const HalfInt j1(7);
  auto b = contour_bracket(j1, p);
  EXPECT_NEAR(diff_P(b.lambda_star, j1, p), -half_pi, 1e-9);
  EXPECT_GT(diff_P(b.k_left + 1e-9, j1, p), -half_pi);
  EXPECT_LT(diff_P(b.k_right - 1e-9, j1, p), -half_pi);
}

TEST(DiffP, DecreasingOnContour)
{
  ChainParams p(12, 0.7);
  for (int tw = -9; tw <= 9; tw += 2) {
    auto b = contour_bracket(HalfInt(tw), p);
    auto [lo, hi] = contour_interior(b);
    double prev = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 200; ++i) {
      double v = diff_P(lo + (hi - lo) * (i + 0.5) / 200.0, HalfInt(tw), p);
      EXPECT_LT(v, prev) << tw << " " << i;
      prev = v;
    }
  }
}

TEST(Height, LeftEndExceedsTopLabel)
{
  ChainParams p(12, 0.7);
  auto b = contour_bracket(HalfInt(7), p);
  EXPECT_GT(height(b.k_left + 1e-12, HalfInt(7), p), (p.N - 1) / 2.0);
}

TEST(Height, TopContourEndsAtOneHalf)
{
  for (auto [n, z] : std::vector<std::pair<int, double>>{{8, 0.6}, {12, 0.7}, {20, 0.2}}) {
    ChainParams p(n, z);
    const HalfInt top(n - 1);
    // h - 1/2 is linear in the distance to pi/2
    double a = height(half_pi - 1e-4, top, p) - 0.5, b = height(half_pi - 1e-5, top, p) - 0.5;
    EXPECT_NEAR(a / b, 10.0, 1e-3) << n;
    EXPECT_NEAR(2 * (b + 0.5) - (height(half_pi - 2e-5, top, p)), 0.5, 1e-8) << n;
  }
}

TEST(SolveDistinct, TwelveSitesSevenHalvesOneHalf)
{
  ChainParams p(12, 0.7);
  RapidityPair r = solve_distinct(HalfInt(7), HalfInt(1), p);
  // frozen from the independent Newton oracle
  EXPECT_NEAR(r.lambda1.real(), 0.45670224866917691, 1e-12);
  EXPECT_NEAR(r.lambda2.real(), 0.02584992469693026, 1e-12);
  EXPECT_NEAR(r.lambda1.real(), 0.4, 0.1);
  EXPECT_LT(bae_defect(r, p), 1e-10);
  EXPECT_TRUE(labels_match(r.lambda1.real(), r.lambda2.real(), HalfInt(7), HalfInt(1), p));
}

TEST(SolveDistinct, AllRealDistinctPairsAtEightSites)
{
  ChainParams p(8, 0.6);
  int n = 0;
  for (auto &q : enumerate_all(p)) {
    bool distinct_real = q.cls == SolutionClass::StandardReal || (q.cls == SolutionClass::InfiniteFamilyReal && q.j1 != q.j2);
    if (!distinct_real)
      continue;
    RapidityPair r = solve_distinct(q.j1, q.j2, p);
    EXPECT_LT(r.residual, 1e-10) << q.j1.str() << "," << q.j2.str();
    EXPECT_LT(bae_defect(r, p), 1e-10);
    ++n;
  }
  EXPECT_EQ(n, 21);
}

TEST(SolveDistinct, MirrorIsExactNegation)
{
  ChainParams p(12, 0.7);
  for (auto [a, b] : std::vector<std::pair<int, int>>{{7, 1}, {-3, 5}, {1, 3}, {11, 5}, {-1, 9}}) {
    RapidityPair r = solve_distinct(HalfInt(a), HalfInt(b), p);
    RapidityPair m = solve_distinct(HalfInt(-a), HalfInt(-b), p);
    EXPECT_EQ(m.lambda1, -r.lambda1);
    EXPECT_EQ(m.lambda2, -r.lambda2);
  }
}

TEST(SolveDistinct, TopEndpointPair)
{
  ChainParams p(8, 0.6);
  RapidityPair r = solve_distinct(HalfInt(7), HalfInt(1), p);
  EXPECT_EQ(r.lambda1.real(), half_pi);
  EXPECT_EQ(r.lambda2.real(), 0.0);
}

TEST(SolveDistinct, RejectsEqualLabelsOffTop)
{
  EXPECT_THROW(solve_distinct(HalfInt(3), HalfInt(3), ChainParams(8, 0.6)), Error);
}

TEST(SolveDistinct, NoRootReported)
{
  // J2 = 7/2 is never reached on the J1 = 1/2 contour at N=8
  try {
    solve_distinct(HalfInt(1), HalfInt(7), ChainParams(8, 0.6));
    FAIL() << "no throw";
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::NoRootInBracket);
  }
}

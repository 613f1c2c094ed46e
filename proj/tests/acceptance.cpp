// End-to-end acceptance: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>

#include "twomagnon/twomagnon.hpp"

using namespace twomagnon;

namespace
{

int failures = 0;

struct Check
{
  bool ok = true;
  std::string why;

  void require(bool cond, const std::string &msg)
  {
    if (!cond && ok) {
      ok = false;
      why = msg;
    } else if (!cond) {
      why += "; " + msg;
    }
  }
};

void run(int id, const char *name, double limit_s, const std::function<void(Check &)> &body)
{
  Check c;
  auto t0 = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception &e) {
    c.require(false, std::string("exception: ") + e.what());
  }
  double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (limit_s > 0)
    c.require(dt < limit_s, "runtime " + std::to_string(dt) + " s over " + std::to_string(limit_s) + " s");
  if (!c.ok)
    ++failures;
  std::printf("%s %2d %-28s (%.2f s)%s%s\n", c.ok ? "PASS" : "FAIL", id, name, dt, c.ok ? "" : "  ", c.why.c_str());
  std::fflush(stdout);
}

std::string pair_str(int a, int b) { return "(" + HalfInt(a).str() + "," + HalfInt(b).str() + ")"; }

void c1_enumeration(Check &c)
{
  using K = std::tuple<int, int, SolutionClass>;
  auto S = SolutionClass::StandardReal, I = SolutionClass::InfiniteFamilyReal;
  std::set<K> want = {{5, 5, SolutionClass::NarrowPairComplex}, {-5, -5, SolutionClass::NarrowPairComplex},
                      {5, 7, SolutionClass::WidePairComplex}, {-7, -5, SolutionClass::WidePairComplex},
                      {3, 5, SolutionClass::Singular},
                      {-5, -3, S}, {-5, -1, S}, {-5, 1, S}, {-5, 3, S}, {-5, 5, S}, {-3, -1, S}, {-3, 1, S}, {-3, 3, S},
                      {-3, 5, S}, {-1, 1, S}, {-1, 3, S}, {-1, 5, S}, {1, 3, S}, {1, 5, S}, {3, 5, S},
                      {7, 1, I}, {7, 3, I}, {7, 5, I}, {-7, -1, I}, {-7, -3, I}, {-7, -5, I}, {7, 7, I}, {-7, -7, I}};
  auto got = enumerate_all(ChainParams(8, 0.6));
  std::set<K> have;
  for (auto &q : got)
    have.insert({q.j1.twice, q.j2.twice, q.cls});
  c.require(got.size() == 28, "size " + std::to_string(got.size()));
  c.require(have == want, "label set differs");
}

void c2_scalars(Check &c)
{
  ChainParams p(8, 0.6);
  double F = threshold_F(p), m = stability_margin(p);
  c.require(std::abs(F - 3.39467) <= 1e-4, "F=" + std::to_string(F));
  c.require(std::abs(m + 0.0579941) <= 1e-6, "margin=" + std::to_string(m));
}

void c3_completeness(Check &c)
{
  for (auto [n, z] : std::vector<std::pair<int, double>>{{4, 1.0}, {8, 0.6}, {12, 0.52}, {12, 0.57}}) {
    SpectrumMatch m = completeness_check(ChainParams(n, z));
    std::string at = "N=" + std::to_string(n) + " zeta=" + std::to_string(z);
    c.require(m.complete, at + " incomplete");
    c.require(m.matched == expected_count(n), at + " matched " + std::to_string(m.matched));
    c.require(m.max_energy_error < energy_tol, at + " energy error");
    c.require(m.max_residual < residual_tol, at + " residual " + std::to_string(m.max_residual));
    c.require(m.singular_residual < singular_tol, at + " singular residual");
  }
}

void c4_extra_string(Check &c)
{
  try {
    RapidityPair r = solve_equal(HalfInt(11), ChainParams(12, 0.52));
    c.require(r.residual < 1e-10, "real pair at 0.52 not converged");
  } catch (const Error &e) {
    c.require(false, std::string("0.52: ") + e.what());
  }
  try {
    solve_equal(HalfInt(11), ChainParams(12, 0.57));
    c.require(false, "real pair found at 0.57");
  } catch (const Error &e) {
    c.require(e.kind() == ErrorKind::NoRealSolution, std::string("0.57: ") + to_string(e.kind()));
  }
  RapidityPair s = solve_string(HalfInt(11), StringBranch::Narrow, ChainParams(12, 0.57));
  c.require(s.meta.dev < 0 && s.meta.dev > -0.285, "string not narrow");
  c.require(s.residual < 1e-8, "string defect");
}

void c5_collapse(Check &c)
{
  int a = collapse_count(ChainParams(21, 1e-3)), b = collapse_count(ChainParams(22, 1e-3));
  c.require(a == 0, "N=21 count " + std::to_string(a));
  c.require(b >= 1, "N=22 count " + std::to_string(b));
}

void c6_regime_map(Check &c)
{
  int agree = 0, skipped = 0;
  auto t2s = geomspace(1e-4, 0.5, 50);
  for (int N = 4; N <= 200; N += 4)
    for (double t2 : t2s) {
      ChainParams p(N, 2 * std::atanh(std::sqrt(t2)));
      std::string a;
      try {
        a = regime_label(classify_regime(p));
      } catch (const Error &e) {
        if (e.kind() != ErrorKind::BoundaryDegenerate)
          throw;
        ++skipped;
        continue;
      }
      std::string b = regime_label_from_inequalities(N, t2);
      if (a == b)
        ++agree;
      else
        c.require(false, "N=" + std::to_string(N) + " t2=" + std::to_string(t2) + ": " + a + " vs " + b);
    }
  c.require(agree + skipped == 2500, "grid size");
}

void c7_monotonicity(Check &c)
{
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<int> halfN(2, 20);
  std::uniform_real_distribution<double> logz(std::log(1e-2), std::log(2.0));
  int violations = 0;
  std::vector<std::string> where;
  auto note = [&](const std::string &s) {
    ++violations;
    if (where.size() < 20)
      where.push_back(s);
  };
  for (int trial = 0; trial < 20; ++trial) {
    const int N = 2 * halfN(rng);
    const double z = std::exp(logz(rng));
    std::uniform_int_distribution<int> jd(0, N - 1);
    const HalfInt j1(2 * jd(rng) - (N - 1));
    ChainParams p(N, z);
    std::string tag = "N=" + std::to_string(N) + " zeta=" + std::to_string(z) + " J1=" + j1.str();

    auto b = contour_bracket(j1, p);
    auto [lo, hi] = contour_interior(b);
    double pP = std::numeric_limits<double>::infinity(), pH = pP;
    int badP = 0, badH = 0;
    for (int i = 0; i < 1000; ++i) {
      double mu = lo + (hi - lo) * (i + 0.5) / 1000.0;
      double P = diff_P(mu, j1, p), h = height_or_nan(mu, j1, p);
      badP += !(P < pP);
      badH += !(h < pH);
      pP = P;
      pH = h;
    }
    if (badP)
      note(tag + " P x" + std::to_string(badP));
    if (badH)
      note(tag + " h x" + std::to_string(badH));

    double prev = std::numeric_limits<double>::infinity();
    int badZ = 0;
    for (double w : geomspace(1e-3, 1 - 1e-6, 1000)) {
      double v = counting_Z1_or_nan(dev_of_w(w, p), p);
      if (std::isnan(v))
        continue;
      badZ += !(v < prev);
      prev = v;
    }
    prev = -std::numeric_limits<double>::infinity();
    for (double w : geomspace(1 + 1e-6, (1 - 1e-9) / p.t, 1000)) {
      double v = counting_Z1_or_nan(dev_of_w(w, p), p);
      if (std::isnan(v))
        continue;
      badZ += !(v > prev);
      prev = v;
    }
    if (badZ)
      note(tag + " Z1 x" + std::to_string(badZ));

    // N W on its real-branch domain: no step larger than a quarter label between neighbours
    auto g = geomspace(1e-6, half_pi - 1e-6, 1000);
    double last = std::numeric_limits<double>::quiet_NaN();
    int jumps = 0;
    for (double phi : g) {
      double v = counting_W_or_nan(phi, p);
      if (std::isfinite(v) && std::isfinite(last) && std::abs(v - last) > 0.25)
        ++jumps;
      last = v;
    }
    if (jumps)
      note(tag + " NW jumps x" + std::to_string(jumps));
  }
  std::string msg = std::to_string(violations) + " violations";
  for (auto &w : where)
    msg += " | " + w;
  c.require(violations == 0, msg);
}

void c8_limits(Check &c)
{
  for (auto [n, z] : std::vector<std::pair<int, double>>{{8, 0.6}, {12, 0.7}, {20, 0.2}}) {
    ChainParams p(n, z);
    const HalfInt top(n - 1);
    // Richardson on e and e/2: h is smooth in mu1 up to the endpoint
    double e = 1e-6;
    double h1 = height(half_pi - e, top, p), h2 = height(half_pi - e / 2, top, p);
    double ext = 2 * h2 - h1;
    c.require(std::abs(ext - 0.5) < 1e-6, "h limit " + std::to_string(ext) + " at N=" + std::to_string(n));
    for (int tw = -(n - 3); tw <= n - 3; tw += 2) {
      auto b = contour_bracket(HalfInt(tw), p);
      // mu2 is defined modulo pi, so P = -pi/2 and P = pi/2 are the same point
      double P = diff_P(b.lambda_star, HalfInt(tw), p);
      double off = detail::wrap_half_pi(P + half_pi);
      c.require(std::abs(off) < 1e-9, "P(lambda*) at J1=" + HalfInt(tw).str() + " off by " + std::to_string(off));
    }
    double L = tan2x_phi_limit(p), X = tan2x_of_phi(1e-9, 0, p).real();
    c.require(std::abs(X - L) < 1e-8 * std::max(1.0, std::abs(L)), "tan^2 x limit at N=" + std::to_string(n));
  }
}

void c9_symmetry(Check &c)
{
  for (auto [n, z] : std::vector<std::pair<int, double>>{{8, 0.6}, {12, 0.57}, {12, 0.7}}) {
    ChainParams p(n, z);
    for (auto &q : enumerate_all(p)) {
      if (q.cls == SolutionClass::Singular)
        continue;
      RapidityPair a = solve(q, p), b = solve(q.mirrored(), p);
      double d = std::max(std::abs(b.lambda1 + a.lambda1), std::abs(b.lambda2 + a.lambda2));
      c.require(d <= 1e-12, "N=" + std::to_string(n) + " " + pair_str(q.j1.twice, q.j2.twice) + " mirror off by " + std::to_string(d));
      if (!is_complex_class(q.cls)) {
        double s1 = bae_defect(a.lambda1, a.lambda2, p), s2 = bae_defect(a.lambda2, a.lambda1, p);
        c.require(s1 == s2, "defect not swap symmetric");
      }
    }
  }
}

void c10_divergence(Check &c)
{
  QuantumPair q{HalfInt(7), HalfInt(1), SolutionClass::InfiniteFamilyReal};
  DivergenceTrace tr = trace_divergence(q, ChainParams(8, 1.0), {0.3, 0.1, 0.03, 0.01});
  for (std::size_t i = 1; i < tr.samples.size(); ++i)
    c.require(tr.samples[i].lambda1_over_zeta > tr.samples[i - 1].lambda1_over_zeta, "lambda1/zeta not increasing");
  for (auto &s : tr.samples)
    if (s.zeta <= 0.03) {
      double l = s.lambda1.real();
      c.require(l >= pi / 4 && l < half_pi,
                "zeta=" + std::to_string(s.zeta) + ": lambda1=" + std::to_string(l) + " outside [pi/4, pi/2)");
    }
}

} // namespace

int main()
{
  run(1, "enumeration N=8", 1.0, c1_enumeration);
  run(2, "printed scalars", 1.0, c2_scalars);
  run(3, "completeness vs ED", 30.0, c3_completeness);
  run(4, "extra-string transition", 5.0, c4_extra_string);
  run(5, "collapse critical size", 1.0, c5_collapse);
  run(6, "regime map consistency", 5.0, c6_regime_map);
  run(7, "monotonicity suite", 10.0, c7_monotonicity);
  run(8, "limit checks", 0, c8_limits);
  run(9, "symmetry suite", 0, c9_symmetry);
  run(10, "divergence trace", 2.0, c10_divergence);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}

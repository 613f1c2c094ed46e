// bethe-two: enumerate, solve and verify the two down-spin Bethe states of the
// periodic massive XXZ chain.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/cfg/helpers.h>
#include <spdlog/fmt/fmt.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "twomagnon/twomagnon.hpp"

using json = nlohmann::ordered_json;
using namespace twomagnon;

namespace
{

enum Exit
{
  ok = 0,
  usage = 2,
  boundary = 3,
  partial = 4,
  incomplete = 5
};

struct Opts
{
  int n = 0;
  double zeta = 0.0;
  std::string format = "json";
  std::string output;
  int jobs = 1;
  std::string j1, j2, cls;
  double tol_defect = 1e-10;
  std::size_t max_dim = default_max_dim;
  std::string n_range = "4:200:2";
  std::string zeta_grid = "1e-4:0.5:50:t2";
  std::string zeta_schedule = "0.3,0.1,0.03,0.01";
};

// A table is emitted either as {params, records, summary} or as CSV with a fixed column order.
struct Table
{
  json params = json::object();
  std::vector<std::string> columns;
  json records = json::array();
  json summary = json::object();
};

std::string num(double v) { return std::isfinite(v) ? fmt::format("{:.17g}", v) : std::string("nan"); }

json jnum(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string csv_cell(const json &v)
{
  if (v.is_null())
    return "nan";
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos)
      return s;
    std::string q = "\"";
    for (char ch : s)
      q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
  }
  if (v.is_number_float())
    return num(v.get<double>());
  if (v.is_boolean())
    return v.get<bool>() ? "true" : "false";
  return v.dump();
}

void emit(const Table &t, const Opts &o)
{
  std::ostringstream os;
  if (o.format == "csv") {
    for (std::size_t i = 0; i < t.columns.size(); ++i)
      os << (i ? "," : "") << t.columns[i];
    os << "\n";
    for (auto &r : t.records) {
      for (std::size_t i = 0; i < t.columns.size(); ++i)
        os << (i ? "," : "") << csv_cell(r.contains(t.columns[i]) ? r[t.columns[i]] : json(nullptr));
      os << "\n";
    }
  } else {
    json doc = json::object();
    doc["params"] = t.params;
    doc["records"] = t.records;
    doc["summary"] = t.summary;
    os << doc.dump(2) << "\n";
  }
  if (o.output.empty()) {
    std::cout << os.str();
    return;
  }
  std::ofstream f(o.output);
  if (!f)
    throw Error(ErrorKind::InvalidParams, "cannot write " + o.output);
  f << os.str();
}

json base_params(const Opts &o)
{
  json p = json::object();
  p["N"] = o.n;
  p["zeta"] = o.zeta;
  return p;
}

ChainParams chain(const Opts &o)
{
  ChainParams p(o.n, o.zeta);
  p.require_even();
  return p;
}

const std::vector<std::string> solution_columns = {
    "N", "zeta", "j1", "j2", "class", "status", "lambda1_re", "lambda1_im", "lambda2_re", "lambda2_im",
    "defect", "energy", "solver", "mu1", "phi", "x", "dev", "w", "iterations", "message"};

json solution_record(const SolveOutcome &s, const ChainParams &p, double tol, bool &failed)
{
  json r = json::object();
  r["N"] = p.N;
  r["zeta"] = p.zeta;
  r["j1"] = s.pair.j1.str();
  r["j2"] = s.pair.j2.str();
  r["class"] = to_string(s.pair.cls);
  if (!s.solution) {
    r["status"] = to_string(*s.error);
    r["message"] = s.message;
    failed = true;
    return r;
  }
  const RapidityPair &x = *s.solution;
  // complex pairs are held to the string tolerance, which an absolute defect cannot beat
  double lim = is_complex_class(s.pair.cls) ? std::max(tol, 1e-8) : tol;
  bool good = x.residual <= lim;
  r["status"] = good ? "ok" : "ToleranceNotReached";
  r["lambda1_re"] = jnum(x.lambda1.real());
  r["lambda1_im"] = jnum(x.lambda1.imag());
  r["lambda2_re"] = jnum(x.lambda2.real());
  r["lambda2_im"] = jnum(x.lambda2.imag());
  r["defect"] = jnum(x.residual);
  r["energy"] = jnum(bethe_energy(x, p));
  r["solver"] = x.meta.solver;
  r["mu1"] = jnum(x.meta.mu1);
  r["phi"] = jnum(x.meta.phi);
  r["x"] = jnum(x.meta.x);
  r["dev"] = jnum(x.meta.dev);
  r["w"] = jnum(x.meta.w);
  r["iterations"] = x.iterations;
  r["message"] = good ? "" : "defect " + num(x.residual) + " above " + num(lim);
  failed = failed || !good;
  return r;
}

json regime_json(const RegimeReport &r)
{
  json j = json::object();
  j["stable"] = r.stable;
  j["F"] = jnum(r.F);
  j["K"] = r.K.str();
  j["m_collapsed"] = r.m_collapsed;
  j["extra_two_string"] = r.extra_two_string;
  j["label"] = regime_label(r);
  return j;
}

int cmd_enumerate(const Opts &o)
{
  ChainParams p = chain(o);
  RegimeReport reg = classify_regime(p);
  Table t;
  t.params = base_params(o);
  t.columns = {"j1", "j2", "class"};
  for (auto &q : enumerate_all(p))
    t.records.push_back({{"j1", q.j1.str()}, {"j2", q.j2.str()}, {"class", to_string(q.cls)}});
  t.summary["count"] = t.records.size();
  t.summary["expected"] = expected_count(p.N);
  t.summary["regime"] = regime_json(reg);
  emit(t, o);
  return ok;
}

Table solve_table(const Opts &o, const ChainParams &p, const std::vector<QuantumPair> &qs, bool &failed)
{
  Table t;
  t.params = base_params(o);
  t.params["tol_defect"] = o.tol_defect;
  t.columns = solution_columns;
  auto out = solve_many(qs, p, o.jobs);
  std::size_t n_ok = 0;
  json bad = json::array();
  for (auto &s : out) {
    bool f = false;
    json r = solution_record(s, p, o.tol_defect, f);
    if (f) {
      bad.push_back("(" + s.pair.j1.str() + "," + s.pair.j2.str() + ") " + to_string(s.pair.cls) + ": " + r["message"].get<std::string>());
      spdlog::warn("({},{}) {}: {}", s.pair.j1.str(), s.pair.j2.str(), to_string(s.pair.cls), r["message"].get<std::string>());
    } else {
      ++n_ok;
    }
    failed = failed || f;
    t.records.push_back(r);
  }
  t.summary["count"] = out.size();
  t.summary["ok"] = n_ok;
  t.summary["failed"] = bad;
  return t;
}

int cmd_solve(const Opts &o)
{
  ChainParams p = chain(o);
  HalfInt j1 = parse_half_int(o.j1), j2 = parse_half_int(o.j2);
  std::vector<QuantumPair> qs;
  for (auto &q : enumerate_all(p)) {
    if (!o.cls.empty() && o.cls != to_string(q.cls))
      continue;
    // distinct real labels name the same state in either order; J1 picks the contour
    if ((q.j1 == j1 && q.j2 == j2) || (q.cls == SolutionClass::StandardReal && q.j1 == j2 && q.j2 == j1))
      qs.push_back({j1, j2, q.cls});
  }
  if (qs.empty()) {
    if (o.cls.empty())
      throw Error(ErrorKind::InvalidParams, "(" + j1.str() + "," + j2.str() + ") is not an enumerated pair; pass --class to force one");
    bool known = false;
    for (int c = 0; c <= static_cast<int>(SolutionClass::Singular); ++c)
      if (o.cls == to_string(static_cast<SolutionClass>(c))) {
        qs.push_back({j1, j2, static_cast<SolutionClass>(c)});
        known = true;
      }
    if (!known)
      throw Error(ErrorKind::InvalidParams, "unknown class " + o.cls);
  }
  bool failed = false;
  Table t = solve_table(o, p, qs, failed);
  emit(t, o);
  return failed ? partial : ok;
}

int cmd_solve_all(const Opts &o)
{
  ChainParams p = chain(o);
  auto qs = enumerate_all(p);
  bool failed = false;
  Table t = solve_table(o, p, qs, failed);
  t.summary["expected"] = expected_count(p.N);
  emit(t, o);
  if (failed)
    for (auto &b : t.summary["failed"])
      std::cerr << "failed: " << b.get<std::string>() << "\n";
  return failed ? partial : ok;
}

int cmd_verify(const Opts &o)
{
  ChainParams p = chain(o);
  SpectrumMatch sm = completeness_check(p, o.max_dim, o.jobs);
  Table t;
  t.params = base_params(o);
  t.params["max_dim"] = o.max_dim;
  t.columns = {"j1", "j2", "class", "kind", "lambda1_re", "lambda1_im", "lambda2_re", "lambda2_im",
               "energy", "ed_energy", "energy_error", "residual", "status"};
  for (auto &s : sm.states) {
    json r = json::object();
    r["j1"] = s.label ? json(s.label->j1.str()) : json(nullptr);
    r["j2"] = s.label ? json(s.label->j2.str()) : json(nullptr);
    r["class"] = s.label ? json(to_string(s.label->cls)) : json(nullptr);
    r["kind"] = s.duplicate_of ? "duplicate" : (s.label ? (s.singular ? "singular" : "labelled") : "supplementary");
    r["lambda1_re"] = jnum(s.solution.lambda1.real());
    r["lambda1_im"] = jnum(s.solution.lambda1.imag());
    r["lambda2_re"] = jnum(s.solution.lambda2.real());
    r["lambda2_im"] = jnum(s.solution.lambda2.imag());
    r["energy"] = jnum(s.energy);
    r["ed_energy"] = s.matched >= 0 ? jnum(sm.eigenvalues[s.matched]) : json(nullptr);
    r["energy_error"] = s.matched >= 0 ? jnum(s.energy_error) : json(nullptr);
    r["residual"] = jnum(s.residual);
    r["status"] = s.duplicate_of ? "duplicate" : (s.matched >= 0 ? "matched" : "unmatched");
    t.records.push_back(r);
  }
  for (auto &f : sm.failures)
    t.records.push_back({{"j1", f.pair.j1.str()}, {"j2", f.pair.j2.str()}, {"class", to_string(f.pair.cls)},
                         {"kind", "labelled"}, {"status", f.error ? to_string(*f.error) : "failed"}});
  auto &s = t.summary;
  s["dimension"] = sm.dimension;
  s["matched"] = sm.matched;
  s["unmatched_eigenvalues"] = sm.unmatched_eigenvalues.size();
  s["duplicates"] = sm.duplicates;
  s["supplementary"] = sm.supplementary;
  s["solve_failures"] = sm.failures.size();
  s["max_energy_error"] = sm.max_energy_error;
  s["max_residual"] = sm.max_residual;
  s["singular_residual"] = sm.singular_residual;
  s["min_independence"] = sm.min_independence;
  s["conflicts"] = sm.conflicts;
  s["ambiguities"] = sm.ambiguities;
  s["complete"] = sm.complete;
  emit(t, o);
  std::cerr << fmt::format("{}/{} matched, max energy error {:.3g}, max residual {:.3g}, singular residual {:.3g}\n",
                           sm.matched, sm.dimension, sm.max_energy_error, sm.max_residual, sm.singular_residual);
  for (auto &c : sm.conflicts)
    std::cerr << "conflict: " << c << "\n";
  return sm.complete ? ok : incomplete;
}

std::vector<std::string> split(const std::string &s, char sep)
{
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    out.push_back(item);
  return out;
}

double to_double(const std::string &s)
{
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception &) {
    pos = 0;
  }
  if (pos == 0 || pos != s.size())
    throw Error(ErrorKind::InvalidParams, "not a number: '" + s + "'");
  return v;
}

// "lo:hi[:step]" over N
std::vector<int> parse_n_range(const std::string &s)
{
  auto f = split(s, ':');
  if (f.size() < 2 || f.size() > 3)
    throw Error(ErrorKind::InvalidParams, "--n-range expects lo:hi[:step]");
  int lo = static_cast<int>(to_double(f[0])), hi = static_cast<int>(to_double(f[1]));
  int step = f.size() == 3 ? static_cast<int>(to_double(f[2])) : 2;
  if (lo < 3 || hi < lo || step < 1)
    throw Error(ErrorKind::InvalidParams, "bad --n-range " + s);
  std::vector<int> out;
  for (int n = lo; n <= hi; n += step)
    out.push_back(n);
  return out;
}

// "lo:hi:count[:zeta|t2]"; t2 spaces tanh^2(zeta/2) logarithmically, zeta spaces zeta logarithmically
std::vector<double> parse_zeta_grid(const std::string &s)
{
  auto f = split(s, ':');
  if (f.size() < 3 || f.size() > 4)
    throw Error(ErrorKind::InvalidParams, "--zeta-grid expects lo:hi:count[:zeta|t2]");
  double lo = to_double(f[0]), hi = to_double(f[1]);
  int cnt = static_cast<int>(to_double(f[2]));
  std::string axis = f.size() == 4 ? f[3] : "zeta";
  if (!(lo > 0) || hi < lo || cnt < 1 || (axis != "zeta" && axis != "t2"))
    throw Error(ErrorKind::InvalidParams, "bad --zeta-grid " + s);
  if (axis == "t2" && !(hi < 1))
    throw Error(ErrorKind::InvalidParams, "tanh^2 grid must stay below 1");
  std::vector<double> g = cnt == 1 ? std::vector<double>{lo} : geomspace(lo, hi, cnt);
  if (axis == "t2")
    for (auto &v : g)
      v = 2 * std::atanh(std::sqrt(v));
  return g;
}

int cmd_regime_map(const Opts &o)
{
  auto ns = parse_n_range(o.n_range);
  auto zs = parse_zeta_grid(o.zeta_grid);
  Table t;
  t.params["n_range"] = o.n_range;
  t.params["zeta_grid"] = o.zeta_grid;
  t.columns = {"N", "zeta", "tanh2", "label", "label_inequalities", "F", "agree"};
  std::size_t agree = 0, disagree = 0, bnd = 0;
  for (int n : ns)
    for (double z : zs) {
      ChainParams p(n, z);
      json r = json::object();
      r["N"] = n;
      r["zeta"] = z;
      r["tanh2"] = p.t * p.t;
      std::string ineq = regime_label_from_inequalities(n, p.t * p.t);
      r["F"] = jnum(threshold_F(p));
      try {
        std::string lab = regime_label(classify_regime(p));
        r["label"] = lab;
        r["label_inequalities"] = ineq;
        r["agree"] = lab == ineq;
        ++(lab == ineq ? agree : disagree);
      } catch (const Error &e) {
        if (e.kind() != ErrorKind::BoundaryDegenerate)
          throw;
        r["label"] = "boundary";
        r["label_inequalities"] = ineq;
        r["agree"] = nullptr;
        ++bnd;
      }
      t.records.push_back(r);
    }
  t.summary["points"] = t.records.size();
  t.summary["agree"] = agree;
  t.summary["disagree"] = disagree;
  t.summary["boundary"] = bnd;
  emit(t, o);
  return ok;
}

int cmd_xxx_trace(const Opts &o)
{
  ChainParams p = chain(o);
  QuantumPair q{parse_half_int(o.j1), parse_half_int(o.j2), SolutionClass::InfiniteFamilyReal};
  if (!in_infinite_family(q, p.N))
    throw Error(ErrorKind::NotInFamily, "(" + q.j1.str() + "," + q.j2.str() + ") is not in the infinite family for N=" + std::to_string(p.N));
  std::vector<double> sched;
  for (auto &s : split(o.zeta_schedule, ','))
    sched.push_back(to_double(s));
  Table t;
  t.params["N"] = p.N;
  t.params["j1"] = q.j1.str();
  t.params["j2"] = q.j2.str();
  t.params["zeta_schedule"] = sched;
  t.columns = {"zeta", "lambda1_re", "lambda1_im", "lambda2_re", "lambda2_im", "lambda1_over_zeta"};
  DivergenceTrace tr = trace_divergence(q, p, sched);
  for (auto &s : tr.samples)
    t.records.push_back({{"zeta", s.zeta}, {"lambda1_re", s.lambda1.real()}, {"lambda1_im", s.lambda1.imag()},
                         {"lambda2_re", s.lambda2.real()}, {"lambda2_im", s.lambda2.imag()}, {"lambda1_over_zeta", s.lambda1_over_zeta}});
  bool increasing = true;
  for (std::size_t i = 1; i < tr.samples.size(); ++i)
    increasing = increasing && tr.samples[i].lambda1_over_zeta > tr.samples[i - 1].lambda1_over_zeta;
  t.summary["samples"] = tr.samples.size();
  t.summary["ratio_increasing"] = increasing;
  t.summary["small_zeta_bound"] = small_zeta_bound(p.N);
  emit(t, o);
  return ok;
}

int exit_for(ErrorKind k)
{
  switch (k) {
  case ErrorKind::BoundaryDegenerate: return boundary;
  case ErrorKind::IncompleteSpectrum: return incomplete;
  case ErrorKind::InvalidParams:
  case ErrorKind::DimensionOverflow:
  case ErrorKind::NotInFamily: return usage;
  default: return partial;
  }
}

} // namespace

int main(int argc, char **argv)
{
  auto log = spdlog::stderr_color_mt("bethe-two");
  spdlog::set_default_logger(log);
  spdlog::set_level(spdlog::level::warn);
  if (const char *lv = std::getenv("BETHE_TWO_LOG"))
    spdlog::cfg::helpers::load_levels(lv);

  Opts o;
  CLI::App app{"Bethe states of the massive XXZ chain with two down spins"};
  app.require_subcommand(1);

  auto chain_flags = [&](CLI::App *c) {
    c->add_option("--n", o.n, "chain length (even, >= 4)")->required();
    c->add_option("--zeta", o.zeta, "anisotropy, Delta = cosh(zeta)")->required();
  };
  auto out_flags = [&](CLI::App *c) {
    c->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    c->add_option("--output", o.output, "write to this path instead of stdout");
  };

  auto *en = app.add_subcommand("enumerate", "list all quantum-number pairs with their classes");
  chain_flags(en);
  out_flags(en);

  auto *so = app.add_subcommand("solve", "solve one labelled pair");
  chain_flags(so);
  out_flags(so);
  so->add_option("--j1", o.j1, "first label, e.g. 7/2")->required();
  so->add_option("--j2", o.j2, "second label")->required();
  so->add_option("--class", o.cls, "solution class, when the labels carry several");
  so->add_option("--tol-defect", o.tol_defect, "defect tolerance for real pairs");

  auto *sa = app.add_subcommand("solve-all", "solve every enumerated pair");
  chain_flags(sa);
  out_flags(sa);
  sa->add_option("--tol-defect", o.tol_defect, "defect tolerance for real pairs");
  sa->add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);

  auto *ve = app.add_subcommand("verify", "match all Bethe states against exact diagonalisation");
  chain_flags(ve);
  out_flags(ve);
  ve->add_option("--max-dim", o.max_dim, "largest sector dimension allowed");
  ve->add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);

  auto *rm = app.add_subcommand("regime-map", "regime labels on an (N, zeta) grid");
  out_flags(rm);
  rm->add_option("--n-range", o.n_range, "lo:hi[:step]");
  rm->add_option("--zeta-grid", o.zeta_grid, "lo:hi:count[:zeta|t2], log spaced");

  auto *xt = app.add_subcommand("xxx-trace", "follow an infinite-family pair towards the isotropic point");
  xt->add_option("--n", o.n, "chain length")->required();
  xt->add_option("--j1", o.j1, "top label (N-1)/2")->required();
  xt->add_option("--j2", o.j2, "second label")->required();
  xt->add_option("--zeta-schedule", o.zeta_schedule, "comma separated, strictly decreasing");
  out_flags(xt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int rc = app.exit(e);
    return rc == 0 ? ok : usage;
  }

  try {
    if (*en)
      return cmd_enumerate(o);
    if (*so)
      return cmd_solve(o);
    if (*sa)
      return cmd_solve_all(o);
    if (*ve)
      return cmd_verify(o);
    if (*rm)
      return cmd_regime_map(o);
    if (*xt) {
      if (o.zeta <= 0)
        o.zeta = 1.0; // only N matters for the trace
      return cmd_xxx_trace(o);
    }
  } catch (const Error &e) {
    std::cerr << "error: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return exit_for(e.kind());
  }
  return usage;
}

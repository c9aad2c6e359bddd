// qtorus: command line front end for the library.
//
//   qtorus check    verify operator relations on sampled or explicit weights
//   qtorus op       emit a single operator matrix as JSON
//   qtorus groupoid n-gon loop verification and torus component exploration
//
// Output is deterministic byte for byte for a fixed invocation: no
// timestamps, keys in sorted order, shortest-roundtrip float printing.
// Exit codes: 0 all checks passed, 1 a relation or loop failed numerically,
// 2 configuration or precondition error (bad flags, singular weights,
// regularity violations of explicit inputs).

#include <algorithm>
#include <array>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <qtorus/qtorus.hpp>

namespace {

using qtorus::cd;
using qtorus::LoopCase;
using qtorus::RelationKind;
using qtorus::RelationReport;
using qtorus::RootContext;
using qtorus::TensorOperator;
using qtorus::Weight;
using json = nlohmann::json;

constexpr std::array<RelationKind, 12> kAllKinds = {
    RelationKind::pentagon_T,    RelationKind::order3_A,
    RelationKind::ata,           RelationKind::tat,
    RelationKind::intertwine_F,  RelationKind::dual_iso,
    RelationKind::phi_functional, RelationKind::phi_conjugation,
    RelationKind::phi_pentagon,  RelationKind::t_proportional,
    RelationKind::a_proportional, RelationKind::f_nonuniqueness};

// QTORUS_TOL seeds the default; an explicit --tol flag still wins because
// CLI11 only assigns bound variables when the flag is present.
double default_tol() {
  const char* env = std::getenv("QTORUS_TOL");
  if (env == nullptr) return 1e-9;
  char* end = nullptr;
  const double v = std::strtod(env, &end);
  if (end == env || !(v > 0.0)) return 1e-9;
  return v;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f)
    qtorus::fail(qtorus::errc::constraint_violation,
                 "cannot open output file: " + path);
  f << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string num(double v) {
  std::ostringstream o;
  o.precision(17);
  o << v;
  return o.str();
}

// "re,im,re,im" into a checked weight; singular components are rejected.
Weight parse_weight_quad(const std::string& s) {
  std::array<double, 4> v{};
  std::stringstream ss(s);
  std::string tok;
  int i = 0;
  while (std::getline(ss, tok, ',')) {
    if (i >= 4)
      qtorus::fail(qtorus::errc::constraint_violation,
                   "weight takes exactly four numbers: " + s);
    v[static_cast<size_t>(i++)] = std::stod(tok);
  }
  if (i != 4)
    qtorus::fail(qtorus::errc::constraint_violation,
                 "weight takes re,im,re,im: " + s);
  return Weight(cd(v[0], v[1]), cd(v[2], v[3]));
}

// The --weights JSON array is authoritative; --l1..--l4 quadruples otherwise.
std::vector<Weight> collect_weights(const std::string& weights_json,
                                    const std::vector<std::string>& quads) {
  std::vector<Weight> out;
  if (!weights_json.empty()) {
    const json j = json::parse(weights_json);
    if (!j.is_array())
      qtorus::fail(qtorus::errc::constraint_violation,
                   "--weights expects a JSON array");
    for (const auto& e : j) {
      const Weight w = e.get<Weight>();
      out.emplace_back(w.x, w.y);  // checked rebuild rejects singular input
    }
    return out;
  }
  for (const std::string& q : quads)
    if (!q.empty()) out.push_back(parse_weight_quad(q));
  return out;
}

// ---------------------------------------------------------------------------
// check

struct CheckOptions {
  std::string suite_pos;
  std::string suite_flag;
  int N = 3;
  bool n_given = false;
  double tol = 1e-9;
  unsigned long long seed = 1;
  int samples = 5;
  std::string weights_json;
  std::vector<std::string> quads = {"", "", "", ""};
  std::string output;
  std::string format = "json";
};

std::vector<RelationReport> run_check_job(RelationKind kind, int N, double tol,
                                          unsigned long long seed,
                                          int samples) {
  const RootContext ctx = qtorus::make_context(N, tol);
  std::mt19937_64 rng(seed);
  std::vector<RelationReport> out;
  out.reserve(static_cast<size_t>(samples));
  for (int t = 0; t < samples; ++t) {
    const std::vector<Weight> ws = qtorus::sample_relation_tuple(ctx, kind, rng);
    out.push_back(qtorus::verify_relation(ctx, kind, ws));
  }
  return out;
}

int cmd_check(const CheckOptions& opt) {
  std::string suite = opt.suite_flag.empty() ? opt.suite_pos : opt.suite_flag;
  if (!opt.suite_flag.empty() && !opt.suite_pos.empty() &&
      opt.suite_flag != opt.suite_pos)
    qtorus::fail(qtorus::errc::constraint_violation,
                 "positional suite and --suite disagree");
  if (suite.empty())
    qtorus::fail(qtorus::errc::constraint_violation,
                 "check needs a suite name or 'all'");

  std::vector<RelationKind> kinds;
  if (suite == "all")
    kinds.assign(kAllKinds.begin(), kAllKinds.end());
  else
    kinds.push_back(qtorus::relation_from_name(suite));

  std::vector<int> levels;
  if (opt.n_given)
    levels.push_back(opt.N);
  else if (suite == "all")
    levels = {3, 5, 7};
  else
    levels.push_back(opt.N);

  const std::vector<Weight> explicit_ws =
      collect_weights(opt.weights_json, opt.quads);

  std::vector<RelationReport> reports;
  if (!explicit_ws.empty()) {
    if (kinds.size() != 1)
      qtorus::fail(qtorus::errc::constraint_violation,
                   "explicit weights require a single suite");
    // Regularity violations of explicit weights surface as exceptions and
    // exit with status 2 rather than counting as a numerical failure.
    for (int n : levels) {
      const RootContext ctx = qtorus::make_context(n, opt.tol);
      reports.push_back(qtorus::verify_relation(ctx, kinds[0], explicit_ws));
    }
  } else {
    // One task per (suite, N); assembly stays single threaded and ordered.
    struct Job {
      RelationKind kind;
      int N;
      unsigned long long seed;
    };
    std::vector<Job> jobs;
    for (RelationKind k : kinds)
      for (int n : levels)
        jobs.push_back({k, n,
                        opt.seed + 1000003ULL * static_cast<unsigned>(k) +
                            101ULL * static_cast<unsigned>(n)});
    std::vector<std::future<std::vector<RelationReport>>> futs;
    futs.reserve(jobs.size());
    for (const Job& job : jobs)
      futs.push_back(std::async(std::launch::async, run_check_job, job.kind,
                                job.N, opt.tol, job.seed, opt.samples));
    for (auto& f : futs)
      for (RelationReport& r : f.get()) reports.push_back(std::move(r));
  }

  bool all_passed = true;
  for (const RelationReport& r : reports) all_passed = all_passed && r.passed;

  if (opt.format == "csv-summary") {
    std::ostringstream csv;
    csv << "suite,N,samples,worst_residual,all_passed\n";
    for (RelationKind k : kinds) {
      for (int n : levels) {
        double worst = 0.0;
        long count = 0;
        bool ok = true;
        for (const RelationReport& r : reports) {
          if (r.name != qtorus::relation_name(k) || r.N != n) continue;
          worst = std::max(worst, r.residual);
          ok = ok && r.passed;
          ++count;
        }
        csv << qtorus::relation_name(k) << ',' << n << ',' << count << ','
            << num(worst) << ',' << (ok ? "true" : "false") << '\n';
      }
    }
    write_output(opt.output, csv.str());
  } else {
    json out;
    out["command"] = "check";
    out["suite"] = suite;
    out["levels"] = levels;
    out["tol"] = opt.tol;
    out["seed"] = opt.seed;
    out["samples"] =
        explicit_ws.empty() ? opt.samples : static_cast<int>(levels.size());
    out["explicit_weights"] = !explicit_ws.empty();
    out["reports"] = reports;
    out["all_passed"] = all_passed;
    write_output(opt.output, dump(out));
  }
  return all_passed ? 0 : 1;
}

// ---------------------------------------------------------------------------
// op

struct OpOptions {
  std::string kind;
  int N = 3;
  double tol = 1e-9;
  std::string weights_json;
  std::vector<std::string> quads = {"", "", ""};
  std::string output;
  std::string format = "json";
};

int op_weight_count(const std::string& kind) {
  if (kind == "A" || kind == "B" || kind == "S") return 0;
  if (kind == "mu" || kind == "dualL" || kind == "dualR" || kind == "C" ||
      kind == "D")
    return 1;
  if (kind == "F" || kind == "Finv" || kind == "Acan" || kind == "Aclosed" ||
      kind == "Phi")
    return 2;
  if (kind == "T" || kind == "Tclosed") return 3;
  qtorus::fail(qtorus::errc::constraint_violation, "unknown op kind: " + kind);
}

int cmd_op(const OpOptions& opt) {
  const RootContext ctx = qtorus::make_context(opt.N, opt.tol);
  const std::vector<Weight> ws = collect_weights(opt.weights_json, opt.quads);
  const int need = op_weight_count(opt.kind);
  if (static_cast<int>(ws.size()) < need)
    qtorus::fail(qtorus::errc::constraint_violation,
                 "op kind " + opt.kind + " needs " + std::to_string(need) +
                     " weight(s)");

  json out;
  out["command"] = "op";
  out["kind"] = opt.kind;
  out["N"] = opt.N;
  out["weights"] = std::vector<Weight>(ws.begin(), ws.begin() + need);

  std::vector<std::pair<std::string, TensorOperator>> mats;
  if (opt.kind == "A") {
    mats.emplace_back("operator", qtorus::gen_A(ctx));
  } else if (opt.kind == "B") {
    mats.emplace_back("operator", qtorus::gen_B(ctx));
  } else if (opt.kind == "S") {
    mats.emplace_back("operator", qtorus::s_map(ctx));
  } else if (opt.kind == "mu" || opt.kind == "dualL" || opt.kind == "dualR") {
    const qtorus::Rep rep = opt.kind == "mu" ? qtorus::rep_mu(ctx, ws[0])
                            : opt.kind == "dualL"
                                ? qtorus::rep_dual_left(ctx, ws[0])
                                : qtorus::rep_dual_right(ctx, ws[0]);
    out["weight"] = rep.weight;
    out["effective"] = rep.effective;
    mats.emplace_back("X", rep.X);
    mats.emplace_back("Y", rep.Y);
  } else if (opt.kind == "C") {
    mats.emplace_back("operator", qtorus::c_map(ctx, ws[0]));
  } else if (opt.kind == "D") {
    mats.emplace_back("operator", qtorus::d_map(ctx, ws[0]));
  } else if (opt.kind == "F") {
    mats.emplace_back("operator", qtorus::f_map(ctx, ws[0], ws[1]));
  } else if (opt.kind == "Finv") {
    mats.emplace_back("operator", qtorus::f_inv(ctx, ws[0], ws[1]));
  } else if (opt.kind == "Acan") {
    mats.emplace_back("operator", qtorus::a_canonical(ctx, ws[0], ws[1]));
  } else if (opt.kind == "Aclosed") {
    mats.emplace_back("operator", qtorus::a_closed_form(ctx, ws[0], ws[1]));
  } else if (opt.kind == "Phi") {
    const qtorus::DilogParams p = qtorus::decomp_params(ctx, ws[0], ws[1]);
    out["params"] = json{{"a", qtorus::complex_to_json(p.a)},
                         {"c", qtorus::complex_to_json(p.c)}};
    mats.emplace_back("operator",
                      qtorus::phi(ctx, p, qtorus::detail::f_torsion_arg(ctx)));
  } else if (opt.kind == "T") {
    mats.emplace_back("operator",
                      qtorus::t_compositional(ctx, ws[0], ws[1], ws[2]));
  } else if (opt.kind == "Tclosed") {
    mats.emplace_back("operator",
                      qtorus::t_closed_form(ctx, ws[0], ws[1], ws[2]));
  }

  if (opt.format == "csv-summary") {
    std::ostringstream csv;
    csv << "kind,part,N,arity,side,frobenius_norm\n";
    for (const auto& [label, op] : mats)
      csv << opt.kind << ',' << label << ',' << opt.N << ',' << op.arity << ','
          << op.side() << ',' << num(op.mat.norm()) << '\n';
    write_output(opt.output, csv.str());
  } else {
    for (const auto& [label, op] : mats) out[label] = op;
    write_output(opt.output, dump(out));
  }
  return 0;
}

// ---------------------------------------------------------------------------
// groupoid

struct LoopOptions {
  std::string relation;
  int N = 3;
  double tol = 1e-9;
  unsigned long long seed = 1;
  bool permissive = false;
  std::string output;
  std::string format = "json";
};

std::vector<LoopCase> build_loop_cases(const RootContext& ctx,
                                       const std::string& relation,
                                       std::mt19937_64& rng) {
  std::string rel = relation;
  if (rel.rfind("loop_", 0) == 0) rel = rel.substr(5);
  if (rel == "all") return qtorus::canonical_loops(ctx, rng);
  const std::vector<Weight> ws = qtorus::sample_regular_seq(rng, 5);
  std::vector<LoopCase> cases;
  if (rel == "a3")
    cases.push_back(qtorus::loop_a3(ctx, ws[0], ws[1]));
  else if (rel == "pentagon")
    cases.push_back(qtorus::loop_pentagon(ctx, ws[0], ws[1], ws[2], ws[3]));
  else if (rel == "ata")
    cases.push_back(qtorus::loop_ata(ctx, ws[0], ws[1], ws[2]));
  else if (rel == "tat")
    cases.push_back(qtorus::loop_tat(ctx, ws[0], ws[1], ws[2]));
  else if (rel == "commute")
    cases.push_back(qtorus::loop_commute(ctx, ws, false));
  else if (rel == "commute_mixed")
    cases.push_back(qtorus::loop_commute(ctx, ws, true));
  else if (rel == "trivial")
    cases = qtorus::loops_trivial(ctx, ws);
  else
    qtorus::fail(qtorus::errc::constraint_violation,
                 "unknown loop relation: " + relation);
  return cases;
}

int cmd_groupoid_loop(const LoopOptions& opt) {
  const RootContext ctx = qtorus::make_context(opt.N, opt.tol);
  std::mt19937_64 rng(opt.seed);
  const std::vector<LoopCase> cases = build_loop_cases(ctx, opt.relation, rng);

  json case_list = json::array();
  std::ostringstream csv;
  csv << "name,N,residual,scalar_re,scalar_im,passed\n";
  bool all_passed = true;
  for (const LoopCase& c : cases) {
    const RelationReport rep = qtorus::verify_loop(ctx, c.start, c.moves,
                                                   !opt.permissive, c.name);
    const long dim =
        qtorus::power_of(ctx.N, static_cast<int>(c.start.triangles.size()));
    const bool scalar_ok =
        rep.scalar.has_value() &&
        std::abs(*rep.scalar - c.expected_scalar) <= 10.0 * qtorus::tau(ctx, dim);
    const bool ok = rep.passed && scalar_ok;
    all_passed = all_passed && ok;
    json entry = rep;
    entry["expected_scalar"] = qtorus::complex_to_json(c.expected_scalar);
    entry["scalar_ok"] = scalar_ok;
    case_list.push_back(std::move(entry));
    const cd s = rep.scalar.value_or(cd(0, 0));
    csv << c.name << ',' << opt.N << ',' << num(rep.residual) << ','
        << num(s.real()) << ',' << num(s.imag()) << ','
        << (ok ? "true" : "false") << '\n';
  }

  if (opt.format == "csv-summary") {
    write_output(opt.output, csv.str());
  } else {
    json out;
    out["command"] = "groupoid loop";
    out["relation"] = opt.relation;
    out["N"] = opt.N;
    out["tol"] = opt.tol;
    out["seed"] = opt.seed;
    out["strict"] = !opt.permissive;
    out["cases"] = std::move(case_list);
    out["all_passed"] = all_passed;
    write_output(opt.output, dump(out));
  }
  return all_passed ? 0 : 1;
}

struct NgonOptions {
  int n = 5;
  int N = 3;
  double tol = 1e-9;
  unsigned long long seed = 1;
  bool verify_all_loops = false;
  int max_len = 8;
  long max_nodes = 600;
  int max_loops = 64;
  bool dot = false;
  std::string weights_json;
  std::string output;
  std::string format = "json";
};

int cmd_groupoid_ngon(const NgonOptions& opt) {
  const RootContext ctx = qtorus::make_context(opt.N, opt.tol);
  std::mt19937_64 rng(opt.seed);
  std::vector<Weight> ws;
  if (!opt.weights_json.empty()) {
    ws = collect_weights(opt.weights_json, {});
    if (static_cast<int>(ws.size()) != opt.n - 1)
      qtorus::fail(qtorus::errc::constraint_violation,
                   "an n-gon fan needs n-1 boundary weights");
  } else {
    ws = qtorus::sample_regular_seq(rng, opt.n - 1);
  }
  const qtorus::LDTriangulation fan = qtorus::build_fan(ws);
  const qtorus::ExploreResult er =
      qtorus::explore(fan, opt.max_len, opt.max_nodes);

  bool all_passed = true;
  std::vector<RelationReport> loops;
  if (opt.verify_all_loops) {
    loops = qtorus::verify_component_loops(ctx, fan, opt.max_len,
                                           opt.max_nodes, opt.max_loops);
    for (const RelationReport& r : loops) all_passed = all_passed && r.passed;
  }

  if (opt.format == "csv-summary") {
    std::ostringstream csv;
    csv << "name,N,residual,scalar_re,scalar_im,passed\n";
    for (const RelationReport& r : loops) {
      const cd s = r.scalar.value_or(cd(0, 0));
      csv << r.name << ',' << r.N << ',' << num(r.residual) << ','
          << num(s.real()) << ',' << num(s.imag()) << ','
          << (r.passed ? "true" : "false") << '\n';
    }
    write_output(opt.output, csv.str());
  } else {
    json out;
    out["command"] = "groupoid ngon";
    out["n"] = opt.n;
    out["N"] = opt.N;
    out["seed"] = opt.seed;
    out["weights"] = ws;
    out["explore"] = er;
    if (opt.verify_all_loops) {
      out["loops"] = loops;
      out["loops_checked"] = loops.size();
      out["all_passed"] = all_passed;
    }
    if (opt.dot) out["dot"] = qtorus::dot_export(er);
    write_output(opt.output, dump(out));
  }
  return all_passed ? 0 : 1;
}

struct TorusOptions {
  double alpha = 1.0;
  double beta = 1.0;
  int depth = 6;
  std::string branch = "pos";
  long max_nodes = 4000;
  double tol = 1e-9;
  bool dot = false;
  std::string output;
  std::string format = "json";
};

int cmd_groupoid_torus(const TorusOptions& opt) {
  const qtorus::TorusBranch branch = opt.branch == "neg"
                                         ? qtorus::TorusBranch::neg
                                         : qtorus::TorusBranch::pos;
  const qtorus::TorusReport rep =
      qtorus::opt_torus_explore(opt.alpha, opt.beta, opt.depth, branch,
                                opt.max_nodes);
  // A finite component legitimately plateaus once every object is found, so
  // strict monotonicity only binds while discovery is still ongoing.
  bool counts_ok = rep.counts_strictly_monotone;
  if (!counts_ok && !rep.explore.truncated) {
    const std::vector<long>& cum = rep.explore.cumulative_by_depth;
    counts_ok = true;
    size_t d = 1;
    while (d < cum.size() && cum[d] > cum[d - 1]) ++d;
    for (; d < cum.size(); ++d)
      if (cum[d] != cum[d - 1]) counts_ok = false;
  }
  const bool ok = rep.x_pattern_ok && rep.flip_pattern_ok &&
                  rep.flips_all_admissible && counts_ok;

  if (opt.format == "csv-summary") {
    std::ostringstream csv;
    csv << "alpha,beta,depth,branch,nodes,x_pattern_ok,flip_pattern_ok,"
           "flips_all_admissible,counts_strictly_monotone,all_passed\n";
    csv << num(opt.alpha) << ',' << num(opt.beta) << ',' << opt.depth << ','
        << opt.branch << ',' << rep.explore.nodes << ','
        << (rep.x_pattern_ok ? "true" : "false") << ','
        << (rep.flip_pattern_ok ? "true" : "false") << ','
        << (rep.flips_all_admissible ? "true" : "false") << ','
        << (rep.counts_strictly_monotone ? "true" : "false") << ','
        << (ok ? "true" : "false") << '\n';
    write_output(opt.output, csv.str());
  } else {
    json out = rep;
    out["command"] = "groupoid opt-torus";
    out["alpha"] = opt.alpha;
    out["beta"] = opt.beta;
    out["depth"] = opt.depth;
    out["branch"] = opt.branch;
    out["all_passed"] = ok;
    if (opt.dot) out["dot"] = qtorus::dot_export(rep.explore);
    write_output(opt.output, dump(out));
  }
  return ok ? 0 : 1;
}

void add_format_options(CLI::App* cmd, std::string& output,
                        std::string& format) {
  cmd->add_option("--output", output, "write the report to a file");
  cmd->add_option("--format", format, "report format")
      ->check(CLI::IsMember({"json", "csv-summary"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cyclic quantum torus toolkit"};
  app.require_subcommand(1);
  const double tol0 = default_tol();

  CheckOptions chk;
  chk.tol = tol0;
  CLI::App* check = app.add_subcommand(
      "check", "verify operator relations against sampled or explicit weights");
  check->add_option("SUITE", chk.suite_pos, "relation suite name, or 'all'");
  check->add_option("--suite", chk.suite_flag, "relation suite name, or 'all'");
  CLI::Option* chk_n =
      check->add_option("--N", chk.N, "root order, odd and at least 3");
  check->add_option("--tol", chk.tol, "relative tolerance");
  check->add_option("--seed", chk.seed, "sampling seed");
  check->add_option("--samples", chk.samples, "tuples per suite and level")
      ->check(CLI::PositiveNumber);
  check->add_option("--weights", chk.weights_json,
                    "explicit weight tuple as a JSON array (authoritative)");
  check->add_option("--l1", chk.quads[0], "weight 1 as re,im,re,im");
  check->add_option("--l2", chk.quads[1], "weight 2 as re,im,re,im");
  check->add_option("--l3", chk.quads[2], "weight 3 as re,im,re,im");
  check->add_option("--l4", chk.quads[3], "weight 4 as re,im,re,im");
  add_format_options(check, chk.output, chk.format);

  OpOptions op;
  op.tol = tol0;
  CLI::App* opc =
      app.add_subcommand("op", "emit one operator matrix as JSON");
  opc->add_option("--kind", op.kind, "operator kind")
      ->required()
      ->check(CLI::IsMember({"A", "B", "mu", "dualL", "dualR", "C", "D", "S",
                             "F", "Finv", "T", "Tclosed", "Acan", "Aclosed",
                             "Phi"}));
  opc->add_option("--N", op.N, "root order, odd and at least 3");
  opc->add_option("--tol", op.tol, "relative tolerance");
  opc->add_option("--weights", op.weights_json,
                  "weights as a JSON array (authoritative)");
  opc->add_option("--l1", op.quads[0], "weight 1 as re,im,re,im");
  opc->add_option("--l2", op.quads[1], "weight 2 as re,im,re,im");
  opc->add_option("--l3", op.quads[2], "weight 3 as re,im,re,im");
  add_format_options(opc, op.output, op.format);

  CLI::App* grp = app.add_subcommand(
      "groupoid", "labeled dotted triangulations: loops and exploration");
  grp->require_subcommand(1);

  LoopOptions lp;
  lp.tol = tol0;
  CLI::App* loop = grp->add_subcommand(
      "loop", "verify a canonical relation loop on sampled weights");
  loop->add_option("--relation", lp.relation,
                   "a3, pentagon, ata, tat, commute, commute_mixed, trivial, "
                   "or all")
      ->required();
  loop->add_option("--N", lp.N, "root order, odd and at least 3");
  loop->add_option("--tol", lp.tol, "relative tolerance");
  loop->add_option("--seed", lp.seed, "sampling seed");
  loop->add_flag("--permissive", lp.permissive,
                 "skip strict sanity checks along the path");
  add_format_options(loop, lp.output, lp.format);

  NgonOptions ng;
  ng.tol = tol0;
  CLI::App* ngon = grp->add_subcommand(
      "ngon", "explore the component of an n-gon fan triangulation");
  ngon->add_option("--n", ng.n, "polygon size")->check(CLI::Range(3, 8));
  ngon->add_option("--N", ng.N, "root order, odd and at least 3");
  ngon->add_option("--tol", ng.tol, "relative tolerance");
  ngon->add_option("--seed", ng.seed, "sampling seed");
  ngon->add_flag("--verify-all-loops", ng.verify_all_loops,
                 "verify every short loop in the explored component");
  ngon->add_option("--max-len", ng.max_len, "maximum loop length");
  ngon->add_option("--max-nodes", ng.max_nodes, "exploration node budget");
  ngon->add_option("--max-loops", ng.max_loops, "loop verification budget");
  ngon->add_flag("--dot", ng.dot, "include a Graphviz view of the component");
  ngon->add_option("--weights", ng.weights_json,
                   "boundary weights as a JSON array (n-1 entries)");
  add_format_options(ngon, ng.output, ng.format);

  TorusOptions ts;
  ts.tol = tol0;
  CLI::App* torus = grp->add_subcommand(
      "opt-torus", "explore the once-punctured torus component");
  torus->add_option("--alpha", ts.alpha, "seed parameter alpha")->required();
  torus->add_option("--beta", ts.beta, "seed parameter beta")->required();
  torus->add_option("--depth", ts.depth, "exploration depth")
      ->check(CLI::PositiveNumber);
  torus->add_option("--branch", ts.branch, "seed branch")
      ->check(CLI::IsMember({"pos", "neg"}));
  torus->add_option("--max-nodes", ts.max_nodes, "exploration node budget");
  torus->add_option("--tol", ts.tol, "relative tolerance");
  torus->add_flag("--dot", ts.dot, "include a Graphviz view of the component");
  add_format_options(torus, ts.output, ts.format);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*check) {
      chk.n_given = chk_n->count() > 0;
      return cmd_check(chk);
    }
    if (*opc) return cmd_op(op);
    if (*loop) return cmd_groupoid_loop(lp);
    if (*ngon) return cmd_groupoid_ngon(ng);
    if (*torus) return cmd_groupoid_torus(ts);
  } catch (const qtorus::qt_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

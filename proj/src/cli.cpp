#include "qtorsion/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qtorsion/closed_forms.hpp"
#include "qtorsion/fractional.hpp"
#include "qtorsion/graph_io.hpp"
#include "qtorsion/json_writer.hpp"
#include "qtorsion/numerics.hpp"
#include "qtorsion/oracle.hpp"
#include "qtorsion/spectral.hpp"
#include "qtorsion/suite.hpp"
#include "qtorsion/surgery.hpp"
#include "qtorsion/verify.hpp"

namespace qtorsion {

namespace {

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::string graph_path;
  std::string builtin;
  std::string alpha_text = "1";
  std::optional<double> kmax;
  std::optional<std::size_t> n_eigs;
  SolverOptions solver;
  std::string format = "json";
  std::string out_path;
  bool strict = false;

  // command specific
  std::size_t samples = 11;
  std::string op;
  std::string unfold_dirichlet = "all";
  bool check = false;
  bool chain = false;
  double h = 1e-2;
  double perturb_lambda = 0.0;
  bool no_oracle = false;

  std::vector<double> alphas;
  std::vector<std::string> warnings;
};

std::vector<double> parse_alphas(const std::string& text, std::vector<std::string>& warnings) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double a = 0.0;
    try {
      a = std::stod(item, &used);
    } catch (const std::exception&) {
      throw InputError("--alpha: cannot parse '" + item + "'");
    }
    if (used != item.size()) throw InputError("--alpha: cannot parse '" + item + "'");
    if (!(a > 0.0 && a <= 1.0)) throw InputError("--alpha: " + item + " is outside (0, 1]");
    if (std::find(out.begin(), out.end(), a) != out.end()) {
      warnings.push_back("duplicate alpha " + format_number(a) + " ignored");
      continue;
    }
    out.push_back(a);
  }
  if (out.empty()) throw InputError("--alpha: empty list");
  return out;
}

MetricGraph load_input(const RunConfig& cfg) {
  if (cfg.graph_path.empty() == cfg.builtin.empty()) {
    throw InputError("give exactly one of a graph document path or --builtin NAME");
  }
  MetricGraph g = cfg.builtin.empty() ? load_graph_document(cfg.graph_path) : builtin_graph(cfg.builtin);
  const ValidationReport report = validate(g);
  if (!report.ok()) throw InputError("invalid graph: " + report.to_string());
  return g;
}

std::string source_name(const RunConfig& cfg) {
  return cfg.builtin.empty() ? cfg.graph_path : "builtin:" + cfg.builtin;
}

double default_kmax(const MetricGraph& g) { return 200.0 * kPi / min_edge_length(g); }

SpectralBasis compute_basis(const MetricGraph& g, const RunConfig& cfg) {
  if (cfg.n_eigs) return scan_first_n(g, *cfg.n_eigs, cfg.solver);
  return scan_spectrum(g, cfg.kmax.value_or(default_kmax(g)), cfg.solver);
}

void collect(RunConfig& cfg, const SpectralBasis& b) {
  cfg.warnings.insert(cfg.warnings.end(), b.warnings.begin(), b.warnings.end());
}

ordered_json config_json(const RunConfig& cfg) {
  ordered_json c;
  c["command"] = cfg.command;
  if (cfg.command != "verify") c["graph"] = source_name(cfg);
  c["alpha"] = cfg.alphas;
  if (cfg.n_eigs) {
    c["n_eigs"] = *cfg.n_eigs;
  } else if (cfg.kmax) {
    c["kmax"] = *cfg.kmax;
  } else {
    c["kmax"] = "default";
  }
  c["solver"] = {{"oversampling", cfg.solver.oversampling},
                 {"accept_tol", cfg.solver.accept_tol},
                 {"multiplicity_tol", cfg.solver.multiplicity_tol},
                 {"refine_width", cfg.solver.refine_width}};
  if (cfg.command == "torsion") c["samples"] = cfg.samples;
  if (cfg.command == "surgery") {
    c["op"] = cfg.op;
    c["unfold_dirichlet"] = cfg.unfold_dirichlet;
    c["check"] = cfg.check;
  }
  if (cfg.command == "oracle") c["h"] = cfg.h;
  if (cfg.command == "verify") {
    c["perturb_lambda"] = cfg.perturb_lambda;
    c["oracle"] = !cfg.no_oracle;
  }
  c["format"] = cfg.format;
  return c;
}

// A rectangular result table rendered either as JSON records or CSV rows.
struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<ordered_json> rows;
};

std::string csv_cell(const ordered_json& v) {
  if (v.is_number_float()) return format_number(v.get<double>());
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
  }
  if (v.is_null()) return "";
  return v.dump();
}

std::string render(const RunConfig& cfg, const Table& table, ordered_json extra = ordered_json::object(),
                   const std::vector<std::string>& banners = {}) {
  if (cfg.format == "csv") {
    std::ostringstream os;
    os << "# schema_version=1\n";
    const ordered_json config = config_json(cfg);
    for (const auto& [key, value] : config.items()) {
      os << "# " << key << "=" << (value.is_string() ? value.get<std::string>() : dump_canonical(value, -1)) << "\n";
    }
    for (const auto& w : cfg.warnings) os << "# warning: " << w << "\n";
    for (const auto& b : banners) os << "# WARNING: " << b << "\n";
    for (std::size_t i = 0; i < table.columns.size(); ++i) os << (i ? "," : "") << table.columns[i];
    os << "\n";
    for (const auto& row : table.rows) {
      for (std::size_t i = 0; i < table.columns.size(); ++i) {
        os << (i ? "," : "") << csv_cell(row.at(table.columns[i]));
      }
      os << "\n";
    }
    return os.str();
  }
  ordered_json j;
  j["schema_version"] = "1";
  j["config"] = config_json(cfg);
  j["warnings"] = cfg.warnings;
  if (!banners.empty()) j["notices"] = banners;
  for (auto& [key, value] : extra.items()) j[key] = value;
  j[table.name] = table.rows;
  return dump_canonical(j) + "\n";
}

ordered_json graph_summary(const MetricGraph& g) {
  return {{"vertices", g.num_vertices()},
          {"edges", g.num_edges()},
          {"total_length", total_length(g)},
          {"min_edge_length", min_edge_length(g)}};
}

std::string cmd_spectrum(RunConfig& cfg) {
  const MetricGraph g = load_input(cfg);
  const SpectralBasis b = compute_basis(g, cfg);
  collect(cfg, b);
  Table t{"eigenpairs", {"n", "k", "lambda", "multiplicity_index", "multiplicity", "mass"}, {}};
  for (std::size_t i = 0; i < b.size(); ++i) {
    const auto& p = b.pairs[i];
    t.rows.push_back({{"n", i + 1},
                      {"k", p.k},
                      {"lambda", p.lambda},
                      {"multiplicity_index", p.multiplicity_index},
                      {"multiplicity", p.multiplicity},
                      {"mass", p.mass}});
  }
  ordered_json extra;
  extra["graph"] = graph_summary(g);
  extra["kmax"] = b.kmax;
  extra["captured_mass"] = b.captured_mass;
  extra["next_lambda"] = b.next_lambda ? ordered_json(*b.next_lambda) : ordered_json(nullptr);
  return render(cfg, t, extra);
}

std::string cmd_rigidity(RunConfig& cfg) {
  const MetricGraph g = load_input(cfg);
  const SpectralBasis b = compute_basis(g, cfg);
  collect(cfg, b);
  Table t{"results",
          {"alpha", "value", "tail_bound", "n_terms", "lower", "upper", "simple_lower", "simple_upper", "violations"},
          {}};
  for (double alpha : cfg.alphas) {
    const RigidityResult r = rigidity(b, alpha);
    const BoundsPair pb = paper_bounds(g, alpha);
    const SimpleBounds sb = simple_bounds(b, alpha);
    std::vector<std::string> violations;
    if (r.value + r.tail_bound < pb.lower - 1e-8) violations.push_back("below flower lower bound");
    if (r.value > pb.upper + 1e-8) violations.push_back("above interval upper bound");
    if (r.value < sb.lower - 1e-12) violations.push_back("below first-mode lower bound");
    if (r.value > sb.upper + 1e-12) violations.push_back("above |G|/lambda_1^alpha");
    for (const auto& v : violations) cfg.warnings.push_back("alpha=" + format_number(alpha) + ": " + v);
    std::string joined;
    for (const auto& v : violations) joined += (joined.empty() ? "" : "; ") + v;
    t.rows.push_back({{"alpha", alpha},
                      {"value", r.value},
                      {"tail_bound", r.tail_bound},
                      {"n_terms", r.n_terms},
                      {"lower", pb.lower},
                      {"upper", pb.upper},
                      {"simple_lower", sb.lower},
                      {"simple_upper", sb.upper},
                      {"violations", joined}});
  }
  ordered_json extra;
  extra["graph"] = graph_summary(g);
  return render(cfg, t, extra);
}

std::string cmd_torsion(RunConfig& cfg) {
  if (cfg.samples < 2) throw InputError("--samples must be at least 2");
  const MetricGraph g = load_input(cfg);
  const SpectralBasis b = compute_basis(g, cfg);
  collect(cfg, b);
  std::vector<std::string> banners;
  for (double alpha : cfg.alphas) {
    if (alpha <= 0.5) {
      banners.push_back("alpha=" + format_number(alpha) +
                        ": error_estimate is heuristic and pointwise convergence is not guaranteed for alpha <= 0.5");
    }
  }
  Table t{"samples", {"alpha", "edge", "s", "u_alpha", "error_estimate"}, {}};
  for (double alpha : cfg.alphas) {
    for (const auto& e : g.edges()) {
      for (std::size_t j = 0; j < cfg.samples; ++j) {
        const double s = j + 1 == cfg.samples ? e.length : e.length * static_cast<double>(j) /
                                                                static_cast<double>(cfg.samples - 1);
        const TorsionSample ts = torsion_at(b, alpha, {e.id, s});
        t.rows.push_back(
            {{"alpha", alpha}, {"edge", e.id}, {"s", s}, {"u_alpha", ts.value}, {"error_estimate", ts.error_estimate}});
      }
    }
  }
  return render(cfg, t, ordered_json::object(), banners);
}

SurgeryResult apply_op(const MetricGraph& g, const RunConfig& cfg) {
  const std::string& op = cfg.op;
  auto arg = [&](const std::string& prefix) { return op.substr(prefix.size()); };
  if (op == "double") return double_edges(g);
  if (op == "unfold") {
    if (cfg.unfold_dirichlet != "all" && cfg.unfold_dirichlet != "first") {
      throw InputError("--unfold-dirichlet must be 'all' or 'first'");
    }
    return unfold_to_cycle(g, cfg.unfold_dirichlet == "all" ? UnfoldDirichlet::AllVisits : UnfoldDirichlet::FirstVisit);
  }
  if (op.rfind("glue:", 0) == 0) {
    std::vector<std::string> members;
    std::stringstream ss(arg("glue:"));
    std::string v;
    while (std::getline(ss, v, ',')) members.push_back(v);
    return glue_vertices(g, members);
  }
  if (op.rfind("cut:", 0) == 0) return cut_cycle(g, arg("cut:"));
  throw InputError("--op must be double, glue:v1,v2[,...], unfold or cut:v");
}

std::string cmd_surgery(RunConfig& cfg, bool& check_failed) {
  if (cfg.format != "json") throw InputError("surgery emits a graph document; only --format json is supported");
  if (cfg.op.empty()) throw InputError("surgery needs --op");
  const MetricGraph g = load_input(cfg);
  const SurgeryResult res = apply_op(g, cfg);

  ordered_json doc = graph_to_json(res.graph);
  ordered_json prov = ordered_json::object();
  for (const auto& [k, v] : res.provenance) prov[k] = v;
  doc["provenance"] = prov;
  ordered_json meta;
  meta["schema_version"] = "1";
  meta["op"] = to_string(res.op.kind);
  meta["config"] = config_json(cfg);

  if (cfg.check) {
    const SpectralBasis before = compute_basis(g, cfg);
    const SpectralBasis after = compute_basis(res.graph, cfg);
    collect(cfg, before);
    collect(cfg, after);
    ordered_json checks = ordered_json::array();
    for (double alpha : cfg.alphas) {
      const RigidityResult a = rigidity(before, alpha);
      const RigidityResult c = rigidity(after, alpha);
      double lhs = a.value, rhs = c.value, lhs_tail = a.tail_bound, rhs_tail = c.tail_bound;
      std::string relation;
      bool equality = false;
      switch (res.op.kind) {
        case SurgeryKind::Double:
          relation = "T(G) <= T(result)/2";
          rhs *= 0.5;
          rhs_tail *= 0.5;
          break;
        case SurgeryKind::Glue:
          relation = "T(result) <= T(G)";
          std::swap(lhs, rhs);
          std::swap(lhs_tail, rhs_tail);
          break;
        case SurgeryKind::Unfold:
          relation = "T(G) <= T(result)";
          break;
        case SurgeryKind::Cut:
          relation = "T(G) = T(result)";
          equality = true;
          break;
      }
      const double tol = lhs_tail + rhs_tail + 1e-8;
      const bool holds = equality ? std::abs(lhs - rhs) <= tol : lhs <= rhs + tol;
      if (!holds) check_failed = true;
      checks.push_back({{"alpha", alpha},
                        {"rigidity_input", a.value},
                        {"tail_input", a.tail_bound},
                        {"rigidity_result", c.value},
                        {"tail_result", c.tail_bound},
                        {"relation", relation},
                        {"tolerance", tol},
                        {"holds", holds}});
    }
    meta["check"] = checks;
  }
  meta["warnings"] = cfg.warnings;
  doc["surgery"] = meta;
  return dump_canonical(doc) + "\n";
}

std::string cmd_bounds(RunConfig& cfg, bool& chain_failed) {
  const MetricGraph g = load_input(cfg);
  Table t{"bounds", {"alpha", "lower", "upper", "total_length", "num_edges"}, {}};
  for (double alpha : cfg.alphas) {
    const BoundsPair pb = paper_bounds(g, alpha);
    t.rows.push_back({{"alpha", alpha},
                      {"lower", pb.lower},
                      {"upper", pb.upper},
                      {"total_length", pb.total_length},
                      {"num_edges", pb.num_edges}});
  }
  ordered_json extra = ordered_json::object();
  if (cfg.chain) {
    if (cfg.format != "json") throw InputError("--chain is only available with --format json");
    const double kmax = cfg.kmax.value_or(default_kmax(g));
    ordered_json reports = ordered_json::array();
    for (double alpha : cfg.alphas) {
      const ChainReport rep = upper_bound_chain(g, alpha, kmax, cfg.solver);
      ordered_json stages = ordered_json::array();
      for (const auto& s : rep.stages) {
        stages.push_back(
            {{"name", s.name}, {"rigidity", s.rigidity}, {"tail_bound", s.tail_bound}, {"n_terms", s.n_terms}});
      }
      ordered_json checks = ordered_json::array();
      for (const auto& c : rep.checks) {
        if (!c.holds) chain_failed = true;
        checks.push_back(
            {{"relation", c.relation}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"tolerance", c.tolerance}, {"holds", c.holds}});
      }
      reports.push_back(
          {{"alpha", alpha}, {"interval_bound", rep.interval_bound}, {"stages", stages}, {"checks", checks}});
    }
    extra["chain"] = reports;
  }
  return render(cfg, t, extra);
}

std::string cmd_oracle(RunConfig& cfg) {
  const MetricGraph g = load_input(cfg);
  const FdSpectrum coarse = fd_spectrum(discretize(g, cfg.h));
  const FdSpectrum fine = fd_spectrum(discretize(g, 0.5 * cfg.h));
  Table t{"results", {"alpha", "h", "value_h", "value_half_h", "richardson"}, {}};
  for (double alpha : cfg.alphas) {
    const double a = fd_rigidity(coarse, alpha);
    const double b = fd_rigidity(fine, alpha);
    t.rows.push_back(
        {{"alpha", alpha}, {"h", cfg.h}, {"value_h", a}, {"value_half_h", b}, {"richardson", richardson(a, b)}});
  }
  const std::size_t n = std::min<std::size_t>(cfg.n_eigs.value_or(5), static_cast<std::size_t>(coarse.eigenvalues.size()));
  ordered_json eig = ordered_json::array();
  for (std::size_t i = 0; i < n; ++i) {
    const auto idx = static_cast<Eigen::Index>(i);
    eig.push_back({{"n", i + 1},
                   {"mu_h", coarse.eigenvalues(idx)},
                   {"mu_half_h", fine.eigenvalues(idx)},
                   {"richardson", richardson(coarse.eigenvalues(idx), fine.eigenvalues(idx))}});
  }
  ordered_json extra;
  extra["graph"] = graph_summary(g);
  if (cfg.format == "json") extra["eigenvalues"] = eig;
  return render(cfg, t, extra);
}

std::string cmd_verify(RunConfig& cfg, bool& failed) {
  VerifyOptions vo;
  vo.alphas = cfg.alphas;
  vo.kmax = cfg.kmax.value_or(0.0);
  vo.solver = cfg.solver;
  vo.lambda_perturbation = cfg.perturb_lambda;
  vo.run_oracle = !cfg.no_oracle;
  const VerifyReport rep = run_verification(vo);
  failed = !rep.all_passed();
  Table t{"checks", {"name", "passed", "detail"}, {}};
  for (const auto& c : rep.checks) t.rows.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  ordered_json extra;
  extra["passed"] = rep.checks.size() - rep.failures();
  extra["failed"] = rep.failures();
  return render(cfg, t, extra);
}

void add_common(CLI::App* sub, RunConfig& cfg, bool graph_input) {
  if (graph_input) {
    sub->add_option("graph", cfg.graph_path, "Graph document (JSON)");
    sub->add_option("--builtin", cfg.builtin, "Use a built-in graph instead of a document");
  }
  sub->add_option("--alpha", cfg.alpha_text, "Comma-separated exponents in (0, 1]");
  auto* kmax = sub->add_option("--kmax", cfg.kmax, "Wavenumber scan ceiling (default 200 pi / l_min)")
                   ->check(CLI::PositiveNumber);
  sub->add_option("--n-eigs", cfg.n_eigs, "Compute the first N eigenvalues instead of scanning to --kmax")
      ->check(CLI::PositiveNumber)
      ->excludes(kmax);
  sub->add_option("--tol", cfg.solver.accept_tol, "Root acceptance: sigma_min < tol * ||M(k)||");
  sub->add_option("--mult-tol", cfg.solver.multiplicity_tol, "Multiplicity threshold relative to sigma_max");
  sub->add_option("--oversampling", cfg.solver.oversampling, "Scan grid oversampling factor");
  sub->add_option("--refine-width", cfg.solver.refine_width, "Relative width of root refinement");
  sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--out", cfg.out_path, "Write the report here instead of standard output");
  sub->add_flag("--strict", cfg.strict, "Exit with status 3 if the solver issued warnings");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Spectra and fractional torsional rigidity of metric graphs"};
  app.name("qtorsion");
  app.require_subcommand(1);

  auto* spectrum = app.add_subcommand("spectrum", "Eigenvalues, multiplicities and mass coefficients");
  add_common(spectrum, cfg, true);
  auto* rig = app.add_subcommand("rigidity", "Fractional torsional rigidity with tail and closed-form bounds");
  add_common(rig, cfg, true);
  auto* tor = app.add_subcommand("torsion", "Fractional torsion function sampled along every edge");
  add_common(tor, cfg, true);
  tor->add_option("--samples", cfg.samples, "Samples per edge, endpoints included");
  auto* surg = app.add_subcommand("surgery", "Apply a graph transformation");
  add_common(surg, cfg, true);
  surg->add_option("--op", cfg.op, "double | glue:v1,v2[,...] | unfold | cut:v")->required();
  surg->add_option("--unfold-dirichlet", cfg.unfold_dirichlet, "all | first");
  surg->add_flag("--check", cfg.check, "Also compare rigidities before and after");
  auto* bounds = app.add_subcommand("bounds", "Flower lower and interval upper bounds");
  add_common(bounds, cfg, true);
  bounds->add_flag("--chain", cfg.chain, "Run the double/unfold/cut comparison chain");
  auto* orc = app.add_subcommand("oracle", "Finite-difference rigidity with Richardson extrapolation");
  orc->set_help_flag("--help", "Print this help message and exit");
  add_common(orc, cfg, true);
  orc->add_option("--h", cfg.h, "Mesh width (the second run uses h/2)")->check(CLI::PositiveNumber);
  auto* ver = app.add_subcommand("verify", "Run the invariant battery on the built-in graphs");
  add_common(ver, cfg, false);
  ver->add_option("--perturb-lambda", cfg.perturb_lambda, "Test hook: relative eigenvalue perturbation");
  ver->add_flag("--no-oracle", cfg.no_oracle, "Skip the finite-difference cross-checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  if (ver->parsed() && ver->count("--alpha") == 0) cfg.alpha_text = "0.3,0.5,0.8,1.0";
  cfg.command = app.get_subcommands().front()->get_name();

  std::string report;
  int code = kExitOk;
  try {
    cfg.solver.check();
    cfg.alphas = parse_alphas(cfg.alpha_text, cfg.warnings);
    bool failed = false;
    if (cfg.command == "spectrum") {
      report = cmd_spectrum(cfg);
    } else if (cfg.command == "rigidity") {
      report = cmd_rigidity(cfg);
    } else if (cfg.command == "torsion") {
      report = cmd_torsion(cfg);
    } else if (cfg.command == "surgery") {
      report = cmd_surgery(cfg, failed);
    } else if (cfg.command == "bounds") {
      report = cmd_bounds(cfg, failed);
    } else if (cfg.command == "oracle") {
      report = cmd_oracle(cfg);
    } else {
      report = cmd_verify(cfg, failed);
    }
    if (failed) code = kExitVerifyFailed;
  } catch (const SurgeryError& e) {
    err << "error: " << e.what() << "\n";
    return kExitSurgeryPrecondition;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }

  for (const auto& w : cfg.warnings) err << "warning: " << w << "\n";
  if (cfg.strict && !cfg.warnings.empty()) {
    err << "error: warnings escalated by --strict\n";
    return kExitStrictWarning;
  }

  if (cfg.out_path.empty()) {
    out << report;
  } else {
    std::ofstream f(cfg.out_path, std::ios::binary);
    if (!f || !(f << report)) {
      err << "error: cannot write '" << cfg.out_path << "'\n";
      return kExitInputError;
    }
  }
  if (code == kExitVerifyFailed) err << "verification failed\n";
  return code;
}

}  // namespace qtorsion

#include "qtorsion/verify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "qtorsion/closed_forms.hpp"
#include "qtorsion/fractional.hpp"
#include "qtorsion/graph.hpp"
#include "qtorsion/json_writer.hpp"
#include "qtorsion/numerics.hpp"
#include "qtorsion/oracle.hpp"
#include "qtorsion/suite.hpp"
#include "qtorsion/surgery.hpp"

namespace qtorsion {

bool VerifyReport::all_passed() const { return failures() == 0; }

std::size_t VerifyReport::failures() const {
  return static_cast<std::size_t>(
      std::count_if(checks.begin(), checks.end(), [](const CheckResult& c) { return !c.passed; }));
}

void perturb_eigenvalues(SpectralBasis& basis, double relative) {
  if (relative == 0.0) return;
  const double f = 1.0 + relative;
  for (auto& p : basis.pairs) {
    p.lambda *= f;
    p.k = std::sqrt(p.lambda);
  }
  if (basis.next_lambda) *basis.next_lambda *= f;
}

namespace {

std::string fmt(double x) { return format_number(x); }

bool all_degrees_even(const MetricGraph& g) {
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    if (g.incident(v).size() % 2 != 0) return false;
  }
  return true;
}

bool is_cycle(const MetricGraph& g) {
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    if (g.incident(v).size() != 2) return false;
  }
  return true;
}

const std::string& first_dirichlet(const MetricGraph& g) {
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    if (g.is_dirichlet(v)) return g.vertices()[v];
  }
  throw GraphError("graph has no Dirichlet vertex");
}

class Runner {
 public:
  explicit Runner(const VerifyOptions& opts) : opts_(opts) {}

  const SpectralBasis& basis(const std::string& key, const MetricGraph& g) {
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    const double kmax = opts_.kmax > 0.0 ? opts_.kmax : 200.0 * kPi / min_edge_length(g);
    SpectralBasis b = scan_spectrum(g, kmax, opts_.solver);
    perturb_eigenvalues(b, opts_.lambda_perturbation);
    return cache_.emplace(key, std::move(b)).first->second;
  }

  void add(std::string name, bool passed, std::string detail) {
    report_.checks.push_back({std::move(name), passed, std::move(detail)});
  }

  void closed_form(const std::string& name, double alpha, double exact) {
    const RigidityResult r = rigidity(basis(name, builtin_graph(name)), alpha);
    const double tol = r.tail_bound + 1e-9;
    std::ostringstream os;
    os << "T=" << fmt(r.value) << " tail=" << fmt(r.tail_bound) << " closed form=" << fmt(exact);
    add("closed form " + name + " alpha=" + fmt(alpha), r.value - 1e-9 <= exact && exact <= r.value + tol, os.str());
  }

  void sandwich(const std::string& name, double alpha) {
    const MetricGraph g = builtin_graph(name);
    const SpectralBasis& b = basis(name, g);
    const RigidityResult r = rigidity(b, alpha);
    const BoundsPair pb = paper_bounds(g, alpha);
    const SimpleBounds sb = simple_bounds(b, alpha);
    std::ostringstream os;
    os << "flower=" << fmt(pb.lower) << " T=" << fmt(r.value) << " tail=" << fmt(r.tail_bound)
       << " interval=" << fmt(pb.upper);
    add("bounds " + name + " alpha=" + fmt(alpha),
        pb.lower - 1e-8 <= r.value + r.tail_bound && r.value <= pb.upper + 1e-8, os.str());
    std::ostringstream os2;
    os2 << "lower=" << fmt(sb.lower) << " T=" << fmt(r.value) << " upper=" << fmt(sb.upper);
    add("simple bounds " + name + " alpha=" + fmt(alpha),
        sb.lower <= r.value + 1e-12 && r.value <= sb.upper + 1e-12, os2.str());
  }

  void compare(const std::string& label, const std::string& key_lhs, const MetricGraph& lhs, double lhs_scale,
               const std::string& key_rhs, const MetricGraph& rhs, double rhs_scale, double alpha, bool equality) {
    const RigidityResult a = rigidity(basis(key_lhs, lhs), alpha);
    const RigidityResult b = rigidity(basis(key_rhs, rhs), alpha);
    const double l = lhs_scale * a.value;
    const double r = rhs_scale * b.value;
    const double tol = lhs_scale * a.tail_bound + rhs_scale * b.tail_bound + 1e-8;
    const bool ok = equality ? std::abs(l - r) <= tol : l <= r + tol;
    std::ostringstream os;
    os << "lhs=" << fmt(l) << " rhs=" << fmt(r) << " tol=" << fmt(tol);
    add(label + " alpha=" + fmt(alpha), ok, os.str());
  }

  void surgery(const std::string& name, double alpha) {
    const MetricGraph g = builtin_graph(name);
    const MetricGraph dbl = double_edges(g).graph;
    compare("double " + name, name, g, 1.0, name + "/double", dbl, 0.5, alpha, false);
    if (g.num_vertices() >= 2) {
      const MetricGraph glued = glue_vertices(g, {g.vertices()[0], g.vertices()[1]}).graph;
      compare("glue " + name, name + "/glue", glued, 1.0, name, g, 1.0, alpha, false);
    }
    if (all_degrees_even(g)) {
      const MetricGraph cyc = unfold_to_cycle(g).graph;
      compare("unfold " + name, name, g, 1.0, name + "/unfold", cyc, 1.0, alpha, false);
      const MetricGraph cyc1 = unfold_to_cycle(g, UnfoldDirichlet::FirstVisit).graph;
      compare("unfold(first) " + name, name, g, 1.0, name + "/unfold1", cyc1, 1.0, alpha, false);
    }
    const MetricGraph cycle = is_cycle(g) ? g : unfold_to_cycle(dbl).graph;
    const std::string key = is_cycle(g) ? name : name + "/double/unfold";
    const MetricGraph path = cut_cycle(cycle, first_dirichlet(cycle)).graph;
    compare("cut " + name, key, cycle, 1.0, key + "/cut", path, 1.0, alpha, true);
  }

  void oracle_checks() {
    const MetricGraph star = builtin_graph("star3");
    const double coarse = fd_rigidity(star, 1e-2, 1.0);
    const double fine = fd_rigidity(star, 5e-3, 1.0);
    const double extrapolated = richardson(coarse, fine);
    std::ostringstream os;
    os << "h=1e-2: " << fmt(coarse) << " h=5e-3: " << fmt(fine) << " extrapolated=" << fmt(extrapolated);
    add("oracle star3 alpha=1", std::abs(extrapolated - 1.0) <= 1e-3, os.str());

    const SpectralBasis& b = basis("star3", star);
    const FdSpectrum fd = fd_spectrum(discretize(star, 5e-3));
    double worst = 0.0;
    for (std::size_t i = 0; i < 5 && i < b.size(); ++i) {
      const double mu = fd.eigenvalues(static_cast<Eigen::Index>(i));
      worst = std::max(worst, std::abs(mu - b.pairs[i].lambda) / b.pairs[i].lambda);
    }
    add("oracle star3 spectrum", worst <= 1e-4, "max relative deviation " + fmt(worst) + " at h=5e-3");
  }

  VerifyReport run() {
    for (double alpha : opts_.alphas) {
      check_alpha(alpha);
      closed_form("interval", alpha, interval_rigidity_dn(1.0, alpha));
      for (std::size_t n = 1; n <= 3; ++n) {
        closed_form("flower" + std::to_string(n), alpha, flower_rigidity(n, 1.0, alpha));
      }
      closed_form("loop", alpha, flower_rigidity(1, 2.0, alpha));
      for (const std::string name : {"interval", "flower2", "star3", "doubled-triangle", "loop"}) {
        sandwich(name, alpha);
      }
      for (const std::string name : {"interval", "flower2", "star3", "doubled-triangle", "loop"}) {
        surgery(name, alpha);
      }
    }
    if (opts_.run_oracle) oracle_checks();
    return std::move(report_);
  }

 private:
  const VerifyOptions& opts_;
  std::map<std::string, SpectralBasis> cache_;
  VerifyReport report_;
};

}  // namespace

VerifyReport run_verification(const VerifyOptions& opts) {
  opts.solver.check();
  if (opts.alphas.empty()) throw std::invalid_argument("verify needs at least one alpha");
  return Runner(opts).run();
}

}  // namespace qtorsion

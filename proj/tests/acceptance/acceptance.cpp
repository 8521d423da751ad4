// Acceptance suite: prints one [PASS]/[FAIL] line per criterion and exits
// nonzero if any criterion fails.
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qtorsion/closed_forms.hpp"
#include "qtorsion/fractional.hpp"
#include "qtorsion/graph.hpp"
#include "qtorsion/numerics.hpp"
#include "qtorsion/oracle.hpp"
#include "qtorsion/spectral.hpp"
#include "qtorsion/suite.hpp"
#include "qtorsion/surgery.hpp"

using namespace qtorsion;

namespace {

const std::vector<double> kAlphas = {0.3, 0.5, 0.8, 1.0};
const std::vector<std::string> kSuite = {"star3", "doubled-triangle", "loop", "flower2"};

struct Outcome {
  bool passed = true;
  std::ostringstream notes;

  void expect(bool ok, const std::string& what) {
    if (!ok) {
      if (passed) notes << " first failure: ";
      else notes << "; ";
      notes << what;
      passed = false;
    }
  }
};

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

double default_kmax(const MetricGraph& g) { return 200.0 * kPi / min_edge_length(g); }

std::map<std::string, SpectralBasis> g_cache;

const SpectralBasis& basis_of(const std::string& key, const MetricGraph& g) {
  auto it = g_cache.find(key);
  if (it == g_cache.end()) it = g_cache.emplace(key, scan_spectrum(g, default_kmax(g))).first;
  return it->second;
}

const SpectralBasis& suite_basis(const std::string& name) { return basis_of(name, builtin_graph(name)); }

// Independent evaluation of sum over odd n of n^{-s}: direct sum plus the
// midpoint of the integral bracket for the remainder. Returns the half-width
// of the bracket through `radius`.
double odd_sum(double s, double* radius) {
  const long terms = 400000;
  double sum = 0.0;
  const long last = 2 * terms - 1;
  for (long n = last; n >= 1; n -= 2) sum += std::pow(static_cast<double>(n), -s);
  const double lo = std::pow(static_cast<double>(last + 2), 1.0 - s) / (2.0 * (s - 1.0));
  const double hi = std::pow(static_cast<double>(last), 1.0 - s) / (2.0 * (s - 1.0));
  *radius = 0.5 * (hi - lo);
  return sum + 0.5 * (lo + hi);
}

// T for the Dirichlet-Neumann interval of length L: sum of mass_n^2/lambda_n^alpha with
// mass_n^2 = 8L/((2n-1) pi)^2 and lambda_n = ((2n-1) pi / (2L))^2.
double interval_reference(double len, double alpha, double* radius) {
  double r = 0.0;
  const double odd = odd_sum(2.0 + 2.0 * alpha, &r);
  const double scale = 8.0 * len * std::pow(2.0 * len, 2.0 * alpha) / std::pow(kPi, 2.0 + 2.0 * alpha);
  *radius = scale * r;
  return scale * odd;
}

// Equilateral flower, N petals of length L: each petal is a Dirichlet-Dirichlet interval with
// mass^2 = 8L/(n pi)^2 for odd n and lambda_n = (n pi / L)^2.
double flower_reference(std::size_t petals, double len, double alpha, double* radius) {
  double r = 0.0;
  const double odd = odd_sum(2.0 + 2.0 * alpha, &r);
  const double scale = static_cast<double>(petals) * 8.0 * std::pow(len, 1.0 + 2.0 * alpha) / std::pow(kPi, 2.0 + 2.0 * alpha);
  *radius = scale * r;
  return scale * odd;
}

// ---------------------------------------------------------------------------

Outcome classical_interval() {
  Outcome o;
  const auto b = scan_spectrum(builtin_graph("interval"), 200.0 * kPi);
  const auto r = rigidity(b, 1.0);
  const double exact = 1.0 / 3.0;
  o.expect(r.tail_bound <= 1e-6, "tail " + num(r.tail_bound) + " > 1e-6");
  o.expect(r.value - 1e-12 <= exact && exact <= r.value + r.tail_bound,
           "1/3 outside [" + num(r.value) + ", " + num(r.value + r.tail_bound) + "]");
  o.notes << " T=" << num(r.value) << " tail=" << num(r.tail_bound);
  return o;
}

Outcome classical_flower() {
  Outcome o;
  for (std::size_t n = 1; n <= 3; ++n) {
    const auto b = scan_spectrum(builtin_graph("flower" + std::to_string(n)), 200.0 * kPi);
    const auto r = rigidity(b, 1.0);
    const double exact = static_cast<double>(n) / 12.0;
    const std::string tag = "N=" + std::to_string(n) + ": ";
    o.expect(r.tail_bound <= 1e-6, tag + "tail " + num(r.tail_bound));
    o.expect(r.value - 1e-12 <= exact && exact <= r.value + r.tail_bound, tag + "N/12 outside value+tail");
    o.expect(b.pairs.front().multiplicity == n, tag + "multiplicity " + std::to_string(b.pairs.front().multiplicity));
    std::size_t first_space = 0;
    for (const auto& p : b.pairs) first_space += std::abs(p.k - b.pairs.front().k) < 1e-9 * p.k;
    o.expect(first_space == n, tag + "first eigenspace has " + std::to_string(first_space) + " pairs");
  }
  return o;
}

Outcome fractional_closed_forms() {
  Outcome o;
  double worst = 0.0;
  for (double alpha : {0.25, 0.5, 0.75}) {
    std::vector<std::tuple<std::string, double, double>> cases;  // name, reference, library closed form
    double rad = 0.0;
    cases.emplace_back("interval", interval_reference(1.0, alpha, &rad), interval_rigidity_dn(1.0, alpha));
    for (std::size_t n = 1; n <= 3; ++n) {
      cases.emplace_back("flower" + std::to_string(n), flower_reference(n, 1.0, alpha, &rad),
                         flower_rigidity(n, 1.0, alpha));
    }
    o.expect(rad < 1e-12, "reference bracket too wide");
    for (const auto& [name, reference, library] : cases) {
      const std::string tag = name + " alpha=" + num(alpha) + ": ";
      o.expect(std::abs(reference - library) <= 1e-12 * reference, tag + "closed form " + num(library) +
                                                                        " vs direct odd sum " + num(reference));
      const auto r = rigidity(suite_basis(name), alpha);
      o.expect(r.value - 1e-9 <= library && library <= r.value + r.tail_bound + 1e-9,
               tag + "closed form outside value+tail");
      worst = std::max(worst, r.tail_bound);
    }
  }
  o.notes << " largest tail " << num(worst);
  return o;
}

Outcome bounds_sandwich() {
  Outcome o;
  const double target = 5e-9;
  for (double alpha : kAlphas) {
    for (const auto& name : kSuite) {
      const auto g = builtin_graph(name);
      const auto pb = paper_bounds(g, alpha);
      auto r = rigidity(suite_basis(name), alpha);
      // The partial sum only grows with kmax; escalate when the lower comparison is not yet decided.
      if (r.value < pb.lower - 1e-8) r = rigidity_to_tail(g, alpha, target, default_kmax(g));
      const std::string tag = name + " alpha=" + num(alpha) + ": ";
      o.expect(pb.lower - 1e-8 <= r.value, tag + "T=" + num(r.value) + " below flower bound " + num(pb.lower));
      o.expect(r.value <= pb.upper + r.tail_bound, tag + "T above interval bound");
    }
    // Sharpness: the interval attains the upper bound, equilateral flowers the lower one.
    const auto iv = rigidity_to_tail(builtin_graph("interval"), alpha, target, 200.0 * kPi);
    const double up = paper_bounds(builtin_graph("interval"), alpha).upper;
    o.expect(std::abs(iv.value - up) <= 1e-8, "interval alpha=" + num(alpha) + " misses upper bound by " +
                                                  num(up - iv.value));
    for (const char* name : {"flower2", "loop"}) {
      const auto g = builtin_graph(name);
      const auto fl = rigidity_to_tail(g, alpha, target, default_kmax(g));
      const double low = paper_bounds(g, alpha).lower;
      o.expect(std::abs(fl.value - low) <= 1e-8,
               std::string(name) + " alpha=" + num(alpha) + " misses lower bound by " + num(low - fl.value));
    }
  }
  return o;
}

bool all_even(const MetricGraph& g) {
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    if (g.incident(v).size() % 2) return false;
  }
  return true;
}

bool is_cycle(const MetricGraph& g) {
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    if (g.incident(v).size() != 2) return false;
  }
  return true;
}

Outcome surgery_monotonicity() {
  Outcome o;
  std::size_t comparisons = 0;
  auto compare = [&](const std::string& label, double alpha, const std::string& ka, const MetricGraph& a, double sa,
                     const std::string& kb, const MetricGraph& b, double sb, bool equality) {
    const auto ra = rigidity(basis_of(ka, a), alpha);
    const auto rb = rigidity(basis_of(kb, b), alpha);
    const double lhs = sa * ra.value, rhs = sb * rb.value;
    const double tol = sa * ra.tail_bound + sb * rb.tail_bound + 1e-8;
    const bool ok = equality ? std::abs(lhs - rhs) <= tol : lhs <= rhs + tol;
    o.expect(ok, label + " alpha=" + num(alpha) + ": " + num(lhs) + " vs " + num(rhs));
    ++comparisons;
  };
  for (double alpha : kAlphas) {
    for (const auto& name : kSuite) {
      const auto g = builtin_graph(name);
      const auto dbl = double_edges(g).graph;
      compare("double " + name, alpha, name, g, 1.0, name + "/double", dbl, 0.5, false);

      // Glue two vertices; single-vertex graphs first get a dummy vertex, which leaves T unchanged.
      MetricGraph host = g;
      std::string host_key = name;
      if (g.num_vertices() < 2) {
        host = insert_dummy_vertex(g, {g.edges()[0].id, 0.5 * g.edges()[0].length});
        host_key = name + "/dummy";
      }
      const auto glued = glue_vertices(host, {host.vertices()[0], host.vertices()[1]}).graph;
      compare("glue " + name, alpha, host_key + "/glue", glued, 1.0, name, g, 1.0, false);

      if (all_even(g)) {
        compare("unfold " + name, alpha, name, g, 1.0, name + "/unfold", unfold_to_cycle(g).graph, 1.0, false);
        compare("unfold(first) " + name, alpha, name, g, 1.0, name + "/unfold1",
                unfold_to_cycle(g, UnfoldDirichlet::FirstVisit).graph, 1.0, false);
      }
      const MetricGraph cycle = is_cycle(g) ? g : all_even(g) ? unfold_to_cycle(g).graph : unfold_to_cycle(dbl).graph;
      const std::string ck = is_cycle(g) ? name : all_even(g) ? name + "/unfold" : name + "/double/unfold";
      std::string cut_at;
      for (std::size_t v = 0; v < cycle.num_vertices() && cut_at.empty(); ++v) {
        if (cycle.is_dirichlet(v)) cut_at = cycle.vertices()[v];
      }
      compare("cut " + name, alpha, ck, cycle, 1.0, ck + "/cut", cut_cycle(cycle, cut_at).graph, 1.0, true);
    }
  }
  o.notes << " " << comparisons << " comparisons";
  return o;
}

Outcome oracle_equivalence() {
  Outcome o;
  const auto star = builtin_graph("star3");
  // Classical torsion of the star: u = (1 - x^2)/2 on each leg, T = 3 * int_0^1 u = 1.
  const double classical = 3.0 * (0.5 - 1.0 / 6.0);
  const double a = fd_rigidity(star, 1e-2, 1.0);
  const double b = fd_rigidity(star, 5e-3, 1.0);
  const double rich = richardson(a, b);
  o.expect(std::abs(rich - classical) <= 1e-3, "Richardson value " + num(rich));
  o.notes << " Richardson T=" << num(rich);

  const auto fd = fd_spectrum(discretize(star, 1e-3), false);
  const auto& sb = suite_basis("star3");
  double worst = 0.0;
  for (std::size_t i = 0; i < 5; ++i) {
    const double mu = fd.eigenvalues(static_cast<Eigen::Index>(i));
    worst = std::max(worst, std::abs(mu - sb.pairs[i].lambda) / sb.pairs[i].lambda);
  }
  o.expect(worst <= 1e-4, "eigenvalue deviation " + num(worst));
  o.notes << " max relative eigenvalue deviation " << num(worst);
  return o;
}

Outcome variational() {
  Outcome o;
  std::mt19937 rng(20240611);
  std::normal_distribution<double> normal;
  double worst_identity = 0.0, worst_scale = 0.0;
  for (const auto& name : kSuite) {
    const auto& b = suite_basis(name);
    for (double alpha : kAlphas) {
      const auto r = rigidity(b, alpha);
      const auto u = torsion_coefficients(b, alpha);
      const double qu = rayleigh_quotient(u, b, alpha);
      worst_identity = std::max(worst_identity, std::abs(qu - r.value));
      for (int trial = 0; trial < 100; ++trial) {
        SpectralVector f;
        f.coefficients.resize(b.size());
        // A third of the trials are Gaussian, a third decay like 1/n, a third perturb the maximizer.
        for (std::size_t n = 0; n < b.size(); ++n) {
          const double z = normal(rng);
          switch (trial % 3) {
            case 0: f.coefficients[n] = z; break;
            case 1: f.coefficients[n] = z / (1.0 + static_cast<double>(n)); break;
            default: f.coefficients[n] = u.coefficients[n] * (1.0 + 0.1 * z); break;
          }
        }
        const double q = rayleigh_quotient(f, b, alpha);
        o.expect(q <= r.value + r.tail_bound, name + ": quotient exceeds T+tail");
        SpectralVector seven = f;
        for (auto& c : seven.coefficients) c *= 7.0;
        worst_scale = std::max(worst_scale, std::abs(rayleigh_quotient(seven, b, alpha) - q));
      }
    }
  }
  o.expect(worst_identity <= 1e-12, "quotient at torsion coefficients off by " + num(worst_identity));
  o.expect(worst_scale <= 1e-12, "scale invariance off by " + num(worst_scale));
  o.notes << " identity error " << num(worst_identity) << ", scale error " << num(worst_scale);
  return o;
}

Outcome simple_bounds_check() {
  Outcome o;
  for (const auto& name : kSuite) {
    const auto& b = suite_basis(name);
    for (double alpha : kAlphas) {
      const auto r = rigidity(b, alpha);
      const auto sb = simple_bounds(b, alpha);
      const double first = b.pairs[0].mass * b.pairs[0].mass / std::pow(b.pairs[0].lambda, alpha);
      const double crude = total_length(b.graph) / std::pow(b.pairs[0].lambda, alpha);
      const std::string tag = name + " alpha=" + num(alpha) + ": ";
      o.expect(std::abs(sb.lower - first) <= 1e-13 * first && std::abs(sb.upper - crude) <= 1e-13 * crude,
               tag + "simple bounds disagree with direct evaluation");
      o.expect(sb.lower <= r.value && r.value <= sb.upper, tag + "T outside [" + num(sb.lower) + ", " + num(sb.upper) + "]");
    }
  }
  return o;
}

Outcome positivity() {
  Outcome o;
  std::mt19937 rng(977);
  double smallest = std::numeric_limits<double>::infinity();
  for (const auto& name : kSuite) {
    const auto& b = suite_basis(name);
    const auto& g = b.graph;
    std::uniform_real_distribution<double> along_graph(0.0, total_length(g));
    for (double alpha : kAlphas) {
      for (int i = 0; i < 100; ++i) {
        // A uniformly distributed interior point of the graph.
        double x = 0.0;
        do x = along_graph(rng);
        while (x <= 0.0);
        std::size_t e = 0;
        while (e + 1 < g.num_edges() && x > g.edges()[e].length) x -= g.edges()[e++].length;
        const double s = std::min(x, g.edges()[e].length);
        if (s <= 0.0 || s >= g.edges()[e].length) {
          --i;
          continue;
        }
        const double v = torsion_at(b, alpha, {g.edges()[e].id, s}).value;
        smallest = std::min(smallest, v);
        o.expect(v > 0.0, name + " alpha=" + num(alpha) + ": u=" + num(v) + " at " + g.edges()[e].id + ":" + num(s));
      }
    }
  }
  o.notes << " smallest sampled value " << num(smallest);
  return o;
}

Outcome structural() {
  Outcome o;
  std::mt19937 rng(4242);
  double worst_lambda = 0.0, worst_t = 0.0;
  for (const auto& name : kSuite) {
    const auto g = builtin_graph(name);
    std::uniform_int_distribution<std::size_t> pick(0, g.num_edges() - 1);
    const auto& e = g.edges()[pick(rng)];
    std::uniform_real_distribution<double> along(0.05 * e.length, 0.95 * e.length);
    const auto h = insert_dummy_vertex(g, {e.id, along(rng)});
    const double kmax = 60.0;
    const auto a = scan_spectrum(g, kmax);
    const auto b = scan_spectrum(h, kmax);
    if (a.size() != b.size()) {
      o.expect(false, name + ": eigenvalue count changed");
      continue;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
      worst_lambda = std::max(worst_lambda, std::abs(a.pairs[i].lambda - b.pairs[i].lambda) / a.pairs[i].lambda);
    }
    for (double alpha : kAlphas) worst_t = std::max(worst_t, std::abs(rigidity(a, alpha).value - rigidity(b, alpha).value));

    double prev = 0.0;
    for (double k : {20.0, 40.0, 80.0, 160.0, 320.0}) {
      const auto s = scan_spectrum(g, k);
      o.expect(s.captured_mass <= total_length(g), name + ": captured mass exceeds |G|");
      o.expect(s.captured_mass > prev, name + ": captured mass did not increase at kmax=" + num(k));
      prev = s.captured_mass;
    }
  }
  o.expect(worst_lambda <= 1e-9, "eigenvalue shift " + num(worst_lambda));
  o.expect(worst_t <= 1e-9, "rigidity shift " + num(worst_t));
  o.notes << " eigenvalue shift " << num(worst_lambda) << ", rigidity shift " << num(worst_t);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"classical interval rigidity 1/3 at alpha=1", classical_interval},
      {"classical flower rigidity N/12 and multiplicity N", classical_flower},
      {"fractional closed forms for interval and flowers", fractional_closed_forms},
      {"flower/interval bounds sandwich and sharpness", bounds_sandwich},
      {"surgery monotonicity", surgery_monotonicity},
      {"finite-difference oracle on the star", oracle_equivalence},
      {"variational characterization", variational},
      {"simple first-mode bounds", simple_bounds_check},
      {"positivity of the torsion function", positivity},
      {"dummy-vertex invariance and Bessel monotonicity", structural},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.passed = false;
      o.notes << " exception: " << e.what();
    }
    failures += !o.passed;
    std::printf("[%s] %zu %s:%s\n", o.passed ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.notes.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}

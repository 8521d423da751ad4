#include <doctest.h>

#include <cmath>
#include <limits>
#include <map>
#include <random>

#include "qtorsion/fractional.hpp"
#include "qtorsion/numerics.hpp"
#include "qtorsion/suite.hpp"

using namespace qtorsion;

namespace {

const SpectralBasis& cached(const std::string& name, double kmax = 400.0) {
  static std::map<std::pair<std::string, double>, SpectralBasis> cache;
  auto key = std::make_pair(name, kmax);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, scan_spectrum(builtin_graph(name), kmax)).first;
  return it->second;
}

// Classical torsion functions from -u'' = 1 solved edge by edge.
double interval_u(double s) { return s * (2.0 - s) / 2.0; }  // u(0)=0, u'(1)=0
double petal_u(double s) { return s * (1.0 - s) / 2.0; }     // u(0)=u(1)=0
double star_u(double s) { return (1.0 - s * s) / 2.0; }      // s from center, u'(0)=0 by symmetry

}  // namespace

TEST_CASE("check_alpha") {
  CHECK_NOTHROW(check_alpha(1.0));
  CHECK_NOTHROW(check_alpha(1e-3));
  CHECK_THROWS_AS(check_alpha(0.0), std::domain_error);
  CHECK_THROWS_AS(check_alpha(1.5), std::domain_error);
  CHECK_THROWS_AS(check_alpha(std::nan("")), std::domain_error);
}

TEST_CASE("rigidity of the interval at alpha=1") {
  const auto r = rigidity(cached("interval"), 1.0);
  CHECK(r.value <= 1.0 / 3.0 + 1e-12);
  CHECK(1.0 / 3.0 <= r.value + r.tail_bound);
  CHECK(r.next_from_scan);
}

TEST_CASE("rigidity of the three-petal flower at alpha=1") {
  const auto r = rigidity(cached("flower3"), 1.0);
  CHECK(r.value <= 0.25 + 1e-12);
  CHECK(0.25 <= r.value + r.tail_bound);
}

TEST_CASE("rigidity of the interval at alpha=1/2") {
  // mass_n^2 / sqrt(lambda_n) = 16 / ((2n-1) pi)^3, summed over odd n with an integral remainder.
  double sum = 0.0;
  const int terms = 2000000;
  for (int n = 2 * terms - 1; n >= 1; n -= 2) sum += 1.0 / (static_cast<double>(n) * n * n);
  const double rest = 1.0 / (4.0 * (2.0 * terms) * (2.0 * terms));  // int_{2N}^inf x^-3 dx / 2
  const double exact = 16.0 / (kPi * kPi * kPi) * (sum + rest);
  CHECK(exact == doctest::Approx(0.542755).epsilon(1e-6));
  const auto r = rigidity(cached("interval"), 0.5);
  CHECK(r.value <= exact + 1e-12);
  CHECK(exact <= r.value + r.tail_bound);
}

TEST_CASE("rigidity requires a nonempty basis") {
  SpectralBasis empty;
  CHECK_THROWS_AS(rigidity(empty, 1.0), std::invalid_argument);
}

TEST_CASE("tail falls back to the Weyl estimate") {
  SpectralBasis b = cached("star3", 50.0);
  b.next_lambda.reset();
  bool from_scan = true;
  const double lam = tail_lambda(b, &from_scan);
  CHECK_FALSE(from_scan);
  const double k = kPi * (b.size() + 1.0 - 3.0) / 3.0;
  CHECK(lam == doctest::Approx(k * k));
  CHECK(lam <= cached("star3", 50.0).next_lambda.value());
}

TEST_CASE("partial sums are nondecreasing and below the crude bound") {
  for (const auto& name : builtin_names()) {
    const auto& b = cached(name, 100.0);
    for (double alpha : {0.3, 1.0}) {
      double partial = 0.0;
      for (const auto& p : b.pairs) {
        const double term = p.mass * p.mass / pow_pos(p.lambda, alpha);
        CHECK(term >= 0.0);
        partial += term;
      }
      const auto r = rigidity(b, alpha);
      CHECK(r.value == doctest::Approx(partial).epsilon(1e-13));
      CHECK(r.value <= total_length(b.graph) / pow_pos(b.pairs[0].lambda, alpha) + r.tail_bound);
    }
  }
}

TEST_CASE("terms decrease in alpha once lambda exceeds one") {
  const auto& b = cached("star3", 60.0);
  for (const auto& p : b.pairs) {
    REQUIRE(p.lambda > 1.0);
    double prev = std::numeric_limits<double>::infinity();
    for (double alpha : {0.1, 0.3, 0.5, 0.8, 1.0}) {
      const double t = p.mass * p.mass / pow_pos(p.lambda, alpha);
      CHECK(t <= prev);
      prev = t;
    }
  }
}

TEST_CASE("rigidity_to_tail reaches its target") {
  SpectralBasis out;
  const auto r = rigidity_to_tail(builtin_graph("interval"), 0.5, 1e-7, 50.0, {}, &out);
  CHECK(r.tail_bound <= 1e-7);
  CHECK(out.size() == r.n_terms);
}

TEST_CASE("torsion of the interval at alpha=1") {
  const auto b = scan_first_n(builtin_graph("interval"), 50);
  for (double s : {0.0, 0.25, 0.5, 0.9, 1.0}) {
    const auto t = torsion_at(b, 1.0, {"e", s});
    CHECK(std::abs(t.value - interval_u(s)) < 1e-4);
    CHECK(t.error_estimate >= 0.0);
  }
}

TEST_CASE("torsion of a petal and of the star at alpha=1") {
  const auto& f = cached("flower2");
  CHECK(torsion_at(f, 1.0, {"p1", 0.5}).value == doctest::Approx(petal_u(0.5)).epsilon(1e-6));
  CHECK(torsion_at(f, 1.0, {"p2", 0.2}).value == doctest::Approx(petal_u(0.2)).epsilon(1e-6));
  const auto& s = cached("star3");
  for (double x : {0.0, 0.3, 0.8}) {
    CHECK(torsion_at(s, 1.0, {"e2", x}).value == doctest::Approx(star_u(x)).epsilon(1e-6));
  }
}

TEST_CASE("torsion vanishes at Dirichlet vertices as N grows") {
  const auto g = builtin_graph("star3");
  double prev = std::numeric_limits<double>::infinity();
  for (double kmax : {20.0, 80.0, 320.0}) {
    const auto b = scan_spectrum(g, kmax);
    const double v = std::abs(torsion_at(b, 0.8, {"e1", 1.0}).value);
    CHECK(v <= prev + 1e-15);
    prev = v;
  }
  CHECK(prev < 1e-12);
}

TEST_CASE("torsion rejects points off the graph") {
  CHECK_THROWS(torsion_at(cached("interval"), 1.0, {"x", 0.5}));
  CHECK_THROWS(torsion_at(cached("interval"), 1.0, {"e", 2.0}));
}

TEST_CASE("torsion is positive in the interior") {
  std::mt19937 rng(11);
  for (const auto& name : builtin_names()) {
    const auto& b = cached(name);
    std::uniform_int_distribution<std::size_t> pick(0, b.graph.num_edges() - 1);
    for (double alpha : {0.3, 0.5, 0.8, 1.0}) {
      for (int i = 0; i < 40; ++i) {
        const auto& e = b.graph.edges()[pick(rng)];
        std::uniform_real_distribution<double> along(0.01 * e.length, 0.99 * e.length);
        CHECK(torsion_at(b, alpha, {e.id, along(rng)}).value > 0.0);
      }
    }
  }
}

TEST_CASE("H^alpha norm") {
  const auto& b = cached("interval", 50.0);
  SpectralVector first{std::vector<double>(b.size(), 0.0)};
  first.coefficients[0] = 1.0;
  CHECK(h_alpha_norm_sq(first, b, 0.6) == doctest::Approx(pow_pos(b.pairs[0].lambda, 0.6)));
  SpectralVector zero{std::vector<double>(b.size(), 0.0)};
  CHECK(h_alpha_norm_sq(zero, b, 0.6) == 0.0);
  CHECK_THROWS_AS(h_alpha_norm_sq(SpectralVector{{1.0}}, b, 0.6), std::invalid_argument);
}

TEST_CASE("H^alpha norm dominates the L2 norm") {
  std::mt19937 rng(3);
  std::normal_distribution<double> normal;
  for (const char* name : {"interval", "star3", "doubled-triangle"}) {
    const auto& b = cached(name, 60.0);
    for (int trial = 0; trial < 100; ++trial) {
      SpectralVector f;
      double l2 = 0.0;
      for (std::size_t n = 0; n < b.size(); ++n) {
        f.coefficients.push_back(normal(rng) / (1.0 + n));
        l2 += f.coefficients.back() * f.coefficients.back();
      }
      for (double alpha : {0.3, 1.0}) {
        CHECK(l2 <= h_alpha_norm_sq(f, b, alpha) / pow_pos(b.pairs[0].lambda, alpha) * (1.0 + 1e-12));
      }
    }
  }
}

TEST_CASE("Rayleigh quotient on the first interval mode") {
  const auto& b = cached("interval", 50.0);
  SpectralVector first{std::vector<double>(b.size(), 0.0)};
  first.coefficients[0] = 1.0;
  const double q = rayleigh_quotient(first, b, 1.0);
  CHECK(q == doctest::Approx(32.0 / std::pow(kPi, 4)).epsilon(1e-12));
  CHECK(q <= 1.0 / 3.0);
  SpectralVector zero{std::vector<double>(b.size(), 0.0)};
  CHECK_THROWS_AS(rayleigh_quotient(zero, b, 1.0), std::invalid_argument);
}

TEST_CASE("Rayleigh quotient and J at the torsion coefficients") {
  for (const auto& name : builtin_names()) {
    const auto& b = cached(name, 100.0);
    for (double alpha : {0.3, 0.5, 0.8, 1.0}) {
      const auto u = torsion_coefficients(b, alpha);
      const auto r = rigidity(b, alpha);
      CHECK(std::abs(rayleigh_quotient(u, b, alpha) - r.value) <= 1e-12 * r.value);
      CHECK(std::abs(j_functional(u, b, alpha) - r.value) <= 1e-12 * r.value);
    }
  }
}

TEST_CASE("Rayleigh quotient is scale invariant and bounded by the rigidity") {
  std::mt19937 rng(5);
  std::normal_distribution<double> normal;
  const auto& b = cached("star3", 100.0);
  for (int trial = 0; trial < 100; ++trial) {
    SpectralVector f;
    for (std::size_t n = 0; n < b.size(); ++n) f.coefficients.push_back(normal(rng));
    SpectralVector seven = f;
    for (auto& c : seven.coefficients) c *= 7.0;
    for (double alpha : {0.3, 1.0}) {
      const double q = rayleigh_quotient(f, b, alpha);
      CHECK(std::abs(rayleigh_quotient(seven, b, alpha) - q) <= 1e-12 * q);
      const auto r = rigidity(b, alpha);
      CHECK(j_functional(f, b, alpha) <= q + 1e-12);
      CHECK(q <= r.value + r.tail_bound);
    }
  }
}

TEST_CASE("J functional basics") {
  const auto& b = cached("interval", 50.0);
  SpectralVector zero{std::vector<double>(b.size(), 0.0)};
  CHECK(j_functional(zero, b, 0.5) == 0.0);
  CHECK_THROWS_AS(j_functional(SpectralVector{}, b, 0.5), std::invalid_argument);
}

TEST_CASE("simple bounds") {
  const auto& b = cached("interval");
  const auto sb = simple_bounds(b, 1.0);
  CHECK(sb.lower == doctest::Approx(32.0 / std::pow(kPi, 4)).epsilon(1e-12));
  CHECK(sb.upper == doctest::Approx(4.0 / (kPi * kPi)).epsilon(1e-12));
  CHECK(sb.lower <= 1.0 / 3.0);
  CHECK(1.0 / 3.0 <= sb.upper);

  const auto fb = simple_bounds(cached("flower1"), 1.0);
  CHECK(fb.lower == doctest::Approx(8.0 / std::pow(kPi, 4)).epsilon(1e-12));
  CHECK(fb.upper == doctest::Approx(1.0 / (kPi * kPi)).epsilon(1e-12));
  CHECK(fb.lower <= 1.0 / 12.0);
  CHECK(1.0 / 12.0 <= fb.upper);

  SpectralBasis massless = cached("star3", 4.0);
  REQUIRE(massless.size() >= 2);
  massless.pairs.erase(massless.pairs.begin());  // first remaining pair is a zero-mass mode
  CHECK(simple_bounds(massless, 1.0).lower == doctest::Approx(0.0).epsilon(1e-20));
}

TEST_CASE("projected classical torsion equals the torsion coefficients") {
  const auto& b = cached("interval", 80.0);
  const auto u = project_quadratic(b, {{0.0, 1.0, -0.5}});
  const auto t = torsion_coefficients(b, 1.0);
  for (std::size_t n = 0; n < b.size(); ++n) CHECK(u.coefficients[n] == doctest::Approx(t.coefficients[n]).epsilon(1e-10));

  // The constant function projects to the mass coefficients.
  const auto& s = cached("star3", 40.0);
  const auto one = project_quadratic(s, {{1.0, 0.0, 0.0}, {1.0, 0.0, 0.0}, {1.0, 0.0, 0.0}});
  for (std::size_t n = 0; n < s.size(); ++n) CHECK(one.coefficients[n] == doctest::Approx(s.pairs[n].mass).epsilon(1e-10));
  CHECK_THROWS_AS(project_quadratic(s, {{1.0, 0.0, 0.0}}), std::invalid_argument);
}

#include "qtorsion/closed_forms.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "qtorsion/fractional.hpp"
#include "qtorsion/numerics.hpp"

namespace qtorsion {

namespace {

// B_{2j} / (2j)!  for j = 1..10
constexpr std::array<double, 10> kBernoulliOverFactorial = {
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40320.0,
    5.0 / 66.0 / 3628800.0,
    -691.0 / 2730.0 / 479001600.0,
    7.0 / 6.0 / 87178291200.0,
    -3617.0 / 510.0 / 20922789888000.0,
    43867.0 / 798.0 / 6402373705728000.0,
    -174611.0 / 330.0 / 2432902008176640000.0,
};
constexpr std::size_t kCorrections = 8;

}  // namespace

double zeta(double s, double tol) {
  if (!(s > 1.0) || !std::isfinite(s)) throw std::domain_error("zeta: s must be > 1");
  if (!(tol > 0.0)) throw std::invalid_argument("zeta: tol must be positive");

  // Direct sum of the first N-1 terms, integral tail N^{1-s}/(s-1), and
  // Euler-Maclaurin corrections. For real s the remainder is bounded by the
  // first omitted correction, which picks N.
  auto omitted = [&](double n) {
    double rising = 1.0;
    for (std::size_t i = 0; i < 2 * kCorrections + 1; ++i) rising *= s + static_cast<double>(i);
    return std::abs(kBernoulliOverFactorial[kCorrections] * rising) * pow_pos(n, -s - 2.0 * kCorrections - 1.0);
  };
  double n = 8.0;
  while (omitted(n) > 0.5 * tol) n *= 2.0;

  std::vector<double> terms;
  const auto count = static_cast<std::size_t>(n);
  for (std::size_t i = count - 1; i >= 1; --i) terms.push_back(pow_pos(static_cast<double>(i), -s));
  double sum = 0.0;
  for (double t : terms) sum += t;  // smallest first

  double tail = pow_pos(n, 1.0 - s) / (s - 1.0) + 0.5 * pow_pos(n, -s);
  double rising = s;  // s (s+1) ... (s+2j-2)
  for (std::size_t j = 1; j <= kCorrections; ++j) {
    tail += kBernoulliOverFactorial[j - 1] * rising * pow_pos(n, -s - 2.0 * static_cast<double>(j) + 1.0);
    rising *= (s + 2.0 * static_cast<double>(j) - 1.0) * (s + 2.0 * static_cast<double>(j));
  }
  return sum + tail;
}

double odd_zeta(double s, double tol) {
  if (!(s > 1.0) || !std::isfinite(s)) throw std::domain_error("odd_zeta: s must be > 1");
  return (1.0 - pow_pos(2.0, -s)) * zeta(s, tol);
}

double interval_rigidity_dn(double length, double alpha) {
  check_alpha(alpha);
  if (!(length > 0.0)) throw std::domain_error("interval length must be positive");
  const double s = 2.0 + 2.0 * alpha;
  return 8.0 * pow_pos(2.0, 2.0 * alpha) * pow_pos(length, 2.0 * alpha + 1.0) / pow_pos(kPi, s) * odd_zeta(s);
}

double interval_rigidity_dd(double length, double alpha) { return flower_rigidity(1, length, alpha); }

double interval_torsion_dn(double length, double alpha, double s, std::size_t n_terms) {
  check_alpha(alpha);
  if (!(length > 0.0)) throw std::domain_error("interval length must be positive");
  if (!(s >= 0.0 && s <= length)) throw std::domain_error("s must lie in [0, L]");
  const double scale = 4.0 * pow_pos(2.0 * length, 2.0 * alpha);
  std::vector<double> terms(n_terms);
  for (std::size_t n = 1; n <= n_terms; ++n) {
    const double odd = 2.0 * static_cast<double>(n) - 1.0;
    terms[n - 1] = scale / pow_pos(odd * kPi, 1.0 + 2.0 * alpha) * std::sin(odd * kPi * s / (2.0 * length));
  }
  return pairwise_sum(terms);
}

double flower_rigidity(std::size_t petals, double length, double alpha) {
  check_alpha(alpha);
  if (petals == 0) throw std::domain_error("flower needs at least one petal");
  if (!(length > 0.0)) throw std::domain_error("petal length must be positive");
  const double s = 2.0 * (1.0 + alpha);
  return static_cast<double>(petals) * 8.0 * pow_pos(length, 1.0 + 2.0 * alpha) / pow_pos(kPi, s) * odd_zeta(s);
}

BoundsPair paper_bounds(const MetricGraph& g, double alpha) {
  require_valid(g);
  BoundsPair b;
  b.alpha = alpha;
  b.total_length = total_length(g);
  b.num_edges = g.num_edges();
  b.lower = flower_rigidity(b.num_edges, b.total_length / static_cast<double>(b.num_edges), alpha);
  b.upper = interval_rigidity_dn(b.total_length, alpha);
  return b;
}

}  // namespace qtorsion

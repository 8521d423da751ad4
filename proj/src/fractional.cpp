#include "qtorsion/fractional.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qtorsion/numerics.hpp"

namespace qtorsion {

namespace {

void check_basis(const SpectralBasis& basis) {
  if (basis.empty()) throw std::invalid_argument("spectral basis is empty");
}

void check_aligned(const SpectralVector& f, const SpectralBasis& basis) {
  if (f.coefficients.size() != basis.size()) {
    std::ostringstream os;
    os << "spectral vector has " << f.coefficients.size() << " coefficients but the basis has " << basis.size()
       << " pairs";
    throw std::invalid_argument(os.str());
  }
}

double dot_mass(const SpectralVector& f, const SpectralBasis& basis) {
  std::vector<double> terms(basis.size());
  for (std::size_t n = 0; n < basis.size(); ++n) terms[n] = f.coefficients[n] * basis.pairs[n].mass;
  return pairwise_sum(terms);
}

}  // namespace

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::domain_error("alpha must lie in (0, 1]");
}

double tail_lambda(const SpectralBasis& basis, bool* from_scan) {
  if (basis.next_lambda) {
    if (from_scan) *from_scan = true;
    return *basis.next_lambda;
  }
  if (from_scan) *from_scan = false;
  const double len = total_length(basis.graph);
  const double edges = static_cast<double>(basis.graph.num_edges());
  const double shift = std::max(0.0, static_cast<double>(basis.size()) + 1.0 - edges);
  const double weyl = kPi * shift / len;
  const double first = kPi / (2.0 * len);
  const double k = std::max(weyl, first);
  return k * k;
}

RigidityResult rigidity(const SpectralBasis& basis, double alpha) {
  check_alpha(alpha);
  check_basis(basis);
  std::vector<double> terms(basis.size());
  for (std::size_t n = 0; n < basis.size(); ++n) {
    const auto& p = basis.pairs[n];
    terms[n] = p.mass * p.mass / pow_pos(p.lambda, alpha);
  }
  RigidityResult r;
  r.alpha = alpha;
  r.value = pairwise_sum(terms);
  r.n_terms = basis.size();
  r.next_lambda = tail_lambda(basis, &r.next_from_scan);
  const double missing = std::max(0.0, total_length(basis.graph) - basis.captured_mass);
  r.tail_bound = missing / pow_pos(r.next_lambda, alpha);
  return r;
}

RigidityResult rigidity_to_tail(const MetricGraph& g, double alpha, double target_tail, double kmax_start,
                                const SolverOptions& opts, SpectralBasis* basis_out) {
  check_alpha(alpha);
  if (!(target_tail > 0.0)) throw std::invalid_argument("target tail must be positive");
  double kmax = kmax_start;
  for (int attempt = 0; attempt < 12; ++attempt) {
    SpectralBasis basis = scan_spectrum(g, kmax, opts);
    RigidityResult r = rigidity(basis, alpha);
    if (r.tail_bound <= target_tail) {
      if (basis_out) *basis_out = std::move(basis);
      return r;
    }
    // The tail decays roughly like kmax^{-(1+2 alpha)}.
    const double ratio = std::pow(r.tail_bound / target_tail, 1.0 / (1.0 + 2.0 * alpha));
    kmax *= std::clamp(1.15 * ratio, 1.2, 16.0);
  }
  throw SolverError("rigidity_to_tail: tail target not reached");
}

TorsionSample torsion_at(const SpectralBasis& basis, double alpha, const GraphPoint& x) {
  check_alpha(alpha);
  check_basis(basis);
  std::vector<double> terms(basis.size());
  for (std::size_t n = 0; n < basis.size(); ++n) {
    const auto& p = basis.pairs[n];
    terms[n] = p.mass / pow_pos(p.lambda, alpha) * eval_eigenfunction(p, basis.graph, x);
  }
  TorsionSample out;
  out.point = x;
  out.value = pairwise_sum(terms);

  const double len = total_length(basis.graph);
  const double n = static_cast<double>(basis.size());
  const double missing = std::max(0.0, len - basis.captured_mass);
  const double sup = std::sqrt(2.0 / min_edge_length(basis.graph));
  // sum_{m>N} sqrt(missing*N)/m * (m pi/|G|)^{-2 alpha}  ~  sqrt(missing*N) (|G|/pi)^{2a} N^{-2a} / (2a)
  out.error_estimate =
      sup * std::sqrt(missing * n) * pow_pos(len / (kPi * n), 2.0 * alpha) / (2.0 * alpha);
  return out;
}

SpectralVector torsion_coefficients(const SpectralBasis& basis, double alpha) {
  check_alpha(alpha);
  SpectralVector f;
  f.coefficients.reserve(basis.size());
  for (const auto& p : basis.pairs) f.coefficients.push_back(p.mass / pow_pos(p.lambda, alpha));
  return f;
}

double h_alpha_norm_sq(const SpectralVector& f, const SpectralBasis& basis, double alpha) {
  check_alpha(alpha);
  check_aligned(f, basis);
  std::vector<double> terms(basis.size());
  for (std::size_t n = 0; n < basis.size(); ++n) {
    const double c = f.coefficients[n];
    terms[n] = pow_pos(basis.pairs[n].lambda, alpha) * c * c;
  }
  return pairwise_sum(terms);
}

double rayleigh_quotient(const SpectralVector& f, const SpectralBasis& basis, double alpha) {
  const double energy = h_alpha_norm_sq(f, basis, alpha);
  if (!(energy > 0.0)) throw std::invalid_argument("rayleigh_quotient: zero vector");
  const double integral = dot_mass(f, basis);
  return integral * integral / energy;
}

double j_functional(const SpectralVector& f, const SpectralBasis& basis, double alpha) {
  const double energy = h_alpha_norm_sq(f, basis, alpha);
  return 2.0 * dot_mass(f, basis) - energy;
}

SimpleBounds simple_bounds(const SpectralBasis& basis, double alpha) {
  check_alpha(alpha);
  check_basis(basis);
  const auto& first = basis.pairs.front();
  const double scale = pow_pos(first.lambda, alpha);
  return {first.mass * first.mass / scale, total_length(basis.graph) / scale};
}

SpectralVector project_quadratic(const SpectralBasis& basis, const std::vector<std::array<double, 3>>& coefficients) {
  const auto& g = basis.graph;
  if (coefficients.size() != g.num_edges()) {
    throw std::invalid_argument("project_quadratic: need one polynomial per edge");
  }
  SpectralVector f;
  f.coefficients.reserve(basis.size());
  for (const auto& p : basis.pairs) {
    const double k = p.k;
    double sum = 0.0;
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
      const double l = g.edges()[e].length;
      const double c = std::cos(k * l), s = std::sin(k * l);
      const double h = std::sin(0.5 * k * l);
      const double one_minus_c = 2.0 * h * h;
      // Integrals over [0,l] of s^j cos(ks) and s^j sin(ks), j = 0, 1, 2.
      const double ic0 = s / k;
      const double is0 = one_minus_c / k;
      const double ic1 = l * s / k - one_minus_c / (k * k);
      const double is1 = -l * c / k + s / (k * k);
      const double ic2 = l * l * s / k + 2.0 * l * c / (k * k) - 2.0 * s / (k * k * k);
      const double is2 = -l * l * c / k + 2.0 * l * s / (k * k) - 2.0 * one_minus_c / (k * k * k);
      const auto& q = coefficients[e];
      sum += p.a(e) * (q[0] * ic0 + q[1] * ic1 + q[2] * ic2) + p.b(e) * (q[0] * is0 + q[1] * is1 + q[2] * is2);
    }
    f.coefficients.push_back(sum);
  }
  return f;
}

}  // namespace qtorsion

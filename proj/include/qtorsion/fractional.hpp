#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "qtorsion/graph.hpp"
#include "qtorsion/spectral.hpp"

namespace qtorsion {

/// Truncated rigidity series sum_{n<=N} <1,phi_n>^2 / lambda_n^alpha.
///
/// The omitted part is at most tail_bound = (|G| - captured_mass) / lambda_{N+1}^alpha
/// (Parseval for the constant function), so the exact rigidity lies in
/// [value, value + tail_bound] up to solver round-off.
struct RigidityResult {
  double alpha = 0.0;
  double value = 0.0;
  double tail_bound = 0.0;
  std::size_t n_terms = 0;
  double next_lambda = 0.0;      // lambda_{N+1} used in the tail bound
  bool next_from_scan = false;   // false: Weyl lower estimate
};

/// Coefficients c_n = <f, phi_n> against a SpectralBasis.
struct SpectralVector {
  std::vector<double> coefficients;
};

struct TorsionSample {
  GraphPoint point;
  double value = 0.0;
  double error_estimate = 0.0;  // heuristic; see torsion_at
};

struct SimpleBounds {
  double lower = 0.0;  // mass_1^2 / lambda_1^alpha
  double upper = 0.0;  // |G| / lambda_1^alpha
};

/// Throws std::domain_error unless 0 < alpha <= 1.
void check_alpha(double alpha);

/// Lower estimate for lambda_{N+1}: the scanned root beyond kmax when known,
/// otherwise max((pi (N+1-|E|)/|G|)^2, (pi/(2|G|))^2).
double tail_lambda(const SpectralBasis& basis, bool* from_scan = nullptr);

RigidityResult rigidity(const SpectralBasis& basis, double alpha);

/// Rescans with growing kmax until tail_bound <= target. Returns the final
/// basis through `basis_out` when given.
RigidityResult rigidity_to_tail(const MetricGraph& g, double alpha, double target_tail, double kmax_start,
                                const SolverOptions& opts = {}, SpectralBasis* basis_out = nullptr);

/// Partial sum of the torsion series at x.
///
/// error_estimate is a heuristic for the pointwise truncation error: it models
/// the missing mass as spread like 1/n over Weyl-spaced eigenvalues with
/// eigenfunction sup-norm sqrt(2/l_min). It is not a bound, and for
/// alpha <= 1/2 the series is not known to converge uniformly at all.
TorsionSample torsion_at(const SpectralBasis& basis, double alpha, const GraphPoint& x);

SpectralVector torsion_coefficients(const SpectralBasis& basis, double alpha);

double h_alpha_norm_sq(const SpectralVector& f, const SpectralBasis& basis, double alpha);
double rayleigh_quotient(const SpectralVector& f, const SpectralBasis& basis, double alpha);
double j_functional(const SpectralVector& f, const SpectralBasis& basis, double alpha);
SimpleBounds simple_bounds(const SpectralBasis& basis, double alpha);

/// Projects an edgewise polynomial p_e(s) = c0 + c1 s + c2 s^2 onto the basis
/// with exact integrals. `coefficients[e]` holds {c0, c1, c2} for edge e.
SpectralVector project_quadratic(const SpectralBasis& basis, const std::vector<std::array<double, 3>>& coefficients);

}  // namespace qtorsion

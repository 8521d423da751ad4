#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qtorsion/graph.hpp"

namespace qtorsion {

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SolverOptions {
  // Grid points per mean root spacing pi/|G|; the grid also resolves the
  // shortest edge with 4x this factor.
  double oversampling = 4.0;
  // A refined local minimum is an eigenvalue when sigma_min < accept_tol * ||M(k)||.
  double accept_tol = 1e-8;
  // Singular values below multiplicity_tol * sigma_max count toward the nullity.
  double multiplicity_tol = 1e-6;
  // Golden-section stops when the bracket is narrower than refine_width * k.
  double refine_width = 1e-15;

  void check() const;
};

/// Eigenfunction phi with phi_e(s) = a_e cos(k s) + b_e sin(k s) on every edge.
struct EigenPair {
  double k = 0.0;
  double lambda = 0.0;
  Eigen::VectorXd coeffs;  // interleaved (a_0, b_0, a_1, b_1, ...)
  double mass = 0.0;       // <1, phi>
  std::size_t multiplicity = 1;
  std::size_t multiplicity_index = 1;  // 1-based position inside its eigenspace

  double a(std::size_t edge) const { return coeffs[static_cast<Eigen::Index>(2 * edge)]; }
  double b(std::size_t edge) const { return coeffs[static_cast<Eigen::Index>(2 * edge + 1)]; }
};

struct SpectralBasis {
  MetricGraph graph;
  std::vector<EigenPair> pairs;  // ascending lambda, multiplicities repeated
  double kmax = 0.0;
  double captured_mass = 0.0;    // sum of mass^2
  // First eigenvalue beyond kmax found by continuing the scan, if any.
  std::optional<double> next_lambda;
  // Rigorous eigenvalue-count bracket at kmax from Dirichlet/Neumann decoupling.
  std::size_t weyl_min_count = 0;
  std::size_t weyl_max_count = 0;
  double grid_step = 0.0;
  SolverOptions options;
  std::vector<std::string> warnings;

  bool empty() const { return pairs.empty(); }
  std::size_t size() const { return pairs.size(); }
};

/// Square matrix of size 2|E| whose kernel is the set of coefficient vectors
/// satisfying the vertex conditions at wavenumber k. Derivative rows are
/// divided by k.
Eigen::MatrixXd secular_matrix(const MetricGraph& g, double k);

/// Smallest singular value of secular_matrix(g, k).
double sigma_min(const MetricGraph& g, double k);

double grid_step(const MetricGraph& g, const SolverOptions& opts);

/// All eigenpairs with k in (0, kmax], with multiplicity.
SpectralBasis scan_spectrum(const MetricGraph& g, double kmax, const SolverOptions& opts = {});

/// The first n eigenpairs (extended to the end of the eigenspace containing the n-th).
SpectralBasis scan_first_n(const MetricGraph& g, std::size_t n, const SolverOptions& opts = {});

/// Orthonormalizes pairs that share one wavenumber, in L^2(G), using exact
/// trigonometric integrals. Throws SolverError if the inputs are numerically dependent.
std::vector<EigenPair> orthonormalize(std::span<const EigenPair> pairs, const MetricGraph& g);

/// <phi, psi> in L^2(G); the two pairs may have different wavenumbers.
double l2_inner(const EigenPair& p, const EigenPair& q, const MetricGraph& g);

/// <1, phi>, integrated in closed form edge by edge.
double mass_coefficient(const EigenPair& p, const MetricGraph& g);

double eval_eigenfunction(const EigenPair& p, const MetricGraph& g, const GraphPoint& x);

/// max |M(k) c|: how far the pair is from satisfying the vertex conditions.
double vertex_condition_residual(const EigenPair& p, const MetricGraph& g);

}  // namespace qtorsion

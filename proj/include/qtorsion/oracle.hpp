#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "qtorsion/graph.hpp"

namespace qtorsion {

class OracleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kMaxOracleNodes = 20000;

/// Where a mesh node sits: at a vertex, or interior to an edge.
struct MeshNode {
  bool at_vertex = false;
  std::size_t vertex = 0;  // valid when at_vertex
  std::size_t edge = 0;    // valid when !at_vertex
  double s = 0.0;
};

/// Uniform mesh of every edge with lumped (trapezoidal) weights. Kirchhoff
/// vertices are single shared nodes; Dirichlet nodes are eliminated.
struct Discretization {
  double h = 0.0;
  std::vector<std::size_t> cells_per_edge;
  std::vector<MeshNode> nodes;        // free (unknown) nodes, in matrix order
  Eigen::MatrixXd stiffness;          // symmetric positive definite
  Eigen::VectorXd weights;            // lumped weights of the free nodes
  double eliminated_weight = 0.0;     // weight sitting on Dirichlet nodes

  double total_weight() const { return weights.sum() + eliminated_weight; }
};

/// Eigenpairs of K psi = mu W psi with psi W-orthonormal, ascending mu.
/// modes and mass are empty when computed without modes.
struct FdSpectrum {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd modes;  // columns psi_k at the free nodes
  Eigen::VectorXd mass;   // <1, psi_k>_W
};

/// Throws OracleError when h > l_min / 4 or the mesh exceeds kMaxOracleNodes.
Discretization discretize(const MetricGraph& g, double h);

FdSpectrum fd_spectrum(const Discretization& d, bool with_modes = true);

double fd_rigidity(const FdSpectrum& spectrum, double alpha);
double fd_rigidity(const MetricGraph& g, double h, double alpha);

/// Nodal values of the discrete fractional torsion function.
Eigen::VectorXd fd_torsion(const FdSpectrum& spectrum, double alpha);

/// Second-order Richardson extrapolation from values at h and h/2.
double richardson(double value_h, double value_half_h);

}  // namespace qtorsion

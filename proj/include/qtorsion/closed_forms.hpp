#pragma once

#include <cstddef>

#include "qtorsion/graph.hpp"

namespace qtorsion {

struct BoundsPair {
  double lower = 0.0;  // equilateral flower with |E| petals of length |G|/|E|
  double upper = 0.0;  // Dirichlet-Neumann interval of length |G|
  double alpha = 0.0;
  double total_length = 0.0;
  std::size_t num_edges = 0;
};

/// Riemann zeta for real s > 1 with |error| <= tol.
double zeta(double s, double tol = 1e-15);

/// sum over odd n of n^{-s} = (1 - 2^{-s}) zeta(s).
double odd_zeta(double s, double tol = 1e-15);

/// Torsional rigidity of [0, L] with Dirichlet at 0 and Neumann at L.
double interval_rigidity_dn(double length, double alpha);

/// Torsional rigidity of [0, L] with Dirichlet at both ends (a one-petal flower).
double interval_rigidity_dd(double length, double alpha);

/// Partial sum (n_terms terms) of the sine series for the Dirichlet-Neumann interval torsion function.
double interval_torsion_dn(double length, double alpha, double s, std::size_t n_terms);

/// N loops of length L on one Dirichlet vertex.
double flower_rigidity(std::size_t petals, double length, double alpha);

BoundsPair paper_bounds(const MetricGraph& g, double alpha);

}  // namespace qtorsion

#include "qtorsion/oracle.hpp"

#include <cmath>
#include <optional>
#include <sstream>

#include "qtorsion/fractional.hpp"
#include "qtorsion/numerics.hpp"

namespace qtorsion {

Discretization discretize(const MetricGraph& g, double h) {
  require_valid(g);
  const double lmin = min_edge_length(g);
  if (!(h > 0.0) || h > 0.25 * lmin) {
    std::ostringstream os;
    os << "mesh width h=" << h << " too coarse; need 0 < h <= " << 0.25 * lmin;
    throw OracleError(os.str());
  }

  Discretization d;
  d.h = h;
  std::size_t count = 0;
  for (std::size_t v = 0; v < g.num_vertices(); ++v) count += g.is_dirichlet(v) ? 0 : 1;
  for (const auto& e : g.edges()) {
    const auto cells = static_cast<std::size_t>(std::ceil(e.length / h - 1e-12));
    d.cells_per_edge.push_back(cells);
    count += cells - 1;
  }
  if (count > kMaxOracleNodes) {
    std::ostringstream os;
    os << "mesh has " << count << " nodes; the dense oracle is capped at " << kMaxOracleNodes;
    throw OracleError(os.str());
  }

  std::vector<std::optional<std::size_t>> vertex_node(g.num_vertices());
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    if (g.is_dirichlet(v)) continue;
    vertex_node[v] = d.nodes.size();
    d.nodes.push_back({true, v, 0, 0.0});
  }
  const auto n = static_cast<Eigen::Index>(count);
  d.stiffness = Eigen::MatrixXd::Zero(n, n);
  d.weights = Eigen::VectorXd::Zero(n);

  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const std::size_t cells = d.cells_per_edge[e];
    const double he = g.edges()[e].length / static_cast<double>(cells);
    // Node ids along the edge, std::nullopt for an eliminated Dirichlet end.
    std::vector<std::optional<std::size_t>> chain;
    chain.push_back(vertex_node[*g.source(e)]);
    for (std::size_t i = 1; i < cells; ++i) {
      chain.push_back(d.nodes.size());
      d.nodes.push_back({false, 0, e, static_cast<double>(i) * he});
    }
    chain.push_back(vertex_node[*g.target(e)]);

    for (std::size_t c = 0; c < cells; ++c) {
      const auto& p = chain[c];
      const auto& q = chain[c + 1];
      for (const auto* node : {&p, &q}) {
        if (*node) {
          const auto i = static_cast<Eigen::Index>(**node);
          d.stiffness(i, i) += 1.0 / he;
          d.weights(i) += 0.5 * he;
        } else {
          d.eliminated_weight += 0.5 * he;
        }
      }
      if (p && q) {
        const auto i = static_cast<Eigen::Index>(*p);
        const auto j = static_cast<Eigen::Index>(*q);
        d.stiffness(i, j) -= 1.0 / he;
        d.stiffness(j, i) -= 1.0 / he;
      }
    }
  }
  return d;
}

FdSpectrum fd_spectrum(const Discretization& d, bool with_modes) {
  const Eigen::VectorXd sqrt_w = d.weights.cwiseSqrt();
  const Eigen::VectorXd inv_sqrt_w = sqrt_w.cwiseInverse();
  // W^{-1/2} K W^{-1/2}, symmetric.
  const Eigen::MatrixXd a = inv_sqrt_w.asDiagonal() * d.stiffness * inv_sqrt_w.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, with_modes ? Eigen::ComputeEigenvectors
                                                                   : Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw OracleError("dense eigendecomposition did not converge");

  FdSpectrum out;
  out.eigenvalues = es.eigenvalues();
  if (with_modes) {
    out.modes = inv_sqrt_w.asDiagonal() * es.eigenvectors();
    // <1, psi>_W = sum_i w_i psi_i = sum_i sqrt(w_i) q_i
    out.mass = es.eigenvectors().transpose() * sqrt_w;
  }
  return out;
}

double fd_rigidity(const FdSpectrum& spectrum, double alpha) {
  check_alpha(alpha);
  if (spectrum.mass.size() != spectrum.eigenvalues.size()) throw OracleError("spectrum was computed without modes");
  std::vector<double> terms(static_cast<std::size_t>(spectrum.eigenvalues.size()));
  for (Eigen::Index k = 0; k < spectrum.eigenvalues.size(); ++k) {
    const double m = spectrum.mass(k);
    terms[static_cast<std::size_t>(k)] = m * m / pow_pos(spectrum.eigenvalues(k), alpha);
  }
  return pairwise_sum(terms);
}

double fd_rigidity(const MetricGraph& g, double h, double alpha) {
  return fd_rigidity(fd_spectrum(discretize(g, h)), alpha);
}

Eigen::VectorXd fd_torsion(const FdSpectrum& spectrum, double alpha) {
  check_alpha(alpha);
  if (spectrum.mass.size() != spectrum.eigenvalues.size()) throw OracleError("spectrum was computed without modes");
  Eigen::VectorXd coeff(spectrum.eigenvalues.size());
  for (Eigen::Index k = 0; k < coeff.size(); ++k) coeff(k) = spectrum.mass(k) / pow_pos(spectrum.eigenvalues(k), alpha);
  return spectrum.modes * coeff;
}

double richardson(double value_h, double value_half_h) { return (4.0 * value_half_h - value_h) / 3.0; }

}  // namespace qtorsion

#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "qtorsion/fractional.hpp"
#include "qtorsion/graph.hpp"
#include "qtorsion/spectral.hpp"

namespace qtorsion {

class SurgeryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SurgeryKind { Double, Glue, Unfold, Cut };

const char* to_string(SurgeryKind kind);

/// Which cycle vertices are Dirichlet after unfolding.
enum class UnfoldDirichlet {
  AllVisits,   // every visit of the circuit to an original Dirichlet vertex
  FirstVisit,  // only the circuit's starting visit
};

struct SurgeryOp {
  SurgeryKind kind = SurgeryKind::Double;
  std::vector<std::string> vertices;  // glue members, or the single cut vertex
};

struct SurgeryResult {
  MetricGraph graph;
  SurgeryOp op;
  std::map<std::string, std::string> provenance;  // new edge id -> original edge id
};

/// Every edge e becomes "1.e" and "2.e", parallel and of the same length.
SurgeryResult double_edges(const MetricGraph& g);

/// Identifies the listed vertices into one vertex named "v1+v2+...". The
/// merged vertex is Dirichlet iff some member was.
SurgeryResult glue_vertices(const MetricGraph& g, const std::vector<std::string>& vertices);

/// Lays an Eulerian circuit out as a cycle graph of the same total length.
/// The circuit starts at the first Dirichlet vertex in vertex order and, at
/// each step, leaves along the unused incident edge with the smallest id.
SurgeryResult unfold_to_cycle(const MetricGraph& g, UnfoldDirichlet mode = UnfoldDirichlet::AllVisits);

/// Opens a cycle at a Dirichlet vertex v into a path with Dirichlet ends "v-" and "v+".
SurgeryResult cut_cycle(const MetricGraph& g, const std::string& vertex);

struct ChainStage {
  std::string name;
  double rigidity = 0.0;
  double tail_bound = 0.0;
  std::size_t n_terms = 0;
};

struct ChainCheck {
  std::string relation;
  double lhs = 0.0;
  double rhs = 0.0;
  double tolerance = 0.0;
  bool holds = false;
};

struct ChainReport {
  double alpha = 0.0;
  double interval_bound = 0.0;  // closed form for [0, |G|], Dirichlet-Neumann
  std::vector<ChainStage> stages;
  std::vector<ChainCheck> checks;

  bool all_hold() const;
};

/// Runs double -> unfold -> cut (both unfolding conventions) and checks each
/// step of the comparison chain numerically at scan ceiling kmax.
ChainReport upper_bound_chain(const MetricGraph& g, double alpha, double kmax, const SolverOptions& opts = {});

}  // namespace qtorsion

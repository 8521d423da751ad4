#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace qtorsion {

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An edge is the interval [0, length]; s = 0 sits at `from`, s = length at `to`.
struct Edge {
  std::string id;
  std::string from;
  std::string to;
  double length = 0.0;
};

/// A location on the graph: arclength s along the named edge.
struct GraphPoint {
  std::string edge;
  double s = 0.0;
};

/// One end of an edge. side == 0 is the source end (s = 0), side == 1 the target end.
struct Endpoint {
  std::size_t edge = 0;
  int side = 0;
};

/// Compact metric graph with a distinguished Dirichlet vertex set.
///
/// Construction never throws on semantic problems (disconnected skeleton,
/// bad lengths, unknown ids); those are reported by validate(). Self-loops and
/// parallel edges are allowed. Ids are opaque strings and survive surgery.
class MetricGraph {
 public:
  MetricGraph() = default;
  MetricGraph(std::vector<std::string> vertices, std::vector<Edge> edges,
              std::vector<std::string> dirichlet);

  const std::vector<std::string>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<std::string>& dirichlet() const { return dirichlet_; }

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_edges() const { return edges_.size(); }

  std::optional<std::size_t> find_vertex(std::string_view id) const;
  std::optional<std::size_t> find_edge(std::string_view id) const;

  bool is_dirichlet(std::size_t vertex) const { return dirichlet_flag_.at(vertex) != 0; }

  // Resolved endpoint vertex indices; std::nullopt when the edge names an
  // unknown vertex (only possible for graphs that fail validation).
  std::optional<std::size_t> source(std::size_t edge) const;
  std::optional<std::size_t> target(std::size_t edge) const;

  /// Edge ends incident to a vertex, in edge order, source end before target end.
  const std::vector<Endpoint>& incident(std::size_t vertex) const { return incident_.at(vertex); }

 private:
  std::vector<std::string> vertices_;
  std::vector<Edge> edges_;
  std::vector<std::string> dirichlet_;

  std::unordered_map<std::string, std::size_t> vertex_index_;
  std::unordered_map<std::string, std::size_t> edge_index_;
  std::vector<char> dirichlet_flag_;
  std::vector<std::optional<std::size_t>> source_;
  std::vector<std::optional<std::size_t>> target_;
  std::vector<std::vector<Endpoint>> incident_;
};

struct ValidationReport {
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
  std::string to_string() const;
};

ValidationReport validate(const MetricGraph& g);

/// Throws GraphError carrying the full report when g is not valid.
void require_valid(const MetricGraph& g);

double total_length(const MetricGraph& g);
double min_edge_length(const MetricGraph& g);
double max_edge_length(const MetricGraph& g);

/// Number of edge ends at v; a self-loop contributes 2.
std::size_t vertex_degree(const MetricGraph& g, std::string_view vertex);

/// Splits the edge at p into two edges joined by a new Kirchhoff vertex of degree 2.
MetricGraph insert_dummy_vertex(const MetricGraph& g, const GraphPoint& p);

/// Returns `base` if unused as a vertex id in g, otherwise base with a numeric suffix.
std::string fresh_vertex_id(const MetricGraph& g, const std::string& base);
std::string fresh_edge_id(const MetricGraph& g, const std::string& base);

}  // namespace qtorsion

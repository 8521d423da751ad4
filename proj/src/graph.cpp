#include "qtorsion/graph.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace qtorsion {

MetricGraph::MetricGraph(std::vector<std::string> vertices, std::vector<Edge> edges,
                         std::vector<std::string> dirichlet)
    : vertices_(std::move(vertices)), edges_(std::move(edges)), dirichlet_(std::move(dirichlet)) {
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    vertex_index_.try_emplace(vertices_[i], i);
  }
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    edge_index_.try_emplace(edges_[i].id, i);
  }
  dirichlet_flag_.assign(vertices_.size(), 0);
  for (const auto& d : dirichlet_) {
    if (auto v = find_vertex(d)) dirichlet_flag_[*v] = 1;
  }
  incident_.resize(vertices_.size());
  source_.reserve(edges_.size());
  target_.reserve(edges_.size());
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    auto s = find_vertex(edges_[e].from);
    auto t = find_vertex(edges_[e].to);
    source_.push_back(s);
    target_.push_back(t);
    if (s) incident_[*s].push_back({e, 0});
    if (t) incident_[*t].push_back({e, 1});
  }
}

std::optional<std::size_t> MetricGraph::find_vertex(std::string_view id) const {
  auto it = vertex_index_.find(std::string(id));
  if (it == vertex_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> MetricGraph::find_edge(std::string_view id) const {
  auto it = edge_index_.find(std::string(id));
  if (it == edge_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> MetricGraph::source(std::size_t edge) const { return source_.at(edge); }
std::optional<std::size_t> MetricGraph::target(std::size_t edge) const { return target_.at(edge); }

std::string ValidationReport::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) os << "; ";
    os << violations[i];
  }
  return os.str();
}

ValidationReport validate(const MetricGraph& g) {
  ValidationReport report;
  auto add = [&](std::string msg) { report.violations.push_back(std::move(msg)); };

  if (g.num_vertices() == 0) add("graph has no vertices");
  if (g.num_edges() == 0) add("graph has no edges");

  std::set<std::string> seen;
  for (const auto& v : g.vertices()) {
    if (!seen.insert(v).second) add("duplicate vertex id '" + v + "'");
  }
  seen.clear();
  for (const auto& e : g.edges()) {
    if (!seen.insert(e.id).second) add("duplicate edge id '" + e.id + "'");
  }

  bool endpoints_ok = true;
  for (std::size_t i = 0; i < g.num_edges(); ++i) {
    const Edge& e = g.edges()[i];
    if (!std::isfinite(e.length) || e.length <= 0.0) {
      std::ostringstream os;
      os << "edge '" << e.id << "' has non-positive or non-finite length " << e.length;
      add(os.str());
    }
    if (!g.source(i)) {
      add("edge '" + e.id + "' references unknown vertex '" + e.from + "'");
      endpoints_ok = false;
    }
    if (!g.target(i)) {
      add("edge '" + e.id + "' references unknown vertex '" + e.to + "'");
      endpoints_ok = false;
    }
  }

  if (g.dirichlet().empty()) add("empty Dirichlet set");
  seen.clear();
  for (const auto& d : g.dirichlet()) {
    if (!g.find_vertex(d)) add("Dirichlet vertex '" + d + "' is not a vertex");
    if (!seen.insert(d).second) add("duplicate Dirichlet entry '" + d + "'");
  }

  if (endpoints_ok && g.num_vertices() > 0) {
    // Breadth-first search on the combinatorial skeleton.
    std::vector<char> reached(g.num_vertices(), 0);
    std::vector<std::size_t> queue{0};
    reached[0] = 1;
    while (!queue.empty()) {
      std::size_t v = queue.back();
      queue.pop_back();
      for (const Endpoint& end : g.incident(v)) {
        std::size_t w = end.side == 0 ? *g.target(end.edge) : *g.source(end.edge);
        if (!reached[w]) {
          reached[w] = 1;
          queue.push_back(w);
        }
      }
    }
    if (std::find(reached.begin(), reached.end(), 0) != reached.end()) add("not connected");
  }
  return report;
}

void require_valid(const MetricGraph& g) {
  auto report = validate(g);
  if (!report.ok()) throw GraphError("invalid metric graph: " + report.to_string());
}

double total_length(const MetricGraph& g) {
  double sum = 0.0;
  for (const auto& e : g.edges()) sum += e.length;
  return sum;
}

double min_edge_length(const MetricGraph& g) {
  double m = INFINITY;
  for (const auto& e : g.edges()) m = std::min(m, e.length);
  return m;
}

double max_edge_length(const MetricGraph& g) {
  double m = 0.0;
  for (const auto& e : g.edges()) m = std::max(m, e.length);
  return m;
}

std::size_t vertex_degree(const MetricGraph& g, std::string_view vertex) {
  auto v = g.find_vertex(vertex);
  if (!v) throw GraphError("unknown vertex id '" + std::string(vertex) + "'");
  return g.incident(*v).size();
}

std::string fresh_vertex_id(const MetricGraph& g, const std::string& base) {
  if (!g.find_vertex(base)) return base;
  for (int i = 1;; ++i) {
    std::string candidate = base + "~" + std::to_string(i);
    if (!g.find_vertex(candidate)) return candidate;
  }
}

std::string fresh_edge_id(const MetricGraph& g, const std::string& base) {
  if (!g.find_edge(base)) return base;
  for (int i = 1;; ++i) {
    std::string candidate = base + "~" + std::to_string(i);
    if (!g.find_edge(candidate)) return candidate;
  }
}

MetricGraph insert_dummy_vertex(const MetricGraph& g, const GraphPoint& p) {
  auto idx = g.find_edge(p.edge);
  if (!idx) throw GraphError("unknown edge id '" + p.edge + "'");
  const Edge& old = g.edges()[*idx];
  if (!(p.s > 0.0 && p.s < old.length)) {
    throw GraphError("dummy vertex must lie strictly inside edge '" + p.edge + "'");
  }

  std::string mid = fresh_vertex_id(g, old.id + "#split");
  std::string first_id = fresh_edge_id(g, old.id + ".0");
  std::string second_id = fresh_edge_id(g, old.id + ".1");

  std::vector<std::string> vertices = g.vertices();
  vertices.push_back(mid);

  std::vector<Edge> edges;
  edges.reserve(g.num_edges() + 1);
  for (std::size_t i = 0; i < g.num_edges(); ++i) {
    if (i != *idx) {
      edges.push_back(g.edges()[i]);
      continue;
    }
    edges.push_back({first_id, old.from, mid, p.s});
    edges.push_back({second_id, mid, old.to, old.length - p.s});
  }
  return MetricGraph(std::move(vertices), std::move(edges), g.dirichlet());
}

}  // namespace qtorsion

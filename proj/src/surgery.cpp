#include "qtorsion/surgery.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>

#include "qtorsion/closed_forms.hpp"

namespace qtorsion {

const char* to_string(SurgeryKind kind) {
  switch (kind) {
    case SurgeryKind::Double: return "double";
    case SurgeryKind::Glue: return "glue";
    case SurgeryKind::Unfold: return "unfold";
    case SurgeryKind::Cut: return "cut";
  }
  return "unknown";
}

namespace {

void require_valid_input(const MetricGraph& g) {
  auto report = validate(g);
  if (!report.ok()) throw SurgeryError("invalid input graph: " + report.to_string());
}

std::map<std::string, std::string> identity_provenance(const MetricGraph& g) {
  std::map<std::string, std::string> prov;
  for (const auto& e : g.edges()) prov[e.id] = e.id;
  return prov;
}

std::size_t other_end(const MetricGraph& g, const Endpoint& end) {
  return end.side == 0 ? *g.target(end.edge) : *g.source(end.edge);
}

}  // namespace

SurgeryResult double_edges(const MetricGraph& g) {
  require_valid_input(g);
  SurgeryResult out;
  out.op.kind = SurgeryKind::Double;
  std::vector<Edge> edges;
  edges.reserve(2 * g.num_edges());
  for (int copy = 1; copy <= 2; ++copy) {
    for (const auto& e : g.edges()) {
      Edge d = e;
      d.id = std::to_string(copy) + "." + e.id;
      out.provenance[d.id] = e.id;
      edges.push_back(std::move(d));
    }
  }
  out.graph = MetricGraph(g.vertices(), std::move(edges), g.dirichlet());
  return out;
}

SurgeryResult glue_vertices(const MetricGraph& g, const std::vector<std::string>& members) {
  require_valid_input(g);
  if (members.size() < 2) throw SurgeryError("glue needs at least two vertices");
  std::set<std::string> member_set;
  for (const auto& m : members) {
    if (!g.find_vertex(m)) throw SurgeryError("glue: unknown vertex '" + m + "'");
    if (!member_set.insert(m).second) throw SurgeryError("glue: vertex '" + m + "' listed twice");
  }

  std::string merged_name;
  for (const auto& m : members) merged_name += (merged_name.empty() ? "" : "+") + m;
  MetricGraph others(
      [&] {
        std::vector<std::string> rest;
        for (const auto& v : g.vertices()) {
          if (!member_set.count(v)) rest.push_back(v);
        }
        return rest;
      }(),
      {}, {});
  const std::string merged = fresh_vertex_id(others, merged_name);

  auto rename = [&](const std::string& v) { return member_set.count(v) ? merged : v; };

  std::vector<std::string> vertices;
  bool placed = false;
  for (const auto& v : g.vertices()) {
    if (!member_set.count(v)) {
      vertices.push_back(v);
    } else if (!placed) {
      vertices.push_back(merged);
      placed = true;
    }
  }
  std::vector<Edge> edges;
  for (const auto& e : g.edges()) edges.push_back({e.id, rename(e.from), rename(e.to), e.length});
  std::vector<std::string> dirichlet;
  for (const auto& d : g.dirichlet()) {
    std::string r = rename(d);
    if (std::find(dirichlet.begin(), dirichlet.end(), r) == dirichlet.end()) dirichlet.push_back(r);
  }

  SurgeryResult out;
  out.op = {SurgeryKind::Glue, members};
  out.graph = MetricGraph(std::move(vertices), std::move(edges), std::move(dirichlet));
  out.provenance = identity_provenance(out.graph);
  return out;
}

SurgeryResult unfold_to_cycle(const MetricGraph& g, UnfoldDirichlet mode) {
  require_valid_input(g);
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    if (g.incident(v).size() % 2 != 0) {
      throw SurgeryError("unfold: vertex '" + g.vertices()[v] + "' has odd degree " +
                         std::to_string(g.incident(v).size()));
    }
  }
  std::size_t start = 0;
  while (!g.is_dirichlet(start)) ++start;

  struct Step {
    std::size_t vertex;
    std::optional<std::size_t> edge;
  };
  std::vector<char> used(g.num_edges(), 0);
  std::vector<Step> stack{{start, std::nullopt}};
  std::vector<Step> circuit;
  while (!stack.empty()) {
    const std::size_t v = stack.back().vertex;
    std::optional<Endpoint> best;
    for (const Endpoint& end : g.incident(v)) {
      if (used[end.edge]) continue;
      if (!best || g.edges()[end.edge].id < g.edges()[best->edge].id) best = end;
    }
    if (best) {
      used[best->edge] = 1;
      stack.push_back({other_end(g, *best), best->edge});
    } else {
      circuit.push_back(stack.back());
      stack.pop_back();
    }
  }
  std::reverse(circuit.begin(), circuit.end());
  const std::size_t m = circuit.size() - 1;  // number of edges traversed

  std::vector<std::size_t> visits(g.num_vertices(), 0);
  for (std::size_t i = 0; i < m; ++i) ++visits[circuit[i].vertex];
  std::vector<std::size_t> seen(g.num_vertices(), 0);
  std::vector<std::string> names(m);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t v = circuit[i].vertex;
    const std::string& id = g.vertices()[v];
    names[i] = visits[v] == 1 ? id : id + "#" + std::to_string(++seen[v]);
  }

  std::vector<Edge> edges;
  for (std::size_t i = 1; i <= m; ++i) {
    const Edge& orig = g.edges()[*circuit[i].edge];
    edges.push_back({orig.id, names[i - 1], names[i % m], orig.length});
  }
  std::vector<std::string> dirichlet;
  for (std::size_t i = 0; i < m; ++i) {
    const bool dirichlet_visit = g.is_dirichlet(circuit[i].vertex);
    if (mode == UnfoldDirichlet::AllVisits ? dirichlet_visit : i == 0) dirichlet.push_back(names[i]);
  }

  SurgeryResult out;
  out.op.kind = SurgeryKind::Unfold;
  out.graph = MetricGraph(names, std::move(edges), std::move(dirichlet));
  out.provenance = identity_provenance(out.graph);
  return out;
}

SurgeryResult cut_cycle(const MetricGraph& g, const std::string& vertex) {
  require_valid_input(g);
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    if (g.incident(v).size() != 2) throw SurgeryError("cut: graph is not a cycle (vertex '" + g.vertices()[v] + "')");
  }
  auto cut = g.find_vertex(vertex);
  if (!cut) throw SurgeryError("cut: unknown vertex '" + vertex + "'");
  if (!g.is_dirichlet(*cut)) throw SurgeryError("cut: vertex '" + vertex + "' is not Dirichlet");

  MetricGraph others(
      [&] {
        std::vector<std::string> rest;
        for (const auto& v : g.vertices()) {
          if (v != vertex) rest.push_back(v);
        }
        return rest;
      }(),
      {}, {});
  const std::string head = fresh_vertex_id(others, vertex + "-");
  const std::string tail = fresh_vertex_id(others, vertex + "+");

  const auto& start_ends = g.incident(*cut);
  Endpoint leave = start_ends[0];
  if (g.edges()[start_ends[1].edge].id < g.edges()[leave.edge].id) leave = start_ends[1];

  std::vector<std::string> vertices{head};
  std::vector<Edge> edges;
  std::vector<std::string> dirichlet{head};
  std::string current = head;
  while (true) {
    const Edge& e = g.edges()[leave.edge];
    const std::size_t w = other_end(g, leave);
    const std::string next = w == *cut ? tail : g.vertices()[w];
    edges.push_back({e.id, current, next, e.length});
    if (w == *cut) break;
    vertices.push_back(next);
    if (g.is_dirichlet(w)) dirichlet.push_back(next);
    const Endpoint arrived{leave.edge, 1 - leave.side};
    const auto& ends = g.incident(w);
    leave = (ends[0].edge == arrived.edge && ends[0].side == arrived.side) ? ends[1] : ends[0];
    current = next;
  }
  vertices.push_back(tail);
  dirichlet.push_back(tail);

  SurgeryResult out;
  out.op = {SurgeryKind::Cut, {vertex}};
  out.graph = MetricGraph(std::move(vertices), std::move(edges), std::move(dirichlet));
  out.provenance = identity_provenance(out.graph);
  return out;
}

bool ChainReport::all_hold() const {
  return std::all_of(checks.begin(), checks.end(), [](const ChainCheck& c) { return c.holds; });
}

ChainReport upper_bound_chain(const MetricGraph& g, double alpha, double kmax, const SolverOptions& opts) {
  check_alpha(alpha);
  require_valid_input(g);
  ChainReport report;
  report.alpha = alpha;
  report.interval_bound = interval_rigidity_dn(total_length(g), alpha);

  auto stage = [&](const std::string& name, const MetricGraph& graph) {
    RigidityResult r = rigidity(scan_spectrum(graph, kmax, opts), alpha);
    report.stages.push_back({name, r.value, r.tail_bound, r.n_terms});
    return report.stages.back();
  };
  auto leq = [&](const std::string& rel, double lhs, double lhs_tail, double rhs, double rhs_tail) {
    const double tol = lhs_tail + rhs_tail + 1e-8;
    report.checks.push_back({rel, lhs, rhs, tol, lhs <= rhs + tol});
  };
  auto eq = [&](const std::string& rel, double lhs, double lhs_tail, double rhs, double rhs_tail) {
    const double tol = lhs_tail + rhs_tail + 1e-8;
    report.checks.push_back({rel, lhs, rhs, tol, std::abs(lhs - rhs) <= tol});
  };

  const ChainStage base = stage("graph", g);
  const MetricGraph doubled = double_edges(g).graph;
  const ChainStage dbl = stage("double", doubled);
  leq("T(G) <= T(double)/2", base.rigidity, base.tail_bound, 0.5 * dbl.rigidity, 0.5 * dbl.tail_bound);

  for (auto mode : {UnfoldDirichlet::AllVisits, UnfoldDirichlet::FirstVisit}) {
    const std::string tag = mode == UnfoldDirichlet::AllVisits ? "all" : "first";
    const MetricGraph cycle = unfold_to_cycle(doubled, mode).graph;
    const ChainStage cyc = stage("unfold(" + tag + ")", cycle);
    const MetricGraph path = cut_cycle(cycle, cycle.vertices().front()).graph;
    const ChainStage cut = stage("cut(" + tag + ")", path);
    leq("T(double) <= T(unfold(" + tag + "))", dbl.rigidity, dbl.tail_bound, cyc.rigidity, cyc.tail_bound);
    eq("T(unfold(" + tag + ")) = T(cut(" + tag + "))", cyc.rigidity, cyc.tail_bound, cut.rigidity, cut.tail_bound);
    leq("T(cut(" + tag + "))/2 <= T(interval)", 0.5 * cut.rigidity, 0.5 * cut.tail_bound, report.interval_bound, 0.0);
  }
  leq("T(G) <= T(interval)", base.rigidity, base.tail_bound, report.interval_bound, 0.0);
  return report;
}

}  // namespace qtorsion

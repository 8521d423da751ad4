#include "qtorsion/graph_io.hpp"

#include <fstream>
#include <sstream>

namespace qtorsion {

namespace {

std::vector<std::string> string_array(const nlohmann::json& doc, const char* field) {
  if (!doc.contains(field)) throw DocumentError(std::string("missing field \"") + field + "\"");
  const auto& arr = doc.at(field);
  if (!arr.is_array()) throw DocumentError(std::string("field \"") + field + "\" must be an array");
  std::vector<std::string> out;
  out.reserve(arr.size());
  for (const auto& v : arr) {
    if (!v.is_string()) {
      throw DocumentError(std::string("field \"") + field + "\" must contain only strings");
    }
    out.push_back(v.get<std::string>());
  }
  return out;
}

std::string string_field(const nlohmann::json& obj, const char* field) {
  if (!obj.contains(field) || !obj.at(field).is_string()) {
    throw DocumentError(std::string("edge field \"") + field + "\" must be a string");
  }
  return obj.at(field).get<std::string>();
}

}  // namespace

MetricGraph parse_graph_document(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DocumentError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw DocumentError("graph document must be a JSON object");

  auto vertices = string_array(doc, "vertices");
  auto dirichlet = string_array(doc, "dirichlet");

  if (!doc.contains("edges") || !doc.at("edges").is_array()) {
    throw DocumentError("field \"edges\" must be an array");
  }
  std::vector<Edge> edges;
  for (const auto& e : doc.at("edges")) {
    if (!e.is_object()) throw DocumentError("each edge must be an object");
    Edge edge;
    edge.id = string_field(e, "id");
    edge.from = string_field(e, "from");
    edge.to = string_field(e, "to");
    if (!e.contains("length") || !e.at("length").is_number()) {
      throw DocumentError("edge \"" + edge.id + "\" has no numeric \"length\"");
    }
    edge.length = e.at("length").get<double>();
    edges.push_back(std::move(edge));
  }
  return MetricGraph(std::move(vertices), std::move(edges), std::move(dirichlet));
}

MetricGraph load_graph_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DocumentError("cannot open graph document '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_graph_document(ss.str());
}

ordered_json graph_to_json(const MetricGraph& g) {
  ordered_json doc;
  doc["vertices"] = g.vertices();
  ordered_json edges = ordered_json::array();
  for (const auto& e : g.edges()) {
    ordered_json je;
    je["id"] = e.id;
    je["from"] = e.from;
    je["to"] = e.to;
    je["length"] = e.length;
    edges.push_back(std::move(je));
  }
  doc["edges"] = std::move(edges);
  doc["dirichlet"] = g.dirichlet();
  return doc;
}

std::string write_graph_document(const MetricGraph& g,
                                 const std::map<std::string, std::string>& provenance) {
  ordered_json doc = graph_to_json(g);
  if (!provenance.empty()) {
    ordered_json prov = ordered_json::object();
    for (const auto& [new_id, old_id] : provenance) prov[new_id] = old_id;
    doc["provenance"] = std::move(prov);
  }
  return dump_canonical(doc) + "\n";
}

}  // namespace qtorsion

#include "qtorsion/suite.hpp"

#include <map>

#include "qtorsion/graph_io.hpp"

namespace qtorsion {

namespace {

const std::map<std::string, std::string, std::less<>>& documents() {
  static const std::map<std::string, std::string, std::less<>> docs = {
      {"interval", R"({
  "vertices": ["v0", "v1"],
  "edges": [{"id": "e", "from": "v0", "to": "v1", "length": 1}],
  "dirichlet": ["v0"]
})"},
      {"flower1", R"({
  "vertices": ["c"],
  "edges": [{"id": "p1", "from": "c", "to": "c", "length": 1}],
  "dirichlet": ["c"]
})"},
      {"flower2", R"({
  "vertices": ["c"],
  "edges": [
    {"id": "p1", "from": "c", "to": "c", "length": 1},
    {"id": "p2", "from": "c", "to": "c", "length": 1}
  ],
  "dirichlet": ["c"]
})"},
      {"flower3", R"({
  "vertices": ["c"],
  "edges": [
    {"id": "p1", "from": "c", "to": "c", "length": 1},
    {"id": "p2", "from": "c", "to": "c", "length": 1},
    {"id": "p3", "from": "c", "to": "c", "length": 1}
  ],
  "dirichlet": ["c"]
})"},
      {"star3", R"({
  "vertices": ["c", "l1", "l2", "l3"],
  "edges": [
    {"id": "e1", "from": "c", "to": "l1", "length": 1},
    {"id": "e2", "from": "c", "to": "l2", "length": 1},
    {"id": "e3", "from": "c", "to": "l3", "length": 1}
  ],
  "dirichlet": ["l1", "l2", "l3"]
})"},
      {"doubled-triangle", R"({
  "vertices": ["v1", "v2", "v3"],
  "edges": [
    {"id": "1.e12", "from": "v1", "to": "v2", "length": 1},
    {"id": "1.e23", "from": "v2", "to": "v3", "length": 1},
    {"id": "1.e31", "from": "v3", "to": "v1", "length": 1},
    {"id": "2.e12", "from": "v1", "to": "v2", "length": 1},
    {"id": "2.e23", "from": "v2", "to": "v3", "length": 1},
    {"id": "2.e31", "from": "v3", "to": "v1", "length": 1}
  ],
  "dirichlet": ["v1"]
})"},
      {"loop", R"({
  "vertices": ["v0"],
  "edges": [{"id": "e", "from": "v0", "to": "v0", "length": 2}],
  "dirichlet": ["v0"]
})"},
  };
  return docs;
}

}  // namespace

const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names = {"interval", "flower1", "flower2", "flower3",
                                                 "star3", "doubled-triangle", "loop"};
  return names;
}

const std::string& builtin_document(std::string_view name) {
  const auto& docs = documents();
  auto it = docs.find(name);
  if (it == docs.end()) throw DocumentError("unknown built-in graph '" + std::string(name) + "'");
  return it->second;
}

MetricGraph builtin_graph(std::string_view name) { return parse_graph_document(builtin_document(name)); }

}  // namespace qtorsion

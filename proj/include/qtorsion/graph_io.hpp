#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

#include "qtorsion/graph.hpp"
#include "qtorsion/json_writer.hpp"

namespace qtorsion {

class DocumentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Graph document:
//   {"vertices": [..], "edges": [{"id","from","to","length"}, ..], "dirichlet": [..]}
// Unknown top-level fields (e.g. "provenance") are ignored on input.
MetricGraph parse_graph_document(std::string_view text);
MetricGraph load_graph_document(const std::string& path);

ordered_json graph_to_json(const MetricGraph& g);

// Provenance maps new edge id -> originating edge id; emitted as an extra
// "provenance" field when non-empty.
std::string write_graph_document(const MetricGraph& g,
                                 const std::map<std::string, std::string>& provenance = {});

}  // namespace qtorsion

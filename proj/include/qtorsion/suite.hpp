#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "qtorsion/graph.hpp"

namespace qtorsion {

// Built-in test graphs shipped as embedded graph documents:
// interval, flower1, flower2, flower3, star3, doubled-triangle, loop.
const std::vector<std::string>& builtin_names();

/// The embedded document text. Throws DocumentError for an unknown name.
const std::string& builtin_document(std::string_view name);

MetricGraph builtin_graph(std::string_view name);

}  // namespace qtorsion

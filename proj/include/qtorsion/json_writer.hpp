#pragma once

#include <string>

#include <json.hpp>

namespace qtorsion {

using ordered_json = nlohmann::ordered_json;

// Serializes with insertion-ordered keys and every floating-point value
// printed with 17 significant digits ("%.17g"). Non-finite values become null.
std::string dump_canonical(const ordered_json& j, int indent = 2);

// "%.17g" formatting used for CSV cells and JSON numbers alike.
std::string format_number(double x);

}  // namespace qtorsion

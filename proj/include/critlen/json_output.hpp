#pragma once

#include "json.hpp"

#include <ostream>
#include <string>

namespace critlen {

/// Library version string.
const char* version();

/// "%.17g"; NaN and infinities become "null".
std::string format_double(double v);

/// Writes j with floating-point numbers at 17 significant digits and object
/// keys in sorted order, so equal values always produce identical bytes.
void write_json(std::ostream& out, const nlohmann::json& j, int indent = 2);
std::string dump_json(const nlohmann::json& j, int indent = 2);

/// {"header": {"tool", "version", "config"}, "data": data}
nlohmann::json envelope(const nlohmann::json& config, nlohmann::json data);

} // namespace critlen

#pragma once

// Reader for the small TOML subset used by providers.toml: [table] headers,
// key = value pairs with basic strings, integers, floats and booleans, and
// '#' comments. Anything else is rejected with a line number.

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <variant>

namespace scenedirector::toml_lite {

using Value = std::variant<std::string, std::int64_t, double, bool>;
using Table = std::map<std::string, Value>;
using Document = std::map<std::string, Table>;

/// Throws Error(config) on unsupported syntax.
Document parse(std::string_view text);

}  // namespace scenedirector::toml_lite

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <variant>

namespace irskg {

/// A property value: text, 64-bit integer, 64-bit float or boolean.
///
/// Nested values are not representable. Text must be UTF-8 and floats must
/// be finite; PropertyGraph enforces both on every mutation.
using PropertyValue = std::variant<std::string, std::int64_t, double, bool>;

/// Key-ordered property map. Ordering makes export byte-stable.
using PropertyMap = std::map<std::string, PropertyValue, std::less<>>;

bool is_valid_utf8(std::string_view text);

/// Human-readable rendering, used in diagnostics.
std::string to_display(const PropertyValue& value);

inline const std::string* as_text(const PropertyValue& value) {
  return std::get_if<std::string>(&value);
}

inline const std::int64_t* as_int(const PropertyValue& value) {
  return std::get_if<std::int64_t>(&value);
}

}  // namespace irskg

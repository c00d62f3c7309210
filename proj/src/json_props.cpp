#include "json_props.hpp"

#include <limits>

namespace irskg::detail {

std::optional<PropertyValue> property_from_json(const nlohmann::json& j) {
  switch (j.type()) {
    case nlohmann::json::value_t::string:
      return PropertyValue{j.get<std::string>()};
    case nlohmann::json::value_t::boolean:
      return PropertyValue{j.get<bool>()};
    case nlohmann::json::value_t::number_integer:
      return PropertyValue{j.get<std::int64_t>()};
    case nlohmann::json::value_t::number_unsigned: {
      const auto u = j.get<std::uint64_t>();
      if (u > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
        return std::nullopt;
      }
      return PropertyValue{static_cast<std::int64_t>(u)};
    }
    case nlohmann::json::value_t::number_float:
      return PropertyValue{j.get<double>()};
    default:
      return std::nullopt;
  }
}

nlohmann::ordered_json property_to_json(const PropertyValue& value) {
  return std::visit([](const auto& v) { return nlohmann::ordered_json(v); }, value);
}

nlohmann::ordered_json properties_to_json(const PropertyMap& properties) {
  auto out = nlohmann::ordered_json::object();
  for (const auto& [key, value] : properties) out[key] = property_to_json(value);
  return out;
}

}  // namespace irskg::detail

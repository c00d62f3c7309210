#pragma once

#include <optional>

#include <json.hpp>

#include "irskg/property.hpp"

namespace irskg::detail {

/// Scalar JSON to property value; nullopt for null, arrays, objects and
/// unsigned integers beyond int64.
std::optional<PropertyValue> property_from_json(const nlohmann::json& j);

nlohmann::ordered_json property_to_json(const PropertyValue& value);

nlohmann::ordered_json properties_to_json(const PropertyMap& properties);

}  // namespace irskg::detail

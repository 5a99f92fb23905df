#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace dlp::jsonschema {

// Validator for the JSON Schema subset used by this repo's checked-in
// schemas: type, properties, required, items, enum, additionalProperties
// (boolean), minimum, maximum. Returns the violations (empty = valid).
std::vector<std::string> validate(const nlohmann::json& schema,
                                  const nlohmann::json& instance);

}  // namespace dlp::jsonschema

#include "dlp/jsonschema.hpp"

namespace dlp::jsonschema {

using nlohmann::json;

namespace {

bool type_matches(const std::string& type, const json& v) {
    if (type == "object") return v.is_object();
    if (type == "array") return v.is_array();
    if (type == "string") return v.is_string();
    if (type == "number") return v.is_number();
    if (type == "integer") return v.is_number_integer();
    if (type == "boolean") return v.is_boolean();
    if (type == "null") return v.is_null();
    return false;
}

void check(const json& schema, const json& v, const std::string& path,
           std::vector<std::string>& errors) {
    if (schema.contains("type")) {
        const std::string type = schema["type"].get<std::string>();
        if (!type_matches(type, v)) {
            errors.push_back(path + ": expected " + type + ", got " + v.type_name());
            return;
        }
    }
    if (schema.contains("enum")) {
        bool found = false;
        for (const auto& e : schema["enum"]) {
            if (e == v) {
                found = true;
                break;
            }
        }
        if (!found) errors.push_back(path + ": value not in enum");
    }
    if (v.is_number()) {
        if (schema.contains("minimum") && v.get<double>() < schema["minimum"].get<double>()) {
            errors.push_back(path + ": below minimum");
        }
        if (schema.contains("maximum") && v.get<double>() > schema["maximum"].get<double>()) {
            errors.push_back(path + ": above maximum");
        }
    }
    if (v.is_object()) {
        if (schema.contains("required")) {
            for (const auto& key : schema["required"]) {
                if (!v.contains(key.get<std::string>())) {
                    errors.push_back(path + ": missing required key " + key.get<std::string>());
                }
            }
        }
        const json props = schema.value("properties", json::object());
        for (const auto& [key, sub] : v.items()) {
            if (props.contains(key)) {
                check(props[key], sub, path + "/" + key, errors);
            } else if (schema.contains("additionalProperties") &&
                       schema["additionalProperties"].is_boolean() &&
                       !schema["additionalProperties"].get<bool>()) {
                errors.push_back(path + ": unexpected key " + key);
            }
        }
    }
    if (v.is_array() && schema.contains("items")) {
        for (std::size_t i = 0; i < v.size(); ++i) {
            check(schema["items"], v[i], path + "/" + std::to_string(i), errors);
        }
    }
}

}  // namespace

std::vector<std::string> validate(const json& schema, const json& instance) {
    std::vector<std::string> errors;
    check(schema, instance, "#", errors);
    return errors;
}

}  // namespace dlp::jsonschema

#pragma once

// Minimal JSON-schema subset checker for the shipped schema files: supports
// "type" (object/array/string/number/integer/boolean), "required",
// "properties", "items" and file-relative "$ref".

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace schema_check {

inline nlohmann::json load_schema(const std::string& name) {
  const std::string path = std::string(MAGICSIM_SCHEMA_DIR) + "/" + name;
  std::ifstream f(path);
  if (!f) throw std::runtime_error("missing schema: " + path);
  return nlohmann::json::parse(f);
}

inline void validate(const nlohmann::json& schema, const nlohmann::json& value,
                     std::vector<std::string>& errors,
                     const std::string& path = "$") {
  using nlohmann::json;
  if (schema.contains("$ref")) {
    validate(load_schema(schema["$ref"].get<std::string>()), value, errors, path);
    return;
  }
  if (schema.contains("type")) {
    const std::string t = schema["type"].get<std::string>();
    const bool ok =
        (t == "object" && value.is_object()) ||
        (t == "array" && value.is_array()) ||
        (t == "string" && value.is_string()) ||
        (t == "boolean" && value.is_boolean()) ||
        (t == "integer" && value.is_number_integer()) ||
        (t == "number" && value.is_number());
    if (!ok) {
      errors.push_back(path + ": expected " + t + ", got " +
                       std::string(value.type_name()));
      return;
    }
  }
  if (schema.contains("required")) {
    for (const auto& k : schema["required"]) {
      if (!value.contains(k.get<std::string>())) {
        errors.push_back(path + ": missing required key '" +
                         k.get<std::string>() + "'");
      }
    }
  }
  if (schema.contains("properties") && value.is_object()) {
    for (const auto& [k, sub] : schema["properties"].items()) {
      if (value.contains(k)) validate(sub, value[k], errors, path + "." + k);
    }
  }
  if (schema.contains("items") && value.is_array()) {
    for (std::size_t i = 0; i < value.size(); ++i) {
      validate(schema["items"], value[i], errors,
               path + "[" + std::to_string(i) + "]");
    }
  }
}

inline std::vector<std::string> check(const std::string& schema_name,
                                      const nlohmann::json& value) {
  std::vector<std::string> errors;
  validate(load_schema(schema_name), value, errors);
  return errors;
}

}  // namespace schema_check

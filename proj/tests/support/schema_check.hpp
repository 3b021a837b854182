#pragma once

#include <string>

#include <json.hpp>

namespace folcc::testsupport {

// Structural validator for the subset of JSON Schema the shipped schemas
// use: type, enum, required, properties, items. Unknown keywords are
// ignored; absent properties are unconstrained.
inline bool conforms(const nlohmann::json& schema, const nlohmann::json& value,
                     std::string& err, const std::string& path = "$") {
    if (schema.contains("type")) {
        const std::string& t = schema["type"].get_ref<const std::string&>();
        bool ok = (t == "object" && value.is_object()) || (t == "array" && value.is_array()) ||
                  (t == "string" && value.is_string()) ||
                  (t == "integer" && value.is_number_integer()) ||
                  (t == "number" && value.is_number()) ||
                  (t == "boolean" && value.is_boolean()) || (t == "null" && value.is_null());
        if (!ok) {
            err = path + ": expected " + t;
            return false;
        }
    }
    if (schema.contains("enum")) {
        bool hit = false;
        for (const auto& cand : schema["enum"]) hit = hit || cand == value;
        if (!hit) {
            err = path + ": value not in enum";
            return false;
        }
    }
    if (value.is_object()) {
        if (schema.contains("required"))
            for (const auto& key : schema["required"]) {
                const std::string& k = key.get_ref<const std::string&>();
                if (!value.contains(k)) {
                    err = path + ": missing required key '" + k + "'";
                    return false;
                }
            }
        if (schema.contains("properties"))
            for (const auto& [k, sub] : schema["properties"].items())
                if (value.contains(k) && !conforms(sub, value.at(k), err, path + "." + k))
                    return false;
    }
    if (value.is_array() && schema.contains("items")) {
        std::size_t i = 0;
        for (const auto& elem : value) {
            if (!conforms(schema["items"], elem, err, path + "[" + std::to_string(i) + "]"))
                return false;
            ++i;
        }
    }
    return true;
}

} // namespace folcc::testsupport

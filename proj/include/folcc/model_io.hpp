#pragma once

// JSON model files for chart categories and fibered covers. A category file
// has "objects", "morphisms" and "composition" arrays; a fibered model adds a
// "fiber" complex and a "sub_objects" list whose vertices use the product
// naming "u|w". Malformed files surface as model_error with the offending
// field; a missing file is a usage error.

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "folcc/chart_category.hpp"
#include "folcc/errors.hpp"
#include "folcc/fibered_cover.hpp"
#include "folcc/simplicial.hpp"

namespace folcc {

namespace detail {

inline std::vector<std::string> string_list(const nlohmann::json& j, const char* field) {
    if (!j.is_array()) throw model_error(std::string("field '") + field + "' must be an array");
    std::vector<std::string> out;
    for (const auto& e : j) {
        if (!e.is_string())
            throw model_error(std::string("field '") + field + "' must hold strings");
        out.push_back(e.get<std::string>());
    }
    return out;
}

inline const nlohmann::json& field(const nlohmann::json& j, const char* name) {
    auto it = j.find(name);
    if (it == j.end()) throw model_error(std::string("missing field '") + name + "'");
    return *it;
}

inline SimplicialComplex complex_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw model_error("complex entry must be an object");
    std::vector<std::vector<std::string>> maximal;
    for (const auto& s : field(j, "maximal_simplices")) {
        maximal.push_back(string_list(s, "maximal_simplices"));
    }
    return SimplicialComplex(string_list(field(j, "vertices"), "vertices"), maximal);
}

} // namespace detail

inline ChartCategory category_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw model_error("model root must be an object");
    ChartCategory cat;
    for (const auto& o : detail::field(j, "objects")) {
        if (!o.is_object()) throw model_error("object entry must be an object");
        cat.add_object({detail::field(o, "id").get<std::string>(), detail::complex_from_json(o)});
    }
    for (const auto& m : detail::field(j, "morphisms")) {
        if (!m.is_object()) throw model_error("morphism entry must be an object");
        ChartMorphism cm;
        cm.id = detail::field(m, "id").get<std::string>();
        cm.source = detail::field(m, "source").get<std::string>();
        cm.target = detail::field(m, "target").get<std::string>();
        const nlohmann::json& vm = detail::field(m, "vertex_map");
        if (!vm.is_object())
            throw model_error("vertex_map of '" + cm.id + "' must be an object");
        for (auto it = vm.begin(); it != vm.end(); ++it) {
            if (!it.value().is_string())
                throw model_error("vertex_map of '" + cm.id + "' must map strings to strings");
            cm.vertex_map[it.key()] = it.value().get<std::string>();
        }
        cat.add_morphism(std::move(cm));
    }
    for (const auto& c : detail::field(j, "composition")) {
        if (!c.is_object()) throw model_error("composition entry must be an object");
        cat.set_composition(detail::field(c, "first").get<std::string>(),
                            detail::field(c, "then").get<std::string>(),
                            detail::field(c, "equals").get<std::string>());
    }
    cat.validate();
    return cat;
}

struct FiberedModel {
    ChartCategory base;
    SimplicialComplex fiber;
    std::vector<SubObjectSpec> sub_objects;
};

inline bool is_fibered_model(const nlohmann::json& j) {
    return j.is_object() && j.contains("fiber");
}

inline FiberedModel fibered_from_json(const nlohmann::json& j) {
    FiberedModel model{category_from_json(j), detail::complex_from_json(detail::field(j, "fiber")),
                       {}};
    auto it = j.find("sub_objects");
    if (it != j.end()) {
        for (const auto& s : *it) {
            if (!s.is_object()) throw model_error("sub_object entry must be an object");
            model.sub_objects.push_back({detail::field(s, "id").get<std::string>(),
                                         detail::field(s, "base").get<std::string>(),
                                         detail::string_list(detail::field(s, "vertices"),
                                                             "vertices")});
        }
    }
    return model;
}

inline nlohmann::json parse_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw usage_error("cannot open model file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw model_error("invalid JSON in '" + path + "': " + e.what());
    }
    return j;
}

inline ChartCategory load_category(const std::string& path) {
    nlohmann::json j = parse_model_file(path);
    try {
        return category_from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw model_error("invalid model '" + path + "': " + e.what());
    }
}

inline FiberedModel load_fibered(const std::string& path) {
    nlohmann::json j = parse_model_file(path);
    if (!is_fibered_model(j)) throw model_error("model '" + path + "' has no fiber");
    try {
        return fibered_from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw model_error("invalid model '" + path + "': " + e.what());
    }
}

} // namespace folcc

#pragma once

// Finite composition-closed categories of chart objects (simplicial complexes)
// and chart morphisms (simplicial vertex maps). Validation checks identities,
// closure, associativity and simplicial-map validity, naming the first
// violation. String enumeration follows the non-normalized convention:
// identity arrows are included.

#include <cstdlib>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "folcc/errors.hpp"
#include "folcc/simplicial.hpp"

namespace folcc {

struct ChartObject {
    std::string id;
    SimplicialComplex complex;
};

struct ChartMorphism {
    std::string id;
    std::string source;
    std::string target;
    std::map<std::string, std::string> vertex_map;
};

// Cap on materialized composable strings; tune with FOLCC_MAX_STRINGS.
inline std::size_t default_string_cap() {
    if (const char* s = std::getenv("FOLCC_MAX_STRINGS")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(s, &end, 10);
        if (end == s || *end != '\0' || v == 0)
            throw usage_error("FOLCC_MAX_STRINGS must be a positive integer");
        return static_cast<std::size_t>(v);
    }
    return 100000;
}

class ChartCategory {
public:
    void add_object(ChartObject o) {
        if (objects_.count(o.id)) throw model_error("duplicate object id '" + o.id + "'");
        objects_.emplace(o.id, std::move(o));
    }
    void add_morphism(ChartMorphism m) {
        if (morphisms_.count(m.id)) throw model_error("duplicate morphism id '" + m.id + "'");
        morphisms_.emplace(m.id, std::move(m));
    }
    void set_composition(const std::string& first, const std::string& then,
                         const std::string& equals) {
        compose_[{first, then}] = equals;
    }

    const std::map<std::string, ChartObject>& objects() const { return objects_; }
    const std::map<std::string, ChartMorphism>& morphisms() const { return morphisms_; }
    bool has_object(const std::string& id) const { return objects_.count(id) > 0; }
    const ChartObject& object(const std::string& id) const {
        auto it = objects_.find(id);
        if (it == objects_.end()) throw model_error("unknown object '" + id + "'");
        return it->second;
    }
    const ChartMorphism& morphism(const std::string& id) const {
        auto it = morphisms_.find(id);
        if (it == morphisms_.end()) throw model_error("unknown morphism '" + id + "'");
        return it->second;
    }

    // Composite of `first` followed by `then`.
    const std::string& compose(const std::string& first, const std::string& then) const {
        auto it = compose_.find({first, then});
        if (it == compose_.end())
            throw model_error("open composition ('" + first + "','" + then + "')");
        return it->second;
    }
    const std::string& identity_of(const std::string& obj) const {
        auto it = identity_.find(obj);
        if (it == identity_.end()) throw model_error("missing identity for object '" + obj + "'");
        return it->second;
    }

    void validate() {
        for (const auto& [id, m] : morphisms_) {
            const ChartObject& src = object_or_fail(m.source, id);
            const ChartObject& tgt = object_or_fail(m.target, id);
            for (const auto& v : src.complex.vertices())
                if (!m.vertex_map.count(v))
                    throw model_error("morphism '" + id + "' misses vertex '" + v + "'");
            for (const auto& [v, w] : m.vertex_map) {
                src.complex.vertex_index(v);
                if (!tgt.complex.has_vertex(w))
                    throw model_error("non-simplicial map '" + id + "': image vertex '" + w +
                                      "' not in target");
            }
            for (int q = 0; q <= src.complex.dim(); ++q)
                for (const auto& s : src.complex.simplices(q)) {
                    std::vector<int> img;
                    for (int v : s)
                        img.push_back(tgt.complex.vertex_index(
                            m.vertex_map.at(src.complex.vertex_name(v))));
                    if (detail::sort_sign(img) == 0) continue;
                    if (tgt.complex.simplex_index(q, img) < 0)
                        throw model_error("non-simplicial map '" + id + "'");
                }
        }

        for (const auto& [f_id, f] : morphisms_)
            for (const auto& [g_id, g] : morphisms_) {
                if (f.target != g.source) continue;
                auto it = compose_.find({f_id, g_id});
                if (it == compose_.end())
                    throw model_error("open composition ('" + f_id + "','" + g_id + "')");
            }
        for (const auto& [pair, e_id] : compose_) {
            const ChartMorphism& f = morphism(pair.first);
            const ChartMorphism& g = morphism(pair.second);
            if (f.target != g.source)
                throw model_error("composition table pairs non-composable ('" + pair.first +
                                  "','" + pair.second + "')");
            const ChartMorphism& e = morphism(e_id);
            if (e.source != f.source || e.target != g.target)
                throw model_error("composition table inconsistent at ('" + pair.first + "','" +
                                  pair.second + "')");
            for (const auto& [v, w] : f.vertex_map)
                if (e.vertex_map.at(v) != g.vertex_map.at(w))
                    throw model_error("composition table inconsistent at ('" + pair.first +
                                      "','" + pair.second + "')");
        }

        // An identity is recognized behaviorally: neutral on both sides under
        // the composition table, with the identity vertex map. At most one
        // morphism per object can pass, since two would have to compose to
        // both of them at once.
        identity_.clear();
        for (const auto& [oid, obj] : objects_) {
            std::string found;
            for (const auto& [mid, m] : morphisms_) {
                if (m.source != oid || m.target != oid) continue;
                bool ok = true;
                for (const auto& [v, w] : m.vertex_map) ok = ok && v == w;
                for (const auto& [fid, f] : morphisms_) {
                    if (!ok) break;
                    if (f.source == oid) ok = ok && compose(mid, fid) == fid;
                    if (f.target == oid) ok = ok && compose(fid, mid) == fid;
                }
                if (ok) {
                    found = mid;
                    break;
                }
            }
            if (found.empty()) throw model_error("missing identity for object '" + oid + "'");
            identity_[oid] = found;
        }

        for (const auto& [f_id, f] : morphisms_)
            for (const auto& [g_id, g] : morphisms_) {
                if (f.target != g.source) continue;
                for (const auto& [h_id, h] : morphisms_) {
                    if (g.target != h.source) continue;
                    if (compose(compose(f_id, g_id), h_id) != compose(f_id, compose(g_id, h_id)))
                        throw model_error("composition not associative at ('" + f_id + "','" +
                                          g_id + "','" + h_id + "')");
                }
            }
    }

    // Length-p composable strings in lexicographic order. p = 0 strings are
    // single object ids; longer strings are morphism id tuples.
    std::vector<std::vector<std::string>> strings(int p, std::size_t cap) const {
        if (p < 0) throw usage_error("negative string length");
        std::vector<std::vector<std::string>> out;
        if (p == 0) {
            for (const auto& [oid, obj] : objects_) out.push_back({oid});
            check_cap(out.size(), cap);
            return out;
        }
        out.push_back({});
        for (int step = 0; step < p; ++step) {
            std::vector<std::vector<std::string>> next;
            for (const auto& s : out)
                for (const auto& [mid, m] : morphisms_) {
                    if (!s.empty() && morphism(s.back()).target != m.source) continue;
                    auto ext = s;
                    ext.push_back(mid);
                    next.push_back(std::move(ext));
                    check_cap(next.size(), cap);
                }
            out = std::move(next);
        }
        return out;
    }

    const std::string& string_source(const std::vector<std::string>& key, int p) const {
        if (p == 0) return object(key.at(0)).id;
        return morphism(key.at(0)).source;
    }

private:
    std::map<std::string, ChartObject> objects_;
    std::map<std::string, ChartMorphism> morphisms_;
    std::map<std::pair<std::string, std::string>, std::string> compose_;
    std::map<std::string, std::string> identity_;

    const ChartObject& object_or_fail(const std::string& oid, const std::string& mid) const {
        auto it = objects_.find(oid);
        if (it == objects_.end())
            throw model_error("morphism '" + mid + "' references unknown object '" + oid + "'");
        return it->second;
    }
    static void check_cap(std::size_t n, std::size_t cap) {
        if (n > cap)
            throw guard_error("string count exceeds cap " + std::to_string(cap) +
                              "; raise FOLCC_MAX_STRINGS to proceed");
    }
};

} // namespace folcc

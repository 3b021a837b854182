#pragma once

// Exterior algebra over truncated jet coordinates. A form of degree q maps
// strictly increasing coordinate-index tuples to rational-function
// coefficients; the coefficient field may carry extra symbolic constants
// (params) that are never wedge-able.

#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "folcc/rational_function.hpp"

namespace folcc {

using IndexTuple = std::vector<int>;

// Coordinate substitution: each source coordinate maps to a rational function
// over the target field (coords followed by params). Params ride along by name.
struct Substitution {
    std::vector<std::string> coords;
    std::vector<std::string> params;
    std::map<std::string, RationalFunction> images;

    std::vector<std::string> field_vars() const {
        std::vector<std::string> v = coords;
        v.insert(v.end(), params.begin(), params.end());
        return v;
    }

    static Substitution identity(std::vector<std::string> coords,
                                 std::vector<std::string> params = {}) {
        Substitution s;
        s.coords = std::move(coords);
        s.params = std::move(params);
        auto fv = s.field_vars();
        for (const auto& c : s.coords) s.images[c] = RationalFunction::variable(fv, c);
        return s;
    }
};

// Apply `first`, then rewrite through `second`. Pullback is contravariant:
// pullback(pullback(a, first), second) == pullback(a, compose(first, second)).
inline Substitution compose(const Substitution& first, const Substitution& second) {
    Substitution r;
    r.coords = second.coords;
    r.params = second.params;
    auto fv = second.field_vars();
    for (const auto& [x, f] : first.images) r.images[x] = substitute(f, second.images, fv);
    return r;
}

class ExteriorForm {
public:
    using TermMap = std::map<IndexTuple, RationalFunction>;

    ExteriorForm() = default;
    ExteriorForm(std::vector<std::string> coords, std::vector<std::string> params, int degree)
        : coords_(std::move(coords)), params_(std::move(params)), degree_(degree) {
        if (degree_ < 0) throw error("negative form degree");
    }

    static ExteriorForm zero(std::vector<std::string> coords, std::vector<std::string> params,
                             int degree) {
        return ExteriorForm(std::move(coords), std::move(params), degree);
    }
    static ExteriorForm function(std::vector<std::string> coords, std::vector<std::string> params,
                                 RationalFunction f) {
        ExteriorForm r(std::move(coords), std::move(params), 0);
        if (f.vars() != r.field_vars()) throw error("coefficient has wrong variable list");
        if (!f.is_zero()) r.terms_.emplace(IndexTuple{}, std::move(f));
        return r;
    }
    // dx_i
    static ExteriorForm differential(std::vector<std::string> coords,
                                     std::vector<std::string> params, int i) {
        ExteriorForm r(std::move(coords), std::move(params), 1);
        if (i < 0 || i >= static_cast<int>(r.coords_.size()))
            throw error("coordinate index out of range");
        r.terms_.emplace(IndexTuple{i}, RationalFunction(MultiPoly::one(r.field_vars())));
        return r;
    }

    const std::vector<std::string>& coords() const { return coords_; }
    const std::vector<std::string>& params() const { return params_; }
    int degree() const { return degree_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    std::vector<std::string> field_vars() const {
        std::vector<std::string> v = coords_;
        v.insert(v.end(), params_.begin(), params_.end());
        return v;
    }

    RationalFunction coefficient(const IndexTuple& t) const {
        auto it = terms_.find(t);
        if (it != terms_.end()) return it->second;
        return RationalFunction(MultiPoly::zero(field_vars()));
    }

    void add_term(const IndexTuple& t, const RationalFunction& f) {
        if (static_cast<int>(t.size()) != degree_) throw error("index tuple has wrong length");
        if (f.is_zero()) return;
        auto [it, inserted] = terms_.try_emplace(t, f);
        if (!inserted) {
            it->second += f;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    ExteriorForm operator-() const {
        ExteriorForm r(coords_, params_, degree_);
        for (const auto& [t, f] : terms_) r.terms_.emplace(t, -f);
        return r;
    }
    friend ExteriorForm operator+(ExteriorForm a, const ExteriorForm& b) {
        a.check_space(b);
        if (a.degree_ != b.degree_) throw error("adding forms of different degree");
        for (const auto& [t, f] : b.terms_) a.add_term(t, f);
        return a;
    }
    friend ExteriorForm operator-(ExteriorForm a, const ExteriorForm& b) { return a + (-b); }
    ExteriorForm& operator+=(const ExteriorForm& o) { return *this = *this + o; }
    ExteriorForm& operator-=(const ExteriorForm& o) { return *this = *this - o; }

    friend ExteriorForm operator*(const ExteriorForm& a, const RationalFunction& s) {
        ExteriorForm r(a.coords_, a.params_, a.degree_);
        for (const auto& [t, f] : a.terms_) r.add_term(t, f * s);
        return r;
    }
    friend ExteriorForm operator*(const ExteriorForm& a, const Rational& s) {
        return a * RationalFunction::constant(a.field_vars(), s);
    }

    bool operator==(const ExteriorForm& o) const {
        return coords_ == o.coords_ && params_ == o.params_ && degree_ == o.degree_ &&
               terms_ == o.terms_;
    }
    bool operator!=(const ExteriorForm& o) const { return !(*this == o); }

    // Re-embed the coefficient field into a larger parameter list.
    ExteriorForm with_params(std::vector<std::string> new_params) const {
        ExteriorForm r(coords_, std::move(new_params), degree_);
        auto fv = r.field_vars();
        for (const auto& [t, f] : terms_) r.terms_.emplace(t, f.extended(fv));
        return r;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream out;
        bool first = true;
        for (const auto& [t, f] : terms_) {
            RationalFunction g = f;
            bool neg = g.num().leading().second < 0;
            if (neg) g = -g;
            if (first) {
                if (neg) out << "-";
            } else {
                out << (neg ? " - " : " + ");
            }
            first = false;
            std::string cs = g.str();
            bool is_one = g.is_constant() && g.constant_value() == 1;
            if (t.empty()) {
                out << (needs_paren(g) ? "(" + cs + ")" : cs);
                continue;
            }
            if (!is_one) out << (needs_paren(g) ? "(" + cs + ")" : cs) << " * ";
            for (std::size_t i = 0; i < t.size(); ++i) {
                if (i) out << "^";
                out << "d" << coords_[static_cast<std::size_t>(t[i])];
            }
        }
        return out.str();
    }

private:
    std::vector<std::string> coords_;
    std::vector<std::string> params_;
    int degree_ = 0;
    TermMap terms_;

    void check_space(const ExteriorForm& o) const {
        if (coords_ != o.coords_) throw error("coordinate-sequence mismatch");
        if (params_ != o.params_) throw error("parameter lists differ");
    }

    static bool needs_paren(const RationalFunction& g) {
        return g.den().is_constant() && g.den().constant_value() == 1 &&
               g.num().terms().size() > 1;
    }

    friend ExteriorForm wedge(const ExteriorForm&, const ExteriorForm&);
    friend ExteriorForm exterior_derivative(const ExteriorForm&);
    friend ExteriorForm pullback(const ExteriorForm&, const Substitution&);
};

// Merge two strictly increasing tuples; zero on a repeat, Koszul sign from the
// inversion count otherwise.
inline bool merge_tuples(const IndexTuple& a, const IndexTuple& b, IndexTuple& out, int& sign) {
    out.clear();
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    long inversions = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) return false;
        if (a[i] < b[j]) {
            out.push_back(a[i++]);
        } else {
            inversions += static_cast<long>(a.size() - i);
            out.push_back(b[j++]);
        }
    }
    while (i < a.size()) out.push_back(a[i++]);
    while (j < b.size()) out.push_back(b[j++]);
    sign = (inversions % 2 == 0) ? 1 : -1;
    return true;
}

inline ExteriorForm wedge(const ExteriorForm& a, const ExteriorForm& b) {
    a.check_space(b);
    ExteriorForm r(a.coords_, a.params_, a.degree_ + b.degree_);
    IndexTuple merged;
    int sign;
    for (const auto& [ta, fa] : a.terms_)
        for (const auto& [tb, fb] : b.terms_) {
            if (!merge_tuples(ta, tb, merged, sign)) continue;
            RationalFunction c = fa * fb;
            if (sign < 0) c = -c;
            r.add_term(merged, c);
        }
    return r;
}

inline ExteriorForm exterior_derivative(const ExteriorForm& a) {
    ExteriorForm r(a.coords_, a.params_, a.degree_ + 1);
    IndexTuple merged;
    int sign;
    for (const auto& [t, f] : a.terms_) {
        for (std::size_t j = 0; j < a.coords_.size(); ++j) {
            RationalFunction df = f.derivative(j);
            if (df.is_zero()) continue;
            IndexTuple dj{static_cast<int>(j)};
            if (!merge_tuples(dj, t, merged, sign)) continue;
            if (sign < 0) df = -df;
            r.add_term(merged, df);
        }
    }
    return r;
}

inline ExteriorForm pullback(const ExteriorForm& a, const Substitution& s) {
    auto fv = s.field_vars();
    for (const auto& c : a.coords_)
        if (!s.images.count(c)) throw error("substitution missing coordinate '" + c + "'");
    for (const auto& p : a.params_)
        if (std::find(fv.begin(), fv.end(), p) == fv.end())
            throw error("substitution target lacks symbolic constant '" + p + "'");

    // d(image) for each source coordinate, as 1-forms over the target space.
    std::vector<ExteriorForm> dimg;
    dimg.reserve(a.coords_.size());
    for (const auto& c : a.coords_) {
        const RationalFunction& im = s.images.at(c);
        if (im.vars() != fv) throw error("substitution image has wrong variable list");
        ExteriorForm d(s.coords, s.params, 1);
        for (std::size_t j = 0; j < s.coords.size(); ++j) {
            RationalFunction g = im.derivative(j);
            if (!g.is_zero()) d.add_term({static_cast<int>(j)}, g);
        }
        dimg.push_back(std::move(d));
    }

    ExteriorForm r(s.coords, s.params, a.degree_);
    for (const auto& [t, f] : a.terms_) {
        ExteriorForm piece =
            ExteriorForm::function(s.coords, s.params, substitute(f, s.images, fv));
        for (int idx : t) piece = wedge(piece, dimg[static_cast<std::size_t>(idx)]);
        r += piece;
    }
    return r;
}

} // namespace folcc

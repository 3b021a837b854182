#pragma once

// Sparse multivariate polynomials over exact rationals, ordered graded-lex
// over the declared variable sequence. Exact division and GCD are the
// workhorses behind rational-function normalization.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "folcc/errors.hpp"
#include "folcc/rational.hpp"

namespace folcc {

using Exponents = std::vector<int>;

// Graded lexicographic: total degree first, then earlier variables weigh more.
struct GradedLexLess {
    bool operator()(const Exponents& a, const Exponents& b) const {
        int da = 0, db = 0;
        for (int e : a) da += e;
        for (int e : b) db += e;
        if (da != db) return da < db;
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
    }
};

class MultiPoly {
public:
    using TermMap = std::map<Exponents, Rational, GradedLexLess>;

    MultiPoly() = default;
    explicit MultiPoly(std::vector<std::string> vars) : vars_(std::move(vars)) {}

    static MultiPoly constant(std::vector<std::string> vars, const Rational& c) {
        MultiPoly p(std::move(vars));
        if (c != 0) p.terms_.emplace(Exponents(p.vars_.size(), 0), c);
        return p;
    }
    static MultiPoly zero(std::vector<std::string> vars) { return MultiPoly(std::move(vars)); }
    static MultiPoly one(std::vector<std::string> vars) {
        return constant(std::move(vars), Rational(1));
    }
    static MultiPoly variable(std::vector<std::string> vars, std::size_t index) {
        if (index >= vars.size()) throw error("variable index out of range");
        MultiPoly p(std::move(vars));
        Exponents e(p.vars_.size(), 0);
        e[index] = 1;
        p.terms_.emplace(std::move(e), Rational(1));
        return p;
    }
    static MultiPoly variable(const std::vector<std::string>& vars, const std::string& name) {
        auto it = std::find(vars.begin(), vars.end(), name);
        if (it == vars.end()) throw error("unknown variable '" + name + "'");
        return variable(vars, static_cast<std::size_t>(it - vars.begin()));
    }
    static MultiPoly monomial(std::vector<std::string> vars, Exponents exps, const Rational& c) {
        MultiPoly p(std::move(vars));
        if (exps.size() != p.vars_.size()) throw error("exponent vector length mismatch");
        if (c != 0) p.terms_.emplace(std::move(exps), c);
        return p;
    }

    const std::vector<std::string>& vars() const { return vars_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    bool is_constant() const {
        if (terms_.empty()) return true;
        if (terms_.size() > 1) return false;
        const Exponents& e = terms_.begin()->first;
        return std::all_of(e.begin(), e.end(), [](int x) { return x == 0; });
    }
    Rational constant_value() const {
        if (terms_.empty()) return Rational(0);
        if (!is_constant()) throw error("polynomial is not constant");
        return terms_.begin()->second;
    }

    int total_degree() const {
        int d = 0;
        for (const auto& [e, c] : terms_) {
            int s = 0;
            for (int x : e) s += x;
            d = std::max(d, s);
        }
        return d;
    }
    int degree_in(std::size_t var) const {
        int d = 0;
        for (const auto& [e, c] : terms_) d = std::max(d, e[var]);
        return d;
    }

    // Leading term under graded-lex.
    std::pair<Exponents, Rational> leading() const {
        if (terms_.empty()) throw error("zero polynomial has no leading term");
        auto it = std::prev(terms_.end());
        return {it->first, it->second};
    }

    void add_term(const Exponents& exps, const Rational& c) {
        if (c == 0) return;
        auto [it, inserted] = terms_.try_emplace(exps, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    MultiPoly operator-() const {
        MultiPoly r(vars_);
        for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
        return r;
    }
    MultiPoly& operator+=(const MultiPoly& o) {
        check_vars(o);
        for (const auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }
    MultiPoly& operator-=(const MultiPoly& o) {
        check_vars(o);
        for (const auto& [e, c] : o.terms_) add_term(e, -c);
        return *this;
    }
    friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
    friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }

    friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
        a.check_vars(b);
        MultiPoly r(a.vars_);
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) {
                Exponents e(ea);
                for (std::size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
                r.add_term(e, ca * cb);
            }
        return r;
    }
    friend MultiPoly operator*(const MultiPoly& a, const Rational& s) {
        MultiPoly r(a.vars_);
        if (s == 0) return r;
        for (const auto& [e, c] : a.terms_) r.terms_.emplace(e, c * s);
        return r;
    }
    friend MultiPoly operator*(const Rational& s, const MultiPoly& a) { return a * s; }
    MultiPoly& operator*=(const MultiPoly& o) { return *this = *this * o; }
    MultiPoly& operator*=(const Rational& s) { return *this = *this * s; }

    MultiPoly pow(int n) const {
        if (n < 0) throw error("negative polynomial power");
        MultiPoly r = one(vars_);
        MultiPoly base = *this;
        while (n) {
            if (n & 1) r *= base;
            n >>= 1;
            if (n) base *= base;
        }
        return r;
    }

    bool operator==(const MultiPoly& o) const { return vars_ == o.vars_ && terms_ == o.terms_; }
    bool operator!=(const MultiPoly& o) const { return !(*this == o); }

    MultiPoly derivative(std::size_t var) const {
        MultiPoly r(vars_);
        for (const auto& [e, c] : terms_) {
            if (e[var] == 0) continue;
            Exponents d(e);
            d[var] -= 1;
            r.add_term(d, c * e[var]);
        }
        return r;
    }

    // Re-express over a superset variable list (old names must all be present).
    MultiPoly extended(const std::vector<std::string>& new_vars) const {
        std::vector<std::size_t> where(vars_.size());
        for (std::size_t i = 0; i < vars_.size(); ++i) {
            auto it = std::find(new_vars.begin(), new_vars.end(), vars_[i]);
            if (it == new_vars.end())
                throw error("extended(): variable '" + vars_[i] + "' missing from target list");
            where[i] = static_cast<std::size_t>(it - new_vars.begin());
        }
        MultiPoly r(new_vars);
        for (const auto& [e, c] : terms_) {
            Exponents ne(new_vars.size(), 0);
            for (std::size_t i = 0; i < e.size(); ++i) ne[where[i]] = e[i];
            r.terms_.emplace(std::move(ne), c);
        }
        return r;
    }

    // Signed content: the rational c such that *this / c has coprime integer
    // coefficients and positive leading coefficient. Zero for the zero poly.
    Rational signed_content() const {
        if (terms_.empty()) return Rational(0);
        BigInt g = 0, l = 1;
        for (const auto& [e, c] : terms_) {
            g = boost::multiprecision::gcd(g, numer(c));
            l = boost::multiprecision::lcm(l, denom(c));
        }
        Rational content(g, l);
        if (leading().second < 0) content = -content;
        return content;
    }

    MultiPoly primitive() const {
        Rational c = signed_content();
        if (c == 0) return *this;
        return *this * (Rational(1) / c);
    }

    // Exact multivariate division; nullopt when b does not divide *this.
    static std::optional<MultiPoly> divide_exact(const MultiPoly& a, const MultiPoly& b) {
        a.check_vars(b);
        if (b.is_zero()) throw error("division by zero polynomial");
        MultiPoly q(a.vars_);
        MultiPoly r = a;
        auto [eb, cb] = b.leading();
        while (!r.is_zero()) {
            auto [er, cr] = r.leading();
            Exponents e(er.size());
            for (std::size_t i = 0; i < e.size(); ++i) {
                e[i] = er[i] - eb[i];
                if (e[i] < 0) return std::nullopt;
            }
            Rational c = cr / cb;
            MultiPoly t = monomial(a.vars_, e, c);
            q += t;
            r -= t * b;
        }
        return q;
    }

    // Polynomial GCD, canonicalized to integer-primitive with positive leading
    // coefficient. Strategy: strip monomial content, use a deterministic mod-p
    // univariate projection to detect the coprime and exact-divisor cases
    // cheaply, and fall back to a subresultant remainder sequence with content
    // extraction only at the ends.
    static MultiPoly gcd(const MultiPoly& a, const MultiPoly& b) {
        a.check_vars(b);
        if (a.is_zero()) return b.primitive();
        if (b.is_zero()) return a.primitive();
        if (a == b) return a.primitive();

        Exponents ea = a.min_exponents();
        Exponents eb = b.min_exponents();
        Exponents esh(ea.size());
        for (std::size_t i = 0; i < esh.size(); ++i) esh[i] = std::min(ea[i], eb[i]);
        MultiPoly A = a.shift_down(ea);
        MultiPoly B = b.shift_down(eb);
        MultiPoly common = monomial(a.vars_, esh, Rational(1));

        if (A.is_constant() || B.is_constant()) return common;

        std::optional<std::size_t> pivot;
        int best = 0;
        for (std::size_t v = 0; v < a.vars_.size(); ++v) {
            int da = A.degree_in(v), db = B.degree_in(v);
            if (da == 0 || db == 0) continue;
            int score = std::min(da, db);
            if (!pivot || score < best) {
                pivot = v;
                best = score;
            }
        }
        if (!pivot) return common;
        std::size_t v = *pivot;

        int image_deg = modular_image_gcd_degree(A, B, v);
        if (image_deg == 0) {
            MultiPoly cont = gcd(content_in(A, v), content_in(B, v));
            return (common * cont).primitive();
        }
        if (image_deg == B.degree_in(v)) {
            if (divide_exact(A, B)) return (common * B.primitive()).primitive();
        }
        if (image_deg == A.degree_in(v)) {
            if (divide_exact(B, A)) return (common * A.primitive()).primitive();
        }

        constexpr std::size_t kSmall = 64;
        if (std::min(A.terms_.size(), B.terms_.size()) <= kSmall) {
            bool b_small = B.terms_.size() <= A.terms_.size();
            return (common * small_side_gcd(b_small ? A : B, b_small ? B : A, v)).primitive();
        }

        MultiPoly cont_a = content_in(A, v);
        MultiPoly cont_b = content_in(B, v);
        MultiPoly prim_a = *divide_exact(A, cont_a);
        MultiPoly prim_b = *divide_exact(B, cont_b);
        MultiPoly cont = gcd(cont_a, cont_b);
        if (prim_a.degree_in(v) == 0 || prim_b.degree_in(v) == 0)
            return (common * cont).primitive();

        MultiPoly g = subresultant_gcd(prim_a, prim_b, v);
        g = *divide_exact(g, content_in(g, v));
        if (!divide_exact(prim_a, g) || !divide_exact(prim_b, g))
            throw error("polynomial gcd internal check failed");
        return (common * cont * g).primitive();
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream out;
        bool first = true;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            Rational c = it->second;
            if (first) {
                if (c < 0) {
                    out << "-";
                    c = -c;
                }
            } else {
                out << (c < 0 ? " - " : " + ");
                if (c < 0) c = -c;
            }
            out << term_str(it->first, c);
            first = false;
        }
        return out.str();
    }

private:
    std::vector<std::string> vars_;
    TermMap terms_;

    void check_vars(const MultiPoly& o) const {
        if (vars_ != o.vars_) throw error("polynomial variable lists differ");
    }

    std::string term_str(const Exponents& e, const Rational& c) const {
        std::ostringstream out;
        bool any_var = std::any_of(e.begin(), e.end(), [](int x) { return x > 0; });
        bool wrote = false;
        if (!any_var || c != 1) {
            out << to_string(c);
            wrote = true;
        }
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (wrote) out << "*";
            out << vars_[i];
            if (e[i] > 1) out << "^" << e[i];
            wrote = true;
        }
        return out.str();
    }

    // Coefficients by degree in variable v (ascending); entries have v-exponent 0.
    std::vector<MultiPoly> coeffs_in(std::size_t v) const {
        std::vector<MultiPoly> out(static_cast<std::size_t>(degree_in(v)) + 1, MultiPoly(vars_));
        for (const auto& [e, c] : terms_) {
            Exponents r(e);
            int d = r[v];
            r[v] = 0;
            out[static_cast<std::size_t>(d)].add_term(r, c);
        }
        while (out.size() > 1 && out.back().is_zero()) out.pop_back();
        return out;
    }

    static MultiPoly from_coeffs(const std::vector<MultiPoly>& cs,
                                 const std::vector<std::string>& vars, std::size_t v) {
        MultiPoly r(vars);
        for (std::size_t d = 0; d < cs.size(); ++d)
            for (const auto& [e, c] : cs[d].terms_) {
                Exponents ne(e);
                ne[v] += static_cast<int>(d);
                r.add_term(ne, c);
            }
        return r;
    }

    Exponents min_exponents() const {
        Exponents m(vars_.size(), 0);
        bool first = true;
        for (const auto& [e, c] : terms_) {
            if (first) {
                m = e;
                first = false;
                continue;
            }
            for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::min(m[i], e[i]);
        }
        return m;
    }

    // Divide by the monomial x^shift (every term must cover it).
    MultiPoly shift_down(const Exponents& shift) const {
        MultiPoly r(vars_);
        for (const auto& [e, c] : terms_) {
            Exponents ne(e);
            for (std::size_t i = 0; i < ne.size(); ++i) ne[i] -= shift[i];
            r.terms_.emplace(std::move(ne), c);
        }
        return r;
    }

    static MultiPoly gcd_list(const std::vector<MultiPoly>& ps) {
        MultiPoly g = ps.empty() ? MultiPoly() : MultiPoly::zero(ps.front().vars());
        for (const MultiPoly& p : ps) {
            g = gcd(g, p);
            if (g.is_constant() && !g.is_zero()) return one(g.vars_);
        }
        return g;
    }

    static MultiPoly content_in(const MultiPoly& p, std::size_t v) {
        return gcd_list(p.coeffs_in(v));
    }

    // ---- deterministic mod-p univariate projection --------------------------

    static constexpr std::uint64_t kModulus = 2305843009213693951ULL; // 2^61 - 1

    static std::uint64_t mulmod(std::uint64_t x, std::uint64_t y) {
        return static_cast<std::uint64_t>(
            static_cast<unsigned __int128>(x) * y % kModulus);
    }
    static std::uint64_t powmod(std::uint64_t x, std::uint64_t e) {
        std::uint64_t r = 1;
        while (e) {
            if (e & 1) r = mulmod(r, x);
            x = mulmod(x, x);
            e >>= 1;
        }
        return r;
    }
    static std::uint64_t residue(const BigInt& n) {
        BigInt r = n % BigInt(kModulus);
        if (r < 0) r += BigInt(kModulus);
        return r.convert_to<std::uint64_t>();
    }

    // Coefficients (ascending in v) of the image with every other variable
    // sent to a pseudo-random residue; nullopt when a denominator degenerates.
    std::optional<std::vector<std::uint64_t>> mod_image(std::size_t v,
                                                        std::uint64_t seed) const {
        std::vector<std::vector<std::uint64_t>> powers(vars_.size());
        std::uint64_t state = seed;
        auto next = [&state] {
            state = state * 6364136223846793005ULL + 1442695040888963407ULL;
            return (state >> 3) % kModulus;
        };
        for (std::size_t i = 0; i < vars_.size(); ++i) {
            if (i == v) continue;
            int d = degree_in(i);
            std::uint64_t pt = next();
            powers[i].resize(static_cast<std::size_t>(d) + 1);
            powers[i][0] = 1;
            for (int e = 1; e <= d; ++e)
                powers[i][static_cast<std::size_t>(e)] =
                    mulmod(powers[i][static_cast<std::size_t>(e - 1)], pt);
        }
        std::vector<std::uint64_t> image(static_cast<std::size_t>(degree_in(v)) + 1, 0);
        for (const auto& [e, c] : terms_) {
            std::uint64_t den = residue(denom(c));
            if (den == 0) return std::nullopt;
            std::uint64_t val = mulmod(residue(numer(c)), powmod(den, kModulus - 2));
            for (std::size_t i = 0; i < e.size(); ++i) {
                if (i == v || e[i] == 0) continue;
                val = mulmod(val, powers[i][static_cast<std::size_t>(e[i])]);
            }
            std::size_t slot = static_cast<std::size_t>(e[v]);
            image[slot] = (image[slot] + val) % kModulus;
        }
        return image;
    }

    static int univ_gcd_degree_mod(std::vector<std::uint64_t> x, std::vector<std::uint64_t> y) {
        auto trim = [](std::vector<std::uint64_t>& p) {
            while (!p.empty() && p.back() == 0) p.pop_back();
        };
        trim(x);
        trim(y);
        if (x.empty() || y.empty()) return -1;
        if (x.size() < y.size()) std::swap(x, y);
        while (!y.empty()) {
            std::uint64_t inv = powmod(y.back(), kModulus - 2);
            while (x.size() >= y.size()) {
                std::uint64_t f = mulmod(x.back(), inv);
                std::size_t shift = x.size() - y.size();
                for (std::size_t i = 0; i < y.size(); ++i) {
                    std::uint64_t sub = mulmod(f, y[i]);
                    std::uint64_t& slot = x[shift + i];
                    slot = (slot + kModulus - sub) % kModulus;
                }
                trim(x);
                if (x.empty()) break;
            }
            std::swap(x, y);
        }
        return static_cast<int>(x.size()) - 1;
    }

    // Degree in v of gcd(A mod p, B mod p) at a deterministic random point;
    // equals deg_v(gcd(A, B)) except with negligible probability. -1 when the
    // projection degenerates, which callers treat as "no information".
    static int modular_image_gcd_degree(const MultiPoly& A, const MultiPoly& B, std::size_t v) {
        std::uint64_t seed = 0x8f1bbcdcbfa53e0bULL;
        auto mix = [&seed](std::uint64_t x) {
            seed = (seed ^ x) * 0x2545F4914F6CDD1DULL + 0x9e3779b97f4a7c15ULL;
        };
        mix(A.terms_.size());
        mix(B.terms_.size());
        mix(static_cast<std::uint64_t>(A.total_degree()));
        mix(static_cast<std::uint64_t>(B.total_degree()));
        mix(v);
        auto ia = A.mod_image(v, seed);
        auto ib = B.mod_image(v, seed);
        if (!ia || !ib) return -1;
        if (static_cast<int>(ia->size()) != A.degree_in(v) + 1 ||
            static_cast<int>(ib->size()) != B.degree_in(v) + 1)
            return -1;
        if (ia->back() == 0 || ib->back() == 0) return -1;
        return univ_gcd_degree_mod(std::move(*ia), std::move(*ib));
    }

    // ---- subresultant remainder sequence -----------------------------------

    // prem(U, W) = lc(W)^(delta+1) U mod W on ascending coefficient vectors.
    static std::vector<MultiPoly> prem_vec(std::vector<MultiPoly> u,
                                           const std::vector<MultiPoly>& w) {
        const MultiPoly& lw = w.back();
        int delta = static_cast<int>(u.size()) - static_cast<int>(w.size());
        for (int step = 0; step <= delta; ++step) {
            MultiPoly lu = u.back();
            std::size_t shift = u.size() - w.size();
            for (std::size_t i = 0; i + 1 < u.size(); ++i) {
                u[i] = lw * u[i];
                if (i >= shift) u[i] -= lu * w[i - shift];
            }
            u.pop_back();
            if (u.size() < w.size()) break;
        }
        while (!u.empty() && u.back().is_zero()) u.pop_back();
        return u;
    }

    // Last nonzero element of the subresultant sequence of two v-primitive
    // inputs; one(vars) when they are coprime in v.
    static MultiPoly subresultant_gcd(const MultiPoly& pa, const MultiPoly& pb, std::size_t v) {
        std::vector<MultiPoly> u = pa.coeffs_in(v);
        std::vector<MultiPoly> w = pb.coeffs_in(v);
        if (u.size() < w.size()) std::swap(u, w);
        MultiPoly g = one(pa.vars_);
        MultiPoly h = one(pa.vars_);
        while (true) {
            int delta = static_cast<int>(u.size()) - static_cast<int>(w.size());
            std::vector<MultiPoly> r = prem_vec(u, w);
            if (r.empty()) return from_coeffs(w, pa.vars_, v);
            if (r.size() == 1) return one(pa.vars_);
            MultiPoly divisor = g * h.pow(delta);
            u = std::move(w);
            w = std::move(r);
            for (MultiPoly& cw : w) {
                auto q = divide_exact(cw, divisor);
                if (!q) throw error("subresultant division failed");
                cw = std::move(*q);
            }
            g = u.back();
            if (delta == 1) {
                h = g;
            } else if (delta > 1) {
                auto q = divide_exact(g.pow(delta), h.pow(delta - 1));
                if (!q) throw error("subresultant scale failed");
                h = std::move(*q);
            }
        }
    }

    static MultiPoly gcd_small_direct(const MultiPoly& x, const MultiPoly& y, std::size_t v) {
        if (x.is_zero()) return y.primitive();
        if (y.is_zero()) return x.primitive();
        if (x.degree_in(v) == 0) return gcd(x, content_in(y, v));
        if (y.degree_in(v) == 0) return gcd(content_in(x, v), y);
        MultiPoly cx = content_in(x, v);
        MultiPoly cy = content_in(y, v);
        MultiPoly g = subresultant_gcd(*divide_exact(x, cx), *divide_exact(y, cy), v);
        g = *divide_exact(g, content_in(g, v));
        return (gcd(cx, cy) * g).primitive();
    }

    static std::vector<std::pair<MultiPoly, int>> yun_decompose(const MultiPoly& p, std::size_t v) {
        std::vector<std::pair<MultiPoly, int>> out;
        MultiPoly d = p.derivative(v);
        MultiPoly g0 = gcd_small_direct(p, d, v);
        MultiPoly b = *divide_exact(p, g0);
        MultiPoly c = *divide_exact(d, g0);
        int i = 1;
        while (b.degree_in(v) > 0) {
            MultiPoly w = c - b.derivative(v);
            MultiPoly s = gcd_small_direct(b, w, v);
            if (s.degree_in(v) > 0) out.emplace_back(s, i);
            b = *divide_exact(b, s);
            c = *divide_exact(w, s);
            ++i;
        }
        return out;
    }

    static MultiPoly gcd_sf(const MultiPoly& big, const MultiPoly& s, std::size_t v) {
        int d = modular_image_gcd_degree(big, s, v);
        if (d == 0) return one(big.vars_);
        if (d == s.degree_in(v) && divide_exact(big, s)) return s.primitive();
        return gcd_small_direct(big, s, v);
    }

    static MultiPoly gcd_pow(const MultiPoly& big, const MultiPoly& s, int m, std::size_t v) {
        if (m <= 0 || s.is_constant()) return one(big.vars_);
        MultiPoly g = gcd_sf(big, s, v);
        if (g.is_constant()) return one(big.vars_);
        return g * gcd_pow(*divide_exact(big, g), g, m - 1, v);
    }

    static MultiPoly small_side_gcd(MultiPoly big, const MultiPoly& small, std::size_t v) {
        MultiPoly cont = content_in(small, v);
        MultiPoly p = *divide_exact(small, cont);
        MultiPoly result = gcd(big, cont);
        if (!result.is_constant()) big = *divide_exact(big, result);
        for (const auto& [factor, mult] : yun_decompose(p, v)) {
            MultiPoly g = gcd_pow(big, factor, mult, v);
            if (!g.is_constant()) {
                result = result * g;
                big = *divide_exact(big, g);
            }
        }
        return result.primitive();
    }
};

} // namespace folcc

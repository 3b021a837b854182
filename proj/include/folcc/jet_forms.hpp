#pragma once

// Realization of model classes as differential forms on truncated jet
// coordinates.
//
// For n = 1 the coordinates are x0..xK, the Taylor data of one function
// f(u) = sum x_k u^k / k!, and the components theta_0..theta_{K-1} of the
// tautological form come from [1/f'(u)] * delta f(u). For general n only
// order-2 jets are kept: an n-vector x0, an invertible matrix x1, and a
// symmetric second-order block x2; the connection matrix, its curvature and
// the elementary invariants realize y1 and the c generators.

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "folcc/exterior_form.hpp"
#include "folcc/gelfand_fuchs.hpp"
#include "folcc/truncated_series.hpp"

namespace folcc {

inline Rational factorial(int k) {
    Rational f = 1;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

// ---------------------------------------------------------------- n = 1 ----

struct JetSpace {
    int K;
    std::vector<std::string> params;

    explicit JetSpace(int order, std::vector<std::string> symbolic = {})
        : K(order), params(std::move(symbolic)) {
        if (K < 0) throw usage_error("truncation order must be nonnegative");
    }

    std::vector<std::string> coords() const {
        std::vector<std::string> v;
        for (int k = 0; k <= K; ++k) v.push_back("x" + std::to_string(k));
        return v;
    }
    std::vector<std::string> field_vars() const {
        std::vector<std::string> v = coords();
        v.insert(v.end(), params.begin(), params.end());
        return v;
    }

    RationalFunction var(const std::string& name) const {
        return RationalFunction::variable(field_vars(), name);
    }
    RationalFunction x(int k) const { return var("x" + std::to_string(k)); }
    ExteriorForm dx(int k) const { return ExteriorForm::differential(coords(), params, k); }
    ExteriorForm zero_form(int degree) const {
        return ExteriorForm::zero(coords(), params, degree);
    }
    ExteriorForm function_form(const RationalFunction& f) const {
        return ExteriorForm::function(coords(), params, f);
    }
};

// f(u) = sum x_k u^k / k!, the tautological jet.
inline TruncatedSeries taut_series(const JetSpace& js) {
    TruncatedSeries f(js.K, js.field_vars());
    for (int k = 0; k <= js.K; ++k)
        f.set_coeff(k, js.x(k) * RationalFunction::constant(js.field_vars(),
                                                            Rational(1) / factorial(k)));
    return f;
}

// theta_0..theta_{K-1}: theta_j = j! [u^j] (1/f'(u)) delta f(u).
inline std::vector<ExteriorForm> tautological_components(const JetSpace& js) {
    if (js.K < 1) throw guard_error("truncation order too small for theta components; raise K");
    TruncatedSeries g = taut_series(js).derivative().inverse();
    std::vector<ExteriorForm> theta;
    for (int j = 0; j < js.K; ++j) {
        ExteriorForm t = js.zero_form(1);
        for (int k = 0; k <= j; ++k) {
            RationalFunction coef =
                g.coeff(j - k) * RationalFunction::constant(js.field_vars(),
                                                            factorial(j) / factorial(k));
            t += js.dx(k) * coef;
        }
        theta.push_back(std::move(t));
    }
    return theta;
}

namespace detail {

inline std::optional<int> homogeneous_gf_degree(const GfElement& e) {
    std::optional<int> deg;
    for (const auto& [m, coef] : e) {
        if (coef == 0) continue;
        int d = gf_degree(m);
        if (deg && *deg != d) throw usage_error("realization needs a homogeneous class");
        deg = d;
    }
    return deg;
}

inline void reject_higher_y(const GfElement& e) {
    for (const auto& [m, coef] : e) {
        if (coef == 0) continue;
        for (std::size_t i = 1; i < m.y.size(); ++i)
            if (m.y[i] > 0)
                throw guard_error("realization supports y1 and the c generators only; y" +
                                  std::to_string(i + 1) + " has no finite-order form here");
    }
}

} // namespace detail

// Realize a homogeneous class of the n = 1 models: y1 -> theta_1 and
// c1 -> d theta_1, extended multiplicatively.
inline ExteriorForm realize_class(const GfAlgebra& a, const GfElement& e, const JetSpace& js) {
    if (a.n() != 1) throw usage_error("series realization handles n = 1; use the order-2 jet path");
    detail::reject_higher_y(e);
    auto deg = detail::homogeneous_gf_degree(e);
    if (!deg) return js.zero_form(0);
    bool needs_theta = false;
    for (const auto& [m, coef] : e)
        if (coef != 0 && (m.y[0] > 0 || m.c[0] > 0)) needs_theta = true;
    if (needs_theta && js.K < 2)
        throw guard_error("truncation order K = " + std::to_string(js.K) +
                          " is too small for this class; raise K to at least 2");

    ExteriorForm result = js.zero_form(*deg);
    if (!needs_theta) {
        for (const auto& [m, coef] : e)
            if (coef != 0)
                result += js.function_form(
                    RationalFunction::constant(js.field_vars(), coef));
        return result;
    }

    ExteriorForm theta1 = tautological_components(js)[1];
    ExteriorForm dtheta1 = exterior_derivative(theta1);
    for (const auto& [m, coef] : e) {
        if (coef == 0) continue;
        ExteriorForm w = js.function_form(RationalFunction::constant(js.field_vars(), coef));
        if (m.y[0]) w = wedge(w, theta1);
        for (int t = 0; t < m.c[0]; ++t) w = wedge(w, dtheta1);
        result += w;
    }
    return result;
}

// d(x2/x1^2) ^ dx0, the curvature of the quotient line written in the two
// ratio coordinates.
inline ExteriorForm chern_form_quotient(const JetSpace& js) {
    if (js.K < 2) throw guard_error("quotient form needs K >= 2; raise K");
    RationalFunction y2 = js.x(2) / (js.x(1) * js.x(1));
    return wedge(exterior_derivative(js.function_form(y2)), js.dx(0));
}

namespace detail {

inline void check_series_constants(const JetSpace& js, const TruncatedSeries& s,
                                   const char* what) {
    if (s.field() != js.field_vars())
        throw usage_error(std::string(what) + " must live over the jet variable list");
    std::size_t ncoords = js.coords().size();
    for (int k = 0; k <= s.order(); ++k) {
        const RationalFunction& f = s.coeff(k);
        for (const MultiPoly* p : {&f.num(), &f.den()})
            for (const auto& [exps, c] : p->terms())
                for (std::size_t i = 0; i < ncoords && i < exps.size(); ++i)
                    if (exps[i] > 0)
                        throw usage_error(std::string(what) +
                                          " coefficients must be symbolic constants");
    }
}

} // namespace detail

// Jet prolongation of postcomposition with a polynomial h: the new jet data
// are the Taylor coefficients of h(f(u)).
inline Substitution prolong(const JetSpace& js, const TruncatedSeries& h) {
    detail::check_series_constants(js, h, "postcomposition");
    if (h.order() < 1 || h.coeff(1).is_zero())
        throw usage_error("non-regular postcomposition: the linear coefficient vanishes");
    TruncatedSeries comp = h.compose(taut_series(js));
    Substitution s;
    s.coords = js.coords();
    s.params = js.params;
    for (int k = 0; k <= js.K; ++k)
        s.images[s.coords[static_cast<std::size_t>(k)]] =
            comp.coeff(k) * RationalFunction::constant(js.field_vars(), factorial(k));
    return s;
}

// Source reparametrization u -> phi(u) with phi(0) = 0: the new jet data are
// the Taylor coefficients of f(phi(u)). phi must be given at order K.
inline Substitution precompose(const JetSpace& js, const TruncatedSeries& phi) {
    detail::check_series_constants(js, phi, "source reparametrization");
    if (phi.order() != js.K)
        throw usage_error("source reparametrization must be given at order K");
    if (!phi.coeff(0).is_zero())
        throw usage_error("source reparametrization must fix the origin");
    if (phi.coeff(1).is_zero())
        throw usage_error("non-regular source reparametrization: the linear coefficient vanishes");
    TruncatedSeries comp = taut_series(js).compose(phi);
    Substitution s;
    s.coords = js.coords();
    s.params = js.params;
    for (int k = 0; k <= js.K; ++k)
        s.images[s.coords[static_cast<std::size_t>(k)]] =
            comp.coeff(k) * RationalFunction::constant(js.field_vars(), factorial(k));
    return s;
}

// x_k -> lam^k x_k, the jet action of u -> lam u.
inline Substitution scaling(const JetSpace& js, const std::string& param) {
    if (std::find(js.params.begin(), js.params.end(), param) == js.params.end())
        throw usage_error("scaling parameter '" + param + "' is not a declared constant");
    Substitution s;
    s.coords = js.coords();
    s.params = js.params;
    RationalFunction lam = js.var(param);
    RationalFunction pw = RationalFunction(MultiPoly::one(js.field_vars()));
    for (int k = 0; k <= js.K; ++k) {
        s.images[s.coords[static_cast<std::size_t>(k)]] = js.x(k) * pw;
        pw *= lam;
    }
    return s;
}

// x_k -> (-1)^k x_k, the jet action of u -> -u.
inline Substitution reflection(const JetSpace& js) {
    Substitution s;
    s.coords = js.coords();
    s.params = js.params;
    for (int k = 0; k <= js.K; ++k) {
        RationalFunction im = js.x(k);
        if (k % 2) im = -im;
        s.images[s.coords[static_cast<std::size_t>(k)]] = im;
    }
    return s;
}

struct InvarianceItem {
    std::string label;
    bool invariant = false;
    ExteriorForm residual;
};

struct InvarianceReport {
    std::vector<InvarianceItem> items;
    bool all_invariant = true;
};

inline InvarianceReport check_invariance(
    const ExteriorForm& form,
    const std::vector<std::pair<std::string, Substitution>>& families) {
    InvarianceReport rep;
    for (const auto& [label, s] : families) {
        InvarianceItem item;
        item.label = label;
        item.residual = pullback(form, s) - form;
        item.invariant = item.residual.is_zero();
        if (!item.invariant) rep.all_invariant = false;
        rep.items.push_back(std::move(item));
    }
    return rep;
}

// ---------------------------------------------------- general n, order 2 ----

struct JetSpaceN {
    int n;
    std::vector<std::string> params;

    explicit JetSpaceN(int dim, std::vector<std::string> symbolic = {})
        : n(dim), params(std::move(symbolic)) {
        if (n < 1) throw usage_error("n must be at least 1");
    }

    // Indices are 1-based. The second-order block is symmetric in its last
    // two slots and stored once with b <= c. For n = 1 the names collapse to
    // the series-path names so the two realizations are directly comparable.
    std::string x0_name(int a) const {
        return n == 1 ? "x0" : "x0_" + std::to_string(a);
    }
    std::string x1_name(int a, int b) const {
        return n == 1 ? "x1" : "x1_" + std::to_string(a) + std::to_string(b);
    }
    std::string x2_name(int a, int b, int c) const {
        if (b > c) std::swap(b, c);
        return n == 1 ? "x2"
                      : "x2_" + std::to_string(a) + "_" + std::to_string(b) + std::to_string(c);
    }

    std::vector<std::string> coords() const {
        std::vector<std::string> v;
        for (int a = 1; a <= n; ++a) v.push_back(x0_name(a));
        for (int a = 1; a <= n; ++a)
            for (int b = 1; b <= n; ++b) v.push_back(x1_name(a, b));
        for (int a = 1; a <= n; ++a)
            for (int b = 1; b <= n; ++b)
                for (int c = b; c <= n; ++c) v.push_back(x2_name(a, b, c));
        return v;
    }
    std::vector<std::string> field_vars() const {
        std::vector<std::string> v = coords();
        v.insert(v.end(), params.begin(), params.end());
        return v;
    }

    RationalFunction var(const std::string& name) const {
        return RationalFunction::variable(field_vars(), name);
    }
    ExteriorForm d(const std::string& name) const {
        auto cs = coords();
        auto it = std::find(cs.begin(), cs.end(), name);
        if (it == cs.end()) throw error("unknown coordinate '" + name + "'");
        return ExteriorForm::differential(cs, params, static_cast<int>(it - cs.begin()));
    }
    ExteriorForm zero_form(int degree) const {
        return ExteriorForm::zero(coords(), params, degree);
    }
    ExteriorForm function_form(const RationalFunction& f) const {
        return ExteriorForm::function(coords(), params, f);
    }
};

using RfMatrix = std::vector<std::vector<RationalFunction>>;
using FormMatrix = std::vector<std::vector<ExteriorForm>>;

inline RationalFunction rf_det(const RfMatrix& m) {
    std::size_t k = m.size();
    if (k == 0) throw error("determinant of empty matrix");
    if (k == 1) return m[0][0];
    RationalFunction acc(MultiPoly::zero(m[0][0].vars()));
    for (std::size_t j = 0; j < k; ++j) {
        if (m[0][j].is_zero()) continue;
        RfMatrix minor;
        for (std::size_t r = 1; r < k; ++r) {
            std::vector<RationalFunction> row;
            for (std::size_t c = 0; c < k; ++c)
                if (c != j) row.push_back(m[r][c]);
            minor.push_back(std::move(row));
        }
        RationalFunction t = m[0][j] * rf_det(minor);
        acc += (j % 2 == 0) ? t : -t;
    }
    return acc;
}

inline RfMatrix rf_inverse(const RfMatrix& m) {
    std::size_t k = m.size();
    RationalFunction det = rf_det(m);
    if (det.is_zero()) throw error("matrix is singular");
    RfMatrix inv(k, std::vector<RationalFunction>(k, det));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            if (k == 1) {
                inv[0][0] = det.inverse();
                continue;
            }
            RfMatrix minor;
            for (std::size_t r = 0; r < k; ++r) {
                if (r == j) continue;
                std::vector<RationalFunction> row;
                for (std::size_t c = 0; c < k; ++c)
                    if (c != i) row.push_back(m[r][c]);
                minor.push_back(std::move(row));
            }
            RationalFunction cf = rf_det(minor) / det;
            inv[i][j] = ((i + j) % 2 == 0) ? cf : -cf;
        }
    return inv;
}

inline RfMatrix x1_matrix(const JetSpaceN& js) {
    RfMatrix m(static_cast<std::size_t>(js.n));
    for (int a = 1; a <= js.n; ++a)
        for (int b = 1; b <= js.n; ++b)
            m[static_cast<std::size_t>(a - 1)].push_back(js.var(js.x1_name(a, b)));
    return m;
}

// theta_{ac} = [x1^{-1} d x1]_{ac} - sum_{b,d} [x1^{-1}]_{ab} x2_{b,dc} [x1^{-1} dx0]_d
inline FormMatrix connection_form(const JetSpaceN& js) {
    int n = js.n;
    RfMatrix inv = rf_inverse(x1_matrix(js));
    std::vector<ExteriorForm> inv_dx0(static_cast<std::size_t>(n), js.zero_form(1));
    for (int d = 1; d <= n; ++d)
        for (int e = 1; e <= n; ++e)
            inv_dx0[static_cast<std::size_t>(d - 1)] +=
                js.d(js.x0_name(e)) * inv[static_cast<std::size_t>(d - 1)][static_cast<std::size_t>(e - 1)];

    FormMatrix theta(static_cast<std::size_t>(n),
                     std::vector<ExteriorForm>(static_cast<std::size_t>(n), js.zero_form(1)));
    for (int a = 1; a <= n; ++a)
        for (int c = 1; c <= n; ++c) {
            ExteriorForm t = js.zero_form(1);
            for (int e = 1; e <= n; ++e)
                t += js.d(js.x1_name(e, c)) *
                     inv[static_cast<std::size_t>(a - 1)][static_cast<std::size_t>(e - 1)];
            for (int b = 1; b <= n; ++b)
                for (int d = 1; d <= n; ++d)
                    t -= inv_dx0[static_cast<std::size_t>(d - 1)] *
                         (inv[static_cast<std::size_t>(a - 1)][static_cast<std::size_t>(b - 1)] *
                          js.var(js.x2_name(b, d, c)));
            theta[static_cast<std::size_t>(a - 1)][static_cast<std::size_t>(c - 1)] = std::move(t);
        }
    return theta;
}

// R = d theta - theta ^ theta
inline FormMatrix curvature(const JetSpaceN& js, const FormMatrix& theta) {
    int n = js.n;
    FormMatrix R(static_cast<std::size_t>(n),
                 std::vector<ExteriorForm>(static_cast<std::size_t>(n), js.zero_form(2)));
    for (int a = 0; a < n; ++a)
        for (int c = 0; c < n; ++c) {
            ExteriorForm r = exterior_derivative(theta[static_cast<std::size_t>(a)]
                                                      [static_cast<std::size_t>(c)]);
            for (int b = 0; b < n; ++b)
                r -= wedge(theta[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)],
                           theta[static_cast<std::size_t>(b)][static_cast<std::size_t>(c)]);
            R[static_cast<std::size_t>(a)][static_cast<std::size_t>(c)] = std::move(r);
        }
    return R;
}

inline ExteriorForm trace_form(const FormMatrix& m) {
    ExteriorForm t = m[0][0];
    for (std::size_t a = 1; a < m.size(); ++a) t += m[a][a];
    return t;
}

// Determinant of a square matrix of even-degree forms by permutation
// expansion; entries commute so the factor order is immaterial.
inline ExteriorForm form_det(const std::vector<std::vector<const ExteriorForm*>>& m,
                             ExteriorForm acc) {
    std::size_t k = m.size();
    std::vector<std::size_t> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        int inversions = 0;
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = i + 1; j < k; ++j)
                if (perm[i] > perm[j]) ++inversions;
        ExteriorForm term = *m[0][perm[0]];
        for (std::size_t i = 1; i < k; ++i) term = wedge(term, *m[i][perm[i]]);
        if (inversions % 2) term = -term;
        acc += term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return acc;
}

// e_1..e_n with det(I + t R) = 1 + e_1 t + ... + e_n t^n: e_i sums the
// principal i x i minors of R.
inline std::vector<ExteriorForm> elementary_invariants(const JetSpaceN& js, const FormMatrix& R) {
    int n = js.n;
    std::vector<ExteriorForm> out;
    for (int i = 1; i <= n; ++i) {
        ExteriorForm e = js.zero_form(2 * i);
        std::vector<int> subset(static_cast<std::size_t>(i));
        std::iota(subset.begin(), subset.end(), 0);
        while (true) {
            std::vector<std::vector<const ExteriorForm*>> minor(static_cast<std::size_t>(i));
            for (int r = 0; r < i; ++r)
                for (int c = 0; c < i; ++c)
                    minor[static_cast<std::size_t>(r)].push_back(
                        &R[static_cast<std::size_t>(subset[static_cast<std::size_t>(r)])]
                          [static_cast<std::size_t>(subset[static_cast<std::size_t>(c)])]);
            e += form_det(minor, js.zero_form(2 * i));
            int pos = i - 1;
            while (pos >= 0 && subset[static_cast<std::size_t>(pos)] == n - i + pos) --pos;
            if (pos < 0) break;
            ++subset[static_cast<std::size_t>(pos)];
            for (int q = pos + 1; q < i; ++q)
                subset[static_cast<std::size_t>(q)] = subset[static_cast<std::size_t>(q - 1)] + 1;
        }
        out.push_back(std::move(e));
    }
    return out;
}

// Realize a homogeneous class on order-2 jets: y1 -> tr theta, c_i -> e_i(R).
inline ExteriorForm realize_class_matrix(const GfAlgebra& a, const GfElement& e,
                                         const JetSpaceN& js) {
    if (a.n() != js.n) throw usage_error("class and jet space disagree about n");
    detail::reject_higher_y(e);
    auto deg = detail::homogeneous_gf_degree(e);
    if (!deg) return js.zero_form(0);

    FormMatrix theta = connection_form(js);
    std::vector<ExteriorForm> ei = elementary_invariants(js, curvature(js, theta));
    ExteriorForm y1form = trace_form(theta);

    ExteriorForm result = js.zero_form(*deg);
    for (const auto& [m, coef] : e) {
        if (coef == 0) continue;
        ExteriorForm w = js.function_form(RationalFunction::constant(js.field_vars(), coef));
        if (m.y[0]) w = wedge(w, y1form);
        for (std::size_t j = 0; j < m.c.size(); ++j)
            for (int t = 0; t < m.c[j]; ++t) w = wedge(w, ei[j]);
        result += w;
    }
    return result;
}

inline std::vector<std::string> linear_param_names(int n, const std::string& prefix) {
    std::vector<std::string> v;
    for (int a = 1; a <= n; ++a)
        for (int b = 1; b <= n; ++b)
            v.push_back(prefix + std::to_string(a) + std::to_string(b));
    return v;
}

inline std::vector<std::string> quadratic_param_names(int n, const std::string& prefix) {
    std::vector<std::string> v;
    for (int a = 1; a <= n; ++a)
        for (int b = 1; b <= n; ++b)
            for (int c = b; c <= n; ++c)
                v.push_back(prefix + std::to_string(a) + "_" + std::to_string(b) +
                            std::to_string(c));
    return v;
}

// n x n matrix whose entries are the declared constants prefix + "ab".
inline RfMatrix symbolic_matrix(const JetSpaceN& js, const std::string& prefix) {
    RfMatrix m(static_cast<std::size_t>(js.n));
    for (int a = 1; a <= js.n; ++a)
        for (int b = 1; b <= js.n; ++b) {
            std::string name = prefix + std::to_string(a) + std::to_string(b);
            if (std::find(js.params.begin(), js.params.end(), name) == js.params.end())
                throw usage_error("parameter '" + name + "' is not a declared constant");
            m[static_cast<std::size_t>(a - 1)].push_back(js.var(name));
        }
    return m;
}

// Symmetric tables H[a][b][c] from the constants prefix + "a_bc" with b <= c.
inline std::vector<RfMatrix> symbolic_quadratic(const JetSpaceN& js, const std::string& prefix) {
    std::vector<RfMatrix> h;
    for (int a = 1; a <= js.n; ++a) {
        RfMatrix m(static_cast<std::size_t>(js.n),
                   std::vector<RationalFunction>(static_cast<std::size_t>(js.n)));
        for (int b = 1; b <= js.n; ++b)
            for (int c = b; c <= js.n; ++c) {
                std::string name = prefix + std::to_string(a) + "_" + std::to_string(b) +
                                   std::to_string(c);
                if (std::find(js.params.begin(), js.params.end(), name) == js.params.end())
                    throw usage_error("parameter '" + name + "' is not a declared constant");
                RationalFunction v = js.var(name);
                m[static_cast<std::size_t>(b - 1)][static_cast<std::size_t>(c - 1)] = v;
                m[static_cast<std::size_t>(c - 1)][static_cast<std::size_t>(b - 1)] = v;
            }
        h.push_back(std::move(m));
    }
    return h;
}

namespace detail {

inline void check_table(const JetSpaceN& js, const RfMatrix& m, const char* what) {
    if (m.size() != static_cast<std::size_t>(js.n)) throw usage_error(std::string(what) + " has wrong size");
    for (const auto& row : m) {
        if (row.size() != static_cast<std::size_t>(js.n))
            throw usage_error(std::string(what) + " has wrong size");
        for (const auto& v : row)
            if (v.vars() != js.field_vars())
                throw usage_error(std::string(what) + " entries must live over the jet variable list");
    }
}

} // namespace detail

// Postcomposition with h_a(t) = sum_b A_{ab} t_b + sum_{b,c} H_{a,bc} t_b t_c
// (H symmetric; pass an empty H for the linear case):
//   x0 -> h(x0)
//   x1_{ab} -> sum_e (d_e h_a)(x0) x1_{eb}
//   x2_{a,bc} -> sum_e (d_e h_a)(x0) x2_{e,bc} + sum_{e,f} (d_e d_f h_a)(x0) x1_{eb} x1_{fc}
inline Substitution postcomposition(const JetSpaceN& js, const RfMatrix& A,
                                    const std::vector<RfMatrix>& H = {}) {
    int n = js.n;
    auto fv = js.field_vars();
    detail::check_table(js, A, "linear part");
    if (!H.empty()) {
        if (H.size() != static_cast<std::size_t>(n)) throw usage_error("quadratic part has wrong size");
        for (const auto& m : H) {
            detail::check_table(js, m, "quadratic part");
            for (int b = 0; b < n; ++b)
                for (int c = b + 1; c < n; ++c)
                    if (m[static_cast<std::size_t>(b)][static_cast<std::size_t>(c)] !=
                        m[static_cast<std::size_t>(c)][static_cast<std::size_t>(b)])
                        throw usage_error("quadratic part must be symmetric");
        }
    }
    if (rf_det(A).is_zero())
        throw usage_error("non-regular postcomposition: the linear part is singular");

    auto zero = [&] { return RationalFunction(MultiPoly::zero(fv)); };
    auto a_ = [&](int a, int b) { return A[static_cast<std::size_t>(a - 1)][static_cast<std::size_t>(b - 1)]; };
    auto h_ = [&](int a, int b, int c) {
        if (H.empty()) return zero();
        return H[static_cast<std::size_t>(a - 1)][static_cast<std::size_t>(b - 1)]
                [static_cast<std::size_t>(c - 1)];
    };
    auto x = [&](const std::string& name) { return js.var(name); };

    // first and second partials of h_a at x0
    auto dh = [&](int a, int e) {
        RationalFunction r = a_(a, e);
        for (int c = 1; c <= n; ++c)
            r += h_(a, e, c) * x(js.x0_name(c)) * RationalFunction::constant(fv, 2);
        return r;
    };
    auto ddh = [&](int a, int e, int f) {
        return h_(a, e, f) * RationalFunction::constant(fv, 2);
    };

    Substitution s;
    s.coords = js.coords();
    s.params = js.params;
    for (int a = 1; a <= n; ++a) {
        RationalFunction im = zero();
        for (int b = 1; b <= n; ++b) im += a_(a, b) * x(js.x0_name(b));
        for (int b = 1; b <= n; ++b)
            for (int c = 1; c <= n; ++c)
                im += h_(a, b, c) * x(js.x0_name(b)) * x(js.x0_name(c));
        s.images[js.x0_name(a)] = im;
    }
    for (int a = 1; a <= n; ++a)
        for (int b = 1; b <= n; ++b) {
            RationalFunction im = zero();
            for (int e = 1; e <= n; ++e) im += dh(a, e) * x(js.x1_name(e, b));
            s.images[js.x1_name(a, b)] = im;
        }
    for (int a = 1; a <= n; ++a)
        for (int b = 1; b <= n; ++b)
            for (int c = b; c <= n; ++c) {
                RationalFunction im = zero();
                for (int e = 1; e <= n; ++e) im += dh(a, e) * x(js.x2_name(e, b, c));
                for (int e = 1; e <= n; ++e)
                    for (int f = 1; f <= n; ++f)
                        im += ddh(a, e, f) * x(js.x1_name(e, b)) * x(js.x1_name(f, c));
                s.images[js.x2_name(a, b, c)] = im;
            }
    return s;
}

// Source reparametrization u -> B u:
//   x0 fixed, x1 -> x1 B, x2_{a,bc} -> sum_{e,f} x2_{a,ef} B_{eb} B_{fc}
inline Substitution precomposition_linear(const JetSpaceN& js, const RfMatrix& B) {
    int n = js.n;
    auto fv = js.field_vars();
    detail::check_table(js, B, "reparametrization matrix");
    if (rf_det(B).is_zero())
        throw usage_error("non-regular source reparametrization: the matrix is singular");
    auto zero = [&] { return RationalFunction(MultiPoly::zero(fv)); };
    auto b_ = [&](int a, int b) { return B[static_cast<std::size_t>(a - 1)][static_cast<std::size_t>(b - 1)]; };

    Substitution s;
    s.coords = js.coords();
    s.params = js.params;
    for (int a = 1; a <= n; ++a) s.images[js.x0_name(a)] = js.var(js.x0_name(a));
    for (int a = 1; a <= n; ++a)
        for (int b = 1; b <= n; ++b) {
            RationalFunction im = zero();
            for (int e = 1; e <= n; ++e) im += js.var(js.x1_name(a, e)) * b_(e, b);
            s.images[js.x1_name(a, b)] = im;
        }
    for (int a = 1; a <= n; ++a)
        for (int b = 1; b <= n; ++b)
            for (int c = b; c <= n; ++c) {
                RationalFunction im = zero();
                for (int e = 1; e <= n; ++e)
                    for (int f = 1; f <= n; ++f)
                        im += js.var(js.x2_name(a, e, f)) * b_(e, b) * b_(f, c);
                s.images[js.x2_name(a, b, c)] = im;
            }
    return s;
}

} // namespace folcc

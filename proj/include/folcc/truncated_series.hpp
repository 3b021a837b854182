#pragma once

// Univariate power series in an auxiliary variable u, truncated at a fixed
// order, with rational-function coefficients. Coefficients are plain: the
// series is sum coeff(k) * u^k for k = 0..order.

#include <string>
#include <vector>

#include "folcc/rational_function.hpp"

namespace folcc {

class TruncatedSeries {
public:
    TruncatedSeries(int order, std::vector<std::string> field)
        : order_(order), field_(std::move(field)),
          coeffs_(static_cast<std::size_t>(order + 1),
                  RationalFunction(MultiPoly::zero(field_))) {
        if (order < 0) throw error("negative series order");
    }

    static TruncatedSeries from_coeffs(std::vector<std::string> field,
                                       std::vector<RationalFunction> coeffs) {
        if (coeffs.empty()) throw error("series needs at least the constant coefficient");
        TruncatedSeries s(static_cast<int>(coeffs.size()) - 1, std::move(field));
        for (std::size_t k = 0; k < coeffs.size(); ++k) {
            if (coeffs[k].vars() != s.field_) throw error("series coefficient has wrong variable list");
            s.coeffs_[k] = std::move(coeffs[k]);
        }
        return s;
    }

    int order() const { return order_; }
    const std::vector<std::string>& field() const { return field_; }
    const RationalFunction& coeff(int k) const {
        check_index(k);
        return coeffs_[static_cast<std::size_t>(k)];
    }
    void set_coeff(int k, RationalFunction f) {
        check_index(k);
        if (f.vars() != field_) throw error("series coefficient has wrong variable list");
        coeffs_[static_cast<std::size_t>(k)] = std::move(f);
    }

    bool is_zero() const {
        for (const auto& c : coeffs_)
            if (!c.is_zero()) return false;
        return true;
    }

    TruncatedSeries operator-() const {
        TruncatedSeries r = *this;
        for (auto& c : r.coeffs_) c = -c;
        return r;
    }
    friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) {
        a.check_compatible(b);
        for (int k = 0; k <= a.order_; ++k) a.coeffs_[static_cast<std::size_t>(k)] += b.coeff(k);
        return a;
    }
    friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) {
        return a + (-b);
    }
    friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
        a.check_compatible(b);
        TruncatedSeries r(a.order_, a.field_);
        for (int i = 0; i <= a.order_; ++i) {
            if (a.coeff(i).is_zero()) continue;
            for (int j = 0; i + j <= a.order_; ++j)
                r.coeffs_[static_cast<std::size_t>(i + j)] += a.coeff(i) * b.coeff(j);
        }
        return r;
    }
    friend TruncatedSeries operator*(TruncatedSeries a, const RationalFunction& s) {
        for (auto& c : a.coeffs_) c *= s;
        return a;
    }

    bool operator==(const TruncatedSeries& o) const {
        return order_ == o.order_ && field_ == o.field_ && coeffs_ == o.coeffs_;
    }
    bool operator!=(const TruncatedSeries& o) const { return !(*this == o); }

    // d/du; the result is known one order lower.
    TruncatedSeries derivative() const {
        if (order_ == 0) throw error("derivative drops below order zero");
        TruncatedSeries r(order_ - 1, field_);
        for (int k = 1; k <= order_; ++k)
            r.coeffs_[static_cast<std::size_t>(k - 1)] = coeff(k) * Rational(k);
        return r;
    }

    // Multiplicative inverse; requires an invertible constant term.
    TruncatedSeries inverse() const {
        if (coeff(0).is_zero()) throw error("series has no inverse: constant term is zero");
        TruncatedSeries r(order_, field_);
        RationalFunction a0inv = coeff(0).inverse();
        r.coeffs_[0] = a0inv;
        for (int m = 1; m <= order_; ++m) {
            RationalFunction acc(MultiPoly::zero(field_));
            for (int i = 1; i <= m; ++i) acc += coeff(i) * r.coeffs_[static_cast<std::size_t>(m - i)];
            r.coeffs_[static_cast<std::size_t>(m)] = -(a0inv * acc);
        }
        return r;
    }

    // this(g), truncated at g's order via Horner. Exact when either g has zero
    // constant term or the receiver is an exact polynomial of degree <= order.
    TruncatedSeries compose(const TruncatedSeries& g) const {
        if (field_ != g.field_) throw error("series variable lists differ");
        TruncatedSeries r(g.order_, field_);
        r.coeffs_[0] = coeff(order_);
        for (int k = order_ - 1; k >= 0; --k) {
            r = r * g;
            r.coeffs_[0] += coeff(k);
        }
        return r;
    }

    // Forget coefficients above new_order.
    TruncatedSeries truncated(int new_order) const {
        if (new_order > order_) throw error("cannot extend a truncated series");
        TruncatedSeries r(new_order, field_);
        for (int k = 0; k <= new_order; ++k) r.coeffs_[static_cast<std::size_t>(k)] = coeff(k);
        return r;
    }

private:
    int order_ = 0;
    std::vector<std::string> field_;
    std::vector<RationalFunction> coeffs_;

    void check_index(int k) const {
        if (k < 0 || k > order_) throw error("series coefficient index out of range");
    }
    void check_compatible(const TruncatedSeries& o) const {
        if (order_ != o.order_) throw error("series orders differ");
        if (field_ != o.field_) throw error("series variable lists differ");
    }
};

// Vector field p(u) d/du on the truncated line; the oracle for bracket
// structure constants.
struct TruncatedVectorField {
    TruncatedSeries p;

    explicit TruncatedVectorField(TruncatedSeries s) : p(std::move(s)) {}

    // e_k = (u^k / k!) d/du
    static TruncatedVectorField basis(int order, const std::vector<std::string>& field, int k) {
        TruncatedSeries s(order, field);
        Rational f = 1;
        for (int i = 2; i <= k; ++i) f *= i;
        s.set_coeff(k, RationalFunction::constant(field, Rational(1) / f));
        return TruncatedVectorField(std::move(s));
    }
};

// [p d/du, q d/du] = (p q' - q p') d/du, known to one order below the inputs.
inline TruncatedVectorField bracket(const TruncatedVectorField& a, const TruncatedVectorField& b) {
    int m = a.p.order() - 1;
    TruncatedSeries r =
        a.p.truncated(m) * b.p.derivative() - b.p.truncated(m) * a.p.derivative();
    return TruncatedVectorField(std::move(r));
}

} // namespace folcc

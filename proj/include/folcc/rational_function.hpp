#pragma once

// Field of fractions of MultiPoly. Every value is kept reduced: numerator and
// denominator coprime, denominator integer-primitive with positive leading
// coefficient under graded-lex.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "folcc/multipoly.hpp"

namespace folcc {

class RationalFunction {
public:
    RationalFunction() = default;
    explicit RationalFunction(MultiPoly p)
        : num_(std::move(p)), den_(MultiPoly::one(num_.vars())) {}
    RationalFunction(MultiPoly num, MultiPoly den) : num_(std::move(num)), den_(std::move(den)) {
        if (num_.vars() != den_.vars()) throw error("rational function variable lists differ");
        if (den_.is_zero()) throw error("zero denominator");
        reduce();
    }

    static RationalFunction constant(std::vector<std::string> vars, const Rational& c) {
        return RationalFunction(MultiPoly::constant(std::move(vars), c));
    }
    static RationalFunction variable(std::vector<std::string> vars, const std::string& name) {
        return RationalFunction(MultiPoly::variable(std::move(vars), name));
    }

    const MultiPoly& num() const { return num_; }
    const MultiPoly& den() const { return den_; }
    const std::vector<std::string>& vars() const { return num_.vars(); }
    bool is_zero() const { return num_.is_zero(); }

    bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
    Rational constant_value() const { return num_.constant_value() / den_.constant_value(); }

    RationalFunction operator-() const {
        RationalFunction r = *this;
        r.num_ = -r.num_;
        return r;
    }
    friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        if (a.den_ == b.den_) return RationalFunction(a.num_ + b.num_, a.den_);
        MultiPoly g = MultiPoly::gcd(a.den_, b.den_);
        if (g.is_constant())
            return RationalFunction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_,
                                    reduced_t{});
        MultiPoly da = *MultiPoly::divide_exact(a.den_, g);
        MultiPoly db = *MultiPoly::divide_exact(b.den_, g);
        return RationalFunction(a.num_ * db + b.num_ * da, a.den_ * db);
    }
    friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
        return a + (-b);
    }
    friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
        if (a.is_zero() || b.is_zero()) return RationalFunction(MultiPoly::zero(a.vars()));
        MultiPoly g1 = MultiPoly::gcd(a.num_, b.den_);
        MultiPoly g2 = MultiPoly::gcd(b.num_, a.den_);
        MultiPoly an = g1.is_constant() ? a.num_ : *MultiPoly::divide_exact(a.num_, g1);
        MultiPoly bn = g2.is_constant() ? b.num_ : *MultiPoly::divide_exact(b.num_, g2);
        MultiPoly ad = g2.is_constant() ? a.den_ : *MultiPoly::divide_exact(a.den_, g2);
        MultiPoly bd = g1.is_constant() ? b.den_ : *MultiPoly::divide_exact(b.den_, g1);
        return RationalFunction(an * bn, ad * bd, reduced_t{});
    }
    friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
        if (b.is_zero()) throw error("division by zero rational function");
        return a * b.inverse();
    }
    friend RationalFunction operator*(RationalFunction a, const Rational& s) {
        if (s == 0) return RationalFunction(MultiPoly::zero(a.vars()));
        a.num_ *= s;
        return a;
    }
    friend RationalFunction operator*(const Rational& s, RationalFunction a) {
        return std::move(a) * s;
    }
    RationalFunction& operator+=(const RationalFunction& o) { return *this = *this + o; }
    RationalFunction& operator-=(const RationalFunction& o) { return *this = *this - o; }
    RationalFunction& operator*=(const RationalFunction& o) { return *this = *this * o; }
    RationalFunction& operator/=(const RationalFunction& o) { return *this = *this / o; }

    bool operator==(const RationalFunction& o) const {
        return num_ == o.num_ && den_ == o.den_;
    }
    bool operator!=(const RationalFunction& o) const { return !(*this == o); }

    RationalFunction inverse() const {
        if (is_zero()) throw error("inverse of zero rational function");
        return RationalFunction(den_, num_, reduced_t{});
    }

    // Quotient rule, then reduce.
    RationalFunction derivative(std::size_t var) const {
        MultiPoly dn = num_.derivative(var) * den_ - num_ * den_.derivative(var);
        return RationalFunction(dn, den_ * den_);
    }

    RationalFunction extended(const std::vector<std::string>& new_vars) const {
        RationalFunction r;
        r.num_ = num_.extended(new_vars);
        r.den_ = den_.extended(new_vars);
        return r;
    }

    std::string str() const {
        if (den_.is_constant() && den_.constant_value() == 1) return num_.str();
        std::string d = den_.str();
        if (den_.terms().size() > 1 || d.find('*') != std::string::npos) d = "(" + d + ")";
        std::string n = num_.str();
        if (num_.terms().size() > 1) n = "(" + n + ")";
        return n + "/" + d;
    }

private:
    MultiPoly num_;
    MultiPoly den_;

    struct reduced_t {};
    // Trusted path for operands already known to be coprime.
    RationalFunction(MultiPoly num, MultiPoly den, reduced_t)
        : num_(std::move(num)), den_(std::move(den)) {
        if (num_.is_zero()) {
            den_ = MultiPoly::one(den_.vars());
            return;
        }
        Rational inv = Rational(1) / den_.signed_content();
        num_ *= inv;
        den_ *= inv;
    }

    void reduce() {
        if (num_.is_zero()) {
            den_ = MultiPoly::one(den_.vars());
            return;
        }
        MultiPoly g = MultiPoly::gcd(num_, den_);
        if (!g.is_constant()) {
            num_ = *MultiPoly::divide_exact(num_, g);
            den_ = *MultiPoly::divide_exact(den_, g);
        }
        Rational c = den_.signed_content();
        Rational inv = Rational(1) / c;
        num_ *= inv;
        den_ *= inv;
    }
};

// Evaluate a polynomial at rational-function images. Variables missing from
// `images` are substituted by themselves; they must exist in `target_vars`.
inline RationalFunction substitute(const MultiPoly& p,
                                   const std::map<std::string, RationalFunction>& images,
                                   const std::vector<std::string>& target_vars) {
    RationalFunction result = RationalFunction(MultiPoly::zero(target_vars));
    std::vector<RationalFunction> base(p.vars().size());
    std::vector<std::vector<RationalFunction>> powers(p.vars().size());
    for (const auto& [e, c] : p.terms()) {
        RationalFunction term = RationalFunction::constant(target_vars, c);
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            auto& pw = powers[i];
            if (pw.empty()) {
                auto it = images.find(p.vars()[i]);
                if (it != images.end()) {
                    if (it->second.vars() != target_vars)
                        throw error("substitution image has wrong variable list");
                    base[i] = it->second;
                } else {
                    base[i] = RationalFunction::variable(target_vars, p.vars()[i]);
                }
                pw.push_back(RationalFunction(MultiPoly::one(target_vars)));
            }
            while (static_cast<int>(pw.size()) <= e[i]) pw.push_back(pw.back() * base[i]);
            term *= pw[static_cast<std::size_t>(e[i])];
        }
        result += term;
    }
    return result;
}

inline RationalFunction substitute(const RationalFunction& f,
                                   const std::map<std::string, RationalFunction>& images,
                                   const std::vector<std::string>& target_vars) {
    RationalFunction den = substitute(f.den(), images, target_vars);
    if (den.is_zero()) throw error("substitution produces zero denominator");
    return substitute(f.num(), images, target_vars) / den;
}

} // namespace folcc

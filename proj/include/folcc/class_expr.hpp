#pragma once

// Parser for linear combinations of generator monomials, e.g.
// "1/2*y1*c1 + c2 - 3*c1^2". Rationals are standalone factors; generators
// carry optional positive exponents written with ^.

#include <cctype>
#include <optional>
#include <string>

#include "folcc/gelfand_fuchs.hpp"

namespace folcc {

namespace detail {

class ClassExprParser {
public:
    ClassExprParser(const std::string& text, const GfAlgebra& alg) : s_(text), alg_(alg) {}

    GfElement parse() {
        GfElement out;
        skip();
        if (at_end()) throw usage_error("empty class expression");
        int sign = 1;
        if (eat('-'))
            sign = -1;
        else
            eat('+');
        parse_term(sign, out);
        while (true) {
            skip();
            if (at_end()) break;
            if (eat('+'))
                parse_term(1, out);
            else if (eat('-'))
                parse_term(-1, out);
            else
                throw usage_error("expected + or - in class expression near '" + rest() + "'");
        }
        return alg_.reduce(out);
    }

private:
    const std::string& s_;
    std::size_t i_ = 0;
    const GfAlgebra& alg_;

    bool at_end() const { return i_ >= s_.size(); }
    void skip() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    bool eat(char c) {
        skip();
        if (!at_end() && s_[i_] == c) {
            ++i_;
            return true;
        }
        return false;
    }
    std::string rest() const { return s_.substr(i_, 12); }

    std::string digits() {
        std::size_t start = i_;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
        if (i_ == start) throw usage_error("expected a number near '" + rest() + "'");
        return s_.substr(start, i_ - start);
    }

    int small_int() {
        std::string d = digits();
        if (d.size() > 6) throw usage_error("number too large in class expression");
        return std::stoi(d);
    }

    void parse_term(int sign, GfElement& out) {
        Rational coef = sign;
        GfMonomial m = alg_.unit_monomial();
        bool dead = false;
        while (true) {
            parse_factor(coef, m, dead);
            if (!eat('*')) break;
        }
        if (!dead && coef != 0 && c_weight(m) <= alg_.n()) out[m] += coef;
    }

    void parse_factor(Rational& coef, GfMonomial& m, bool& dead) {
        skip();
        if (at_end()) throw usage_error("dangling operator in class expression");
        char c = s_[i_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string num = digits();
            if (!at_end() && s_[i_] == '/') {
                ++i_;
                std::string den = digits();
                coef *= parse_rational(num + "/" + den);
            } else {
                coef *= parse_rational(num);
            }
            return;
        }
        if (c != 'y' && c != 'c')
            throw usage_error("expected a generator or number near '" + rest() + "'");
        ++i_;
        int index = small_int();
        int exp = 1;
        if (eat('^')) exp = small_int();
        if (index < 1 || index > alg_.n())
            throw usage_error(std::string(1, c) + std::to_string(index) +
                              " is out of range for n = " + std::to_string(alg_.n()));
        std::size_t si = static_cast<std::size_t>(index - 1);
        if (c == 'y') {
            if (!alg_.has_y(index))
                throw usage_error("y" + std::to_string(index) + " is not a generator of variant " +
                                  variant_name(alg_.variant()));
            m.y[si] += exp;
            if (m.y[si] > 1) dead = true;
        } else {
            m.c[si] += exp;
        }
    }
};

} // namespace detail

inline GfElement parse_class_expr(const std::string& text, const GfAlgebra& alg) {
    return detail::ClassExprParser(text, alg).parse();
}

// Degree when the element is homogeneous; nullopt for the zero element.
inline std::optional<int> homogeneous_degree(const GfElement& e) {
    std::optional<int> q;
    for (const auto& [m, coef] : e) {
        int d = gf_degree(m);
        if (q && *q != d) throw usage_error("class expression mixes degrees");
        q = d;
    }
    return q;
}

} // namespace folcc

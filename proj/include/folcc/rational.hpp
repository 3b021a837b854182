#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <cstdint>
#include <string>

#include "folcc/errors.hpp"

namespace folcc {

// Exact rational scalar. GMP keeps the canonical form (coprime, positive
// denominator), which is also the textual contract: "p/q", or "p" when q = 1.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using BigInt =
    boost::multiprecision::number<boost::multiprecision::gmp_int, boost::multiprecision::et_off>;

inline std::string to_string(const Rational& r) { return r.str(); }

inline Rational parse_rational(const std::string& text) {
    auto l = text.find_first_not_of(" \t");
    auto r = text.find_last_not_of(" \t");
    if (l == std::string::npos) throw usage_error("empty rational literal");
    std::string t = text.substr(l, r - l + 1);
    auto slash = t.find('/');
    try {
        if (slash == std::string::npos) return Rational(BigInt(t));
        BigInt p(t.substr(0, slash));
        BigInt q(t.substr(slash + 1));
        if (q == 0) throw usage_error("zero denominator in '" + text + "'");
        return Rational(p, q);
    } catch (const usage_error&) {
        throw;
    } catch (const std::exception&) {
        throw usage_error("not a rational number: '" + text + "'");
    }
}

inline BigInt numer(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt denom(const Rational& r) { return boost::multiprecision::denominator(r); }

} // namespace folcc

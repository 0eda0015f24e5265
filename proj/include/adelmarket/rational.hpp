#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>

namespace adm {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt numerator(const Rational& x) {
    return boost::multiprecision::numerator(x);
}

inline BigInt denominator(const Rational& x) {
    return boost::multiprecision::denominator(x);
}

inline double to_double(const Rational& x) {
    return x.convert_to<double>();
}

inline Rational rat_abs(const Rational& x) {
    return x < 0 ? Rational(-x) : x;
}

inline BigInt pow_bigint(const BigInt& base, unsigned exponent) {
    return boost::multiprecision::pow(base, exponent);
}

// p^e for any integer exponent, as an exact rational.
inline Rational rat_pow(const BigInt& base, long exponent) {
    if (exponent >= 0) {
        return Rational(pow_bigint(base, static_cast<unsigned>(exponent)));
    }
    return Rational(1, pow_bigint(base, static_cast<unsigned>(-exponent)));
}

// Floor-convention remainder: result in [0, m) for m > 0.
inline BigInt mod_floor(const BigInt& a, const BigInt& m) {
    BigInt r = a % m;
    if (r < 0) r += m;
    return r;
}

inline BigInt rat_floor(const Rational& x) {
    BigInt q = numerator(x) / denominator(x);
    if (x < 0 && q * denominator(x) != numerator(x)) --q;
    return q;
}

// Parses "n" or "n/d" with optional leading sign. Decimal points are
// rejected: callers that want exact arithmetic must not feed floats.
inline Rational parse_rational(std::string_view text) {
    auto fail = [&] {
        throw std::invalid_argument("not a rational: '" + std::string(text) + "' (expected n or n/d)");
    };
    size_t begin = 0, end = text.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
    if (begin == end) fail();
    std::string_view body = text.substr(begin, end - begin);

    auto parse_int = [&](std::string_view s) -> BigInt {
        if (s.empty()) fail();
        size_t i = 0;
        if (s[0] == '+' || s[0] == '-') i = 1;
        if (i == s.size()) fail();
        for (size_t j = i; j < s.size(); ++j) {
            if (!std::isdigit(static_cast<unsigned char>(s[j]))) fail();
        }
        return BigInt(std::string(s));
    };

    size_t slash = body.find('/');
    if (slash == std::string_view::npos) {
        return Rational(parse_int(body));
    }
    BigInt num = parse_int(body.substr(0, slash));
    BigInt den = parse_int(body.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    return Rational(num, den);
}

inline std::string rat_to_string(const Rational& x) {
    return x.str();
}

} // namespace adm

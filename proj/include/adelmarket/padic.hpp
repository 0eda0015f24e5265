#pragma once

#include "adelmarket/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace adm::padic {

// A place of the rationals: the real absolute value or a finite prime.
class Place {
public:
    static Place real() { return Place(); }
    static Place finite(BigInt p);

    bool is_real() const { return !p_.has_value(); }
    bool is_finite() const { return p_.has_value(); }
    const BigInt& prime() const;

    std::string to_string() const { return is_real() ? "inf" : p_->str(); }

    friend bool operator==(const Place& a, const Place& b) { return a.p_ == b.p_; }
    friend bool operator!=(const Place& a, const Place& b) { return !(a == b); }
    // Real place sorts before all finite places.
    friend bool operator<(const Place& a, const Place& b) {
        if (a.is_real()) return b.is_finite();
        if (b.is_real()) return false;
        return *a.p_ < *b.p_;
    }

private:
    Place() = default;
    std::optional<BigInt> p_;
};

// Truncated p-adic number x = p^v * (a_0 + a_1 p + ... + a_{N-1} p^{N-1})
// in canonical form: a_0 != 0 for nonzero values, every digit in [0, p).
// Zero is a distinguished state (no meaningful valuation, no digits).
class PAdicNumber {
public:
    PAdicNumber(BigInt p, long v, std::vector<BigInt> digits);
    static PAdicNumber zero(BigInt p);

    bool is_zero() const { return digits_.empty(); }
    const BigInt& prime() const { return p_; }
    long valuation() const;
    int precision() const { return static_cast<int>(digits_.size()); }
    const std::vector<BigInt>& digits() const { return digits_; }

    // The exact rational p^v * sum a_n p^n represented by the truncation.
    Rational reconstruct() const;

    // Unit part a_0 + a_1 p + ... as a plain integer.
    BigInt unit_value() const;

    std::string to_string() const; // "p=3 v=1 digits=[1,2,0] (N=3)"

    friend bool operator==(const PAdicNumber& a, const PAdicNumber& b) {
        return a.p_ == b.p_ && a.v_ == b.v_ && a.digits_ == b.digits_;
    }
    friend bool operator!=(const PAdicNumber& a, const PAdicNumber& b) { return !(a == b); }

private:
    BigInt p_;
    long v_ = 0;
    std::vector<BigInt> digits_; // lowest power first; empty <=> zero
};

// v such that x = p^v * m/n with p dividing neither m nor n.
long valuation(const Rational& x, const BigInt& p);

// |x|_place: p^{-v} at a finite place (0 for x = 0), |x| at the real place.
Rational padic_norm(const Rational& x, const Place& place);

// Canonical digit expansion of x to `precision` digits after the valuation
// is factored out, via repeated subtract-digit-then-divide long division.
PAdicNumber expand(const Rational& x, const BigInt& p, int precision);

PAdicNumber padic_add(const PAdicNumber& a, const PAdicNumber& b);
PAdicNumber padic_mul(const PAdicNumber& a, const PAdicNumber& b);

struct PlaceNorm {
    Place place;
    Rational norm;
};

struct ProductFormulaResult {
    std::vector<PlaceNorm> factors; // real place first, then primes ascending
    Rational product;               // exactly 1 for every nonzero rational
};

// Norms of x at the real place and at every prime dividing num or den,
// together with their exact product.
ProductFormulaResult product_formula(const Rational& x);

} // namespace adm::padic

#include "adelmarket/padic.hpp"

#include "adelmarket/number_theory.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace adm::padic {

Place Place::finite(BigInt p) {
    if (!is_prime(p)) {
        throw std::domain_error("not a prime: " + p.str());
    }
    Place pl;
    pl.p_ = std::move(p);
    return pl;
}

const BigInt& Place::prime() const {
    if (is_real()) throw std::domain_error("real place has no prime");
    return *p_;
}

PAdicNumber::PAdicNumber(BigInt p, long v, std::vector<BigInt> digits)
    : p_(std::move(p)), v_(v), digits_(std::move(digits)) {
    if (!is_prime(p_)) throw std::domain_error("not a prime: " + p_.str());
    bool all_zero = true;
    for (const BigInt& d : digits_) {
        if (d < 0 || d >= p_) throw std::domain_error("digit out of range [0, p)");
        if (d != 0) all_zero = false;
    }
    if (all_zero) {
        digits_.clear();
        v_ = 0;
    } else if (digits_.front() == 0) {
        throw std::domain_error("leading digit must be nonzero in canonical form");
    }
}

PAdicNumber PAdicNumber::zero(BigInt p) {
    return PAdicNumber(std::move(p), 0, {});
}

long PAdicNumber::valuation() const {
    if (is_zero()) throw std::domain_error("valuation undefined for zero");
    return v_;
}

Rational PAdicNumber::reconstruct() const {
    if (is_zero()) return Rational(0);
    return Rational(unit_value()) * rat_pow(p_, v_);
}

BigInt PAdicNumber::unit_value() const {
    BigInt u = 0;
    for (size_t i = digits_.size(); i-- > 0;) {
        u = u * p_ + digits_[i];
    }
    return u;
}

std::string PAdicNumber::to_string() const {
    std::ostringstream os;
    os << "p=" << p_;
    if (is_zero()) {
        os << " zero";
        return os.str();
    }
    os << " v=" << v_ << " digits=[";
    for (size_t i = 0; i < digits_.size(); ++i) {
        if (i) os << ",";
        os << digits_[i];
    }
    os << "] (N=" << digits_.size() << ")";
    return os.str();
}

long valuation(const Rational& x, const BigInt& p) {
    if (x == 0) throw std::domain_error("valuation undefined for zero");
    if (!is_prime(p)) throw std::domain_error("not a prime: " + p.str());
    long v = 0;
    BigInt n = numerator(x);
    while (n % p == 0) { n /= p; ++v; }
    BigInt d = denominator(x);
    while (d % p == 0) { d /= p; --v; }
    return v;
}

Rational padic_norm(const Rational& x, const Place& place) {
    if (place.is_real()) return rat_abs(x);
    if (x == 0) return Rational(0);
    return rat_pow(place.prime(), -valuation(x, place.prime()));
}

PAdicNumber expand(const Rational& x, const BigInt& p, int precision) {
    if (!is_prime(p)) throw std::domain_error("not a prime: " + p.str());
    if (precision < 1) throw std::domain_error("precision must be >= 1");
    if (x == 0) return PAdicNumber::zero(p);

    long v = valuation(x, p);
    Rational u = x * rat_pow(p, -v); // unit: p divides neither num nor den

    std::vector<BigInt> digits;
    digits.reserve(static_cast<size_t>(precision));
    for (int n = 0; n < precision; ++n) {
        BigInt d = mod_floor(numerator(u) * mod_inverse(denominator(u), p), p);
        digits.push_back(d);
        u = (u - Rational(d)) / Rational(p); // numerator stays divisible by p
    }
    return PAdicNumber(p, v, std::move(digits));
}

namespace {

std::vector<BigInt> digits_of(BigInt value, const BigInt& p, int count) {
    std::vector<BigInt> digits(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) {
        digits[static_cast<size_t>(i)] = value % p;
        value /= p;
    }
    return digits;
}

} // namespace

PAdicNumber padic_add(const PAdicNumber& a, const PAdicNumber& b) {
    if (a.prime() != b.prime()) throw std::domain_error("mismatched primes in padic_add");
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;

    const BigInt& p = a.prime();
    // Absolute precision: each operand is known modulo p^(v + N).
    long abs_a = a.valuation() + a.precision();
    long abs_b = b.valuation() + b.precision();
    long abs_out = std::min(abs_a, abs_b);
    long v0 = std::min(a.valuation(), b.valuation());

    unsigned span = static_cast<unsigned>(abs_out - v0);
    BigInt modulus = pow_bigint(p, span);
    BigInt sum = a.unit_value() * pow_bigint(p, static_cast<unsigned>(a.valuation() - v0))
               + b.unit_value() * pow_bigint(p, static_cast<unsigned>(b.valuation() - v0));
    sum = mod_floor(sum, modulus);
    if (sum == 0) return PAdicNumber::zero(p); // cancellation below tracked precision

    long shift = 0;
    while (sum % p == 0) { sum /= p; ++shift; }
    long v = v0 + shift;
    int n = static_cast<int>(abs_out - v);
    return PAdicNumber(p, v, digits_of(sum, p, n));
}

PAdicNumber padic_mul(const PAdicNumber& a, const PAdicNumber& b) {
    if (a.prime() != b.prime()) throw std::domain_error("mismatched primes in padic_mul");
    if (a.is_zero() || b.is_zero()) return PAdicNumber::zero(a.prime());

    const BigInt& p = a.prime();
    int n = std::min(a.precision(), b.precision());
    BigInt prod = mod_floor(a.unit_value() * b.unit_value(), pow_bigint(p, static_cast<unsigned>(n)));
    // Product of units is a unit, so the low digit stays nonzero.
    return PAdicNumber(p, a.valuation() + b.valuation(), digits_of(prod, p, n));
}

ProductFormulaResult product_formula(const Rational& x) {
    if (x == 0) throw std::domain_error("product formula undefined for zero");

    ProductFormulaResult out;
    out.factors.push_back({Place::real(), rat_abs(x)});

    std::map<BigInt, int> primes = factorize(numerator(x));
    std::map<BigInt, int> den_primes = factorize(denominator(x));
    primes.insert(den_primes.begin(), den_primes.end()); // reduced fraction: disjoint
    for (const auto& [q, mult] : primes) {
        (void)mult;
        out.factors.push_back({Place::finite(q), padic_norm(x, Place::finite(q))});
    }

    out.product = Rational(1);
    for (const PlaceNorm& f : out.factors) out.product *= f.norm;
    return out;
}

} // namespace adm::padic

#pragma once

#include "adelmarket/rational.hpp"

#include <complex>
#include <map>
#include <set>
#include <string>

namespace adm::adele {

// {x}_p: the negative-power tail of the canonical p-adic expansion, a rational
// in [0,1) whose denominator is a power of p; 0 whenever |x|_p <= 1.
Rational frac_part(const Rational& x, const BigInt& p);

// Additive characters, with the sign convention of the adelic plane wave:
// chi_p(x) = exp(+2 pi i {x}_p), chi_inf(x) = exp(-2 pi i x).
std::complex<double> chi_p(const Rational& x, const BigInt& p);
std::complex<double> chi_inf(double x);
std::complex<double> chi_inf(const Rational& x); // reduces mod 1 exactly first

// chi_inf(x) * prod over the listed primes of chi_p(x). The listed primes must
// cover every prime dividing den(x); the product is then 1 for rational x.
std::complex<double> adele_char(const Rational& x, const std::set<BigInt>& primes);

// Unit-ball indicator: 1 if |x|_p <= 1, else 0.
double omega(const Rational& x, const BigInt& p);

// Finite-support adele point. Unlisted primes carry an implicit component of
// p-adic norm <= 1 (the restricted-product convention).
struct AdelePoint {
    double real_component = 0.0;
    std::map<BigInt, Rational> finite_components;

    // x at the real place and at every prime dividing num or den.
    static AdelePoint embed_rational(const Rational& x);
};

// |b|^s across the listed components; unlisted primes contribute 1.
double mult_char(const AdelePoint& a, double s);

struct RealFactor {
    enum class Kind { Gaussian, Interval };
    Kind kind = Kind::Gaussian;
    double center = 0.0;
    double sigma = 1.0;  // Gaussian
    double lo = 0.0, hi = 0.0; // Interval
};

struct FiniteFactor {
    enum class Kind { Omega, Ball, CharOmega };
    Kind kind = Kind::Omega;
    Rational center = 0;   // Ball: |x - center|_p <= p^{-radius_exp}
    int radius_exp = 0;
    Rational scale = 1;    // CharOmega: chi_p(scale * x) * Omega(|x|_p)
};

// Product-form test function phi_inf * prod phi_p with Omega at every prime
// not listed explicitly.
struct TestFunction {
    RealFactor real_factor;
    std::map<BigInt, FiniteFactor> finite_factors;
};

std::complex<double> eval_test_function(const TestFunction& f, const AdelePoint& a);

// Named presets from a JSON config file (see fixtures/testfn_presets.json).
TestFunction load_test_function_preset(const std::string& json_path, const std::string& name);

} // namespace adm::adele

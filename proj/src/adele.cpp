#include "adelmarket/adele.hpp"

#include "adelmarket/number_theory.hpp"
#include "adelmarket/padic.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace adm::adele {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

Rational frac_part(const Rational& x, const BigInt& p) {
    if (!is_prime(p)) throw std::domain_error("not a prime: " + p.str());
    if (x == 0) return Rational(0);
    long v = padic::valuation(x, p);
    if (v >= 0) return Rational(0);

    unsigned j = static_cast<unsigned>(-v);
    BigInt pj = pow_bigint(p, j);
    // x = m / (n * p^j) with p dividing neither m nor n.
    BigInt n = denominator(x) / pj;
    BigInt r = mod_floor(numerator(x) * mod_inverse(n, pj), pj);
    return Rational(r, pj);
}

std::complex<double> chi_p(const Rational& x, const BigInt& p) {
    return std::polar(1.0, kTwoPi * to_double(frac_part(x, p)));
}

std::complex<double> chi_inf(double x) {
    return std::polar(1.0, -kTwoPi * x);
}

std::complex<double> chi_inf(const Rational& x) {
    Rational reduced = x - Rational(rat_floor(x));
    return std::polar(1.0, -kTwoPi * to_double(reduced));
}

std::complex<double> adele_char(const Rational& x, const std::set<BigInt>& primes) {
    for (const auto& [q, mult] : factorize(denominator(x))) {
        (void)mult;
        if (!primes.count(q)) {
            throw std::invalid_argument("support primes incomplete: missing " + q.str());
        }
    }
    std::complex<double> result = chi_inf(x);
    for (const BigInt& p : primes) {
        result *= chi_p(x, p);
    }
    return result;
}

double omega(const Rational& x, const BigInt& p) {
    if (x == 0) return 1.0;
    return padic::valuation(x, p) >= 0 ? 1.0 : 0.0;
}

AdelePoint AdelePoint::embed_rational(const Rational& x) {
    AdelePoint a;
    a.real_component = to_double(x);
    if (x == 0) return a;
    std::map<BigInt, int> primes = factorize(numerator(x));
    std::map<BigInt, int> den_primes = factorize(denominator(x));
    primes.insert(den_primes.begin(), den_primes.end());
    for (const auto& [q, mult] : primes) {
        (void)mult;
        a.finite_components.emplace(q, x);
    }
    return a;
}

double mult_char(const AdelePoint& a, double s) {
    if (a.real_component == 0.0) throw std::domain_error("multiplicative character needs nonzero components");
    double result = std::pow(std::fabs(a.real_component), s);
    for (const auto& [p, x] : a.finite_components) {
        if (x == 0) throw std::domain_error("multiplicative character needs nonzero components");
        result *= std::pow(to_double(padic::padic_norm(x, padic::Place::finite(p))), s);
    }
    return result;
}

namespace {

double eval_real_factor(const RealFactor& f, double x) {
    switch (f.kind) {
        case RealFactor::Kind::Gaussian: {
            double d = (x - f.center) / f.sigma;
            return std::exp(-0.5 * d * d);
        }
        case RealFactor::Kind::Interval:
            return (x >= f.lo && x <= f.hi) ? 1.0 : 0.0;
    }
    return 0.0;
}

std::complex<double> eval_finite_factor(const FiniteFactor& f, const Rational& x, const BigInt& p) {
    switch (f.kind) {
        case FiniteFactor::Kind::Omega:
            return omega(x, p);
        case FiniteFactor::Kind::Ball: {
            Rational diff = x - f.center;
            if (diff == 0) return 1.0;
            return padic::valuation(diff, p) >= f.radius_exp ? 1.0 : 0.0;
        }
        case FiniteFactor::Kind::CharOmega:
            return chi_p(f.scale * x, p) * omega(x, p);
    }
    return 0.0;
}

} // namespace

std::complex<double> eval_test_function(const TestFunction& f, const AdelePoint& a) {
    std::complex<double> result = eval_real_factor(f.real_factor, a.real_component);
    for (const auto& [p, factor] : f.finite_factors) {
        auto it = a.finite_components.find(p);
        if (it != a.finite_components.end()) {
            result *= eval_finite_factor(factor, it->second, p);
        } else if (factor.kind != FiniteFactor::Kind::Omega) {
            // An unlisted adele component is only known to sit in the unit
            // ball, which pins down Omega but not a finer factor.
            throw std::invalid_argument("adele point lacks component at prime " + p.str() +
                                        " required by a non-Omega factor");
        }
        // Omega factor at an unlisted prime: component in Z_p, value 1.
    }
    for (const auto& [p, x] : a.finite_components) {
        if (!f.finite_factors.count(p)) {
            result *= omega(x, p); // implicit Omega tail
        }
    }
    return result;
}

TestFunction load_test_function_preset(const std::string& json_path, const std::string& name) {
    std::ifstream in(json_path);
    if (!in) throw std::runtime_error("cannot open preset file: " + json_path);
    nlohmann::json doc = nlohmann::json::parse(in);

    if (!doc.contains("presets") || !doc["presets"].contains(name)) {
        throw std::runtime_error("preset not found: " + name);
    }
    const nlohmann::json& spec = doc["presets"][name];

    TestFunction f;
    const nlohmann::json& real = spec.at("real");
    std::string kind = real.at("kind").get<std::string>();
    if (kind == "gaussian") {
        f.real_factor.kind = RealFactor::Kind::Gaussian;
        f.real_factor.center = real.value("center", 0.0);
        f.real_factor.sigma = real.value("sigma", 1.0);
        if (!(f.real_factor.sigma > 0)) throw std::runtime_error("gaussian sigma must be positive");
    } else if (kind == "interval") {
        f.real_factor.kind = RealFactor::Kind::Interval;
        f.real_factor.lo = real.at("lo").get<double>();
        f.real_factor.hi = real.at("hi").get<double>();
    } else {
        throw std::runtime_error("unknown real factor kind: " + kind);
    }

    if (spec.contains("finite")) {
        for (const auto& [key, fac] : spec["finite"].items()) {
            BigInt p(key);
            if (!is_prime(p)) throw std::runtime_error("preset prime is not prime: " + key);
            FiniteFactor factor;
            std::string fkind = fac.at("kind").get<std::string>();
            if (fkind == "omega") {
                factor.kind = FiniteFactor::Kind::Omega;
            } else if (fkind == "ball") {
                factor.kind = FiniteFactor::Kind::Ball;
                factor.center = parse_rational(fac.value("center", std::string("0")));
                factor.radius_exp = fac.value("radius_exp", 0);
            } else if (fkind == "char_omega") {
                factor.kind = FiniteFactor::Kind::CharOmega;
                factor.scale = parse_rational(fac.value("scale", std::string("1")));
            } else {
                throw std::runtime_error("unknown finite factor kind: " + fkind);
            }
            f.finite_factors.emplace(std::move(p), std::move(factor));
        }
    }
    return f;
}

} // namespace adm::adele

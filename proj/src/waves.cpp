#include "adelmarket/waves.hpp"

#include "adelmarket/number_theory.hpp"

#include <cmath>
#include <stdexcept>

namespace adm::waves {

namespace {

// Materialization guard: p^L samples are stored, so keep the count sane.
constexpr long kMaxSamples = 1L << 24;

std::vector<double> residue_digit_values(BigInt value, const BigInt& p, int count) {
    std::vector<double> digits(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) {
        digits[static_cast<size_t>(i)] = BigInt(value % p).convert_to<double>();
        value /= p;
    }
    return digits;
}

} // namespace

std::string to_string(MapKind kind) {
    return kind == MapKind::DigitPower ? "digit-power" : "scale-power";
}

MapKind map_kind_from_string(const std::string& name) {
    if (name == "digit-power" || name == "digit") return MapKind::DigitPower;
    if (name == "scale-power" || name == "scale") return MapKind::ScalePower;
    throw std::invalid_argument("unknown map kind: " + name);
}

void WaveSpec::validate() const {
    if (!is_prime(p)) throw std::domain_error("wave base must be prime");
    if (!(fractal_dim > 0.0)) throw std::domain_error("fractal dimension must be positive");
    if (level < 1) throw std::domain_error("level must be >= 1");
    if (monomial_degree < 1) throw std::domain_error("monomial degree must be >= 1");
    if (!(t0 < t1)) throw std::domain_error("time window must satisfy t0 < t1");
    if (y_scale == 0.0) throw std::domain_error("price scale must be nonzero");
    if (sample_count() > kMaxSamples) {
        throw std::domain_error("p^level exceeds the sample materialization limit");
    }
}

BigInt WaveSpec::sample_count() const {
    return pow_bigint(p, static_cast<unsigned>(level));
}

double map_digit_values(const double* digits, size_t count, double p, double fractal_dim,
                        MapKind kind) {
    double acc = 0.0;
    if (kind == MapKind::DigitPower) {
        double weight = 1.0 / p;
        for (size_t n = 0; n < count; ++n) {
            double d = digits[n];
            if (d != 0.0) {
                acc += (d == 1.0 ? 1.0 : std::pow(d, fractal_dim)) * weight;
            }
            weight /= p;
        }
    } else {
        const double base = std::pow(p, -fractal_dim);
        double weight = base;
        for (size_t n = 0; n < count; ++n) {
            double d = digits[n];
            if (d != 0.0) acc += d * weight;
            weight *= base;
        }
    }
    return acc;
}

double real_map(const padic::PAdicNumber& x, double fractal_dim, MapKind kind) {
    if (!(fractal_dim > 0.0)) throw std::domain_error("fractal dimension must be positive");
    if (x.is_zero()) return 0.0;
    if (x.valuation() < 0) throw std::domain_error("map restricted to p-adic integers");

    size_t pad = static_cast<size_t>(x.valuation());
    std::vector<double> digits(pad + x.digits().size(), 0.0);
    for (size_t i = 0; i < x.digits().size(); ++i) {
        digits[pad + i] = x.digits()[i].convert_to<double>();
    }
    return map_digit_values(digits.data(), digits.size(), x.prime().convert_to<double>(),
                            fractal_dim, kind);
}

int continued_level(const BigInt& p, int level, const BigInt& k) {
    int needed = 1;
    BigInt bound = p; // smallest power of p strictly above k
    while (bound <= k) {
        bound *= p;
        ++needed;
    }
    return std::max(level, needed);
}

double wave_value_raw(const WaveSpec& spec, const BigInt& k) {
    int depth = continued_level(spec.p, spec.level, k);
    BigInt modulus = pow_bigint(spec.p, static_cast<unsigned>(depth));
    BigInt residue = mod_floor(spec.slope * pow_bigint(k, static_cast<unsigned>(spec.monomial_degree))
                                   + spec.intercept,
                               modulus);
    std::vector<double> digits = residue_digit_values(residue, spec.p, depth);
    return map_digit_values(digits.data(), digits.size(), spec.p.convert_to<double>(),
                            spec.fractal_dim, spec.map_kind);
}

namespace {

WaveCurve generate_impl(const WaveSpec& spec, bool parallel) {
    spec.validate();
    const long n = spec.sample_count().convert_to<long>();
    WaveCurve curve;
    curve.spec = spec;
    curve.t.resize(static_cast<size_t>(n));
    curve.y.resize(static_cast<size_t>(n));

    const double span = spec.t1 - spec.t0;
    const double denom = n > 1 ? static_cast<double>(n - 1) : 1.0;

#pragma omp parallel for schedule(static) if (parallel)
    for (long k = 0; k < n; ++k) {
        curve.t[static_cast<size_t>(k)] = spec.t0 + span * (static_cast<double>(k) / denom);
        curve.y[static_cast<size_t>(k)] =
            spec.y0 + spec.y_scale * wave_value_raw(spec, BigInt(k));
    }
    return curve;
}

} // namespace

WaveCurve generate(const WaveSpec& spec) { return generate_impl(spec, true); }

namespace serial {
WaveCurve generate(const WaveSpec& spec) { return generate_impl(spec, false); }
} // namespace serial

int count_linear_segments(const WaveCurve& curve, double rel_tol) {
    if (curve.size() < 2) return 0;
    int segments = 1;
    double prev = curve.y[1] - curve.y[0];
    for (size_t k = 2; k < curve.size(); ++k) {
        double slope = curve.y[k] - curve.y[k - 1];
        double scale = std::max({1.0, std::fabs(slope), std::fabs(prev)});
        if (std::fabs(slope - prev) > rel_tol * scale) ++segments;
        prev = slope;
    }
    return segments;
}

bool self_affinity_check(const BigInt& j, unsigned digit, const BigInt& p, double fractal_dim,
                         MapKind kind, double tol) {
    if (j < 0) throw std::domain_error("j must be >= 0");
    if (BigInt(digit) >= p) throw std::domain_error("digit must be < p");
    if (kind != MapKind::DigitPower) {
        throw std::domain_error("self-affinity identity applies to the digit-power map");
    }

    BigInt combined = BigInt(digit) + p * j;
    auto map_int = [&](const BigInt& value) {
        if (value == 0) return 0.0;
        int depth = continued_level(p, 1, value);
        std::vector<double> digits = residue_digit_values(value, p, depth);
        return map_digit_values(digits.data(), digits.size(), p.convert_to<double>(),
                                fractal_dim, kind);
    };

    double lhs = map_int(combined);
    double head = digit == 0 ? 0.0 : std::pow(static_cast<double>(digit), fractal_dim);
    double rhs = (head + map_int(j)) / p.convert_to<double>();
    return std::fabs(lhs - rhs) <= tol;
}

} // namespace adm::waves

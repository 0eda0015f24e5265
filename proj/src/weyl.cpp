#include "adelmarket/weyl.hpp"

#include "adelmarket/adele.hpp"
#include "adelmarket/number_theory.hpp"
#include "adelmarket/padic.hpp"

#include <cmath>
#include <stdexcept>

namespace adm::weyl {

namespace {

constexpr size_t kMaxLatticeSize = 1u << 20;

// Index of the coset of x in p^{-N} Z_p / p^N Z_p, i.e. the residue of
// x * p^N modulo p^{2N}. Requires |x|_p <= p^N.
size_t coset_index(const Rational& x, const BigInt& p, int window) {
    BigInt modulus = pow_bigint(p, static_cast<unsigned>(2 * window));
    Rational shifted = x * rat_pow(p, window); // now a p-adic integer
    BigInt r = mod_floor(numerator(shifted) * mod_inverse(denominator(shifted), modulus), modulus);
    return r.convert_to<size_t>();
}

void check_in_window(const Rational& value, const BigInt& p, int window, const char* what) {
    if (value == 0) return;
    if (padic::valuation(value, p) < -static_cast<long>(window)) {
        throw std::domain_error(std::string("phase point exceeds truncation: ") + what);
    }
}

} // namespace

LatticeFunction::LatticeFunction(BigInt p, int window) : p_(std::move(p)), window_(window) {
    if (!is_prime(p_)) throw std::domain_error("not a prime: " + p_.str());
    if (window_ < 1) throw std::domain_error("window must be >= 1");
    BigInt count = pow_bigint(p_, static_cast<unsigned>(2 * window_));
    if (count > kMaxLatticeSize) throw std::domain_error("lattice too large to materialize");
    values_.assign(count.convert_to<size_t>(), {0.0, 0.0});
}

LatticeFunction LatticeFunction::delta(BigInt p, int window, size_t index) {
    LatticeFunction f(std::move(p), window);
    f.values_.at(index) = {1.0, 0.0};
    return f;
}

Rational LatticeFunction::coset_representative(size_t index) const {
    return Rational(BigInt(index)) * rat_pow(p_, -window_);
}

double LatticeFunction::measure_weight() const {
    return std::pow(p_.convert_to<double>(), -static_cast<double>(window_));
}

std::complex<double> inner_product(const LatticeFunction& a, const LatticeFunction& b) {
    if (a.prime() != b.prime() || a.window() != b.window()) {
        throw std::domain_error("mismatched lattices");
    }
    // Fixed index order: parallel callers must not reorder this reduction.
    std::complex<double> acc{0.0, 0.0};
    for (size_t i = 0; i < a.size(); ++i) {
        acc += std::conj(a[i]) * b[i];
    }
    return acc * a.measure_weight();
}

double l2_norm(const LatticeFunction& f) {
    double acc = 0.0;
    for (size_t i = 0; i < f.size(); ++i) {
        acc += std::norm(f[i]);
    }
    return std::sqrt(acc * f.measure_weight());
}

LatticeFunction weyl_apply(const PhasePoint& z, const LatticeFunction& psi) {
    const BigInt& p = psi.prime();
    const int window = psi.window();
    check_in_window(z.q, p, window, "q");
    check_in_window(z.k, p, window, "k");

    const size_t total = psi.size();
    const size_t shift = z.q == 0 ? 0 : coset_index(z.q, p, window);

    LatticeFunction out(p, window);
    for (size_t t = 0; t < total; ++t) {
        Rational x = psi.coset_representative(t);
        std::complex<double> phase = adele::chi_p(z.k * (2 * x + z.q), p);
        out[t] = phase * psi[(t + shift) % total];
    }
    return out;
}

} // namespace adm::weyl

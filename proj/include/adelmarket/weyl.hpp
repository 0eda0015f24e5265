#pragma once

#include "adelmarket/rational.hpp"

#include <complex>
#include <vector>

namespace adm::weyl {

// Phase-space translation z = (q, k): q shifts position, k twists the phase.
struct PhasePoint {
    Rational q = 0;
    Rational k = 0;
};

// Finite truncation of L2(Q_p): complex values on the p^{2N} cosets of
// p^{-N} Z_p / p^N Z_p, indexed by t with representative p^{-N} * t.
// Inner products use the Haar weight p^{-N} per coset and a fixed
// accumulation order so results are reproducible.
class LatticeFunction {
public:
    LatticeFunction(BigInt p, int window);

    static LatticeFunction delta(BigInt p, int window, size_t index);

    const BigInt& prime() const { return p_; }
    int window() const { return window_; }
    size_t size() const { return values_.size(); }

    std::complex<double>& operator[](size_t i) { return values_[i]; }
    const std::complex<double>& operator[](size_t i) const { return values_[i]; }

    Rational coset_representative(size_t index) const;

    double measure_weight() const; // Haar mass of one coset: p^{-N}

private:
    BigInt p_;
    int window_;
    std::vector<std::complex<double>> values_;
};

std::complex<double> inner_product(const LatticeFunction& a, const LatticeFunction& b);
double l2_norm(const LatticeFunction& f);

// (W(z) psi)(x) = chi_p(k (2x + q)) * psi(x + q), with x + q taken in the
// quotient (wrap-around). Throws if |q|_p or |k|_p exceeds p^N.
LatticeFunction weyl_apply(const PhasePoint& z, const LatticeFunction& psi);

} // namespace adm::weyl

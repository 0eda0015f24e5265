#pragma once

#include "adelmarket/padic.hpp"
#include "adelmarket/rational.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace adm::waves {

// Two readings of the fractal digit map a_n -> (a_n)^D:
//   DigitPower: sum (a_n)^D * p^{-(n+1)}   (deformed digits, plain radix)
//   ScalePower: sum  a_n    * p^{-(n+1)*D} (plain digits, deformed radix)
enum class MapKind { DigitPower, ScalePower };

std::string to_string(MapKind kind);
MapKind map_kind_from_string(const std::string& name);

// Full parameterization of one wave: the residue orbit w_k = (C k^m + B) mod p^L
// pushed through the digit map and an affine time/price frame.
struct WaveSpec {
    BigInt p = 3;
    double fractal_dim = 1.0; // D
    int level = 1;            // L, digit depth; the curve has p^L samples
    BigInt slope = 1;         // C, reduced mod p^L
    BigInt intercept = 0;     // B, reduced mod p^L
    MapKind map_kind = MapKind::DigitPower;
    int monomial_degree = 1;  // m; 1 is the geodesic
    double t0 = 0.0, t1 = 1.0;
    double y0 = 0.0, y_scale = 1.0;

    void validate() const; // throws std::domain_error on a bad field
    BigInt sample_count() const; // p^level
};

struct WaveCurve {
    std::vector<double> t; // strictly increasing, affine in the sample index
    std::vector<double> y;
    WaveSpec spec;

    size_t size() const { return t.size(); }
};

// The digit-map kernel over already-extracted digit values.
double map_digit_values(const double* digits, size_t count, double p, double fractal_dim,
                        MapKind kind);

// Digit map on a p-adic integer (v >= 0); the valuation contributes v leading
// zero digits ahead of the stored ones.
double real_map(const padic::PAdicNumber& x, double fractal_dim, MapKind kind);

// Digit depth used for sample k of the continued wave: max(level, digits needed
// to write k in base p). For k < p^L this is exactly L.
int continued_level(const BigInt& p, int level, const BigInt& k);

// Raw (unframed) wave value at any sample index k >= 0, including indices past
// p^L - 1; the continuation raises digit depth per sample, so a value never
// depends on how far the wave is later extended.
double wave_value_raw(const WaveSpec& spec, const BigInt& k);

// Samples the full level-L wave. OpenMP-parallel over sample indices; the
// serial reference below must produce bitwise-identical output.
WaveCurve generate(const WaveSpec& spec);

namespace serial {
WaveCurve generate(const WaveSpec& spec);
}

// Number of maximal straight pieces of the sampled curve; consecutive chords
// are merged when their slopes agree within rel_tol.
int count_linear_segments(const WaveCurve& curve, double rel_tol = 1e-9);

// Algebraic signature of the digit-power map:
//   real_map(a + p*j) == (a^D + real_map(j)) / p
// checked within tol.
bool self_affinity_check(const BigInt& j, unsigned digit, const BigInt& p, double fractal_dim,
                         MapKind kind, double tol = 1e-12);

} // namespace adm::waves

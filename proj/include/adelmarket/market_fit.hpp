#pragma once

#include "adelmarket/price_series.hpp"
#include "adelmarket/rational.hpp"
#include "adelmarket/waves.hpp"

#include <string>
#include <vector>

namespace adm::fit {

inline constexpr const char* kSchemaVersion = "adelmarket.fit/1";

std::vector<Rational> default_dim_grid(); // 1/5 .. 3 in steps of 1/20

// Search space for the wave fitter. D candidates are exact rationals: a
// generator dimension that lies on the grid converts to the identical
// double and is recovered bit for bit on noiseless input.
struct FitConfig {
    std::vector<BigInt> primes = {2, 3};
    std::vector<int> levels = {1, 2, 3, 4, 5};
    std::vector<Rational> dim_grid = default_dim_grid(); // strictly increasing, > 0
    double refine_tol = 1e-3;
    std::vector<waves::MapKind> kinds = {waves::MapKind::DigitPower,
                                         waves::MapKind::ScalePower};
    std::vector<BigInt> slopes;      // C candidates; empty means 1..p-1 per prime
    std::vector<BigInt> intercepts;  // B candidates; empty means 0..p-1 per prime
    std::vector<int> monomial_degrees = {1};
    bool log_values = false;         // fit log(value) instead of value

    void validate() const;
};

struct CandidateDiagnostic {
    waves::WaveSpec spec; // after D refinement and the affine solve
    double rmse = 0.0;
    double dim_start = 0.0; // grid point the refinement started from
};

struct FitWindow {
    double t0 = 0.0;
    double t1 = 0.0;
    double dt = 0.0;              // wave sample spacing: (t1 - t0)/(p^L - 1)
    std::size_t wave_samples = 0; // p^L of the winning candidate
    std::size_t series_samples = 0;
};

struct FitResult {
    waves::WaveSpec best;
    double rmse = 0.0;
    bool degenerate = false; // constant input; y_scale pinned to 0
    bool log_values = false;
    FitWindow window;
    std::vector<CandidateDiagnostic> diagnostics; // every evaluated candidate
    std::string input_fingerprint;
    std::string version = kSchemaVersion;
};

// Linear interpolation of the series onto n uniform time points spanning
// [first, last]. Interpolation weights within 1e-9 of a sample snap to it,
// so resampling a uniform series onto its own grid returns the values
// unchanged.
PriceSeries resample(const PriceSeries& series, std::size_t n);

// Root mean squared difference; lengths must match and be >= 1.
double rmse(const std::vector<double>& a, const std::vector<double>& b);

// Exhaustive grid search over (p, L, kind, m, C, B) with a bracketed
// golden-section refinement of D from each grid start. Each candidate wave
// spans the series' time window with p^L uniform samples and is linearly
// interpolated to the series' own sample times; (y0, y_scale) then come
// from the closed-form least squares against the observed values, and the
// reported rmse is over those same points. Candidates are ranked by
// (rmse, p, L, D, C, B, kind, m), all ascending, so the result is a total
// order and independent of evaluation schedule. Runs candidates in
// parallel when OpenMP is enabled; serial::fit must agree bitwise.
FitResult fit(const PriceSeries& series, const FitConfig& cfg, std::string fingerprint = "");

namespace serial {
FitResult fit(const PriceSeries& series, const FitConfig& cfg, std::string fingerprint = "");
}

// Continues the fitted wave at k = p^L .. p^L + horizon - 1, one sample per
// step at the fitted spacing. Digit depth grows per sample as k needs it,
// so a longer horizon never changes earlier values. Values pass through
// the fitted affine frame (and exp, when the fit was on log values).
PriceSeries forecast(const FitResult& fitted, long horizon);

// Canonical JSON round-trip; byte-identical output for identical results.
std::string to_json(const FitResult& result);
FitResult fit_result_from_json(const std::string& text);

} // namespace adm::fit

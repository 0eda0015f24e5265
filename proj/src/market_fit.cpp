#include "adelmarket/market_fit.hpp"

#include "adelmarket/number_theory.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace adm::fit {

namespace {

// Interpolation weights this close to a node collapse onto it, so sampling
// a wave at (bitwise-noisy copies of) its own sample times reproduces the
// stored values exactly.
constexpr double kNodeSnap = 1e-9;
constexpr std::size_t kMaxWaveSamples = std::size_t{1} << 20;
constexpr long kMaxForecast = 1'000'000;

} // namespace

std::vector<Rational> default_dim_grid() {
    std::vector<Rational> grid;
    grid.reserve(57);
    for (int i = 4; i <= 60; ++i) grid.emplace_back(BigInt(i), BigInt(20));
    return grid;
}

void FitConfig::validate() const {
    if (primes.empty()) throw std::domain_error("no prime candidates");
    for (const BigInt& p : primes) {
        if (!is_prime(p)) throw std::domain_error("not a prime: " + p.str());
    }
    if (levels.empty()) throw std::domain_error("no level candidates");
    for (int l : levels) {
        if (l < 1) throw std::domain_error("levels must be >= 1");
    }
    if (dim_grid.empty()) throw std::domain_error("empty dimension grid");
    for (std::size_t i = 0; i < dim_grid.size(); ++i) {
        if (dim_grid[i] <= 0) throw std::domain_error("dimension grid must be positive");
        if (i > 0 && dim_grid[i] <= dim_grid[i - 1]) {
            throw std::domain_error("dimension grid must be strictly increasing");
        }
    }
    if (!(refine_tol > 0.0)) throw std::domain_error("refinement tolerance must be positive");
    if (kinds.empty()) throw std::domain_error("no map kinds");
    if (monomial_degrees.empty()) throw std::domain_error("no monomial degrees");
    for (int m : monomial_degrees) {
        if (m < 1) throw std::domain_error("monomial degrees must be >= 1");
    }
}

PriceSeries resample(const PriceSeries& series, std::size_t n) {
    series.validate();
    if (n < 2) throw std::domain_error("resample needs n >= 2");
    const std::vector<double>& ts = series.timestamps;
    const std::vector<double>& vs = series.values;
    const double first = ts.front();
    const double last = ts.back();
    const double span = last - first;

    PriceSeries out;
    out.label = series.label;
    out.timestamps.resize(n);
    out.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (i == 0) {
            out.timestamps[i] = first;
            out.values[i] = vs.front();
            continue;
        }
        if (i == n - 1) {
            out.timestamps[i] = last;
            out.values[i] = vs.back();
            continue;
        }
        const double t = first + span * (static_cast<double>(i) / static_cast<double>(n - 1));
        auto it = std::upper_bound(ts.begin(), ts.end(), t);
        std::size_t hi = static_cast<std::size_t>(it - ts.begin());
        hi = std::clamp<std::size_t>(hi, 1, ts.size() - 1);
        const std::size_t lo = hi - 1;
        double alpha = (t - ts[lo]) / (ts[hi] - ts[lo]);
        out.timestamps[i] = t;
        if (alpha < kNodeSnap) {
            out.values[i] = vs[lo];
        } else if (alpha > 1.0 - kNodeSnap) {
            out.values[i] = vs[hi];
        } else {
            out.values[i] = vs[lo] + alpha * (vs[hi] - vs[lo]);
        }
    }
    return out;
}

double rmse(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw std::domain_error("rmse length mismatch");
    if (a.empty()) throw std::domain_error("rmse needs at least one sample");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(a.size()));
}

namespace {

struct Candidate {
    BigInt p;
    int level = 1;
    waves::MapKind kind = waves::MapKind::DigitPower;
    int monomial = 1;
    BigInt slope;
    BigInt intercept;
    std::size_t dim_idx = 0;
    std::size_t samples = 0; // p^level
};

struct CandResult {
    double rmse = std::numeric_limits<double>::infinity();
    double dim = 0.0;
    double y0 = 0.0;
    double y_scale = 0.0;
};

// Digits of (C k^m + B) mod p^L for k = 0..count-1, lowest first, row k at
// [k*level, (k+1)*level).
std::vector<double> digit_matrix(const Candidate& c) {
    const BigInt modulus = pow_bigint(c.p, static_cast<unsigned>(c.level));
    std::vector<double> out(c.samples * static_cast<std::size_t>(c.level));
    for (std::size_t k = 0; k < c.samples; ++k) {
        BigInt r = mod_floor(
            c.slope * pow_bigint(BigInt(k), static_cast<unsigned>(c.monomial)) + c.intercept,
            modulus);
        for (int i = 0; i < c.level; ++i) {
            out[k * static_cast<std::size_t>(c.level) + static_cast<std::size_t>(i)] =
                BigInt(r % c.p).convert_to<double>();
            r /= c.p;
        }
    }
    return out;
}

struct AffineFit {
    double rmse = std::numeric_limits<double>::infinity();
    double y0 = 0.0;
    double y_scale = 0.0;
};

CandResult evaluate_candidate(const Candidate& c, const FitConfig& cfg,
                              const std::vector<double>& values,
                              const std::vector<double>& pos) {
    const std::size_t n = values.size();
    const std::size_t nw = c.samples;
    const double pd = c.p.convert_to<double>();
    const std::vector<double> digits = digit_matrix(c);

    // Node/weight pairs mapping each observation onto the wave's index line.
    std::vector<std::size_t> node(n);
    std::vector<double> weight(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = pos[i] * static_cast<double>(nw - 1);
        std::size_t j = static_cast<std::size_t>(std::floor(x));
        j = std::min(j, nw - 2);
        node[i] = j;
        weight[i] = x - static_cast<double>(j);
    }

    std::vector<double> wave(nw);
    std::vector<double> u(n);
    auto eval_at = [&](double dim) -> AffineFit {
        for (std::size_t j = 0; j < nw; ++j) {
            wave[j] = waves::map_digit_values(&digits[j * static_cast<std::size_t>(c.level)],
                                              static_cast<std::size_t>(c.level), pd, dim, c.kind);
        }
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t j = node[i];
            const double a = weight[i];
            if (a < kNodeSnap) {
                u[i] = wave[j];
            } else if (a > 1.0 - kNodeSnap) {
                u[i] = wave[j + 1];
            } else {
                u[i] = wave[j] + a * (wave[j + 1] - wave[j]);
            }
        }
        double mean_u = 0.0, mean_v = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            mean_u += u[i];
            mean_v += values[i];
        }
        mean_u /= static_cast<double>(n);
        mean_v /= static_cast<double>(n);
        double var_u = 0.0, cov = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double du = u[i] - mean_u;
            var_u += du * du;
            cov += du * (values[i] - mean_v);
        }
        AffineFit out;
        if (var_u > 0.0) {
            out.y_scale = cov / var_u;
            out.y0 = mean_v - out.y_scale * mean_u;
        } else {
            out.y_scale = 0.0;
            out.y0 = mean_v;
        }
        double sse = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = out.y0 + out.y_scale * u[i] - values[i];
            sse += r * r;
        }
        out.rmse = std::sqrt(sse / static_cast<double>(n));
        if (!std::isfinite(out.rmse)) out.rmse = std::numeric_limits<double>::infinity();
        return out;
    };

    const double start = to_double(cfg.dim_grid[c.dim_idx]);
    double lo = c.dim_idx > 0 ? to_double(cfg.dim_grid[c.dim_idx - 1]) : start;
    double hi = c.dim_idx + 1 < cfg.dim_grid.size() ? to_double(cfg.dim_grid[c.dim_idx + 1])
                                                    : start;

    AffineFit best = eval_at(start);
    double best_dim = start;
    auto consider = [&](double dim, const AffineFit& f) {
        if (f.rmse < best.rmse) {
            best = f;
            best_dim = dim;
        }
    };

    // Bracketed golden-section sweep for D; only strictly better interior
    // evaluations displace the exact grid start.
    if (hi - lo > cfg.refine_tol) {
        constexpr double kInvPhi = 0.6180339887498949;
        double a = lo, b = hi;
        double c1 = b - (b - a) * kInvPhi;
        double d1 = a + (b - a) * kInvPhi;
        AffineFit fc = eval_at(c1);
        AffineFit fd = eval_at(d1);
        consider(c1, fc);
        consider(d1, fd);
        int iter = 0;
        while (b - a > cfg.refine_tol && ++iter < 120) {
            if (fc.rmse < fd.rmse) {
                b = d1;
                d1 = c1;
                fd = fc;
                c1 = b - (b - a) * kInvPhi;
                fc = eval_at(c1);
                consider(c1, fc);
            } else {
                a = c1;
                c1 = d1;
                fc = fd;
                d1 = a + (b - a) * kInvPhi;
                fd = eval_at(d1);
                consider(d1, fd);
            }
        }
    }

    CandResult out;
    out.rmse = best.rmse;
    out.dim = best_dim;
    out.y0 = best.y0;
    out.y_scale = best.y_scale;
    return out;
}

FitResult fit_impl(const PriceSeries& series, const FitConfig& cfg, std::string fingerprint,
                   bool parallel) {
    series.validate();
    if (series.size() < 4) throw std::domain_error("fit needs at least 4 samples");
    cfg.validate();

    std::vector<double> values = series.values;
    if (cfg.log_values) {
        for (double& v : values) v = std::log(v);
    }
    const double t_first = series.timestamps.front();
    const double t_last = series.timestamps.back();
    const double span = t_last - t_first;
    std::vector<double> pos(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) {
        pos[i] = (series.timestamps[i] - t_first) / span;
    }

    const auto [vmin, vmax] = std::minmax_element(values.begin(), values.end());
    const bool constant_input = (*vmin == *vmax);

    std::vector<Candidate> candidates;
    for (const BigInt& p : cfg.primes) {
        if ((cfg.slopes.empty() || cfg.intercepts.empty()) && p > 64) {
            throw std::domain_error("default C/B enumeration covers one digit; supply explicit "
                                    "slope/intercept candidates for p > 64");
        }
        std::vector<BigInt> slopes = cfg.slopes;
        if (slopes.empty()) {
            for (BigInt c = 1; c < p; ++c) slopes.push_back(c);
        }
        std::vector<BigInt> intercepts = cfg.intercepts;
        if (intercepts.empty()) {
            for (BigInt b = 0; b < p; ++b) intercepts.push_back(b);
        }
        for (int level : cfg.levels) {
            const BigInt count = pow_bigint(p, static_cast<unsigned>(level));
            if (count > kMaxWaveSamples) {
                throw std::domain_error("p^level exceeds the sample limit at p=" + p.str() +
                                        " level=" + std::to_string(level));
            }
            const std::size_t samples = count.convert_to<std::size_t>();
            for (waves::MapKind kind : cfg.kinds) {
                for (int m : cfg.monomial_degrees) {
                    for (const BigInt& c : slopes) {
                        for (const BigInt& b : intercepts) {
                            for (std::size_t di = 0; di < cfg.dim_grid.size(); ++di) {
                                candidates.push_back(
                                    Candidate{p, level, kind, m, c, b, di, samples});
                            }
                        }
                    }
                }
            }
        }
    }

    std::vector<CandResult> results(candidates.size());
    const long total = static_cast<long>(candidates.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (long idx = 0; idx < total; ++idx) {
        results[static_cast<std::size_t>(idx)] =
            evaluate_candidate(candidates[static_cast<std::size_t>(idx)], cfg, values, pos);
    }

    auto better = [&](std::size_t x, std::size_t y) {
        const CandResult& rx = results[x];
        const CandResult& ry = results[y];
        if (rx.rmse != ry.rmse) return rx.rmse < ry.rmse;
        const Candidate& cx = candidates[x];
        const Candidate& cy = candidates[y];
        if (cx.p != cy.p) return cx.p < cy.p;
        if (cx.level != cy.level) return cx.level < cy.level;
        if (rx.dim != ry.dim) return rx.dim < ry.dim;
        if (cx.slope != cy.slope) return cx.slope < cy.slope;
        if (cx.intercept != cy.intercept) return cx.intercept < cy.intercept;
        if (cx.kind != cy.kind) return static_cast<int>(cx.kind) < static_cast<int>(cy.kind);
        return cx.monomial < cy.monomial;
    };
    std::size_t best = 0;
    for (std::size_t i = 1; i < candidates.size(); ++i) {
        if (better(i, best)) best = i;
    }

    auto to_spec = [&](std::size_t i) {
        waves::WaveSpec spec;
        spec.p = candidates[i].p;
        spec.fractal_dim = results[i].dim;
        spec.level = candidates[i].level;
        spec.slope = candidates[i].slope;
        spec.intercept = candidates[i].intercept;
        spec.map_kind = candidates[i].kind;
        spec.monomial_degree = candidates[i].monomial;
        spec.t0 = t_first;
        spec.t1 = t_last;
        spec.y0 = results[i].y0;
        spec.y_scale = results[i].y_scale;
        return spec;
    };

    FitResult out;
    out.best = to_spec(best);
    out.rmse = results[best].rmse;
    out.degenerate = constant_input;
    out.log_values = cfg.log_values;
    out.window.t0 = t_first;
    out.window.t1 = t_last;
    out.window.wave_samples = candidates[best].samples;
    out.window.dt = span / static_cast<double>(candidates[best].samples - 1);
    out.window.series_samples = series.size();
    out.diagnostics.reserve(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        CandidateDiagnostic diag;
        diag.spec = to_spec(i);
        diag.rmse = results[i].rmse;
        diag.dim_start = to_double(cfg.dim_grid[candidates[i].dim_idx]);
        out.diagnostics.push_back(std::move(diag));
    }
    out.input_fingerprint = std::move(fingerprint);
    return out;
}

} // namespace

FitResult fit(const PriceSeries& series, const FitConfig& cfg, std::string fingerprint) {
    return fit_impl(series, cfg, std::move(fingerprint), true);
}

namespace serial {
FitResult fit(const PriceSeries& series, const FitConfig& cfg, std::string fingerprint) {
    return fit_impl(series, cfg, std::move(fingerprint), false);
}
} // namespace serial

PriceSeries forecast(const FitResult& fitted, long horizon) {
    if (horizon < 1) throw std::domain_error("horizon must be >= 1");
    if (horizon > kMaxForecast) throw std::domain_error("horizon too large");
    const waves::WaveSpec& spec = fitted.best;
    const BigInt count = spec.sample_count();
    if (count > kMaxWaveSamples) throw std::domain_error("fitted wave too deep to continue");
    const long nw = count.convert_to<long>();
    const double dt = (spec.t1 - spec.t0) / static_cast<double>(nw - 1);

    PriceSeries out;
    out.label = "forecast";
    out.timestamps.reserve(static_cast<std::size_t>(horizon));
    out.values.reserve(static_cast<std::size_t>(horizon));
    for (long k = nw; k < nw + horizon; ++k) {
        const double raw = waves::wave_value_raw(spec, BigInt(k));
        double y = spec.y0 + spec.y_scale * raw;
        if (fitted.log_values) y = std::exp(y);
        out.timestamps.push_back(spec.t0 + static_cast<double>(k) * dt);
        out.values.push_back(y);
    }
    return out;
}

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json spec_to_json(const waves::WaveSpec& s) {
    ordered_json j;
    j["p"] = s.p.str();
    j["level"] = s.level;
    j["dim"] = s.fractal_dim;
    j["slope"] = s.slope.str();
    j["intercept"] = s.intercept.str();
    j["kind"] = waves::to_string(s.map_kind);
    j["monomial_degree"] = s.monomial_degree;
    j["t0"] = s.t0;
    j["t1"] = s.t1;
    j["y0"] = s.y0;
    j["y_scale"] = s.y_scale;
    return j;
}

waves::WaveSpec spec_from_json(const ordered_json& j) {
    waves::WaveSpec s;
    s.p = BigInt(j.at("p").get<std::string>());
    s.level = j.at("level").get<int>();
    s.fractal_dim = j.at("dim").get<double>();
    s.slope = BigInt(j.at("slope").get<std::string>());
    s.intercept = BigInt(j.at("intercept").get<std::string>());
    s.map_kind = waves::map_kind_from_string(j.at("kind").get<std::string>());
    s.monomial_degree = j.at("monomial_degree").get<int>();
    s.t0 = j.at("t0").get<double>();
    s.t1 = j.at("t1").get<double>();
    s.y0 = j.at("y0").get<double>();
    s.y_scale = j.at("y_scale").get<double>();
    return s;
}

} // namespace

std::string to_json(const FitResult& result) {
    ordered_json j;
    j["schema"] = result.version;
    j["input_fingerprint"] = result.input_fingerprint;
    j["log_values"] = result.log_values;
    j["degenerate"] = result.degenerate;
    j["best"] = spec_to_json(result.best);
    j["rmse"] = result.rmse;
    j["window"] = ordered_json{{"t0", result.window.t0},
                               {"t1", result.window.t1},
                               {"dt", result.window.dt},
                               {"wave_samples", result.window.wave_samples},
                               {"series_samples", result.window.series_samples}};
    ordered_json diags = ordered_json::array();
    for (const CandidateDiagnostic& d : result.diagnostics) {
        ordered_json entry;
        entry["spec"] = spec_to_json(d.spec);
        entry["rmse"] = d.rmse;
        entry["dim_start"] = d.dim_start;
        diags.push_back(std::move(entry));
    }
    j["diagnostics"] = std::move(diags);
    return j.dump(2) + "\n";
}

FitResult fit_result_from_json(const std::string& text) {
    try {
        const ordered_json j = ordered_json::parse(text);
        FitResult out;
        out.version = j.at("schema").get<std::string>();
        if (out.version != kSchemaVersion) {
            throw std::invalid_argument("unsupported schema: " + out.version);
        }
        out.input_fingerprint = j.at("input_fingerprint").get<std::string>();
        out.log_values = j.at("log_values").get<bool>();
        out.degenerate = j.at("degenerate").get<bool>();
        out.best = spec_from_json(j.at("best"));
        out.rmse = j.at("rmse").get<double>();
        const ordered_json& w = j.at("window");
        out.window.t0 = w.at("t0").get<double>();
        out.window.t1 = w.at("t1").get<double>();
        out.window.dt = w.at("dt").get<double>();
        out.window.wave_samples = w.at("wave_samples").get<std::size_t>();
        out.window.series_samples = w.at("series_samples").get<std::size_t>();
        if (j.contains("diagnostics")) {
            for (const ordered_json& entry : j.at("diagnostics")) {
                CandidateDiagnostic d;
                d.spec = spec_from_json(entry.at("spec"));
                d.rmse = entry.at("rmse").get<double>();
                d.dim_start = entry.at("dim_start").get<double>();
                out.diagnostics.push_back(std::move(d));
            }
        }
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("bad fit result JSON: ") + e.what());
    }
}

} // namespace adm::fit

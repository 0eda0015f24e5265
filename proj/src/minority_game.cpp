#include "adelmarket/minority_game.hpp"

#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace adm::mg {

std::string to_string(HistoryMode mode) {
    return mode == HistoryMode::Endogenous ? "endogenous" : "exogenous";
}

HistoryMode history_mode_from_string(const std::string& s) {
    if (s == "endogenous") return HistoryMode::Endogenous;
    if (s == "exogenous") return HistoryMode::Exogenous;
    throw std::invalid_argument("unknown history mode: " + s);
}

void MGConfig::validate() const {
    if (agents < 1) throw std::domain_error("agents must be >= 1");
    if (memory < 1 || memory > 24) throw std::domain_error("memory must be in [1, 24]");
    if (strategies < 1) throw std::domain_error("strategies must be >= 1");
    if (steps < 1) throw std::domain_error("steps must be >= 1");
}

MGState::MGState(const MGConfig& cfg) : cfg_(cfg), rng_(cfg.seed) {
    cfg_.validate();
    words_ = cfg_.history_count();
    norm_ = std::sqrt(static_cast<double>(cfg_.agents));
    tables_.resize(static_cast<std::size_t>(cfg_.agents) * cfg_.strategies * words_);
    for (auto& entry : tables_) {
        entry = (rng_() & 1u) ? std::int8_t{1} : std::int8_t{-1};
    }
    scores_.assign(static_cast<std::size_t>(cfg_.agents) * cfg_.strategies, 0);
    mu_ = rng_() & (words_ - 1);
}

MGState::MGState(const MGConfig& cfg, std::vector<std::int8_t> tables, std::uint64_t initial_history)
    : cfg_(cfg), tables_(std::move(tables)), rng_(cfg.seed) {
    cfg_.validate();
    words_ = cfg_.history_count();
    norm_ = std::sqrt(static_cast<double>(cfg_.agents));
    if (tables_.size() != static_cast<std::size_t>(cfg_.agents) * cfg_.strategies * words_) {
        throw std::invalid_argument("table size does not match config");
    }
    for (auto entry : tables_) {
        if (entry != 1 && entry != -1) throw std::invalid_argument("table entries must be +1 or -1");
    }
    if (initial_history >= words_) throw std::invalid_argument("initial history out of range");
    scores_.assign(static_cast<std::size_t>(cfg_.agents) * cfg_.strategies, 0);
    mu_ = initial_history;
}

std::size_t MGState::table_index(int agent, int strategy, std::uint64_t mu) const {
    return (static_cast<std::size_t>(agent) * cfg_.strategies + strategy) * words_ + mu;
}

int MGState::table(int agent, int strategy, std::uint64_t mu) const {
    if (agent < 0 || agent >= cfg_.agents || strategy < 0 || strategy >= cfg_.strategies ||
        mu >= words_) {
        throw std::out_of_range("table lookup out of range");
    }
    return tables_[table_index(agent, strategy, mu)];
}

long long MGState::score(int agent, int strategy) const {
    if (agent < 0 || agent >= cfg_.agents || strategy < 0 || strategy >= cfg_.strategies) {
        throw std::out_of_range("score lookup out of range");
    }
    return scores_[static_cast<std::size_t>(agent) * cfg_.strategies + strategy];
}

void MGState::step() {
    const int n = cfg_.agents;
    const int s_count = cfg_.strategies;
    int raw = 0;
    for (int i = 0; i < n; ++i) {
        int best = 0;
        for (int s = 1; s < s_count; ++s) {
            if (scores_[static_cast<std::size_t>(i) * s_count + s] >
                scores_[static_cast<std::size_t>(i) * s_count + best]) {
                best = s;  // strict: ties keep the lowest index
            }
        }
        raw += tables_[table_index(i, best, mu_)];
    }
    raw_.push_back(raw);
    attendance_.push_back(raw / norm_);

    // Every strategy is scored on the action it prescribed, played or not;
    // siding with the minority (against sign(A)) earns +1.
    const int sgn = (raw > 0) - (raw < 0);
    if (sgn != 0) {
        for (int i = 0; i < n; ++i) {
            for (int s = 0; s < s_count; ++s) {
                scores_[static_cast<std::size_t>(i) * s_count + s] -=
                    tables_[table_index(i, s, mu_)] * sgn;
            }
        }
    }

    // Winning bit 1 means the minority action was +1 (raw < 0); an exact
    // tie counts as bit 0.
    const std::uint64_t winbit = raw < 0 ? 1u : 0u;
    if (cfg_.history == HistoryMode::Endogenous) {
        mu_ = ((mu_ << 1) | winbit) & (words_ - 1);
    } else {
        mu_ = rng_() & (words_ - 1);
    }
    ++t_;
}

void MGState::run(long steps) {
    for (long i = 0; i < steps; ++i) step();
}

double sigma2(const std::vector<double>& series, std::size_t burn_in) {
    if (burn_in >= series.size()) throw std::domain_error("empty averaging window");
    const std::size_t count = series.size() - burn_in;
    double mean = 0.0;
    double mean_sq = 0.0;
    for (std::size_t i = burn_in; i < series.size(); ++i) {
        mean += series[i];
        mean_sq += series[i] * series[i];
    }
    mean /= static_cast<double>(count);
    mean_sq /= static_cast<double>(count);
    return mean_sq - mean * mean;
}

SpinDecomposition spin_decompose(const MGState& state, const std::vector<int>& spins) {
    const MGConfig& cfg = state.config();
    if (cfg.strategies != 2) {
        throw std::domain_error("spin decomposition requires exactly 2 strategies per agent");
    }
    const int n = cfg.agents;
    const std::uint64_t words = cfg.history_count();
    if (spins.size() != static_cast<std::size_t>(n)) {
        throw std::invalid_argument("spin count does not match agent count");
    }
    for (int s : spins) {
        if (s != 1 && s != -1) throw std::invalid_argument("spins must be +1 or -1");
    }

    SpinDecomposition d;
    d.omega.assign(n, std::vector<int>(words));
    d.xi.assign(n, std::vector<int>(words));
    for (int i = 0; i < n; ++i) {
        for (std::uint64_t mu = 0; mu < words; ++mu) {
            const int a0 = state.table(i, 0, mu);
            const int a1 = state.table(i, 1, mu);
            d.omega[i][mu] = (a0 + a1) / 2;
            d.xi[i][mu] = (a0 - a1) / 2;
        }
    }

    std::vector<long long> big_omega(words, 0);
    for (std::uint64_t mu = 0; mu < words; ++mu) {
        for (int i = 0; i < n; ++i) big_omega[mu] += d.omega[i][mu];
    }

    const BigInt k_big(words);
    d.h.resize(n);
    for (int i = 0; i < n; ++i) {
        long long acc = 0;
        for (std::uint64_t mu = 0; mu < words; ++mu) acc += big_omega[mu] * d.xi[i][mu];
        d.h[i] = Rational(BigInt(2 * acc), k_big);
    }
    d.J.assign(n, std::vector<Rational>(n));
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            long long acc = 0;
            for (std::uint64_t mu = 0; mu < words; ++mu) {
                acc += static_cast<long long>(d.xi[i][mu]) * d.xi[j][mu];
            }
            d.J[i][j] = Rational(BigInt(2 * acc), k_big);
            d.J[j][i] = d.J[i][j];
        }
    }

    long long omega_sq = 0;
    for (std::uint64_t mu = 0; mu < words; ++mu) omega_sq += big_omega[mu] * big_omega[mu];
    d.constant = Rational(BigInt(omega_sq), k_big * n);

    long long attendance_sq = 0;
    for (std::uint64_t mu = 0; mu < words; ++mu) {
        long long row = big_omega[mu];
        for (int i = 0; i < n; ++i) row += static_cast<long long>(spins[i]) * d.xi[i][mu];
        attendance_sq += row * row;
    }
    d.lhs = Rational(BigInt(attendance_sq), k_big * n);

    Rational field = 0;
    for (int i = 0; i < n; ++i) field += d.h[i] * spins[i];
    Rational coupling = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) coupling += d.J[i][j] * (spins[i] * spins[j]);
    }
    d.rhs = d.constant + field / n + coupling / (2 * n);
    return d;
}

PriceSeries price_from_attendance(const std::vector<double>& attendance, double p0,
                                  double lambda, double t_start, double dt) {
    if (!(p0 > 0.0)) throw std::domain_error("initial price must be positive");
    if (!(dt > 0.0)) throw std::domain_error("time step must be positive");
    if (attendance.empty()) throw std::domain_error("empty attendance series");
    PriceSeries out;
    out.label = "price";
    out.timestamps.reserve(attendance.size());
    out.values.reserve(attendance.size());
    double log_price = std::log(p0);
    for (std::size_t i = 0; i < attendance.size(); ++i) {
        log_price += lambda * attendance[i];
        out.timestamps.push_back(t_start + static_cast<double>(i) * dt);
        out.values.push_back(std::exp(log_price));
    }
    return out;
}

namespace {

SweepRun sweep_one(const MGConfig& base, std::uint64_t seed, std::size_t burn_in) {
    MGConfig cfg = base;
    cfg.seed = seed;
    MGState state(cfg);
    state.run(cfg.steps);
    std::vector<double> raw(state.raw_attendance().begin(), state.raw_attendance().end());
    SweepRun run;
    run.seed = seed;
    run.sigma2_raw = sigma2(raw, burn_in);
    run.sigma2_over_n = run.sigma2_raw / cfg.agents;
    run.mean_attendance = 0.0;
    for (std::size_t i = burn_in; i < state.attendance().size(); ++i) {
        run.mean_attendance += state.attendance()[i];
    }
    run.mean_attendance /= static_cast<double>(state.attendance().size() - burn_in);
    return run;
}

SweepResult sweep_impl(const MGConfig& base, const std::vector<std::uint64_t>& seeds,
                       std::size_t burn_in, bool parallel) {
    base.validate();
    if (seeds.empty()) throw std::domain_error("sweep needs at least one seed");
    if (burn_in >= static_cast<std::size_t>(base.steps)) {
        throw std::domain_error("burn-in leaves no samples");
    }
    SweepResult result;
    result.base = base;
    result.burn_in = burn_in;
    result.runs.resize(seeds.size());

    const long count = static_cast<long>(seeds.size());
#pragma omp parallel for schedule(static) if (parallel)
    for (long j = 0; j < count; ++j) {
        result.runs[static_cast<std::size_t>(j)] =
            sweep_one(base, seeds[static_cast<std::size_t>(j)], burn_in);
    }

    double acc = 0.0;
    for (const SweepRun& run : result.runs) acc += run.sigma2_over_n;
    result.mean_sigma2_over_n = acc / static_cast<double>(result.runs.size());
    return result;
}

} // namespace

SweepResult sweep(const MGConfig& base, const std::vector<std::uint64_t>& seeds,
                  std::size_t burn_in) {
    return sweep_impl(base, seeds, burn_in, true);
}

namespace serial {
SweepResult sweep(const MGConfig& base, const std::vector<std::uint64_t>& seeds,
                  std::size_t burn_in) {
    return sweep_impl(base, seeds, burn_in, false);
}
} // namespace serial

} // namespace adm::mg

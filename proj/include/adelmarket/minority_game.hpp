#pragma once

#include "adelmarket/price_series.hpp"
#include "adelmarket/rational.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace adm::mg {

// How the history word evolves: Endogenous feeds the realized winning bit
// back in; Exogenous draws a fresh uniform word each step.
enum class HistoryMode { Endogenous, Exogenous };

std::string to_string(HistoryMode mode);
HistoryMode history_mode_from_string(const std::string& s);

struct MGConfig {
    int agents = 11;        // N
    int memory = 3;         // M bits of history; K = 2^M words
    int strategies = 2;     // S per agent; the spin decomposition needs S = 2
    long steps = 1000;      // T
    std::uint64_t seed = 0;
    HistoryMode history = HistoryMode::Endogenous;

    std::uint64_t history_count() const { return std::uint64_t{1} << memory; }
    void validate() const;
};

// One market. Strategy tables are fixed at construction; step() plays one
// round. All randomness comes from a single mt19937_64 seeded with
// cfg.seed, consumed in a documented order (see the constructors), so runs
// are bitwise reproducible.
class MGState {
public:
    // Draws tables entry by entry in flat index order (agent-major, then
    // strategy, then history word), one engine call per entry, low bit
    // selecting +1/-1; then one call for the initial history word.
    explicit MGState(const MGConfig& cfg);

    // Tables and initial history supplied by the caller; the engine is
    // seeded but used only for Exogenous history draws.
    MGState(const MGConfig& cfg, std::vector<std::int8_t> tables, std::uint64_t initial_history);

    void step();
    void run(long steps);

    const MGConfig& config() const { return cfg_; }
    long time() const { return t_; }
    std::uint64_t history() const { return mu_; }

    // a_i^{s,mu}, always +1 or -1
    int table(int agent, int strategy, std::uint64_t mu) const;
    long long score(int agent, int strategy) const;

    // Sum of the N played actions each round, in [-N, N].
    const std::vector<int>& raw_attendance() const { return raw_; }
    // raw / sqrt(N); |A(t)| <= sqrt(N)
    const std::vector<double>& attendance() const { return attendance_; }

private:
    std::size_t table_index(int agent, int strategy, std::uint64_t mu) const;

    MGConfig cfg_;
    std::uint64_t words_;
    double norm_;
    std::vector<std::int8_t> tables_;  // [(agent * S + strategy) * K + mu]
    std::vector<long long> scores_;    // virtual score per (agent, strategy)
    std::uint64_t mu_ = 0;
    long t_ = 0;
    std::mt19937_64 rng_;
    std::vector<int> raw_;
    std::vector<double> attendance_;
};

// <A^2> - <A>^2 over series[burn_in..end). Throws on an empty window.
double sigma2(const std::vector<double>& series, std::size_t burn_in = 0);

// Exact quadratic form hidden in the volatility. With spins s_i in {-1,+1}
// selecting strategy 0 (s=+1) or 1 (s=-1), omega = (a0+a1)/2 and
// xi = (a0-a1)/2 split each agent's pair into a common and a switching
// part, and the history average of A^2 collapses to
//   lhs = constant + (1/N) sum_i h_i s_i + (1/2N) sum_ij J_ij s_i s_j = rhs
// with h_i = (2/K) sum_mu Omega^mu xi_i^mu, J_ij = (2/K) sum_mu xi_i xi_j,
// Omega^mu = sum_i omega_i^mu, constant = <Omega^2>/N. Everything is
// rational, so lhs == rhs holds exactly, not just to tolerance.
struct SpinDecomposition {
    std::vector<std::vector<int>> omega;   // [agent][mu], entries in {-1,0,1}
    std::vector<std::vector<int>> xi;      // [agent][mu], entries in {-1,0,1}
    std::vector<Rational> h;               // per-agent field
    std::vector<std::vector<Rational>> J;  // symmetric coupling matrix
    Rational constant;                     // <Omega^2>/N
    Rational lhs;                          // <A^2> at the given spins
    Rational rhs;                          // quadratic form at the given spins
};

SpinDecomposition spin_decompose(const MGState& state, const std::vector<int>& spins);

// price(t) = p0 * exp(lambda * sum_{u<=t} A(u)); timestamps t_start + i*dt.
PriceSeries price_from_attendance(const std::vector<double>& attendance, double p0,
                                  double lambda = 0.01, double t_start = 0.0, double dt = 1.0);

struct SweepRun {
    std::uint64_t seed = 0;
    double sigma2_raw = 0.0;     // variance of the raw attendance sum
    double sigma2_over_n = 0.0;  // sigma2_raw / N
    double mean_attendance = 0.0;
};

struct SweepResult {
    MGConfig base;
    std::size_t burn_in = 0;
    std::vector<SweepRun> runs;        // input seed order
    double mean_sigma2_over_n = 0.0;   // fixed-order average over runs
};

// Runs one independent game per seed (in parallel when OpenMP is enabled)
// and aggregates in seed order; bitwise identical to serial::sweep.
SweepResult sweep(const MGConfig& base, const std::vector<std::uint64_t>& seeds,
                  std::size_t burn_in = 0);

namespace serial {
SweepResult sweep(const MGConfig& base, const std::vector<std::uint64_t>& seeds,
                  std::size_t burn_in = 0);
} // namespace serial

} // namespace adm::mg

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "adelmarket/minority_game.hpp"
#include "oracles.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

using adm::Rational;
namespace mg = adm::mg;

namespace {

mg::MGConfig small_config(int agents, int memory, long steps, std::uint64_t seed) {
    mg::MGConfig cfg;
    cfg.agents = agents;
    cfg.memory = memory;
    cfg.steps = steps;
    cfg.seed = seed;
    return cfg;
}

std::vector<std::int8_t> snapshot_tables(const mg::MGState& state) {
    const mg::MGConfig& cfg = state.config();
    std::vector<std::int8_t> tables;
    for (int i = 0; i < cfg.agents; ++i) {
        for (int s = 0; s < cfg.strategies; ++s) {
            for (std::uint64_t mu = 0; mu < cfg.history_count(); ++mu) {
                tables.push_back(static_cast<std::int8_t>(state.table(i, s, mu)));
            }
        }
    }
    return tables;
}

} // namespace

TEST_CASE("same seed reproduces the identical game") {
    const mg::MGConfig cfg = small_config(7, 3, 400, 12345);
    mg::MGState a(cfg);
    mg::MGState b(cfg);
    a.run(cfg.steps);
    b.run(cfg.steps);
    REQUIRE(a.attendance().size() == 400);
    for (std::size_t i = 0; i < a.attendance().size(); ++i) {
        CHECK(a.attendance()[i] == b.attendance()[i]);
        CHECK(a.raw_attendance()[i] == b.raw_attendance()[i]);
    }
}

TEST_CASE("attendance respects the sqrt-N bound and the raw sum parity") {
    const mg::MGConfig cfg = small_config(9, 4, 600, 42);
    mg::MGState state(cfg);
    state.run(cfg.steps);
    const double bound = std::sqrt(9.0) + 1e-12;
    for (std::size_t i = 0; i < state.attendance().size(); ++i) {
        CHECK(std::fabs(state.attendance()[i]) <= bound);
        const int raw = state.raw_attendance()[i];
        CHECK(raw >= -9);
        CHECK(raw <= 9);
        CHECK((raw % 2 != 0)); // odd agent count, odd sum
        CHECK(state.attendance()[i] == raw / std::sqrt(9.0));
    }
}

TEST_CASE("a lone agent is always the majority and bleeds score") {
    mg::MGConfig cfg = small_config(1, 2, 50, 7);
    cfg.strategies = 1;
    mg::MGState state(cfg);
    state.run(cfg.steps);
    for (std::size_t i = 0; i < state.raw_attendance().size(); ++i) {
        CHECK(std::abs(state.raw_attendance()[i]) == 1);
    }
    CHECK(state.score(0, 0) == -50);
}

TEST_CASE("endogenous trajectory matches an independently written game") {
    for (std::uint64_t seed : {1u, 9u, 77u}) {
        const mg::MGConfig cfg = small_config(3, 1, 64, seed);
        mg::MGState state(cfg);

        oracle::MiniGame mini;
        mini.agents = cfg.agents;
        mini.strategies = cfg.strategies;
        mini.words = cfg.history_count();
        mini.tables = snapshot_tables(state);
        mini.scores.assign(static_cast<std::size_t>(cfg.agents) * cfg.strategies, 0);
        mini.mu = state.history();

        for (int t = 0; t < 64; ++t) {
            const int want = mini.step();
            state.step();
            CHECK(state.raw_attendance().back() == want);
            CHECK(state.history() == mini.mu);
        }
        for (int i = 0; i < cfg.agents; ++i) {
            for (int s = 0; s < cfg.strategies; ++s) {
                CHECK(state.score(i, s) ==
                      mini.scores[static_cast<std::size_t>(i * cfg.strategies + s)]);
            }
        }
    }
}

TEST_CASE("larger games also track the reference implementation") {
    const mg::MGConfig cfg = small_config(11, 5, 500, 2024);
    mg::MGState state(cfg);
    oracle::MiniGame mini{cfg.agents, cfg.strategies, cfg.history_count(),
                          snapshot_tables(state),
                          std::vector<long long>(
                              static_cast<std::size_t>(cfg.agents) * cfg.strategies, 0),
                          state.history()};
    for (int t = 0; t < 500; ++t) {
        const int want = mini.step();
        state.step();
        CHECK(state.raw_attendance().back() == want);
    }
}

TEST_CASE("score ties resolve to the lowest strategy index") {
    // Two strategies that disagree everywhere; fresh scores tie at zero, so
    // round one must play strategy 0 for both agents.
    mg::MGConfig cfg = small_config(2, 1, 1, 0);
    std::vector<std::int8_t> tables = {
        +1, +1, // agent 0, strategy 0: plays +1 on both histories
        -1, -1, // agent 0, strategy 1
        +1, -1, // agent 1, strategy 0
        -1, +1, // agent 1, strategy 1
    };
    mg::MGState state(cfg, tables, 0);
    state.step();
    CHECK(state.raw_attendance().back() == 2); // +1 (a0 s0) + +1 (a1 s0 at mu=0)
}

TEST_CASE("an exact attendance tie freezes scores and records a losing bit") {
    mg::MGConfig cfg = small_config(2, 2, 6, 0);
    // Opposite fixed actions: raw attendance is identically zero.
    std::vector<std::int8_t> tables = {
        +1, +1, +1, +1, // agent 0, strategy 0
        +1, +1, +1, +1, // agent 0, strategy 1
        -1, -1, -1, -1, // agent 1, strategy 0
        -1, -1, -1, -1, // agent 1, strategy 1
    };
    mg::MGState state(cfg, tables, 3); // history starts nonzero
    state.run(6);
    for (int raw : state.raw_attendance()) CHECK(raw == 0);
    for (int i = 0; i < 2; ++i) {
        for (int s = 0; s < 2; ++s) CHECK(state.score(i, s) == 0);
    }
    // Ties shift zeros into the history word until it clears.
    CHECK(state.history() == 0);
}

TEST_CASE("full herd saturates the attendance bound") {
    mg::MGConfig cfg = small_config(3, 1, 4, 0);
    // Every agent, every strategy: play +1 always.
    std::vector<std::int8_t> tables(3 * 2 * 2, +1);
    mg::MGState state(cfg, tables, 0);
    state.run(4);
    for (int raw : state.raw_attendance()) CHECK(raw == 3);
    for (double a : state.attendance()) {
        CHECK(a == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
    }
}

TEST_CASE("negating the tables negates the game under the same history draws") {
    mg::MGConfig cfg = small_config(5, 3, 300, 99);
    cfg.history = mg::HistoryMode::Exogenous;

    const mg::MGState seeded(cfg); // only for its tables
    std::vector<std::int8_t> tables = snapshot_tables(seeded);
    std::vector<std::int8_t> negated = tables;
    for (std::int8_t& v : negated) v = static_cast<std::int8_t>(-v);

    mg::MGState a(cfg, tables, 0);
    mg::MGState b(cfg, negated, 0);
    a.run(cfg.steps);
    b.run(cfg.steps);
    CHECK(a.history() == b.history());
    for (std::size_t i = 0; i < a.raw_attendance().size(); ++i) {
        CHECK(a.raw_attendance()[i] == -b.raw_attendance()[i]);
        CHECK(a.attendance()[i] == -b.attendance()[i]);
    }
}

TEST_CASE("sigma2 matches the two-pass oracle and handles burn-in") {
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> dist(-3.0, 3.0);
    std::vector<double> xs;
    for (int i = 0; i < 500; ++i) xs.push_back(dist(rng));

    CHECK(mg::sigma2(xs) == doctest::Approx(oracle::two_pass_variance(xs)).epsilon(1e-12));
    CHECK(mg::sigma2(xs, 123) ==
          doctest::Approx(oracle::two_pass_variance(xs, 123)).epsilon(1e-12));

    CHECK(mg::sigma2(std::vector<double>(10, 2.5)) == doctest::Approx(0.0));
    std::vector<double> alternating;
    for (int i = 0; i < 100; ++i) alternating.push_back(i % 2 == 0 ? 1.0 : -1.0);
    CHECK(mg::sigma2(alternating) == doctest::Approx(1.0).epsilon(1e-14));

    CHECK_THROWS_AS(mg::sigma2(xs, 500), std::domain_error);
    CHECK_THROWS_AS(mg::sigma2({}), std::domain_error);
}

TEST_CASE("spin parts rebuild every table action") {
    const mg::MGConfig cfg = small_config(3, 2, 1, 5);
    const mg::MGState state(cfg);
    const std::vector<int> spins = {1, -1, 1};
    const mg::SpinDecomposition d = mg::spin_decompose(state, spins);
    for (int i = 0; i < cfg.agents; ++i) {
        for (std::uint64_t mu = 0; mu < cfg.history_count(); ++mu) {
            const int om = d.omega[static_cast<std::size_t>(i)][mu];
            const int xi = d.xi[static_cast<std::size_t>(i)][mu];
            CHECK(om + xi == state.table(i, 0, mu));
            CHECK(om - xi == state.table(i, 1, mu));
            const int s = spins[static_cast<std::size_t>(i)];
            CHECK(om + s * xi == state.table(i, s == 1 ? 0 : 1, mu));
        }
    }
    // Coupling matrix symmetry and nonnegative diagonal.
    for (int i = 0; i < cfg.agents; ++i) {
        for (int j = 0; j < cfg.agents; ++j) {
            CHECK(d.J[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] ==
                  d.J[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]);
        }
        CHECK(d.J[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] >= 0);
    }
}

TEST_CASE("quadratic form equals the brute-force mean square attendance exactly") {
    for (int agents : {1, 2, 3}) {
        for (int memory : {1, 2}) {
            for (std::uint64_t seed : {3u, 14u, 159u}) {
                const mg::MGConfig cfg = small_config(agents, memory, 1, seed);
                const mg::MGState state(cfg);
                const int combos = 1 << agents;
                for (int mask = 0; mask < combos; ++mask) {
                    std::vector<int> spins;
                    for (int i = 0; i < agents; ++i) {
                        spins.push_back((mask >> i) & 1 ? 1 : -1);
                    }
                    const mg::SpinDecomposition d = mg::spin_decompose(state, spins);
                    CHECK(d.lhs == d.rhs); // exact rational identity
                    CHECK(d.lhs == oracle::brute_mean_square_attendance(state, spins));
                }
            }
        }
    }
}

TEST_CASE("an agent with twin strategies decouples from its spin") {
    mg::MGConfig cfg = small_config(2, 1, 1, 0);
    std::vector<std::int8_t> tables = {
        +1, -1, // agent 0, strategy 0
        +1, -1, // agent 0, strategy 1 (identical twin)
        +1, +1, // agent 1, strategy 0
        -1, -1, // agent 1, strategy 1
    };
    const mg::MGState state(cfg, tables, 0);
    const mg::SpinDecomposition up = mg::spin_decompose(state, {1, 1});
    const mg::SpinDecomposition down = mg::spin_decompose(state, {-1, 1});
    for (std::uint64_t mu = 0; mu < 2; ++mu) CHECK(up.xi[0][mu] == 0);
    CHECK(up.lhs == down.lhs); // flipping the twin agent's spin changes nothing
}

TEST_CASE("spin decomposition rejects unsupported shapes") {
    mg::MGConfig cfg = small_config(2, 1, 1, 0);
    cfg.strategies = 3;
    const mg::MGState state(cfg);
    CHECK_THROWS_AS(mg::spin_decompose(state, {1, -1}), std::domain_error);

    const mg::MGState ok(small_config(2, 1, 1, 0));
    CHECK_THROWS_AS(mg::spin_decompose(ok, {1}), std::invalid_argument);
    CHECK_THROWS_AS(mg::spin_decompose(ok, {1, 2}), std::invalid_argument);
}

TEST_CASE("price accumulates the attendance in log space") {
    const std::vector<double> flat(10, 0.0);
    const adm::PriceSeries still = mg::price_from_attendance(flat, 50.0);
    for (double v : still.values) CHECK(v == doctest::Approx(50.0).epsilon(1e-15));

    const std::vector<double> one = {2.0};
    const adm::PriceSeries jump = mg::price_from_attendance(one, 100.0, 0.05);
    REQUIRE(jump.values.size() == 1);
    CHECK(jump.values[0] == doctest::Approx(100.0 * std::exp(0.1)).epsilon(1e-14));

    std::mt19937_64 rng(103);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> series;
    for (int i = 0; i < 50; ++i) series.push_back(dist(rng));
    const adm::PriceSeries priced = mg::price_from_attendance(series, 10.0, 0.01, 5.0, 2.0);
    double acc = 0.0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        acc += series[i];
        CHECK(std::log(priced.values[i] / 10.0) ==
              doctest::Approx(0.01 * acc).epsilon(1e-10));
        CHECK(priced.timestamps[i] == doctest::Approx(5.0 + 2.0 * i).epsilon(1e-15));
    }

    CHECK_THROWS_AS(mg::price_from_attendance(flat, -1.0), std::domain_error);
    CHECK_THROWS_AS(mg::price_from_attendance({}, 1.0), std::domain_error);
}

TEST_CASE("seed sweeps aggregate per-run volatilities deterministically") {
    const mg::MGConfig base = small_config(7, 4, 500, 0);
    const std::vector<std::uint64_t> seeds = {11, 22, 33, 44};
    const mg::SweepResult par = mg::sweep(base, seeds, 100);
    const mg::SweepResult ser = mg::serial::sweep(base, seeds, 100);

    REQUIRE(par.runs.size() == seeds.size());
    REQUIRE(ser.runs.size() == seeds.size());
    CHECK(par.mean_sigma2_over_n == ser.mean_sigma2_over_n);
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        CHECK(par.runs[i].seed == seeds[i]);
        CHECK(par.runs[i].sigma2_over_n == ser.runs[i].sigma2_over_n);
        CHECK(par.runs[i].sigma2_raw == ser.runs[i].sigma2_raw);
        CHECK(par.runs[i].mean_attendance == ser.runs[i].mean_attendance);
    }

    // One run checked against simulating that seed directly.
    mg::MGConfig solo = base;
    solo.seed = 22;
    mg::MGState state(solo);
    state.run(solo.steps);
    CHECK(par.runs[1].sigma2_over_n ==
          doctest::Approx(mg::sigma2(state.attendance(), 100)).epsilon(1e-15));

    CHECK_THROWS_AS(mg::sweep(base, {}, 0), std::domain_error);
    CHECK_THROWS_AS(mg::sweep(base, seeds, 500), std::domain_error);
}

TEST_CASE("crowded memory pushes volatility toward the coin-flip value") {
    mg::MGConfig cfg = small_config(11, 8, 3000, 0);
    std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
    const mg::SweepResult sweep = mg::sweep(cfg, seeds, 500);
    CHECK(sweep.mean_sigma2_over_n > 0.7);
    CHECK(sweep.mean_sigma2_over_n < 1.3);
}

TEST_CASE("config validation rejects degenerate settings") {
    CHECK_THROWS_AS(small_config(0, 1, 1, 0).validate(), std::domain_error);
    CHECK_THROWS_AS(small_config(1, 0, 1, 0).validate(), std::domain_error);
    CHECK_THROWS_AS(small_config(1, 25, 1, 0).validate(), std::domain_error);
    CHECK_THROWS_AS(small_config(1, 1, 0, 0).validate(), std::domain_error);
    mg::MGConfig bad = small_config(1, 1, 1, 0);
    bad.strategies = 0;
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
    CHECK_NOTHROW(small_config(1, 24, 1, 0).validate());

    CHECK(mg::to_string(mg::HistoryMode::Endogenous) == "endogenous");
    CHECK(mg::history_mode_from_string("exogenous") == mg::HistoryMode::Exogenous);
    CHECK_THROWS_AS(mg::history_mode_from_string("nope"), std::invalid_argument);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "adelmarket/csv.hpp"
#include "adelmarket/waves.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;
namespace io = adm::io;

namespace {

struct CliResult {
    int code = -1;
    std::string output; // stdout and stderr interleaved
};

CliResult run_cli(const std::string& args) {
    const std::string cmd = std::string(ADELMARKET_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CliResult result;
    char buf[4096];
    std::size_t got = 0;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) {
        result.output.append(buf, got);
    }
    const int status = pclose(pipe);
    result.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

fs::path scratch_dir() {
    const fs::path dir = fs::temp_directory_path() / "adelmarket_test_cli";
    fs::create_directories(dir);
    return dir;
}

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

// Day-aligned framed wave written in the full price schema, so the fit
// subcommand can load it back.
fs::path wave_price_csv() {
    const fs::path path = scratch_dir() / "wave_prices.csv";
    adm::waves::WaveSpec spec;
    spec.p = 3;
    spec.level = 2;
    spec.y0 = 100.0;
    spec.y_scale = 10.0;
    spec.t0 = 1243814400.0;
    spec.t1 = 1243814400.0 + 8.0 * 86400.0;
    const adm::waves::WaveCurve curve = adm::waves::generate(spec);
    adm::PriceSeries series;
    series.timestamps = curve.t;
    series.values = curve.y;
    io::write_ohlc_csv(path.string(), series);
    return path;
}

} // namespace

TEST_CASE("bare invocation demands a subcommand; help exits clean") {
    const CliResult bare = run_cli("");
    CHECK(bare.code == 1);

    const CliResult help = run_cli("--help");
    CHECK(help.code == 0);
    CHECK(help.output.find("gen") != std::string::npos);
    CHECK(help.output.find("forecast") != std::string::npos);
}

TEST_CASE("gen defaults to the three-point level-1 staircase on stdout") {
    const CliResult r = run_cli("gen");
    CHECK(r.code == 0);
    CHECK(r.output == "t,y\n0,0\n0.5,0.3333333333333333\n1,0.6666666666666666\n");
}

TEST_CASE("gen writes identical bytes on repeated runs") {
    const fs::path out = scratch_dir() / "bubble.csv";
    const fs::path svg = scratch_dir() / "bubble.svg";
    const std::string args = "gen --p 3 --level 3 --dim 0.45 --m 3 --c 2 --b 1 --out " +
                             q(out) + " --svg " + q(svg);
    REQUIRE(run_cli(args).code == 0);
    const std::string first = io::read_file(out.string());
    REQUIRE(run_cli(args).code == 0);
    CHECK(io::read_file(out.string()) == first);
    CHECK(first.rfind("t,y\n", 0) == 0);
    CHECK(std::count(first.begin(), first.end(), '\n') == 28); // header + 27 samples

    const std::string picture = io::read_file(svg.string());
    CHECK(picture.rfind("<svg ", 0) == 0);
    CHECK(picture.find("p=3 L=3 D=0.45") != std::string::npos);
}

TEST_CASE("padic subcommands print plain values") {
    CHECK(run_cli("padic norm --x 10/12 --p 2").output == "2\n");
    CHECK(run_cli("padic valuation --x 10/12 --p 2").output == "-1\n");
    CHECK(run_cli("padic norm --x -7/3 --p inf").output == "7/3\n");
    CHECK(run_cli("padic norm --x 0 --p 5").output == "0\n");
    CHECK(run_cli("padic expand --x 15 --p 3 --digits 3").output ==
          "p=3 v=1 digits=[2,1,0] (N=3)\n");
}

TEST_CASE("adele product lists one factor per relevant place") {
    const CliResult r = run_cli("adele product --x -5/8");
    CHECK(r.code == 0);
    CHECK(r.output == "inf: 5/8\n2: 8\n5: 1/5\nproduct: 1\n");
}

TEST_CASE("adele char evaluates the restricted character product") {
    const CliResult r = run_cli("adele char --x 3/4");
    CHECK(r.code == 0);
    CHECK(r.output.find("i\n") != std::string::npos);

    const CliResult custom = run_cli("adele char --x 1/2 --primes 2,3");
    CHECK(custom.code == 0);
}

TEST_CASE("adele testfn reads presets from a config file") {
    const std::string presets = std::string(ADELMARKET_FIXTURE_DIR) + "/testfn_presets.json";
    const CliResult r =
        run_cli("adele testfn --config \"" + presets + "\" --name plane_gaussian --real 0");
    CHECK(r.code == 0);
    CHECK(r.output == "1 + 0i\n");

    const CliResult finite = run_cli("adele testfn --config \"" + presets +
                                     "\" --name restricted_23 --real 0 --finite 2=0,3=0");
    CHECK(finite.code == 0);

    const CliResult missing = run_cli("adele testfn --config \"" + presets +
                                      "\" --name no_such_preset --real 0");
    CHECK(missing.code == 2);
}

TEST_CASE("mg needs a seed and then streams one row per step") {
    CHECK(run_cli("mg --agents 5 --memory 2 --steps 10").code == 1);

    const CliResult r = run_cli("mg --agents 5 --memory 2 --steps 50 --seed 7");
    CHECK(r.code == 0);
    CHECK(r.output.rfind("t,A,price\n", 0) == 0);
    CHECK(std::count(r.output.begin(), r.output.end(), '\n') == 51);

    const CliResult again = run_cli("mg --agents 5 --memory 2 --steps 50 --seed 7");
    CHECK(again.output == r.output);
}

TEST_CASE("mg ohlc output loads back through the strict reader") {
    const fs::path path = scratch_dir() / "mg_prices.csv";
    const CliResult r = run_cli(
        "mg --agents 7 --memory 3 --steps 30 --seed 11 --t-start 1243814400 --dt 86400 "
        "--ohlc " +
        q(path));
    REQUIRE(r.code == 0);
    const adm::PriceSeries series = io::load_csv(path.string());
    CHECK(series.size() == 30);
    CHECK(series.timestamps[0] == 1243814400.0);
    for (double v : series.values) CHECK(v > 0.0);
}

TEST_CASE("the bundled market fixture regenerates byte-identically") {
    const fs::path out = scratch_dir() / "regen.csv";
    const CliResult r = run_cli(
        "mg --agents 11 --memory 3 --steps 256 --seed 20 --t-start 1243814400 --dt 86400 "
        "--lambda 0.01 --out /dev/null --ohlc " +
        q(out));
    REQUIRE(r.code == 0);
    const std::string bundled =
        io::read_file(std::string(ADELMARKET_FIXTURE_DIR) + "/gazprom_synthetic.csv");
    CHECK(io::read_file(out.string()) == bundled);
}

TEST_CASE("mg sweep emits a summary document") {
    const CliResult r = run_cli(
        "mg --agents 5 --memory 2 --steps 200 --seed 1 --sweep-count 3 --burn-in 50");
    CHECK(r.code == 0);
    CHECK(r.output.find("\"runs\"") != std::string::npos);
    CHECK(r.output.find("\"mean_sigma2_over_n\"") != std::string::npos);
    CHECK(r.output.find("\"seed\": 3") != std::string::npos);
}

TEST_CASE("fit then forecast round-trips through files") {
    const fs::path prices = wave_price_csv();
    const fs::path fit_json = scratch_dir() / "fit.json";
    const fs::path fit_svg = scratch_dir() / "fit.svg";
    const CliResult fit =
        run_cli("fit --in " + q(prices) + " --primes 2,3 --levels 1,2 --m-set 1 --out " +
                q(fit_json) + " --svg " + q(fit_svg));
    REQUIRE(fit.code == 0);
    const std::string doc = io::read_file(fit_json.string());
    CHECK(doc.find("adelmarket.fit/1") != std::string::npos);
    CHECK(doc.find("\"p\": \"3\"") != std::string::npos);
    CHECK(doc.find("\"level\": 2") != std::string::npos);
    CHECK(io::read_file(fit_svg.string()).rfind("<svg ", 0) == 0);

    const CliResult fc = run_cli("forecast --fit " + q(fit_json) + " --horizon 5 --in " +
                                 q(prices));
    REQUIRE(fc.code == 0);
    CHECK(fc.output.rfind("timestamp,value,is_forecast\n", 0) == 0);
    // 9 history rows flagged 0, then 5 forecast rows flagged 1.
    CHECK(std::count(fc.output.begin(), fc.output.end(), '\n') == 15);
    CHECK(fc.output.find(",0\n") != std::string::npos);
    CHECK(fc.output.find(",1\n") != std::string::npos);
}

TEST_CASE("fit reads grid config files; explicit flags override entries") {
    const fs::path prices = wave_price_csv();
    const fs::path grids = scratch_dir() / "grids.json";
    io::atomic_write_file(grids.string(),
                          "{\"primes\": [\"3\"], \"levels\": [1, 2], \"dims\": [\"8/5\"],"
                          " \"slopes\": [\"1\"], \"intercepts\": [\"0\"], \"m\": [1]}");
    const CliResult fit = run_cli("fit --in " + q(prices) + " --config " + q(grids));
    REQUIRE(fit.code == 0);
    CHECK(fit.output.find("\"p\": \"3\"") != std::string::npos);
    CHECK(fit.output.find("\"level\": 2") != std::string::npos);
    CHECK(fit.output.find("\"dim\": 1.6") != std::string::npos);

    // A flag beats the config entry it shadows: dims comes from --dims here.
    const fs::path narrow = scratch_dir() / "narrow.json";
    io::atomic_write_file(narrow.string(), "{\"dims\": [\"1/1\"]}");
    const CliResult shadowed = run_cli("fit --in " + q(prices) + " --config " + q(narrow) +
                                       " --dims 8/5 --primes 3 --levels 2 --c-set 1 --b-set 0");
    REQUIRE(shadowed.code == 0);
    CHECK(shadowed.output.find("\"dim\": 1.6") != std::string::npos);

    const fs::path broken = scratch_dir() / "broken.json";
    io::atomic_write_file(broken.string(), "not json");
    CHECK(run_cli("fit --in " + q(prices) + " --config " + q(broken)).code == 2);

    const fs::path unknown = scratch_dir() / "unknown_key.json";
    io::atomic_write_file(unknown.string(), "{\"frobs\": [1]}");
    const CliResult rejected = run_cli("fit --in " + q(prices) + " --config " + q(unknown));
    CHECK(rejected.code == 2);
    CHECK(rejected.output.find("frobs") != std::string::npos);

    CHECK(run_cli("fit --in " + q(prices) + " --config " +
                  q(scratch_dir() / "no_such_config.json"))
              .code == 2);
}

TEST_CASE("usage, data, and domain failures use distinct exit codes") {
    CHECK(run_cli("gen --p 4").code == 3);               // composite base
    CHECK(run_cli("gen --dim 0").code == 3);             // invalid dimension
    CHECK(run_cli("padic norm --x abc --p 2").code == 2);// unparseable rational
    CHECK(run_cli("padic valuation --x 0 --p 3").code == 3);
    CHECK(run_cli("mg --steps 10 --seed 1 --history weird").code == 2);

    const fs::path missing = scratch_dir() / "no_such_file.csv";
    CHECK(run_cli("fit --in " + q(missing)).code == 2);

    const fs::path malformed = scratch_dir() / "malformed.csv";
    io::atomic_write_file(malformed.string(), "not,a,price,file\n1,2,3,4\n");
    CHECK(run_cli("fit --in " + q(malformed)).code == 2);

    const fs::path garbage = scratch_dir() / "garbage.json";
    io::atomic_write_file(garbage.string(), "{\"schema\": \"wrong\"}");
    CHECK(run_cli("forecast --fit " + q(garbage) + " --horizon 3").code == 2);

    const fs::path prices = wave_price_csv();
    const fs::path fit_json = scratch_dir() / "fit_for_errors.json";
    REQUIRE(run_cli("fit --in " + q(prices) + " --primes 3 --levels 2 --out " +
                    q(fit_json))
                .code == 0);
    CHECK(run_cli("forecast --fit " + q(fit_json) + " --horizon 0").code == 3);
}

// Command-line front end: wave generation, series fitting and forecasting,
// minority-game simulation, and exact p-adic/adelic calculators.
//
// Exit codes: 0 success, 1 usage, 2 bad input data, 3 numerical failure.

#include "adelmarket/adele.hpp"
#include "adelmarket/csv.hpp"
#include "adelmarket/market_fit.hpp"
#include "adelmarket/minority_game.hpp"
#include "adelmarket/padic.hpp"
#include "adelmarket/svg.hpp"
#include "adelmarket/waves.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace {

using adm::BigInt;
using adm::PriceSeries;
using adm::Rational;

BigInt parse_bigint(const std::string& text) {
    try {
        return BigInt(text);
    } catch (const std::exception&) {
        throw std::invalid_argument("not an integer: '" + text + "'");
    }
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) {
        if (!item.empty()) parts.push_back(item);
    }
    return parts;
}

std::string complex_str(const std::complex<double>& z) {
    std::string out = adm::io::format_double(z.real());
    out += z.imag() < 0 ? " - " : " + ";
    out += adm::io::format_double(std::fabs(z.imag()));
    out += "i";
    return out;
}

void emit(const std::string& content, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << content;
    } else {
        adm::io::atomic_write_file(out_path, content);
    }
}

// ---- gen ----------------------------------------------------------------

struct GenOptions {
    std::string p = "3";
    int level = 1;
    double dim = 1.0;
    std::string c = "1";
    std::string b = "0";
    std::string kind = "digit-power";
    int monomial = 1;
    double t0 = 0.0, t1 = 1.0;
    double y0 = 0.0, y_scale = 1.0;
    std::string out;
    std::string svg;
};

void run_gen(const GenOptions& opt) {
    adm::waves::WaveSpec spec;
    spec.p = parse_bigint(opt.p);
    spec.level = opt.level;
    spec.fractal_dim = opt.dim;
    spec.slope = parse_bigint(opt.c);
    spec.intercept = parse_bigint(opt.b);
    spec.map_kind = adm::waves::map_kind_from_string(opt.kind);
    spec.monomial_degree = opt.monomial;
    spec.t0 = opt.t0;
    spec.t1 = opt.t1;
    spec.y0 = opt.y0;
    spec.y_scale = opt.y_scale;
    spec.validate();

    const adm::waves::WaveCurve curve = adm::waves::generate(spec);
    emit(adm::io::wave_csv(curve), opt.out);
    if (!opt.svg.empty()) {
        adm::svg::PlotSpec plot;
        plot.title = "p=" + spec.p.str() + " L=" + std::to_string(spec.level) +
                     " D=" + adm::io::format_double(spec.fractal_dim);
        adm::svg::PlotSeries series;
        series.x = curve.t;
        series.y = curve.y;
        series.label = "wave";
        plot.series.push_back(std::move(series));
        adm::svg::write_svg(plot, opt.svg);
    }
}

// ---- fit ----------------------------------------------------------------

struct FitOptions {
    std::string in;
    std::string column = "close";
    std::string config;
    std::string primes;
    std::string levels;
    std::string dims;
    std::string kinds;
    std::string c_set;
    std::string b_set;
    std::string m_set;
    double refine_tol = 1e-3;
    bool refine_tol_given = false;
    bool log_values = false;
    std::string out;
    std::string svg;
};

// Structured grid config: a JSON object whose keys mirror the fit flags.
// Integer-valued entries are strings so slopes like "1000003" stay exact.
void apply_fit_config_file(adm::fit::FitConfig& cfg, const std::string& path) {
    const nlohmann::json doc = nlohmann::json::parse(adm::io::read_file(path));
    if (!doc.is_object()) throw std::invalid_argument("fit config must be a JSON object");
    for (const auto& [key, value] : doc.items()) {
        if (key == "primes") {
            cfg.primes.clear();
            for (const auto& s : value) cfg.primes.push_back(parse_bigint(s.get<std::string>()));
        } else if (key == "levels") {
            cfg.levels = value.get<std::vector<int>>();
        } else if (key == "dims") {
            cfg.dim_grid.clear();
            for (const auto& s : value) {
                cfg.dim_grid.push_back(adm::parse_rational(s.get<std::string>()));
            }
        } else if (key == "kinds") {
            cfg.kinds.clear();
            for (const auto& s : value) {
                cfg.kinds.push_back(adm::waves::map_kind_from_string(s.get<std::string>()));
            }
        } else if (key == "slopes") {
            cfg.slopes.clear();
            for (const auto& s : value) cfg.slopes.push_back(parse_bigint(s.get<std::string>()));
        } else if (key == "intercepts") {
            cfg.intercepts.clear();
            for (const auto& s : value) {
                cfg.intercepts.push_back(parse_bigint(s.get<std::string>()));
            }
        } else if (key == "m") {
            cfg.monomial_degrees = value.get<std::vector<int>>();
        } else if (key == "refine_tol") {
            cfg.refine_tol = value.get<double>();
        } else if (key == "log_values") {
            cfg.log_values = value.get<bool>();
        } else {
            throw std::invalid_argument("unknown fit config key: '" + key + "'");
        }
    }
}

adm::fit::FitConfig build_fit_config(const FitOptions& opt) {
    adm::fit::FitConfig cfg;
    if (!opt.config.empty()) apply_fit_config_file(cfg, opt.config);
    if (!opt.primes.empty()) {
        cfg.primes.clear();
        for (const std::string& s : split_list(opt.primes)) cfg.primes.push_back(parse_bigint(s));
    }
    if (!opt.levels.empty()) {
        cfg.levels.clear();
        for (const std::string& s : split_list(opt.levels)) cfg.levels.push_back(std::stoi(s));
    }
    if (!opt.dims.empty()) {
        cfg.dim_grid.clear();
        for (const std::string& s : split_list(opt.dims)) {
            cfg.dim_grid.push_back(adm::parse_rational(s));
        }
    }
    if (!opt.kinds.empty()) {
        cfg.kinds.clear();
        for (const std::string& s : split_list(opt.kinds)) {
            cfg.kinds.push_back(adm::waves::map_kind_from_string(s));
        }
    }
    if (!opt.c_set.empty()) {
        cfg.slopes.clear();
        for (const std::string& s : split_list(opt.c_set)) cfg.slopes.push_back(parse_bigint(s));
    }
    if (!opt.b_set.empty()) {
        cfg.intercepts.clear();
        for (const std::string& s : split_list(opt.b_set)) {
            cfg.intercepts.push_back(parse_bigint(s));
        }
    }
    if (!opt.m_set.empty()) {
        cfg.monomial_degrees.clear();
        for (const std::string& s : split_list(opt.m_set)) {
            cfg.monomial_degrees.push_back(std::stoi(s));
        }
    }
    if (opt.refine_tol_given) cfg.refine_tol = opt.refine_tol;
    if (opt.log_values) cfg.log_values = true;
    return cfg;
}

std::vector<double> fitted_overlay_values(const adm::fit::FitResult& result) {
    const adm::waves::WaveCurve curve = adm::waves::generate(result.best);
    std::vector<double> y = curve.y;
    if (result.log_values) {
        for (double& v : y) v = std::exp(v);
    }
    return y;
}

void run_fit(const FitOptions& opt) {
    const std::string raw = adm::io::read_file(opt.in);
    const PriceSeries series = adm::io::load_csv(opt.in, opt.column);
    const adm::fit::FitConfig cfg = build_fit_config(opt);
    const adm::fit::FitResult result = adm::fit::fit(series, cfg, adm::io::fnv1a64_hex(raw));
    emit(adm::fit::to_json(result), opt.out);
    if (result.degenerate) {
        std::cerr << "warning: constant input; wave amplitude pinned to zero\n";
    }
    if (!opt.svg.empty()) {
        const adm::waves::WaveCurve curve = adm::waves::generate(result.best);
        adm::svg::PlotSpec plot;
        plot.title = "fit rmse=" + adm::io::format_double(result.rmse);
        adm::svg::PlotSeries data;
        data.x = series.timestamps;
        data.y = series.values;
        data.label = series.label;
        plot.series.push_back(std::move(data));
        adm::svg::PlotSeries wave;
        wave.x = curve.t;
        wave.y = fitted_overlay_values(result);
        wave.label = "fitted wave";
        plot.series.push_back(std::move(wave));
        adm::svg::write_svg(plot, opt.svg);
    }
}

// ---- forecast -----------------------------------------------------------

struct ForecastOptions {
    std::string fit_path;
    long horizon = 1;
    std::string in;
    std::string column = "close";
    std::string out;
    std::string svg;
};

void run_forecast(const ForecastOptions& opt) {
    const adm::fit::FitResult fitted =
        adm::fit::fit_result_from_json(adm::io::read_file(opt.fit_path));
    const PriceSeries ahead = adm::fit::forecast(fitted, opt.horizon);
    PriceSeries history;
    if (!opt.in.empty()) history = adm::io::load_csv(opt.in, opt.column);
    emit(adm::io::forecast_csv(history, ahead), opt.out);
    if (!opt.svg.empty()) {
        adm::svg::PlotSpec plot;
        plot.title = "forecast horizon=" + std::to_string(opt.horizon);
        if (!opt.in.empty()) {
            adm::svg::PlotSeries data;
            data.x = history.timestamps;
            data.y = history.values;
            data.label = history.label;
            plot.series.push_back(std::move(data));
        }
        adm::svg::PlotSeries fc;
        fc.x = ahead.timestamps;
        fc.y = ahead.values;
        fc.label = "forecast";
        fc.dashed = true;
        plot.series.push_back(std::move(fc));
        adm::svg::write_svg(plot, opt.svg);
    }
}

// ---- mg -----------------------------------------------------------------

struct MgOptions {
    int agents = 11;
    int memory = 3;
    int strategies = 2;
    long steps = 1000;
    std::uint64_t seed = 0;
    std::string history = "endogenous";
    double p0 = 100.0;
    double lambda = 0.01;
    double t_start = 0.0;
    double dt = 1.0;
    std::string out;
    std::string ohlc;
    long sweep_count = 0;
    std::size_t burn_in = 0;
    std::string sweep_out;
};

void run_mg(const MgOptions& opt) {
    adm::mg::MGConfig cfg;
    cfg.agents = opt.agents;
    cfg.memory = opt.memory;
    cfg.strategies = opt.strategies;
    cfg.steps = opt.steps;
    cfg.seed = opt.seed;
    cfg.history = adm::mg::history_mode_from_string(opt.history);
    cfg.validate();

    if (opt.sweep_count > 0) {
        std::vector<std::uint64_t> seeds;
        for (long i = 0; i < opt.sweep_count; ++i) {
            seeds.push_back(opt.seed + static_cast<std::uint64_t>(i));
        }
        const adm::mg::SweepResult sweep = adm::mg::sweep(cfg, seeds, opt.burn_in);
        nlohmann::ordered_json j;
        j["agents"] = cfg.agents;
        j["memory"] = cfg.memory;
        j["strategies"] = cfg.strategies;
        j["steps"] = cfg.steps;
        j["history"] = adm::mg::to_string(cfg.history);
        j["burn_in"] = sweep.burn_in;
        nlohmann::ordered_json runs = nlohmann::ordered_json::array();
        for (const adm::mg::SweepRun& run : sweep.runs) {
            runs.push_back({{"seed", run.seed},
                            {"sigma2_over_n", run.sigma2_over_n},
                            {"mean_attendance", run.mean_attendance}});
        }
        j["runs"] = std::move(runs);
        j["mean_sigma2_over_n"] = sweep.mean_sigma2_over_n;
        emit(j.dump(2) + "\n", opt.sweep_out.empty() ? opt.out : opt.sweep_out);
        return;
    }

    adm::mg::MGState state(cfg);
    state.run(cfg.steps);
    const PriceSeries price = adm::mg::price_from_attendance(
        state.attendance(), opt.p0, opt.lambda, opt.t_start, opt.dt);
    emit(adm::io::attendance_csv(price, state.attendance()), opt.out);
    if (!opt.ohlc.empty()) {
        adm::io::write_ohlc_csv(opt.ohlc, price);
    }
}

// ---- padic --------------------------------------------------------------

void run_padic_expand(const std::string& x, const std::string& p, int digits) {
    const adm::padic::PAdicNumber value =
        adm::padic::expand(adm::parse_rational(x), parse_bigint(p), digits);
    std::cout << value.to_string() << "\n";
}

void run_padic_valuation(const std::string& x, const std::string& p) {
    std::cout << adm::padic::valuation(adm::parse_rational(x), parse_bigint(p)) << "\n";
}

void run_padic_norm(const std::string& x, const std::string& p) {
    const adm::padic::Place place =
        p == "inf" ? adm::padic::Place::real() : adm::padic::Place::finite(parse_bigint(p));
    std::cout << adm::rat_to_string(adm::padic::padic_norm(adm::parse_rational(x), place))
              << "\n";
}

// ---- adele --------------------------------------------------------------

void run_adele_char(const std::string& x, const std::string& primes) {
    std::set<BigInt> support;
    for (const std::string& s : split_list(primes)) support.insert(parse_bigint(s));
    std::cout << complex_str(adm::adele::adele_char(adm::parse_rational(x), support)) << "\n";
}

void run_adele_product(const std::string& x) {
    const adm::padic::ProductFormulaResult result =
        adm::padic::product_formula(adm::parse_rational(x));
    for (const adm::padic::PlaceNorm& f : result.factors) {
        std::cout << f.place.to_string() << ": " << adm::rat_to_string(f.norm) << "\n";
    }
    std::cout << "product: " << adm::rat_to_string(result.product) << "\n";
}

void run_adele_testfn(const std::string& config, const std::string& name, double real_part,
                      const std::string& finite) {
    const adm::adele::TestFunction f = adm::adele::load_test_function_preset(config, name);
    adm::adele::AdelePoint point;
    point.real_component = real_part;
    for (const std::string& entry : split_list(finite)) {
        const std::size_t eq = entry.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("finite component must look like p=a/b: '" + entry + "'");
        }
        point.finite_components[parse_bigint(entry.substr(0, eq))] =
            adm::parse_rational(entry.substr(eq + 1));
    }
    std::cout << complex_str(adm::adele::eval_test_function(f, point)) << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"p-adic wave toolkit: fractal market curves, adelic characters, "
                 "minority-game simulation"};
    app.require_subcommand(1);

    GenOptions gen;
    CLI::App* gen_cmd = app.add_subcommand("gen", "sample a fractal wave to CSV/SVG");
    gen_cmd->add_option("--p", gen.p, "prime base");
    gen_cmd->add_option("--level", gen.level, "digit depth L; p^L samples");
    gen_cmd->add_option("--dim", gen.dim, "fractal dimension D");
    gen_cmd->add_option("--c", gen.c, "slope C of the residue orbit");
    gen_cmd->add_option("--b", gen.b, "intercept B of the residue orbit");
    gen_cmd->add_option("--kind", gen.kind, "digit map: digit-power | scale-power");
    gen_cmd->add_option("--m", gen.monomial, "monomial degree of the orbit");
    gen_cmd->add_option("--t0", gen.t0, "window start");
    gen_cmd->add_option("--t1", gen.t1, "window end");
    gen_cmd->add_option("--y0", gen.y0, "price offset");
    gen_cmd->add_option("--yscale", gen.y_scale, "price scale");
    gen_cmd->add_option("--out", gen.out, "CSV path (stdout when omitted)");
    gen_cmd->add_option("--svg", gen.svg, "also render an SVG chart here");
    gen_cmd->callback([&] { run_gen(gen); });

    FitOptions fit;
    CLI::App* fit_cmd = app.add_subcommand("fit", "fit a wave to a price CSV");
    fit_cmd->add_option("--in", fit.in, "input price CSV")->required();
    fit_cmd->add_option("--column", fit.column, "price column (default close)");
    fit_cmd->add_option("--config", fit.config, "grid config JSON; explicit flags override it");
    fit_cmd->add_option("--primes", fit.primes, "comma list of prime candidates");
    fit_cmd->add_option("--levels", fit.levels, "comma list of level candidates");
    fit_cmd->add_option("--dims", fit.dims, "comma list of exact D candidates (n or n/d)");
    fit_cmd->add_option("--kinds", fit.kinds, "comma list of digit map kinds");
    fit_cmd->add_option("--c-set", fit.c_set, "comma list of slope candidates");
    fit_cmd->add_option("--b-set", fit.b_set, "comma list of intercept candidates");
    fit_cmd->add_option("--m-set", fit.m_set, "comma list of monomial degrees");
    fit_cmd->add_option("--refine-tol", fit.refine_tol, "D refinement tolerance");
    fit_cmd->add_flag("--log", fit.log_values, "fit log(price) instead of price");
    fit_cmd->add_option("--out", fit.out, "result JSON path (stdout when omitted)");
    fit_cmd->add_option("--svg", fit.svg, "render data + fitted wave overlay here");
    fit_cmd->callback([&] {
        fit.refine_tol_given = fit_cmd->count("--refine-tol") > 0;
        run_fit(fit);
    });

    ForecastOptions fc;
    CLI::App* fc_cmd = app.add_subcommand("forecast", "extend a fitted wave past its window");
    fc_cmd->add_option("--fit", fc.fit_path, "fit result JSON")->required();
    fc_cmd->add_option("--horizon", fc.horizon, "steps past the window")->required();
    fc_cmd->add_option("--in", fc.in, "original CSV, to include history rows");
    fc_cmd->add_option("--column", fc.column, "price column of --in");
    fc_cmd->add_option("--out", fc.out, "CSV path (stdout when omitted)");
    fc_cmd->add_option("--svg", fc.svg, "render history + forecast here");
    fc_cmd->callback([&] { run_forecast(fc); });

    MgOptions mg;
    CLI::App* mg_cmd = app.add_subcommand("mg", "minority-game market simulation");
    mg_cmd->add_option("--agents", mg.agents, "trader count N");
    mg_cmd->add_option("--memory", mg.memory, "history bits M");
    mg_cmd->add_option("--strategies", mg.strategies, "strategies per trader");
    mg_cmd->add_option("--steps", mg.steps, "rounds to play");
    mg_cmd->add_option("--seed", mg.seed, "RNG seed")->required();
    mg_cmd->add_option("--history", mg.history, "endogenous | exogenous");
    mg_cmd->add_option("--p0", mg.p0, "initial price");
    mg_cmd->add_option("--lambda", mg.lambda, "log-price impact per unit attendance");
    mg_cmd->add_option("--t-start", mg.t_start, "first timestamp (epoch seconds)");
    mg_cmd->add_option("--dt", mg.dt, "timestamp spacing (seconds)");
    mg_cmd->add_option("--out", mg.out, "t,A,price CSV path (stdout when omitted)");
    mg_cmd->add_option("--ohlc", mg.ohlc, "also write a full price-schema CSV here");
    mg_cmd->add_option("--sweep-count", mg.sweep_count,
                       "run this many consecutive seeds and report volatility JSON");
    mg_cmd->add_option("--burn-in", mg.burn_in, "samples dropped before averaging");
    mg_cmd->add_option("--sweep-out", mg.sweep_out, "sweep JSON path (stdout when omitted)");
    mg_cmd->callback([&] { run_mg(mg); });

    CLI::App* padic_cmd = app.add_subcommand("padic", "exact p-adic calculators");
    padic_cmd->require_subcommand(1);
    struct {
        std::string x, p;
        int digits = 8;
    } pd;
    CLI::App* pd_expand = padic_cmd->add_subcommand("expand", "canonical digit expansion");
    pd_expand->add_option("--x", pd.x, "rational n or n/d")->required();
    pd_expand->add_option("--p", pd.p, "prime")->required();
    pd_expand->add_option("--digits", pd.digits, "digit count");
    pd_expand->callback([&] { run_padic_expand(pd.x, pd.p, pd.digits); });
    CLI::App* pd_norm = padic_cmd->add_subcommand("norm", "|x|_p (or |x| with --p inf)");
    pd_norm->add_option("--x", pd.x, "rational n or n/d")->required();
    pd_norm->add_option("--p", pd.p, "prime, or inf")->required();
    pd_norm->callback([&] { run_padic_norm(pd.x, pd.p); });
    CLI::App* pd_val = padic_cmd->add_subcommand("valuation", "v_p(x)");
    pd_val->add_option("--x", pd.x, "rational n or n/d")->required();
    pd_val->add_option("--p", pd.p, "prime")->required();
    pd_val->callback([&] { run_padic_valuation(pd.x, pd.p); });

    CLI::App* adele_cmd = app.add_subcommand("adele", "adelic character calculators");
    adele_cmd->require_subcommand(1);
    struct {
        std::string x, primes = "2,3,5,7";
        std::string config, name, finite;
        double real_part = 0.0;
    } ad;
    CLI::App* ad_char = adele_cmd->add_subcommand("char", "restricted-product character at x");
    ad_char->add_option("--x", ad.x, "rational n or n/d")->required();
    ad_char->add_option("--primes", ad.primes, "finite places to include");
    ad_char->callback([&] { run_adele_char(ad.x, ad.primes); });
    CLI::App* ad_prod = adele_cmd->add_subcommand("product", "norms of x at every place");
    ad_prod->add_option("--x", ad.x, "rational n or n/d")->required();
    ad_prod->callback([&] { run_adele_product(ad.x); });
    CLI::App* ad_fn = adele_cmd->add_subcommand("testfn", "evaluate a test-function preset");
    ad_fn->add_option("--config", ad.config, "preset JSON file")->required();
    ad_fn->add_option("--name", ad.name, "preset name")->required();
    ad_fn->add_option("--real", ad.real_part, "real component");
    ad_fn->add_option("--finite", ad.finite, "finite components, e.g. 2=1/2,3=5");
    ad_fn->callback([&] { run_adele_testfn(ad.config, ad.name, ad.real_part, ad.finite); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const adm::io::CsvError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

#include "levylap/acceptance.hpp"
#include "levylap/flows.hpp"
#include "levylap/io.hpp"
#include "levylap/transport.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <optional>

#include "CLI11.hpp"

namespace fs = std::filesystem;
using namespace levylap;

namespace {

constexpr double kPi = std::numbers::pi;

struct Options {
    std::string config_path;
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
    double tolerance_scale = 1.0;
    int jobs = 1;
};

/// Loads the config, applies command-line overrides, and parses. The hash
/// embedded in the reports is taken over the resolved document; the output
/// directory is a runtime concern and never changes report bytes.
RunConfig load_run_config(const Options& opt) {
    nlohmann::json doc = load_json_file(opt.config_path);
    if (opt.seed) doc["seed"] = *opt.seed;
    RunConfig cfg = parse_config(doc);
    if (opt.out_dir) cfg.out_dir = *opt.out_dir;
    return cfg;
}

fs::path scenario_dir(const RunConfig& cfg) {
    fs::path dir = fs::path(cfg.out_dir) / cfg.scenario_id;
    fs::create_directories(dir);
    return dir;
}

void stamp(CsvTable& t, const RunConfig& cfg) {
    t.comments.emplace_back("scenario", cfg.scenario_id);
    t.comments.emplace_back("config_hash", cfg.hash);
    t.comments.emplace_back("seed", std::to_string(cfg.seed));
}

void write_outputs(const RunConfig& cfg, const CsvTable& data,
                   nlohmann::json summary) {
    fs::path dir = scenario_dir(cfg);
    summary["scenario"] = cfg.scenario_id;
    summary["config_hash"] = cfg.hash;
    summary["seed"] = cfg.seed;
    write_text_file(dir / "data.csv", to_csv(data));
    write_text_file(dir / "summary.json", summary.dump(2) + "\n");
    write_text_file(dir / "config.json", cfg.raw.dump(2) + "\n");
}

std::vector<double> scenario_t_grid(const RunConfig& cfg) {
    std::vector<double> grid = {0.0, 0.01, 0.05, 0.1, 0.5};
    if (cfg.scenario.contains("t_grid")) {
        grid.clear();
        for (const auto& v : cfg.scenario["t_grid"]) {
            if (!v.is_number())
                throw ConfigError("config /scenario/t_grid: expected numbers");
            grid.push_back(v.get<double>());
        }
    }
    return grid;
}

double scenario_dt(const RunConfig& cfg) {
    return cfg.scenario.contains("dt") ? cfg.scenario["dt"].get<double>()
                                       : 1e-5;
}

// --- subcommands ---

int run_equiv(const Options& opt) {
    RunConfig cfg = load_run_config(opt);
    int n_max = cfg.scenario.contains("n_max")
                    ? cfg.scenario["n_max"].get<int>()
                    : 32;
    double h = cfg.scenario.contains("h") ? cfg.scenario["h"].get<double>()
                                          : 1e-3;
    if (!cfg.scenario.contains("pairs"))
        throw ConfigError("config /scenario/pairs: missing required field");

    double rel = cfg.tolerance("relative", opt.tolerance_scale);
    double abs_tol = cfg.tolerance("absolute", opt.tolerance_scale);

    CsvTable data;
    stamp(data, cfg);
    data.columns = {"pair", "functional", "curve",    "analytic",
                    "cesaro", "residual",  "tolerance", "pass"};
    nlohmann::json results = nlohmann::json::array();
    fs::path dir = scenario_dir(cfg);
    bool all = true;
    int index = 0;
    for (const auto& pair : cfg.scenario["pairs"]) {
        const std::string fn = pair.at("functional").get<std::string>();
        const std::string cn = pair.at("curve").get<std::string>();
        const FunctionalPtr& F = cfg.functional(fn);
        const CurvePtr& c = cfg.curve(cn);
        if (n_max > c->grid_size / 16)
            throw ConfigError(
                "config /scenario/n_max: n_max (" + std::to_string(n_max) +
                ") exceeds grid_size/16 (" +
                std::to_string(c->grid_size / 16) + ") of curve '" + cn +
                "'");
        double analytic = levy_analytic(*F, *c);
        CesaroReport report = levy_cesaro(*F, c, n_max, h);
        double residual = std::abs(report.limit - analytic);
        double bound = std::max(rel * std::abs(analytic), abs_tol);
        bool pass = residual <= bound;
        all = all && pass;

        CsvTable rc = cesaro_csv(report);
        stamp(rc, cfg);
        write_text_file(dir / ("cesaro_" + std::to_string(index) + ".csv"),
                        to_csv(rc));
        data.rows.push_back({std::to_string(index), fn, cn,
                             format_double(analytic),
                             format_double(report.limit),
                             format_double(residual), format_double(bound),
                             pass ? "pass" : "fail"});
        nlohmann::json r = cesaro_summary(report);
        r["functional"] = fn;
        r["curve"] = cn;
        r["analytic"] = analytic;
        r["residual"] = residual;
        r["pass"] = pass;
        results.push_back(std::move(r));
        std::printf("[%s] %s on %s: residual %.3g (bound %.3g)\n",
                    pass ? "pass" : "FAIL", fn.c_str(), cn.c_str(), residual,
                    bound);
        ++index;
    }
    write_outputs(cfg, data, {{"results", results}, {"all_pass", all}});
    return all ? 0 : 1;
}

int run_heat(const Options& opt) {
    RunConfig cfg = load_run_config(opt);
    const FunctionalPtr& F =
        cfg.functional(cfg.scenario.at("functional").get<std::string>());
    const CurvePtr& c = cfg.curve(cfg.scenario.at("curve").get<std::string>());
    std::vector<double> grid = scenario_t_grid(cfg);
    double dt = scenario_dt(cfg);
    double residual_tol = cfg.tolerance("residual", opt.tolerance_scale);

    CsvTable data;
    stamp(data, cfg);
    data.columns = {"t", "value", "residual"};
    bool all = true;
    double worst = 0.0;
    for (double t : grid) {
        double value = eval(*heat_functional(*F, t), *c);
        double residual = levy_heat_residual(*F, *c, t, dt);
        worst = std::max(worst, residual);
        all = all && residual <= residual_tol;
        data.rows.push_back({format_double(t), format_double(value),
                             format_double(residual)});
    }
    auto [limit, rate] = long_time_limit(*F, *c, grid);
    std::string label = "contractible";
    if (c->winding)
        label = "winding (" + std::to_string((*c->winding)[0]) + "," +
                std::to_string((*c->winding)[1]) + ")";
    std::printf("[%s] limit %.12g, rate %.6g, worst residual %.3g\n",
                all ? "pass" : "FAIL", limit, rate, worst);
    write_outputs(cfg, data,
                  {{"limit", limit},
                   {"rate", rate},
                   {"class", label},
                   {"worst_residual", worst},
                   {"all_pass", all}});
    return all ? 0 : 1;
}

int run_eigen(const Options& opt) {
    RunConfig cfg = load_run_config(opt);
    std::vector<ScalarForm> fs;
    std::vector<OneForm> as;
    if (cfg.scenario.contains("scalars"))
        for (const auto& n : cfg.scenario["scalars"]) {
            auto it = cfg.scalars.find(n.get<std::string>());
            if (it == cfg.scalars.end())
                throw ConfigError("config /scenario/scalars: no scalar form "
                                  "named '" +
                                  n.get<std::string>() + "'");
            fs.push_back(it->second);
        }
    if (cfg.scenario.contains("oneforms"))
        for (const auto& n : cfg.scenario["oneforms"])
            as.push_back(cfg.oneform(n.get<std::string>()));
    const CurvePtr& c = cfg.curve(cfg.scenario.at("curve").get<std::string>());
    int n_max = cfg.scenario.contains("n_max")
                    ? cfg.scenario["n_max"].get<int>()
                    : 32;
    double h = cfg.scenario.contains("h") ? cfg.scenario["h"].get<double>()
                                          : 1e-3;

    auto [F, lambda] = build_eigenfunctional(fs, as);
    double value = eval(*F, *c);
    double predicted = lambda * value;
    double analytic = levy_analytic(*F, *c);
    CesaroReport report = levy_cesaro(*F, c, n_max, h);

    double tol_an = cfg.tolerance("analytic", opt.tolerance_scale);
    double tol_ce = cfg.tolerance("cesaro", opt.tolerance_scale);
    bool pass_an = std::abs(analytic - predicted) <= tol_an;
    bool pass_ce = std::abs(report.limit - predicted) <=
                   tol_ce * std::max(std::abs(predicted), 1.0);

    CsvTable data;
    stamp(data, cfg);
    data.columns = {"route", "predicted", "observed", "residual", "pass"};
    data.rows.push_back({"analytic", format_double(predicted),
                         format_double(analytic),
                         format_double(std::abs(analytic - predicted)),
                         pass_an ? "pass" : "fail"});
    data.rows.push_back({"cesaro", format_double(predicted),
                         format_double(report.limit),
                         format_double(std::abs(report.limit - predicted)),
                         pass_ce ? "pass" : "fail"});
    std::printf("[%s] eigenvalue %.9g: analytic residual %.3g, cesaro "
                "residual %.3g\n",
                pass_an && pass_ce ? "pass" : "FAIL", lambda,
                std::abs(analytic - predicted),
                std::abs(report.limit - predicted));
    write_outputs(cfg, data,
                  {{"eigenvalue", lambda},
                   {"value", value},
                   {"analytic", analytic},
                   {"cesaro", report.limit},
                   {"all_pass", pass_an && pass_ce}});
    return pass_an && pass_ce ? 0 : 1;
}

int run_holonomy(const Options& opt) {
    RunConfig cfg = load_run_config(opt);
    if (cfg.manifold->kind() != ManifoldKind::Sphere2)
        throw ConfigError(
            "config /manifold: holonomy scenarios need a sphere");
    int n = cfg.scenario.contains("grid_size")
                ? cfg.scenario["grid_size"].get<int>()
                : 2048;
    std::vector<double> thetas = {kPi / 6.0, kPi / 3.0, kPi / 2.0};
    if (cfg.scenario.contains("theta0")) {
        thetas.clear();
        for (const auto& v : cfg.scenario["theta0"])
            thetas.push_back(v.get<double>());
    }
    double tol = cfg.tolerance("angle", opt.tolerance_scale);

    auto wrap = [](double a) {
        while (a > kPi) a -= 2.0 * kPi;
        while (a <= -kPi) a += 2.0 * kPi;
        return a;
    };
    CsvTable data;
    stamp(data, cfg);
    data.columns = {"theta0", "angle", "gauss_bonnet", "error", "pass"};
    bool all = true;
    for (double theta0 : thetas) {
        CurvePtr c = sphere_latitude(cfg.manifold, n, theta0);
        double angle = rotation_angle(holonomy(*c));
        double defect = wrap(2.0 * kPi * (1.0 - std::cos(theta0)));
        double error = std::abs(wrap(std::abs(angle) - std::abs(defect)));
        bool pass = error <= tol;
        all = all && pass;
        data.rows.push_back({format_double(theta0), format_double(angle),
                             format_double(defect), format_double(error),
                             pass ? "pass" : "fail"});
        std::printf("[%s] theta0 %.6g: angle %.9g vs %.9g (error %.3g)\n",
                    pass ? "pass" : "FAIL", theta0, angle, defect, error);
    }
    write_outputs(cfg, data, {{"all_pass", all}});
    return all ? 0 : 1;
}

int run_ym_u1(const Options& opt) {
    RunConfig cfg = load_run_config(opt);
    const OneForm& a0 =
        cfg.oneform(cfg.scenario.at("form").get<std::string>());
    const CurvePtr& c = cfg.curve(cfg.scenario.at("curve").get<std::string>());
    std::vector<double> grid = scenario_t_grid(cfg);
    double dt = scenario_dt(cfg);
    double tol_theta = cfg.tolerance("theta", opt.tolerance_scale);
    double tol_res = cfg.tolerance("residual", opt.tolerance_scale);

    std::vector<double> residuals = u1_transport_heat_check(a0, *c, grid, dt);
    CsvTable data;
    stamp(data, cfg);
    data.columns = {"t", "theta_ym", "theta_hodge", "difference",
                    "u_residual"};
    bool all = true;
    double worst_diff = 0.0, worst_res = 0.0;
    for (size_t i = 0; i < grid.size(); ++i) {
        double t = grid[i];
        double theta_ym = line_integral(ym_u1_flow(a0, t), *c);
        double theta_hodge = line_integral(heat_propagate(a0, t), *c);
        double diff = std::abs(theta_ym - theta_hodge);
        worst_diff = std::max(worst_diff, diff);
        worst_res = std::max(worst_res, residuals[i]);
        all = all && diff <= tol_theta && residuals[i] <= tol_res;
        data.rows.push_back({format_double(t), format_double(theta_ym),
                             format_double(theta_hodge), format_double(diff),
                             format_double(residuals[i])});
    }
    std::printf("[%s] worst flow difference %.3g, worst U residual %.3g\n",
                all ? "pass" : "FAIL", worst_diff, worst_res);
    write_outputs(cfg, data,
                  {{"worst_difference", worst_diff},
                   {"worst_residual", worst_res},
                   {"all_pass", all}});
    return all ? 0 : 1;
}

int run_selftest() {
    bool all = true;
    for (const auto& r : run_acceptance()) {
        std::printf("criterion %2d [%s] %s (%.2fs) -- %s\n", r.id,
                    r.passed ? "pass" : "FAIL", r.name.c_str(), r.seconds,
                    r.detail.c_str());
        all = all && r.passed;
    }
    return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Levy Laplacian experiment runner"};
    app.require_subcommand(1);

    Options opt;
    auto add_common = [&](CLI::App* sub, bool needs_config) {
        auto* c = sub->add_option("--config", opt.config_path,
                                  "JSON run configuration");
        if (needs_config) c->required();
        sub->add_option("--out", opt.out_dir,
                        "output directory (overrides config)");
        sub->add_option("--seed", opt.seed, "RNG seed (overrides config)");
        sub->add_option("--jobs", opt.jobs, "worker count")
            ->check(CLI::PositiveNumber);
        sub->add_option("--tolerance-scale", opt.tolerance_scale,
                        "uniform tolerance multiplier")
            ->check(CLI::PositiveNumber);
    };

    auto* equiv = app.add_subcommand(
        "equiv", "Cesaro-vs-analytic sweeps over (functional, curve) pairs");
    auto* heat = app.add_subcommand(
        "heat", "heat flow values, long-time limit and heat residuals");
    auto* eigen = app.add_subcommand(
        "eigen", "eigenfunctional identity along both routes");
    auto* holonomy = app.add_subcommand(
        "holonomy", "latitude-loop holonomy vs the Gauss-Bonnet defect");
    auto* ym = app.add_subcommand(
        "ym-u1", "U(1) Yang-Mills flow vs Hodge flow on loops");
    auto* selftest =
        app.add_subcommand("selftest", "full acceptance suite, exit 0 iff "
                                       "all criteria pass");
    for (auto* sub : {equiv, heat, eigen, holonomy, ym})
        add_common(sub, true);
    add_common(selftest, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (equiv->parsed()) return run_equiv(opt);
        if (heat->parsed()) return run_heat(opt);
        if (eigen->parsed()) return run_eigen(opt);
        if (holonomy->parsed()) return run_holonomy(opt);
        if (ym->parsed()) return run_ym_u1(opt);
        return run_selftest();
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::fprintf(stderr, "config: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}

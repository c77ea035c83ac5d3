#include "doctest.h"

#include "levylap/io.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using levylap::load_json_file;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

/// Runs the CLI binary; returns its exit code. Output is captured to files
/// inside `dir`.
int run_cli(const std::string& args, const fs::path& dir) {
    std::string cmd = std::string(LEVYLAP_CLI_PATH) + " " + args + " > " +
                      (dir / "stdout.txt").string() + " 2> " +
                      (dir / "stderr.txt").string();
    int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

fs::path fresh_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / ("levylap_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

nlohmann::json equiv_config(const std::string& id, int n_max = 32) {
    return nlohmann::json::parse(R"({
      "manifold": {"kind": "flat_torus", "periods": [1.0, 1.0]},
      "forms": {
        "a0": {"type": "oneform", "truncation": 8,
               "beta": [{"mode": [1, 0], "cos": -0.15915494309189535}]}
      },
      "curves": {
        "loop": {"kind": "torus_winding", "grid_size": 512,
                 "winding": [0, 1], "base": [0.25, 0.0]},
        "wiggle": {"kind": "torus_winding", "grid_size": 512,
                   "winding": [0, 1], "base": [0.1, 0.3],
                   "perturbation": 0.1, "modes": 2, "seed": 17}
      },
      "functionals": {"theta": {"kind": "theta", "form": "a0"}},
      "scenario": {"id": ")" + id + R"(", "n_max": )" +
                               std::to_string(n_max) + R"(, "h": 1e-3,
                   "pairs": [{"functional": "theta", "curve": "loop"},
                             {"functional": "theta", "curve": "wiggle"}]},
      "tolerances": {"relative": 0.02, "absolute": 0.05},
      "seed": 7
    })");
}

}  // namespace

TEST_CASE("equiv subcommand writes the result layout and passes") {
    fs::path dir = fresh_dir("equiv");
    levylap::write_text_file(dir / "config.json",
                             equiv_config("equiv-demo").dump(2));
    int rc = run_cli("equiv --config " + (dir / "config.json").string() +
                         " --out " + (dir / "out").string(),
                     dir);
    CHECK(rc == 0);
    fs::path scenario = dir / "out" / "equiv-demo";
    CHECK(fs::exists(scenario / "data.csv"));
    CHECK(fs::exists(scenario / "summary.json"));
    CHECK(fs::exists(scenario / "config.json"));
    CHECK(fs::exists(scenario / "cesaro_0.csv"));
    CHECK(fs::exists(scenario / "cesaro_1.csv"));

    // Reports embed the config hash of the resolved document.
    nlohmann::json resolved = load_json_file(scenario / "config.json");
    std::string hash = levylap::config_hash_hex(resolved);
    CHECK(slurp(scenario / "data.csv").find("config_hash: " + hash) !=
          std::string::npos);
    nlohmann::json summary = load_json_file(scenario / "summary.json");
    CHECK(summary["config_hash"] == hash);
    CHECK(summary["all_pass"] == true);
    CHECK(summary["results"].size() == 2);
}

TEST_CASE("identical config and seed give byte-identical outputs") {
    fs::path dir = fresh_dir("determinism");
    levylap::write_text_file(dir / "config.json",
                             equiv_config("det").dump(2));
    for (const std::string run : {"a", "b"})
        CHECK(run_cli("equiv --config " + (dir / "config.json").string() +
                          " --out " + (dir / run).string(),
                      dir) == 0);
    for (const std::string file :
         {"data.csv", "summary.json", "config.json", "cesaro_0.csv"})
        CHECK(slurp(dir / "a" / "det" / file) ==
              slurp(dir / "b" / "det" / file));
}

TEST_CASE("n_max exceeding grid_size/16 is a named validation error") {
    fs::path dir = fresh_dir("guard");
    levylap::write_text_file(dir / "config.json",
                             equiv_config("guard", 64).dump(2));
    int rc = run_cli("equiv --config " + (dir / "config.json").string() +
                         " --out " + (dir / "out").string(),
                     dir);
    CHECK(rc == 2);
    std::string err = slurp(dir / "stderr.txt");
    CHECK(err.find("n_max") != std::string::npos);
    CHECK(err.find("grid_size/16") != std::string::npos);
}

TEST_CASE("heat subcommand reports limit, rate and class") {
    fs::path dir = fresh_dir("heat");
    nlohmann::json doc = equiv_config("heat-demo");
    doc["forms"]["a0"]["harmonic"] = {0.0, 1.0};
    doc["scenario"] = {{"id", "heat-demo"},
                       {"functional", "theta"},
                       {"curve", "loop"},
                       {"t_grid", {0.0, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5}},
                       {"dt", 1e-5}};
    doc["tolerances"] = {{"residual", 1e-6}};
    levylap::write_text_file(dir / "config.json", doc.dump(2));
    int rc = run_cli("heat --config " + (dir / "config.json").string() +
                         " --out " + (dir / "out").string(),
                     dir);
    CHECK(rc == 0);
    nlohmann::json summary =
        load_json_file(dir / "out" / "heat-demo" / "summary.json");
    CHECK(summary["limit"].get<double>() == doctest::Approx(1.0));
    CHECK(summary["rate"].get<double>() ==
          doctest::Approx(-39.478417604357432).epsilon(0.01));
    CHECK(summary["class"] == "winding (0,1)");
}

TEST_CASE("holonomy and ym-u1 subcommands pass on their fixtures") {
    fs::path dir = fresh_dir("misc");
    nlohmann::json hol = nlohmann::json::parse(R"({
      "manifold": {"kind": "sphere2", "radius": 1.0},
      "scenario": {"id": "hol", "grid_size": 2048},
      "tolerances": {"angle": 1e-6}
    })");
    levylap::write_text_file(dir / "hol.json", hol.dump(2));
    CHECK(run_cli("holonomy --config " + (dir / "hol.json").string() +
                      " --out " + (dir / "out").string(),
                  dir) == 0);
    CHECK(fs::exists(dir / "out" / "hol" / "data.csv"));

    nlohmann::json ym = equiv_config("ym");
    ym["forms"]["a0"]["harmonic"] = {0.0, 1.0};
    ym["scenario"] = {{"id", "ym"},
                      {"form", "a0"},
                      {"curve", "loop"},
                      {"t_grid", {0.0, 0.01, 0.1, 0.5}}};
    ym["tolerances"] = {{"theta", 1e-10}, {"residual", 1e-6}};
    levylap::write_text_file(dir / "ym.json", ym.dump(2));
    CHECK(run_cli("ym-u1 --config " + (dir / "ym.json").string() + " --out " +
                      (dir / "out").string(),
                  dir) == 0);
    nlohmann::json summary =
        load_json_file(dir / "out" / "ym" / "summary.json");
    CHECK(summary["worst_difference"].get<double>() <= 1e-10);
}

TEST_CASE("selftest runs the acceptance suite and exits 0") {
    fs::path dir = fresh_dir("selftest");
    CHECK(run_cli("selftest", dir) == 0);
    std::string out = slurp(dir / "stdout.txt");
    CHECK(out.find("criterion 10") != std::string::npos);
    CHECK(out.find("FAIL") == std::string::npos);
}

#include "levylap/io.hpp"

#include "levylap/hodge.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace levylap {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string config_hash_hex(const nlohmann::json& doc) {
    const std::string dump = doc.dump();  // keys already sorted (std::map)
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
    return buf;
}

std::string to_csv(const CsvTable& table) {
    std::ostringstream out;
    for (const auto& [key, value] : table.comments)
        out << "# " << key << ": " << value << "\n";
    for (size_t i = 0; i < table.columns.size(); ++i)
        out << (i ? "," : "") << table.columns[i];
    out << "\n";
    for (const auto& row : table.rows) {
        for (size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << row[i];
        out << "\n";
    }
    return out.str();
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("write_text_file: cannot open " +
                                 path.string());
    out << content;
}

nlohmann::json load_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("config: cannot open file " + path.string());
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config: " + path.string() + ": " + e.what());
    }
}

CsvTable curve_csv(const Curve& c) {
    CsvTable t;
    t.comments.emplace_back("constructor", c.constructor_name);
    t.comments.emplace_back("seed", std::to_string(c.seed));
    t.columns.push_back("tau");
    for (int j = 0; j < c.manifold->ambient_dim(); ++j)
        t.columns.push_back("x" + std::to_string(j));
    for (int i = 0; i <= c.grid_size; ++i) {
        std::vector<std::string> row;
        row.push_back(format_double(c.tau(i)));
        for (int j = 0; j < c.manifold->ambient_dim(); ++j)
            row.push_back(format_double(c.at(i).coords[j]));
        t.rows.push_back(std::move(row));
    }
    return t;
}

nlohmann::json curve_metadata(const Curve& c) {
    nlohmann::json j;
    j["manifold"] = manifold_to_json(c.manifold);
    j["closed"] = c.closed;
    j["grid_size"] = c.grid_size;
    j["constructor"] = c.constructor_name;
    j["seed"] = c.seed;
    if (c.winding) j["winding"] = {(*c.winding)[0], (*c.winding)[1]};
    return j;
}

CsvTable cesaro_csv(const CesaroReport& report) {
    CsvTable t;
    t.comments.emplace_back("h", format_double(report.h));
    t.comments.emplace_back("grid_size", std::to_string(report.grid_size));
    t.columns = {"n", "S_n"};
    for (size_t n = 0; n < report.partial_sums.size(); ++n)
        t.rows.push_back({std::to_string(n + 1),
                          format_double(report.partial_sums[n])});
    return t;
}

nlohmann::json cesaro_summary(const CesaroReport& report) {
    nlohmann::json j;
    j["limit"] = report.limit;
    j["fit_residual"] = report.fit_residual;
    j["h"] = report.h;
    j["grid_size"] = report.grid_size;
    j["n_max"] = report.n_max;
    return j;
}

// --- config parsing ---

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw ConfigError("config " + path + ": " + msg);
}

const nlohmann::json& field(const nlohmann::json& j, const std::string& key,
                            const std::string& path) {
    auto it = j.find(key);
    if (it == j.end()) fail(path + "/" + key, "missing required field");
    return *it;
}

double as_double(const nlohmann::json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

int as_int(const nlohmann::json& j, const std::string& path) {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    return j.get<int>();
}

std::string as_string(const nlohmann::json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
}

Eigen::Vector2d as_vec2(const nlohmann::json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2) fail(path, "expected [x, y]");
    return Eigen::Vector2d(as_double(j[0], path + "[0]"),
                           as_double(j[1], path + "[1]"));
}

ManifoldPtr parse_manifold(const nlohmann::json& j) {
    if (!j.is_object()) fail("/manifold", "expected an object");
    const std::string kind = as_string(field(j, "kind", "/manifold"),
                                       "/manifold/kind");
    if (kind == "euclidean")
        return ManifoldSpec::euclidean(
            as_int(field(j, "dim", "/manifold"), "/manifold/dim"));
    if (kind == "flat_torus")
        return ManifoldSpec::flat_torus(
            as_vec2(field(j, "periods", "/manifold"), "/manifold/periods"));
    if (kind == "sphere2")
        return ManifoldSpec::sphere2(
            as_double(field(j, "radius", "/manifold"), "/manifold/radius"));
    fail("/manifold/kind", "unknown manifold kind '" + kind + "'");
}

ScalarForm parse_scalar_modes(const nlohmann::json& modes,
                              const ManifoldPtr& m, int truncation,
                              const std::string& path) {
    if (!modes.is_array()) fail(path, "expected an array of mode entries");
    ScalarForm f(m, truncation);
    const bool torus = m->kind() != ManifoldKind::Sphere2;
    for (size_t i = 0; i < modes.size(); ++i) {
        const std::string mp = path + "[" + std::to_string(i) + "]";
        const nlohmann::json& entry = modes[i];
        if (!entry.is_object()) fail(mp, "expected an object");
        const nlohmann::json& mode = field(entry, "mode", mp);
        if (!mode.is_array() || mode.size() != 2)
            fail(mp + "/mode", torus ? "expected a wave vector [k1, k2]"
                                     : "expected degree and order [l, m]");
        int a = as_int(mode[0], mp + "/mode[0]");
        int b = as_int(mode[1], mp + "/mode[1]");
        if (torus) {
            bool any = false;
            if (entry.contains("cos")) {
                f.add_cos(a, b, as_double(entry["cos"], mp + "/cos"));
                any = true;
            }
            if (entry.contains("sin")) {
                f.add_sin(a, b, as_double(entry["sin"], mp + "/sin"));
                any = true;
            }
            if (!any) fail(mp, "torus mode entry needs 'cos' and/or 'sin'");
        } else {
            f.add_mode(a, b,
                       as_double(field(entry, "coeff", mp), mp + "/coeff"));
        }
    }
    return f;
}

}  // namespace

const CurvePtr& RunConfig::curve(const std::string& name) const {
    auto it = curves.find(name);
    if (it == curves.end()) fail("/curves", "no curve named '" + name + "'");
    return it->second;
}

const FunctionalPtr& RunConfig::functional(const std::string& name) const {
    auto it = functionals.find(name);
    if (it == functionals.end())
        fail("/functionals", "no functional named '" + name + "'");
    return it->second;
}

const OneForm& RunConfig::oneform(const std::string& name) const {
    auto it = oneforms.find(name);
    if (it == oneforms.end())
        fail("/forms", "no 1-form named '" + name + "'");
    return it->second;
}

double RunConfig::tolerance(const std::string& name, double scale) const {
    auto it = tolerances.find(name);
    if (it == tolerances.end())
        fail("/tolerances", "no tolerance named '" + name + "'");
    return it->second * scale;
}

RunConfig parse_config(const nlohmann::json& doc) {
    if (!doc.is_object()) fail("/", "expected a JSON object");
    RunConfig cfg;
    cfg.raw = doc;
    cfg.hash = config_hash_hex(doc);
    cfg.manifold = parse_manifold(field(doc, "manifold", "/"));

    // forms
    if (doc.contains("forms")) {
        const nlohmann::json& forms = doc["forms"];
        if (!forms.is_object()) fail("/forms", "expected an object");
        for (const auto& [name, fj] : forms.items()) {
            const std::string path = "/forms/" + name;
            if (!fj.is_object()) fail(path, "expected an object");
            const std::string type =
                as_string(field(fj, "type", path), path + "/type");
            int truncation = fj.contains("truncation")
                                 ? as_int(fj["truncation"], path + "/truncation")
                                 : 16;
            if (type == "scalar") {
                cfg.scalars.emplace(
                    name, parse_scalar_modes(field(fj, "modes", path),
                                             cfg.manifold, truncation,
                                             path + "/modes"));
            } else if (type == "oneform") {
                OneForm a = zero_oneform(cfg.manifold, truncation);
                if (fj.contains("alpha"))
                    a.alpha = parse_scalar_modes(fj["alpha"], cfg.manifold,
                                                 truncation, path + "/alpha");
                if (fj.contains("beta"))
                    a.beta = parse_scalar_modes(fj["beta"], cfg.manifold,
                                                truncation, path + "/beta");
                if (fj.contains("harmonic")) {
                    if (cfg.manifold->kind() != ManifoldKind::FlatTorus)
                        fail(path + "/harmonic",
                             "harmonic 1-forms exist only on the torus");
                    a.harmonic = as_vec2(fj["harmonic"], path + "/harmonic");
                }
                cfg.oneforms.emplace(name, std::move(a));
            } else {
                fail(path + "/type", "expected 'scalar' or 'oneform'");
            }
        }
    }

    // curves
    if (doc.contains("curves")) {
        const nlohmann::json& curves = doc["curves"];
        if (!curves.is_object()) fail("/curves", "expected an object");
        for (const auto& [name, cj] : curves.items()) {
            const std::string path = "/curves/" + name;
            if (!cj.is_object()) fail(path, "expected an object");
            const std::string kind =
                as_string(field(cj, "kind", path), path + "/kind");
            int n = as_int(field(cj, "grid_size", path), path + "/grid_size");
            if (n < 2 || (n & (n - 1)) != 0)
                fail(path + "/grid_size", "expected a power of two >= 2");
            try {
                if (kind == "torus_winding") {
                    const nlohmann::json& w = field(cj, "winding", path);
                    if (!w.is_array() || w.size() != 2)
                        fail(path + "/winding", "expected [p, q]");
                    cfg.curves.emplace(
                        name,
                        torus_winding(
                            cfg.manifold, n, as_int(w[0], path + "/winding[0]"),
                            as_int(w[1], path + "/winding[1]"),
                            as_vec2(field(cj, "base", path), path + "/base"),
                            cj.contains("perturbation")
                                ? as_double(cj["perturbation"],
                                            path + "/perturbation")
                                : 0.0,
                            cj.contains("modes")
                                ? as_int(cj["modes"], path + "/modes")
                                : 0,
                            cj.contains("seed")
                                ? static_cast<std::uint64_t>(
                                      as_int(cj["seed"], path + "/seed"))
                                : 0));
                } else if (kind == "sphere_latitude") {
                    cfg.curves.emplace(
                        name, sphere_latitude(cfg.manifold, n,
                                              as_double(field(cj, "theta0",
                                                              path),
                                                        path + "/theta0")));
                } else if (kind == "sphere_perturbed_latitude") {
                    cfg.curves.emplace(
                        name,
                        sphere_perturbed_latitude(
                            cfg.manifold, n,
                            as_double(field(cj, "theta0", path),
                                      path + "/theta0"),
                            as_double(field(cj, "amplitude", path),
                                      path + "/amplitude"),
                            as_int(field(cj, "mode", path), path + "/mode")));
                } else if (kind == "random_smooth_loop") {
                    cfg.curves.emplace(
                        name,
                        random_smooth_loop(
                            cfg.manifold, n,
                            static_cast<std::uint64_t>(
                                as_int(field(cj, "seed", path),
                                       path + "/seed")),
                            as_int(field(cj, "mode_count", path),
                                   path + "/mode_count")));
                } else {
                    fail(path + "/kind", "unknown curve kind '" + kind + "'");
                }
            } catch (const std::invalid_argument& e) {
                fail(path, e.what());
            }
        }
    }

    // functionals (resolved recursively by name, with cycle detection)
    if (doc.contains("functionals")) {
        const nlohmann::json& fns = doc["functionals"];
        if (!fns.is_object()) fail("/functionals", "expected an object");
        std::set<std::string> visiting;
        std::function<const FunctionalPtr&(const std::string&)> resolve =
            [&](const std::string& name) -> const FunctionalPtr& {
            auto done = cfg.functionals.find(name);
            if (done != cfg.functionals.end()) return done->second;
            const std::string path = "/functionals/" + name;
            if (!fns.contains(name)) fail(path, "no functional of this name");
            if (!visiting.insert(name).second)
                fail(path, "cyclic functional definition");
            const nlohmann::json& fj = fns[name];
            if (!fj.is_object()) fail(path, "expected an object");
            const std::string kind =
                as_string(field(fj, "kind", path), path + "/kind");
            FunctionalPtr built;
            try {
                if (kind == "constant") {
                    built = make_constant(
                        as_double(field(fj, "value", path), path + "/value"));
                } else if (kind == "lf" || kind == "theta") {
                    const std::string form = as_string(
                        field(fj, "form", path), path + "/form");
                    if (kind == "lf") {
                        auto it = cfg.scalars.find(form);
                        if (it == cfg.scalars.end())
                            fail(path + "/form",
                                 "no scalar form named '" + form + "'");
                        built = make_lf(it->second);
                    } else {
                        auto it = cfg.oneforms.find(form);
                        if (it == cfg.oneforms.end())
                            fail(path + "/form",
                                 "no 1-form named '" + form + "'");
                        built = make_theta(it->second);
                    }
                } else if (kind == "product" || kind == "compose") {
                    const nlohmann::json& kids = field(fj, "children", path);
                    if (!kids.is_array())
                        fail(path + "/children", "expected an array of names");
                    std::vector<FunctionalPtr> children;
                    for (size_t i = 0; i < kids.size(); ++i)
                        children.push_back(resolve(as_string(
                            kids[i],
                            path + "/children[" + std::to_string(i) + "]")));
                    if (kind == "product") {
                        built = make_product(std::move(children));
                    } else {
                        built = make_compose(
                            as_string(field(fj, "map", path), path + "/map"),
                            std::move(children));
                    }
                } else {
                    fail(path + "/kind",
                         "unknown functional kind '" + kind + "'");
                }
            } catch (const std::invalid_argument& e) {
                fail(path, e.what());
            }
            visiting.erase(name);
            return cfg.functionals.emplace(name, std::move(built))
                .first->second;
        };
        for (const auto& [name, fj] : fns.items()) resolve(name);
    }

    // scenario / tolerances / seed / output
    const nlohmann::json& scenario = field(doc, "scenario", "/");
    if (!scenario.is_object()) fail("/scenario", "expected an object");
    cfg.scenario = scenario;
    cfg.scenario_id =
        as_string(field(scenario, "id", "/scenario"), "/scenario/id");
    if (cfg.scenario_id.empty() ||
        cfg.scenario_id.find_first_of("/\\ ") != std::string::npos)
        fail("/scenario/id", "must be a nonempty path-safe token");

    if (doc.contains("tolerances")) {
        const nlohmann::json& tols = doc["tolerances"];
        if (!tols.is_object()) fail("/tolerances", "expected an object");
        for (const auto& [name, v] : tols.items())
            cfg.tolerances.emplace(name,
                                   as_double(v, "/tolerances/" + name));
    }
    if (doc.contains("seed")) {
        if (!doc["seed"].is_number_unsigned() && !doc["seed"].is_number_integer())
            fail("/seed", "expected an unsigned integer");
        cfg.seed = doc["seed"].get<std::uint64_t>();
    }
    if (doc.contains("output")) {
        const nlohmann::json& out = doc["output"];
        if (!out.is_object()) fail("/output", "expected an object");
        if (out.contains("dir"))
            cfg.out_dir = as_string(out["dir"], "/output/dir");
    }
    return cfg;
}

}  // namespace levylap

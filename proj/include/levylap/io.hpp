#pragma once

#include "levylap/functionals.hpp"
#include "levylap/levy.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace levylap {

/// Configuration / schema violation, with a path-to-field in the message.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Locale-independent decimal rendering with round-trip precision.
std::string format_double(double x);

/// FNV-1a 64-bit hash (hex) of the compact sorted-key dump of a document;
/// embedded in every report header for traceability.
std::string config_hash_hex(const nlohmann::json& doc);

/// In-memory CSV: "# key: value" comment header, column names, string rows.
struct CsvTable {
    std::vector<std::pair<std::string, std::string>> comments;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

std::string to_csv(const CsvTable& table);
void write_text_file(const std::filesystem::path& path,
                     const std::string& content);
nlohmann::json load_json_file(const std::filesystem::path& path);

/// Curve samples as (tau, ambient coordinates); the sidecar metadata record
/// carries the manifold, closedness, grid size, constructor and seed.
CsvTable curve_csv(const Curve& c);
nlohmann::json curve_metadata(const Curve& c);

CsvTable cesaro_csv(const CesaroReport& report);
nlohmann::json cesaro_summary(const CesaroReport& report);

/// A parsed and validated run configuration: one JSON document with the
/// sections manifold, forms, curves, functionals, scenario, tolerances and
/// output (see README for the schema).
struct RunConfig {
    nlohmann::json raw;  // the resolved document, copied into result dirs
    std::string hash;

    ManifoldPtr manifold;
    std::map<std::string, ScalarForm> scalars;
    std::map<std::string, OneForm> oneforms;
    std::map<std::string, CurvePtr> curves;
    std::map<std::string, FunctionalPtr> functionals;

    std::string scenario_id;
    nlohmann::json scenario;
    std::map<std::string, double> tolerances;
    std::uint64_t seed = 0;
    std::string out_dir = "out";

    const CurvePtr& curve(const std::string& name) const;
    const FunctionalPtr& functional(const std::string& name) const;
    const OneForm& oneform(const std::string& name) const;
    double tolerance(const std::string& name, double scale = 1.0) const;
};

/// Validates the document and builds every declared object; throws
/// ConfigError naming the offending field on schema violations.
RunConfig parse_config(const nlohmann::json& doc);

}  // namespace levylap

#pragma once

// Scenario runner and report bundle: one JSON document plus plot-ready CSV
// tables (bands, lrg, spectrum, projector).

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "blockspec/config.hpp"

namespace blockspec {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

struct ReportBundle {
  nlohmann::ordered_json doc;
  std::map<std::string, CsvTable> tables;  ///< keyed by file stem
};

/// Deterministic for a given config; `threads` only changes wall time.
/// Errors from optional stages are recorded under "errors"; errors that leave
/// nothing to report propagate with their kind.
ReportBundle run_scenario(const ScenarioConfig& c);

struct EmitOptions {
  bool json = true;
  bool csv = true;
};

/// Writes report.json and <stem>.csv into `out_dir` (created if needed),
/// each through a temporary file and rename. Throws IoError.
void emit(const ReportBundle& b, const std::string& out_dir, const EmitOptions& opts = {});

/// Shortest round-trip decimal; integral values keep a ".0"; "inf", "-inf", "nan".
std::string csv_number(double x);
std::string csv_text(const CsvTable& t);

/// Throws IoError or ParseError.
nlohmann::ordered_json load_bundle(const std::string& path);
/// name -> pass, from the "verdicts" object of a bundle.
std::map<std::string, bool> bundle_verdicts(const nlohmann::ordered_json& doc);

}  // namespace blockspec

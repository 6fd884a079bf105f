#pragma once

// The acceptance suite at canonical parameters, one entry per criterion.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace blockspec {

struct CriterionResult {
  int id = 0;
  std::string name;
  std::vector<std::string> tags;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct VerifyOptions {
  /// Criterion id, name or tag; empty runs everything.
  std::string filter;
  /// Overrides the band tolerance of the band-fill and gap criteria.
  std::optional<double> band_tol;
  unsigned threads = 1;
  std::uint64_t seed = 20240601;
};

struct CriterionInfo {
  int id;
  const char* name;
  std::vector<std::string> tags;
};

const std::vector<CriterionInfo>& criteria();

bool matches_filter(const CriterionInfo& c, const std::string& filter);

/// Runs the selected criteria in order; failures are results, not exceptions.
std::vector<CriterionResult> verify_all(const VerifyOptions& opts = {});

}  // namespace blockspec

#pragma once

#include <cstdint>
#include <filesystem>
#include <json.hpp>
#include <string>
#include <vector>

#include "walkharm/verify.hpp"

namespace walkharm {

using Json = nlohmann::ordered_json;

struct AnalysisOptions {
  double tol = kDefaultTolerance;
  bool exact = true;
  int max_power = 64;
  std::uint64_t seed = 0;
};

// Tasks always run in this order, whatever order the config lists them in.
const std::vector<std::string>& task_order();

struct AnalysisConfig {
  GroupSpec group;
  // Raw entries; element text is resolved against the built group.
  Json measure;
  std::vector<std::string> tasks;  // canonical order, no duplicates
  AnalysisOptions options;
};

// Throws ValidationError whose message starts with the offending field
// ("group", "measure", "tasks", "options.tol", ...).
GroupSpec parse_group_spec(const Json& j, const std::string& field = "group");
Json group_spec_to_json(const GroupSpec& spec);
AnalysisConfig parse_config(const Json& j);
Json config_to_json(const AnalysisConfig& config);

// Weights given as strings are rationals ("1/2"), numbers are floats; a
// measure may not mix the two.
bool measure_is_rational(const Json& entries);
RationalMeasure parse_rational_measure(const GroupPtr& group, const Json& entries);
RealMeasure parse_real_measure(const GroupPtr& group, const Json& entries);

struct AnalysisResult {
  Json report;
  // Plot-ready tables, empty when the producing task did not run.
  std::string eigenvalues_csv;
  std::string decay_csv;
};

// Runs the configured tasks. ValidationError for input problems (including
// capability gates such as spectrum on a truncated group), ComputationError
// when a computation cannot be certified.
AnalysisResult run_analysis(const AnalysisConfig& config);

Json to_json(const VerificationReport& report, std::uint64_t seed);
Json to_json(const SpectralReport& report);

// Writes the CSV side outputs that are non-empty into `dir` (created if
// missing).
void write_csv(const AnalysisResult& result, const std::filesystem::path& dir);

}  // namespace walkharm

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dualpredict/process_models.hpp"

namespace dualpredict::cli {

inline constexpr const char* kSchema = "dualpredict/1";

enum class Command { predict, interpolate, dual, converge, verify };
enum class Format { json, csv };

enum ExitCode : int {
  kOk = 0,
  kValidationFailure = 1,
  kConvergenceFailure = 2,
  kVerificationFailure = 3,
};

struct RunConfig {
  Command command = Command::predict;
  std::string model_path;
  long m = 16;
  long n = 0;
  std::vector<long> missing;
  long target = 0;
  std::optional<std::string> out;
  Format format = Format::json;
  std::uint64_t seed = 42;
  std::optional<double> tolerance;
  // converge
  std::string problem = "nakazi";
  long u = 1;
  // verify
  std::size_t instances = 1000;
  // dual: (i, j) pairs; empty means the whole matrix.
  std::vector<std::pair<long, long>> pairs;
};

struct RunOutcome {
  int exit_code = kOk;
  std::string artifact;
};

/// Parses a model document. Field errors name the offending field.
[[nodiscard]] ProcessModel parse_model(const nlohmann::ordered_json& doc);
/// Reads and parses a model file; JSON syntax errors carry line and column.
[[nodiscard]] ProcessModel load_model(const std::string& path);
/// Canonical JSON form of a model, echoed into reports.
[[nodiscard]] nlohmann::ordered_json model_to_json(const ProcessModel& model);

/// JSON text with every floating-point value printed to 17 significant digits.
[[nodiscard]] std::string render_json(const nlohmann::ordered_json& doc);
/// Long-format CSV (section,index,re,im) of a report.
[[nodiscard]] std::string render_csv(const nlohmann::ordered_json& report);

/// Builds the report for `config`; numerical outcomes set the exit code,
/// validation errors propagate as exceptions.
[[nodiscard]] nlohmann::ordered_json build_report(const RunConfig& config, int& exit_code);

/// Runs a configuration end to end and renders the artifact. Never throws.
[[nodiscard]] RunOutcome run(const RunConfig& config);

/// Command-line entry point.
int main(int argc, char** argv);

}  // namespace dualpredict::cli

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "ppext/report.hpp"

namespace ppext::cli {

using json = nlohmann::ordered_json;

// Everything needed to reproduce one run. Unset numeric fields are -1 and
// take per-command defaults in resolve().
struct ExperimentConfig {
  std::string command;  // "levels", "verify lemma-max", "demo interval", ...
  std::string alpha = "2";
  std::string ell1 = "1/4";

  long n = -1;  // degree N (node count for "nodes")
  long n_min = -1;
  long n_max = -1;
  std::vector<long> n_list;
  int s_min = -1;
  int s_max = -1;
  std::vector<int> p_list;
  std::vector<int> q_list;
  std::vector<int> w_list;
  int r = -1;

  int depth = -1;         // explicit depth for levels
  int depth_offset = 2;   // grid Y_{s+depth_offset}
  long headroom = 128;    // guard bits over the exact level widths
  int samples = -1;

  std::string function = "exp";
  int n_tail = 24;
  std::string eps = "1e-4";
  std::string delta = "1/50";
  std::vector<std::string> x;  // extend: evaluation points
  std::uint64_t seed = 1;

  std::string reports_path = "reports.json";
  std::string summary_path = "summary.csv";
  std::string terms_path;  // optional per-term CSV
  int jobs = 1;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

json to_json(const ExperimentConfig& c);
// Throws ConfigError on unknown keys or wrong types.
ExperimentConfig config_from_json(const json& j);

// Canonical rationals and per-command defaults; throws ConfigError.
ExperimentConfig resolve(ExperimentConfig c);

const std::vector<std::string>& commands();
// One-line description naming the checked statement.
std::string describe_command(const std::string& command);

json report_to_json(const Report& r, const ExperimentConfig& c);
std::string reports_document(const std::vector<Report>& reports, const ExperimentConfig& c);
std::string summary_csv(const std::vector<Report>& reports);
std::string terms_csv(const std::vector<Report>& reports);

// Runs the command; reports come back in a fixed order independent of
// the number of worker threads.
std::vector<Report> execute(const ExperimentConfig& c);

enum ExitCode : int {
  kOk = 0,
  kChecksFailed = 1,
  kConfigError = 2,
  kHypothesisViolation = 3,
  kPrecisionBudget = 4,
  kOtherError = 5,
};

// execute + atomic writes + exit code; errors are printed to stderr.
int run(const ExperimentConfig& c);

// tmp file + rename
void write_atomic(const std::string& path, const std::string& content);

}  // namespace ppext::cli

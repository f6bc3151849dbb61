#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "opnorm/io.hpp"

namespace opnorm::harness {

inline constexpr const char* kSuiteVersion = "1";

enum class Status { Pass, Fail, ReportedOnly };

const char* to_string(Status s);

struct CheckResult {
  std::string check_id;
  std::string claim;
  std::vector<double> computed;
  std::optional<double> expected_lower;  // unbounded when empty
  std::optional<double> expected_upper;
  double tolerance = 0.0;
  Status status = Status::Fail;
  long runtime_ms = 0;
  std::uint64_t seed = 0;
  bool converged = true;
  std::string note;
};

struct SuiteConfig {
  std::uint64_t seed = 0;
  int restarts = 6;
  int iters = 600;
  int commutant_samples = 24;
  int block_samples = 12;
  int pairing_samples = 6;
  int cb_restarts = 3;
  int cb_iters = 250;
  int corpus_size = 50;
  int quadruples = 20;
  std::vector<int> dims{2, 3};
  int threads = 1;
  std::string output_path;  // empty: no file written
  std::string format = "json";

  /// Throws InvalidInput. Zero restarts are accepted and show up as failing checks.
  void validate() const;
};

/// Runs every check in a fixed order.
std::vector<CheckResult> run_suite(const SuiteConfig& config);

/// Pass iff every computed value lies in [lower - tol, upper + tol] and the
/// optimizers converged; reported-only rows are left as they are.
void grade(CheckResult& r);

bool gating_failed(const std::vector<CheckResult>& results);

io::Json report_json(const SuiteConfig& config, const std::vector<CheckResult>& results);
std::string report_markdown(const SuiteConfig& config, const std::vector<CheckResult>& results);

/// Formats the report in config.format and writes it to config.output_path
/// when set. Returns the text.
std::string write_report(const SuiteConfig& config, const std::vector<CheckResult>& results);

}  // namespace opnorm::harness

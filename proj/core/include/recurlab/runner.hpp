#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "recurlab/config.hpp"

namespace recur {

/// Command-line overrides of the [run] section.
struct RunOptions {
  std::filesystem::path out = "recurlab-out";
  std::optional<std::size_t> workers;
  std::optional<Precision> precision;
  std::optional<std::uint64_t> seed;
};

struct SummaryRow {
  std::string kind;
  std::string suite;
  std::string name;
  /// Done or Failed for experiments, Pass, Fail or Skipped for checks.
  std::string status;
  std::string detail;
};

struct RunSummary {
  std::vector<SummaryRow> rows;

  bool any_failure() const;
  /// Tab-separated, header first.
  std::string table() const;
};

/// Runs every experiment and check on a worker pool and writes the results
/// under options.out. File contents depend only on (config, seed, precision).
RunSummary run(const RunConfig& config, const RunOptions& options);

/// Kind, parameters, space and construction of an operator literal; matrices
/// also get their spectrum and the recurrence criterion.
std::string describe_literal(std::string_view literal);

}  // namespace recur

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "recurlab/verify.hpp"

namespace recur {

/// One `key = value` line.
struct ConfigEntry {
  std::string key;
  std::string value;
  int line = 0;
  /// Column of the first character of the value.
  int column = 0;
};

/// `[kind name]` followed by its entries.
struct ConfigSection {
  std::string kind;
  std::string name;
  int line = 0;
  std::vector<ConfigEntry> entries;

  const ConfigEntry* find(std::string_view key) const;
  std::vector<const ConfigEntry*> all(std::string_view key) const;
};

/// INI-like text: `#` comments, `[kind name]` headers, `key = value` lines.
/// Keys may repeat (e.g. several `vector =` lines).
std::vector<ConfigSection> parse_sections(std::string_view text);

struct Precision {
  bool exact = true;
  /// Significant digits of floating values in written files.
  int digits = 17;

  /// `exact` or `float:<digits>`.
  static Precision parse(std::string_view text);
  std::string to_string() const;
};

struct ExperimentSpec {
  std::string name;
  int line = 0;
  OperatorPtr op;
  std::vector<StateVector> vectors;
  SweepSettings settings;
  bool seed_given = false;
  /// Seminorm index for a growth curve.
  std::optional<std::uint64_t> growth;
  /// Delta for the block-cycle reiterative refutation.
  std::optional<double> refute_delta;
};

struct RunContext {
  std::uint64_t seed = 0;
  Precision precision;
};

struct CheckSpec {
  std::string name;
  std::string kind;
  std::string suite;
  int line = 0;
  std::function<CheckOutcome(const RunContext&)> run;
};

struct RunConfig {
  std::uint64_t seed = 0;
  Precision precision;
  std::optional<std::size_t> workers;
  std::vector<ExperimentSpec> experiments;
  std::vector<CheckSpec> checks;

  static RunConfig parse(std::string_view text);
  static RunConfig load(const std::filesystem::path& path);
};

/// The check kinds a config may name.
const std::vector<std::string>& check_kinds();

}  // namespace recur

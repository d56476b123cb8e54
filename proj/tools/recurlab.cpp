#include <CLI11.hpp>
#include <cstdio>
#include <iostream>

#include "recurlab/error.hpp"
#include "recurlab/runner.hpp"

namespace {

constexpr int kConfigError = 2;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"recurlab: recurrence experiments for linear operators"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "recurlab-out";
  std::optional<std::size_t> workers;
  std::optional<std::string> precision;
  std::optional<std::uint64_t> seed;
  auto* run = app.add_subcommand("run", "run the experiments and checks of a config file");
  run->add_option("config", config_path, "config file")->required();
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--workers", workers, "worker threads");
  run->add_option("--precision", precision, "exact or float:<digits>");
  run->add_option("--seed", seed, "seed for every section without its own");

  std::string literal;
  auto* describe = app.add_subcommand("describe", "explain an operator literal");
  describe->add_option("literal", literal, "operator literal, e.g. 'matrix([[0,-1],[1,0]])'")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    if (*describe) {
      std::cout << recur::describe_literal(literal);
      return 0;
    }
    recur::RunOptions options;
    options.out = out_dir;
    options.workers = workers;
    options.seed = seed;
    if (precision) options.precision = recur::Precision::parse(*precision);
    const auto config = recur::RunConfig::load(config_path);
    const auto summary = recur::run(config, options);
    std::cout << summary.table();
    return summary.any_failure() ? 1 : 0;
  } catch (const recur::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  }
}

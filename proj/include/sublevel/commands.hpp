#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sublevel/io.hpp"

namespace sublevel {

/// Everything a command needs. Unused fields are ignored by commands that
/// do not read them; all defaults are serialized so a dumped config replays
/// the same run.
struct AnalysisConfig {
  std::string poly;
  Json domain = Json::object();
  std::uint64_t seed = 0;
  std::string method = "montecarlo";  // or "grid"
  std::size_t samples = 1'000'000;
  std::size_t grid = 256;
  unsigned workers = 1;
  std::string format = "json";  // or "csv"
  std::optional<std::string> out;

  // Sub-level volumes and the exponent bracket.
  double t_min = 1e-6;
  double t_max = 1;
  std::size_t n_points = 40;
  std::optional<std::pair<double, double>> fit_window;
  std::optional<unsigned> d_prime;
  std::optional<unsigned> k_prime;
  std::vector<std::vector<std::string>> witnesses;
  std::string eps0 = "1";
  std::size_t star_samples = 10000;
  double margin = 0.02;

  // Oscillatory integrals.
  double lambda_min = 1;
  double lambda_max = 1000;
  std::size_t lambda_points = 49;
  Json amplitude = Json{{"kind", "indicator"}};
  double panels_per_wavelength = 1;
  std::size_t min_panels = 4;
  std::size_t nodes_per_panel = 10;

  // Singular integrals.
  std::vector<double> gammas{0.5};
  double singular_t_min = 1e-5;
  std::size_t direct_samples = 1'000'000;

  // Epsilon families and dichotomy trials.
  unsigned lemma_d = 1;
  std::string lemma_m = "1";
  std::string lemma_R = "1";
  std::size_t trials = 1000;

  // van der Corput check.
  std::string vdc_lo = "0";
  std::string vdc_hi = "1";
  std::string vdc_t = "1";
  std::size_t per_decade = 32;
};

Json config_to_json(const AnalysisConfig& c);
/// Missing keys keep their defaults; unknown keys are rejected.
AnalysisConfig config_from_json(const Json& j);

struct CommandOutput {
  std::string text;  // goes to --out or stdout
  std::vector<std::pair<std::string, std::string>> extra_files;  // (path, content)
};

enum ExitCode { kExitOk = 0, kExitUsage = 1, kExitParse = 2, kExitNumeric = 3 };

CommandOutput cmd_analyze(const AnalysisConfig& c);
CommandOutput cmd_volume(const AnalysisConfig& c);
CommandOutput cmd_oscillatory(const AnalysisConfig& c);
CommandOutput cmd_singular(const AnalysisConfig& c);
CommandOutput cmd_dichotomy(const AnalysisConfig& c);
CommandOutput cmd_star_check(const AnalysisConfig& c);
CommandOutput cmd_vdc_check(const AnalysisConfig& c);

/// Dispatches by subcommand name; unknown names are a usage error.
CommandOutput run_command(const std::string& name, const AnalysisConfig& c);

/// Maps the exception in flight to an exit code: parse and input errors -> 2,
/// numeric failures (including hypothesis violations) -> 3.
int exit_code_for_current_exception();

}  // namespace sublevel

// Command-line front end: every subcommand maps flags onto an AnalysisConfig
// and runs the matching library command.
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sublevel/commands.hpp"

using namespace sublevel;

namespace {

// "a,b,c" -> ["a","b","c"]
std::vector<std::string> split(const std::string& s, char sep = ',') {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (ch != ' ') {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

Json string_list(const std::string& s) {
  Json a = Json::array();
  for (const auto& v : split(s)) a.push_back(v);
  return a;
}

struct Flags {
  std::map<std::string, std::string> values;  // config key -> raw flag text
  std::vector<std::string> witnesses;
  std::string config_file;
  bool dump_config = false;
};

void add_flag(CLI::App* sub, Flags& f, const std::string& flag, const std::string& key, const std::string& help) {
  sub->add_option_function<std::string>(flag, [&f, key](const std::string& v) { f.values[key] = v; }, help);
}

// Flags shared by all subcommands, then the ones specific to each.
void register_flags(CLI::App* sub, Flags& f, const std::string& name) {
  add_flag(sub, f, "--poly", "poly", "polynomial, e.g. \"x^4*y^2+x^2*y^4\"");
  add_flag(sub, f, "--domain", "domain", "domain JSON (inline or @file)");
  add_flag(sub, f, "--seed", "seed", "random seed");
  add_flag(sub, f, "--samples", "samples", "Monte Carlo sample count");
  add_flag(sub, f, "--grid", "grid", "grid resolution per axis");
  add_flag(sub, f, "--method", "method", "montecarlo or grid");
  add_flag(sub, f, "--out", "out", "output path (default stdout)");
  add_flag(sub, f, "--format", "format", "csv or json");
  add_flag(sub, f, "--workers", "workers", "worker threads");
  sub->add_option("--config", f.config_file, "base config JSON (inline or @file); flags override it");
  sub->add_flag("--dump-config", f.dump_config, "print the effective config and exit");

  if (name == "analyze" || name == "volume" || name == "singular") {
    add_flag(sub, f, "--d-prime", "d_prime", "order d' of the zeros used for the lower bound");
    add_flag(sub, f, "--k-prime", "k_prime", "dimension k' of those zeros");
    add_flag(sub, f, "--eps0", "eps0", "radius of the star-shape test ball");
    add_flag(sub, f, "--star-samples", "star_samples", "samples for the star-shape test");
  }
  if (name == "analyze") sub->add_option("--witness", f.witnesses, "witness point \"a,b,...\" (repeatable)");
  if (name == "volume") {
    add_flag(sub, f, "--t-min", "t_min", "smallest threshold");
    add_flag(sub, f, "--t-max", "t_max", "largest threshold");
    add_flag(sub, f, "--margin", "margin", "exponent margin for the bracket check");
  }
  if (name == "volume" || name == "singular") add_flag(sub, f, "--points", "n_points", "grid points");
  if (name == "volume" || name == "singular" || name == "oscillatory")
    add_flag(sub, f, "--fit-window", "fit_window", "fit window \"lo,hi\"");
  if (name == "oscillatory" || name == "vdc-check") {
    add_flag(sub, f, "--lambda-min", "lambda_min", "smallest lambda");
    add_flag(sub, f, "--lambda-max", "lambda_max", "largest lambda");
    add_flag(sub, f, "--panels-per-wavelength", "panels_per_wavelength", "quadrature budget");
    add_flag(sub, f, "--nodes-per-panel", "nodes_per_panel", "Gauss-Legendre nodes per panel");
  }
  if (name == "oscillatory") {
    add_flag(sub, f, "--lambda-points", "lambda_points", "lambda grid points");
    add_flag(sub, f, "--amplitude", "amplitude", "amplitude JSON (inline or @file)");
  }
  if (name == "singular") {
    add_flag(sub, f, "--gammas", "gammas", "exponents \"g1,g2,...\"");
    add_flag(sub, f, "--t-min", "singular_t_min", "smallest threshold of the volume curve");
    add_flag(sub, f, "--direct-samples", "direct_samples", "samples for the direct cross-check (0 disables)");
  }
  if (name == "lemma2") {
    add_flag(sub, f, "--d", "lemma_d", "degree d");
    add_flag(sub, f, "--m", "lemma_m", "l1 lower bound m");
    add_flag(sub, f, "--R", "lemma_R", "interval half-width R");
    add_flag(sub, f, "--trials", "trials", "random dichotomy trials");
  }
  if (name == "star-check") {
    add_flag(sub, f, "--eps0", "eps0", "ball radius");
    add_flag(sub, f, "--star-samples", "star_samples", "sample count");
  }
  if (name == "vdc-check") {
    add_flag(sub, f, "--interval", "vdc_interval", "interval \"lo,hi\"");
    add_flag(sub, f, "--t", "vdc_t", "derivative lower bound t");
    add_flag(sub, f, "--per-decade", "per_decade", "lambda points per decade");
  }
}

AnalysisConfig build_config(const Flags& f) {
  Json base = f.config_file.empty() ? config_to_json(AnalysisConfig{}) : read_json_arg(f.config_file);
  for (const auto& [key, raw] : f.values) {
    if (key == "domain" || key == "amplitude") {
      base[key] = read_json_arg(raw);
    } else if (key == "fit_window" || key == "gammas") {
      base[key] = string_list(raw);
    } else if (key == "vdc_interval") {
      const auto parts = split(raw);
      if (parts.size() != 2) throw InputError("--interval must be \"lo,hi\"");
      base["vdc_lo"] = parts[0];
      base["vdc_hi"] = parts[1];
    } else {
      base[key] = raw;
    }
  }
  if (!f.witnesses.empty()) {
    Json ws = Json::array();
    for (const auto& w : f.witnesses) ws.push_back(string_list(w));
    base["witnesses"] = ws;
  }
  return config_from_json(base);
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sub-level set volumes, oscillatory and singular integrals of real polynomials"};
  app.require_subcommand(1);
  Flags flags;
  const std::vector<std::pair<std::string, std::string>> commands{
      {"analyze", "degree, good direction, star-shape test, witness orders and exponent bracket"},
      {"volume", "sub-level volume sweep, power-law fit and bracket check"},
      {"oscillatory", "oscillatory integral decay sweep and envelope fit"},
      {"singular", "singular integral convergence for a list of exponents"},
      {"lemma2", "epsilon family and randomized dichotomy trials"},
      {"star-check", "sampled star-shape test and Euler identity"},
      {"vdc-check", "van der Corput bound on a certified interval"}};
  for (const auto& [name, help] : commands) register_flags(app.add_subcommand(name, help), flags, name);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }
  const std::string name = app.get_subcommands().front()->get_name();

  try {
    const AnalysisConfig config = build_config(flags);
    if (flags.dump_config) {
      std::cout << config_to_json(config).dump(2) << "\n";
      return kExitOk;
    }
    const CommandOutput out = run_command(name, config);
    for (const auto& [path, text] : out.extra_files) write_file(path, text);
    if (config.out)
      write_file(*config.out, out.text);
    else
      std::cout << out.text;
    return kExitOk;
  } catch (const std::exception& e) {
    const int rc = exit_code_for_current_exception();
    std::cerr << "error: " << e.what() << "\n";
    return rc;
  }
}

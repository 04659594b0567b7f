// cascadefund: solve, sweep, simulate and analyze sequential fundraising games.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "cascadefund/cli.hpp"

using namespace cascadefund;

namespace {

struct Flags {
  std::string config;
  std::string quality;
  std::optional<double> R, Q;
  std::optional<int> B, n;
  std::optional<double> L0, L_min, L_max;
  std::optional<int> points;
  std::optional<std::size_t> grid_size;
  std::optional<std::uint64_t> runs, seed;
  std::optional<std::string> out, summary, format, interpolation;
};

void common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "Run config JSON");
  sub->add_option("--quality", f.quality, "Quality distribution JSON file");
  sub->add_option("--R", f.R, "Lowest signal quality (uniform quality)");
  sub->add_option("--Q", f.Q, "Highest signal quality (uniform quality)");
  sub->add_option("--n", f.n, "Number of players");
  sub->add_option("--out", f.out, "Output path (stdout when omitted)");
  sub->add_option("--summary", f.summary, "Summary JSON path");
}

RunConfig resolve(const Flags& f) {
  RunConfig c = f.config.empty() ? RunConfig{} : load_config(f.config);
  if (!f.quality.empty()) {
    try {
      c.quality = QualitySpec::from_file(f.quality);
      c.quality_file = f.quality;
    } catch (const std::exception& e) {
      throw ConfigError(std::string("quality: ") + e.what());
    }
  }
  if (f.R || f.Q) {
    if (!(f.R && f.Q)) throw ConfigError("--R and --Q must be given together");
    try {
      c.quality = QualitySpec::uniform(*f.R, *f.Q);
      c.quality_file.clear();
    } catch (const std::exception& e) {
      throw ConfigError(std::string("quality: ") + e.what());
    }
  }
  if (f.B) c.B = *f.B;
  if (f.n) c.n = *f.n;
  if (f.L0) c.L0 = *f.L0;
  if (f.L_min) c.L_min = *f.L_min;
  if (f.L_max) c.L_max = *f.L_max;
  if (f.points) c.points = *f.points;
  if (f.grid_size) c.solver.grid_size = *f.grid_size;
  if (f.runs) c.runs = *f.runs;
  if (f.seed) c.seed = *f.seed;
  if (f.out) c.out = *f.out;
  if (f.summary) c.summary = *f.summary;
  if (f.format) {
    if (*f.format == "csv") {
      c.format = OutputFormat::csv;
    } else if (*f.format == "json") {
      c.format = OutputFormat::json;
    } else {
      throw ConfigError("--format must be csv or json");
    }
  }
  if (f.interpolation) {
    if (*f.interpolation == "linear") {
      c.solver.interpolation = Interpolation::linear;
    } else if (*f.interpolation == "cubic") {
      c.solver.interpolation = Interpolation::cubic;
    } else {
      throw ConfigError("--interpolation must be linear or cubic");
    }
  }
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sequential fundraising games: equilibrium thresholds, cascades, "
               "delegation and Monte Carlo checks"};
  app.set_version_flag("--version", std::string("cascadefund ") + kVersion);
  app.require_subcommand(1);
  Flags f;

  auto* solve = app.add_subcommand("solve", "Solve the policy table by backward induction");
  common(solve, f);
  solve->add_option("--B", f.B, "Investments needed");
  solve->add_option("--L0", f.L0, "Prior likelihood of the start state");
  solve->add_option("--grid-size", f.grid_size, "Likelihood grid points");
  solve->add_option("--interpolation", f.interpolation, "linear or cubic");
  solve->add_option("--format", f.format, "csv or json");

  auto* sweep = app.add_subcommand("sweep", "Unanimity threshold profiles over a range of priors");
  common(sweep, f);
  sweep->add_option("--L-min", f.L_min, "Smallest prior likelihood");
  sweep->add_option("--L-max", f.L_max, "Largest prior likelihood");
  sweep->add_option("--points", f.points, "Log-spaced prior points");
  sweep->add_option("--format", f.format, "csv or json");

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo runs under the solved policy");
  common(simulate, f);
  simulate->add_option("--B", f.B, "Investments needed");
  simulate->add_option("--L0", f.L0, "Prior likelihood");
  simulate->add_option("--runs", f.runs, "Number of runs");
  simulate->add_option("--seed", f.seed, "Seed of the run streams");
  simulate->add_option("--grid-size", f.grid_size, "Likelihood grid points");
  simulate->add_option("--format", f.format, "csv or json");

  auto* analyze = app.add_subcommand("analyze", "Cascade and delegation reports");
  common(analyze, f);
  analyze->add_option("--B", f.B, "Investments needed");
  analyze->add_option("--L-min", f.L_min, "Smallest prior for the delegation pattern");
  analyze->add_option("--L-max", f.L_max, "Largest prior for the delegation pattern");
  analyze->add_option("--points", f.points, "Prior points for the delegation pattern");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  return run_guarded([&]() -> int {
    const RunConfig cfg = resolve(f);
    if (*solve) return cmd_solve(cfg);
    if (*sweep) return cmd_sweep(cfg);
    if (*simulate) return cmd_simulate(cfg);
    return cmd_analyze(cfg);
  });
}

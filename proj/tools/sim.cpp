// Experiment runner: one CSV per sweep, prefixed with a '#' parameter
// manifest.
//
//   sim <experiment> [--config FILE] [--set key=value ...] --out FILE.csv
//
// Exit codes: 0 success, 2 configuration error, 3 precondition violation.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lisopt/errors.hpp"
#include "lisopt/experiments.hpp"
#include "lisopt/optimizer.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitPrecondition = 3;

lisopt::SystemParams resolve_params(const std::string& config_path, const std::vector<std::string>& overrides,
                                    std::optional<std::uint64_t> seed, std::optional<long> trials) {
  lisopt::SystemParams params = config_path.empty() ? lisopt::SystemParams{} : lisopt::load_config(config_path);
  for (const auto& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw lisopt::ConfigError("--set expects key=value, got '" + kv + "'");
    params.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (seed) params.seed = *seed;
  if (trials) params.n_trials = *trials;
  params.validate();
  return params;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LIS link simulator: achievable rate, pilot overhead and optimal element count"};
  app.set_version_flag("--version", std::string(lisopt::kVersion));

  std::string experiment_name;
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::optional<long> trials;
  unsigned threads = 0;
  bool list = false;
  lisopt::SweepGrid grid;
  std::vector<int> tc_values;

  app.add_option("experiment", experiment_name, "Experiment to run (see --list-experiments)");
  app.add_flag("--list-experiments", list, "List experiments and exit");
  app.add_option("--config", config_path, "Parameter file with 'key = value' lines")->check(CLI::ExistingFile);
  app.add_option("--set", overrides, "Override one parameter, key=value (repeatable)");
  app.add_option("--out", out_path, "Output CSV path");
  app.add_option("--seed", seed, "Random seed");
  app.add_option("--trials", trials, "Monte-Carlo trials per grid point");
  app.add_option("--threads", threads, "Worker threads (0 = all cores)");

  app.add_option("--p-tr", grid.p_tr_dbw, "Pilot powers in dBW (rate_vs_pilot)");
  app.add_option("--k", grid.k, "Element counts (rate_vs_pilot, heatmap, bound_vs_k)");
  app.add_option("--tp", grid.t_p, "Pilot lengths; default K+1 .. t_c-1 (rate_vs_pilot, heatmap)");
  app.add_option("--tp-step", grid.tp_step, "Stride of the default pilot-length range");
  app.add_option("--m", grid.m, "Nakagami shapes applied to all links (bound_vs_k)");
  app.add_option("--tc", tc_values, "Coherence lengths (kstar_vs_tc) or the single t_c of kstar_vs_p/table1");
  app.add_option("--p", grid.p_dbw, "Data powers in dBW (kstar_vs_p, table1)");
  app.add_option("--k-points", grid.k_points, "Coarse K grid size for the simulated optimum column");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  if (list) {
    for (auto e : lisopt::all_experiments()) {
      std::cout << lisopt::to_string(e) << "\t" << lisopt::describe(e) << "\n";
    }
    return 0;
  }

  try {
    if (experiment_name.empty()) throw lisopt::ConfigError("missing experiment name (see --list-experiments)");
    if (out_path.empty()) throw lisopt::ConfigError("--out is required");

    lisopt::SweepSpec spec;
    spec.experiment = lisopt::parse_experiment(experiment_name);
    spec.params = resolve_params(config_path, overrides, seed, trials);
    spec.mc.threads = threads;
    if (spec.experiment == lisopt::Experiment::kstar_vs_tc) {
      grid.t_c = tc_values;
    } else if (!tc_values.empty()) {
      if (tc_values.size() != 1) throw lisopt::ConfigError("--tc takes a single value for this experiment");
      grid.t_c_fixed = tc_values.front();
    }
    spec.grid = grid;

    const lisopt::CsvTable table = lisopt::run_experiment(spec);
    lisopt::write_csv(table, out_path);
    std::cerr << "wrote " << table.rows.size() << " rows to " << out_path << "\n";
    return 0;
  } catch (const lisopt::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const lisopt::PreconditionError& e) {
    std::cerr << "precondition violated: " << e.what() << "\n";
    return kExitPrecondition;
  }
}

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lisopt/params.hpp"
#include "lisopt/rate.hpp"

namespace lisopt {

inline constexpr std::string_view kVersion = "0.1.0";

enum class Experiment { rate_vs_pilot, heatmap, bound_vs_k, kstar_vs_tc, kstar_vs_p, table1 };

const std::vector<Experiment>& all_experiments();
std::string_view to_string(Experiment e);
/// Throws ConfigError for an unknown name.
Experiment parse_experiment(std::string_view name);
std::string_view describe(Experiment e);

/**
 * Axis lists for a sweep. Empty lists fall back to the experiment's
 * defaults (see resolved_grid); not every list applies to every
 * experiment.
 */
struct SweepGrid {
  std::vector<double> p_tr_dbw;  // rate_vs_pilot
  std::vector<int> k;            // rate_vs_pilot, heatmap, bound_vs_k
  std::vector<int> t_p;          // rate_vs_pilot, heatmap; empty = K+1 .. t_c-1
  int tp_step = 0;               // stride of the default t_p range
  std::vector<double> m;         // bound_vs_k
  std::vector<int> t_c;          // kstar_vs_tc
  std::vector<double> p_dbw;     // kstar_vs_p, table1
  int t_c_fixed = 0;             // t_c used by kstar_vs_p and table1
  int k_points = 0;              // coarse grid size for the numeric K* column
};

struct SweepSpec {
  Experiment experiment = Experiment::table1;
  SweepGrid grid;
  SystemParams params;
  McOptions mc;
};

/// Fills empty grid entries with the experiment defaults.
SweepGrid resolved_grid(Experiment e, const SweepGrid& grid, const SystemParams& params);

/// In-memory CSV: '#' manifest lines, a header and formatted rows.
struct CsvTable {
  std::vector<std::string> manifest;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Comma-separated, LF line endings.
  [[nodiscard]] std::string render() const;
  [[nodiscard]] std::optional<std::size_t> column(std::string_view name) const;
};

/**
 * Checks every grid point against the preconditions of the operations it
 * will call. Throws PreconditionError before any computation starts.
 */
void validate(const SweepSpec& spec);

CsvTable run_rate_vs_pilot(const SweepSpec& spec);
CsvTable run_heatmap(const SweepSpec& spec);
CsvTable run_bound_vs_k(const SweepSpec& spec);
/// kstar_vs_tc and kstar_vs_p.
CsvTable run_kstar_sweeps(const SweepSpec& spec);
CsvTable run_table1(const SweepSpec& spec);

/// validate() then dispatch on spec.experiment.
CsvTable run_experiment(const SweepSpec& spec);

/// Writes via a temporary sibling file and rename, so a failed write never
/// leaves a partial CSV at `path`.
void write_csv(const CsvTable& table, const std::filesystem::path& path);

}  // namespace lisopt

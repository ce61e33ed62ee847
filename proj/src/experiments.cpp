#include "lisopt/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "lisopt/errors.hpp"
#include "lisopt/optimizer.hpp"

namespace lisopt {
namespace {

struct ExperimentInfo {
  Experiment id;
  std::string_view name;
  std::string_view description;
};

constexpr ExperimentInfo kExperiments[] = {
    {Experiment::rate_vs_pilot, "rate_vs_pilot", "achievable rate versus pilot length for several P_tr and K"},
    {Experiment::heatmap, "heatmap", "achievable rate over the (K, t_p >= K+1) plane"},
    {Experiment::bound_vs_k, "bound_vs_k", "upper bound, genie and estimated rate versus K with t_p = K+1"},
    {Experiment::kstar_vs_tc, "kstar_vs_tc", "optimal element count versus coherence length"},
    {Experiment::kstar_vs_p, "kstar_vs_p", "optimal element count versus data transmit power"},
    {Experiment::table1, "table1", "K*, upper bound and simulated rate over the transmit power grid"},
};

const ExperimentInfo& info(Experiment e) {
  for (const auto& x : kExperiments) {
    if (x.id == e) return x;
  }
  throw std::logic_error("unknown experiment id");
}

std::string num(double x) { return fmt::format("{}", x); }
std::string rate(double x) { return fmt::format("{:.6f}", x); }

std::vector<int> int_range(int first, int last, int step) {
  std::vector<int> out;
  for (int v = first; v <= last; v += step) out.push_back(v);
  return out;
}

std::vector<int> pilot_lengths(const SweepGrid& grid, int K, int t_c) {
  if (!grid.t_p.empty()) return grid.t_p;
  return int_range(K + 1, t_c - 1, grid.tp_step);
}

[[noreturn]] void fail(const std::string& msg) { throw PreconditionError(msg); }

void check_pilot(int K, int t_p, int t_c) {
  if (t_p < K + 1) {
    fail(fmt::format("grid point K={} t_p={}: the LS estimate exists only when T_p >= K+1", K, t_p));
  }
  if (t_p >= t_c) fail(fmt::format("grid point K={} t_p={}: pilot length must be below t_c={}", K, t_p, t_c));
}

void check_k(int K, int t_c, int min_k) {
  if (K < min_k || K + 1 >= t_c) {
    fail(fmt::format("grid value K={} outside [{}, t_c - 2] with t_c={}", K, min_k, t_c));
  }
}

SystemParams with_data_power(SystemParams p, double p_dbw) {
  p.p_data_dbw = p_dbw;
  return p;
}

SystemParams with_tc(SystemParams p, int t_c) {
  p.t_c = t_c;
  return p;
}

SystemParams with_m(SystemParams p, double m) {
  p.m1 = p.m2 = p.m3 = m;
  return p;
}

CsvTable start_table(const SweepSpec& spec, const SweepGrid& grid, std::vector<std::string> header) {
  CsvTable t;
  t.manifest.push_back(fmt::format("lisopt-sim {}", kVersion));
  t.manifest.push_back(fmt::format("experiment={}", to_string(spec.experiment)));
  for (auto& line : spec.params.manifest()) t.manifest.push_back(std::move(line));
  switch (spec.experiment) {
    case Experiment::rate_vs_pilot:
      t.manifest.push_back(fmt::format("grid.p_tr_dbw={}", fmt::join(grid.p_tr_dbw, ";")));
      [[fallthrough]];
    case Experiment::heatmap:
      t.manifest.push_back(fmt::format("grid.k={}", fmt::join(grid.k, ";")));
      if (grid.t_p.empty()) {
        t.manifest.push_back(fmt::format("grid.t_p=K+1..t_c-1 step {}", grid.tp_step));
      } else {
        t.manifest.push_back(fmt::format("grid.t_p={}", fmt::join(grid.t_p, ";")));
      }
      break;
    case Experiment::bound_vs_k:
      t.manifest.push_back(fmt::format("grid.m={}", fmt::join(grid.m, ";")));
      t.manifest.push_back(fmt::format("grid.k={}", fmt::join(grid.k, ";")));
      break;
    case Experiment::kstar_vs_tc:
      t.manifest.push_back(fmt::format("grid.t_c={}", fmt::join(grid.t_c, ";")));
      t.manifest.push_back(fmt::format("grid.k_points={}", grid.k_points));
      break;
    case Experiment::kstar_vs_p:
      t.manifest.push_back(fmt::format("grid.k_points={}", grid.k_points));
      [[fallthrough]];
    case Experiment::table1:
      t.manifest.push_back(fmt::format("grid.p_dbw={}", fmt::join(grid.p_dbw, ";")));
      t.manifest.push_back(fmt::format("grid.t_c={}", grid.t_c_fixed));
      break;
  }
  t.header = std::move(header);
  return t;
}

// Argmax of the simulated estimated-CSI rate (t_p = K+1) over a coarse grid
// around the analytic optimum.
int numeric_kstar(const SystemParams& params, int k_points, const McOptions& mc) {
  const int center = kstar_exact(params).k_star;
  const int lo = std::max(1, static_cast<int>(std::floor(0.6 * center)));
  const int hi = std::max(lo, std::min(params.t_c - 2, static_cast<int>(std::ceil(1.4 * center))));
  std::vector<int> ks;
  for (int i = 0; i < k_points; ++i) {
    const double frac = k_points > 1 ? static_cast<double>(i) / (k_points - 1) : 0.5;
    const int k = static_cast<int>(std::lround(lo + frac * (hi - lo)));
    if (ks.empty() || ks.back() != k) ks.push_back(k);
  }
  int best = ks.front();
  double best_rate = -1.0;
  for (int k : ks) {
    const double r = mc_rate(params, k, k + 1, RateMode::estimated, mc).mean_bps_hz;
    if (r > best_rate) {
      best_rate = r;
      best = k;
    }
  }
  return best;
}

}  // namespace

const std::vector<Experiment>& all_experiments() {
  static const std::vector<Experiment> v = [] {
    std::vector<Experiment> out;
    for (const auto& x : kExperiments) out.push_back(x.id);
    return out;
  }();
  return v;
}

std::string_view to_string(Experiment e) { return info(e).name; }
std::string_view describe(Experiment e) { return info(e).description; }

Experiment parse_experiment(std::string_view name) {
  for (const auto& x : kExperiments) {
    if (x.name == name) return x.id;
  }
  throw ConfigError(fmt::format("unknown experiment '{}' (see --list-experiments)", name));
}

SweepGrid resolved_grid(Experiment e, const SweepGrid& grid, const SystemParams& params) {
  SweepGrid g = grid;
  if (g.tp_step <= 0) g.tp_step = e == Experiment::heatmap ? 8 : 5;
  if (g.k_points <= 0) g.k_points = 9;
  if (g.t_c_fixed <= 0) g.t_c_fixed = 2000;
  if (g.p_dbw.empty()) g.p_dbw = {-10, -5, 0, 5, 10, 15, 20};
  if (g.t_c.empty()) g.t_c = {100, 200, 500, 1000, 2000, 5000};
  if (g.m.empty()) g.m = {0.5, 1.0};
  if (g.p_tr_dbw.empty()) g.p_tr_dbw = {-30, -15, 0};
  if (g.k.empty()) {
    switch (e) {
      case Experiment::rate_vs_pilot:
        g.k = {4, 32};
        break;
      case Experiment::heatmap:
        g.k = int_range(1, std::min(64, params.t_c - 2), 3);
        break;
      default: {
        for (int k : {1, 2, 4, 8, 12, 16, 24, 32, 40, 48, 56, 64, 80, 96, 112, 128, 160, 194}) {
          if (k + 1 < params.t_c) g.k.push_back(k);
        }
      }
    }
  }
  return g;
}

std::string CsvTable::render() const {
  std::string out;
  for (const auto& line : manifest) out += fmt::format("# {}\n", line);
  out += fmt::format("{}\n", fmt::join(header, ","));
  for (const auto& row : rows) out += fmt::format("{}\n", fmt::join(row, ","));
  return out;
}

std::optional<std::size_t> CsvTable::column(std::string_view name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) return std::nullopt;
  return static_cast<std::size_t>(it - header.begin());
}

void validate(const SweepSpec& spec) {
  const SystemParams& p = spec.params;
  p.validate();
  derive_gains(p);
  const SweepGrid g = resolved_grid(spec.experiment, spec.grid, p);

  switch (spec.experiment) {
    case Experiment::rate_vs_pilot:
    case Experiment::heatmap:
      if (spec.experiment == Experiment::rate_vs_pilot) {
        for (double ptr : g.p_tr_dbw) {
          SystemParams q = p;
          q.p_pilot_dbw = ptr;
          derive_gains(q);
        }
      }
      for (int K : g.k) {
        check_k(K, p.t_c, 1);
        for (int t_p : g.t_p) {
          if (t_p >= p.t_c) fail(fmt::format("grid value t_p={} must be below t_c={}", t_p, p.t_c));
          if (spec.experiment == Experiment::rate_vs_pilot) check_pilot(K, t_p, p.t_c);
        }
      }
      break;
    case Experiment::bound_vs_k:
      for (double m : g.m) {
        if (!(m >= 0.5)) fail(fmt::format("grid value m={} below the Nakagami minimum 0.5", m));
      }
      for (int K : g.k) check_k(K, p.t_c, 1);
      break;
    case Experiment::kstar_vs_tc:
      for (int t_c : g.t_c) {
        if (t_c < 3) fail(fmt::format("grid value t_c={} must be at least 3", t_c));
      }
      break;
    case Experiment::kstar_vs_p:
    case Experiment::table1:
      if (g.t_c_fixed < 3) fail(fmt::format("t_c={} must be at least 3", g.t_c_fixed));
      for (double pd : g.p_dbw) {
        if (!std::isfinite(pd)) fail("grid value for P must be finite");
        derive_gains(with_data_power(p, pd));
      }
      break;
  }
}

CsvTable run_rate_vs_pilot(const SweepSpec& spec) {
  const SweepGrid g = resolved_grid(Experiment::rate_vs_pilot, spec.grid, spec.params);
  CsvTable t = start_table(spec, g,
                           {"p_tr_dbw", "K", "t_p", "rate_mean", "rate_stderr", "genie_mean", "genie_stderr"});
  for (double ptr : g.p_tr_dbw) {
    SystemParams p = spec.params;
    p.p_pilot_dbw = ptr;
    for (int K : g.k) {
      for (int t_p : pilot_lengths(g, K, p.t_c)) {
        const PairedRate r = mc_rate_paired(p, K, t_p, spec.mc);
        t.rows.push_back({num(ptr), num(K), num(t_p), rate(r.estimated.mean_bps_hz),
                          rate(r.estimated.std_error), rate(r.genie.mean_bps_hz), rate(r.genie.std_error)});
      }
    }
  }
  return t;
}

CsvTable run_heatmap(const SweepSpec& spec) {
  const SweepGrid g = resolved_grid(Experiment::heatmap, spec.grid, spec.params);
  CsvTable t = start_table(spec, g, {"K", "t_p", "rate_mean"});
  for (int K : g.k) {
    for (int t_p : pilot_lengths(g, K, spec.params.t_c)) {
      if (t_p < K + 1) continue;
      const RateEstimate r = mc_rate(spec.params, K, t_p, RateMode::estimated, spec.mc);
      t.rows.push_back({num(K), num(t_p), rate(r.mean_bps_hz)});
    }
  }
  return t;
}

CsvTable run_bound_vs_k(const SweepSpec& spec) {
  const SweepGrid g = resolved_grid(Experiment::bound_vs_k, spec.grid, spec.params);
  CsvTable t = start_table(spec, g, {"m", "K", "bound", "genie_mean", "exact_mean", "exact_stderr"});
  for (double m : g.m) {
    const SystemParams p = with_m(spec.params, m);
    for (int K : g.k) {
      const PairedRate r = mc_rate_paired(p, K, K + 1, spec.mc);
      t.rows.push_back({num(m), num(K), rate(rate_upper_bound(p, K, K + 1)), rate(r.genie.mean_bps_hz),
                        rate(r.estimated.mean_bps_hz), rate(r.estimated.std_error)});
    }
  }
  return t;
}

CsvTable run_kstar_sweeps(const SweepSpec& spec) {
  const SweepGrid g = resolved_grid(spec.experiment, spec.grid, spec.params);
  CsvTable t = start_table(spec, g, {"axis_value", "kstar_thm1", "kstar_thm2", "kstar_numeric_exact_rate"});
  auto add_row = [&](const std::string& axis, const SystemParams& p) {
    t.rows.push_back({axis, num(kstar_exact(p).k_star), num(kstar_highsnr(p).k_star),
                      num(numeric_kstar(p, g.k_points, spec.mc))});
  };
  if (spec.experiment == Experiment::kstar_vs_tc) {
    for (int t_c : g.t_c) add_row(num(t_c), with_tc(spec.params, t_c));
  } else if (spec.experiment == Experiment::kstar_vs_p) {
    for (double pd : g.p_dbw) add_row(num(pd), with_tc(with_data_power(spec.params, pd), g.t_c_fixed));
  } else {
    throw std::logic_error("run_kstar_sweeps needs kstar_vs_tc or kstar_vs_p");
  }
  return t;
}

CsvTable run_table1(const SweepSpec& spec) {
  const SweepGrid g = resolved_grid(Experiment::table1, spec.grid, spec.params);
  CsvTable t = start_table(spec, g, {"p_dbw", "kstar", "r_tilde", "r_mc"});
  for (double pd : g.p_dbw) {
    const SystemParams p = with_tc(with_data_power(spec.params, pd), g.t_c_fixed);
    const int k = kstar_exact(p).k_star;
    const double r_mc = mc_rate(p, k, k + 1, RateMode::estimated, spec.mc).mean_bps_hz;
    t.rows.push_back({num(pd), num(k), rate(rate_upper_bound(p, k, k + 1)), rate(r_mc)});
  }
  return t;
}

CsvTable run_experiment(const SweepSpec& spec) {
  validate(spec);
  switch (spec.experiment) {
    case Experiment::rate_vs_pilot:
      return run_rate_vs_pilot(spec);
    case Experiment::heatmap:
      return run_heatmap(spec);
    case Experiment::bound_vs_k:
      return run_bound_vs_k(spec);
    case Experiment::kstar_vs_tc:
    case Experiment::kstar_vs_p:
      return run_kstar_sweeps(spec);
    case Experiment::table1:
      return run_table1(spec);
  }
  throw std::logic_error("unhandled experiment");
}

void write_csv(const CsvTable& table, const std::filesystem::path& path) {
  auto tmp = path;
  tmp += ".partial";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError(fmt::format("cannot open '{}' for writing", tmp.string()));
    out << table.render();
    if (!out.flush()) throw ConfigError(fmt::format("write to '{}' failed", tmp.string()));
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace lisopt

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <string>

#include "lisopt/errors.hpp"
#include "lisopt/experiments.hpp"
#include "lisopt/optimizer.hpp"

using namespace lisopt;

namespace {

double cell(const CsvTable& t, std::size_t row, std::string_view col) {
  const auto c = t.column(col);
  REQUIRE(c.has_value());
  return std::stod(t.rows.at(row).at(*c));
}

SweepSpec make_spec(Experiment e, long trials) {
  SweepSpec s;
  s.experiment = e;
  s.params.n_trials = trials;
  return s;
}

}  // namespace

TEST_CASE("experiment names") {
  CHECK(all_experiments().size() == 6);
  for (auto e : all_experiments()) CHECK(parse_experiment(to_string(e)) == e);
  CHECK_THROWS_AS(parse_experiment("fig9"), ConfigError);
}

TEST_CASE("grid validation happens before any computation") {
  SweepSpec s = make_spec(Experiment::rate_vs_pilot, 10);
  s.grid.k = {4};
  s.grid.t_p = {3, 10};
  try {
    run_experiment(s);
    FAIL("expected PreconditionError");
  } catch (const PreconditionError& e) {
    CHECK(std::string(e.what()).find("T_p >= K+1") != std::string::npos);
  }
  s.grid.t_p = {5, 196};
  CHECK_THROWS_AS(run_experiment(s), PreconditionError);

  SweepSpec b = make_spec(Experiment::bound_vs_k, 10);
  b.grid.k = {195};
  CHECK_THROWS_AS(run_experiment(b), PreconditionError);
  b.grid.k = {4};
  b.grid.m = {0.4};
  CHECK_THROWS_AS(run_experiment(b), PreconditionError);

  SweepSpec t = make_spec(Experiment::table1, 10);
  t.params.m2 = 0.2;
  CHECK_THROWS_AS(run_experiment(t), ConfigError);
}

TEST_CASE("table1 sweep") {
  SweepSpec s = make_spec(Experiment::table1, 2000);
  const CsvTable t = run_experiment(s);
  REQUIRE(t.header == std::vector<std::string>{"p_dbw", "kstar", "r_tilde", "r_mc"});
  REQUIRE(t.rows.size() == 7);
  const int k_row[] = {355, 325, 300, 278, 258, 241, 226};
  for (std::size_t i = 0; i < 7; ++i) {
    CHECK(std::abs(cell(t, i, "kstar") - k_row[i]) <= 1);
    if (i > 0) {
      CHECK(cell(t, i, "r_tilde") > cell(t, i - 1, "r_tilde"));
      CHECK(cell(t, i, "r_mc") > cell(t, i - 1, "r_mc"));
    }
    CHECK(cell(t, i, "r_mc") < cell(t, i, "r_tilde"));
  }
  CHECK(std::abs(cell(t, 0, "r_tilde") - 10.74) < 0.01);
  CHECK(std::abs(cell(t, 4, "r_tilde") - 16.38) < 0.01);
  CHECK(std::abs(cell(t, 0, "r_mc") - 10.71) < 0.05);
  CHECK(std::abs(cell(t, 4, "r_mc") - 16.36) < 0.05);
}

TEST_CASE("bound_vs_k rows keep bound >= genie >= exact") {
  SweepSpec s = make_spec(Experiment::bound_vs_k, 3000);
  s.grid.k = {1, 8, 32, 64, 120};
  const CsvTable t = run_experiment(s);
  REQUIRE(t.rows.size() == 10);
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const double se = cell(t, i, "exact_stderr");
    CHECK(cell(t, i, "bound") + 3 * se >= cell(t, i, "genie_mean"));
    CHECK(cell(t, i, "genie_mean") + 3 * se >= cell(t, i, "exact_mean"));
  }
  CHECK(cell(t, 0, "m") == 0.5);
  CHECK(cell(t, 5, "m") == 1.0);
}

TEST_CASE("rate_vs_pilot: shortest pilot is best at normal pilot power") {
  SweepSpec s = make_spec(Experiment::rate_vs_pilot, 2000);
  s.grid.p_tr_dbw = {0};
  s.grid.k = {32};
  s.grid.tp_step = 4;
  const CsvTable t = run_experiment(s);
  double best = -1;
  int arg = 0;
  double genie_prev = 1e9;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    CHECK(cell(t, i, "genie_mean") < genie_prev);
    genie_prev = cell(t, i, "genie_mean");
    CHECK(cell(t, i, "rate_mean") <= cell(t, i, "genie_mean"));
    if (cell(t, i, "rate_mean") > best) {
      best = cell(t, i, "rate_mean");
      arg = static_cast<int>(cell(t, i, "t_p"));
    }
  }
  CHECK(arg == 33);
}

TEST_CASE("rate_vs_pilot: a slightly longer pilot pays off at very low pilot power") {
  // The gain is ~0.01 b/s/Hz, so it needs a lot of trials to resolve.
  SweepSpec s = make_spec(Experiment::rate_vs_pilot, 100000);
  s.grid.p_tr_dbw = {-20};
  s.grid.k = {8};
  s.grid.t_p = {9, 11};
  const CsvTable t = run_experiment(s);
  REQUIRE(t.rows.size() == 2);
  CHECK(cell(t, 1, "rate_mean") > cell(t, 0, "rate_mean"));
}

TEST_CASE("heatmap masks t_p < K+1 and its diagonal peaks near the analytic optimum") {
  SweepSpec s = make_spec(Experiment::heatmap, 3000);
  for (int k = 20; k <= 56; k += 2) {
    s.grid.k.push_back(k);
    s.grid.t_p.push_back(k + 1);
  }
  const CsvTable t = run_experiment(s);
  REQUIRE(t.header == std::vector<std::string>{"K", "t_p", "rate_mean"});
  int best_k = 0;
  double best = -1;
  std::vector<double> diag;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    CHECK(cell(t, i, "t_p") >= cell(t, i, "K") + 1);
    if (cell(t, i, "t_p") == cell(t, i, "K") + 1) {
      diag.push_back(cell(t, i, "rate_mean"));
      if (diag.back() > best) {
        best = diag.back();
        best_k = static_cast<int>(cell(t, i, "K"));
      }
    }
  }
  CHECK(diag.size() == s.grid.k.size());
  CHECK(diag.front() < best);
  CHECK(diag.back() < best);
  CHECK(std::abs(best_k - kstar_exact(s.params).k_star) <= 2);
}

TEST_CASE("kstar sweeps") {
  SweepSpec s = make_spec(Experiment::kstar_vs_tc, 500);
  s.grid.t_c = {100, 200, 500, 1000};
  s.grid.k_points = 5;
  const CsvTable tc = run_experiment(s);
  REQUIRE(tc.header ==
          std::vector<std::string>{"axis_value", "kstar_thm1", "kstar_thm2", "kstar_numeric_exact_rate"});
  for (std::size_t i = 1; i < tc.rows.size(); ++i) {
    CHECK(cell(tc, i, "kstar_thm1") >= cell(tc, i - 1, "kstar_thm1"));
    CHECK(cell(tc, i, "kstar_thm2") >= cell(tc, i - 1, "kstar_thm2"));
    CHECK(cell(tc, i, "kstar_numeric_exact_rate") >= cell(tc, i - 1, "kstar_numeric_exact_rate"));
  }

  SweepSpec sp = make_spec(Experiment::kstar_vs_p, 300);
  sp.grid.p_dbw = {-10, 10, 30};
  sp.grid.k_points = 5;
  const CsvTable tp = run_experiment(sp);
  REQUIRE(tp.rows.size() == 3);
  for (std::size_t i = 1; i < tp.rows.size(); ++i) {
    CHECK(cell(tp, i, "kstar_thm1") < cell(tp, i - 1, "kstar_thm1"));
    CHECK(cell(tp, i, "kstar_thm2") < cell(tp, i - 1, "kstar_thm2"));
    CHECK(cell(tp, i, "kstar_numeric_exact_rate") < cell(tp, i - 1, "kstar_numeric_exact_rate"));
  }
  CHECK(cell(tp, 1, "kstar_thm1") == kstar_exact([] {
          SystemParams p;
          p.t_c = 2000;
          p.p_data_dbw = 10;
          return p;
        }()).k_star);
}

TEST_CASE("CSV rendering and atomic write") {
  SweepSpec s = make_spec(Experiment::table1, 50);
  s.grid.p_dbw = {0};
  const CsvTable t = run_experiment(s);
  const std::string text = t.render();
  CHECK(text.rfind("# lisopt-sim ", 0) == 0);
  CHECK(text.find("\r") == std::string::npos);
  CHECK(text.find("# experiment=table1\n") != std::string::npos);
  CHECK(text.find("# seed=1\n") != std::string::npos);
  CHECK(text.find("\np_dbw,kstar,r_tilde,r_mc\n0,300,") != std::string::npos);
  CHECK(text == run_experiment(s).render());

  const auto dir = std::filesystem::temp_directory_path() / "lisopt_csv_test";
  std::filesystem::create_directories(dir);
  write_csv(t, dir / "out.csv");
  std::ifstream in(dir / "out.csv", std::ios::binary);
  const std::string back((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(back == text);
  CHECK_THROWS(write_csv(t, dir / "missing_dir" / "out.csv"));
  CHECK_FALSE(std::filesystem::exists(dir / "missing_dir" / "out.csv"));
  std::filesystem::remove_all(dir);
}

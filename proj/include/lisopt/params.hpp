#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace lisopt {

/**
 * Statistical and system inputs of one LIS-assisted link.
 *
 * Transmit powers are in dBW and the noise power in dBm; the same noise
 * variance applies to the pilot and the data phase. Defaults are the
 * general-purpose setup used throughout the experiments.
 */
struct SystemParams {
  double p_data_dbw = 0.0;
  double p_pilot_dbw = 0.0;
  double noise_dbm = -80.0;
  int t_c = 196;
  double d1_m = 50.0;  // source to surface
  double d2_m = 5.0;   // surface to destination
  double d3_m = 60.0;  // source to destination
  double alpha_direct = 3.5;
  double alpha_cascade = 2.0;
  double c0_db = -30.0;
  double m1 = 0.5;
  double m2 = 0.5;
  double m3 = 0.5;
  long n_trials = 10000;
  std::uint64_t seed = 1;

  /// Throws ConfigError naming the first offending field.
  void validate() const;

  /// Sets one field from its textual config key and value.
  void set(std::string_view key, std::string_view value);

  /// "key=value" for every field, in declaration order, shortest round-trip
  /// formatting.
  [[nodiscard]] std::vector<std::string> manifest() const;

  bool operator==(const SystemParams&) const = default;
};

/// Every key accepted by SystemParams::set, in declaration order.
const std::vector<std::string_view>& config_keys();

/// Linear large-scale gains and SNRs derived from SystemParams.
struct LinkGains {
  double beta_d = 0.0;     // direct link
  double beta_l = 0.0;     // cascaded link through the surface
  double gamma_bar = 0.0;  // P / sigma^2
  double gamma_tr = 0.0;   // P_tr / sigma^2
  double p_data_w = 0.0;
  double p_pilot_w = 0.0;
  double noise_w = 0.0;
};

double dbw_to_watts(double dbw);
double dbm_to_watts(double dbm);

/**
 * Far-field path-loss budget:
 *   beta_d = C0 * d3^-alpha_direct
 *   beta_l = C0^2 * (d1 * d2)^-alpha_cascade
 * with C0 the 1 m reference loss. Throws ConfigError if anything comes out
 * non-finite or non-positive.
 */
LinkGains derive_gains(const SystemParams& params);

/**
 * Reads a flat "key = value" text file. Blank lines and text after '#' are
 * ignored, keys are those of config_keys(); absent keys keep their defaults.
 */
SystemParams load_config(const std::filesystem::path& path);

/// Same format as load_config, from an in-memory string.
SystemParams parse_config(std::string_view text, const SystemParams& base = {});

}  // namespace lisopt

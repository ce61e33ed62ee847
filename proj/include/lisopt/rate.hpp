#pragma once

#include "lisopt/beamform.hpp"

namespace lisopt {

enum class RateMode { estimated, genie };

const char* to_string(RateMode mode);

/// Monte-Carlo estimate of the overhead-aware rate, in b/s/Hz.
struct RateEstimate {
  double mean_bps_hz = 0.0;
  double std_error = 0.0;
  long n_trials = 0;
  RateMode mode = RateMode::estimated;
};

/// Estimated-CSI and genie results computed on the same channel draws.
struct PairedRate {
  RateEstimate estimated;
  RateEstimate genie;
};

struct McOptions {
  /// Worker threads; 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
};

/// Coefficients of the mean-gain quadratic a K^2 + b K + c together with the
/// Nakagami first moments they are built from.
struct BoundCoefficients {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double delta1 = 0.0;
  double delta2 = 0.0;
  double delta3 = 0.0;
};

/// log2(1 + gamma_bar |sqrt(beta_d) h_d + sqrt(beta_l) phi^T v|^2), no pre-log.
double instantaneous_rate(const ChannelRealization& chan, const PhaseConfig& phases,
                          const LinkGains& gains);

/**
 * Mean of (1 - t_p / t_c) * instantaneous rate over params.n_trials draws.
 *
 * Estimated mode runs the full pipeline per trial: channel draw, pilot
 * reception, LS estimate, estimated phases, rate. Genie mode uses the true
 * channel for the phases but keeps the same pre-log. Trial i always uses
 * random stream (params.seed, i), so both modes see the same channels and
 * the result does not depend on the number of workers.
 */
RateEstimate mc_rate(const SystemParams& params, int K, int t_p, RateMode mode,
                     const McOptions& options = {});

/// Both modes in one pass over common random numbers.
PairedRate mc_rate_paired(const SystemParams& params, int K, int t_p, const McOptions& options = {});

BoundCoefficients bound_coeffs(const SystemParams& params);

/// (1 - t_p / t_c) log2(1 + gamma_bar (a K^2 + b K + c)). Requires K >= 0
/// and 0 < t_p < t_c.
double rate_upper_bound(const SystemParams& params, int K, int t_p);

/// The bound along t_p = K + 1 for real K in [0, t_c - 1].
double rtilde_of_k(const SystemParams& params, double K);

/**
 * The upper bound along t_p = K + 1 with the coefficients resolved once.
 * Shared by the public rate/optimizer entry points and cheap to copy.
 */
class BoundModel {
 public:
  explicit BoundModel(const SystemParams& params);

  [[nodiscard]] double quadratic(double K) const noexcept { return (a_ * K + b_) * K + c_; }
  /// Bound value at real K (no range check).
  [[nodiscard]] double value(double K) const noexcept;
  /// d/dK of value().
  [[nodiscard]] double derivative(double K) const noexcept;
  /// Leading high-SNR term (1 - (K+1)/t_c) log2(gamma_bar a K^2).
  [[nodiscard]] double high_snr_value(double K) const noexcept;

  [[nodiscard]] const BoundCoefficients& coefficients() const noexcept { return coeffs_; }
  [[nodiscard]] double gamma_bar() const noexcept { return gamma_bar_; }
  [[nodiscard]] int t_c() const noexcept { return t_c_; }

 private:
  BoundCoefficients coeffs_;
  double a_;
  double b_;
  double c_;
  double gamma_bar_;
  int t_c_;
};

}  // namespace lisopt

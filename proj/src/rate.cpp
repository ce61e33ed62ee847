#include "lisopt/rate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <optional>
#include <thread>

#include <fmt/format.h>

#include "lisopt/errors.hpp"

namespace lisopt {
namespace {

// Trials per work unit. Fixed so that the reduction tree, and hence every
// floating-point sum, is the same for any worker count.
constexpr long kChunkTrials = 256;

// Neumaier compensated summation.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  [[nodiscard]] double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct Moments {
  CompensatedSum sum;
  CompensatedSum sum_sq;

  void add(double x) noexcept {
    sum.add(x);
    sum_sq.add(x * x);
  }
};

struct ChunkResult {
  double est_sum = 0.0;
  double est_sq = 0.0;
  double genie_sum = 0.0;
  double genie_sq = 0.0;
};

RateEstimate finish(const std::vector<ChunkResult>& chunks, long n, RateMode mode) {
  CompensatedSum sum;
  CompensatedSum sum_sq;
  for (const auto& c : chunks) {
    sum.add(mode == RateMode::estimated ? c.est_sum : c.genie_sum);
    sum_sq.add(mode == RateMode::estimated ? c.est_sq : c.genie_sq);
  }
  RateEstimate out;
  out.mode = mode;
  out.n_trials = n;
  out.mean_bps_hz = sum.value() / static_cast<double>(n);
  if (n > 1) {
    const double var = std::max(0.0, (sum_sq.value() - n * out.mean_bps_hz * out.mean_bps_hz) / (n - 1));
    out.std_error = std::sqrt(var / static_cast<double>(n));
  }
  return out;
}

void check_rate_args(const SystemParams& params, int K, int t_p, bool estimated) {
  if (K < 0 || K >= params.t_c) {
    throw PreconditionError(fmt::format("K={} outside [0, t_c) with t_c={}", K, params.t_c));
  }
  if (t_p < 0 || t_p >= params.t_c) {
    throw PreconditionError(fmt::format("pilot length t_p={} must satisfy 0 <= t_p < t_c={}", t_p, params.t_c));
  }
  if (estimated && t_p < K + 1) {
    throw PreconditionError(fmt::format(
        "pilot length t_p={} too short for K={}: the LS estimate exists only when T_p >= K+1", t_p, K));
  }
}

std::vector<ChunkResult> run_trials(const SystemParams& params, int K, int t_p, bool with_estimation,
                                    const McOptions& options) {
  params.validate();
  const LinkGains gains = derive_gains(params);
  const long n = params.n_trials;
  const long n_chunks = (n + kChunkTrials - 1) / kChunkTrials;
  const double prelog = 1.0 - static_cast<double>(t_p) / params.t_c;
  const double sqrt_bd = std::sqrt(gains.beta_d);
  const double sqrt_bl = std::sqrt(gains.beta_l);

  std::vector<ChunkResult> chunks(static_cast<std::size_t>(n_chunks));
  std::atomic<long> next{0};

  auto worker = [&]() {
    std::optional<DftPilotProcessor> proc;
    if (with_estimation) proc.emplace(K, t_p);
    for (long chunk = next++; chunk < n_chunks; chunk = next++) {
      Moments est;
      Moments genie;
      const long end = std::min(n, (chunk + 1) * kChunkTrials);
      for (long trial = chunk * kChunkTrials; trial < end; ++trial) {
        StreamRng rng(params.seed, static_cast<std::uint64_t>(trial));
        const ChannelRealization chan = sample_channel(K, params, rng);

        // Genie phases co-phase every path, so the gain magnitude is the sum
        // of the path magnitudes.
        double aligned = sqrt_bd * std::abs(chan.h_d());
        for (const auto& vi : chan.v()) aligned += sqrt_bl * std::abs(vi);
        genie.add(prelog * std::log2(1.0 + gains.gamma_bar * aligned * aligned));

        if (proc) {
          const CVector y = proc->simulate(chan, gains, gains.noise_w, rng);
          const EstimateResult hat = proc->estimate(y, gains.p_pilot_w);
          est.add(prelog * instantaneous_rate(chan, estimated_phases(hat), gains));
        }
      }
      chunks[chunk] = {est.sum.value(), est.sum_sq.value(), genie.sum.value(), genie.sum_sq.value()};
    }
  };

  unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<long>(threads, n_chunks));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  return chunks;
}

}  // namespace

const char* to_string(RateMode mode) { return mode == RateMode::estimated ? "estimated" : "genie"; }

double instantaneous_rate(const ChannelRealization& chan, const PhaseConfig& phases, const LinkGains& gains) {
  return std::log2(1.0 + gains.gamma_bar * std::norm(combined_gain(chan, phases, gains)));
}

RateEstimate mc_rate(const SystemParams& params, int K, int t_p, RateMode mode, const McOptions& options) {
  const bool estimated = mode == RateMode::estimated;
  check_rate_args(params, K, t_p, estimated);
  return finish(run_trials(params, K, t_p, estimated, options), params.n_trials, mode);
}

PairedRate mc_rate_paired(const SystemParams& params, int K, int t_p, const McOptions& options) {
  check_rate_args(params, K, t_p, true);
  const auto chunks = run_trials(params, K, t_p, true, options);
  return {finish(chunks, params.n_trials, RateMode::estimated), finish(chunks, params.n_trials, RateMode::genie)};
}

BoundCoefficients bound_coeffs(const SystemParams& params) {
  params.validate();
  const LinkGains gains = derive_gains(params);
  BoundCoefficients out;
  out.delta1 = delta_moment(params.m1);
  out.delta2 = delta_moment(params.m2);
  out.delta3 = delta_moment(params.m3);
  const double d12 = out.delta1 * out.delta2;
  out.a = gains.beta_l * d12 * d12;
  out.b = gains.beta_l * (1.0 - d12 * d12) + 2.0 * std::sqrt(gains.beta_d * gains.beta_l) * d12 * out.delta3;
  out.c = gains.beta_d;
  return out;
}

BoundModel::BoundModel(const SystemParams& params)
    : coeffs_(bound_coeffs(params)),
      a_(coeffs_.a),
      b_(coeffs_.b),
      c_(coeffs_.c),
      gamma_bar_(derive_gains(params).gamma_bar),
      t_c_(params.t_c) {}

double BoundModel::value(double K) const noexcept {
  return (1.0 - (K + 1.0) / t_c_) * std::log2(1.0 + gamma_bar_ * quadratic(K));
}

double BoundModel::derivative(double K) const noexcept {
  const double snr = 1.0 + gamma_bar_ * quadratic(K);
  return gamma_bar_ * (t_c_ - K - 1.0) * (2.0 * a_ * K + b_) / (std::numbers::ln2 * t_c_ * snr) -
         std::log2(snr) / t_c_;
}

double BoundModel::high_snr_value(double K) const noexcept {
  return (1.0 - (K + 1.0) / t_c_) * std::log2(gamma_bar_ * a_ * K * K);
}

double rate_upper_bound(const SystemParams& params, int K, int t_p) {
  if (K < 0) throw PreconditionError(fmt::format("K={} is negative", K));
  if (t_p <= 0 || t_p >= params.t_c) {
    throw PreconditionError(fmt::format("pilot length t_p={} must satisfy 0 < t_p < t_c={}", t_p, params.t_c));
  }
  const BoundModel model(params);
  return (1.0 - static_cast<double>(t_p) / params.t_c) * std::log2(1.0 + model.gamma_bar() * model.quadratic(K));
}

double rtilde_of_k(const SystemParams& params, double K) {
  if (!(K >= 0.0 && K <= params.t_c - 1.0)) {
    throw PreconditionError(fmt::format("K={} outside [0, t_c - 1] with t_c={}", K, params.t_c));
  }
  return BoundModel(params).value(K);
}

}  // namespace lisopt

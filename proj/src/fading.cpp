#include "lisopt/fading.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <fmt/format.h>

#include "lisopt/errors.hpp"

namespace lisopt {
namespace {

void check_shape(double m) {
  if (!(m >= 0.5) || !std::isfinite(m)) {
    throw PreconditionError(fmt::format("Nakagami shape m={} outside [0.5, inf)", m));
  }
}

// Magnitudes for all K entries first, then all phases.
CVector sample_vector(int K, double m, StreamRng& rng) {
  std::gamma_distribution<double> power(m, 1.0 / m);
  CVector out(static_cast<std::size_t>(K));
  for (auto& x : out) x = std::sqrt(power(rng));
  for (auto& x : out) x = std::polar(x.real(), 2.0 * std::numbers::pi * rng.uniform());
  return out;
}

}  // namespace

ChannelRealization::ChannelRealization(CVector h, CVector g, cplx h_d)
    : h_(std::move(h)), g_(std::move(g)), h_d_(h_d) {
  if (h_.size() != g_.size()) {
    throw PreconditionError(fmt::format("channel vectors differ in length ({} vs {})", h_.size(), g_.size()));
  }
  v_.resize(h_.size());
  for (std::size_t i = 0; i < h_.size(); ++i) v_[i] = h_[i] * g_[i];
}

double delta_moment(double m) {
  check_shape(m);
  return std::exp(std::lgamma(m + 0.5) - std::lgamma(m)) / std::sqrt(m);
}

double rician_to_m(double kappa) {
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) {
    throw PreconditionError(fmt::format("Rician factor kappa={} must be finite and >= 0", kappa));
  }
  return (kappa + 1.0) * (kappa + 1.0) / (2.0 * kappa + 1.0);
}

double sample_nakagami(double m, StreamRng& rng) {
  check_shape(m);
  std::gamma_distribution<double> power(m, 1.0 / m);
  return std::sqrt(power(rng));
}

cplx sample_nakagami_complex(double m, StreamRng& rng) {
  const double magnitude = sample_nakagami(m, rng);
  return std::polar(magnitude, 2.0 * std::numbers::pi * rng.uniform());
}

ChannelRealization sample_channel(int K, const SystemParams& params, StreamRng& rng) {
  if (K < 0 || K >= params.t_c) {
    throw PreconditionError(fmt::format("K={} outside [0, t_c) with t_c={}", K, params.t_c));
  }
  check_shape(params.m1);
  check_shape(params.m2);
  check_shape(params.m3);
  CVector h = sample_vector(K, params.m1, rng);
  CVector g = sample_vector(K, params.m2, rng);
  const cplx h_d = sample_nakagami_complex(params.m3, rng);
  return ChannelRealization(std::move(h), std::move(g), h_d);
}

}  // namespace lisopt

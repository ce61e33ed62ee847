#include "lisopt/estimator.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <random>

#include <fftw3.h>
#include <fmt/format.h>

#include "lisopt/errors.hpp"

namespace lisopt {
namespace {

// The FFTW planner is not re-entrant; plan execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void check_pilot_length(int K, int t_p) {
  if (K < 0) throw PreconditionError(fmt::format("number of surface elements K={} is negative", K));
  if (t_p < K + 1) {
    throw PreconditionError(fmt::format(
        "pilot length t_p={} too short for K={}: the LS estimate exists only when T_p >= K+1", t_p, K));
  }
}

void add_noise(std::span<cplx> y, double sigma_tr_sq, StreamRng& rng) {
  if (sigma_tr_sq <= 0.0) return;
  std::normal_distribution<double> normal(0.0, std::sqrt(sigma_tr_sq / 2.0));
  for (auto& yt : y) {
    const double re = normal(rng);
    const double im = normal(rng);
    yt += cplx(re, im);
  }
}

void check_dims(const ChannelRealization& chan, int K) {
  if (chan.size() != K) {
    throw PreconditionError(
        fmt::format("channel has {} surface elements but the pilot design expects {}", chan.size(), K));
  }
}

}  // namespace

PilotDesign::PilotDesign(int K, int t_p) : k_(K), t_p_(t_p) {
  check_pilot_length(K, t_p);
  matrix_.resize(static_cast<std::size_t>(t_p) * columns());
  for (int t = 0; t < t_p; ++t) {
    for (int col = 0; col <= K; ++col) {
      // Reduce t*col mod t_p first so the angle stays small and exact.
      const long idx = (static_cast<long>(t) * col) % t_p;
      const double angle = -2.0 * std::numbers::pi * static_cast<double>(idx) / t_p;
      matrix_[static_cast<std::size_t>(t) * columns() + col] = std::polar(1.0, angle);
    }
  }
}

PilotDesign dft_pilot_design(int K, int t_p) { return PilotDesign(K, t_p); }

CVector simulate_pilots(const ChannelRealization& chan, const PilotDesign& design, const LinkGains& gains,
                        double sigma_tr_sq, StreamRng& rng) {
  check_dims(chan, design.k());
  const double amp = std::sqrt(gains.p_pilot_w);
  const cplx direct = std::sqrt(gains.beta_d) * chan.h_d();
  const double sqrt_bl = std::sqrt(gains.beta_l);
  const auto& v = chan.v();

  CVector y(static_cast<std::size_t>(design.t_p()));
  for (int t = 0; t < design.t_p(); ++t) {
    cplx reflected{};
    for (int k = 0; k < design.k(); ++k) reflected += v[k] * design.at(t, k + 1);
    y[t] = amp * (direct * design.at(t, 0) + sqrt_bl * reflected);
  }
  add_noise(y, sigma_tr_sq, rng);
  return y;
}

EstimateResult ls_estimate(std::span<const cplx> y, const PilotDesign& design, double p_pilot_lin) {
  if (static_cast<int>(y.size()) != design.t_p()) {
    throw PreconditionError(
        fmt::format("received pilot vector has length {}, design expects t_p={}", y.size(), design.t_p()));
  }
  const double scale = 1.0 / (std::sqrt(p_pilot_lin) * design.t_p());
  CVector coeffs(static_cast<std::size_t>(design.columns()));
  for (int col = 0; col < design.columns(); ++col) {
    cplx acc{};
    for (int t = 0; t < design.t_p(); ++t) acc += std::conj(design.at(t, col)) * y[t];
    coeffs[col] = acc * scale;
  }
  EstimateResult est;
  est.h_d_eff_hat = coeffs.front();
  est.v_eff_hat.assign(coeffs.begin() + 1, coeffs.end());
  return est;
}

struct DftPilotProcessor::Impl {
  int k;
  int t_p;
  fftw_complex* buffer = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  Impl(int K, int tp) : k(K), t_p(tp) {
    std::lock_guard lock(planner_mutex());
    buffer = fftw_alloc_complex(static_cast<std::size_t>(t_p));
    forward = fftw_plan_dft_1d(t_p, buffer, buffer, FFTW_FORWARD, FFTW_ESTIMATE);
    backward = fftw_plan_dft_1d(t_p, buffer, buffer, FFTW_BACKWARD, FFTW_ESTIMATE);
  }

  ~Impl() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
    fftw_free(buffer);
  }

  Impl(const Impl&) = delete;
  Impl& operator=(const Impl&) = delete;

  cplx* data() { return reinterpret_cast<cplx*>(buffer); }
};

DftPilotProcessor::DftPilotProcessor(int K, int t_p) {
  check_pilot_length(K, t_p);
  impl_ = std::make_unique<Impl>(K, t_p);
}

DftPilotProcessor::~DftPilotProcessor() = default;
DftPilotProcessor::DftPilotProcessor(DftPilotProcessor&&) noexcept = default;
DftPilotProcessor& DftPilotProcessor::operator=(DftPilotProcessor&&) noexcept = default;

int DftPilotProcessor::k() const noexcept { return impl_->k; }
int DftPilotProcessor::t_p() const noexcept { return impl_->t_p; }

CVector DftPilotProcessor::simulate(const ChannelRealization& chan, const LinkGains& gains,
                                    double sigma_tr_sq, StreamRng& rng) {
  check_dims(chan, impl_->k);
  const double amp = std::sqrt(gains.p_pilot_w);
  cplx* buf = impl_->data();
  const double sqrt_bl = std::sqrt(gains.beta_l);
  buf[0] = amp * std::sqrt(gains.beta_d) * chan.h_d();
  for (int k = 0; k < impl_->k; ++k) buf[k + 1] = amp * sqrt_bl * chan.v()[k];
  for (int t = impl_->k + 1; t < impl_->t_p; ++t) buf[t] = 0.0;
  fftw_execute(impl_->forward);

  CVector y(buf, buf + impl_->t_p);
  add_noise(y, sigma_tr_sq, rng);
  return y;
}

EstimateResult DftPilotProcessor::estimate(std::span<const cplx> y, double p_pilot_lin) {
  if (static_cast<int>(y.size()) != impl_->t_p) {
    throw PreconditionError(
        fmt::format("received pilot vector has length {}, processor expects t_p={}", y.size(), impl_->t_p));
  }
  cplx* buf = impl_->data();
  std::copy(y.begin(), y.end(), buf);
  fftw_execute(impl_->backward);

  const double scale = 1.0 / (std::sqrt(p_pilot_lin) * impl_->t_p);
  EstimateResult est;
  est.h_d_eff_hat = buf[0] * scale;
  est.v_eff_hat.resize(static_cast<std::size_t>(impl_->k));
  for (int k = 0; k < impl_->k; ++k) est.v_eff_hat[k] = buf[k + 1] * scale;
  return est;
}

}  // namespace lisopt

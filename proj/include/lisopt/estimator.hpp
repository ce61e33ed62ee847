#pragma once

#include <memory>
#include <span>

#include "lisopt/fading.hpp"

namespace lisopt {

/**
 * DFT training matrix of size t_p x (K+1), row-major. Entry (t, k) is
 * exp(-j 2 pi t k / t_p) for zero-based t and k; column 0 is all ones and
 * multiplies the direct path, column k >= 1 carries the phases applied by
 * surface element k during pilot t.
 */
class PilotDesign {
 public:
  PilotDesign(int K, int t_p);

  [[nodiscard]] int k() const noexcept { return k_; }
  [[nodiscard]] int t_p() const noexcept { return t_p_; }
  [[nodiscard]] int columns() const noexcept { return k_ + 1; }
  [[nodiscard]] cplx at(int t, int col) const { return matrix_[static_cast<std::size_t>(t) * columns() + col]; }
  [[nodiscard]] std::span<const cplx> matrix() const noexcept { return matrix_; }

 private:
  int k_;
  int t_p_;
  CVector matrix_;
};

/// LS estimates of the effective coefficients sqrt(beta_d) h_d and
/// sqrt(beta_l) v.
struct EstimateResult {
  cplx h_d_eff_hat{};
  CVector v_eff_hat;
};

/// Throws PreconditionError unless t_p >= K + 1 (LS existence) and K >= 0.
PilotDesign dft_pilot_design(int K, int t_p);

/**
 * Received pilot vector
 *   y_t = sqrt(P_tr) (sqrt(beta_d) h_d + sqrt(beta_l) v^T phi_t) + n_t,
 * pilot symbols x_t = 1, n_t ~ CN(0, sigma_tr_sq). Noise is drawn in the
 * order (re_0, im_0, re_1, ...).
 */
CVector simulate_pilots(const ChannelRealization& chan, const PilotDesign& design,
                        const LinkGains& gains, double sigma_tr_sq, StreamRng& rng);

/// Matched filter (1 / (sqrt(P_tr) t_p)) D^H y, which is the LS solution
/// since D^H D = t_p I.
EstimateResult ls_estimate(std::span<const cplx> y, const PilotDesign& design, double p_pilot_lin);

/**
 * FFT implementation of simulate_pilots + ls_estimate for one (K, t_p).
 *
 * Produces the same vectors as the dense routines (and consumes the random
 * stream identically) in O(t_p log t_p). Holds FFTW plans and scratch
 * buffers, so use one instance per worker thread.
 */
class DftPilotProcessor {
 public:
  DftPilotProcessor(int K, int t_p);
  ~DftPilotProcessor();
  DftPilotProcessor(DftPilotProcessor&&) noexcept;
  DftPilotProcessor& operator=(DftPilotProcessor&&) noexcept;
  DftPilotProcessor(const DftPilotProcessor&) = delete;
  DftPilotProcessor& operator=(const DftPilotProcessor&) = delete;

  [[nodiscard]] int k() const noexcept;
  [[nodiscard]] int t_p() const noexcept;

  CVector simulate(const ChannelRealization& chan, const LinkGains& gains, double sigma_tr_sq,
                   StreamRng& rng);
  EstimateResult estimate(std::span<const cplx> y, double p_pilot_lin);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace lisopt

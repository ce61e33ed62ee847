#pragma once

#include <complex>
#include <vector>

#include "lisopt/params.hpp"
#include "lisopt/rng.hpp"

namespace lisopt {

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;

/**
 * One draw of the small-scale fading: source-surface vector h,
 * destination-surface vector g, direct coefficient h_d and the cascade
 * v_i = h_i * g_i. The cascade is computed once at construction and the
 * inputs cannot be changed afterwards, so v is never stale.
 */
class ChannelRealization {
 public:
  ChannelRealization() = default;
  /// Throws PreconditionError if h and g differ in length.
  ChannelRealization(CVector h, CVector g, cplx h_d);

  [[nodiscard]] const CVector& h() const noexcept { return h_; }
  [[nodiscard]] const CVector& g() const noexcept { return g_; }
  [[nodiscard]] cplx h_d() const noexcept { return h_d_; }
  [[nodiscard]] const CVector& v() const noexcept { return v_; }
  [[nodiscard]] int size() const noexcept { return static_cast<int>(v_.size()); }

 private:
  CVector h_;
  CVector g_;
  cplx h_d_{};
  CVector v_;
};

/// E[w] for a unit-power Nakagami-m variable w:
/// Gamma(m + 1/2) / (sqrt(m) Gamma(m)). Requires m >= 0.5.
double delta_moment(double m);

/// Nakagami shape matching Rician factor kappa: (kappa+1)^2 / (2 kappa + 1).
double rician_to_m(double kappa);

/// sqrt of a Gamma(shape m, scale 1/m) draw, i.e. Nakagami(m, Omega = 1).
double sample_nakagami(double m, StreamRng& rng);

/// Nakagami(m) magnitude with a uniform phase on [0, 2 pi).
cplx sample_nakagami_complex(double m, StreamRng& rng);

/**
 * Draws h (m1), g (m2) and h_d (m3), in that order, each with independent
 * uniform phase. Requires 0 <= K < t_c.
 */
ChannelRealization sample_channel(int K, const SystemParams& params, StreamRng& rng);

}  // namespace lisopt

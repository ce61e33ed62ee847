#pragma once

#include "lisopt/estimator.hpp"

namespace lisopt {

/// Unit-modulus reflection coefficients of the surface during data
/// transmission.
struct PhaseConfig {
  CVector phi;
};

/// phi_i = exp(j arg(h_d / v_i)); co-phases every reflected path with the
/// direct one. Throws DegenerateInputError on a zero coefficient.
PhaseConfig optimal_phases(cplx h_d, std::span<const cplx> v);

/// Same rule applied to LS estimates. Invariant under a common positive
/// scaling of the estimates.
PhaseConfig estimated_phases(const EstimateResult& est);

/// sqrt(beta_d) h_d + sqrt(beta_l) phi^T v.
cplx combined_gain(const ChannelRealization& chan, const PhaseConfig& phases, const LinkGains& gains);

}  // namespace lisopt

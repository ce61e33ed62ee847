#include "lisopt/beamform.hpp"

#include <cmath>

#include <fmt/format.h>

#include "lisopt/errors.hpp"

namespace lisopt {

PhaseConfig optimal_phases(cplx h_d, std::span<const cplx> v) {
  if (h_d == cplx{}) throw DegenerateInputError("direct-link coefficient is exactly zero");
  PhaseConfig out;
  out.phi.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == cplx{}) {
      throw DegenerateInputError(fmt::format("cascaded coefficient {} is exactly zero", i));
    }
    out.phi.push_back(std::polar(1.0, std::arg(h_d / v[i])));
  }
  return out;
}

PhaseConfig estimated_phases(const EstimateResult& est) { return optimal_phases(est.h_d_eff_hat, est.v_eff_hat); }

cplx combined_gain(const ChannelRealization& chan, const PhaseConfig& phases, const LinkGains& gains) {
  if (static_cast<int>(phases.phi.size()) != chan.size()) {
    throw PreconditionError(
        fmt::format("phase vector has {} entries for {} surface elements", phases.phi.size(), chan.size()));
  }
  cplx reflected{};
  for (int i = 0; i < chan.size(); ++i) reflected += phases.phi[i] * chan.v()[i];
  return std::sqrt(gains.beta_d) * chan.h_d() + std::sqrt(gains.beta_l) * reflected;
}

}  // namespace lisopt

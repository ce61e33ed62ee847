#pragma once

#include "lisopt/rate.hpp"

namespace lisopt {

enum class KStarMethod { exact_root, high_snr, brute_force };

const char* to_string(KStarMethod method);

struct KStarResult {
  double k_real = 0.0;
  int k_star = 1;
  KStarMethod method = KStarMethod::exact_root;
  double r_tilde_at_k = 0.0;
  /// Set when the unrounded value fell outside [1, t_c - 1] and k_star was
  /// clamped into range.
  bool clamped = false;
};

/// Principal branch W0 for x >= 0, Halley iteration. Relative residual of
/// w e^w = x is at the level of a few ulps.
double lambert_w0(double x);

/**
 * Analytic derivative of the bound along t_p = K + 1:
 *   gamma_bar (t_c-K-1)(2aK+b) / (ln2 t_c (1 + gamma_bar q)) - log2(1 + gamma_bar q) / t_c
 * with q = a K^2 + b K + c. K in [0, t_c - 1].
 */
double rtilde_derivative(const SystemParams& params, double K);

/**
 * Root of rtilde_derivative on (0, t_c - 1) by bisection to |dK| < 1e-6,
 * then the better of the two neighbouring integers. Brackets come from a
 * unit-step scan of the derivative; if it crosses zero more than once (the
 * bound is not concave at very low SNR) the best crossing wins.
 */
KStarResult kstar_exact(const SystemParams& params);

/// floor((t_c - 1) / W(e sqrt(gamma_bar a) (t_c - 1)) + 1/2), clamped to
/// [1, t_c - 1].
KStarResult kstar_highsnr(const SystemParams& params);

/// (1 - (K+1)/t_c) log2(gamma_bar a K^2); requires gamma_bar a K^2 >= 1.
double rtilde_high_snr(const SystemParams& params, double K);

/// Exhaustive argmax over K = 1 .. t_c - 1, ties to the smaller K.
KStarResult kstar_bruteforce(const SystemParams& params);

}  // namespace lisopt

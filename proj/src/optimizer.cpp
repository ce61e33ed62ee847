#include "lisopt/optimizer.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <fmt/format.h>

#include "lisopt/errors.hpp"

namespace lisopt {
namespace {

void check_k_range(const SystemParams& params, double K) {
  if (!(K >= 0.0 && K <= params.t_c - 1.0)) {
    throw PreconditionError(fmt::format("K={} outside [0, t_c - 1] with t_c={}", K, params.t_c));
  }
}

int clamp_k(double k, int t_c) {
  if (!(k >= 1.0)) return 1;
  if (k > t_c - 1.0) return t_c - 1;
  return static_cast<int>(k);
}

}  // namespace

const char* to_string(KStarMethod method) {
  switch (method) {
    case KStarMethod::exact_root:
      return "exact_root";
    case KStarMethod::high_snr:
      return "high_snr";
    case KStarMethod::brute_force:
      return "brute_force";
  }
  return "?";
}

double lambert_w0(double x) {
  if (!(x >= 0.0)) throw PreconditionError(fmt::format("lambert_w0 needs x >= 0, got {}", x));
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return x;

  double w = std::log1p(x);
  if (x > std::numbers::e) {
    const double lx = std::log(x);
    w = lx - std::log(lx);
  }

  constexpr double eps = std::numeric_limits<double>::epsilon();
  for (int iter = 0; iter < 64; ++iter) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double wp1 = w + 1.0;
    const double step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
    w -= step;
    if (std::abs(step) <= 4.0 * eps * std::abs(w)) break;
  }
  return w;
}

double rtilde_derivative(const SystemParams& params, double K) {
  check_k_range(params, K);
  return BoundModel(params).derivative(K);
}

KStarResult kstar_exact(const SystemParams& params) {
  const BoundModel model(params);
  const int top = params.t_c - 1;

  // Where the bound is concave the derivative has one + to - crossing on
  // [0, t_c - 1]. Outside that regime (very low SNR, or a derivative that is
  // already negative at 0) scan at unit steps, refine every crossing by
  // bisection and keep the best; the left end is a candidate too.
  std::vector<double> roots;
  if (model.derivative(0.0) <= 0.0) roots.push_back(0.0);
  double prev = model.derivative(0.0);
  for (int k = 1; k <= top; ++k) {
    const double cur = model.derivative(k);
    if (prev > 0.0 && cur <= 0.0) {
      double lo = k - 1.0;
      double hi = k;
      while (hi - lo >= 1e-6) {
        const double mid = 0.5 * (lo + hi);
        (model.derivative(mid) > 0.0 ? lo : hi) = mid;
      }
      roots.push_back(0.5 * (lo + hi));
    }
    prev = cur;
  }
  if (roots.empty()) roots.push_back(top);

  KStarResult out;
  out.method = KStarMethod::exact_root;
  out.r_tilde_at_k = -std::numeric_limits<double>::infinity();
  for (double root : roots) {
    const int below = clamp_k(std::floor(root), params.t_c);
    const int above = clamp_k(std::ceil(root), params.t_c);
    const int best = model.value(above) > model.value(below) ? above : below;
    if (model.value(best) > out.r_tilde_at_k) {
      out.k_real = root;
      out.k_star = best;
      out.r_tilde_at_k = model.value(best);
    }
  }
  out.clamped = std::abs(out.k_star - out.k_real) > 1.0;
  return out;
}

KStarResult kstar_highsnr(const SystemParams& params) {
  const BoundModel model(params);
  const double span = params.t_c - 1.0;
  const double arg = std::numbers::e * std::sqrt(model.gamma_bar() * model.coefficients().a) * span;

  KStarResult out;
  out.method = KStarMethod::high_snr;
  out.k_real = span / lambert_w0(arg);
  const double rounded = std::floor(out.k_real + 0.5);
  out.k_star = clamp_k(rounded, params.t_c);
  out.clamped = out.k_star != rounded;
  out.r_tilde_at_k = model.value(out.k_star);
  return out;
}

double rtilde_high_snr(const SystemParams& params, double K) {
  check_k_range(params, K);
  const BoundModel model(params);
  const double snr = model.gamma_bar() * model.coefficients().a * K * K;
  // Small slack so that K = 1/sqrt(gamma_bar a), rounded, still qualifies.
  if (!(snr >= 1.0 - 1e-12)) {
    throw PreconditionError(fmt::format("high-SNR rate needs gamma_bar a K^2 >= 1, got {} at K={}", snr, K));
  }
  return model.high_snr_value(K);
}

KStarResult kstar_bruteforce(const SystemParams& params) {
  const BoundModel model(params);
  KStarResult out;
  out.method = KStarMethod::brute_force;
  out.r_tilde_at_k = -std::numeric_limits<double>::infinity();
  for (int k = 1; k <= params.t_c - 1; ++k) {
    const double r = model.value(k);
    if (r > out.r_tilde_at_k) {
      out.r_tilde_at_k = r;
      out.k_star = k;
    }
  }
  out.k_real = out.k_star;
  return out;
}

}  // namespace lisopt

// Test-only reference computations. Nothing here calls into the library's
// numerical code paths, so each can serve as an independent check.
#pragma once

#include <cmath>
#include <functional>
#include <numbers>

namespace oracle {

// Lanczos approximation (g = 7, n = 9), with reflection for x < 1/2.
inline double gamma_fn(double x) {
  static constexpr double coef[] = {0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                                    771.32342877765313,   -176.61502916214059,   12.507343278686905,
                                    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  if (x < 0.5) return std::numbers::pi / (std::sin(std::numbers::pi * x) * gamma_fn(1.0 - x));
  x -= 1.0;
  double a = coef[0];
  const double t = x + 7.5;
  for (int i = 1; i < 9; ++i) a += coef[i] / (x + i);
  return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, x + 0.5) * std::exp(-t) * a;
}

// Composite Simpson rule.
inline double simpson(const std::function<double(double)>& f, double lo, double hi, int intervals) {
  if (intervals % 2) ++intervals;
  const double h = (hi - lo) / intervals;
  double acc = f(lo) + f(hi);
  for (int i = 1; i < intervals; ++i) acc += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

// E[w] for unit-power Nakagami-m by integrating w times the density.
inline double nakagami_mean(double m) {
  const double norm = 2.0 * std::pow(m, m) / gamma_fn(m);
  auto integrand = [&](double w) { return w * norm * std::pow(w, 2.0 * m - 1.0) * std::exp(-m * w * w); };
  return simpson(integrand, 0.0, 12.0, 200000);
}

// W0(x) by bisection on w e^w - x.
inline double lambert_w_bisect(double x) {
  double lo = 0.0;
  double hi = std::max(1.0, std::log(x + 1.0) + 1.0);
  for (int i = 0; i < 400 && hi - lo > 0.0; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (mid * std::exp(mid) < x ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

inline double central_difference(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

// Direct transcription of the upper-bound formula along t_p = K + 1 from the
// raw link budget, without the library's gain or moment helpers.
struct BoundFormula {
  double beta_d;
  double beta_l;
  double gamma_bar;
  double m;  // common Nakagami shape
  int t_c;

  [[nodiscard]] double delta() const { return gamma_fn(m + 0.5) / (std::sqrt(m) * gamma_fn(m)); }
  [[nodiscard]] double quad(double K) const {
    const double d = delta();
    const double a = beta_l * std::pow(d, 4);
    const double b = beta_l * (1 - std::pow(d, 4)) + 2 * std::sqrt(beta_d * beta_l) * std::pow(d, 3);
    return a * K * K + b * K + beta_d;
  }
  [[nodiscard]] double rtilde(double K) const {
    return (1.0 - (K + 1.0) / t_c) * std::log2(1.0 + gamma_bar * quad(K));
  }
  [[nodiscard]] int argmax() const {
    int best = 1;
    for (int k = 2; k <= t_c - 1; ++k) {
      if (rtilde(k) > rtilde(best)) best = k;
    }
    return best;
  }
};

// Default link budget: C0 = -30 dB, d = (50, 5, 60) m, exponents (2, 3.5),
// noise -80 dBm.
inline BoundFormula default_budget(double p_dbw, int t_c, double m = 0.5) {
  const double c0 = 1e-3;
  return {c0 * std::pow(60.0, -3.5), c0 * c0 / (250.0 * 250.0), std::pow(10.0, p_dbw / 10.0) / 1e-11, m, t_c};
}

}  // namespace oracle

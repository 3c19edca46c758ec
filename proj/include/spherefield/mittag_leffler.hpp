#pragma once

// One-parameter Mittag-Leffler function E_beta(x) = sum_k x^k / Gamma(beta k + 1)
// on the non-positive real axis, 0 < beta <= 1.
//
// Three evaluation regimes:
//   * power series, for |x| <= series_limit and only while the largest series
//     term stays below max_series_term (otherwise cancellation destroys the
//     sum; for beta = 1/2 that already happens near |x| = 3);
//   * the real-line integral representation
//       E_beta(-r) = r sin(beta pi)/(beta pi)
//                    * int_0^inf exp(-w^(1/beta)) / (w^2 + 2 r w cos(beta pi) + r^2) dw
//     for everything between;
//   * the algebraic asymptotic expansion
//       E_beta(-r) ~ -sum_{k=1}^{K} (-r)^(-k) / Gamma(1 - beta k)
//     for |x| >= asymptotic_limit, K = min(floor(|x|), asymptotic_terms_cap).

#include <vector>

namespace spherefield {

struct MittagLefflerConfig {
  double series_limit = 5.0;
  double asymptotic_limit = 50.0;
  int asymptotic_terms_cap = 30;
  double max_series_term = 1e3;
  double integral_tolerance = 1e-13;
};

enum class MittagLefflerRegime { Exact, Series, Integral, Asymptotic };

/// E_beta for one fixed order; caches the Gamma reciprocals so repeated
/// evaluation (kernel sweeps) costs a few dozen flops in the outer regimes.
class MittagLeffler {
 public:
  explicit MittagLeffler(double beta, MittagLefflerConfig config = {});

  double beta() const { return beta_; }
  const MittagLefflerConfig& config() const { return config_; }

  /// E_beta(x) for x <= 0. Throws UnsupportedError for x > 0.
  double operator()(double x) const;

  MittagLefflerRegime regime(double x) const;

  // The individual regimes, exposed so their overlap can be tested. Each
  // takes x <= 0 and does no regime selection of its own.
  double series(double x) const;
  double integral(double x) const;
  double asymptotic(double x) const;

  /// Largest |x| for which the power series stays within max_series_term.
  double series_radius() const { return series_radius_; }

 private:
  double beta_;
  MittagLefflerConfig config_;
  double series_radius_ = 0.0;
  std::vector<double> series_coeff_;      // 1 / Gamma(beta k + 1)
  std::vector<double> asymptotic_coeff_;  // 1 / Gamma(1 - beta k), k >= 1
};

/// Convenience wrapper constructing a MittagLeffler per call.
double mittag_leffler(double beta, double x);

}  // namespace spherefield

#pragma once

// Second-order structure of the evolved fields:
//   Cov(X_t(x), X_s(y)) = sum_l (2l+1)/(4 pi) C_l T_l(t) T_l(s) Q_l(<x,y>)
// its Monte Carlo counterpart, and the lagged-covariance partial sums used to
// tell long-range from short-range dependence.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "spherefield/field.hpp"
#include "spherefield/fractional.hpp"
#include "spherefield/harmonics.hpp"

namespace spherefield {

double theoretical_covariance(const AngularPowerSpectrum& spectrum, const TemporalKernel& kernel,
                              double t, double s, double cos_angle, int l_max);

double variance(const AngularPowerSpectrum& spectrum, const TemporalKernel& kernel, double t,
                int l_max);

struct ModelRun {
  AngularPowerSpectrum spectrum;
  TemporalKernel kernel;
  int l_max = 64;
};

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
};

/// Mean of X_t(x) X_s(y) over n independent coefficient draws (the fields are
/// centred, so no mean is subtracted). Throws InsufficientSamplesError for
/// n < 100. Seeds are split per block of draws, so the result does not depend
/// on the worker count.
Estimate empirical_covariance(const ModelRun& run, const SphericalPoint& x, const SphericalPoint& y,
                              double t, double s, std::size_t n, std::uint64_t seed);

struct CovarianceRow {
  double cos_angle = 1.0;
  double t = 0.0;
  double s = 0.0;
  double theoretical = 0.0;
  double variance_t = 0.0;
  double variance_s = 0.0;
  bool has_empirical = false;
  Estimate empirical;
};

struct CovarianceReport {
  std::string model;
  int l_max = 0;
  std::size_t n_realizations = 0;
  std::vector<CovarianceRow> rows;
};

/// Every (cos_angle, (t, s)) combination; empirical columns only when
/// n_realizations > 0. Points are the north pole and a point on the phi = 0
/// meridian at the requested angle.
CovarianceReport covariance_report(const ModelRun& run, const std::vector<double>& cos_angles,
                                   const std::vector<std::pair<double, double>>& times,
                                   std::size_t n_realizations, std::uint64_t seed);

enum class Dependence { LongRange, ShortRange, Inconclusive };
std::string to_string(Dependence d);

struct DependenceOptions {
  double cos_angle = 1.0;
  /// Degrees below this are dropped from the lagged covariance. 0 is the
  /// faithful sum; 1 removes the monopole (diagnostic only).
  int min_degree = 0;
};

struct DependenceVerdict {
  std::vector<long> checkpoints;
  std::vector<double> partial_sums;  ///< S(h) at each checkpoint
  double growth_fit = 0.0;           ///< slope of log|S| against log h on [H/10, H]
  double tail_increment = 0.0;       ///< |S(H) - S(H/2)| / |S(H)|, 0 when S(H) = 0
  long horizon = 0;
  Dependence verdict = Dependence::Inconclusive;

  /// S(h) at the largest checkpoint <= h.
  double partial_sum_at(long h) const;
};

/// Partial sums S(H') = sum_{h=1..H'} Cov(X_{t+h}(x), X_t(y)) at geometric
/// checkpoints up to H. LONG_RANGE when the fitted slope exceeds 0.05,
/// SHORT_RANGE when the tail increment is below 1e-6, INCONCLUSIVE otherwise.
DependenceVerdict dependence_diagnostic(const AngularPowerSpectrum& spectrum,
                                        const TemporalKernel& kernel, double t, long horizon,
                                        int l_max, DependenceOptions options = {});

/// Relative tail increment |S(h) - S(h/2)| / |S(h)| for any checkpoint h.
double relative_tail_increment(const DependenceVerdict& v, long h);

nlohmann::ordered_json to_json(const CovarianceReport& report);
nlohmann::ordered_json to_json(const DependenceVerdict& verdict);
void write_covariance_csv(std::ostream& out, const CovarianceReport& report);
void write_partial_sums_csv(std::ostream& out, const DependenceVerdict& verdict);

}  // namespace spherefield

#include "spherefield/mittag_leffler.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/sin_pi.hpp>

#include "spherefield/errors.hpp"
#include "spherefield/harmonics.hpp"

namespace spherefield {

namespace {

constexpr double kLogTiny = -46.0;  // ln(1e-20)
constexpr std::size_t kMaxSeriesTerms = 60000;

// Whether some term r^k / Gamma(beta k + 1) exceeds exp(log_bound). The
// log-terms are concave in k, so the scan stops at the first decrease.
bool series_term_exceeds(double beta, double r, double log_bound) {
  if (r <= 0.0) return log_bound < 0.0;
  const double lr = std::log(r);
  double prev = 0.0;
  for (std::size_t k = 1; k < kMaxSeriesTerms; ++k) {
    const double kk = static_cast<double>(k);
    const double lt = kk * lr - std::lgamma(beta * kk + 1.0);
    if (lt > log_bound) return true;
    if (lt < prev) return false;
    prev = lt;
  }
  return false;
}

}  // namespace

MittagLeffler::MittagLeffler(double beta, MittagLefflerConfig config)
    : beta_(beta), config_(config) {
  if (!(beta > 0.0 && beta <= 1.0)) {
    throw DomainError("Mittag-Leffler order must lie in (0, 1], got " + std::to_string(beta));
  }

  const double log_bound = std::log(config_.max_series_term);
  if (!series_term_exceeds(beta_, config_.series_limit, log_bound)) {
    series_radius_ = config_.series_limit;
  } else {
    double lo = 0.0;
    double hi = config_.series_limit;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (series_term_exceeds(beta_, mid, log_bound)) hi = mid; else lo = mid;
    }
    series_radius_ = lo;
  }

  const double lr = std::log(std::max(series_radius_, 1.0));
  double prev = 0.0;
  for (std::size_t k = 0; k < kMaxSeriesTerms; ++k) {
    const double kk = static_cast<double>(k);
    const double lg = std::lgamma(beta_ * kk + 1.0);
    series_coeff_.push_back(std::exp(-lg));
    const double lt = kk * lr - lg;
    if (k > 0 && lt < kLogTiny && lt < prev) break;
    prev = lt;
  }

  asymptotic_coeff_.assign(static_cast<std::size_t>(config_.asymptotic_terms_cap) + 1, 0.0);
  for (int k = 1; k <= config_.asymptotic_terms_cap; ++k) {
    // 1/Gamma(1 - z) = Gamma(z) sin(pi z) / pi, exactly zero at the poles.
    const double z = beta_ * k;
    const double sp = boost::math::sin_pi(z);
    asymptotic_coeff_[static_cast<std::size_t>(k)] = sp == 0.0 ? 0.0 : std::tgamma(z) * sp / kPi;
  }
}

MittagLefflerRegime MittagLeffler::regime(double x) const {
  const double r = std::abs(x);
  if (x == 0.0 || beta_ == 1.0) return MittagLefflerRegime::Exact;
  if (r <= std::min(config_.series_limit, series_radius_)) return MittagLefflerRegime::Series;
  if (r >= config_.asymptotic_limit) return MittagLefflerRegime::Asymptotic;
  return MittagLefflerRegime::Integral;
}

double MittagLeffler::operator()(double x) const {
  if (std::isnan(x)) throw DomainError("Mittag-Leffler argument is NaN");
  if (x > 0.0) {
    throw UnsupportedError("Mittag-Leffler is only implemented on the non-positive axis, got x=" +
                           std::to_string(x));
  }
  switch (regime(x)) {
    case MittagLefflerRegime::Exact:
      return x == 0.0 ? 1.0 : std::exp(x);
    case MittagLefflerRegime::Series:
      return series(x);
    case MittagLefflerRegime::Integral:
      return integral(x);
    case MittagLefflerRegime::Asymptotic:
      return asymptotic(x);
  }
  return 0.0;
}

double MittagLeffler::series(double x) const {
  double sum = 0.0;
  double power = 1.0;
  double prev = 0.0;
  for (double c : series_coeff_) {
    const double term = std::abs(c * power);
    sum += c * power;
    if (term < 1e-20 && term < prev) break;
    prev = term;
    power *= x;
    if (power == 0.0) break;
  }
  return sum;
}

double MittagLeffler::integral(double x) const {
  const double r = std::abs(x);
  if (r == 0.0) return 1.0;
  const double c = std::cos(beta_ * kPi);
  const double s = std::sin(beta_ * kPi);
  const double inv_beta = 1.0 / beta_;
  const double upper = std::pow(745.0, beta_);

  auto integrand = [=](double w) {
    const double u = w + r * c;
    return std::exp(-std::pow(w, inv_beta)) / (u * u + r * r * s * s);
  };

  std::vector<double> cuts{0.0, upper, r, 1.0};
  const double peak = -r * c;
  const double width = r * s;
  if (peak > 0.0) {
    for (double k : {-8.0, -1.0, 0.0, 1.0, 8.0}) cuts.push_back(peak + k * width);
  }
  std::vector<double> points;
  for (double v : cuts) {
    if (v >= 0.0 && v <= upper) points.push_back(v);
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  using Rule = boost::math::quadrature::gauss_kronrod<double, 31>;
  const double prefactor = r * s / (beta_ * kPi);
  // Absolute error budget per segment on the final value; refining a far tail
  // segment to a relative tolerance only burns evaluations on roundoff.
  const double budget = config_.integral_tolerance /
                        (prefactor * static_cast<double>(points.size()));
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    double error = 0.0;
    double l1 = 0.0;
    double piece = Rule::integrate(integrand, points[i], points[i + 1], 0, 0.0, &error, &l1);
    if (error > budget && l1 > 0.0) {
      const double tol = std::max(config_.integral_tolerance, budget / l1);
      piece = Rule::integrate(integrand, points[i], points[i + 1], 15, tol);
    }
    total += piece;
  }
  return prefactor * total;
}

double MittagLeffler::asymptotic(double x) const {
  const double r = std::abs(x);
  const int terms = std::max(1, std::min(static_cast<int>(std::floor(r)), config_.asymptotic_terms_cap));
  const double inv = -1.0 / r;  // (-r)^{-1}
  double power = 1.0;
  double sum = 0.0;
  for (int k = 1; k <= terms; ++k) {
    power *= inv;
    sum -= power * asymptotic_coeff_[static_cast<std::size_t>(k)];
  }
  return sum;
}

double mittag_leffler(double beta, double x) { return MittagLeffler(beta)(x); }

}  // namespace spherefield

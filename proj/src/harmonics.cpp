#include "spherefield/harmonics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spherefield/errors.hpp"

namespace spherefield {

namespace {

// Above this degree the raw recurrence for Q_{l,m} is replaced by the
// normalized one; (l+m)! overflows a double near l + m = 170.
constexpr int kRawRecurrenceMaxDegree = 64;

void check_degree(int l) {
  if (l < 0) throw DomainError("degree must be non-negative, got " + std::to_string(l));
}

void check_unit_interval(double z) {
  if (!(std::abs(z) <= 1.0)) {
    throw DomainError("argument must lie in [-1, 1], got " + std::to_string(z));
  }
}

void check_order(int l, int m) {
  check_degree(l);
  if (m < 0 || m > l) {
    throw DomainError("order must satisfy 0 <= m <= l, got l=" + std::to_string(l) +
                      " m=" + std::to_string(m));
  }
}

double clamp_unit(double v) { return std::clamp(v, -1.0, 1.0); }

}  // namespace

SphericalPoint::SphericalPoint(double theta_, double phi_) {
  if (!(theta_ >= 0.0 && theta_ <= kPi)) {
    throw DomainError("colatitude must lie in [0, pi], got " + std::to_string(theta_));
  }
  if (!std::isfinite(phi_)) throw DomainError("longitude must be finite");
  double p = std::fmod(phi_, kTwoPi);
  if (p < 0.0) p += kTwoPi;
  if (p >= kTwoPi) p = 0.0;
  theta = theta_;
  phi = p;
}

SphericalPoint SphericalPoint::from_cartesian(const Vec3& v) {
  const double norm = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  if (!(norm > 0.0)) throw DomainError("cannot project the zero vector onto the sphere");
  const double th = std::acos(clamp_unit(v[2] / norm));
  const double ph = std::atan2(v[1], v[0]);
  return SphericalPoint(th, ph);
}

Vec3 SphericalPoint::cartesian() const {
  const double st = std::sin(theta);
  return {st * std::cos(phi), st * std::sin(phi), std::cos(theta)};
}

Multipole::Multipole(int l_, int m_) : l(l_), m(m_) {
  check_degree(l_);
  if (std::abs(m_) > l_) {
    throw DomainError("order must satisfy |m| <= l, got l=" + std::to_string(l_) +
                      " m=" + std::to_string(m_));
  }
}

double legendre_poly(int l, double z) {
  check_degree(l);
  check_unit_interval(z);
  double prev = 1.0;
  if (l == 0) return prev;
  double cur = z;
  for (int k = 1; k < l; ++k) {
    const double next = ((2.0 * k + 1.0) * z * cur - k * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return clamp_unit(cur);
}

std::vector<double> legendre_poly_batch(int l_max, double z) {
  check_degree(l_max);
  check_unit_interval(z);
  std::vector<double> out(static_cast<std::size_t>(l_max) + 1);
  double prev = 1.0;
  out[0] = prev;
  if (l_max == 0) return out;
  double cur = z;
  out[1] = clamp_unit(cur);
  for (int k = 1; k < l_max; ++k) {
    const double next = ((2.0 * k + 1.0) * z * cur - k * prev) / (k + 1.0);
    prev = cur;
    cur = next;
    out[static_cast<std::size_t>(k) + 1] = clamp_unit(cur);
  }
  return out;
}

double normalized_associated_legendre(int l, int m, double z) {
  check_order(l, m);
  check_unit_interval(z);
  const double s = std::sqrt(std::max(0.0, (1.0 - z) * (1.0 + z)));
  double pmm = 1.0 / std::sqrt(kFourPi);
  for (int k = 1; k <= m; ++k) {
    pmm *= -std::sqrt((2.0 * k + 1.0) / (2.0 * k)) * s;
  }
  if (l == m) return pmm;
  double p_prev = pmm;
  double p_cur = std::sqrt(2.0 * m + 3.0) * z * pmm;
  for (int k = m + 2; k <= l; ++k) {
    const double kk = static_cast<double>(k);
    const double a = std::sqrt((4.0 * kk * kk - 1.0) / (kk * kk - static_cast<double>(m) * m));
    const double b = std::sqrt(((kk - 1.0) * (kk - 1.0) - static_cast<double>(m) * m) /
                               (4.0 * (kk - 1.0) * (kk - 1.0) - 1.0));
    const double next = a * (z * p_cur - b * p_prev);
    p_prev = p_cur;
    p_cur = next;
  }
  return p_cur;
}

double associated_legendre(int l, int m, double z) {
  check_order(l, m);
  check_unit_interval(z);
  if (l > kRawRecurrenceMaxDegree) {
    const double log_ratio = std::lgamma(l - m + 1.0) - std::lgamma(l + m + 1.0);
    const double norm = std::sqrt((2.0 * l + 1.0) / kFourPi) * std::exp(0.5 * log_ratio);
    return normalized_associated_legendre(l, m, z) / norm;
  }
  const double s = std::sqrt(std::max(0.0, (1.0 - z) * (1.0 + z)));
  double pmm = 1.0;
  for (int k = 1; k <= m; ++k) pmm *= -(2.0 * k - 1.0) * s;
  if (l == m) return pmm;
  double p_prev = pmm;
  double p_cur = z * (2.0 * m + 1.0) * pmm;
  for (int k = m + 2; k <= l; ++k) {
    const double next = ((2.0 * k - 1.0) * z * p_cur - (k + m - 1.0) * p_prev) / (k - m);
    p_prev = p_cur;
    p_cur = next;
  }
  return p_cur;
}

std::vector<double> normalized_legendre_table(int l_max, double z) {
  check_degree(l_max);
  check_unit_interval(z);
  std::vector<double> table(tri_index(l_max, l_max) + 1, 0.0);
  const double s = std::sqrt(std::max(0.0, (1.0 - z) * (1.0 + z)));
  double pmm = 1.0 / std::sqrt(kFourPi);
  for (int m = 0; m <= l_max; ++m) {
    if (m > 0) pmm *= -std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s;
    table[tri_index(m, m)] = pmm;
    if (m == l_max) break;
    double p_prev = pmm;
    double p_cur = std::sqrt(2.0 * m + 3.0) * z * pmm;
    table[tri_index(m + 1, m)] = p_cur;
    const double mm = static_cast<double>(m) * m;
    for (int l = m + 2; l <= l_max; ++l) {
      const double ll = static_cast<double>(l);
      const double a = std::sqrt((4.0 * ll * ll - 1.0) / (ll * ll - mm));
      const double b = std::sqrt(((ll - 1.0) * (ll - 1.0) - mm) / (4.0 * (ll - 1.0) * (ll - 1.0) - 1.0));
      const double next = a * (z * p_cur - b * p_prev);
      p_prev = p_cur;
      p_cur = next;
      table[tri_index(l, m)] = p_cur;
    }
  }
  return table;
}

std::complex<double> spherical_harmonic(const Multipole& lm, const SphericalPoint& x) {
  const int am = std::abs(lm.m);
  const double p = normalized_associated_legendre(lm.l, am, std::cos(x.theta));
  const std::complex<double> y = std::polar(p, am * x.phi);
  if (lm.m >= 0) return y;
  return (am % 2 == 0 ? 1.0 : -1.0) * std::conj(y);
}

std::complex<double> addition_sum_complex(int l, const SphericalPoint& x,
                                          const SphericalPoint& y) {
  check_degree(l);
  const auto px = normalized_legendre_table(l, std::cos(x.theta));
  const auto py = normalized_legendre_table(l, std::cos(y.theta));
  std::complex<double> sum{0.0, 0.0};
  for (int m = -l; m <= l; ++m) {
    const int am = std::abs(m);
    const double sign = (m < 0 && am % 2 == 1) ? -1.0 : 1.0;
    // Y_{l,-|m|} = (-1)^m conj(Y_{l,|m|}) equals this for both signs of m.
    const std::complex<double> yx = sign * std::polar(px[tri_index(l, am)], m * x.phi);
    const std::complex<double> yy = sign * std::polar(py[tri_index(l, am)], m * y.phi);
    sum += yy * std::conj(yx);
  }
  return sum;
}

double addition_sum(int l, const SphericalPoint& x, const SphericalPoint& y) {
  return addition_sum_complex(l, x, y).real();
}

double inner_product(const SphericalPoint& x, const SphericalPoint& y) {
  const double v = std::cos(x.theta) * std::cos(y.theta) +
                   std::sin(x.theta) * std::sin(y.theta) * std::cos(x.phi - y.phi);
  return clamp_unit(v);
}

}  // namespace spherefield

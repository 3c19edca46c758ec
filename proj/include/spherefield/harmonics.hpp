#pragma once

// Legendre polynomials, associated Legendre functions and fully normalized
// complex spherical harmonics on the unit sphere.
//
// Convention: Y_{l,m}(theta, phi) = N_{l,m} Q_{l,m}(cos theta) e^{i m phi} with
// N_{l,m} = sqrt((2l+1)/(4 pi) (l-m)!/(l+m)!) and the Condon-Shortley phase
// (-1)^m carried by Q_{l,m}. The harmonics are orthonormal with respect to
// the unweighted surface measure.

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

namespace spherefield {

using Vec3 = std::array<double, 3>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kFourPi = 4.0 * kPi;

/// A point on the unit sphere in colatitude/longitude coordinates.
struct SphericalPoint {
  double theta = 0.0;  ///< colatitude in [0, pi]
  double phi = 0.0;    ///< longitude in [0, 2 pi)

  SphericalPoint() = default;
  /// Validates theta and wraps phi into [0, 2 pi). Throws DomainError.
  SphericalPoint(double theta_, double phi_);

  static SphericalPoint from_cartesian(const Vec3& v);
  Vec3 cartesian() const;
};

/// Degree/order pair with |m| <= l.
struct Multipole {
  int l = 0;
  int m = 0;

  Multipole() = default;
  Multipole(int l_, int m_);

  long long eigenvalue() const { return static_cast<long long>(l) * (l + 1); }
};

/// mu_l = l(l+1), the Laplace-Beltrami eigenvalue magnitude.
inline double eigenvalue(int l) { return static_cast<double>(l) * (l + 1); }

/// Legendre polynomial Q_l(z) by the three-term recurrence.
double legendre_poly(int l, double z);

/// Q_0(z) .. Q_{l_max}(z), identical to legendre_poly element by element.
std::vector<double> legendre_poly_batch(int l_max, double z);

/// Unnormalized associated Legendre function Q_{l,m}(z), 0 <= m <= l.
double associated_legendre(int l, int m, double z);

/// N_{l,m} Q_{l,m}(z) for a single (l, m), 0 <= m <= l, computed without
/// factorials so it stays finite for large l.
double normalized_associated_legendre(int l, int m, double z);

/// Triangular index of (l, m), 0 <= m <= l, in a normalized Legendre table.
inline std::size_t tri_index(int l, int m) {
  return static_cast<std::size_t>(l) * (l + 1) / 2 + static_cast<std::size_t>(m);
}

/// Table of N_{l,m} Q_{l,m}(z) for all 0 <= m <= l <= l_max, laid out by
/// tri_index.
std::vector<double> normalized_legendre_table(int l_max, double z);

std::complex<double> spherical_harmonic(const Multipole& lm, const SphericalPoint& x);

/// Sum over m of Y_{l,m}(y) conj(Y_{l,m}(x)), summed directly.
std::complex<double> addition_sum_complex(int l, const SphericalPoint& x,
                                          const SphericalPoint& y);

/// Real part of addition_sum_complex; equals (2l+1)/(4 pi) Q_l(<x,y>).
double addition_sum(int l, const SphericalPoint& x, const SphericalPoint& y);

/// Cosine of the great-circle distance, clamped to [-1, 1].
double inner_product(const SphericalPoint& x, const SphericalPoint& y);

}  // namespace spherefield

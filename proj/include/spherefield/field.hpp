#pragma once

// Isotropic Gaussian random fields on the unit sphere: power spectrum,
// harmonic coefficients, grids, synthesis/analysis, and the spectral action of
// the temporal kernels and of the subordinated generator D_M (multiplication
// by -Psi(mu_l) on degree l).

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "spherefield/fractional.hpp"
#include "spherefield/harmonics.hpp"
#include "spherefield/rng.hpp"
#include "spherefield/subordinate.hpp"

namespace spherefield {

class AngularPowerSpectrum {
 public:
  AngularPowerSpectrum() = default;
  /// Throws DomainError on negative or non-finite entries.
  explicit AngularPowerSpectrum(std::vector<double> values,
                                std::optional<double> decay_exponent = std::nullopt);

  /// C_l = amplitude (1 + l)^(-exponent), l = 0..l_max.
  static AngularPowerSpectrum power_law(double amplitude, double exponent, int l_max);
  /// All-zero spectrum.
  static AngularPowerSpectrum zero(int l_max);
  /// C_l = value at a single degree, zero elsewhere.
  static AngularPowerSpectrum single(int l, double value, int l_max);

  int l_max() const { return static_cast<int>(values_.size()) - 1; }
  /// C_l, or 0 beyond the stored range.
  double operator[](int l) const;
  const std::vector<double>& values() const { return values_; }
  const std::optional<double>& decay_exponent() const { return decay_exponent_; }

  /// sum_l (2l+1) C_l / (4 pi), the pointwise variance of the field.
  double total_variance() const;

 private:
  std::vector<double> values_;
  std::optional<double> decay_exponent_;
};

/// Complex a_{l,m}, 0 <= l <= l_max, -l <= m <= l, stored densely at
/// index l^2 + l + m.
class HarmonicCoefficients {
 public:
  HarmonicCoefficients() = default;
  explicit HarmonicCoefficients(int l_max);

  int l_max() const { return l_max_; }
  std::size_t size() const { return data_.size(); }

  std::complex<double>& operator()(int l, int m) { return data_[index(l, m)]; }
  const std::complex<double>& operator()(int l, int m) const { return data_[index(l, m)]; }

  /// Sets a_{l,m} and its partner a_{l,-m} = (-1)^m conj(a_{l,m}). For m = 0
  /// the imaginary part is dropped.
  void set_symmetric(int l, int m, std::complex<double> value);

  /// Whether a_{l,-m} = (-1)^m conj(a_{l,m}) holds to tol (relative to the
  /// largest magnitude) and a_{l,0} is real.
  bool is_real_symmetric(double tol = 1e-12) const;

  double max_abs() const;
  const std::vector<std::complex<double>>& data() const { return data_; }
  std::vector<std::complex<double>>& data() { return data_; }

  static std::size_t index(int l, int m) {
    return static_cast<std::size_t>(l) * static_cast<std::size_t>(l) +
           static_cast<std::size_t>(l + m);
  }

 private:
  int l_max_ = -1;
  std::vector<std::complex<double>> data_;
};

enum class GridKind { GaussLegendre, Equiangular };

/// Colatitude x longitude grid with row-major values (theta outer).
/// GaussLegendre rows sit at Gauss nodes in cos(theta); Equiangular rows are
/// theta_j = pi j / (n_theta - 1) including both poles, weighted by
/// Clenshaw-Curtis. Longitudes are phi_k = 2 pi k / n_phi in both cases.
struct FieldGrid {
  GridKind kind = GridKind::GaussLegendre;
  int n_theta = 0;
  int n_phi = 0;
  std::vector<double> thetas;
  std::vector<double> phis;
  std::vector<double> theta_weights;  ///< quadrature weights in cos(theta)
  std::vector<double> values;

  double& value(int i, int j) { return values[static_cast<std::size_t>(i) * n_phi + j]; }
  double value(int i, int j) const { return values[static_cast<std::size_t>(i) * n_phi + j]; }
};

FieldGrid make_grid(GridKind kind, int n_theta, int n_phi);

/// Draws a_{l,0} ~ N(0, C_l) and, for m > 0, a_{l,m} = (u + i v)/sqrt(2) with
/// u, v ~ N(0, C_l); negative orders by symmetry.
HarmonicCoefficients sample_coefficients(const AngularPowerSpectrum& spectrum, std::uint64_t seed);
void sample_coefficients(const AngularPowerSpectrum& spectrum, Rng& rng, HarmonicCoefficients& out);

/// sum_{l,m} a_{l,m} Y_{l,m} on every grid node. Throws ContractError if the
/// coefficients are not real-symmetric or the imaginary residue exceeds 1e-10.
FieldGrid synthesize(const HarmonicCoefficients& coeffs, FieldGrid grid);

/// Field value at one point.
double synthesize_at(const HarmonicCoefficients& coeffs, const SphericalPoint& x);

/// Projection of grid values onto Y_{l,m}, l <= l_max, by the grid's
/// quadrature. Requires n_theta >= 2(l_max + 1) and n_phi >= 2 l_max + 2,
/// else ResolutionError.
HarmonicCoefficients analyze(const FieldGrid& grid, int l_max);

/// a_{l,m} -> T_l(t) a_{l,m}.
HarmonicCoefficients evolve(const HarmonicCoefficients& coeffs, const TemporalKernel& kernel,
                            double t);

/// a_{l,m} -> (gamma + Psi(mu_l))^exponent a_{l,m}. exponent = -beta is the
/// Bessel potential (gamma - D_M)^(-beta), +beta its inverse.
HarmonicCoefficients apply_operator_power(const HarmonicCoefficients& coeffs,
                                          const SubordinatorSymbol& symbol, double gamma,
                                          double exponent);

/// a_{l,m} -> -Psi(mu_l) a_{l,m}.
HarmonicCoefficients apply_D_M(const HarmonicCoefficients& coeffs, const SubordinatorSymbol& symbol);

struct KernelSum {
  double value = 0.0;
  /// Magnitude of the last retained term, Psi(mu_L)(2L+1)/(4 pi).
  double tail_estimate = 0.0;
};

/// Truncated J(x, y) = sum_{l <= l_max} Psi(mu_l)(2l+1)/(4 pi) Q_l(<x,y>).
KernelSum operator_kernel_J(const SubordinatorSymbol& symbol, const SphericalPoint& x,
                            const SphericalPoint& y, int l_max);

}  // namespace spherefield

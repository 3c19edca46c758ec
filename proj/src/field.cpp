#include "spherefield/field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spherefield/errors.hpp"
#include "spherefield/parallel.hpp"
#include "spherefield/quadrature.hpp"

namespace spherefield {

namespace {

constexpr double kImagResidueTol = 1e-10;

double parity(int m) { return (m % 2 == 0) ? 1.0 : -1.0; }

// e^{i m phi_k} for m = 0..l_max, laid out [k * (l_max+1) + m].
std::vector<std::complex<double>> phase_table(const std::vector<double>& phis, int l_max) {
  const std::size_t width = static_cast<std::size_t>(l_max) + 1;
  std::vector<std::complex<double>> table(phis.size() * width);
  for (std::size_t k = 0; k < phis.size(); ++k) {
    for (int m = 0; m <= l_max; ++m) table[k * width + m] = std::polar(1.0, m * phis[k]);
  }
  return table;
}

}  // namespace

AngularPowerSpectrum::AngularPowerSpectrum(std::vector<double> values,
                                           std::optional<double> decay_exponent)
    : values_(std::move(values)), decay_exponent_(decay_exponent) {
  if (values_.empty()) throw DomainError("power spectrum needs at least C_0");
  for (std::size_t l = 0; l < values_.size(); ++l) {
    if (!(values_[l] >= 0.0) || !std::isfinite(values_[l])) {
      throw DomainError("C_" + std::to_string(l) + " must be finite and >= 0, got " +
                        std::to_string(values_[l]));
    }
  }
}

AngularPowerSpectrum AngularPowerSpectrum::power_law(double amplitude, double exponent, int l_max) {
  if (l_max < 0) throw DomainError("l_max must be non-negative");
  std::vector<double> v(static_cast<std::size_t>(l_max) + 1);
  for (int l = 0; l <= l_max; ++l) v[static_cast<std::size_t>(l)] = amplitude * std::pow(1.0 + l, -exponent);
  return AngularPowerSpectrum(std::move(v), exponent);
}

AngularPowerSpectrum AngularPowerSpectrum::zero(int l_max) {
  if (l_max < 0) throw DomainError("l_max must be non-negative");
  return AngularPowerSpectrum(std::vector<double>(static_cast<std::size_t>(l_max) + 1, 0.0));
}

AngularPowerSpectrum AngularPowerSpectrum::single(int l, double value, int l_max) {
  if (l < 0 || l > l_max) throw DomainError("degree outside the spectrum range");
  std::vector<double> v(static_cast<std::size_t>(l_max) + 1, 0.0);
  v[static_cast<std::size_t>(l)] = value;
  return AngularPowerSpectrum(std::move(v));
}

double AngularPowerSpectrum::operator[](int l) const {
  if (l < 0 || l > l_max()) return 0.0;
  return values_[static_cast<std::size_t>(l)];
}

double AngularPowerSpectrum::total_variance() const {
  double s = 0.0;
  for (int l = 0; l <= l_max(); ++l) s += (2.0 * l + 1.0) * values_[static_cast<std::size_t>(l)];
  return s / kFourPi;
}

HarmonicCoefficients::HarmonicCoefficients(int l_max) : l_max_(l_max) {
  if (l_max < 0) throw DomainError("l_max must be non-negative");
  data_.assign(static_cast<std::size_t>(l_max + 1) * static_cast<std::size_t>(l_max + 1), {0.0, 0.0});
}

void HarmonicCoefficients::set_symmetric(int l, int m, std::complex<double> value) {
  if (m == 0) {
    (*this)(l, 0) = {value.real(), 0.0};
    return;
  }
  (*this)(l, m) = value;
  (*this)(l, -m) = parity(m) * std::conj(value);
}

bool HarmonicCoefficients::is_real_symmetric(double tol) const {
  const double scale = std::max(1.0, max_abs());
  for (int l = 0; l <= l_max_; ++l) {
    if (std::abs((*this)(l, 0).imag()) > tol * scale) return false;
    for (int m = 1; m <= l; ++m) {
      if (std::abs((*this)(l, -m) - parity(m) * std::conj((*this)(l, m))) > tol * scale) return false;
    }
  }
  return true;
}

double HarmonicCoefficients::max_abs() const {
  double best = 0.0;
  for (const auto& c : data_) best = std::max(best, std::abs(c));
  return best;
}

FieldGrid make_grid(GridKind kind, int n_theta, int n_phi) {
  if (n_theta < 2 || n_phi < 1) throw ResolutionError("grid needs n_theta >= 2 and n_phi >= 1");
  FieldGrid grid;
  grid.kind = kind;
  grid.n_theta = n_theta;
  grid.n_phi = n_phi;
  const QuadratureRule rule =
      kind == GridKind::GaussLegendre ? gauss_legendre(n_theta) : clenshaw_curtis(n_theta);
  grid.thetas.resize(static_cast<std::size_t>(n_theta));
  for (int i = 0; i < n_theta; ++i) {
    grid.thetas[static_cast<std::size_t>(i)] =
        kind == GridKind::Equiangular ? kPi * i / (n_theta - 1)
                                      : std::acos(rule.nodes[static_cast<std::size_t>(i)]);
  }
  grid.theta_weights = rule.weights;
  grid.phis.resize(static_cast<std::size_t>(n_phi));
  for (int k = 0; k < n_phi; ++k) grid.phis[static_cast<std::size_t>(k)] = kTwoPi * k / n_phi;
  grid.values.assign(static_cast<std::size_t>(n_theta) * static_cast<std::size_t>(n_phi), 0.0);
  return grid;
}

void sample_coefficients(const AngularPowerSpectrum& spectrum, Rng& rng, HarmonicCoefficients& out) {
  const int l_max = spectrum.l_max();
  if (out.l_max() != l_max) out = HarmonicCoefficients(l_max);
  for (int l = 0; l <= l_max; ++l) {
    const double sd = std::sqrt(spectrum[l]);
    out.set_symmetric(l, 0, {sd * rng.normal(), 0.0});
    for (int m = 1; m <= l; ++m) {
      const double u = rng.normal();
      const double v = rng.normal();
      out.set_symmetric(l, m, std::complex<double>(u, v) * (sd / std::sqrt(2.0)));
    }
  }
}

HarmonicCoefficients sample_coefficients(const AngularPowerSpectrum& spectrum, std::uint64_t seed) {
  Rng rng(seed);
  HarmonicCoefficients out(spectrum.l_max());
  sample_coefficients(spectrum, rng, out);
  return out;
}

FieldGrid synthesize(const HarmonicCoefficients& coeffs, FieldGrid grid) {
  if (!coeffs.is_real_symmetric()) {
    throw ContractError("coefficients violate a_{l,-m} = (-1)^m conj(a_{l,m}); the field would be complex");
  }
  const int l_max = coeffs.l_max();
  const auto phases = phase_table(grid.phis, l_max);
  const std::size_t width = static_cast<std::size_t>(l_max) + 1;
  std::vector<double> residue(static_cast<std::size_t>(grid.n_theta), 0.0);

  parallel_for_chunks(static_cast<std::size_t>(grid.n_theta), [&](std::size_t i) {
    const auto table = normalized_legendre_table(l_max, std::cos(grid.thetas[i]));
    // Row Fourier coefficients F_m for m = -l_max..l_max, offset by l_max.
    std::vector<std::complex<double>> f(2 * width - 1, {0.0, 0.0});
    for (int m = 0; m <= l_max; ++m) {
      std::complex<double> pos{0.0, 0.0};
      std::complex<double> neg{0.0, 0.0};
      for (int l = m; l <= l_max; ++l) {
        const double p = table[tri_index(l, m)];
        pos += coeffs(l, m) * p;
        if (m > 0) neg += coeffs(l, -m) * p;
      }
      f[static_cast<std::size_t>(l_max + m)] = pos;
      if (m > 0) f[static_cast<std::size_t>(l_max - m)] = parity(m) * neg;
    }
    double worst = 0.0;
    for (int k = 0; k < grid.n_phi; ++k) {
      const auto* ph = &phases[static_cast<std::size_t>(k) * width];
      std::complex<double> v = f[static_cast<std::size_t>(l_max)];
      for (int m = 1; m <= l_max; ++m) {
        v += f[static_cast<std::size_t>(l_max + m)] * ph[m] +
             f[static_cast<std::size_t>(l_max - m)] * std::conj(ph[m]);
      }
      grid.value(static_cast<int>(i), k) = v.real();
      worst = std::max(worst, std::abs(v.imag()));
    }
    residue[i] = worst;
  });

  double max_value = 0.0;
  for (double v : grid.values) max_value = std::max(max_value, std::abs(v));
  const double worst = residue.empty() ? 0.0 : *std::max_element(residue.begin(), residue.end());
  if (worst > kImagResidueTol * std::max(1.0, max_value)) {
    throw ContractError("synthesis left an imaginary residue of " + std::to_string(worst));
  }
  return grid;
}

double synthesize_at(const HarmonicCoefficients& coeffs, const SphericalPoint& x) {
  const int l_max = coeffs.l_max();
  const auto table = normalized_legendre_table(l_max, std::cos(x.theta));
  double value = 0.0;
  for (int l = 0; l <= l_max; ++l) {
    value += coeffs(l, 0).real() * table[tri_index(l, 0)];
    for (int m = 1; m <= l; ++m) {
      // a_{l,m} Y_{l,m} + a_{l,-m} Y_{l,-m} = 2 Re(a_{l,m} Y_{l,m}) under symmetry.
      const std::complex<double> y = std::polar(table[tri_index(l, m)], m * x.phi);
      value += 2.0 * (coeffs(l, m) * y).real();
    }
  }
  return value;
}

HarmonicCoefficients analyze(const FieldGrid& grid, int l_max) {
  if (l_max < 0) throw DomainError("l_max must be non-negative");
  if (grid.n_theta < 2 * (l_max + 1) || grid.n_phi < 2 * l_max + 2) {
    throw ResolutionError("grid " + std::to_string(grid.n_theta) + "x" + std::to_string(grid.n_phi) +
                          " cannot resolve l_max=" + std::to_string(l_max) + " (needs n_theta >= " +
                          std::to_string(2 * (l_max + 1)) + ", n_phi >= " +
                          std::to_string(2 * l_max + 2) + ")");
  }
  const auto phases = phase_table(grid.phis, l_max);
  const std::size_t width = static_cast<std::size_t>(l_max) + 1;
  const double dphi = kTwoPi / grid.n_phi;

  // Per-row partial results, reduced in row order afterwards.
  std::vector<std::vector<std::complex<double>>> rows(static_cast<std::size_t>(grid.n_theta));
  parallel_for_chunks(static_cast<std::size_t>(grid.n_theta), [&](std::size_t i) {
    std::vector<std::complex<double>> g(width, {0.0, 0.0});
    for (int k = 0; k < grid.n_phi; ++k) {
      const double v = grid.value(static_cast<int>(i), k);
      const auto* ph = &phases[static_cast<std::size_t>(k) * width];
      for (int m = 0; m <= l_max; ++m) g[static_cast<std::size_t>(m)] += v * std::conj(ph[m]);
    }
    const auto table = normalized_legendre_table(l_max, std::cos(grid.thetas[i]));
    const double w = grid.theta_weights[i] * dphi;
    auto& row = rows[i];
    row.assign(tri_index(l_max, l_max) + 1, {0.0, 0.0});
    for (int l = 0; l <= l_max; ++l) {
      for (int m = 0; m <= l; ++m) row[tri_index(l, m)] = w * table[tri_index(l, m)] * g[static_cast<std::size_t>(m)];
    }
  });

  HarmonicCoefficients out(l_max);
  for (int l = 0; l <= l_max; ++l) {
    for (int m = 0; m <= l; ++m) {
      std::complex<double> s{0.0, 0.0};
      for (const auto& row : rows) s += row[tri_index(l, m)];
      out.set_symmetric(l, m, s);
    }
  }
  return out;
}

HarmonicCoefficients evolve(const HarmonicCoefficients& coeffs, const TemporalKernel& kernel,
                            double t) {
  kernel.validate(coeffs.l_max());
  HarmonicCoefficients out = coeffs;
  for (int l = 0; l <= coeffs.l_max(); ++l) {
    const double factor = kernel(l, t);
    for (int m = -l; m <= l; ++m) out(l, m) *= factor;
  }
  return out;
}

HarmonicCoefficients apply_operator_power(const HarmonicCoefficients& coeffs,
                                          const SubordinatorSymbol& symbol, double gamma,
                                          double exponent) {
  HarmonicCoefficients out = coeffs;
  if (exponent == 0.0) return out;
  for (int l = 0; l <= coeffs.l_max(); ++l) {
    const double base = gamma + symbol(eigenvalue(l));
    if (base > 0.0) {
      const double factor = std::pow(base, exponent);
      for (int m = -l; m <= l; ++m) out(l, m) *= factor;
      continue;
    }
    // a singular mode is tolerated only when it carries nothing
    bool empty = true;
    for (int m = -l; m <= l; ++m) empty = empty && coeffs(l, m) == std::complex<double>(0.0, 0.0);
    if (!empty) {
      throw SingularModelError("gamma + Psi(mu_l) = " + std::to_string(base) + " at l=" + std::to_string(l) +
                               " with nonzero coefficients");
    }
  }
  return out;
}

HarmonicCoefficients apply_D_M(const HarmonicCoefficients& coeffs, const SubordinatorSymbol& symbol) {
  HarmonicCoefficients out = coeffs;
  for (int l = 0; l <= coeffs.l_max(); ++l) {
    const double factor = -symbol(eigenvalue(l));
    for (int m = -l; m <= l; ++m) out(l, m) *= factor;
  }
  return out;
}

KernelSum operator_kernel_J(const SubordinatorSymbol& symbol, const SphericalPoint& x,
                            const SphericalPoint& y, int l_max) {
  if (l_max < 0) throw DomainError("l_max must be non-negative");
  const auto q = legendre_poly_batch(l_max, inner_product(x, y));
  KernelSum out;
  for (int l = 0; l <= l_max; ++l) {
    out.value += symbol(eigenvalue(l)) * (2.0 * l + 1.0) / kFourPi * q[static_cast<std::size_t>(l)];
  }
  out.tail_estimate = symbol(eigenvalue(l_max)) * (2.0 * l_max + 1.0) / kFourPi;
  return out;
}

}  // namespace spherefield

#pragma once

// Brownian motion on the unit sphere with generator the Laplace-Beltrami
// operator (not half of it), its spectral transition density, and Monte
// Carlo checks of the time-changed representation of the fractional solution.
//
// Paths use a geodesic random walk: a 3D Gaussian with per-coordinate variance
// 2 dt is projected onto the tangent plane and followed along the great
// circle. Because every step is an isotropic random rotation, the walk's
// degree-l multiplier is exactly lambda_l(dt)^n, which gives a closed-form
// bias for the discretization.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "spherefield/field.hpp"
#include "spherefield/harmonics.hpp"
#include "spherefield/rng.hpp"
#include "spherefield/subordinate.hpp"

namespace spherefield {

struct SpherePath {
  std::vector<double> times;
  std::vector<SphericalPoint> points;
  double step_size = 0.0;
};

/// Throws DomainError when dt <= 0 or dt > t (t = 0 returns [x0]).
SpherePath sample_bm(const SphericalPoint& x0, double t, double dt, std::uint64_t seed);
void write_path_csv(std::ostream& out, const SpherePath& path);

/// One walk step from y driven by g ~ N(0, 2 dt I_3).
Vec3 geodesic_step(const Vec3& y, const Vec3& g);

/// Walk from x for total time tau in steps of dt (the last one shortened).
Vec3 walk_endpoint(const Vec3& x, double tau, double dt, Rng& rng);

/// Exact draw of <x, B_tau> from the spectral density by inverse CDF.
double sample_endpoint_cos(double tau, Rng& rng);

/// B_tau started at x: the walk for tau <= 1, the exact angular draw beyond.
Vec3 bm_endpoint(const Vec3& x, double tau, double dt, Rng& rng);

/// Smallest L with exp(-t mu_L)(2L+1)/(4 pi) < 1e-14.
int density_lmax(double t);

/// sum_{l <= l_max} exp(-t mu_l)(2l+1)/(4 pi) Q_l(<x,y>). t <= 0 throws.
double transition_density(const SphericalPoint& x, const SphericalPoint& y, double t,
                          std::optional<int> l_max = std::nullopt);

/// E Q_l(cos r) for one walk step, r^2 ~ Exp(mean 4 dt).
double one_step_multiplier(int l, double dt);

/// lambda_l(dt)^n - exp(-t mu_l) with n = t / dt steps.
double walk_bias(int l, double t, double dt);

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
};

/// E Q_l(<x0, B_t>) by the walk, for each requested degree on shared paths.
std::vector<McEstimate> spectral_decay_mc(const std::vector<int>& degrees, double t, double dt,
                                          std::size_t n_paths, std::uint64_t seed);

/// E[Q_l(fine) - Q_l(coarse)] where the fine walk uses dt/2 and the coarse
/// walk sums each pair of fine Gaussians into one step of dt. t/dt must be an
/// integer.
std::vector<McEstimate> coupled_level_difference(const std::vector<int>& degrees, double t,
                                                 double dt, std::size_t n_paths,
                                                 std::uint64_t seed);

struct GeneratorEstimate {
  std::complex<double> estimate;  ///< (E f(B_dt) - f(x0)) / dt
  std::complex<double> target;    ///< -mu_l f(x0)
  double relative_error = 0.0;
  double relative_stderr = 0.0;
};

/// One-step generator estimate for f = Y_lm with four rotated copies of each
/// tangent increment and r^2 as a control variate.
GeneratorEstimate generator_check(const Multipole& lm, const SphericalPoint& x0, double dt,
                                  std::size_t n, std::uint64_t seed);

struct RepresentationReport {
  double analytic = 0.0;
  double mc_mean = 0.0;
  double std_error = 0.0;
  double discrepancy = 0.0;
  double bias_allowance = 0.0;
  std::size_t n_paths = 0;
  bool within_tolerance = false;  ///< discrepancy <= 3 stderr + allowance
};

/// Compares E[T(x + B(tau_t))] for one fixed coefficient draw against
/// sum a_lm E_beta(-t^beta Psi(mu_l)) Y_lm(x). Only gamma = 0 is accepted:
/// for gamma > 0 it is unsettled whether gamma acts as a drift on the clock or
/// as killing, and the two readings give different answers.
RepresentationReport representation_check_thm1(const SphericalPoint& x,
                                               const AngularPowerSpectrum& spectrum, double beta,
                                               const SubordinatorSymbol& symbol, double t,
                                               std::size_t n_paths, std::uint64_t seed,
                                               double gamma = 0.0, double dt = 1e-3);

/// Histogram estimate of the density at x = y: fraction of sample_bm
/// endpoints with <x0, B_t> in [1 - width, 1], divided by the cap area.
McEstimate endpoint_density_at_origin(double t, double dt, double width, std::size_t n_paths,
                                      std::uint64_t seed);

}  // namespace spherefield

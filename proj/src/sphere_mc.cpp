#include "spherefield/sphere_mc.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "spherefield/errors.hpp"
#include "spherefield/field_io.hpp"
#include "spherefield/fractional.hpp"
#include "spherefield/parallel.hpp"

namespace spherefield {

namespace {

constexpr std::size_t kPathsPerBlock = 1024;
constexpr double kExactDrawThreshold = 1.0;

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

Vec3 normalized(const Vec3& v) {
  const double n = std::sqrt(dot(v, v));
  return {v[0] / n, v[1] / n, v[2] / n};
}

// Orthonormal pair spanning the tangent plane at unit x.
std::pair<Vec3, Vec3> tangent_basis(const Vec3& x) {
  const Vec3 seed = std::abs(x[2]) < 0.9 ? Vec3{0.0, 0.0, 1.0} : Vec3{1.0, 0.0, 0.0};
  const double c = dot(seed, x);
  const Vec3 e1 = normalized({seed[0] - c * x[0], seed[1] - c * x[1], seed[2] - c * x[2]});
  const Vec3 e2 = {x[1] * e1[2] - x[2] * e1[1], x[2] * e1[0] - x[0] * e1[2],
                   x[0] * e1[1] - x[1] * e1[0]};
  return {e1, e2};
}

Vec3 gaussian3(Rng& rng, double sd) { return {sd * rng.normal(), sd * rng.normal(), sd * rng.normal()}; }

std::size_t step_count(double tau, double dt) {
  const double ratio = tau / dt;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) < 1e-9 * std::max(1.0, ratio)) return static_cast<std::size_t>(rounded);
  return static_cast<std::size_t>(std::ceil(ratio));
}

McEstimate summarize(const std::vector<double>& samples) {
  const std::size_t n = samples.size();
  McEstimate e;
  e.n = n;
  if (n == 0) return e;
  const double shift = samples[0];
  std::vector<double> work(n);
  for (std::size_t i = 0; i < n; ++i) work[i] = samples[i] - shift;
  const double mean_c = pairwise_sum(work.data(), n) / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) work[i] = (work[i] - mean_c) * (work[i] - mean_c);
  e.mean = shift + mean_c;
  if (n > 1) e.std_error = std::sqrt(pairwise_sum(work.data(), n) / static_cast<double>(n - 1) / n);
  return e;
}

// Walk state carrying a tangent frame that is parallel-transported along each
// geodesic step. Increments are given in frame coordinates, so two fine steps
// and their summed coarse step see the same directions up to curvature terms.
struct FramedPoint {
  Vec3 y, e1, e2;

  void step(double a, double b) {
    const Vec3 v = {a * e1[0] + b * e2[0], a * e1[1] + b * e2[1], a * e1[2] + b * e2[2]};
    const double r = std::sqrt(dot(v, v));
    if (r == 0.0) return;
    const Vec3 u = {v[0] / r, v[1] / r, v[2] / r};
    const double c = std::cos(r), s = std::sin(r);
    const Vec3 u_new = {c * u[0] - s * y[0], c * u[1] - s * y[1], c * u[2] - s * y[2]};
    y = normalized({c * y[0] + s * u[0], c * y[1] + s * u[1], c * y[2] + s * u[2]});
    // Components along u rotate with the geodesic; the normal y x u is fixed.
    const double p1 = dot(e1, u), p2 = dot(e2, u);
    for (int k = 0; k < 3; ++k) {
      e1[k] += p1 * (u_new[k] - u[k]);
      e2[k] += p2 * (u_new[k] - u[k]);
    }
    // Re-orthonormalize against drift.
    const double d1 = dot(e1, y);
    e1 = normalized({e1[0] - d1 * y[0], e1[1] - d1 * y[1], e1[2] - d1 * y[2]});
    e2 = {y[1] * e1[2] - y[2] * e1[1], y[2] * e1[0] - y[0] * e1[2], y[0] * e1[1] - y[1] * e1[0]};
  }
};

void check_walk_args(double t, double dt) {
  if (!(dt > 0.0)) throw DomainError("step dt must be positive, got " + std::to_string(dt));
  if (!(t >= 0.0)) throw DomainError("time must be nonnegative, got " + std::to_string(t));
  if (t > 0.0 && dt > t) {
    throw DomainError("step dt=" + std::to_string(dt) + " exceeds total time t=" + std::to_string(t));
  }
}

}  // namespace

Vec3 geodesic_step(const Vec3& y, const Vec3& g) {
  const double c = dot(g, y);
  const Vec3 v = {g[0] - c * y[0], g[1] - c * y[1], g[2] - c * y[2]};
  const double r = std::sqrt(dot(v, v));
  if (r == 0.0) return y;
  const double cr = std::cos(r);
  const double sr = std::sin(r) / r;
  return normalized({cr * y[0] + sr * v[0], cr * y[1] + sr * v[1], cr * y[2] + sr * v[2]});
}

Vec3 walk_endpoint(const Vec3& x, double tau, double dt, Rng& rng) {
  if (tau <= 0.0) return x;
  const std::size_t n = step_count(tau, dt);
  Vec3 y = x;
  for (std::size_t k = 0; k < n; ++k) {
    const double h = (k + 1 < n) ? dt : tau - dt * static_cast<double>(n - 1);
    y = geodesic_step(y, gaussian3(rng, std::sqrt(2.0 * h)));
  }
  return y;
}

SpherePath sample_bm(const SphericalPoint& x0, double t, double dt, std::uint64_t seed) {
  if (t == 0.0) return {{0.0}, {x0}, dt};
  check_walk_args(t, dt);
  Rng rng(seed);
  SpherePath path;
  path.step_size = dt;
  const std::size_t n = step_count(t, dt);
  path.times.reserve(n + 1);
  path.points.reserve(n + 1);
  path.times.push_back(0.0);
  path.points.push_back(x0);
  Vec3 y = x0.cartesian();
  for (std::size_t k = 0; k < n; ++k) {
    const double h = (k + 1 < n) ? dt : t - dt * static_cast<double>(n - 1);
    y = geodesic_step(y, gaussian3(rng, std::sqrt(2.0 * h)));
    path.times.push_back(k + 1 < n ? dt * static_cast<double>(k + 1) : t);
    path.points.push_back(SphericalPoint::from_cartesian(y));
  }
  return path;
}

void write_path_csv(std::ostream& out, const SpherePath& path) {
  out << "time,theta,phi\n";
  for (std::size_t i = 0; i < path.times.size(); ++i) {
    out << format_double(path.times[i]) << ',' << format_double(path.points[i].theta) << ','
        << format_double(path.points[i].phi) << '\n';
  }
}

int density_lmax(double t) {
  if (!(t > 0.0)) throw DomainError("transition density needs t > 0");
  int l = 0;
  while (std::exp(-t * eigenvalue(l)) * (2.0 * l + 1.0) / kFourPi >= 1e-14) ++l;
  return l;
}

double transition_density(const SphericalPoint& x, const SphericalPoint& y, double t,
                          std::optional<int> l_max) {
  if (!(t > 0.0)) throw DomainError("transition density needs t > 0, got " + std::to_string(t));
  const int L = l_max ? *l_max : density_lmax(t);
  if (L < 0) throw DomainError("l_max must be non-negative");
  const auto q = legendre_poly_batch(L, inner_product(x, y));
  double sum = 0.0;
  for (int l = L; l >= 0; --l) {
    sum += std::exp(-t * eigenvalue(l)) * (2.0 * l + 1.0) / kFourPi * q[static_cast<std::size_t>(l)];
  }
  return sum;
}

double sample_endpoint_cos(double tau, Rng& rng) {
  if (!(tau > 0.0)) return 1.0;
  // Degrees whose weight exp(-tau mu_l) is below double resolution drop out.
  int L = 1;
  while (std::exp(-tau * eigenvalue(L)) > 1e-17) ++L;
  std::vector<double> decay(static_cast<std::size_t>(L) + 1);
  for (int l = 0; l <= L; ++l) decay[static_cast<std::size_t>(l)] = std::exp(-tau * eigenvalue(l));
  // CDF(z) = (z+1)/2 + sum_{l>=1} decay_l/2 (Q_{l+1}(z) - Q_{l-1}(z)).
  auto cdf = [&](double z) {
    const auto q = legendre_poly_batch(L + 1, z);
    double s = 0.5 * (z + 1.0);
    for (int l = L; l >= 1; --l) {
      s += 0.5 * decay[static_cast<std::size_t>(l)] *
           (q[static_cast<std::size_t>(l + 1)] - q[static_cast<std::size_t>(l - 1)]);
    }
    return s;
  };
  const double u = rng.uniform();
  double lo = -1.0, hi = 1.0;
  for (int it = 0; it < 60 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    (cdf(mid) < u ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

Vec3 bm_endpoint(const Vec3& x, double tau, double dt, Rng& rng) {
  if (tau <= kExactDrawThreshold) return walk_endpoint(x, tau, dt, rng);
  const double z = sample_endpoint_cos(tau, rng);
  const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
  const double az = kTwoPi * rng.uniform();
  const auto [e1, e2] = tangent_basis(x);
  const double a = s * std::cos(az), b = s * std::sin(az);
  return normalized({z * x[0] + a * e1[0] + b * e2[0], z * x[1] + a * e1[1] + b * e2[1],
                     z * x[2] + a * e1[2] + b * e2[2]});
}

double one_step_multiplier(int l, double dt) {
  if (l < 0) throw DomainError("degree must be non-negative");
  if (!(dt > 0.0)) throw DomainError("dt must be positive");
  // |v|^2 = 4 dt u with u ~ Exp(1).
  auto f = [&](double u) { return legendre_poly(l, std::cos(std::sqrt(4.0 * dt * u))) * std::exp(-u); };
  using boost::math::quadrature::gauss_kronrod;
  double total = 0.0;
  // Split where the integrand oscillates: cos r passes a Legendre zero roughly every pi/l in r.
  const double u_end = 60.0;
  const int pieces = std::max(8, static_cast<int>(std::sqrt(4.0 * dt * u_end) * (l + 1)));
  double prev = 0.0;
  for (int i = 1; i <= pieces; ++i) {
    const double r = std::sqrt(4.0 * dt * u_end) * i / pieces;
    const double u = r * r / (4.0 * dt);
    total += gauss_kronrod<double, 61>::integrate(f, prev, u, 8, 1e-15);
    prev = u;
  }
  return total;
}

double walk_bias(int l, double t, double dt) {
  const std::size_t n = step_count(t, dt);
  return std::pow(one_step_multiplier(l, dt), static_cast<double>(n)) - std::exp(-t * eigenvalue(l));
}

std::vector<McEstimate> spectral_decay_mc(const std::vector<int>& degrees, double t, double dt,
                                          std::size_t n_paths, std::uint64_t seed) {
  check_walk_args(t, dt);
  const int L = degrees.empty() ? 0 : *std::max_element(degrees.begin(), degrees.end());
  const Vec3 north{0.0, 0.0, 1.0};
  std::vector<std::vector<double>> samples(degrees.size(), std::vector<double>(n_paths));
  const std::size_t blocks = (n_paths + kPathsPerBlock - 1) / kPathsPerBlock;
  parallel_for_chunks(blocks, [&](std::size_t b) {
    Rng rng(derive_seed(seed, b));
    const std::size_t end = std::min(n_paths, (b + 1) * kPathsPerBlock);
    for (std::size_t i = b * kPathsPerBlock; i < end; ++i) {
      const Vec3 y = walk_endpoint(north, t, dt, rng);
      const auto q = legendre_poly_batch(L, std::clamp(y[2], -1.0, 1.0));
      for (std::size_t d = 0; d < degrees.size(); ++d) samples[d][i] = q[static_cast<std::size_t>(degrees[d])];
    }
  });
  std::vector<McEstimate> out;
  for (const auto& s : samples) out.push_back(summarize(s));
  return out;
}

std::vector<McEstimate> coupled_level_difference(const std::vector<int>& degrees, double t,
                                                 double dt, std::size_t n_paths,
                                                 std::uint64_t seed) {
  check_walk_args(t, dt);
  const double ratio = t / dt;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio)) {
    throw DomainError("coupled levels need t to be a whole number of coarse steps");
  }
  const auto n_steps = static_cast<std::size_t>(std::round(ratio));
  const int L = degrees.empty() ? 0 : *std::max_element(degrees.begin(), degrees.end());
  const double sd = std::sqrt(dt);  // fine step: variance 2 (dt/2) per coordinate
  std::vector<std::vector<double>> samples(degrees.size(), std::vector<double>(n_paths));
  const std::size_t blocks = (n_paths + kPathsPerBlock - 1) / kPathsPerBlock;
  parallel_for_chunks(blocks, [&](std::size_t b) {
    Rng rng(derive_seed(seed, b));
    const std::size_t end = std::min(n_paths, (b + 1) * kPathsPerBlock);
    const Vec3 north{0.0, 0.0, 1.0};
    const auto [f1, f2] = tangent_basis(north);
    for (std::size_t i = b * kPathsPerBlock; i < end; ++i) {
      FramedPoint fine{north, f1, f2};
      FramedPoint swapped = fine;
      FramedPoint coarse = fine;
      for (std::size_t k = 0; k < n_steps; ++k) {
        const double a1 = sd * rng.normal(), b1 = sd * rng.normal();
        const double a2 = sd * rng.normal(), b2 = sd * rng.normal();
        fine.step(a1, b1);
        fine.step(a2, b2);
        swapped.step(a2, b2);
        swapped.step(a1, b1);
        coarse.step(a1 + a2, b1 + b2);
      }
      const auto qf = legendre_poly_batch(L, std::clamp(fine.y[2], -1.0, 1.0));
      const auto qs = legendre_poly_batch(L, std::clamp(swapped.y[2], -1.0, 1.0));
      const auto qc = legendre_poly_batch(L, std::clamp(coarse.y[2], -1.0, 1.0));
      for (std::size_t d = 0; d < degrees.size(); ++d) {
        const auto l = static_cast<std::size_t>(degrees[d]);
        samples[d][i] = 0.5 * (qf[l] + qs[l]) - qc[l];
      }
    }
  });
  std::vector<McEstimate> out;
  for (const auto& s : samples) out.push_back(summarize(s));
  return out;
}

GeneratorEstimate generator_check(const Multipole& lm, const SphericalPoint& x0, double dt,
                                  std::size_t n, std::uint64_t seed) {
  if (!(dt > 0.0)) throw DomainError("dt must be positive");
  if (n < 2) throw InsufficientSamplesError("generator check needs at least 2 samples");
  const Vec3 x = x0.cartesian();
  const auto [e1, e2] = tangent_basis(x);
  const std::complex<double> f0 = spherical_harmonic(lm, x0);
  const double sd = std::sqrt(2.0 * dt);

  // Each sample averages f over the increment rotated by 0, 90, 180, 270 degrees.
  std::vector<double> re(n), im(n), r2(n);
  const std::size_t blocks = (n + kPathsPerBlock - 1) / kPathsPerBlock;
  parallel_for_chunks(blocks, [&](std::size_t b) {
    Rng rng(derive_seed(seed, b));
    const std::size_t end = std::min(n, (b + 1) * kPathsPerBlock);
    for (std::size_t i = b * kPathsPerBlock; i < end; ++i) {
      const double u = sd * rng.normal();
      const double v = sd * rng.normal();
      const double rot[4][2] = {{u, v}, {-v, u}, {-u, -v}, {v, -u}};
      std::complex<double> acc{0.0, 0.0};
      for (const auto& c : rot) {
        const Vec3 g = {c[0] * e1[0] + c[1] * e2[0], c[0] * e1[1] + c[1] * e2[1],
                        c[0] * e1[2] + c[1] * e2[2]};
        acc += spherical_harmonic(lm, SphericalPoint::from_cartesian(geodesic_step(x, g)));
      }
      const std::complex<double> d = 0.25 * acc - f0;
      re[i] = d.real();
      im[i] = d.imag();
      r2[i] = u * u + v * v;
    }
  });

  // Regress out r^2, whose mean 4 dt is known exactly.
  const double r2_mean = 4.0 * dt;
  auto adjusted = [&](const std::vector<double>& y) {
    const McEstimate ym = summarize(y);
    const McEstimate rm = summarize(r2);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sxy += (y[i] - ym.mean) * (r2[i] - rm.mean);
      sxx += (r2[i] - rm.mean) * (r2[i] - rm.mean);
    }
    const double c = sxx > 0.0 ? sxy / sxx : 0.0;
    std::vector<double> z(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = y[i] - c * (r2[i] - r2_mean);
    return summarize(z);
  };
  const McEstimate er = adjusted(re);
  const McEstimate ei = adjusted(im);

  GeneratorEstimate out;
  out.estimate = {er.mean / dt, ei.mean / dt};
  out.target = -eigenvalue(lm.l) * f0;
  const double scale = std::abs(out.target);
  out.relative_error = scale > 0.0 ? std::abs(out.estimate - out.target) / scale : std::abs(out.estimate);
  out.relative_stderr = std::hypot(er.std_error, ei.std_error) / dt / (scale > 0.0 ? scale : 1.0);
  return out;
}

RepresentationReport representation_check_thm1(const SphericalPoint& x,
                                               const AngularPowerSpectrum& spectrum, double beta,
                                               const SubordinatorSymbol& symbol, double t,
                                               std::size_t n_paths, std::uint64_t seed,
                                               double gamma, double dt) {
  if (gamma != 0.0) {
    throw UnsupportedError(
        "representation check only runs at gamma = 0: for gamma > 0 the clock could be read as "
        "gamma L + F(L) (drift, rate gamma mu_l + Psi) or as killing (rate gamma + Psi), and "
        "the two disagree");
  }
  if (n_paths < 2) throw InsufficientSamplesError("representation check needs at least 2 paths");
  if (!(t >= 0.0)) throw DomainError("time must be nonnegative");
  RandomClock clock{0.0, beta, symbol, seed};
  validate_clock(clock);

  const int L = spectrum.l_max();
  const HarmonicCoefficients coeffs = sample_coefficients(spectrum, derive_seed(seed, 0xA11));
  const TemporalKernel kernel(KernelModel::Thm1, FracParams{beta, 0.0, 0.0}, symbol);

  RepresentationReport rep;
  rep.n_paths = n_paths;
  rep.analytic = synthesize_at(evolve(coeffs, kernel, t), x);

  const Vec3 xc = x.cartesian();
  std::vector<double> values(n_paths);
  const std::size_t blocks = (n_paths + kPathsPerBlock - 1) / kPathsPerBlock;
  parallel_for_chunks(blocks, [&](std::size_t b) {
    Rng rng(derive_seed(seed, b + 1));
    const std::size_t end = std::min(n_paths, (b + 1) * kPathsPerBlock);
    for (std::size_t i = b * kPathsPerBlock; i < end; ++i) {
      const double tau = draw_clock(clock, t, rng);
      values[i] = synthesize_at(coeffs, SphericalPoint::from_cartesian(bm_endpoint(xc, tau, dt, rng)));
    }
  });
  const McEstimate e = summarize(values);
  rep.mc_mean = e.mean;
  rep.std_error = e.std_error;
  rep.discrepancy = std::abs(rep.mc_mean - rep.analytic);

  // Walked clocks are at most 1; bound |lambda_l^k - exp(-k dt mu_l)| over those step counts.
  const auto ylm = normalized_legendre_table(L, std::cos(x.theta));
  const auto k_max = static_cast<std::size_t>(std::ceil(kExactDrawThreshold / dt));
  for (int l = 1; l <= L; ++l) {
    double amp = std::abs(coeffs(l, 0)) * std::abs(ylm[tri_index(l, 0)]);
    for (int m = 1; m <= l; ++m) amp += 2.0 * std::abs(coeffs(l, m)) * std::abs(ylm[tri_index(l, m)]);
    if (amp == 0.0) continue;
    const double lam = one_step_multiplier(l, dt);
    double worst = 0.0, p = 1.0;
    for (std::size_t k = 1; k <= k_max; ++k) {
      p *= lam;
      worst = std::max(worst, std::abs(p - std::exp(-static_cast<double>(k) * dt * eigenvalue(l))));
    }
    rep.bias_allowance += amp * worst;
  }
  rep.within_tolerance = rep.discrepancy <= 3.0 * rep.std_error + rep.bias_allowance;
  return rep;
}

McEstimate endpoint_density_at_origin(double t, double dt, double width, std::size_t n_paths,
                                      std::uint64_t seed) {
  check_walk_args(t, dt);
  if (!(width > 0.0 && width < 2.0)) throw DomainError("bin width must lie in (0, 2)");
  const Vec3 north{0.0, 0.0, 1.0};
  std::vector<double> hits(n_paths);
  const double area = kTwoPi * width;
  const std::size_t blocks = (n_paths + kPathsPerBlock - 1) / kPathsPerBlock;
  parallel_for_chunks(blocks, [&](std::size_t b) {
    Rng rng(derive_seed(seed, b));
    const std::size_t end = std::min(n_paths, (b + 1) * kPathsPerBlock);
    for (std::size_t i = b * kPathsPerBlock; i < end; ++i) {
      const Vec3 y = walk_endpoint(north, t, dt, rng);
      hits[i] = y[2] >= 1.0 - width ? 1.0 / area : 0.0;
    }
  });
  return summarize(hits);
}

}  // namespace spherefield

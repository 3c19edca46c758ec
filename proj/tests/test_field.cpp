#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "spherefield/errors.hpp"
#include "spherefield/field.hpp"
#include "spherefield/field_io.hpp"

using namespace spherefield;

namespace {

double max_diff(const HarmonicCoefficients& a, const HarmonicCoefficients& b) {
  double w = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) w = std::max(w, std::abs(a.data()[i] - b.data()[i]));
  return w;
}

HarmonicCoefficients single(int l_max, int l, int m, std::complex<double> v) {
  HarmonicCoefficients c(l_max);
  c.set_symmetric(l, m, v);
  return c;
}

}  // namespace

TEST_CASE("power spectrum") {
  const auto p = AngularPowerSpectrum::power_law(2.0, 3.0, 4);
  CHECK(p.l_max() == 4);
  CHECK(p[3] == doctest::Approx(2.0 / 64.0));
  CHECK(p[9] == 0.0);
  CHECK(p.decay_exponent().value() == 3.0);
  CHECK(AngularPowerSpectrum::single(2, 4 * kPi / 5, 3).total_variance() == doctest::Approx(1.0));
  CHECK_THROWS_AS(AngularPowerSpectrum(std::vector<double>{1.0, -0.1}), DomainError);
  CHECK_THROWS_AS(AngularPowerSpectrum(std::vector<double>{}), DomainError);
}

TEST_CASE("sample_coefficients") {
  const auto z = sample_coefficients(AngularPowerSpectrum::zero(5), 1);
  CHECK(z.max_abs() == 0.0);

  const auto c = sample_coefficients(AngularPowerSpectrum::power_law(1.0, 2.0, 10), 7);
  CHECK(c.is_real_symmetric(0.0));
  for (int l = 0; l <= 10; ++l) CHECK(c(l, 0).imag() == 0.0);
  CHECK(c(1, -1) + std::conj(c(1, 1)) == std::complex<double>(0.0, 0.0));

  // E|a_11|^2 = C_1 over 1e4 replicates; Re/Im variances split evenly.
  Rng rng(99);
  HarmonicCoefficients a(1);
  const auto spec = AngularPowerSpectrum::single(1, 1.0, 1);
  const int n = 10000;
  double s = 0.0, ss = 0.0, re2 = 0.0;
  for (int i = 0; i < n; ++i) {
    sample_coefficients(spec, rng, a);
    const double v = std::norm(a(1, 1));
    s += v;
    ss += v * v;
    re2 += a(1, 1).real() * a(1, 1).real();
  }
  const double mean = s / n, se = std::sqrt((ss / n - mean * mean) / n);
  CHECK(std::abs(mean - 1.0) <= 3.0 * se);
  CHECK(re2 / n == doctest::Approx(0.5).epsilon(0.05));
  CHECK(sample_coefficients(spec, 3).data() == sample_coefficients(spec, 3).data());
}

TEST_CASE("synthesize examples") {
  FieldGrid g = make_grid(GridKind::GaussLegendre, 12, 16);
  const auto one = synthesize(single(2, 0, 0, std::sqrt(kFourPi)), g);
  for (double v : one.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));

  const auto dipole = synthesize(single(1, 1, 0, 1.0), g);
  for (int i = 0; i < g.n_theta; ++i)
    for (int k = 0; k < g.n_phi; ++k)
      CHECK(dipole.value(i, k) == doctest::Approx(std::sqrt(3.0 / kFourPi) * std::cos(g.thetas[i])).scale(1.0).epsilon(1e-14));

  const auto zero = synthesize(HarmonicCoefficients(4), g);
  for (double v : zero.values) CHECK(v == 0.0);

  HarmonicCoefficients bad(2);
  bad(2, 1) = {1.0, 0.0};
  CHECK_THROWS_AS(synthesize(bad, g), ContractError);
  HarmonicCoefficients complex_mean(1);
  complex_mean(0, 0) = {0.0, 1.0};
  CHECK_THROWS_AS(synthesize(complex_mean, g), ContractError);
}

TEST_CASE("synthesize_at matches the grid and the harmonic sum") {
  const auto c = sample_coefficients(AngularPowerSpectrum::power_law(1.0, 1.5, 12), 5);
  const auto g = synthesize(c, make_grid(GridKind::Equiangular, 9, 7));
  for (int i = 0; i < g.n_theta; ++i) {
    for (int k = 0; k < g.n_phi; ++k) {
      const SphericalPoint x(g.thetas[i], g.phis[k]);
      std::complex<double> direct{0.0, 0.0};
      for (int l = 0; l <= 12; ++l)
        for (int m = -l; m <= l; ++m) direct += c(l, m) * spherical_harmonic(Multipole(l, m), x);
      CHECK(std::abs(direct.imag()) < 1e-12);
      CHECK(g.value(i, k) == doctest::Approx(direct.real()).scale(1.0).epsilon(1e-12));
      CHECK(synthesize_at(c, x) == doctest::Approx(direct.real()).scale(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("analyze examples") {
  const int L = 4;
  const FieldGrid g = make_grid(GridKind::GaussLegendre, 2 * (L + 1), 2 * L + 2);
  const auto in = single(L, 2, 1, {1.0, 0.5});
  const auto out = analyze(synthesize(in, g), L);
  CHECK(std::abs(out(2, 1) - std::complex<double>(1.0, 0.5)) <= 1e-8);
  CHECK(max_diff(in, out) <= 1e-8);

  FieldGrid ones = g;
  std::fill(ones.values.begin(), ones.values.end(), 1.0);
  const auto c1 = analyze(ones, L);
  CHECK(c1(0, 0).real() == doctest::Approx(std::sqrt(kFourPi)));
  CHECK(max_diff(c1, single(L, 0, 0, std::sqrt(kFourPi))) <= 1e-8);

  CHECK(analyze(g, L).max_abs() == 0.0);
  CHECK_THROWS_AS(analyze(g, L + 1), ResolutionError);
  CHECK_THROWS_AS(analyze(make_grid(GridKind::GaussLegendre, 2 * (L + 1), 2 * L + 1), L), ResolutionError);
}

TEST_CASE("analyze(synthesize(c)) = c at l_max = 16 on both grid kinds") {
  const int L = 16;
  const FieldGrid gl = make_grid(GridKind::GaussLegendre, 2 * (L + 1), 2 * L + 2);
  const FieldGrid eq = make_grid(GridKind::Equiangular, 2 * (L + 1), 2 * L + 2);
  double worst_gl = 0.0, worst_eq = 0.0;
  for (int k = 0; k < 20; ++k) {
    const auto c = sample_coefficients(AngularPowerSpectrum::power_law(1.0, 1.0, L), 1000 + k);
    worst_gl = std::max(worst_gl, max_diff(c, analyze(synthesize(c, gl), L)));
    worst_eq = std::max(worst_eq, max_diff(c, analyze(synthesize(c, eq), L)));
  }
  CHECK(worst_gl <= 1e-8);
  CHECK(worst_eq <= 1e-8);
}

TEST_CASE("evolve") {
  const auto c = sample_coefficients(AngularPowerSpectrum::power_law(1.0, 2.0, 8), 3);
  const TemporalKernel thm1(KernelModel::Thm1, {0.5, 1.0, 0.0}, SubordinatorSymbol::stable(0.5));
  CHECK(max_diff(evolve(c, thm1, 0.0), c) == 0.0);

  const TemporalKernel heat(KernelModel::Heat, {});
  const auto e = evolve(single(2, 1, 0, 1.0), heat, 1.0);
  CHECK(e(1, 0).real() == doctest::Approx(std::exp(-2.0)));
  CHECK(max_diff(evolve(evolve(c, heat, 0.3), heat, 0.45), evolve(c, heat, 0.75)) <= 1e-12);
  CHECK(evolve(c, thm1, 0.7).is_real_symmetric(0.0));

  const TemporalKernel singular(KernelModel::Thm2, {0.5, 0.0, 0.0}, SubordinatorSymbol::elementary());
  CHECK_THROWS_AS(evolve(c, singular, 1.0), SingularModelError);
}

TEST_CASE("apply_operator_power") {
  const auto c = sample_coefficients(AngularPowerSpectrum::power_law(1.0, 2.0, 8), 4);
  const auto elem = SubordinatorSymbol::elementary();
  CHECK(max_diff(apply_operator_power(c, elem, 0.0, 0.0), c) == 0.0);
  CHECK(apply_operator_power(single(2, 1, 0, 1.0), elem, 0.0, -1.0)(1, 0).real() == doctest::Approx(0.5));
  const auto st = SubordinatorSymbol::stable(0.6);
  const auto rt = apply_operator_power(apply_operator_power(c, st, 1.5, 0.37), st, 1.5, -0.37);
  CHECK(max_diff(rt, c) <= 1e-12);
  CHECK_THROWS_AS(apply_operator_power(c, elem, 0.0, -0.5), SingularModelError);
}

TEST_CASE("(gamma - D_M)^beta undoes the COR1 solution") {
  Rng rng(12);
  for (int k = 0; k < 20; ++k) {
    const double beta = 0.05 + 0.95 * rng.uniform(), gamma = 0.1 + 3.0 * rng.uniform();
    const auto sym = SubordinatorSymbol::stable(0.1 + 0.85 * rng.uniform());
    const TemporalKernel cor1(KernelModel::Cor1, {beta, gamma, 0.0}, sym);
    const auto c = sample_coefficients(AngularPowerSpectrum::power_law(1.0, 2.0, 16), 500 + k);
    CHECK(max_diff(apply_operator_power(evolve(c, cor1, 0.0), sym, gamma, beta), c) <= 1e-12);
  }
}

TEST_CASE("apply_D_M examples") {
  CHECK(apply_D_M(single(2, 1, 0, 1.0), SubordinatorSymbol::elementary())(1, 0).real() == doctest::Approx(-2.0));
  const auto zero_mode = apply_D_M(single(2, 0, 0, 3.0), SubordinatorSymbol::stable(0.5));
  CHECK(zero_mode(0, 0) == std::complex<double>(0.0, 0.0));
  CHECK(apply_D_M(single(2, 2, 0, 2.0), SubordinatorSymbol::stable(0.5))(2, 0).real() ==
        doctest::Approx(-2.0 * std::sqrt(6.0)));
}

TEST_CASE("operator_kernel_J examples") {
  const SphericalPoint x(kPi / 2, 0.0), y(kPi / 2, kPi / 2);
  const auto zero = SubordinatorSymbol::custom([](double) { return 0.0; }, "zero");
  CHECK(operator_kernel_J(zero, x, y, 10).value == 0.0);
  CHECK(operator_kernel_J(SubordinatorSymbol::stable(0.5), x, y, 0).value == 0.0);
  const auto j = operator_kernel_J(SubordinatorSymbol::elementary(), x, y, 2);
  CHECK(j.value == doctest::Approx(-15.0 / kFourPi));
  CHECK(j.tail_estimate == doctest::Approx(6.0 * 5.0 / kFourPi));
}

TEST_CASE("apply_D_M matches a finite-difference Laplace-Beltrami stencil") {
  const int L = 8, nt = 256, np = 512;
  FieldGrid g;
  g.kind = GridKind::Equiangular;
  g.n_theta = nt;
  g.n_phi = np;
  const double ht = kPi / nt, hp = kTwoPi / np;
  for (int i = 0; i < nt; ++i) g.thetas.push_back((i + 0.5) * ht);
  for (int k = 0; k < np; ++k) g.phis.push_back(k * hp);
  g.theta_weights.assign(nt, 0.0);
  g.values.assign(static_cast<std::size_t>(nt) * np, 0.0);

  const auto c = sample_coefficients(AngularPowerSpectrum::power_law(1.0, 0.0, L), 21);
  const auto f = synthesize(c, g);
  const auto exact = synthesize(apply_D_M(c, SubordinatorSymbol::elementary()), g);

  double worst = 0.0, scale = 0.0;
  for (int i = 8; i < nt - 8; ++i) {
    const double th = g.thetas[i], s = std::sin(th);
    for (int k = 0; k < np; ++k) {
      auto F = [&](int di, int dk) { return f.value(i + di, (k + dk + np) % np); };
      const double ft = (-F(2, 0) + 8 * F(1, 0) - 8 * F(-1, 0) + F(-2, 0)) / (12 * ht);
      const double ftt = (-F(2, 0) + 16 * F(1, 0) - 30 * F(0, 0) + 16 * F(-1, 0) - F(-2, 0)) / (12 * ht * ht);
      const double fpp = (-F(0, 2) + 16 * F(0, 1) - 30 * F(0, 0) + 16 * F(0, -1) - F(0, -2)) / (12 * hp * hp);
      const double lap = ftt + std::cos(th) / s * ft + fpp / (s * s);
      worst = std::max(worst, std::abs(lap - exact.value(i, k)));
      scale = std::max(scale, std::abs(exact.value(i, k)));
    }
  }
  CHECK(worst / scale <= 1e-3);
}

TEST_CASE("law is invariant under a polar rotation") {
  // Variance at x and at x rotated in longitude, each over 1e3 realizations.
  const auto spec = AngularPowerSpectrum::power_law(1.0, 2.0, 12);
  const SphericalPoint x(1.0, 0.3), gx(1.0, 0.3 + 1.234);
  auto var = [&](const SphericalPoint& p, std::uint64_t seed) {
    Rng rng(seed);
    HarmonicCoefficients a(12);
    double s = 0.0, ss = 0.0;
    for (int i = 0; i < 1000; ++i) {
      sample_coefficients(spec, rng, a);
      const double v = synthesize_at(a, p);
      s += v * v;
      ss += v * v * v * v;
    }
    const double m = s / 1000;
    return std::pair{m, std::sqrt((ss / 1000 - m * m) / 1000)};
  };
  const auto [v1, e1] = var(x, 1);
  const auto [v2, e2] = var(gx, 2);
  CHECK(std::abs(v1 - v2) <= 3.0 * std::hypot(e1, e2));
  CHECK(std::abs(v1 - spec.total_variance()) <= 3.0 * e1);
}

TEST_CASE("CSV formats") {
  const auto c = sample_coefficients(AngularPowerSpectrum::power_law(1.0, 2.0, 5), 8);
  std::stringstream ss;
  write_coefficients_csv(ss, c);
  CHECK(ss.str().rfind("l,m,re,im\n", 0) == 0);
  const auto back = read_coefficients_csv(ss);
  CHECK(max_diff(back, c) == 0.0);

  const auto p = AngularPowerSpectrum::power_law(1.0, 3.0, 6);
  std::stringstream sp;
  write_spectrum_csv(sp, p);
  CHECK(sp.str().rfind("l,C_l\n", 0) == 0);
  CHECK(read_spectrum_csv(sp).values() == p.values());

  std::stringstream bad("l,C\n0,1\n");
  CHECK_THROWS_AS(read_spectrum_csv(bad), ConfigError);
  std::stringstream gap("l,C_l\n0,1\n2,1\n");
  CHECK_THROWS_AS(read_spectrum_csv(gap), ConfigError);

  FieldGrid g = synthesize(c, make_grid(GridKind::GaussLegendre, 3, 2));
  std::stringstream sg;
  write_grid_csv(sg, g);
  std::string header, first;
  std::getline(sg, header);
  std::getline(sg, first);
  CHECK(header == "theta,phi,value");
  CHECK(first.substr(0, first.find(',')) == format_double(g.thetas[0]));
  CHECK(std::stod(first.substr(first.rfind(',') + 1)) == g.value(0, 0));
  CHECK(format_double(0.1) == "0.10000000000000001");
}

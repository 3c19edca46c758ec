#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include <boost/math/special_functions/legendre.hpp>
#include <boost/math/special_functions/spherical_harmonic.hpp>

#include "spherefield/errors.hpp"
#include "spherefield/harmonics.hpp"
#include "spherefield/quadrature.hpp"

using namespace spherefield;

namespace {

SphericalPoint random_point(std::mt19937_64& g) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return SphericalPoint(std::acos(2.0 * u(g) - 1.0), kTwoPi * u(g));
}

}  // namespace

TEST_CASE("points and multipoles") {
  const SphericalPoint x(1.1, 7.0);
  CHECK(x.phi == doctest::Approx(7.0 - kTwoPi));
  const Vec3 v = x.cartesian();
  CHECK(std::abs(v[0] * v[0] + v[1] * v[1] + v[2] * v[2] - 1.0) < 1e-12);
  const SphericalPoint back = SphericalPoint::from_cartesian(v);
  CHECK(back.theta == doctest::Approx(1.1).epsilon(1e-14));
  CHECK(back.phi == doctest::Approx(x.phi).epsilon(1e-14));
  CHECK_THROWS_AS(SphericalPoint(-0.1, 0.0), DomainError);
  CHECK_THROWS_AS(SphericalPoint(4.0, 0.0), DomainError);
  CHECK_THROWS_AS(Multipole(2, 3), DomainError);
  CHECK(Multipole(7, -3).eigenvalue() == 56);
}

TEST_CASE("legendre_poly examples") {
  CHECK(legendre_poly(0, 0.3) == 1.0);
  CHECK(legendre_poly(1, 0.3) == 0.3);
  CHECK(legendre_poly(2, 0.5) == doctest::Approx(-0.125).epsilon(1e-15));
  // Rodrigues: Q_3 = (5z^3 - 3z)/2
  CHECK(legendre_poly(3, 0.4) == doctest::Approx((5 * 0.064 - 1.2) / 2).epsilon(1e-14));
  CHECK_THROWS_AS(legendre_poly(2, 1.0001), DomainError);
}

TEST_CASE("legendre_poly_batch follows the scalar path exactly") {
  const auto a = legendre_poly_batch(1, 1.0);
  CHECK(a == std::vector<double>{1.0, 1.0});
  const auto b = legendre_poly_batch(2, 0.5);
  CHECK(b[0] == 1.0);
  CHECK(b[1] == 0.5);
  CHECK(b[2] == doctest::Approx(-0.125));
  CHECK(legendre_poly_batch(0, -1.0) == std::vector<double>{1.0});
  const auto c = legendre_poly_batch(40, -0.37);
  for (int l = 0; l <= 40; ++l) CHECK(c[static_cast<std::size_t>(l)] == legendre_poly(l, -0.37));
}

TEST_CASE("|Q_l| <= 1 up to l = 512") {
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto q = legendre_poly_batch(512, -1.0 + 2.0 * i / 999.0);
    for (double v : q) worst = std::max(worst, std::abs(v));
  }
  CHECK(worst <= 1.0);
}

TEST_CASE("associated_legendre examples and endpoints") {
  CHECK(associated_legendre(1, 1, 0.0) == doctest::Approx(-1.0));
  CHECK(associated_legendre(1, 0, 0.7) == doctest::Approx(0.7));
  CHECK(associated_legendre(2, 2, 0.0) == doctest::Approx(3.0));
  CHECK(associated_legendre(3, 2, 1.0) == 0.0);
  CHECK(associated_legendre(4, 0, -1.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(associated_legendre(2, 3, 0.1), DomainError);
}

TEST_CASE("associated_legendre agrees with Boost (Condon-Shortley phase included)") {
  for (int l : {0, 1, 5, 20, 60, 64, 65, 90}) {
    for (int m = 0; m <= l; m += std::max(1, l / 5)) {
      for (double z : {-0.93, -0.2, 0.0, 0.41, 0.88}) {
        const double ref = boost::math::legendre_p(l, m, z);
        CHECK(associated_legendre(l, m, z) == doctest::Approx(ref).epsilon(1e-10).scale(1e-300));
      }
    }
  }
}

TEST_CASE("spherical_harmonic examples") {
  const Multipole y00(0, 0), y10(1, 0), y11(1, 1);
  CHECK(spherical_harmonic(y00, SphericalPoint(0.4, 2.0)).real() == doctest::Approx(0.2820947918));
  CHECK(spherical_harmonic(y10, SphericalPoint(0.0, 0.0)).real() == doctest::Approx(0.4886025119));
  const auto v = spherical_harmonic(y11, SphericalPoint(kPi / 2, 0.0));
  CHECK(v.real() == doctest::Approx(-0.3454941494));
  CHECK(std::abs(v.imag()) < 1e-15);
}

TEST_CASE("spherical_harmonic matches closed forms and Boost") {
  const SphericalPoint x(0.8, 1.9);
  const double st = std::sin(x.theta), ct = std::cos(x.theta);
  const std::complex<double> y21 = -std::sqrt(15.0 / (8 * kPi)) * st * ct * std::polar(1.0, x.phi);
  const std::complex<double> y22 = 0.25 * std::sqrt(15.0 / (2 * kPi)) * st * st * std::polar(1.0, 2 * x.phi);
  CHECK(std::abs(spherical_harmonic(Multipole(2, 1), x) - y21) < 1e-14);
  CHECK(std::abs(spherical_harmonic(Multipole(2, 2), x) - y22) < 1e-14);
  for (int l : {3, 17, 100, 300, 512}) {
    for (int m : {-l, -l / 2, 0, 1, l / 3, l}) {
      const auto ours = spherical_harmonic(Multipole(l, m), x);
      const auto ref = boost::math::spherical_harmonic(l, m, x.theta, x.phi);
      CHECK(std::abs(ours - ref) <= 1e-10 * std::max(1.0, std::abs(ref)));
    }
  }
}

TEST_CASE("conjugation symmetry") {
  std::mt19937_64 g(3);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const SphericalPoint x = random_point(g);
    for (int l = 0; l <= 30; ++l) {
      for (int m = 0; m <= l; ++m) {
        const double sign = (m % 2 == 0) ? 1.0 : -1.0;
        worst = std::max(worst, std::abs(spherical_harmonic(Multipole(l, -m), x) -
                                         sign * std::conj(spherical_harmonic(Multipole(l, m), x))));
      }
    }
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("addition_sum examples") {
  const SphericalPoint x(0.3, 1.0);
  CHECK(addition_sum(3, x, x) == doctest::Approx(7.0 / kFourPi));
  CHECK(addition_sum(0, x, SphericalPoint(2.0, 4.0)) == doctest::Approx(1.0 / kFourPi));
  CHECK(addition_sum(2, SphericalPoint(kPi / 2, 0.0), SphericalPoint(kPi / 2, kPi / 2)) ==
        doctest::Approx(-5.0 / (8.0 * kPi)));
}

TEST_CASE("addition formula on 200 random pairs, l <= 30") {
  std::mt19937_64 g(11);
  double worst = 0.0, worst_imag = 0.0;
  for (int k = 0; k < 200; ++k) {
    const SphericalPoint x = random_point(g), y = random_point(g);
    const double c = inner_product(x, y);
    for (int l = 0; l <= 30; ++l) {
      // Independent oracle: libstdc++'s Legendre polynomial.
      worst = std::max(worst, std::abs(addition_sum(l, x, y) - (2.0 * l + 1.0) / kFourPi * std::legendre(l, c)));
      worst_imag = std::max(worst_imag, std::abs(addition_sum_complex(l, x, y).imag()));
    }
  }
  CHECK(worst <= 1e-10);
  CHECK(worst_imag <= 1e-12);
}

TEST_CASE("inner_product") {
  const SphericalPoint x(0.7, 0.2);
  CHECK(inner_product(x, x) == doctest::Approx(1.0));
  CHECK(inner_product(SphericalPoint(0.0, 0.0), SphericalPoint(kPi, 0.0)) == doctest::Approx(-1.0));
  CHECK(inner_product(SphericalPoint(kPi / 2, 0.0), SphericalPoint(kPi / 2, kPi / 3)) == doctest::Approx(0.5));
  CHECK(inner_product(SphericalPoint(0.0, 0.0), SphericalPoint(0.0, 1.0)) <= 1.0);
}

TEST_CASE("quadrature rules integrate polynomials exactly") {
  for (int n : {5, 16, 64}) {
    const auto gl = gauss_legendre(n);
    const auto cc = clenshaw_curtis(n);
    for (int k = 0; k < n; ++k) {
      const double exact = (k % 2 == 1) ? 0.0 : 2.0 / (k + 1);
      double sgl = 0.0, scc = 0.0;
      for (int i = 0; i < n; ++i) {
        sgl += gl.weights[static_cast<std::size_t>(i)] * std::pow(gl.nodes[static_cast<std::size_t>(i)], k);
        scc += cc.weights[static_cast<std::size_t>(i)] * std::pow(cc.nodes[static_cast<std::size_t>(i)], k);
      }
      if (k <= 2 * n - 1) CHECK(sgl == doctest::Approx(exact).scale(1.0).epsilon(1e-13));
      if (k <= n - 1) CHECK(scc == doctest::Approx(exact).scale(1.0).epsilon(1e-13));
    }
  }
}

TEST_CASE("orthonormality on a 64 x 128 Gauss-Legendre grid, l <= 16") {
  const int nt = 64, np = 128, L = 16;
  const auto rule = gauss_legendre(nt);
  std::vector<std::vector<std::complex<double>>> ys;  // [node][lm]
  std::vector<double> w;
  for (int i = 0; i < nt; ++i) {
    for (int k = 0; k < np; ++k) {
      const SphericalPoint x(std::acos(rule.nodes[static_cast<std::size_t>(i)]), kTwoPi * k / np);
      std::vector<std::complex<double>> row;
      for (int l = 0; l <= L; ++l)
        for (int m = -l; m <= l; ++m) row.push_back(spherical_harmonic(Multipole(l, m), x));
      ys.push_back(std::move(row));
      w.push_back(rule.weights[static_cast<std::size_t>(i)] * kTwoPi / np);
    }
  }
  const std::size_t n = ys[0].size();
  double worst = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a; b < n; ++b) {
      std::complex<double> s{0.0, 0.0};
      for (std::size_t p = 0; p < ys.size(); ++p) s += w[p] * ys[p][a] * std::conj(ys[p][b]);
      worst = std::max(worst, std::abs(s - (a == b ? 1.0 : 0.0)));
    }
  }
  CHECK(worst <= 1e-8);
}

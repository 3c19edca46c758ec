#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "spherefield/errors.hpp"
#include "spherefield/fractional.hpp"
#include "spherefield/harmonics.hpp"
#include "spherefield/mittag_leffler.hpp"
#include "spherefield/subordinate.hpp"

using namespace spherefield;

namespace {

struct Mean {
  double mean, se;
};

Mean laplace_mean(const std::vector<double>& v, double xi) {
  double s = 0.0, ss = 0.0;
  for (double x : v) s += std::exp(-xi * x);
  const double m = s / v.size();
  for (double x : v) ss += (std::exp(-xi * x) - m) * (std::exp(-xi * x) - m);
  return {m, std::sqrt(ss / (v.size() - 1) / v.size())};
}

bool within3(const Mean& m, double target) { return std::abs(m.mean - target) <= 3.0 * m.se; }

// Two-sample Kolmogorov-Smirnov p-value from the asymptotic Kolmogorov series.
double ks_pvalue(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(double(i) / a.size() - double(j) / b.size()));
  }
  const double ne = double(a.size()) * b.size() / (a.size() + b.size());
  const double lambda = (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * d;
  double p = 0.0;
  for (int k = 1; k <= 100; ++k) p += 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
  return std::clamp(p, 0.0, 1.0);
}

}  // namespace

TEST_CASE("symbol evaluation") {
  CHECK(symbol_eval(SubordinatorSymbol::stable(0.5), 4.0) == doctest::Approx(2.0));
  CHECK(symbol_eval(SubordinatorSymbol::stable(0.3), 0.0) == 0.0);
  CHECK(symbol_eval(SubordinatorSymbol::elementary(), 0.0) == 0.0);
  CHECK(symbol_eval(SubordinatorSymbol::elementary(), 6.0) == 6.0);
  CHECK_THROWS_AS(symbol_eval(SubordinatorSymbol::elementary(), -1.0), DomainError);
  CHECK_THROWS_AS(SubordinatorSymbol::stable(1.0), DomainError);

  const auto log1p = SubordinatorSymbol::custom([](double x) { return std::log1p(x); }, "log1p");
  CHECK(log1p(0.0) == 0.0);
  CHECK(log1p(std::exp(1.0) - 1.0) == doctest::Approx(1.0));
  CHECK_FALSE(log1p.has_sampler());
  const auto bad = SubordinatorSymbol::custom([](double x) { return x > 1.0 ? -1.0 : 0.0; }, "bad");
  CHECK_THROWS_AS(bad(2.0), ContractError);
  CHECK_THROWS_AS(SubordinatorSymbol::custom([](double) { return 1.0; }), ContractError);
}

TEST_CASE("Laplace exponents are nondecreasing and concave") {
  CHECK(symbol_shape_ok(SubordinatorSymbol::stable(0.3), 100.0));
  CHECK(symbol_shape_ok(SubordinatorSymbol::elementary(), 100.0));
  CHECK(symbol_shape_ok(SubordinatorSymbol::custom([](double x) { return std::log1p(x); }), 50.0));
  CHECK_FALSE(symbol_shape_ok(SubordinatorSymbol::custom([](double x) { return x * x; }), 10.0));
  // Growth caps used by truncation bounds.
  for (int l = 0; l <= 64; ++l) {
    CHECK(SubordinatorSymbol::stable(0.5)(eigenvalue(l)) <= std::pow(eigenvalue(l), 0.5) + 1e-12);
    CHECK(SubordinatorSymbol::elementary()(eigenvalue(l)) <= eigenvalue(l));
  }
}

TEST_CASE("stable sampler: Laplace contract") {
  const auto a = sample_stable(0.5, 1.0, 100000, 1);
  CHECK(within3(laplace_mean(a, 1.0), std::exp(-1.0)));
  const auto b = sample_stable(0.5, 2.0, 100000, 2);
  CHECK(within3(laplace_mean(b, 1.0), std::exp(-2.0)));
  int misses = 0;
  std::uint64_t seed = 10;
  for (double t : {0.5, 1.0}) {
    const auto v = sample_stable(0.5, t, 100000, seed++);
    for (double xi : {0.5, 1.0, 2.0, 6.0}) misses += !within3(laplace_mean(v, xi), std::exp(-t * std::sqrt(xi)));
  }
  CHECK(misses == 0);
  for (double x : a) CHECK(x > 0.0);
}

TEST_CASE("stable sampler: self-similarity h_t = t^(1/beta) h_1 in law") {
  const double beta = 0.6, t = 2.5;
  const auto ht = sample_stable(beta, t, 10000, 101);
  auto h1 = sample_stable(beta, 1.0, 10000, 202);
  for (auto& x : h1) x *= std::pow(t, 1.0 / beta);
  CHECK(ks_pvalue(ht, h1) > 0.01);
  // Sanity: a mis-scaled copy is rejected.
  auto wrong = h1;
  for (auto& x : wrong) x *= 1.5;
  CHECK(ks_pvalue(ht, wrong) < 0.01);
}

TEST_CASE("stable sampler: errors and determinism") {
  CHECK_THROWS_AS(sample_stable(1.0, 1.0, 10, 1), DomainError);
  CHECK_THROWS_AS(sample_stable(0.5, 0.0, 10, 1), DomainError);
  CHECK(sample_stable(0.4, 1.0, 1000, 9) == sample_stable(0.4, 1.0, 1000, 9));
  CHECK(sample_stable(0.4, 1.0, 1000, 9) != sample_stable(0.4, 1.0, 1000, 10));
}

TEST_CASE("inverse stable sampler: Laplace contract and mean") {
  const auto v = sample_inverse_stable(0.5, 1.0, 100000, 3);
  CHECK(within3(laplace_mean(v, 1.0), 0.4275836));

  // E L_t = int_0^inf P(h_x < t) dx; for beta = 1/2, h_x is Levy with P(h_x < t) = erfc(x / (2 sqrt t)).
  boost::math::quadrature::exp_sinh<double> integrator;
  const double t = 1.0;
  const double mean_oracle = integrator.integrate([&](double x) { return std::erfc(x / (2.0 * std::sqrt(t))); });
  CHECK(mean_oracle == doctest::Approx(1.0 / std::tgamma(1.5)).epsilon(1e-10));
  double s = 0.0, ss = 0.0;
  for (double x : v) s += x;
  const double m = s / v.size();
  for (double x : v) ss += (x - m) * (x - m);
  CHECK(std::abs(m - mean_oracle) <= 3.0 * std::sqrt(ss / (v.size() - 1) / v.size()));

  int misses = 0;
  std::uint64_t seed = 30;
  for (double tt : {0.5, 1.0}) {
    const auto w = sample_inverse_stable(0.5, tt, 100000, seed++);
    for (double xi : {0.5, 1.0, 2.0, 6.0}) {
      misses += !within3(laplace_mean(w, xi), mittag_leffler(0.5, -xi * std::sqrt(tt)));
    }
  }
  CHECK(misses == 0);
}

TEST_CASE("inverse stable sampler: small t and errors") {
  const auto v = sample_inverse_stable(0.5, 1e-8, 100000, 4);
  CHECK(*std::max_element(v.begin(), v.end()) <= 1e-2);
  CHECK_THROWS_AS(sample_inverse_stable(1.0, 1.0, 10, 1), DomainError);
  CHECK_THROWS_AS(sample_inverse_stable(0.5, -1.0, 10, 1), DomainError);
}

TEST_CASE("random clock") {
  const RandomClock elem{0.0, 0.5, SubordinatorSymbol::elementary(), 5};
  CHECK(within3(laplace_mean(sample_clock(elem, 1.0, 100000), 1.0), mittag_leffler(0.5, -1.0)));
  const RandomClock stab{0.0, 0.5, SubordinatorSymbol::stable(0.5), 6};
  CHECK(within3(laplace_mean(sample_clock(stab, 1.0, 100000), 1.0), mittag_leffler(0.5, -1.0)));

  const auto zero = sample_clock(stab, 0.0, 100);
  CHECK(std::all_of(zero.begin(), zero.end(), [](double x) { return x == 0.0; }));

  const RandomClock custom{0.0, 0.5, SubordinatorSymbol::custom([](double x) { return std::log1p(x); }), 1};
  CHECK_THROWS_AS(sample_clock(custom, 1.0, 10), NoSamplerError);
  CHECK_THROWS_AS(sample_clock(RandomClock{-1.0, 0.5, SubordinatorSymbol::elementary(), 1}, 1.0, 10), DomainError);
}

TEST_CASE("clock identity E exp(-mu_l tau_t) = E_beta(-t^beta Psi(mu_l)) at gamma = 0") {
  int misses = 0;
  std::uint64_t seed = 50;
  for (const auto& sym : {SubordinatorSymbol::elementary(), SubordinatorSymbol::stable(0.5)}) {
    for (double t : {0.5, 1.0}) {
      const auto tau = sample_clock(RandomClock{0.0, 0.5, sym, seed++}, t, 100000);
      for (int l : {1, 2, 3}) {
        misses += !within3(laplace_mean(tau, eigenvalue(l)), mittag_leffler(0.5, -std::sqrt(t) * sym(eigenvalue(l))));
      }
    }
  }
  CHECK(misses == 0);
}

TEST_CASE("clock draws are nonnegative and nondecreasing in t under a shared seed") {
  const RandomClock c{0.8, 0.6, SubordinatorSymbol::stable(0.4), 77};
  std::vector<double> prev(2000, 0.0);
  for (double t : {0.1, 0.5, 1.0, 3.0}) {
    const auto v = sample_clock(c, t, 2000);
    for (std::size_t i = 0; i < v.size(); ++i) {
      CHECK(v[i] >= prev[i]);
      prev[i] = v[i];
    }
  }
  // beta = 1 is the degenerate clock L_t = t.
  const auto det = sample_clock(RandomClock{0.0, 1.0, SubordinatorSymbol::elementary(), 1}, 0.7, 10);
  for (double x : det) CHECK(x == 0.7);
}

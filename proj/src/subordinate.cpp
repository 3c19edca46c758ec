#include "spherefield/subordinate.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "spherefield/errors.hpp"
#include "spherefield/harmonics.hpp"

namespace spherefield {

namespace {

void check_open_unit(double beta, const char* what) {
  if (!(beta > 0.0 && beta < 1.0)) {
    throw DomainError(std::string(what) + " must lie in (0, 1), got " + std::to_string(beta));
  }
}

std::string stable_name(double beta_s) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "stable(%g)", beta_s);
  return buf;
}

void check_positive_time(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw DomainError("time must be positive and finite, got " + std::to_string(t));
  }
}

}  // namespace

SubordinatorSymbol SubordinatorSymbol::stable(double beta_s) {
  check_open_unit(beta_s, "stable index");
  return SubordinatorSymbol(SymbolFamily::Stable, beta_s,
                            [beta_s](double xi) { return std::pow(xi, beta_s); },
                            stable_name(beta_s));
}

SubordinatorSymbol SubordinatorSymbol::elementary() {
  return SubordinatorSymbol(SymbolFamily::Elementary, 1.0, [](double xi) { return xi; },
                            "elementary");
}

SubordinatorSymbol SubordinatorSymbol::custom(Function psi, std::string name) {
  if (!psi) throw ContractError("custom symbol needs a callable");
  if (psi(0.0) != 0.0) throw ContractError("custom symbol must satisfy Psi(0) = 0");
  return SubordinatorSymbol(SymbolFamily::Custom, 0.0, std::move(psi), std::move(name));
}

double SubordinatorSymbol::operator()(double xi) const {
  if (!(xi >= 0.0)) {
    throw DomainError("Laplace exponent argument must be nonnegative, got " + std::to_string(xi));
  }
  const double v = fn_(xi);
  if (family_ == SymbolFamily::Custom) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw ContractError("custom symbol '" + name_ + "' returned " + std::to_string(v) +
                          " at xi=" + std::to_string(xi));
    }
    if (xi == 0.0 && v != 0.0) throw ContractError("custom symbol must satisfy Psi(0) = 0");
  }
  return v;
}

double symbol_eval(const SubordinatorSymbol& sym, double xi) { return sym(xi); }

bool symbol_shape_ok(const SubordinatorSymbol& sym, double xi_max, int points, double tol) {
  if (sym(0.0) != 0.0) return false;
  const double h = xi_max / points;
  double prev = sym(0.0);
  double prev_diff = 0.0;
  for (int i = 1; i <= points; ++i) {
    const double v = sym(i * h);
    const double diff = v - prev;
    if (diff < -tol) return false;
    if (i > 1 && diff - prev_diff > tol * std::max(1.0, std::abs(v))) return false;
    prev = v;
    prev_diff = diff;
  }
  return true;
}

double draw_stable_unit(double beta_s, Rng& rng) {
  const double u = kPi * rng.uniform();
  const double w = rng.exponential();
  const double a = beta_s;
  const double log_s = std::log(std::sin(a * u)) - std::log(std::sin(u)) / a +
                       (1.0 - a) / a * (std::log(std::sin((1.0 - a) * u)) - std::log(w));
  return std::exp(log_s);
}

std::vector<double> sample_stable(double beta_s, double t, std::size_t n, std::uint64_t seed) {
  check_open_unit(beta_s, "stable index");
  check_positive_time(t);
  Rng rng(seed);
  const double scale = std::pow(t, 1.0 / beta_s);
  std::vector<double> out(n);
  for (auto& v : out) v = scale * draw_stable_unit(beta_s, rng);
  return out;
}

double draw_inverse_stable(double beta, double t, Rng& rng) {
  if (t <= 0.0) return 0.0;
  if (beta == 1.0) return t;
  return std::pow(t / draw_stable_unit(beta, rng), beta);
}

std::vector<double> sample_inverse_stable(double beta, double t, std::size_t n,
                                          std::uint64_t seed) {
  check_open_unit(beta, "inverse stable order");
  check_positive_time(t);
  Rng rng(seed);
  std::vector<double> out(n);
  for (auto& v : out) v = draw_inverse_stable(beta, t, rng);
  return out;
}

void validate_clock(const RandomClock& clock) {
  if (!(clock.beta > 0.0 && clock.beta <= 1.0)) {
    throw DomainError("clock order must lie in (0, 1], got " + std::to_string(clock.beta));
  }
  if (!(clock.gamma >= 0.0)) {
    throw DomainError("clock drift must be nonnegative, got " + std::to_string(clock.gamma));
  }
  if (!clock.symbol.has_sampler()) {
    throw NoSamplerError("symbol '" + clock.symbol.name() +
                         "' is evaluation-only; no subordinator sampler exists for it");
  }
}

double draw_clock(const RandomClock& clock, double t, Rng& rng) {
  if (!(t >= 0.0)) throw DomainError("clock time must be nonnegative");
  const double l = draw_inverse_stable(clock.beta, t, rng);
  if (l == 0.0) return 0.0;
  double f = l;
  if (clock.symbol.family() == SymbolFamily::Stable) {
    f = std::pow(l, 1.0 / clock.symbol.index()) * draw_stable_unit(clock.symbol.index(), rng);
  }
  return clock.gamma * l + f;
}

std::vector<double> sample_clock(const RandomClock& clock, double t, std::size_t n) {
  validate_clock(clock);
  Rng rng(clock.seed);
  std::vector<double> out(n);
  for (auto& v : out) v = draw_clock(clock, t, rng);
  return out;
}

}  // namespace spherefield

#pragma once

// Subordinators enter the library only through their Laplace exponent
// Psi(xi) = -log E exp(-xi F(1)); the Levy measure is never materialized.
// Stable and elementary (F(t) = t) families also come with exact samplers.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "spherefield/rng.hpp"

namespace spherefield {

enum class SymbolFamily { Stable, Elementary, Custom };

class SubordinatorSymbol {
 public:
  using Function = std::function<double(double)>;

  /// Psi(xi) = xi^beta_s, beta_s in (0, 1).
  static SubordinatorSymbol stable(double beta_s);
  /// Psi(xi) = xi, the degenerate subordinator F(t) = t.
  static SubordinatorSymbol elementary();
  /// Evaluation-only symbol. Psi(0) must be 0 and values nonnegative; both
  /// are checked on every evaluation.
  static SubordinatorSymbol custom(Function psi, std::string name = "custom");

  SymbolFamily family() const { return family_; }
  /// Stability index of a Stable symbol (1 for Elementary, 0 for Custom).
  double index() const { return index_; }
  const std::string& name() const { return name_; }
  bool has_sampler() const { return family_ != SymbolFamily::Custom; }

  double operator()(double xi) const;

 private:
  SubordinatorSymbol(SymbolFamily family, double index, Function fn, std::string name)
      : family_(family), index_(index), fn_(std::move(fn)), name_(std::move(name)) {}

  SymbolFamily family_;
  double index_;
  Function fn_;
  std::string name_;
};

double symbol_eval(const SubordinatorSymbol& sym, double xi);

/// Spot check of the Bernstein-function shape on a uniform grid over
/// [0, xi_max]: Psi(0) = 0, nonnegative first differences, nonpositive
/// second differences (within tol).
bool symbol_shape_ok(const SubordinatorSymbol& sym, double xi_max, int points = 200,
                     double tol = 1e-12);

/// One draw of the standard positive beta_s-stable variable S with
/// E exp(-xi S) = exp(-xi^beta_s) (Kanter / Chambers-Mallows-Stuck form).
double draw_stable_unit(double beta_s, Rng& rng);

/// n i.i.d. draws of the stable subordinator at time t: t^(1/beta_s) S.
std::vector<double> sample_stable(double beta_s, double t, std::size_t n, std::uint64_t seed);

/// One draw of the inverse stable subordinator L_t = (t / S)^beta.
double draw_inverse_stable(double beta, double t, Rng& rng);

/// n i.i.d. draws of L_t with E exp(-xi L_t) = E_beta(-xi t^beta).
std::vector<double> sample_inverse_stable(double beta, double t, std::size_t n,
                                          std::uint64_t seed);

/// Random clock tau_t = gamma L_t + F(L_t), F independent of L with symbol
/// `symbol`. beta = 1 is accepted and means L_t = t.
struct RandomClock {
  double gamma = 0.0;
  double beta = 0.5;
  SubordinatorSymbol symbol = SubordinatorSymbol::elementary();
  std::uint64_t seed = 0;
};

/// Checks the clock parameters and that the symbol has a sampler.
void validate_clock(const RandomClock& clock);

/// One clock value at time t using the caller's generator.
double draw_clock(const RandomClock& clock, double t, Rng& rng);

/// n i.i.d. clock values at time t, seeded from clock.seed.
std::vector<double> sample_clock(const RandomClock& clock, double t, std::size_t n);

}  // namespace spherefield

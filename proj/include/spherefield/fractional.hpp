#pragma once

// Fractional-in-time machinery: the Caputo derivative by product integration
// and the degree-wise temporal multipliers T_l(t) of the solution models.
//
//   HEAT        T_l(t) = exp(-t mu_l)
//   THM1        T_l(t) = E_beta(-t^beta (gamma + Psi(mu_l)))
//   THM1_DRIFT  T_l(t) = E_beta(-t^beta (gamma mu_l + Psi(mu_l)))
//   THM2        T_l(t) = exp(-t mu_l) (gamma + phi mu_l + Psi(mu_l))^(-beta)
//   COR1        T_l    = (gamma + Psi(mu_l))^(-beta)
//
// THM1 is the canonical first model. THM1_DRIFT is the drift-clock reading in
// which gamma multiplies the Brownian time instead of killing the field; the
// two coincide at gamma = 0.

#include <cstddef>
#include <functional>
#include <span>
#include <string>

#include "spherefield/mittag_leffler.hpp"
#include "spherefield/subordinate.hpp"

namespace spherefield {

struct FracParams {
  double beta = 0.5;   ///< fractional order, (0, 1]
  double gamma = 1.0;  ///< mass / killing parameter, >= 0
  double phi = 0.0;    ///< time-drift coefficient (THM2), >= 0

  /// Throws DomainError if a field is out of range.
  void validate() const;
};

enum class KernelModel { Heat, Thm1, Thm1Drift, Thm2, Cor1 };

std::string to_string(KernelModel model);
/// Parses "HEAT", "THM1", "THM1_DRIFT", "THM2", "COR1" (case-insensitive).
KernelModel parse_kernel_model(const std::string& name);

class TemporalKernel {
 public:
  TemporalKernel(KernelModel model, FracParams params,
                 SubordinatorSymbol symbol = SubordinatorSymbol::elementary());

  KernelModel model() const { return model_; }
  const FracParams& params() const { return params_; }
  const SubordinatorSymbol& symbol() const { return symbol_; }
  const MittagLeffler& mittag_leffler() const { return ml_; }

  /// T_l(t). Throws SingularModelError when the model's base vanishes at l.
  double operator()(int l, double t) const;

  /// The positive quantity raised to -beta (THM2, COR1) or scaled by t^beta
  /// (THM1 variants) at degree l; mu_l for HEAT.
  double rate(int l) const;

  /// Checks every degree up to l_max; throws SingularModelError on the first
  /// degree whose base is not positive.
  void validate(int l_max) const;

 private:
  KernelModel model_;
  FracParams params_;
  SubordinatorSymbol symbol_;
  MittagLeffler ml_;
};

double kernel_heat(int l, double t);
double kernel_thm1(const TemporalKernel& kernel, int l, double t);
double kernel_thm2(const TemporalKernel& kernel, int l, double t);
double kernel_cor1(const TemporalKernel& kernel, int l);

/// 1 / (1 + Gamma(1 - beta) x), a lower bound for E_beta(-x) on x >= 0.
double simon_lower_bound(double beta, double x);

/// Caputo derivative of order beta at time t from samples f(s_j),
/// s_j = j t / (n - 1). Product integration: f is replaced by its piecewise
/// linear interpolant and the (t - s)^(-beta) weight is integrated exactly
/// on every cell (the L1 scheme).
double caputo_derivative(std::span<const double> samples, double beta, double t);

/// Same, sampling f on n uniform points of [0, t] first.
double caputo_derivative(const std::function<double(double)>& f, double beta, double t,
                         std::size_t n);

}  // namespace spherefield

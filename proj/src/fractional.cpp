#include "spherefield/fractional.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>
#include <vector>

#include "spherefield/errors.hpp"
#include "spherefield/harmonics.hpp"

namespace spherefield {

void FracParams::validate() const {
  if (!(beta > 0.0 && beta <= 1.0)) {
    throw DomainError("beta must lie in (0, 1], got " + std::to_string(beta));
  }
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw DomainError("gamma must be finite and >= 0, got " + std::to_string(gamma));
  }
  if (!(phi >= 0.0) || !std::isfinite(phi)) {
    throw DomainError("phi must be finite and >= 0, got " + std::to_string(phi));
  }
}

std::string to_string(KernelModel model) {
  switch (model) {
    case KernelModel::Heat: return "HEAT";
    case KernelModel::Thm1: return "THM1";
    case KernelModel::Thm1Drift: return "THM1_DRIFT";
    case KernelModel::Thm2: return "THM2";
    case KernelModel::Cor1: return "COR1";
  }
  return "?";
}

KernelModel parse_kernel_model(const std::string& name) {
  std::string up(name);
  std::transform(up.begin(), up.end(), up.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  if (up == "HEAT") return KernelModel::Heat;
  if (up == "THM1") return KernelModel::Thm1;
  if (up == "THM1_DRIFT") return KernelModel::Thm1Drift;
  if (up == "THM2") return KernelModel::Thm2;
  if (up == "COR1") return KernelModel::Cor1;
  throw ConfigError("unknown model '" + name + "' (expected HEAT, THM1, THM1_DRIFT, THM2 or COR1)");
}

namespace {
double validated_beta(const FracParams& params) {
  params.validate();
  return params.beta;
}
}  // namespace

TemporalKernel::TemporalKernel(KernelModel model, FracParams params, SubordinatorSymbol symbol)
    : model_(model), params_(params), symbol_(std::move(symbol)), ml_(validated_beta(params)) {}

double TemporalKernel::rate(int l) const {
  const double mu = eigenvalue(l);
  switch (model_) {
    case KernelModel::Heat: return mu;
    case KernelModel::Thm1: return params_.gamma + symbol_(mu);
    case KernelModel::Thm1Drift: return params_.gamma * mu + symbol_(mu);
    case KernelModel::Thm2: return params_.gamma + params_.phi * mu + symbol_(mu);
    case KernelModel::Cor1: return params_.gamma + symbol_(mu);
  }
  return 0.0;
}

void TemporalKernel::validate(int l_max) const {
  if (model_ != KernelModel::Thm2 && model_ != KernelModel::Cor1) return;
  for (int l = 0; l <= l_max; ++l) {
    if (!(rate(l) > 0.0)) {
      throw SingularModelError(to_string(model_) + " kernel base vanishes at l=" +
                               std::to_string(l) + " (needs gamma > 0 when Psi(mu_l) = 0)");
    }
  }
}

double TemporalKernel::operator()(int l, double t) const {
  if (l < 0) throw DomainError("degree must be non-negative");
  if (!(t >= 0.0)) throw DomainError("time must be nonnegative, got " + std::to_string(t));
  switch (model_) {
    case KernelModel::Heat:
      return std::exp(-t * eigenvalue(l));
    case KernelModel::Thm1:
    case KernelModel::Thm1Drift:
      if (t == 0.0) return 1.0;
      return ml_(-std::pow(t, params_.beta) * rate(l));
    case KernelModel::Thm2:
    case KernelModel::Cor1: {
      const double base = rate(l);
      if (!(base > 0.0)) {
        throw SingularModelError(to_string(model_) + " kernel base vanishes at l=" +
                                 std::to_string(l));
      }
      const double power = std::pow(base, -params_.beta);
      return model_ == KernelModel::Thm2 ? std::exp(-t * eigenvalue(l)) * power : power;
    }
  }
  return 0.0;
}

double kernel_heat(int l, double t) {
  if (l < 0) throw DomainError("degree must be non-negative");
  if (!(t >= 0.0)) throw DomainError("time must be nonnegative");
  return std::exp(-t * eigenvalue(l));
}

double kernel_thm1(const TemporalKernel& kernel, int l, double t) {
  if (kernel.model() != KernelModel::Thm1 && kernel.model() != KernelModel::Thm1Drift) {
    throw ContractError("kernel_thm1 called with a " + to_string(kernel.model()) + " kernel");
  }
  return kernel(l, t);
}

double kernel_thm2(const TemporalKernel& kernel, int l, double t) {
  if (kernel.model() != KernelModel::Thm2) {
    throw ContractError("kernel_thm2 called with a " + to_string(kernel.model()) + " kernel");
  }
  return kernel(l, t);
}

double kernel_cor1(const TemporalKernel& kernel, int l) {
  if (kernel.model() != KernelModel::Cor1) {
    throw ContractError("kernel_cor1 called with a " + to_string(kernel.model()) + " kernel");
  }
  return kernel(l, 0.0);
}

double simon_lower_bound(double beta, double x) {
  if (!(beta > 0.0 && beta < 1.0)) throw DomainError("simon_lower_bound needs beta in (0, 1)");
  if (!(x >= 0.0)) throw DomainError("simon_lower_bound needs x >= 0");
  return 1.0 / (1.0 + std::tgamma(1.0 - beta) * x);
}

double caputo_derivative(std::span<const double> samples, double beta, double t) {
  if (!(beta > 0.0 && beta < 1.0)) {
    throw DomainError("Caputo order must lie in (0, 1), got " + std::to_string(beta));
  }
  if (!(t > 0.0)) throw DomainError("Caputo derivative needs t > 0");
  if (samples.size() < 3) throw ResolutionError("Caputo quadrature needs at least 3 samples");

  const std::size_t cells = samples.size() - 1;
  const double h = t / static_cast<double>(cells);
  const double one_minus = 1.0 - beta;
  // Cell j contributes (f_{j+1} - f_j)/h * int_{s_j}^{s_{j+1}} (t - s)^(-beta) ds
  //   = (f_{j+1} - f_j) h^(-beta) [(N-j)^(1-beta) - (N-j-1)^(1-beta)] / (1-beta).
  double sum = 0.0;
  for (std::size_t j = 0; j < cells; ++j) {
    const double a = static_cast<double>(cells - j);
    const double weight = std::pow(a, one_minus) - std::pow(a - 1.0, one_minus);
    sum += (samples[j + 1] - samples[j]) * weight;
  }
  return sum * std::pow(h, -beta) / (one_minus * std::tgamma(one_minus));
}

double caputo_derivative(const std::function<double(double)>& f, double beta, double t,
                         std::size_t n) {
  if (n < 3) throw ResolutionError("Caputo quadrature needs at least 3 samples");
  if (!(t > 0.0)) throw DomainError("Caputo derivative needs t > 0");
  std::vector<double> samples(n);
  for (std::size_t j = 0; j < n; ++j) samples[j] = f(t * static_cast<double>(j) / (n - 1));
  return caputo_derivative(samples, beta, t);
}

}  // namespace spherefield

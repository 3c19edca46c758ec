#pragma once

// Command-line front end. Settings come from a JSON config; --seed, --lmax,
// --out and --workers override it; anything unset falls back to the defaults
// below. Every setting is validated before any file is created.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "spherefield/field.hpp"
#include "spherefield/fractional.hpp"

namespace spherefield {

struct SpectrumSpec {
  std::string type = "power_law";  ///< power_law | zero | file
  double amplitude = 1.0;
  double exponent = 3.0;
  std::string file;
};

struct RunConfig {
  KernelModel model = KernelModel::Thm1;
  FracParams params{0.5, 1.0, 0.0};
  std::string symbol_family = "STABLE";  ///< STABLE | ELEMENTARY
  double symbol_index = 0.5;
  SpectrumSpec spectrum;
  int l_max = 64;
  std::string grid_kind = "gauss_legendre";  ///< gauss_legendre | equiangular
  int n_theta = 0;                           ///< 0: 2 (l_max + 1)
  int n_phi = 0;                             ///< 0: 2 l_max + 2
  std::vector<double> times{0.0, 0.5, 1.0};
  std::uint64_t seed = 1;
  std::string out = "spherefield_out";
  std::vector<double> cos_angles{1.0, 0.5, 0.0};
  std::vector<std::pair<double, double>> time_pairs{{0.5, 0.5}, {0.5, 1.5}};
  std::size_t n_realizations = 10000;
  double diagnose_t = 1.0;
  long horizon = 100000;
  double diagnose_cos = 1.0;
};

/// Overlays the keys of a JSON document on the defaults. Unknown keys and
/// wrongly typed values throw ConfigError.
RunConfig config_from_json(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);
nlohmann::ordered_json config_to_json(const RunConfig& config);

SubordinatorSymbol make_symbol(const RunConfig& config);
TemporalKernel make_kernel(const RunConfig& config);
AngularPowerSpectrum make_spectrum(const RunConfig& config);

/// Throws the library error naming the first violated precondition.
void validate_config(const RunConfig& config);

/// Entry point for the `spherefield` binary. Returns the process exit code:
/// 0 success, 1 a verify suite failed, 2 invalid input.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace spherefield

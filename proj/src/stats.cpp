#include "spherefield/stats.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "spherefield/errors.hpp"
#include "spherefield/field_io.hpp"
#include "spherefield/parallel.hpp"
#include "spherefield/rng.hpp"

namespace spherefield {

namespace {

constexpr std::size_t kDrawsPerBlock = 256;
constexpr long kTermsPerBlock = 2048;

int effective_lmax(const AngularPowerSpectrum& spectrum, int l_max) {
  if (l_max < 0) throw DomainError("l_max must be non-negative");
  return std::min(l_max, spectrum.l_max());
}

void check_cos(double c) {
  if (!(c >= -1.0 && c <= 1.0)) throw DomainError("cos_angle must lie in [-1, 1]");
}

// Real field value from the m >= 0 half: a_{l0} Y_{l0} + 2 Re sum_{m>0} a_{lm} Y_{lm}.
double field_value(const HarmonicCoefficients& a, const std::vector<double>& mult,
                   const std::vector<std::complex<double>>& y, int l_max) {
  double v = 0.0;
  for (int l = 0; l <= l_max; ++l) {
    double row = (a(l, 0) * y[tri_index(l, 0)]).real();
    for (int m = 1; m <= l; ++m) row += 2.0 * (a(l, m) * y[tri_index(l, m)]).real();
    v += mult[static_cast<std::size_t>(l)] * row;
  }
  return v;
}

std::vector<std::complex<double>> harmonic_table(const SphericalPoint& x, int l_max) {
  const auto p = normalized_legendre_table(l_max, std::cos(x.theta));
  std::vector<std::complex<double>> out(p.size());
  for (int l = 0; l <= l_max; ++l) {
    for (int m = 0; m <= l; ++m) out[tri_index(l, m)] = std::polar(p[tri_index(l, m)], m * x.phi);
  }
  return out;
}

std::vector<long> make_checkpoints(long horizon) {
  std::vector<long> cps;
  for (long h = 1; h <= std::min<long>(10, horizon); ++h) cps.push_back(h);
  for (int k = 21;; ++k) {
    const long h = std::lround(std::pow(10.0, k / 20.0));
    if (h >= horizon) break;
    cps.push_back(h);
  }
  for (long extra : {horizon / 10, horizon / 2, horizon}) {
    if (extra >= 1) cps.push_back(extra);
  }
  std::sort(cps.begin(), cps.end());
  cps.erase(std::unique(cps.begin(), cps.end()), cps.end());
  return cps;
}

}  // namespace

double theoretical_covariance(const AngularPowerSpectrum& spectrum, const TemporalKernel& kernel,
                              double t, double s, double cos_angle, int l_max) {
  check_cos(cos_angle);
  const int L = effective_lmax(spectrum, l_max);
  kernel.validate(L);
  const auto q = legendre_poly_batch(L, cos_angle);
  double sum = 0.0;
  for (int l = 0; l <= L; ++l) {
    if (spectrum[l] == 0.0) continue;
    // kernel product first so swapping t and s is bit-exact
    const double tt = kernel(l, t) * kernel(l, s);
    sum += (2.0 * l + 1.0) / kFourPi * spectrum[l] * tt * q[static_cast<std::size_t>(l)];
  }
  return sum;
}

double variance(const AngularPowerSpectrum& spectrum, const TemporalKernel& kernel, double t,
                int l_max) {
  return theoretical_covariance(spectrum, kernel, t, t, 1.0, l_max);
}

Estimate empirical_covariance(const ModelRun& run, const SphericalPoint& x, const SphericalPoint& y,
                              double t, double s, std::size_t n, std::uint64_t seed) {
  if (n < 100) {
    throw InsufficientSamplesError("empirical covariance needs at least 100 realizations, got " +
                                   std::to_string(n));
  }
  const int L = effective_lmax(run.spectrum, run.l_max);
  run.kernel.validate(L);
  std::vector<double> kt(static_cast<std::size_t>(L) + 1), ks(kt.size());
  for (int l = 0; l <= L; ++l) {
    kt[static_cast<std::size_t>(l)] = run.kernel(l, t);
    ks[static_cast<std::size_t>(l)] = run.kernel(l, s);
  }
  const auto yx = harmonic_table(x, L);
  const auto yy = harmonic_table(y, L);
  std::vector<double> truncated(run.spectrum.values().begin(),
                                run.spectrum.values().begin() + L + 1);
  const AngularPowerSpectrum spec(std::move(truncated));

  std::vector<double> products(n);
  const std::size_t blocks = (n + kDrawsPerBlock - 1) / kDrawsPerBlock;
  parallel_for_chunks(blocks, [&](std::size_t b) {
    Rng rng(derive_seed(seed, b));
    HarmonicCoefficients a(L);
    const std::size_t end = std::min(n, (b + 1) * kDrawsPerBlock);
    for (std::size_t i = b * kDrawsPerBlock; i < end; ++i) {
      sample_coefficients(spec, rng, a);
      products[i] = field_value(a, kt, yx, L) * field_value(a, ks, yy, L);
    }
  });

  // Shifted accumulation keeps identical samples exact and the variance stable.
  const double shift = products[0];
  std::vector<double> centred(n);
  for (std::size_t i = 0; i < n; ++i) centred[i] = products[i] - shift;
  const double mean_c = pairwise_sum(centred.data(), n) / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) centred[i] = (centred[i] - mean_c) * (centred[i] - mean_c);
  const double var = pairwise_sum(centred.data(), n) / static_cast<double>(n - 1);
  return {shift + mean_c, std::sqrt(var / static_cast<double>(n)), n};
}

CovarianceReport covariance_report(const ModelRun& run, const std::vector<double>& cos_angles,
                                   const std::vector<std::pair<double, double>>& times,
                                   std::size_t n_realizations, std::uint64_t seed) {
  CovarianceReport report;
  report.model = to_string(run.kernel.model());
  report.l_max = effective_lmax(run.spectrum, run.l_max);
  report.n_realizations = n_realizations;
  const SphericalPoint north(0.0, 0.0);
  std::uint64_t stream = 0;
  for (const auto& [t, s] : times) {
    const double vt = variance(run.spectrum, run.kernel, t, run.l_max);
    const double vs = variance(run.spectrum, run.kernel, s, run.l_max);
    for (double c : cos_angles) {
      check_cos(c);
      CovarianceRow row;
      row.cos_angle = c;
      row.t = t;
      row.s = s;
      row.theoretical = theoretical_covariance(run.spectrum, run.kernel, t, s, c, run.l_max);
      row.variance_t = vt;
      row.variance_s = vs;
      if (n_realizations > 0) {
        row.has_empirical = true;
        row.empirical = empirical_covariance(run, north, SphericalPoint(std::acos(c), 0.0), t, s,
                                             n_realizations, derive_seed(seed, stream));
      }
      ++stream;
      report.rows.push_back(row);
    }
  }
  return report;
}

std::string to_string(Dependence d) {
  switch (d) {
    case Dependence::LongRange: return "LONG_RANGE";
    case Dependence::ShortRange: return "SHORT_RANGE";
    case Dependence::Inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

double DependenceVerdict::partial_sum_at(long h) const {
  auto it = std::upper_bound(checkpoints.begin(), checkpoints.end(), h);
  if (it == checkpoints.begin()) return 0.0;
  return partial_sums[static_cast<std::size_t>(it - checkpoints.begin() - 1)];
}

double relative_tail_increment(const DependenceVerdict& v, long h) {
  const double full = v.partial_sum_at(h);
  const double half = v.partial_sum_at(h / 2);
  if (full == 0.0) return half == 0.0 ? 0.0 : INFINITY;
  return std::abs(full - half) / std::abs(full);
}

DependenceVerdict dependence_diagnostic(const AngularPowerSpectrum& spectrum,
                                        const TemporalKernel& kernel, double t, long horizon,
                                        int l_max, DependenceOptions options) {
  if (horizon < 2) throw DomainError("dependence horizon must be at least 2");
  if (!(t >= 0.0)) throw DomainError("time must be nonnegative");
  check_cos(options.cos_angle);
  const int L = effective_lmax(spectrum, l_max);
  kernel.validate(L);

  // Per-degree factor (2l+1)/(4 pi) C_l T_l(t) Q_l(c); zero factors are skipped.
  const auto q = legendre_poly_batch(L, options.cos_angle);
  std::vector<int> degrees;
  std::vector<double> factor;
  for (int l = std::max(0, options.min_degree); l <= L; ++l) {
    const double f = (2.0 * l + 1.0) / kFourPi * spectrum[l] * kernel(l, t) * q[static_cast<std::size_t>(l)];
    if (f != 0.0) {
      degrees.push_back(l);
      factor.push_back(f);
    }
  }

  std::vector<double> terms(static_cast<std::size_t>(horizon), 0.0);
  if (!degrees.empty()) {
    const long blocks = (horizon + kTermsPerBlock - 1) / kTermsPerBlock;
    parallel_for_chunks(static_cast<std::size_t>(blocks), [&](std::size_t b) {
      const long begin = static_cast<long>(b) * kTermsPerBlock;
      const long end = std::min(horizon, begin + kTermsPerBlock);
      for (long i = begin; i < end; ++i) {
        const double th = t + static_cast<double>(i + 1);
        double sum = 0.0;
        for (std::size_t k = 0; k < degrees.size(); ++k) sum += factor[k] * kernel(degrees[k], th);
        terms[static_cast<std::size_t>(i)] = sum;
      }
    });
  }

  DependenceVerdict v;
  v.horizon = horizon;
  v.checkpoints = make_checkpoints(horizon);
  // Neumaier-compensated running sum, read off at the checkpoints.
  double sum = 0.0, comp = 0.0;
  std::size_t next = 0;
  for (long h = 1; h <= horizon; ++h) {
    const double x = terms[static_cast<std::size_t>(h - 1)];
    const double tsum = sum + x;
    comp += std::abs(sum) >= std::abs(x) ? (sum - tsum) + x : (x - tsum) + sum;
    sum = tsum;
    if (next < v.checkpoints.size() && v.checkpoints[next] == h) {
      v.partial_sums.push_back(sum + comp);
      ++next;
    }
  }

  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < v.checkpoints.size(); ++i) {
    const long h = v.checkpoints[i];
    if (h * 10 < horizon || v.partial_sums[i] == 0.0) continue;
    lx.push_back(std::log(static_cast<double>(h)));
    ly.push_back(std::log(std::abs(v.partial_sums[i])));
  }
  if (lx.size() >= 2) {
    const double n = static_cast<double>(lx.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      mx += lx[i];
      my += ly[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sxy += (lx[i] - mx) * (ly[i] - my);
      sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    v.growth_fit = sxx > 0.0 ? sxy / sxx : 0.0;
  }
  v.tail_increment = relative_tail_increment(v, horizon);
  if (v.growth_fit > 0.05) {
    v.verdict = Dependence::LongRange;
  } else if (v.tail_increment < 1e-6) {
    v.verdict = Dependence::ShortRange;
  } else {
    v.verdict = Dependence::Inconclusive;
  }
  return v;
}

nlohmann::ordered_json to_json(const CovarianceReport& report) {
  nlohmann::ordered_json j;
  j["model"] = report.model;
  j["l_max"] = report.l_max;
  j["n_realizations"] = report.n_realizations;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& r : report.rows) {
    nlohmann::ordered_json row;
    row["cos_angle"] = r.cos_angle;
    row["t"] = r.t;
    row["s"] = r.s;
    row["theoretical"] = r.theoretical;
    row["variance_t"] = r.variance_t;
    row["variance_s"] = r.variance_s;
    if (r.has_empirical) {
      row["empirical"] = r.empirical.value;
      row["stderr"] = r.empirical.std_error;
    } else {
      row["empirical"] = nullptr;
      row["stderr"] = nullptr;
    }
    rows.push_back(row);
  }
  j["rows"] = rows;
  return j;
}

nlohmann::ordered_json to_json(const DependenceVerdict& v) {
  nlohmann::ordered_json j;
  j["verdict"] = to_string(v.verdict);
  j["horizon"] = v.horizon;
  j["growth_fit"] = v.growth_fit;
  j["tail_increment"] = v.tail_increment;
  j["final_partial_sum"] = v.partial_sums.empty() ? 0.0 : v.partial_sums.back();
  auto sums = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < v.checkpoints.size(); ++i) {
    sums.push_back({{"h", v.checkpoints[i]}, {"partial_sum", v.partial_sums[i]}});
  }
  j["partial_sums"] = sums;
  return j;
}

void write_covariance_csv(std::ostream& out, const CovarianceReport& report) {
  out << "cos_angle,t,s,theoretical,empirical,stderr,variance_t,variance_s\n";
  for (const auto& r : report.rows) {
    out << format_double(r.cos_angle) << ',' << format_double(r.t) << ',' << format_double(r.s)
        << ',' << format_double(r.theoretical) << ',';
    if (r.has_empirical) {
      out << format_double(r.empirical.value) << ',' << format_double(r.empirical.std_error);
    } else {
      out << ',';
    }
    out << ',' << format_double(r.variance_t) << ',' << format_double(r.variance_s) << '\n';
  }
}

void write_partial_sums_csv(std::ostream& out, const DependenceVerdict& v) {
  out << "h,partial_sum\n";
  for (std::size_t i = 0; i < v.checkpoints.size(); ++i) {
    out << v.checkpoints[i] << ',' << format_double(v.partial_sums[i]) << '\n';
  }
}

}  // namespace spherefield

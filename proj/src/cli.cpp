#include "spherefield/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "spherefield/errors.hpp"
#include "spherefield/field_io.hpp"
#include "spherefield/parallel.hpp"
#include "spherefield/stats.hpp"
#include "spherefield/verify.hpp"
#include "spherefield/version.hpp"

namespace spherefield {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

template <typename T>
T get_as(const json& doc, const char* key) {
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

void reject_unknown(const json& doc, const std::set<std::string>& allowed, const std::string& where) {
  if (!doc.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, _] : doc.items()) {
    if (!allowed.count(key)) throw ConfigError("unknown config key '" + key + "' in " + where);
  }
}

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return s;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + path.string() + "'");
  f << content;
}

template <typename Fn>
std::string render(Fn&& fn) {
  std::ostringstream ss;
  fn(ss);
  return ss.str();
}

std::string dump(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

FieldGrid make_config_grid(const RunConfig& c) {
  const GridKind kind = c.grid_kind == "equiangular" ? GridKind::Equiangular : GridKind::GaussLegendre;
  return make_grid(kind, c.n_theta > 0 ? c.n_theta : 2 * (c.l_max + 1), c.n_phi > 0 ? c.n_phi : 2 * c.l_max + 2);
}

nlohmann::ordered_json manifest(const RunConfig& c, const std::string& command,
                                const std::vector<std::string>& files) {
  nlohmann::ordered_json m;
  m["command"] = command;
  m["version"] = kVersion;
  m["seed"] = c.seed;
  m["config"] = config_to_json(c);
  m["files"] = files;
  return m;
}

int cmd_simulate(const RunConfig& c, std::ostream& out) {
  const auto spectrum = make_spectrum(c);
  const auto kernel = make_kernel(c);
  const FieldGrid grid = make_config_grid(c);
  // Truncate or zero-extend the spectrum to l_max.
  std::vector<double> values(static_cast<std::size_t>(c.l_max) + 1);
  for (int l = 0; l <= c.l_max; ++l) values[static_cast<std::size_t>(l)] = spectrum[l];
  const auto coeffs = sample_coefficients(AngularPowerSpectrum(std::move(values)), c.seed);

  const fs::path dir(c.out);
  fs::create_directories(dir);
  std::vector<std::string> files;
  for (std::size_t i = 0; i < c.times.size(); ++i) {
    const auto evolved = evolve(coeffs, kernel, c.times[i]);
    const std::string cname = "coefficients_t" + std::to_string(i) + ".csv";
    const std::string gname = "grid_t" + std::to_string(i) + ".csv";
    write_file(dir / cname, render([&](std::ostream& s) { write_coefficients_csv(s, evolved); }));
    const FieldGrid g = synthesize(evolved, grid);
    write_file(dir / gname, render([&](std::ostream& s) { write_grid_csv(s, g); }));
    files.push_back(cname);
    files.push_back(gname);
  }
  write_file(dir / "manifest.json", dump(manifest(c, "simulate", files)));
  out << "wrote " << files.size() + 1 << " files to " << dir.string() << "\n";
  return 0;
}

int cmd_covariance(const RunConfig& c, std::ostream& out) {
  const ModelRun run{make_spectrum(c), make_kernel(c), c.l_max};
  const auto report = covariance_report(run, c.cos_angles, c.time_pairs, c.n_realizations, c.seed);
  const fs::path dir(c.out);
  fs::create_directories(dir);
  auto j = to_json(report);
  j["seed"] = c.seed;
  j["version"] = kVersion;
  write_file(dir / "covariance.json", dump(j));
  write_file(dir / "covariance.csv", render([&](std::ostream& s) { write_covariance_csv(s, report); }));
  out << "wrote covariance.json and covariance.csv to " << dir.string() << "\n";
  return 0;
}

int cmd_diagnose(const RunConfig& c, std::ostream& out) {
  DependenceOptions opts;
  opts.cos_angle = c.diagnose_cos;
  const auto v = dependence_diagnostic(make_spectrum(c), make_kernel(c), c.diagnose_t, c.horizon, c.l_max, opts);
  const fs::path dir(c.out);
  fs::create_directories(dir);
  auto j = to_json(v);
  j["model"] = to_string(c.model);
  j["version"] = kVersion;
  write_file(dir / "verdict.json", dump(j));
  write_file(dir / "partial_sums.csv", render([&](std::ostream& s) { write_partial_sums_csv(s, v); }));
  out << to_string(v.verdict) << " (slope " << v.growth_fit << ", tail increment " << v.tail_increment << ")\n";
  return 0;
}

int cmd_verify(const std::vector<std::string>& suites, std::uint64_t seed, std::ostream& out) {
  VerifyOptions opts;
  opts.seed = seed;
  opts.tol_scale = tol_scale_from_env();
  const auto& names = suites.empty() ? suite_names() : suites;
  for (const auto& n : names) {
    if (std::find(suite_names().begin(), suite_names().end(), n) == suite_names().end()) {
      throw ConfigError("unknown suite '" + n + "'");
    }
  }
  std::vector<std::string> failed;
  for (const auto& n : names) {
    const SuiteResult r = run_suite(n, opts);
    char head[128];
    std::snprintf(head, sizeof head, "[%s] %s (%.2f s)\n", r.pass ? "PASS" : "FAIL", r.name.c_str(), r.seconds);
    out << head;
    for (const auto& l : r.lines) out << "    " << (l.pass ? "ok   " : "FAIL ") << l.label << ": " << l.detail << "\n";
    out.flush();
    if (!r.pass) failed.push_back(r.name);
  }
  if (failed.empty()) {
    out << "all " << names.size() << " suites passed\n";
    return 0;
  }
  out << failed.size() << " of " << names.size() << " suites failed:";
  for (const auto& f : failed) out << ' ' << f;
  out << "\n";
  return 1;
}

}  // namespace

RunConfig config_from_json(const json& doc) {
  static const std::set<std::string> top = {"model", "beta", "gamma", "phi", "symbol", "spectrum", "l_max", "grid",
                                            "times", "seed", "out", "covariance", "diagnose"};
  reject_unknown(doc, top, "config");
  RunConfig c;
  if (doc.contains("model")) c.model = parse_kernel_model(get_as<std::string>(doc, "model"));
  if (doc.contains("beta")) c.params.beta = get_as<double>(doc, "beta");
  if (doc.contains("gamma")) c.params.gamma = get_as<double>(doc, "gamma");
  if (doc.contains("phi")) c.params.phi = get_as<double>(doc, "phi");
  if (doc.contains("symbol")) {
    const auto& s = doc.at("symbol");
    reject_unknown(s, {"family", "index"}, "symbol");
    if (s.contains("family")) c.symbol_family = upper(get_as<std::string>(s, "family"));
    if (s.contains("index")) c.symbol_index = get_as<double>(s, "index");
  }
  if (doc.contains("spectrum")) {
    const auto& s = doc.at("spectrum");
    reject_unknown(s, {"type", "amplitude", "exponent", "file"}, "spectrum");
    if (s.contains("file")) {
      c.spectrum.type = "file";
      c.spectrum.file = get_as<std::string>(s, "file");
    }
    if (s.contains("type")) c.spectrum.type = get_as<std::string>(s, "type");
    if (s.contains("amplitude")) c.spectrum.amplitude = get_as<double>(s, "amplitude");
    if (s.contains("exponent")) c.spectrum.exponent = get_as<double>(s, "exponent");
  }
  if (doc.contains("l_max")) c.l_max = get_as<int>(doc, "l_max");
  if (doc.contains("grid")) {
    const auto& g = doc.at("grid");
    reject_unknown(g, {"kind", "n_theta", "n_phi"}, "grid");
    if (g.contains("kind")) c.grid_kind = get_as<std::string>(g, "kind");
    if (g.contains("n_theta")) c.n_theta = get_as<int>(g, "n_theta");
    if (g.contains("n_phi")) c.n_phi = get_as<int>(g, "n_phi");
  }
  if (doc.contains("times")) c.times = get_as<std::vector<double>>(doc, "times");
  if (doc.contains("seed")) c.seed = get_as<std::uint64_t>(doc, "seed");
  if (doc.contains("out")) c.out = get_as<std::string>(doc, "out");
  if (doc.contains("covariance")) {
    const auto& v = doc.at("covariance");
    reject_unknown(v, {"cos_angles", "time_pairs", "n_realizations"}, "covariance");
    if (v.contains("cos_angles")) c.cos_angles = get_as<std::vector<double>>(v, "cos_angles");
    if (v.contains("time_pairs")) c.time_pairs = get_as<std::vector<std::pair<double, double>>>(v, "time_pairs");
    if (v.contains("n_realizations")) c.n_realizations = get_as<std::size_t>(v, "n_realizations");
  }
  if (doc.contains("diagnose")) {
    const auto& d = doc.at("diagnose");
    reject_unknown(d, {"t", "horizon", "cos_angle"}, "diagnose");
    if (d.contains("t")) c.diagnose_t = get_as<double>(d, "t");
    if (d.contains("horizon")) c.horizon = get_as<long>(d, "horizon");
    if (d.contains("cos_angle")) c.diagnose_cos = get_as<double>(d, "cos_angle");
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return config_from_json(doc);
}

nlohmann::ordered_json config_to_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["model"] = to_string(c.model);
  j["beta"] = c.params.beta;
  j["gamma"] = c.params.gamma;
  j["phi"] = c.params.phi;
  j["symbol"] = {{"family", c.symbol_family}, {"index", c.symbol_index}};
  nlohmann::ordered_json s;
  s["type"] = c.spectrum.type;
  if (c.spectrum.type == "file") {
    s["file"] = c.spectrum.file;
  } else if (c.spectrum.type == "power_law") {
    s["amplitude"] = c.spectrum.amplitude;
    s["exponent"] = c.spectrum.exponent;
  }
  j["spectrum"] = s;
  j["l_max"] = c.l_max;
  j["grid"] = {{"kind", c.grid_kind},
               {"n_theta", c.n_theta > 0 ? c.n_theta : 2 * (c.l_max + 1)},
               {"n_phi", c.n_phi > 0 ? c.n_phi : 2 * c.l_max + 2}};
  j["times"] = c.times;
  j["seed"] = c.seed;
  j["out"] = c.out;
  j["covariance"] = {{"cos_angles", c.cos_angles}, {"time_pairs", c.time_pairs}, {"n_realizations", c.n_realizations}};
  j["diagnose"] = {{"t", c.diagnose_t}, {"horizon", c.horizon}, {"cos_angle", c.diagnose_cos}};
  return j;
}

SubordinatorSymbol make_symbol(const RunConfig& c) {
  if (c.symbol_family == "STABLE") return SubordinatorSymbol::stable(c.symbol_index);
  if (c.symbol_family == "ELEMENTARY") return SubordinatorSymbol::elementary();
  throw ConfigError("symbol family must be STABLE or ELEMENTARY, got '" + c.symbol_family + "'");
}

TemporalKernel make_kernel(const RunConfig& c) { return TemporalKernel(c.model, c.params, make_symbol(c)); }

AngularPowerSpectrum make_spectrum(const RunConfig& c) {
  if (c.spectrum.type == "power_law") {
    return AngularPowerSpectrum::power_law(c.spectrum.amplitude, c.spectrum.exponent, c.l_max);
  }
  if (c.spectrum.type == "zero") return AngularPowerSpectrum::zero(c.l_max);
  if (c.spectrum.type == "file") return read_spectrum_csv(c.spectrum.file);
  throw ConfigError("spectrum type must be power_law, zero or file, got '" + c.spectrum.type + "'");
}

void validate_config(const RunConfig& c) {
  if (c.l_max < 0) throw DomainError("l_max must be non-negative, got " + std::to_string(c.l_max));
  c.params.validate();
  if (c.spectrum.type == "file" && !fs::exists(c.spectrum.file)) {
    throw ConfigError("spectrum file '" + c.spectrum.file + "' does not exist");
  }
  if (c.spectrum.type == "power_law" &&
      (!std::isfinite(c.spectrum.amplitude) || c.spectrum.amplitude < 0.0 || !std::isfinite(c.spectrum.exponent))) {
    throw DomainError("power-law spectrum needs a finite amplitude >= 0 and a finite exponent");
  }
  make_spectrum(c);
  const auto kernel = make_kernel(c);
  kernel.validate(c.l_max);
  if (c.grid_kind != "gauss_legendre" && c.grid_kind != "equiangular") {
    throw ConfigError("grid kind must be gauss_legendre or equiangular, got '" + c.grid_kind + "'");
  }
  if (c.n_theta < 0 || c.n_phi < 0 || c.n_theta == 1) throw ResolutionError("grid needs n_theta >= 2 and n_phi >= 1");
  for (double t : c.times) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("times must be finite and >= 0");
  }
  for (double a : c.cos_angles) {
    if (!(a >= -1.0 && a <= 1.0)) throw DomainError("cos_angles must lie in [-1, 1]");
  }
  for (const auto& [t, s] : c.time_pairs) {
    if (!(t >= 0.0 && s >= 0.0) || !std::isfinite(t) || !std::isfinite(s)) {
      throw DomainError("time pairs must be finite and >= 0");
    }
  }
  if (c.n_realizations > 0 && c.n_realizations < 100) {
    throw InsufficientSamplesError("n_realizations must be 0 (theoretical only) or at least 100");
  }
  if (c.horizon < 2) throw DomainError("diagnose horizon must be at least 2");
  if (!(c.diagnose_t >= 0.0)) throw DomainError("diagnose t must be >= 0");
  if (!(c.diagnose_cos >= -1.0 && c.diagnose_cos <= 1.0)) throw DomainError("diagnose cos_angle must lie in [-1, 1]");
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Isotropic random fields on the sphere under fractional evolution", "spherefield"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> l_max;
  std::optional<std::string> out_dir;
  std::optional<unsigned> workers;
  std::vector<std::string> suites;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON run configuration");
    sub->add_option("--seed", seed, "RNG seed (overrides config)");
    sub->add_option("--lmax", l_max, "truncation degree (overrides config)");
    sub->add_option("--out", out_dir, "output directory (overrides config)");
    sub->add_option("--workers", workers, "worker threads (default: all cores)");
  };
  auto* simulate = app.add_subcommand("simulate", "sample a field and write coefficient and grid files per time");
  auto* covariance = app.add_subcommand("covariance", "theoretical and empirical covariance report");
  auto* diagnose = app.add_subcommand("diagnose", "long/short-range dependence verdict");
  auto* verify = app.add_subcommand("verify", "run the self-check suites");
  for (auto* sub : {simulate, covariance, diagnose, verify}) add_common(sub);
  verify->add_option("--suite", suites, "run only this suite (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and --version are successes; any other parse failure is bad input
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    RunConfig c = config_path.empty() ? RunConfig{} : load_config(config_path);
    if (seed) c.seed = *seed;
    if (l_max) c.l_max = *l_max;
    if (out_dir) c.out = *out_dir;
    if (workers) {
      if (*workers == 0) throw ConfigError("--workers must be at least 1");
      set_worker_count(*workers);
    }
    if (verify->parsed()) return cmd_verify(suites, c.seed, out);
    validate_config(c);
    if (simulate->parsed()) return cmd_simulate(c, out);
    if (covariance->parsed()) return cmd_covariance(c, out);
    return cmd_diagnose(c, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace spherefield

#include "kglab/lab/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include "kglab/errors.hpp"

namespace kglab::lab {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size()) throw ConfigError(key + ": not a number: '" + v + "'");
  return out;
}

long long to_int(const std::string& key, const std::string& v) {
  long long out = 0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size()) throw ConfigError(key + ": not an integer: '" + v + "'");
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key + ": not a boolean: '" + v + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item)));
  if (out.empty()) throw ConfigError(key + ": empty list");
  return out;
}

std::string list_str(const std::vector<double>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt(v[i]);
  return s;
}

struct Binding {
  std::function<void(LabConfig&, const std::string&)> set;
  std::function<std::string(const LabConfig&)> get;
};

template <class T>
Binding real(T LabConfig::*sec, double T::*field) {
  return {[=](LabConfig& c, const std::string& v) { (c.*sec).*field = to_double("", v); },
          [=](const LabConfig& c) { return fmt((c.*sec).*field); }};
}

template <class T, class I>
Binding integer(T LabConfig::*sec, I T::*field) {
  return {[=](LabConfig& c, const std::string& v) { (c.*sec).*field = static_cast<I>(to_int("", v)); },
          [=](const LabConfig& c) { return std::to_string((c.*sec).*field); }};
}

template <class T>
Binding boolean(T LabConfig::*sec, bool T::*field) {
  return {[=](LabConfig& c, const std::string& v) { (c.*sec).*field = to_bool("", v); },
          [=](const LabConfig& c) { return std::string((c.*sec).*field ? "true" : "false"); }};
}

const std::map<std::string, Binding>& bindings() {
  static const std::map<std::string, Binding> b = [] {
    std::map<std::string, Binding> m;
    m["model.alpha"] = real(&LabConfig::model, &ModelParams::alpha);
    m["model.domain_half_length"] = real(&LabConfig::model, &ModelParams::domain_half_length);
    m["model.n_points"] = integer(&LabConfig::model, &ModelParams::n_points);
    m["integrator.dt"] = real(&LabConfig::integrator, &IntegratorConfig::dt);
    m["integrator.t_max"] = real(&LabConfig::integrator, &IntegratorConfig::t_max);
    m["integrator.record_stride"] = integer(&LabConfig::integrator, &IntegratorConfig::record_stride);
    m["integrator.blowup_ceiling"] = real(&LabConfig::integrator, &IntegratorConfig::blowup_ceiling);
    m["integrator.boundary_layer"] = real(&LabConfig::integrator, &IntegratorConfig::boundary_layer);
    m["weights.from_delta"] = boolean(&LabConfig::weights, &WeightSettings::from_delta);
    m["weights.A"] = real(&LabConfig::weights, &WeightSettings::A);
    m["weights.B"] = real(&LabConfig::weights, &WeightSettings::B);
    m["weights.gamma"] = real(&LabConfig::weights, &WeightSettings::gamma);
    m["shooting.delta0"] = real(&LabConfig::shooting, &ShootingConfig::delta0);
    m["shooting.K"] = real(&LabConfig::shooting, &ShootingConfig::K);
    m["shooting.bracket"] = real(&LabConfig::shooting, &ShootingConfig::bracket);
    m["shooting.t_max"] = real(&LabConfig::shooting, &ShootingConfig::t_max);
    m["shooting.bisection_tol"] = real(&LabConfig::shooting, &ShootingConfig::bisection_tol);
    m["shooting.max_iters"] = integer(&LabConfig::shooting, &ShootingConfig::max_iters);
    m["shooting.dt"] = real(&LabConfig::shooting, &ShootingConfig::dt);
    m["shooting.record_interval"] = real(&LabConfig::shooting, &ShootingConfig::record_interval);
    m["shooting.exit_check_stride"] = integer(&LabConfig::shooting, &ShootingConfig::exit_check_stride);
    m["shooting.exit_lookahead"] = real(&LabConfig::shooting, &ShootingConfig::exit_lookahead);
    m["shooting.divergence_fraction"] = real(&LabConfig::shooting, &ShootingConfig::divergence_fraction);
    m["shooting.continuation"] = boolean(&LabConfig::shooting, &ShootingConfig::continuation);
    m["shooting.max_segments"] = integer(&LabConfig::shooting, &ShootingConfig::max_segments);
    m["shooting.boundary_layer"] = real(&LabConfig::shooting, &ShootingConfig::boundary_layer);
    m["shooting.boundary_threshold"] = real(&LabConfig::shooting, &ShootingConfig::boundary_threshold);
    m["perturbation.kind"] = {[](LabConfig& c, const std::string& v) { c.perturbation.kind = v; },
                              [](const LabConfig& c) { return c.perturbation.kind; }};
    m["perturbation.size"] = real(&LabConfig::perturbation, &PerturbationSettings::size);
    m["perturbation.count"] = integer(&LabConfig::perturbation, &PerturbationSettings::count);
    m["output_dir"] = {[](LabConfig& c, const std::string& v) { c.output_dir = v; },
                       [](const LabConfig& c) { return c.output_dir; }};
    m["experiment"] = {[](LabConfig& c, const std::string& v) { c.experiment = v; },
                       [](const LabConfig& c) { return c.experiment; }};
    m["seed"] = {[](LabConfig& c, const std::string& v) { c.seed = static_cast<std::uint64_t>(to_int("seed", v)); },
                 [](const LabConfig& c) { return std::to_string(c.seed); }};
    m["spectrum.count"] = {[](LabConfig& c, const std::string& v) { c.spectrum_count = static_cast<int>(to_int("", v)); },
                           [](const LabConfig& c) { return std::to_string(c.spectrum_count); }};
    m["sweep.alphas"] = {[](LabConfig& c, const std::string& v) { c.sweep_alphas = to_list("sweep.alphas", v); },
                         [](const LabConfig& c) { return list_str(c.sweep_alphas); }};
    m["lipschitz.pairs"] = {[](LabConfig& c, const std::string& v) { c.lipschitz_pairs = static_cast<int>(to_int("", v)); },
                            [](const LabConfig& c) { return std::to_string(c.lipschitz_pairs); }};
    m["lipschitz.deltas"] = {[](LabConfig& c, const std::string& v) { c.lipschitz_deltas = to_list("lipschitz.deltas", v); },
                             [](const LabConfig& c) { return list_str(c.lipschitz_deltas); }};
    return m;
  }();
  return b;
}

}  // namespace

const std::vector<std::string>& recipe_names() {
  static const std::vector<std::string> names{"spectrum", "factorization", "linear_modes", "virial_audit",
                                              "shoot",    "lipschitz",     "decay",        "sweep_alpha"};
  return names;
}

void LabConfig::validate() const {
  try {
    model.validate();
    shooting.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const auto& r = recipe_names();
  if (std::find(r.begin(), r.end(), experiment) == r.end()) throw ConfigError("unknown experiment '" + experiment + "'");
  if (perturbation.kind != "random" && perturbation.kind != "zero" && perturbation.kind != "y_minus")
    throw ConfigError("perturbation.kind must be random, zero or y_minus");
  if (!(perturbation.size >= 0.0)) throw ConfigError("perturbation.size must be >= 0");
  if (perturbation.count < 1) throw ConfigError("perturbation.count must be >= 1");
  if (!(weights.gamma > 0.0 && weights.gamma <= 0.5)) throw ConfigError("weights.gamma must lie in (0, 0.5]");
  if (spectrum_count < 1) throw ConfigError("spectrum.count must be >= 1");
  if (lipschitz_pairs < 1) throw ConfigError("lipschitz.pairs must be >= 1");
  if (output_dir.empty()) throw ConfigError("output_dir must not be empty");
}

LabConfig parse_config(const std::string& text) {
  LabConfig c;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = bindings().find(key);
    if (it == bindings().end()) throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    try {
      it->second.set(c, value);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(lineno) + ": " + key + e.what());
    }
  }
  return c;
}

LabConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

std::map<std::string, std::string> snapshot(const LabConfig& c) {
  std::map<std::string, std::string> out;
  for (const auto& [k, b] : bindings()) out[k] = b.get(c);
  return out;
}

std::string render(const LabConfig& c) {
  std::string s;
  for (const auto& [k, v] : snapshot(c)) s += k + " = " + v + "\n";
  return s;
}

}  // namespace kglab::lab

#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace tfi::cli {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct KeyDefault {
  const char* key;
  const char* value;
};

// Defaults mirror ExperimentConfig's member initializers.
const std::vector<KeyDefault>& defaults() {
  static const std::vector<KeyDefault> table = {
      {"model.xi0", "1"},
      {"model.delta", "0.3"},
      {"model.a", "1.3"},
      {"window.sigma", "1.4142135623730951"},
      {"grid.t_min", "0"},
      {"grid.t_max", "10"},
      {"grid.n_t", "256"},
      {"grid.eta_min", "0"},
      {"grid.eta_max", "2.5"},
      {"grid.n_eta", "256"},
      {"squeeze.alpha", "0.0001"},
      {"squeeze.weighting", "stft"},
      {"squeeze.radius", "auto"},
      {"squeeze.mode", "sync"},
      {"squeeze.base_panels", "4096"},
      {"squeeze.rel_tol", "1e-10"},
      {"squeeze.max_depth", "48"},
      {"squeeze.k", "0"},
      {"squeeze.n_xi", "513"},
      {"squeeze.field_n_t", "32"},
      {"squeeze.field_n_xi", "96"},
      {"reassign.thetas", "0.5,1,2"},
      {"output.dir", "out"},
  };
  return table;
}

std::vector<double> parse_list(const std::string& text, const std::string& key, const std::string& origin) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(trim(item), key, origin));
  if (out.empty()) throw ConfigError(origin + ": key '" + key + "' needs at least one value");
  return out;
}

}  // namespace

double parse_double(const std::string& text, const std::string& key, const std::string& origin) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    throw ConfigError(origin + ": key '" + key + "' expects a number, got '" + text + "'");
  return v;
}

int parse_int(const std::string& text, const std::string& key, const std::string& origin) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    throw ConfigError(origin + ": key '" + key + "' expects an integer, got '" + text + "'");
  return v;
}

const std::vector<std::string>& ConfigSource::known_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& d : defaults()) k.emplace_back(d.key);
    return k;
  }();
  return keys;
}

void ConfigSource::set(const std::string& key, const std::string& value, const std::string& origin) {
  const auto& keys = known_keys();
  if (std::find(keys.begin(), keys.end(), key) == keys.end())
    throw ConfigError(origin + ": unknown key '" + key + "'");
  entries_[key] = {value, origin};
}

void ConfigSource::add_text(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string where = origin + ":" + std::to_string(number);
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected key=value, got '" + line + "'");
    std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError(where + ": empty key");
    set(key, trim(line.substr(eq + 1)), where);
  }
}

void ConfigSource::add_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  add_text(buf.str(), path);
}

void ConfigSource::add_override(const std::string& arg) {
  std::string body = arg.rfind("--", 0) == 0 ? arg.substr(2) : arg;
  auto eq = body.find('=');
  if (eq == std::string::npos) throw ConfigError("override '" + arg + "' must look like --key=value");
  set(trim(body.substr(0, eq)), trim(body.substr(eq + 1)), "override " + arg);
}

std::map<std::string, std::string> ConfigSource::effective() const {
  std::map<std::string, std::string> out;
  for (const auto& d : defaults()) out[d.key] = d.value;
  for (const auto& [k, e] : entries_) out[k] = e.value;
  return out;
}

ExperimentConfig ConfigSource::resolve() const {
  ExperimentConfig cfg;
  auto origin_of = [&](const std::string& key) {
    auto it = entries_.find(key);
    return it == entries_.end() ? std::string("default") : it->second.origin;
  };
  bool auto_radius = false;
  for (const auto& [key, value] : effective()) {
    std::string where = origin_of(key);
    auto num = [&] { return parse_double(value, key, where); };
    auto integer = [&] { return parse_int(value, key, where); };
    if (key == "model.xi0") cfg.xi0 = num();
    else if (key == "model.delta") cfg.delta = num();
    else if (key == "model.a") cfg.a = num();
    else if (key == "window.sigma") cfg.sigma = num();
    else if (key == "grid.t_min") cfg.grid.t_min = num();
    else if (key == "grid.t_max") cfg.grid.t_max = num();
    else if (key == "grid.n_t") cfg.grid.n_t = integer();
    else if (key == "grid.eta_min") cfg.grid.eta_min = num();
    else if (key == "grid.eta_max") cfg.grid.eta_max = num();
    else if (key == "grid.n_eta") cfg.grid.n_eta = integer();
    else if (key == "squeeze.alpha") cfg.squeeze.alpha = num();
    else if (key == "squeeze.weighting") {
      if (value == "stft") cfg.squeeze.weighting = Weighting::Stft;
      else if (value == "indicator") cfg.squeeze.weighting = Weighting::Indicator;
      else throw ConfigError(where + ": key 'squeeze.weighting' must be stft or indicator, got '" + value + "'");
    } else if (key == "squeeze.radius") {
      if (value == "auto") auto_radius = true;
      else cfg.squeeze.radius = num();
    } else if (key == "squeeze.mode") {
      if (value == "sync") cfg.squeeze.mode = ReassignMode::Sync;
      else if (value == "phase") cfg.squeeze.mode = ReassignMode::Phase;
      else throw ConfigError(where + ": key 'squeeze.mode' must be sync or phase, got '" + value + "'");
    } else if (key == "squeeze.base_panels") cfg.squeeze.quad.base_panels = integer();
    else if (key == "squeeze.rel_tol") cfg.squeeze.quad.rel_tol = num();
    else if (key == "squeeze.max_depth") cfg.squeeze.quad.max_depth = integer();
    else if (key == "squeeze.k") cfg.squeeze_k = integer();
    else if (key == "squeeze.n_xi") cfg.squeeze_n_xi = integer();
    else if (key == "squeeze.field_n_t") cfg.squeeze_field_n_t = integer();
    else if (key == "squeeze.field_n_xi") cfg.squeeze_field_n_xi = integer();
    else if (key == "reassign.thetas") cfg.thetas = parse_list(value, key, where);
    else if (key == "output.dir") {
      if (value.empty()) throw ConfigError(where + ": key 'output.dir' must not be empty");
      cfg.output_dir = value;
    }
  }
  if (cfg.squeeze_n_xi < 3) throw ConfigError(origin_of("squeeze.n_xi") + ": key 'squeeze.n_xi' must be >= 3");
  // Parameter checks raise tfi::Error so callers can tell bad values from bad syntax.
  TwoHarmonicModel model = cfg.model();
  GaussianWindow window = cfg.window();
  cfg.grid.validate();
  if (auto_radius && cfg.squeeze.weighting == Weighting::Indicator)
    cfg.squeeze.radius = indicator_radius_default(model, window, cfg.squeeze.alpha, cfg.delta / 4.0);
  cfg.squeeze.validate(model, window);
  return cfg;
}

}  // namespace tfi::cli

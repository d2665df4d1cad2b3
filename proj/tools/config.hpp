#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "tfi/squeeze.hpp"

namespace tfi::cli {

// Parse or validation problem in a config file or override; names the key and where it came from.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  double xi0 = 1.0;
  double delta = 0.3;
  double a = 1.3;
  double sigma = 1.4142135623730951;
  TFGrid grid{0.0, 10.0, 256, 0.0, 2.5, 256};
  SqueezeConfig squeeze{};
  int squeeze_k = 0;
  int squeeze_n_xi = 513;
  // The squeezed field is costly, so it has its own (coarser) lattice over the grid ranges.
  int squeeze_field_n_t = 32;
  int squeeze_field_n_xi = 96;
  std::vector<double> thetas{0.5, 1.0, 2.0};
  std::string output_dir = "out";

  TwoHarmonicModel model() const { return TwoHarmonicModel(xi0, delta, a); }
  GaussianWindow window() const { return GaussianWindow(sigma); }
};

// Raw key/value entries with their origin, in the order they were applied.
class ConfigSource {
 public:
  // Flat key=value text; '#' starts a comment, blank lines are ignored.
  void add_text(const std::string& text, const std::string& origin);
  void add_file(const std::string& path);
  // "--key=value" or "key=value".
  void add_override(const std::string& arg);

  ExperimentConfig resolve() const;
  // Every known key with its effective value, for the JSON echo.
  std::map<std::string, std::string> effective() const;

  static const std::vector<std::string>& known_keys();

 private:
  struct Entry {
    std::string value;
    std::string origin;
  };
  void set(const std::string& key, const std::string& value, const std::string& origin);
  std::map<std::string, Entry> entries_;
};

double parse_double(const std::string& text, const std::string& key, const std::string& origin);
int parse_int(const std::string& text, const std::string& key, const std::string& origin);

}  // namespace tfi::cli

#ifndef MOPRL_CLI_CONFIG_HPP
#define MOPRL_CLI_CONFIG_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "moprl/scalar.hpp"

namespace moprl::cli {

enum class Backend { Rational, Float };

struct WeightCfg {
  std::string kind;       // monomial | exponential | binomial
  Rational param{0};
};

// Flat key-value description of one run: measure, weight systems,
// compositions, and the run section. Command-line flags may override the
// run section afterwards.
struct Config {
  Rational lo{0}, hi{1};
  std::string density = "lebesgue";
  std::vector<WeightCfg> weights1, weights2;
  std::vector<int> n1, n2;

  long N = 0;
  Backend backend = Backend::Rational;
  unsigned precision_bits = 128;
  std::vector<std::string> checks;  // empty = all
  std::vector<long> scales;
  std::vector<Rational> x_samples, y_samples, z_samples;
  std::string out_dir;
  std::optional<double> tol_global;
  std::map<std::string, double> tol_overrides;  // per check name
};

// "3", "-1/2", "0.25" all parse; throws ConfigError otherwise.
Rational parse_rational(const std::string& text);

Config parse_config_text(const std::string& text);
Config parse_config_file(const std::string& path);

extern const std::vector<std::string> kAllChecks;

}  // namespace moprl::cli

#endif

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "halfline/limit_semigroups.hpp"

namespace halfline {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Everything an experiment depends on. Files use an INI layout:
//
//   [regime]  alpha, beta, A, B        (exponents accept "inf")
//   [run]     t, u, n (comma list), seed, paths, threads
//   [family]  K, J
//   [grid]    x_max, dx, steps, richardson
//
// Grid keys are optional; missing ones follow GridSpec::defaults(u, t).
struct ExperimentConfig {
  double alpha = 2.0, beta = 1.0, A = 1.0, B = 1.0;
  double t = 0.5, u = 1.0;
  std::vector<int> ns{50, 100, 200, 400, 800};
  int K = 16, J = 16;
  std::uint64_t seed = 42;
  std::size_t paths = 1000000;
  unsigned threads = 1;  // not part of the canonical form
  std::optional<double> x_max, dx;
  std::optional<int> steps;
  bool richardson = true;

  GridSpec grid() const;
  // Throws ConfigError on out-of-range values.
  void validate() const;
  // Single-line canonical form used in CSV provenance headers.
  std::string canonical() const;
  // INI text that parses back to an equal canonical form.
  std::string to_ini() const;
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::string& path);

// Applies "alpha=..,beta=..,A=..,B=.." to cfg.
void apply_regime_override(ExperimentConfig& cfg, const std::string& spec);
std::vector<int> parse_n_list(const std::string& s);
double parse_real(const std::string& s);  // accepts inf

}  // namespace halfline

#pragma once

#include <iosfwd>
#include <string>

#include "halfline/config.hpp"

namespace halfline {

// Exit codes shared by every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitConfigError = 2;

// Every command writes its CSV to `out` ("-" for standard output), starting
// with a "# config: ..." provenance line, and prints any human-readable
// summary to `msg`. They throw ConfigError for invalid requests.
int cmd_simulate(const ExperimentConfig& cfg, const std::string& out, std::ostream& msg);
int cmd_distribution(const ExperimentConfig& cfg, const std::string& out, bool monte_carlo,
                     std::ostream& msg);
int cmd_reference(const ExperimentConfig& cfg, const std::string& out, int sample_lattice,
                  std::ostream& msg);
int cmd_rate(const ExperimentConfig& cfg, const std::string& out, std::ostream& msg);
int cmd_rate_killed(const ExperimentConfig& cfg, const std::string& out, std::ostream& msg);
int cmd_metric(const ExperimentConfig& cfg, const std::string& mu_path, const std::string& nu_path,
               const std::string& out, std::ostream& msg);
int cmd_check_hypotheses(const ExperimentConfig& cfg, const std::string& out, std::ostream& msg);

}  // namespace halfline

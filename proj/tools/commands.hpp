// Subcommand entry points. Each returns a process exit code:
// 0 pass, 1 violation, 2 statistically inconclusive, 3 input error.
#pragma once

#include "config.hpp"

namespace plv::cli {

int cmd_constants(const Config& cfg, const CliOptions& opt);
int cmd_rate(const Config& cfg, const CliOptions& opt);
int cmd_skorokhod_check(const Config& cfg, const CliOptions& opt);
int cmd_averaging_check(const Config& cfg, const CliOptions& opt);
int cmd_coupling(const Config& cfg, const CliOptions& opt);
int cmd_gibbs_check(const Config& cfg, const CliOptions& opt);
int cmd_sample(const Config& cfg, const CliOptions& opt);

}  // namespace plv::cli

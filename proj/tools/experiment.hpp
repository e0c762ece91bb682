// Shared experiment assembly: constructs the constraint set, objective model,
// data stream, sampler configuration, and the constant ledger from a Config,
// and owns the summary.json / CSV output conventions.
#pragma once

#include <Eigen/Dense>
#include <fstream>
#include <nlohmann/json.hpp>
#include <string>

#include "config.hpp"
#include "plv/constants.hpp"
#include "plv/mixing.hpp"
#include "plv/objective.hpp"
#include "plv/polytope.hpp"
#include "plv/sampler.hpp"

namespace plv::cli {

// Exit codes shared by all subcommands.
inline constexpr int kExitPass = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitInconclusive = 2;
inline constexpr int kExitInputError = 3;

struct Experiment {
  Polyhedron polyhedron;
  ObjectiveModel model;
  StreamSpec stream;
  SamplerConfig sampler;
  ProblemParams params;  // includes Skorokhod constants for the polyhedron
};

// [problem] model/dim/mu/coupling/angle/half_width, polyhedron_file or
// lo/hi box bounds; [stream] kind/coeff/noise_std/dim; [sampler]
// eta/beta/steps/substeps/x0/varsigma.
Experiment build_experiment(const Config& cfg, const CliOptions& opt);

Polyhedron build_polyhedron(const Config& cfg, int model_dim, double half_width);
ObjectiveModel build_model(const Config& cfg);
StreamSpec build_stream(const Config& cfg, std::uint64_t seed);

// Writes <out_dir>/summary.json carrying the command name, config hash, seed,
// status string, and command-specific payload.
void write_summary(const CliOptions& opt, const Config& cfg, const std::string& command,
                   const std::string& status, const nlohmann::json& payload);

// Opens <out_dir>/<name> and writes the config-hash comment line.
std::ofstream open_csv(const CliOptions& opt, const Config& cfg, const std::string& name);

std::string format_double(double v);  // shortest round-trip representation

}  // namespace plv::cli

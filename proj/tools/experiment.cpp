#include "experiment.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <stdexcept>

namespace plv::cli {

ObjectiveModel build_model(const Config& cfg) {
  std::string name = cfg.get_str("problem.model", "double_well_1d");
  double half_width = cfg.get_double("problem.half_width", 2.0);
  if (name == "double_well_1d") return double_well_1d(half_width);
  if (name == "rotated_double_well_2d") {
    return rotated_double_well_2d(cfg.get_double("problem.angle", 0.5), half_width);
  }
  if (name == "coupled_quadratic") {
    int dim = static_cast<int>(cfg.get_long("problem.dim", 1));
    double mu = cfg.get_double("problem.mu", 1.0);
    double coupling = cfg.get_double("problem.coupling", 0.5);
    Eigen::MatrixXd B = coupling * Eigen::MatrixXd::Identity(dim, dim);
    return coupled_quadratic(dim, mu, B);
  }
  throw std::runtime_error("unknown problem.model: " + name);
}

Polyhedron build_polyhedron(const Config& cfg, int model_dim, double half_width) {
  if (cfg.has("problem.polyhedron_file")) {
    return Polyhedron::load_text_file(cfg.require_str("problem.polyhedron_file"));
  }
  double lo = cfg.get_double("problem.lo", -half_width);
  double hi = cfg.get_double("problem.hi", half_width);
  if (!(lo < 0.0 && hi > 0.0)) {
    throw std::runtime_error("problem.lo/hi must straddle the origin");
  }
  Eigen::VectorXd l = Eigen::VectorXd::Constant(model_dim, lo);
  Eigen::VectorXd h = Eigen::VectorXd::Constant(model_dim, hi);
  return Polyhedron::box(l, h);
}

StreamSpec build_stream(const Config& cfg, std::uint64_t seed) {
  std::string kind = cfg.get_str("stream.kind", "iid");
  double noise_std = cfg.get_double("stream.noise_std", 1.0);
  int dim = static_cast<int>(cfg.get_long("stream.dim", 0));
  if (kind == "iid") return StreamSpec::iid_gaussian(noise_std, dim, seed);
  if (kind == "ar1") {
    return StreamSpec::ar1(cfg.get_double("stream.coeff", 0.5), noise_std, dim, seed);
  }
  if (kind == "constant") return StreamSpec::constant(cfg.get_double("stream.value", 0.0), dim);
  throw std::runtime_error("unknown stream.kind: " + kind);
}

Experiment build_experiment(const Config& cfg, const CliOptions& opt) {
  ObjectiveModel model = build_model(cfg);
  double half_width = cfg.get_double("problem.half_width", 2.0);
  if (model.name == "coupled_quadratic") {
    half_width = cfg.get_double("problem.half_width", 5.0);
  }
  Polyhedron P = build_polyhedron(cfg, model.dim, half_width);
  if (P.dim() != model.dim) {
    throw std::runtime_error("polyhedron dimension does not match the model");
  }

  std::uint64_t seed = opt.seed_given ? opt.seed : cfg.get_u64("sampler.seed", 0);
  StreamSpec stream = build_stream(cfg, seed);
  if (stream.dim == 0) stream.dim = model.z_dim;
  if (stream.dim != model.z_dim) {
    throw std::runtime_error("stream dimension does not match the model data dimension");
  }

  SamplerConfig sc;
  sc.eta = cfg.get_double("sampler.eta", 0.01);
  sc.beta = cfg.get_double("sampler.beta", 1.0);
  sc.steps = static_cast<int>(cfg.get_long("sampler.steps", 100));
  sc.substeps = static_cast<int>(cfg.get_long("sampler.substeps", 64));
  sc.seed = seed;
  std::vector<double> x0 = cfg.get_doubles("sampler.x0", std::vector<double>(model.dim, 0.0));
  if (static_cast<int>(x0.size()) != model.dim) {
    throw std::runtime_error("sampler.x0 has the wrong dimension");
  }
  sc.x0 = Eigen::Map<Eigen::VectorXd>(x0.data(), model.dim);
  if (!contains(P, sc.x0, 1e-12)) throw std::runtime_error("sampler.x0 lies outside K");

  MixingDescriptor desc = descriptor_for(stream);
  ProblemParams p;
  p.n = model.dim;
  p.beta = sc.beta;
  p.eta = sc.eta;
  p.ell = model.ell;
  p.mu = model.mu;
  p.R = model.R;
  p.varsigma = cfg.get_double("sampler.varsigma", sc.x0.squaredNorm());
  p.grad0_norm = model.grad0_norm;
  p.fbar0 = model.fbar0;
  p.M2z = desc.M2;
  p.Psi2z = desc.Psi2;
  p.skorokhod = constants_for(P);

  if (opt.strict_eta && !p.eta_admissible()) {
    throw std::runtime_error("sampler.eta violates eta <= min{1/4, mu/(4 ell^2)} (strict mode)");
  }
  return Experiment{std::move(P), std::move(model), stream, sc, p};
}

void write_summary(const CliOptions& opt, const Config& cfg, const std::string& command,
                   const std::string& status, const nlohmann::json& payload) {
  std::filesystem::create_directories(opt.out_dir);
  nlohmann::json j;
  j["command"] = command;
  j["config"] = cfg.source_name();
  j["config_hash"] = cfg.hash_hex();
  j["seed"] = opt.seed_given ? opt.seed : cfg.get_u64("sampler.seed", 0);
  j["status"] = status;
  j["result"] = payload;
  std::ofstream out(std::filesystem::path(opt.out_dir) / "summary.json");
  out << j.dump(2) << "\n";
}

std::ofstream open_csv(const CliOptions& opt, const Config& cfg, const std::string& name) {
  std::filesystem::create_directories(opt.out_dir);
  std::ofstream out(std::filesystem::path(opt.out_dir) / name);
  if (!out) throw std::runtime_error("cannot open output file: " + name);
  out << "# config_hash=" << cfg.hash_hex() << "\n";
  return out;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace plv::cli

// Subcommands without Monte-Carlo verdicts: constants report, Skorokhod
// Lipschitz sweep, and the raw process-bundle dump.
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

#include "commands.hpp"
#include "experiment.hpp"
#include "plv/numerics.hpp"
#include "plv/skorokhod.hpp"
#include "plv/wasserstein.hpp"

namespace plv::cli {

int cmd_constants(const Config& cfg, const CliOptions& opt) {
  Experiment exp = build_experiment(cfg, opt);
  ConstantLedger led = ledger(exp.params);

  nlohmann::json j = nlohmann::json::parse(ledger_json(exp.params, led));
  j["skorokhod"] = nlohmann::json::parse(skorokhod_constants_json(exp.params.skorokhod));
  j["eta_admissible"] = exp.params.eta_admissible();

  long r_min_points = cfg.get_long("constants.r_min_points", 0);
  double r_min = 0.0;
  if (r_min_points > 0) {
    RMinEstimate est = estimate_r_min(exp.polyhedron, exp.params,
                                      static_cast<int>(r_min_points),
                                      opt.seed_given ? opt.seed : 0);
    r_min = est.r_min;
    double c13 = suboptimality_c13(exp.params, led, r_min);
    j["r_min"] = {{"value", est.r_min}, {"epsilon", est.epsilon}, {"n_points", est.n_points},
                  {"estimated", est.estimated}};
    j["c13"] = {{"value", c13},
                {"formula_ref",
                 "log n + 2 log(1 + c6/mu) + (1/6) log 3 + log(2 sqrt(pi)) - log r_min"}};
  }

  std::filesystem::create_directories(opt.out_dir);
  {
    std::ofstream out(std::filesystem::path(opt.out_dir) / "ledger.json");
    out << j.dump(2) << "\n";
  }
  {
    std::ofstream out(std::filesystem::path(opt.out_dir) / "constants.txt");
    out << "# config_hash=" << cfg.hash_hex() << "\n";
    out << std::setprecision(10);
    out << "model        " << exp.model.name << "\n";
    out << "n            " << exp.params.n << "\n";
    out << "beta         " << exp.params.beta << "\n";
    out << "eta          " << exp.params.eta
        << (exp.params.eta_admissible() ? "  (admissible)" : "  (NOT admissible)") << "\n";
    out << "ell          " << exp.params.ell << "\n";
    out << "mu           " << exp.params.mu << "\n";
    out << "R            " << exp.params.R << "\n";
    out << "alpha        " << exp.params.skorokhod.alpha << "\n";
    out << "rank         " << exp.params.skorokhod.rank_A << "\n";
    out << "c_diam       " << exp.params.skorokhod.c_diam << "\n";
    out << "x0           " << exp.params.skorokhod.x0 << "\n";
    out << "epsilon      " << exp.params.skorokhod.epsilon << "\n";
    out << "h(R)         " << led.h_at_R << "\n";
    out << "phi(R)       " << led.phi_at_R << "\n";
    out << "R1           " << led.R1 << "\n";
    out << "xi           " << led.xi << "\n";
    out << "a            " << led.a << "\n";
    out << "a_lower      " << led.a_lower << "\n";
    out << "c1           " << led.c1 << "\n";
    out << "c2           " << led.c2 << "\n";
    out << "c3           " << led.c3 << "\n";
    out << "c4           " << led.c4 << "\n";
    out << "c6           " << led.c6 << "\n";
    out << "c7           " << led.c7 << "\n";
    out << "c8           " << led.c8 << "\n";
    out << "c9           " << led.c9 << "\n";
    out << "c10          " << led.c10 << "\n";
    out << "c11          " << led.c11 << "\n";
    if (r_min > 0.0) out << "r_min        " << r_min << "\n";
    out << "schedule     " << led.coef_schedule << "  (coefficient of log T / sqrt(T))\n";
  }
  write_summary(opt, cfg, "constants", "pass", j);
  return kExitPass;
}

namespace {

struct Family {
  std::string name;
  Polyhedron P;
};

std::vector<Family> builtin_families(std::uint64_t seed) {
  std::vector<Family> fams;
  fams.push_back({"half_line", Polyhedron::half_line(-1.0)});
  fams.push_back({"interval", Polyhedron::interval(-1.0, 1.0)});
  fams.push_back({"box2d", Polyhedron::box(Eigen::Vector2d(-1, -1), Eigen::Vector2d(1, 1))});
  {
    Eigen::MatrixXd A(2, 2);
    A << 1, 0, 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    Eigen::VectorXd b(2);
    b << 1, 1;
    fams.push_back({"wedge", Polyhedron(A, b)});
  }
  {
    std::mt19937_64 rng(derive_seed(seed, 777));
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.5, 1.5);
    Eigen::MatrixXd A(6, 3);
    Eigen::VectorXd b(6);
    for (int i = 0; i < 6; ++i) {
      Eigen::Vector3d a;
      do {
        for (int j = 0; j < 3; ++j) a(j) = normal(rng);
      } while (a.norm() < 1e-6);
      A.row(i) = a.normalized();
      b(i) = unif(rng);
    }
    fams.push_back({"random_3d_m6", Polyhedron(A, b)});
  }
  return fams;
}

DiscretePath random_path(std::mt19937_64& rng, int dim, int length, double step_std) {
  std::normal_distribution<double> normal(0.0, step_std);
  DiscretePath path;
  path.values.resize(length);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(dim);
  for (int k = 0; k < length; ++k) {
    path.values[k] = y;
    for (int j = 0; j < dim; ++j) y(j) += normal(rng);
  }
  return path;
}

}  // namespace

int cmd_skorokhod_check(const Config& cfg, const CliOptions& opt) {
  const long pairs = opt.replicas > 0 ? opt.replicas : cfg.get_long("experiment.pairs", 200);
  const int length = static_cast<int>(cfg.get_long("experiment.path_length", 50));
  const double step_std = cfg.get_double("experiment.step_std", 0.5);
  const std::uint64_t seed = opt.seed_given ? opt.seed : cfg.get_u64("sampler.seed", 0);

  std::vector<Family> fams;
  if (cfg.has("problem.polyhedron_file")) {
    fams.push_back({"config", Polyhedron::load_text_file(cfg.require_str("problem.polyhedron_file"))});
  } else {
    fams = builtin_families(seed);
  }

  auto csv = open_csv(opt, cfg, "skorokhod.csv");
  csv << "family,c_diam,max_ratio,bound,pairs\n";
  nlohmann::json results = nlohmann::json::array();
  bool ok = true;
  for (const auto& fam : fams) {
    SkorokhodConstants sc = constants_for(fam.P);
    const double bound = sc.c_diam + 1.0;
    std::vector<double> ratios(pairs, 0.0);
    parallel_for(static_cast<std::size_t>(pairs), opt.effective_workers(), [&](std::size_t r) {
      std::mt19937_64 rng(derive_seed(seed, fnv1a_hash(fam.name.data(), fam.name.size()) + r));
      std::normal_distribution<double> normal(0.0, 0.5);
      DiscretePath y = random_path(rng, fam.P.dim(), length, step_std);
      DiscretePath y2 = random_path(rng, fam.P.dim(), length, step_std);
      Eigen::VectorXd x0(fam.P.dim()), x02(fam.P.dim());
      for (int j = 0; j < fam.P.dim(); ++j) {
        x0(j) = normal(rng);
        x02(j) = normal(rng);
      }
      x0 = project(fam.P, x0);
      x02 = project(fam.P, x02);
      ratios[r] = lipschitz_ratio(fam.P, y, y2, x0, x02);
    });
    double max_ratio = 0.0;
    for (double r : ratios) max_ratio = std::max(max_ratio, r);
    bool fam_ok = max_ratio <= bound;
    ok = ok && fam_ok;
    csv << fam.name << "," << format_double(sc.c_diam) << "," << format_double(max_ratio) << ","
        << format_double(bound) << "," << pairs << "\n";
    results.push_back({{"family", fam.name},
                       {"c_diam", sc.c_diam},
                       {"max_ratio", max_ratio},
                       {"bound", bound},
                       {"pass", fam_ok}});
  }
  write_summary(opt, cfg, "skorokhod-check", ok ? "pass" : "violation",
                {{"families", results}, {"pairs", pairs}});
  return ok ? kExitPass : kExitViolation;
}

namespace {

void dump_path(const CliOptions& opt, const Config& cfg, const std::string& name,
               const DiscretePath& path) {
  auto out = open_csv(opt, cfg, name);
  save_path_csv(out, path);
}

}  // namespace

int cmd_sample(const Config& cfg, const CliOptions& opt) {
  Experiment exp = build_experiment(cfg, opt);
  std::vector<long> s_raw = cfg.get_longs("experiment.s_values", {0, 1, 2});
  std::vector<int> s_values(s_raw.begin(), s_raw.end());

  ProcessBundle bundle = run_bundle(exp.polyhedron, exp.model, exp.stream, exp.sampler, s_values);
  dump_path(opt, cfg, "x_a.csv", bundle.x_a);
  dump_path(opt, cfg, "x_m.csv", bundle.x_m);
  for (std::size_t i = 0; i < bundle.s_values.size(); ++i) {
    std::string tag = std::to_string(bundle.s_values[i]);
    dump_path(opt, cfg, "x_m_s" + tag + ".csv", bundle.averaged[i].m);
    dump_path(opt, cfg, "x_b_s" + tag + ".csv", bundle.averaged[i].b);
  }
  dump_path(opt, cfg, "x_c.csv", bundle.x_c.coarse);
  dump_path(opt, cfg, "x_d.csv", bundle.x_d);
  {
    DiscretePath z;
    z.values = bundle.noise.z;
    dump_path(opt, cfg, "z.csv", z);
  }
  write_summary(opt, cfg, "sample", "pass",
                {{"steps", exp.sampler.steps},
                 {"substeps", exp.sampler.substeps},
                 {"eta", exp.sampler.eta},
                 {"beta", exp.sampler.beta},
                 {"s_values", s_values}});
  return kExitPass;
}

}  // namespace plv::cli

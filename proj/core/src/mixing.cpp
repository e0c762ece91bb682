#include "plv/mixing.hpp"

#include <cmath>
#include <stdexcept>

#include "plv/numerics.hpp"

namespace plv {

StreamSpec StreamSpec::iid_gaussian(double std_dev, int dim, std::uint64_t seed) {
  StreamSpec s;
  s.kind = StreamKind::kIidGaussian;
  s.coeff = 0.0;
  s.noise_std = std_dev;
  s.dim = dim;
  s.seed = seed;
  return s;
}

StreamSpec StreamSpec::ar1(double coeff, double noise_std, int dim, std::uint64_t seed) {
  if (std::abs(coeff) >= 1.0) throw std::invalid_argument("ar1: |coeff| must be < 1");
  StreamSpec s;
  s.kind = StreamKind::kAr1;
  s.coeff = coeff;
  s.noise_std = noise_std;
  s.dim = dim;
  s.seed = seed;
  return s;
}

StreamSpec StreamSpec::constant(double value, int dim) {
  StreamSpec s;
  s.kind = StreamKind::kConstant;
  s.coeff = 0.0;
  s.noise_std = 0.0;
  s.dim = dim;
  s.value = value;
  return s;
}

DataStream::DataStream(const StreamSpec& spec) : spec_(spec) {
  if (spec_.dim < 1) throw std::invalid_argument("DataStream: dim must be >= 1");
  if (spec_.kind == StreamKind::kAr1 && std::abs(spec_.coeff) >= 1.0) {
    throw std::invalid_argument("DataStream: |coeff| must be < 1");
  }
  reset();
}

void DataStream::reset() {
  rng_.seed(spec_.seed);
  normal_.reset();
  state_.resize(spec_.dim);
  switch (spec_.kind) {
    case StreamKind::kConstant:
      state_.setConstant(spec_.value);
      break;
    case StreamKind::kIidGaussian:
      for (int j = 0; j < spec_.dim; ++j) state_(j) = spec_.noise_std * normal_(rng_);
      break;
    case StreamKind::kAr1: {
      // Exact stationary initial draw.
      double stat_std = spec_.noise_std / std::sqrt(1.0 - spec_.coeff * spec_.coeff);
      for (int j = 0; j < spec_.dim; ++j) state_(j) = stat_std * normal_(rng_);
      break;
    }
  }
}

const Eigen::VectorXd& DataStream::next() {
  switch (spec_.kind) {
    case StreamKind::kConstant:
      break;  // deterministic
    case StreamKind::kIidGaussian:
      for (int j = 0; j < spec_.dim; ++j) state_(j) = spec_.noise_std * normal_(rng_);
      break;
    case StreamKind::kAr1:
      for (int j = 0; j < spec_.dim; ++j) {
        state_(j) = spec_.coeff * state_(j) + spec_.noise_std * normal_(rng_);
      }
      break;
  }
  return state_;
}

Eigen::VectorXd DataStream::mean() const {
  if (spec_.kind == StreamKind::kConstant) {
    return Eigen::VectorXd::Constant(spec_.dim, spec_.value);
  }
  return Eigen::VectorXd::Zero(spec_.dim);
}

double ar1_step(double coeff, double z, double xi) { return coeff * z + xi; }

MixingDescriptor ar1_descriptor(double coeff, double noise_std, int dim) {
  if (std::abs(coeff) >= 1.0) throw std::invalid_argument("ar1_descriptor: |coeff| must be < 1");
  double scale = std::sqrt(static_cast<double>(dim));
  double denom = std::sqrt(1.0 - coeff * coeff);
  double ac = std::abs(coeff);
  MixingDescriptor d;
  if (coeff == 0.0) {
    // IID: z_k is measurable from its own innovation, so psi2 vanishes for
    // tau >= 1 and equals the marginal deviation at tau = 0.
    double m2 = scale * noise_std;
    d.psi2 = [m2](int tau) { return tau <= 0 ? m2 : 0.0; };
    d.Psi2 = m2;
    d.M2 = m2;
    return d;
  }
  double m2 = scale * noise_std / denom;
  d.psi2 = [m2, ac](int tau) { return m2 * std::pow(ac, std::max(tau, 0)); };
  d.Psi2 = scale * noise_std / ((1.0 - ac) * denom);
  d.M2 = m2;
  return d;
}

MixingDescriptor descriptor_for(const StreamSpec& spec) {
  switch (spec.kind) {
    case StreamKind::kConstant: {
      // Deterministic: no deviation from the conditional mean, second moment
      // equal to the norm of the constant value.
      MixingDescriptor d;
      d.psi2 = [](int) { return 0.0; };
      d.Psi2 = 0.0;
      d.M2 = std::abs(spec.value) * std::sqrt(static_cast<double>(spec.dim));
      return d;
    }
    case StreamKind::kIidGaussian:
      return ar1_descriptor(0.0, spec.noise_std, spec.dim);
    case StreamKind::kAr1:
      return ar1_descriptor(spec.coeff, spec.noise_std, spec.dim);
  }
  throw std::logic_error("descriptor_for: unknown stream kind");
}

Psi2Estimate estimate_psi2(const StreamSpec& spec, int tau, int n_samples, std::uint64_t seed) {
  if (n_samples < 100) throw std::invalid_argument("estimate_psi2: need n_samples >= 100");
  if (tau < 0) throw std::invalid_argument("estimate_psi2: tau must be >= 0");
  RunningStat sq;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int s = 0; s < n_samples; ++s) {
    double total = 0.0;
    for (int j = 0; j < spec.dim; ++j) {
      double z, cond;
      switch (spec.kind) {
        case StreamKind::kConstant:
          z = spec.value;
          cond = spec.value;
          break;
        case StreamKind::kIidGaussian: {
          double xi = spec.noise_std * normal(rng);
          z = xi;
          // tau = 0 conditions only on strictly newer innovations, so the
          // conditional mean is the stationary mean; tau >= 1 knows xi.
          cond = (tau == 0) ? 0.0 : xi;
          break;
        }
        case StreamKind::kAr1: {
          double stat_std = spec.noise_std / std::sqrt(1.0 - spec.coeff * spec.coeff);
          double z0 = stat_std * normal(rng);  // stationary past at time k - tau
          double zk = z0;
          double zero_hist = 0.0;  // same recent innovations, zeroed prehistory
          for (int t = 0; t < tau; ++t) {
            double xi = spec.noise_std * normal(rng);
            zk = spec.coeff * zk + xi;
            zero_hist = spec.coeff * zero_hist + xi;
          }
          z = zk;
          cond = zero_hist;
          break;
        }
        default:
          throw std::logic_error("estimate_psi2: unknown stream kind");
      }
      double r = z - cond;
      total += r * r;
    }
    sq.add(total);
  }
  Psi2Estimate est;
  double mean_sq = sq.mean();
  est.value = std::sqrt(std::max(mean_sq, 0.0));
  // Delta method: se(sqrt(m)) ~ se(m) / (2 sqrt(m)).
  double se_m = sq.std_error();
  est.std_error = est.value > 0.0 ? se_m / (2.0 * est.value) : std::sqrt(se_m);
  return est;
}

}  // namespace plv

#include "shieldsynth/sim.hpp"

#include <cmath>
#include <stdexcept>

#include "shieldsynth/reach.hpp"

namespace shieldsynth {

NoiseSampler::NoiseSampler(NoiseDist dist, IntervalBox bounds, std::uint64_t seed)
    : dist_(dist), bounds_(std::move(bounds)), rng_(seed) {}

Eigen::VectorXd uniform_in_box(const IntervalBox& box, std::mt19937_64& rng) {
  Eigen::VectorXd out(box.dim());
  for (int i = 0; i < box.dim(); ++i) {
    std::uniform_real_distribution<double> d(box.lo()[i], box.hi()[i]);
    out[i] = d(rng);
  }
  return out;
}

Eigen::VectorXd NoiseSampler::sample() {
  if (dist_ == NoiseDist::UniformNoise) return uniform_in_box(bounds_, rng_);
  Eigen::VectorXd out(bounds_.dim());
  for (int i = 0; i < bounds_.dim(); ++i) {
    const double mid = 0.5 * (bounds_.lo()[i] + bounds_.hi()[i]);
    const double sigma = (bounds_.hi()[i] - bounds_.lo()[i]) / 6.0;
    if (sigma <= 0.0) {
      out[i] = mid;
      continue;
    }
    std::normal_distribution<double> d(mid, sigma);
    double v;
    do {
      v = d(rng_);
    } while (v < bounds_.lo()[i] || v > bounds_.hi()[i]);
    out[i] = v;
  }
  return out;
}

double r_safe(const Eigen::VectorXd& x, const IntervalBox& safe_bounds) {
  double r = 0.0;
  for (int i = 0; i < x.size(); ++i) {
    r += std::min(x[i] - safe_bounds.lo()[i], 0.0);
    r += std::min(safe_bounds.hi()[i] - x[i], 0.0);
  }
  return r;
}

double r_live(const Eigen::VectorXd& x, const RewardSpec& spec) {
  double r = 0.0;
  for (std::size_t j = 0; j < spec.live_dims.size(); ++j) {
    const int i = spec.live_dims[j];
    if (std::abs(x[i]) > spec.live_thresholds[static_cast<Eigen::Index>(j)])
      r += 1.0;
  }
  return r;
}

double r_live_magnitude(const Eigen::VectorXd& x, const RewardSpec& spec) {
  double r = 0.0;
  for (int i : spec.live_dims) r += std::abs(x[i]);
  return r;
}

double discounted_return(const std::vector<Eigen::VectorXd>& trajectory,
                         const RewardSpec& spec) {
  double total = 0.0, factor = 1.0;
  for (const auto& x : trajectory) {
    total += factor * (r_safe(x, spec.safe_bounds) + r_live(x, spec));
    factor *= spec.discount;
  }
  return total;
}

namespace {

// Batched closed-loop rollout under the closed-form noise semantics: each
// trajectory uses one disturbance draw w, applied at every step. States are
// columns; the callback sees the batch after each step.
template <typename Visitor>
void rollout_batch(const SystemSpec& spec, const ControllerFamily& family,
                   const Selector& phi, int samples, std::uint64_t seed,
                   Visitor&& visit) {
  if (samples <= 0) throw std::invalid_argument("rollout: samples must be > 0");
  std::mt19937_64 rng(seed);
  Eigen::MatrixXd S(spec.n, samples), W(spec.n, samples);
  for (int j = 0; j < samples; ++j) {
    S.col(j) = uniform_in_box(spec.init_box, rng);
    W.col(j) = uniform_in_box(spec.noise_verified, rng);
  }
  for (int t = 0; t < spec.horizon_M; ++t) {
    const int seg = t / spec.interval_k;
    const auto& K = family.gains[static_cast<std::size_t>(
        phi.choices[static_cast<std::size_t>(seg)])];
    const Eigen::MatrixXd T = closed_loop_matrix(spec, t, K);
    S = (T * S + W).eval();
    visit(t + 1, S);
  }
}

}  // namespace

SafetyEstimate empirical_safety(const SystemSpec& spec,
                                const ControllerFamily& family,
                                const Selector& phi, int samples,
                                std::uint64_t seed) {
  SafetyEstimate est;
  est.safe_fraction.reserve(static_cast<std::size_t>(spec.horizon_M));
  est.sigma3.reserve(static_cast<std::size_t>(spec.horizon_M));
  const auto& lo = spec.safe_box.lo();
  const auto& hi = spec.safe_box.hi();
  rollout_batch(spec, family, phi, samples, seed,
                [&](int, const Eigen::MatrixXd& S) {
                  long safe = 0;
                  for (int j = 0; j < S.cols(); ++j) {
                    const auto c = S.col(j).array();
                    if ((c >= lo.array()).all() && (c <= hi.array()).all())
                      ++safe;
                  }
                  const double p = static_cast<double>(safe) / S.cols();
                  est.safe_fraction.push_back(p);
                  est.sigma3.push_back(3.0 * std::sqrt(std::max(p * (1 - p), 1e-12) /
                                                       S.cols()));
                });
  return est;
}

long containment_violations(const SystemSpec& spec,
                            const ControllerFamily& family, const Selector& phi,
                            int samples, std::uint64_t seed) {
  ReachSetTuple cur = ReachSetTuple::initial(spec.init_box, spec.noise_verified);
  std::vector<IntervalBox> boxes;
  boxes.reserve(static_cast<std::size_t>(spec.horizon_M));
  for (int t = 0; t < spec.horizon_M; ++t) {
    const int seg = t / spec.interval_k;
    const auto& K = family.gains[static_cast<std::size_t>(
        phi.choices[static_cast<std::size_t>(seg)])];
    cur = propagate(cur, closed_loop_matrix(spec, t, K));
    boxes.push_back(over_approx(cur));
  }

  long outside = 0;
  rollout_batch(spec, family, phi, samples, seed,
                [&](int t, const Eigen::MatrixXd& S) {
                  const auto& box = boxes[static_cast<std::size_t>(t - 1)];
                  for (int j = 0; j < S.cols(); ++j) {
                    const auto c = S.col(j).array();
                    if (!((c >= box.lo().array()).all() &&
                          (c <= box.hi().array()).all()))
                      ++outside;
                  }
                });
  return outside;
}

}  // namespace shieldsynth

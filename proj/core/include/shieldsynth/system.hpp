#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "shieldsynth/interval_box.hpp"

namespace shieldsynth {

enum class NoiseDist { UniformNoise, GenericBounded };

/// Time-invariant dynamics: fixed (A, B).
struct ConstantDynamics {
  Eigen::MatrixXd A;
  Eigen::MatrixXd B;
};

/// Per-step matrices; entries[t] gives (A_t, B_t).
struct TableDynamics {
  std::vector<std::pair<Eigen::MatrixXd, Eigen::MatrixXd>> entries;
};

/// Named parametric generator, a pure function of the step index.
struct GeneratorDynamics {
  std::string name;
  std::vector<double> params;
};

using DynamicsSource =
    std::variant<ConstantDynamics, TableDynamics, GeneratorDynamics>;

/// A stochastic linear time-variant system together with the bounds and
/// horizon parameters used for verification.
///
///   s_{t+1} = s_t + dt * (A_t s_t + B_t a_t) + w
///
/// with w bounded. noise_runtime is the noise the deployed system sees;
/// noise_verified is the (strictly wider) noise assumed during verification.
struct SystemSpec {
  std::string name;
  int n = 0;  // state dimension
  int m = 0;  // action dimension
  DynamicsSource dynamics;
  double dt = 0.0;
  IntervalBox noise_runtime;
  IntervalBox noise_verified;
  IntervalBox init_box;
  IntervalBox safe_box;
  int horizon_M = 0;
  int interval_k = 0;
  NoiseDist noise_dist = NoiseDist::UniformNoise;

  // Block sizes of a stacked system (single block for base systems).
  // The LQR solver exploits block-diagonal structure when present.
  std::vector<int> block_n;
  std::vector<int> block_m;

  std::optional<std::uint64_t> stack_seed;

  /// Throws std::invalid_argument if any structural invariant fails.
  void validate() const;
};

/// (A_t, B_t) for the given step. Throws on out-of-range table access.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> matrices_at(const SystemSpec& spec,
                                                        int t);

/// One forward-Euler transition: s + dt*(A_t s + B_t a) + w.
Eigen::VectorXd step(const SystemSpec& spec, int t, const Eigen::VectorXd& s,
                     const Eigen::VectorXd& a, const Eigen::VectorXd& w);

/// Closed-loop one-step matrix T_t = I + dt*(A_t + B_t K).
Eigen::MatrixXd closed_loop_matrix(const SystemSpec& spec, int t,
                                   const Eigen::MatrixXd& K);

/// Block-diagonal composition of the given systems with seeded perturbations
/// on the action channel (P_B) and on the stacked safe-box bounds (P_L, P_U).
SystemSpec stack(const std::vector<SystemSpec>& specs, std::uint64_t perturb_seed);

/// Registered benchmark by name; "N-Name" yields the N-fold stacked variant.
SystemSpec benchmark(const std::string& name);

std::vector<std::string> base_benchmark_names();

}  // namespace shieldsynth

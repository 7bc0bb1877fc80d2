#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "shieldsynth/system.hpp"

namespace shieldsynth {

/// Parameters of one LQR draw, kept for reproducibility.
struct QrDraw {
  Eigen::VectorXd q_diag;
  Eigen::VectorXd r_diag;
  std::uint64_t seed = 0;
};

/// A set of linear state-feedback gains; one gain is active per k-step
/// segment of a trajectory.
struct ControllerFamily {
  std::vector<Eigen::MatrixXd> gains;  // each m x n
  int interval_k = 0;
  std::vector<QrDraw> qr_log;
};

struct RiccatiResult {
  Eigen::MatrixXd K;  // m x n, action = K * s
  Eigen::MatrixXd P;
  int iterations = 0;
};

/// Fixed-point iteration on the discrete-time algebraic Riccati equation.
/// Throws std::runtime_error on non-convergence. The returned gain is the
/// stabilizing feedback a = K s, K = -(R + B'PB)^-1 B'PA.
RiccatiResult riccati_gain(const Eigen::MatrixXd& A_d, const Eigen::MatrixXd& B_d,
                           const Eigen::VectorXd& q_diag,
                           const Eigen::VectorXd& r_diag, double tol = 1e-9,
                           int max_iter = 10000);

/// Infinity-norm residual of the DARE at P.
double dare_residual(const Eigen::MatrixXd& A_d, const Eigen::MatrixXd& B_d,
                     const Eigen::VectorXd& q_diag, const Eigen::VectorXd& r_diag,
                     const Eigen::MatrixXd& P);

/// Spectral radius via dense eigenvalues.
double spectral_radius(const Eigen::MatrixXd& M);

/// Samples `count` LQR gains for the t=0 dynamics of `spec`. Q diagonals are
/// drawn uniformly from (0, 20], R diagonals from (0, 10]; draws whose
/// Riccati iteration fails or whose closed loop is not strictly stable are
/// re-sampled. Throws std::runtime_error when the retry budget is exhausted.
ControllerFamily sample_family(const SystemSpec& spec, int count,
                               std::uint64_t seed);

}  // namespace shieldsynth

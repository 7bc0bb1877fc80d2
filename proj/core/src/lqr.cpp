#include "shieldsynth/lqr.hpp"

#include <random>
#include <stdexcept>

namespace shieldsynth {

namespace {

Eigen::MatrixXd dare_rhs(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                         const Eigen::VectorXd& q, const Eigen::VectorXd& r,
                         const Eigen::MatrixXd& P) {
  const Eigen::MatrixXd BtP = B.transpose() * P;
  Eigen::MatrixXd S = BtP * B;
  S.diagonal() += r;
  const Eigen::MatrixXd AtPB = A.transpose() * BtP.transpose();
  Eigen::MatrixXd next = A.transpose() * P * A - AtPB * S.ldlt().solve(AtPB.transpose());
  next.diagonal() += q;
  return next;
}

}  // namespace

double dare_residual(const Eigen::MatrixXd& A_d, const Eigen::MatrixXd& B_d,
                     const Eigen::VectorXd& q_diag, const Eigen::VectorXd& r_diag,
                     const Eigen::MatrixXd& P) {
  return (P - dare_rhs(A_d, B_d, q_diag, r_diag, P)).cwiseAbs().maxCoeff();
}

RiccatiResult riccati_gain(const Eigen::MatrixXd& A_d, const Eigen::MatrixXd& B_d,
                           const Eigen::VectorXd& q_diag,
                           const Eigen::VectorXd& r_diag, double tol,
                           int max_iter) {
  const auto n = A_d.rows();
  if (A_d.cols() != n || B_d.rows() != n || q_diag.size() != n ||
      r_diag.size() != B_d.cols())
    throw std::invalid_argument("riccati_gain: shape mismatch");
  if ((q_diag.array() < 0).any() || (r_diag.array() <= 0).any())
    throw std::invalid_argument("riccati_gain: need Q >= 0 and R > 0");

  Eigen::MatrixXd P = q_diag.asDiagonal();
  int iter = 0;
  for (; iter < max_iter; ++iter) {
    Eigen::MatrixXd next = dare_rhs(A_d, B_d, q_diag, r_diag, P);
    const double delta = (next - P).cwiseAbs().maxCoeff();
    P = 0.5 * (next + next.transpose());  // keep symmetric under roundoff
    if (delta <= tol) break;
  }
  if (iter >= max_iter)
    throw std::runtime_error("riccati_gain: no convergence");
  if (dare_residual(A_d, B_d, q_diag, r_diag, P) > std::max(tol, 1e-9 * P.norm()))
    throw std::runtime_error("riccati_gain: residual too large");

  const Eigen::MatrixXd BtP = B_d.transpose() * P;
  Eigen::MatrixXd S = BtP * B_d;
  S.diagonal() += r_diag;
  Eigen::MatrixXd K = -S.ldlt().solve(BtP * A_d);
  return {std::move(K), std::move(P), iter + 1};
}

double spectral_radius(const Eigen::MatrixXd& M) {
  return M.eigenvalues().cwiseAbs().maxCoeff();
}

ControllerFamily sample_family(const SystemSpec& spec, int count,
                               std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("sample_family: count must be >= 1");
  auto [A0, B0] = matrices_at(spec, 0);
  const Eigen::MatrixXd A_d =
      Eigen::MatrixXd::Identity(spec.n, spec.n) + spec.dt * A0;
  const Eigen::MatrixXd B_d = spec.dt * B0;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> qdist(0.0, 20.0);
  std::uniform_real_distribution<double> rdist(0.0, 10.0);

  const bool blockwise = spec.block_n.size() > 1;

  ControllerFamily family;
  family.interval_k = spec.interval_k;
  const int retry_budget = 50 * count;
  int retries = 0;
  while (static_cast<int>(family.gains.size()) < count) {
    if (retries++ > retry_budget)
      throw std::runtime_error("sample_family: no stabilizing gain found");
    Eigen::VectorXd q(spec.n), r(spec.m);
    // Half-open draw flipped to (0, hi] so degenerate zero weights are
    // excluded.
    for (int i = 0; i < spec.n; ++i) q[i] = 20.0 - qdist(rng);
    for (int i = 0; i < spec.m; ++i) r[i] = 10.0 - rdist(rng);
    try {
      Eigen::MatrixXd K = Eigen::MatrixXd::Zero(spec.m, spec.n);
      if (blockwise) {
        // Block-diagonal dynamics decompose the DARE per block.
        int rn = 0, rm = 0;
        for (std::size_t b = 0; b < spec.block_n.size(); ++b) {
          const int bn = spec.block_n[b], bm = spec.block_m[b];
          auto res = riccati_gain(A_d.block(rn, rn, bn, bn),
                                  B_d.block(rn, rm, bn, bm),
                                  q.segment(rn, bn), r.segment(rm, bm));
          K.block(rm, rn, bm, bn) = res.K;
          rn += bn;
          rm += bm;
        }
      } else {
        K = riccati_gain(A_d, B_d, q, r).K;
      }
      if (spectral_radius(closed_loop_matrix(spec, 0, K)) >= 1.0) continue;
      family.gains.push_back(std::move(K));
      family.qr_log.push_back({std::move(q), std::move(r), seed});
    } catch (const std::runtime_error&) {
      continue;
    }
  }
  return family;
}

}  // namespace shieldsynth

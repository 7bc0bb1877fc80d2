#include "shieldsynth/reach.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace shieldsynth {

ReachSetTuple propagate(const ReachSetTuple& prev, const Eigen::MatrixXd& T_t) {
  const int n = prev.init_box.dim();
  if (T_t.rows() != n || T_t.cols() != n)
    throw std::invalid_argument("propagate: shape mismatch");
  ReachSetTuple next;
  next.T_s = T_t * prev.T_s;
  next.T_w = T_t * prev.T_w + Eigen::MatrixXd::Identity(n, n);
  next.init_box = prev.init_box;
  next.noise_box = prev.noise_box;
  next.step_t = prev.step_t + 1;
  return next;
}

IntervalBox interval_map(const Eigen::MatrixXd& T, const IntervalBox& box) {
  if (T.cols() != box.dim())
    throw std::invalid_argument("interval_map: shape mismatch");
  const Eigen::MatrixXd pos = T.cwiseMax(0.0);
  const Eigen::MatrixXd neg = T.cwiseMin(0.0);
  return IntervalBox(pos * box.lo() + neg * box.hi(),
                     pos * box.hi() + neg * box.lo());
}

IntervalBox over_approx(const ReachSetTuple& rs) {
  if (rs.step_t == 0) return rs.init_box;
  return interval_map(rs.T_s, rs.init_box) + interval_map(rs.T_w, rs.noise_box);
}

namespace {

double density_branch(const Eigen::MatrixXd& T, const Eigen::VectorXd& widths) {
  const double det = std::abs(determinant(T));
  const double vol = widths.prod();
  if (det * vol <= 1e-300) return std::numeric_limits<double>::infinity();
  return 1.0 / (det * vol);
}

}  // namespace

double density_upper_bound(const ReachSetTuple& rs, NoiseDist dist) {
  const Eigen::VectorXd delta = rs.init_box.width();
  if ((delta.array() <= 0.0).any())
    throw std::invalid_argument("density_upper_bound: zero init width");
  const double init_branch = density_branch(rs.T_s, delta);
  if (dist != NoiseDist::UniformNoise) return init_branch;
  const Eigen::VectorXd delta_w = rs.noise_box.width();
  if ((delta_w.array() <= 0.0).any()) return init_branch;
  return std::min(init_branch, density_branch(rs.T_w, delta_w));
}

double overlap_volume_upper(const IntervalBox& box, const IntervalBox& safe) {
  if (box.dim() != safe.dim())
    throw std::invalid_argument("overlap_volume_upper: dimension mismatch");
  const Eigen::VectorXd b1 = box.width();
  const Eigen::VectorXd clipped_hi =
      box.hi().cwiseMax(safe.lo()).cwiseMin(safe.hi());
  const Eigen::VectorXd clipped_lo =
      box.lo().cwiseMax(safe.lo()).cwiseMin(safe.hi());
  const Eigen::VectorXd b2 = clipped_hi - clipped_lo;
  return std::max(0.0, b1.prod() - b2.prod());
}

SafetyBound safety_lower_bound(const ReachSetTuple& rs, const IntervalBox& safe,
                               NoiseDist dist) {
  const IntervalBox box = over_approx(rs);
  SafetyBound out;
  if (box.subset_of(safe)) {
    out.p_hat = 1.0;
    out.exact = true;
    return out;
  }
  out.u_f = density_upper_bound(rs, dist);
  out.overlap_upper = overlap_volume_upper(box, safe);
  if (std::isinf(out.u_f)) {
    out.p_hat = 0.0;
  } else {
    out.p_hat = std::clamp(1.0 - out.u_f * out.overlap_upper, 0.0, 1.0);
  }
  return out;
}

bool box_subset(const IntervalBox& a, const IntervalBox& b) {
  return a.subset_of(b);
}

double determinant(const Eigen::MatrixXd& T) {
  if (T.rows() != T.cols())
    throw std::invalid_argument("determinant: matrix not square");
  return Eigen::PartialPivLU<Eigen::MatrixXd>(T).determinant();
}

}  // namespace shieldsynth

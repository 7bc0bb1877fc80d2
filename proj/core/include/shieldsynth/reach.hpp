#pragma once

#include <Eigen/Dense>

#include "shieldsynth/interval_box.hpp"
#include "shieldsynth/system.hpp"

namespace shieldsynth {

/// Exact symbolic reachable set at step t:
///
///   s_t = T_s s_0 + T_w w,   s_0 in init_box, w in noise_box
///
/// where T_s is the product of the closed-loop step matrices and T_w the
/// accumulated noise transfer I + sum of suffix products. The disturbance w
/// is a single bounded draw applied at every step of the closed form.
struct ReachSetTuple {
  Eigen::MatrixXd T_s;
  Eigen::MatrixXd T_w;
  IntervalBox init_box;
  IntervalBox noise_box;
  int step_t = 0;

  static ReachSetTuple initial(const IntervalBox& init, const IntervalBox& noise) {
    const int n = init.dim();
    return {Eigen::MatrixXd::Identity(n, n), Eigen::MatrixXd::Zero(n, n), init,
            noise, 0};
  }
};

/// Certified per-step safety bound.
struct SafetyBound {
  double p_hat = 0.0;        // lower bound on P(s_t safe), in [0, 1]
  double u_f = 0.0;          // density upper bound (may be +inf)
  double overlap_upper = 0;  // upper bound on vol(A(R) \ safe)
  bool exact = false;        // true iff the over-approximation is inside safe
};

/// Advance the tuple by one step: T_s <- T T_s, T_w <- T T_w + I.
ReachSetTuple propagate(const ReachSetTuple& prev, const Eigen::MatrixXd& T_t);

/// Tight interval image of a box under a linear map, via the sign-split
/// bound [T>=0 lo + T<0 hi, T>=0 hi + T<0 lo].
IntervalBox interval_map(const Eigen::MatrixXd& T, const IntervalBox& box);

/// Box over-approximation of the reachable set: the Minkowski sum of the
/// interval images of the initial box and the noise box.
IntervalBox over_approx(const ReachSetTuple& rs);

/// Upper bound on the reachable-set density. GenericBounded noise uses the
/// initial-box branch only; uniform noise takes the min with the noise
/// branch. A singular transfer matrix makes its branch +inf.
double density_upper_bound(const ReachSetTuple& rs, NoiseDist dist);

/// Upper bound on the volume of box \ safe: prod(b1) - prod(b2) with
/// b1 the box widths and b2 the widths after clipping into [L, U].
double overlap_volume_upper(const IntervalBox& box, const IntervalBox& safe);

/// p_hat = 1 exactly when over_approx(rs) is inside safe; otherwise
/// clamp(1 - U_f * overlap_upper, 0, 1).
SafetyBound safety_lower_bound(const ReachSetTuple& rs, const IntervalBox& safe,
                               NoiseDist dist);

bool box_subset(const IntervalBox& a, const IntervalBox& b);

/// Determinant via LU with partial pivoting.
double determinant(const Eigen::MatrixXd& T);

}  // namespace shieldsynth

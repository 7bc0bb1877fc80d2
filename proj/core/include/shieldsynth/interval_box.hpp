#pragma once

#include <Eigen/Dense>
#include <stdexcept>

namespace shieldsynth {

/// Axis-aligned box [lo, hi] in R^d. Immutable after construction.
class IntervalBox {
public:
  IntervalBox() = default;

  IntervalBox(Eigen::VectorXd lo, Eigen::VectorXd hi)
      : lo_(std::move(lo)), hi_(std::move(hi)) {
    if (lo_.size() != hi_.size())
      throw std::invalid_argument("IntervalBox: lo/hi dimension mismatch");
    if ((lo_.array() > hi_.array()).any())
      throw std::invalid_argument("IntervalBox: lo > hi");
  }

  /// Symmetric box [-r, r]^d.
  static IntervalBox symmetric(int dim, double radius) {
    return IntervalBox(Eigen::VectorXd::Constant(dim, -radius),
                       Eigen::VectorXd::Constant(dim, radius));
  }

  static IntervalBox point(const Eigen::VectorXd& v) { return IntervalBox(v, v); }

  int dim() const { return static_cast<int>(lo_.size()); }
  const Eigen::VectorXd& lo() const { return lo_; }
  const Eigen::VectorXd& hi() const { return hi_; }
  Eigen::VectorXd width() const { return hi_ - lo_; }
  Eigen::VectorXd center() const { return 0.5 * (lo_ + hi_); }

  bool contains(const Eigen::VectorXd& x) const {
    return (x.array() >= lo_.array()).all() && (x.array() <= hi_.array()).all();
  }

  /// Closed-box containment: this ⊆ other.
  bool subset_of(const IntervalBox& other) const {
    check_dim(other);
    return (other.lo_.array() <= lo_.array()).all() &&
           (hi_.array() <= other.hi_.array()).all();
  }

  bool strict_subset_of(const IntervalBox& other) const {
    return subset_of(other) && !(*this == other);
  }

  bool operator==(const IntervalBox& other) const {
    return lo_ == other.lo_ && hi_ == other.hi_;
  }

  /// Minkowski sum; for boxes this is componentwise addition of bounds.
  IntervalBox operator+(const IntervalBox& other) const {
    check_dim(other);
    return IntervalBox(lo_ + other.lo_, hi_ + other.hi_);
  }

private:
  void check_dim(const IntervalBox& other) const {
    if (dim() != other.dim())
      throw std::invalid_argument("IntervalBox: dimension mismatch");
  }

  Eigen::VectorXd lo_;
  Eigen::VectorXd hi_;
};

}  // namespace shieldsynth

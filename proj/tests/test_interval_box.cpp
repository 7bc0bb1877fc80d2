#include <doctest.h>

#include "shieldsynth/interval_box.hpp"

using shieldsynth::IntervalBox;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

}  // namespace

TEST_CASE("construction rejects malformed bounds") {
  CHECK_THROWS_AS(IntervalBox(vec({0.0, 0.0}), vec({1.0})),
                  std::invalid_argument);
  CHECK_THROWS_AS(IntervalBox(vec({1.0}), vec({0.0})), std::invalid_argument);
  CHECK_NOTHROW(IntervalBox(vec({1.0}), vec({1.0})));  // degenerate is fine
}

TEST_CASE("accessors") {
  const IntervalBox b(vec({-1.0, 0.0}), vec({3.0, 2.0}));
  CHECK(b.dim() == 2);
  CHECK(b.width() == vec({4.0, 2.0}));
  CHECK(b.center() == vec({1.0, 1.0}));
  CHECK(IntervalBox::symmetric(3, 0.5).lo() == vec({-0.5, -0.5, -0.5}));
  CHECK(IntervalBox::point(vec({2.0})).width()[0] == 0.0);
}

TEST_CASE("contains is closed-box membership") {
  const IntervalBox b(vec({0.0}), vec({2.0}));
  CHECK(b.contains(vec({0.0})));
  CHECK(b.contains(vec({2.0})));
  CHECK(b.contains(vec({1.0})));
  CHECK_FALSE(b.contains(vec({2.0000001})));
}

TEST_CASE("subset relations") {
  const IntervalBox unit(vec({0.0}), vec({1.0}));
  const IntervalBox wide(vec({0.0}), vec({2.0}));
  const IntervalBox shifted(vec({-1.0}), vec({1.0}));
  CHECK(unit.subset_of(unit));
  CHECK(unit.subset_of(wide));
  CHECK_FALSE(shifted.subset_of(wide));
  CHECK(unit.strict_subset_of(wide));
  CHECK_FALSE(unit.strict_subset_of(unit));
  CHECK_THROWS_AS(unit.subset_of(IntervalBox::symmetric(2, 1.0)),
                  std::invalid_argument);
}

TEST_CASE("Minkowski sum adds bounds componentwise") {
  const IntervalBox a(vec({0.0, 0.0}), vec({1.0, 1.0}));
  const IntervalBox w = IntervalBox::symmetric(2, 0.1);
  const IntervalBox s = a + w;
  CHECK(s.lo() == vec({-0.1, -0.1}));
  CHECK(s.hi() == vec({1.1, 1.1}));
  CHECK_THROWS_AS(a + IntervalBox::symmetric(1, 1.0), std::invalid_argument);
}

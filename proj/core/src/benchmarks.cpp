#include <cmath>
#include <stdexcept>

#include "shieldsynth/system.hpp"

// Benchmark models. Pendulum and Cartpole are the classical linearized
// control textbook systems; Carplatoon is an 8-vehicle platoon with gap and
// relative-velocity errors; Oscillator is a damped planar oscillator driving
// a 16th-order low-pass filter chain; Helicopter is a 28-state longitudinal
// motion model built from six actuated axes plus internal stable modes.
// Horizon, selection interval and verified noise magnitudes follow the
// published benchmark configuration (M, k, w' per system); the matrices for
// everything except Pendulum are re-derived from the standard models, so
// only shapes and pipeline behavior are treated as ground truth.

namespace shieldsynth {

namespace {

constexpr double kGravity = 9.8;

SystemSpec finish(SystemSpec spec, double init_r, const Eigen::VectorXd& safe_r,
                  double noise_verified_r, int M, int k) {
  spec.init_box = IntervalBox::symmetric(spec.n, init_r);
  spec.safe_box = IntervalBox(-safe_r, safe_r);
  spec.noise_verified = IntervalBox::symmetric(spec.n, noise_verified_r);
  // Runtime noise at 60% of the verified envelope (strict domination).
  spec.noise_runtime = IntervalBox::symmetric(spec.n, 0.6 * noise_verified_r);
  spec.horizon_M = M;
  spec.interval_k = k;
  spec.noise_dist = NoiseDist::UniformNoise;
  spec.block_n = {spec.n};
  spec.block_m = {spec.m};
  spec.validate();
  return spec;
}

SystemSpec make_pendulum() {
  SystemSpec spec;
  spec.name = "Pendulum";
  spec.n = 2;
  spec.m = 1;
  spec.dt = 0.01;
  const double g = kGravity, l = 1.0, mass = 1.0;
  Eigen::MatrixXd A(2, 2), B(2, 1);
  A << 0, 1, g / l, 0;
  B << 0, 1.0 / (mass * l * l);
  spec.dynamics = ConstantDynamics{A, B};
  Eigen::VectorXd safe = Eigen::VectorXd::Constant(2, M_PI / 2.0);
  return finish(std::move(spec), M_PI / 10.0, safe, 1.5e-2, 500, 100);
}

SystemSpec make_cartpole() {
  SystemSpec spec;
  spec.name = "Cartpole";
  spec.n = 4;
  spec.m = 1;
  spec.dt = 0.01;
  const double mc = 1.0, mp = 0.1, l = 0.5;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(4, 4);
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(4, 1);
  // state: [x, x_dot, theta, theta_dot]
  A(0, 1) = 1.0;
  A(1, 2) = -mp * kGravity / mc;
  A(2, 3) = 1.0;
  A(3, 2) = (mc + mp) * kGravity / (l * mc);
  B(1, 0) = 1.0 / mc;
  B(3, 0) = -1.0 / (l * mc);
  spec.dynamics = ConstantDynamics{A, B};
  Eigen::VectorXd safe(4);
  safe << 6.0, 6.0, 0.5, 3.0;
  return finish(std::move(spec), 0.05, safe, 3e-3, 500, 100);
}

SystemSpec make_drone_in_wind() {
  SystemSpec spec;
  spec.name = "DroneInWind";
  spec.n = 6;
  spec.m = 2;
  spec.dt = 0.01;
  spec.dynamics = GeneratorDynamics{"drone-wind", {0.1, 0.2}};
  Eigen::VectorXd safe(6);
  safe << 5.0, 5.0, 2.0, 2.0, 5.0, 5.0;
  return finish(std::move(spec), 0.1, safe, 2.5e-3, 1000, 100);
}

SystemSpec make_carplatoon() {
  SystemSpec spec;
  spec.name = "Carplatoon";
  spec.n = 15;
  spec.m = 8;
  spec.dt = 0.01;
  // state: [v_1, e_2, v_2, ..., e_8, v_8]; e_i is the gap error to the
  // predecessor, v_i the velocity deviation; every vehicle is actuated.
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(15, 15);
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(15, 8);
  B(0, 0) = 1.0;
  for (int i = 1; i < 8; ++i) {
    const int e = 2 * i - 1, v = 2 * i;
    A(e, v - 1) = 1.0;   // predecessor velocity deviation
    A(e, v) = -1.0;
    B(v, i) = 1.0;
  }
  spec.dynamics = ConstantDynamics{A, B};
  Eigen::VectorXd safe(15);
  for (int i = 0; i < 15; ++i) safe[i] = (i % 2 == 1) ? 1.0 : 2.0;
  return finish(std::move(spec), 0.05, safe, 2e-3, 1000, 100);
}

SystemSpec make_oscillator() {
  SystemSpec spec;
  spec.name = "Oscillator";
  spec.n = 18;
  spec.m = 2;
  spec.dt = 0.01;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(18, 18);
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(18, 2);
  // Damped planar oscillator in the first two dimensions.
  A(0, 0) = -0.5;
  A(0, 1) = -3.0;
  A(1, 0) = 3.0;
  A(1, 1) = -0.5;
  B(0, 0) = 1.0;
  B(1, 1) = 1.0;
  // 16th-order filter chain smoothing the oscillator's first output.
  const double fpole = 10.0;
  A(2, 0) = fpole;
  A(2, 2) = -fpole;
  for (int i = 3; i < 18; ++i) {
    A(i, i - 1) = fpole;
    A(i, i) = -fpole;
  }
  spec.dynamics = ConstantDynamics{A, B};
  Eigen::VectorXd safe = Eigen::VectorXd::Constant(18, 2.0);
  safe[0] = safe[1] = 1.0;
  return finish(std::move(spec), 0.05, safe, 4e-3, 1000, 100);
}

SystemSpec make_helicopter() {
  SystemSpec spec;
  spec.name = "Helicopter";
  spec.n = 28;
  spec.m = 6;
  spec.dt = 0.01;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(28, 28);
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(28, 6);
  // Six actuated axes (position/velocity pairs) with light aerodynamic
  // damping, followed by 16 stable internal modes fed from the velocities.
  for (int i = 0; i < 6; ++i) {
    const int p = 2 * i, v = 2 * i + 1;
    A(p, v) = 1.0;
    A(v, v) = -0.2;
    B(v, i) = 1.0;
  }
  A(12, 1) = 0.5;
  A(12, 12) = -1.0;
  for (int i = 13; i < 28; ++i) {
    A(i, i - 1) = 0.5;
    A(i, i) = -1.0;
  }
  spec.dynamics = ConstantDynamics{A, B};
  Eigen::VectorXd safe(28);
  for (int i = 0; i < 12; ++i) safe[i] = (i % 2 == 0) ? 2.0 : 3.0;
  for (int i = 12; i < 28; ++i) safe[i] = 2.0;
  return finish(std::move(spec), 0.05, safe, 2e-3, 1000, 100);
}

SystemSpec base_benchmark(const std::string& name) {
  if (name == "Pendulum") return make_pendulum();
  if (name == "Cartpole") return make_cartpole();
  if (name == "DroneInWind") return make_drone_in_wind();
  if (name == "Carplatoon") return make_carplatoon();
  if (name == "Oscillator") return make_oscillator();
  if (name == "Helicopter") return make_helicopter();
  throw std::invalid_argument("unknown benchmark: " + name);
}

}  // namespace

std::vector<std::string> base_benchmark_names() {
  return {"Pendulum", "Cartpole", "DroneInWind",
          "Carplatoon", "Oscillator", "Helicopter"};
}

SystemSpec benchmark(const std::string& name) {
  auto dash = name.find('-');
  if (dash != std::string::npos && dash > 0) {
    int depth = 0;
    try {
      std::size_t used = 0;
      depth = std::stoi(name.substr(0, dash), &used);
      if (used != dash) depth = 0;
    } catch (const std::exception&) {
      depth = 0;
    }
    if (depth >= 2) {
      SystemSpec unit = base_benchmark(name.substr(dash + 1));
      std::vector<SystemSpec> copies(static_cast<std::size_t>(depth), unit);
      // Fixed per-benchmark seed keeps the registry deterministic.
      std::uint64_t seed = 0x5113;
      for (char c : name) seed = seed * 131 + static_cast<std::uint64_t>(c);
      SystemSpec stacked = stack(copies, seed);
      stacked.name = name;
      return stacked;
    }
    if (depth == 1) return base_benchmark(name.substr(dash + 1));
  }
  return base_benchmark(name);
}

}  // namespace shieldsynth

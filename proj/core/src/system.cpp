#include "shieldsynth/system.hpp"

#include <random>
#include <stdexcept>

namespace shieldsynth {

namespace {

// DroneInWind: planar drone with position, velocity and acceleration state.
// Wind [sin t, cos t] (scaled by params[0]) modulates how acceleration feeds
// the velocity rows, making A_t time-variant.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> drone_in_wind_at(
    const std::vector<double>& params, int t) {
  const double c = params.empty() ? 0.1 : params[0];
  const double damping = params.size() > 1 ? params[1] : 0.2;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(6, 6);
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(6, 2);
  // state: [px, py, vx, vy, ax, ay]
  A(0, 2) = 1.0;
  A(1, 3) = 1.0;
  A(2, 4) = 1.0 + c * std::sin(static_cast<double>(t));
  A(3, 5) = 1.0 + c * std::cos(static_cast<double>(t));
  A(2, 2) = -damping;
  A(3, 3) = -damping;
  A(4, 4) = -damping;
  A(5, 5) = -damping;
  B(4, 0) = 1.0;
  B(5, 1) = 1.0;
  return {A, B};
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> generator_at(
    const GeneratorDynamics& gen, int t) {
  if (gen.name == "drone-wind") return drone_in_wind_at(gen.params, t);
  throw std::invalid_argument("unknown dynamics generator: " + gen.name);
}

}  // namespace

void SystemSpec::validate() const {
  if (n <= 0 || m <= 0) throw std::invalid_argument("spec: n, m must be positive");
  if (dt < 0) throw std::invalid_argument("spec: dt must be non-negative");
  if (noise_runtime.dim() != n || noise_verified.dim() != n ||
      init_box.dim() != n || safe_box.dim() != n)
    throw std::invalid_argument("spec: box dimension mismatch");
  if (horizon_M <= 0) throw std::invalid_argument("spec: horizon_M must be positive");
  if (interval_k < 1 || interval_k > horizon_M)
    throw std::invalid_argument("spec: require 1 <= interval_k <= horizon_M");
  // Verified noise must strictly dominate runtime noise componentwise.
  if (!((noise_verified.lo().array() < noise_runtime.lo().array()).all() &&
        (noise_runtime.hi().array() < noise_verified.hi().array()).all()))
    throw std::invalid_argument(
        "spec: noise_verified must strictly dominate noise_runtime");
  if ((init_box.width().array() <= 0.0).any())
    throw std::invalid_argument("spec: init_box must have positive width");
  if (!init_box.subset_of(safe_box))
    throw std::invalid_argument("spec: init_box must be inside safe_box");
  if (const auto* tab = std::get_if<TableDynamics>(&dynamics)) {
    if (static_cast<int>(tab->entries.size()) < horizon_M)
      throw std::invalid_argument("spec: dynamics table shorter than horizon");
  }
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> matrices_at(const SystemSpec& spec,
                                                        int t) {
  if (const auto* c = std::get_if<ConstantDynamics>(&spec.dynamics))
    return {c->A, c->B};
  if (const auto* tab = std::get_if<TableDynamics>(&spec.dynamics)) {
    if (t < 0 || t >= static_cast<int>(tab->entries.size()))
      throw std::out_of_range("matrices_at: step beyond dynamics table");
    return tab->entries[static_cast<std::size_t>(t)];
  }
  return generator_at(std::get<GeneratorDynamics>(spec.dynamics), t);
}

Eigen::VectorXd step(const SystemSpec& spec, int t, const Eigen::VectorXd& s,
                     const Eigen::VectorXd& a, const Eigen::VectorXd& w) {
  if (s.size() != spec.n || a.size() != spec.m || w.size() != spec.n)
    throw std::invalid_argument("step: dimension mismatch");
  auto [A, B] = matrices_at(spec, t);
  return s + spec.dt * (A * s + B * a) + w;
}

Eigen::MatrixXd closed_loop_matrix(const SystemSpec& spec, int t,
                                   const Eigen::MatrixXd& K) {
  if (K.rows() != spec.m || K.cols() != spec.n)
    throw std::invalid_argument("closed_loop_matrix: gain shape mismatch");
  auto [A, B] = matrices_at(spec, t);
  return Eigen::MatrixXd::Identity(spec.n, spec.n) + spec.dt * (A + B * K);
}

namespace {

Eigen::VectorXd concat(const std::vector<Eigen::VectorXd>& parts) {
  Eigen::Index total = 0;
  for (const auto& p : parts) total += p.size();
  Eigen::VectorXd out(total);
  Eigen::Index at = 0;
  for (const auto& p : parts) {
    out.segment(at, p.size()) = p;
    at += p.size();
  }
  return out;
}

bool all_constant(const std::vector<SystemSpec>& specs) {
  for (const auto& s : specs)
    if (!std::holds_alternative<ConstantDynamics>(s.dynamics)) return false;
  return true;
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> block_diag_at(
    const std::vector<SystemSpec>& specs, int t, const Eigen::VectorXd& pb_diag,
    int total_n, int total_m) {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(total_n, total_n);
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(total_n, total_m);
  int rn = 0, rm = 0;
  for (const auto& s : specs) {
    auto [Ai, Bi] = matrices_at(s, t);
    A.block(rn, rn, s.n, s.n) = Ai;
    B.block(rn, rm, s.n, s.m) = Bi;
    rn += s.n;
    rm += s.m;
  }
  B = B * pb_diag.asDiagonal();
  return {A, B};
}

}  // namespace

SystemSpec stack(const std::vector<SystemSpec>& specs, std::uint64_t perturb_seed) {
  if (specs.size() < 2)
    throw std::invalid_argument("stack: need at least two systems");
  const double dt = specs.front().dt;
  int horizon = specs.front().horizon_M;
  int k = specs.front().interval_k;
  for (const auto& s : specs) {
    if (s.dt != dt) throw std::invalid_argument("stack: incompatible dt");
    horizon = std::min(horizon, s.horizon_M);
    k = std::min(k, s.interval_k);
  }

  int total_n = 0, total_m = 0;
  for (const auto& s : specs) {
    total_n += s.n;
    total_m += s.m;
  }

  std::mt19937_64 rng(perturb_seed);
  std::uniform_real_distribution<double> perturb(0.95, 1.05);
  Eigen::VectorXd pb_diag(total_m);
  for (int i = 0; i < total_m; ++i) pb_diag[i] = perturb(rng);

  std::vector<Eigen::VectorXd> safe_lo, safe_hi, init_lo, init_hi;
  std::vector<Eigen::VectorXd> nr_lo, nr_hi, nv_lo, nv_hi;
  for (const auto& s : specs) {
    Eigen::VectorXd pl(s.n), pu(s.n);
    for (int i = 0; i < s.n; ++i) {
      double a = perturb(rng), b = perturb(rng);
      // keep the perturbed lower bound below the perturbed upper bound
      while (a * s.safe_box.lo()[i] >= b * s.safe_box.hi()[i]) {
        a = perturb(rng);
        b = perturb(rng);
      }
      pl[i] = a;
      pu[i] = b;
    }
    safe_lo.push_back(pl.cwiseProduct(s.safe_box.lo()));
    safe_hi.push_back(pu.cwiseProduct(s.safe_box.hi()));
    init_lo.push_back(s.init_box.lo());
    init_hi.push_back(s.init_box.hi());
    nr_lo.push_back(s.noise_runtime.lo());
    nr_hi.push_back(s.noise_runtime.hi());
    nv_lo.push_back(s.noise_verified.lo());
    nv_hi.push_back(s.noise_verified.hi());
  }

  SystemSpec out;
  out.name = std::to_string(specs.size()) + "-stacked";
  out.n = total_n;
  out.m = total_m;
  out.dt = dt;
  out.horizon_M = horizon;
  out.interval_k = k;
  out.noise_dist = specs.front().noise_dist;
  out.noise_runtime = IntervalBox(concat(nr_lo), concat(nr_hi));
  out.noise_verified = IntervalBox(concat(nv_lo), concat(nv_hi));
  out.init_box = IntervalBox(concat(init_lo), concat(init_hi));
  out.safe_box = IntervalBox(concat(safe_lo), concat(safe_hi));
  out.stack_seed = perturb_seed;
  for (const auto& s : specs) {
    out.block_n.insert(out.block_n.end(), s.block_n.begin(), s.block_n.end());
    out.block_m.insert(out.block_m.end(), s.block_m.begin(), s.block_m.end());
  }

  if (all_constant(specs)) {
    auto [A, B] = block_diag_at(specs, 0, pb_diag, total_n, total_m);
    out.dynamics = ConstantDynamics{A, B};
  } else {
    TableDynamics table;
    table.entries.reserve(static_cast<std::size_t>(horizon) + 1);
    for (int t = 0; t <= horizon; ++t)
      table.entries.push_back(block_diag_at(specs, t, pb_diag, total_n, total_m));
    out.dynamics = std::move(table);
  }

  // The stacked safe box may clip the concatenated init box in a dimension
  // where the lower perturbation moved inward; intersect to keep init valid.
  Eigen::VectorXd il = out.init_box.lo().cwiseMax(out.safe_box.lo());
  Eigen::VectorXd ih = out.init_box.hi().cwiseMin(out.safe_box.hi());
  out.init_box = IntervalBox(il, ih);

  out.validate();
  return out;
}

}  // namespace shieldsynth

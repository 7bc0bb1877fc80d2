#include "shieldsynth/search.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace shieldsynth {

namespace {

constexpr double kTieEps = 1e-12;
constexpr double kVerifiedEps = 1e-9;

int num_segments(const SystemSpec& spec) {
  return (spec.horizon_M + spec.interval_k - 1) / spec.interval_k;
}

struct StoredBox {
  IntervalBox box;
  bool alive = true;
};

class Dfs {
public:
  Dfs(const SystemSpec& spec, const ControllerFamily& family,
      const SearchOptions& options)
      : spec_(spec), family_(family), options_(options),
        segments_(num_segments(spec)),
        time_invariant_(std::holds_alternative<ConstantDynamics>(spec.dynamics)) {
    all_rsets_.resize(static_cast<std::size_t>(segments_));
  }

  SearchResult run() {
    path_.assign(static_cast<std::size_t>(segments_), 0);
    boundary_boxes_.clear();
    boundary_boxes_.push_back({0, spec_.init_box});
    per_step_.clear();
    recurse(0, ReachSetTuple::initial(spec_.init_box, spec_.noise_verified), 0.0);
    result_.verified = result_.L_opt >= spec_.horizon_M - kVerifiedEps;
    return result_;
  }

private:
  bool budget_exhausted() const {
    if (result_.stats.selectors_evaluated >= options_.selector_budget) return true;
    if (options_.timeout_secs > 0.0 &&
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
                .count() > options_.timeout_secs)
      return true;
    return false;
  }

  // Returns true when the search should stop entirely.
  bool recurse(int depth, const ReachSetTuple& tuple, double L) {
    if (depth == segments_) {
      ++result_.stats.selectors_evaluated;
      if (L > result_.L_opt + kTieEps || result_.per_step.empty()) {
        result_.L_opt = L;
        result_.phi_opt.choices = path_;
        result_.per_step = per_step_;
      }
      if (L >= spec_.horizon_M - kVerifiedEps) return true;
      return budget_exhausted();
    }

    const int seg_start = depth * spec_.interval_k;
    const int m = std::min(spec_.horizon_M, seg_start + spec_.interval_k);

    for (int c = 0; c < static_cast<int>(family_.gains.size()); ++c) {
      path_[static_cast<std::size_t>(depth)] = c;
      ++result_.stats.nodes_expanded;

      ReachSetTuple cur = tuple;
      double seg_L = L;
      const std::size_t per_step_mark = per_step_.size();
      for (int t = seg_start; t < m; ++t) {
        cur = propagate(cur, closed_loop_matrix(spec_, t, family_.gains[c]));
        SafetyBound sb = safety_lower_bound(cur, spec_.safe_box, spec_.noise_dist);
        seg_L += sb.p_hat;
        per_step_.push_back(sb);
      }
      const IntervalBox box = over_approx(cur);

      bool pruned = false;
      if (options_.enable_pruning) {
        // Strategy 1: the accumulated unsafety already exceeds the best
        // selector's slack; no descendant can improve on L_opt.
        if (m - seg_L > spec_.horizon_M - result_.L_opt + kVerifiedEps) {
          ++result_.stats.prunes_strategy1;
          pruned = true;
        }

        // Strategy 2: dominance between selectors sharing boundary step m.
        if (!pruned) {
          auto& store = all_rsets_[static_cast<std::size_t>(depth)];
          bool duplicate = false;
          for (auto& entry : store) {
            if (!entry.alive) continue;
            if (entry.box.strict_subset_of(box)) {
              ++result_.stats.prunes_strategy2;
              pruned = true;
              break;
            }
            if (box.strict_subset_of(entry.box)) {
              entry.alive = false;  // its subtree has already been explored
            } else if (box == entry.box) {
              duplicate = true;  // keep the earlier-found selector's box
            }
          }
          if (!pruned && !duplicate) store.push_back({box, true});
        }

        // Strategy 3: invariant of the reachable set along this selector.
        if (!pruned && time_invariant_ && seg_L >= m - kVerifiedEps) {
          for (const auto& [t_prev, prev_box] : boundary_boxes_) {
            if (!box.subset_of(prev_box)) continue;
            Selector phi_inv = build_periodic(depth, t_prev);
            if (certify_invariant(prev_box, t_prev, m) &&
                adopt_verified(phi_inv)) {
              ++result_.stats.prunes_strategy3;
              return true;
            }
          }
        }
      }

      if (!pruned) {
        boundary_boxes_.push_back({m, box});
        const bool stop = recurse(depth + 1, cur, seg_L);
        boundary_boxes_.pop_back();
        if (stop) {
          per_step_.resize(per_step_mark);
          return true;
        }
      }
      per_step_.resize(per_step_mark);
      if (budget_exhausted()) return true;
    }
    return false;
  }

  // Selector that keeps the prefix before the boundary at step t_prev and
  // repeats the segment choices between t_prev and the current boundary.
  Selector build_periodic(int depth, int t_prev) const {
    const int seg_prev = t_prev / spec_.interval_k;
    Selector phi;
    phi.choices.assign(path_.begin(), path_.begin() + depth + 1);
    const int period = depth + 1 - seg_prev;
    while (static_cast<int>(phi.choices.size()) < segments_)
      phi.choices.push_back(
          phi.choices[static_cast<std::size_t>(seg_prev + (static_cast<int>(phi.choices.size()) - seg_prev) % period)]);
    return phi;
  }

  // Sound inductive closure: push the candidate invariant box through one
  // period of the repeated suffix with per-step interval propagation and
  // fresh noise, requiring every intermediate box to stay safe and the
  // period-end box to map back into the start box.
  bool certify_invariant(const IntervalBox& start_box, int t_prev, int m) {
    IntervalBox x = start_box;
    for (int t = t_prev; t < m; ++t) {
      const int seg = t / spec_.interval_k;
      const auto& K = family_.gains[static_cast<std::size_t>(
          path_[static_cast<std::size_t>(seg)])];
      x = interval_map(closed_loop_matrix(spec_, t, K), x) + spec_.noise_verified;
      if (!x.subset_of(spec_.safe_box)) return false;
    }
    return x.subset_of(start_box);
  }

  // Independent recomputation guards the certificate before adoption.
  bool adopt_verified(const Selector& phi) {
    auto bounds = evaluate_selector(spec_, family_, phi);
    double L = 0.0;
    for (const auto& sb : bounds) L += sb.p_hat;
    if (L < spec_.horizon_M - kVerifiedEps) return false;
    result_.L_opt = L;
    result_.phi_opt = phi;
    result_.per_step = std::move(bounds);
    return true;
  }

  const SystemSpec& spec_;
  const ControllerFamily& family_;
  const SearchOptions& options_;
  const int segments_;
  const bool time_invariant_;

  std::vector<int> path_;
  std::vector<SafetyBound> per_step_;
  std::vector<std::pair<int, IntervalBox>> boundary_boxes_;
  std::vector<std::vector<StoredBox>> all_rsets_;  // indexed by segment depth
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
  SearchResult result_;
};

}  // namespace

double selector_count(int family_size, int M, int k) {
  const int segments = (M + k - 1) / k;
  return std::pow(static_cast<double>(family_size), segments);
}

std::vector<SafetyBound> evaluate_selector(const SystemSpec& spec,
                                           const ControllerFamily& family,
                                           const Selector& phi) {
  const int segments = num_segments(spec);
  if (static_cast<int>(phi.choices.size()) != segments)
    throw std::invalid_argument("evaluate_selector: selector length mismatch");
  for (int c : phi.choices)
    if (c < 0 || c >= static_cast<int>(family.gains.size()))
      throw std::invalid_argument("evaluate_selector: index out of range");

  std::vector<SafetyBound> out;
  out.reserve(static_cast<std::size_t>(spec.horizon_M));
  ReachSetTuple cur = ReachSetTuple::initial(spec.init_box, spec.noise_verified);
  for (int t = 0; t < spec.horizon_M; ++t) {
    const int seg = t / spec.interval_k;
    const auto& K = family.gains[static_cast<std::size_t>(
        phi.choices[static_cast<std::size_t>(seg)])];
    cur = propagate(cur, closed_loop_matrix(spec, t, K));
    out.push_back(safety_lower_bound(cur, spec.safe_box, spec.noise_dist));
  }
  return out;
}

SearchResult synthesize(const SystemSpec& spec, const ControllerFamily& family,
                        const SearchOptions& options) {
  if (family.gains.empty())
    throw std::invalid_argument("synthesize: empty controller family");
  for (const auto& K : family.gains)
    if (K.rows() != spec.m || K.cols() != spec.n)
      throw std::invalid_argument("synthesize: gain shape incompatible with spec");
  Dfs dfs(spec, family, options);
  return dfs.run();
}

}  // namespace shieldsynth

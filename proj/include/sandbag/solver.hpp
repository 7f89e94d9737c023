#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <unordered_map>
#include <vector>

#include "sandbag/model.hpp"
#include "sandbag/policy.hpp"

// Exact finite-horizon backward induction for the survival-constrained
// bandit. Values are kept as (nu, P_surv, w) parts; the post-evaluation
// continuation T'*mu_a1 is applied only on materialization, so arm
// comparisons stay well-conditioned even for T' ~ 1e200:
//
//   v(t, h) = nu(t, h) + P_surv(t, h) * T' * mu_a1
//   dq      = d(nu)    + T' * mu_a1 * d(P_surv)
//
// nu is the evaluation-period value-to-go, P_surv the probability of
// finishing the evaluation without busting, and w the expected return
// restricted to survival events (nu = w - h * (1 - P_surv)).

namespace sandbag {

struct ValueParts {
  double nu = 0.0;
  double surv = 0.0;
  double w = 0.0;
};

// One dynamics step: clipped at the threshold per the survival constraint.
// Busting forfeits the accumulated level (reward -u*g); Bust is absorbing.
struct LevelStep {
  DangerLevel next;
  std::int64_t reward_units;  // clipped reward in grid units
};

inline LevelStep transition_units(DangerLevel level, std::int64_t score_units,
                                  std::int64_t threshold_units) {
  if (level.is_bust()) return {DangerLevel::bust(), 0};
  const std::int64_t next = level.units() + score_units;
  if (next < threshold_units) return {DangerLevel::live(next), score_units};
  return {DangerLevel::bust(), -level.units()};
}

inline std::pair<DangerLevel, double> transition(DangerLevel level, Decimal score,
                                                 const Instance& instance,
                                                 const EvalConfig& config) {
  const std::int64_t h_units = instance.threshold_units(config);
  LevelStep step = transition_units(level, instance.units_of(score), h_units);
  return {step.next, static_cast<double>(step.reward_units) * instance.quantum_value()};
}

class Solution {
 public:
  friend Solution solve(const Instance& instance, const EvalConfig& config);

  const Instance& instance() const { return instance_; }
  const EvalConfig& config() const { return config_; }
  int horizon() const { return config_.T; }
  double terminal_scale() const { return terminal_scale_; }
  std::int64_t threshold_units() const { return threshold_units_; }

  // Live levels covered by the tables, ascending in grid units. This is the
  // transition-closed superset of every per-t reachable set.
  const std::vector<std::int64_t>& live_levels() const { return levels_; }

  int policy_arm(int t, DangerLevel level) const {
    check_time(t, horizon());
    return policy_[(t - 1) * levels_.size() + live_index(level)];
  }

  // Value parts under the optimal policy; t may be T+1 (the boundary row).
  ValueParts parts(int t, DangerLevel level) const {
    check_time(t, horizon() + 1);
    if (level.is_bust()) return {};
    return parts_[(t - 1) * levels_.size() + live_index(level)];
  }

  // Value parts with the first action fixed and pi* afterwards.
  ValueParts survival_stats(int t, DangerLevel level, std::size_t arm) const {
    check_time(t, horizon());
    if (arm >= instance_.num_arms()) throw UnknownState("no such arm");
    if (level.is_bust()) return {};
    const std::size_t stride = instance_.num_arms();
    return action_parts_[((t - 1) * levels_.size() + live_index(level)) * stride + arm];
  }

  double materialize_value(int t, DangerLevel level) const {
    if (level.is_bust()) {
      check_time(t, horizon() + 1);
      return 0.0;
    }
    ValueParts p = parts(t, level);
    return p.nu + p.surv * terminal_scale_;
  }

  double materialize_action_value(int t, DangerLevel level, std::size_t arm) const {
    ValueParts p = survival_stats(t, level, arm);
    return p.nu + p.surv * terminal_scale_;
  }

  Policy policy() const {
    Policy p;
    for (int t = 1; t <= horizon(); ++t) {
      for (std::size_t l = 0; l < levels_.size(); ++l) {
        p.set(t, levels_[l], policy_[(t - 1) * levels_.size() + l]);
      }
    }
    return p;
  }

  bool has_level(std::int64_t units) const {
    return index_.find(units) != index_.end();
  }

 private:
  static void check_time(int t, int max_t) {
    if (t < 1 || t > max_t) {
      throw UnknownState("time index " + std::to_string(t) + " outside 1.." +
                         std::to_string(max_t));
    }
  }

  std::size_t live_index(DangerLevel level) const {
    auto it = index_.find(level.units());
    if (it == index_.end()) {
      throw UnknownState("danger level " + std::to_string(level.units()) +
                         " grid units is not in the solved level set");
    }
    return it->second;
  }

  Instance instance_;
  EvalConfig config_;
  std::int64_t threshold_units_ = 0;
  double terminal_scale_ = 0.0;
  std::vector<std::int64_t> levels_;
  std::unordered_map<std::int64_t, std::size_t> index_;
  std::vector<ValueParts> parts_;         // (T+1) x L, row T+1 is the boundary
  std::vector<int> policy_;               // T x L
  std::vector<ValueParts> action_parts_;  // T x L x A
};

namespace detail {

// Fixpoint closure of {0} under surviving score additions. Closed under the
// one-step dynamics, so every successor a table row needs is itself a row
// (the depth-T reachable set is not: its frontier can have successors one
// step deeper).
inline std::vector<std::int64_t> closed_level_set(const Instance& instance,
                                                  std::int64_t threshold_units) {
  std::vector<std::int64_t> steps;
  for (std::size_t i = 0; i < instance.num_outcomes(); ++i) {
    std::int64_t s = instance.outcome_units(i);
    if (s > 0) steps.push_back(s);
  }
  std::sort(steps.begin(), steps.end());
  steps.erase(std::unique(steps.begin(), steps.end()), steps.end());

  std::vector<bool> seen_flags;
  std::vector<std::int64_t> order{0};
  std::unordered_map<std::int64_t, bool> seen{{0, true}};
  for (std::size_t head = 0; head < order.size(); ++head) {
    for (std::int64_t s : steps) {
      std::int64_t v = order[head] + s;
      if (v < threshold_units && !seen[v]) {
        seen[v] = true;
        order.push_back(v);
      }
    }
  }
  std::sort(order.begin(), order.end());
  return order;
}

}  // namespace detail

inline Solution solve(const Instance& instance, const EvalConfig& config) {
  config.validate();
  Solution sol;
  sol.instance_ = instance;
  sol.config_ = config;
  sol.threshold_units_ = instance.threshold_units(config);
  sol.terminal_scale_ = config.T_prime * instance.mean(0);
  if (!std::isfinite(sol.terminal_scale_)) {
    throw InvalidInstance("post-evaluation value T' * mu_a1 overflows");
  }

  sol.levels_ = detail::closed_level_set(instance, sol.threshold_units_);
  const std::size_t L = sol.levels_.size();
  for (std::size_t l = 0; l < L; ++l) sol.index_[sol.levels_[l]] = l;

  const int T = config.T;
  const std::size_t A = instance.num_arms();
  const double g = instance.quantum_value();

  sol.parts_.assign((T + 1) * L, ValueParts{});
  sol.policy_.assign(T * L, 0);
  sol.action_parts_.assign(T * L * A, ValueParts{});

  // Boundary t = T+1: survived the evaluation; the post-evaluation value
  // enters only through terminal_scale on materialization.
  for (std::size_t l = 0; l < L; ++l) {
    sol.parts_[T * L + l] = {0.0, 1.0, 0.0};
  }

  for (int t = T; t >= 1; --t) {
    const ValueParts* next_row = &sol.parts_[t * L];
    for (std::size_t l = 0; l < L; ++l) {
      const std::int64_t u = sol.levels_[l];
      int best = -1;
      ValueParts best_parts;
      for (std::size_t a = 0; a < A; ++a) {
        ValueParts ap;
        double bust_prob = 0.0;
        for (const ScorePmf::Entry& e : instance.score_pmf(a).entries()) {
          const std::int64_t next = u + e.units;
          if (next < sol.threshold_units_) {
            const ValueParts& np = next_row[sol.index_.find(next)->second];
            const double s = e.score.value();
            ap.surv += e.prob * np.surv;
            ap.nu += e.prob * (s + np.nu);
            ap.w += e.prob * (s * np.surv + np.w);
          } else {
            bust_prob += e.prob;
          }
        }
        ap.nu -= static_cast<double>(u) * g * bust_prob;
        sol.action_parts_[((t - 1) * L + l) * A + a] = ap;

        if (best < 0) {
          best = 0;
          best_parts = ap;
          continue;
        }
        // Pairwise comparison; never materializes two huge values.
        const double dq = (ap.nu - best_parts.nu) +
                          sol.terminal_scale_ * (ap.surv - best_parts.surv);
        if (dq > 0.0 || (dq == 0.0 && ap.surv > best_parts.surv)) {
          best = static_cast<int>(a);
          best_parts = ap;
        }
      }
      sol.policy_[(t - 1) * L + l] = best;
      sol.parts_[(t - 1) * L + l] = best_parts;
    }
  }
  return sol;
}

// Maximum normalized residuals of the structural identities over the whole
// table. Thresholds are enforced by callers; this only measures.
struct IdentityReport {
  double bellman = 0.0;        // value recursion with materialized successors
  double decomposition = 0.0;  // v = nu + P_surv * T' * mu_a1 vs direct table
  double telescoping = 0.0;    // nu = w - h * (1 - P_surv)
  double bust_value = 0.0;     // v(t, Bust) = 0
  double optimality = 0.0;     // v = max_a materialized q, attained by policy

  double max_residual() const {
    return std::max({bellman, decomposition, telescoping, bust_value, optimality});
  }
};

inline IdentityReport verify_identities(const Solution& sol) {
  const Instance& inst = sol.instance();
  const int T = sol.horizon();
  const auto& levels = sol.live_levels();
  const std::size_t L = levels.size();
  const std::size_t A = inst.num_arms();
  const double g = inst.quantum_value();
  const double ts = sol.terminal_scale();

  IdentityReport rep;

  // Independent re-materialization: run the value recursion forward from the
  // boundary on plain scalars, under the solved policy.
  std::vector<double> direct((T + 1) * L, 0.0);
  for (std::size_t l = 0; l < L; ++l) direct[T * L + l] = ts;

  for (int t = T; t >= 1; --t) {
    for (std::size_t l = 0; l < L; ++l) {
      const std::int64_t u = levels[l];
      const DangerLevel level = DangerLevel::live(u);
      const int arm = sol.policy_arm(t, level);

      double exp_clipped = 0.0;     // E[R~] at (t, u) under the policy arm
      double succ_direct = 0.0;     // sum_h' P(h'|u,a) * direct(t+1, h')
      double succ_material = 0.0;   // same with materialized solution values
      for (const ScorePmf::Entry& e : inst.score_pmf(arm).entries()) {
        const std::int64_t next = u + e.units;
        if (next < sol.threshold_units()) {
          exp_clipped += e.prob * e.score.value();
          const std::size_t nl =
              std::lower_bound(levels.begin(), levels.end(), next) - levels.begin();
          succ_direct += e.prob * direct[t * L + nl];
          succ_material += e.prob * sol.materialize_value(t + 1, DangerLevel::live(next));
        } else {
          exp_clipped -= e.prob * static_cast<double>(u) * g;
        }
      }
      direct[(t - 1) * L + l] = exp_clipped + succ_direct;

      const double v = sol.materialize_value(t, level);
      const double scale_v = 1.0 + std::abs(v);
      rep.bellman = std::max(rep.bellman,
                             std::abs(v - (exp_clipped + succ_material)) / scale_v);

      const double vd = direct[(t - 1) * L + l];
      rep.decomposition =
          std::max(rep.decomposition, std::abs(vd - v) / (1.0 + std::abs(vd)));

      const ValueParts p = sol.parts(t, level);
      const double h = static_cast<double>(u) * g;
      rep.telescoping = std::max(
          rep.telescoping, std::abs(p.nu - (p.w - h * (1.0 - p.surv))) / scale_v);

      double max_q = -std::numeric_limits<double>::infinity();
      for (std::size_t a = 0; a < A; ++a) {
        max_q = std::max(max_q, sol.materialize_action_value(t, level, a));
      }
      rep.optimality = std::max(
          rep.optimality,
          std::max(std::abs(v - max_q),
                   std::abs(sol.materialize_action_value(t, level, arm) - max_q)) /
              scale_v);
    }
    rep.bust_value = std::max(rep.bust_value,
                              std::abs(sol.materialize_value(t, DangerLevel::bust())));
  }
  return rep;
}

}  // namespace sandbag

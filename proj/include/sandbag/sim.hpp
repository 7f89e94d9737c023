#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "sandbag/model.hpp"
#include "sandbag/policy.hpp"
#include "sandbag/rng.hpp"
#include "sandbag/solver.hpp"

// Seeded Monte Carlo generation of evaluation-period trajectories under any
// deterministic level-indexed policy. The recorded observables are the raw
// test scores R(Y), not the clipped rewards; clipped rewards are recomputed
// on demand for the telescoping checks.

namespace sandbag {

struct Trajectory {
  std::int64_t id = 0;
  std::vector<std::int64_t> score_units;  // raw scores r_1..r_tau, grid units
  std::vector<int> actions;               // arm indices, hidden from detectors
  std::vector<DangerLevel> levels;        // level after each step
  int tau = 0;                            // earlier of T and the busting step
  bool busted = false;
  double realized_return = 0.0;           // sum of scores if survived, else 0

  std::vector<double> scores(const Instance& instance) const {
    std::vector<double> out;
    out.reserve(score_units.size());
    for (std::int64_t u : score_units) out.push_back(instance.score_of_units(u).value());
    return out;
  }
};

struct SimBatch {
  EvalConfig config;
  std::string policy_id;
  std::uint64_t master_seed = 0;
  std::vector<Trajectory> trajectories;
};

// Draws one trajectory as a pure function of (master_seed, id).
inline Trajectory simulate_one(const Instance& instance, const EvalConfig& config,
                               const Policy& policy, std::uint64_t master_seed,
                               std::int64_t id) {
  const std::int64_t h_units = instance.threshold_units(config);
  const double g = instance.quantum_value();
  SplitMix64 rng = SplitMix64::stream(master_seed, static_cast<std::uint64_t>(id));

  Trajectory traj;
  traj.id = id;
  DangerLevel level = DangerLevel::live(0);
  double total = 0.0;
  for (int t = 1; t <= config.T; ++t) {
    const int arm = policy.arm_at(t, level);
    const auto& pmf = instance.arm_pmf(arm);
    const double r = rng.uniform01();
    double cdf = 0.0;
    std::size_t outcome = pmf.size() - 1;
    for (std::size_t y = 0; y < pmf.size(); ++y) {
      cdf += pmf[y].value;
      if (r < cdf) {
        outcome = y;
        break;
      }
    }
    const std::int64_t s = instance.outcome_units(outcome);
    traj.actions.push_back(arm);
    traj.score_units.push_back(s);
    total += static_cast<double>(s) * g;

    level = transition_units(level, s, h_units).next;
    traj.levels.push_back(level);
    traj.tau = t;
    if (level.is_bust()) {
      traj.busted = true;
      break;
    }
  }
  traj.realized_return = traj.busted ? 0.0 : total;
  return traj;
}

inline SimBatch simulate(const Instance& instance, const EvalConfig& config,
                         const Policy& policy, std::uint64_t master_seed,
                         std::int64_t n, std::string policy_id = "") {
  config.validate();
  SimBatch batch;
  batch.config = config;
  batch.policy_id = std::move(policy_id);
  batch.master_seed = master_seed;
  batch.trajectories.reserve(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    batch.trajectories.push_back(simulate_one(instance, config, policy, master_seed, i));
  }
  return batch;
}

// Honest incompetence: always play the arm with the lowest mean (the last
// index under the descending-mean ordering).
inline Policy honest_policy(const Instance& instance) {
  return Policy::constant(static_cast<int>(instance.num_arms()) - 1);
}

struct ValueEstimate {
  double mc_estimate = 0.0;
  double exact = 0.0;
  double z = 0.0;  // |mc - exact| / standard error of the mean
};

// Monte Carlo check of the materialized value at (1, Live(0)). The batch
// must have been generated under the solution's policy. Moments are
// accumulated on values scaled by the terminal magnitude so T' ~ 1e200
// cannot overflow the variance.
inline ValueEstimate empirical_value(const SimBatch& batch, const Solution& solution) {
  const std::size_t n = batch.trajectories.size();
  if (n == 0) throw EmptyBatch("empirical_value needs at least one trajectory");

  const double ts = solution.terminal_scale();
  const double scale = 1.0 + std::abs(ts);
  double sum = 0.0;
  double sum_scaled = 0.0;
  double sumsq_scaled = 0.0;
  for (const Trajectory& traj : batch.trajectories) {
    const double value = traj.realized_return + (traj.busted ? 0.0 : ts);
    sum += value;
    const double scaled = value / scale;
    sum_scaled += scaled;
    sumsq_scaled += scaled * scaled;
  }

  ValueEstimate est;
  est.mc_estimate = sum / static_cast<double>(n);
  est.exact = solution.materialize_value(1, DangerLevel::live(0));

  const double mean_scaled = sum_scaled / static_cast<double>(n);
  double var_scaled =
      (sumsq_scaled - static_cast<double>(n) * mean_scaled * mean_scaled) /
      std::max<double>(1.0, static_cast<double>(n) - 1.0);
  var_scaled = std::max(var_scaled, 0.0);
  const double se_scaled = std::sqrt(var_scaled / static_cast<double>(n));
  const double diff_scaled = std::abs(est.mc_estimate - est.exact) / scale;
  est.z = se_scaled == 0.0 ? (diff_scaled == 0.0 ? 0.0
                                                 : std::numeric_limits<double>::infinity())
                           : diff_scaled / se_scaled;
  return est;
}

// Fraction of trajectories that finished the evaluation without busting.
inline double survival_fraction(const SimBatch& batch) {
  if (batch.trajectories.empty()) return 0.0;
  std::size_t alive = 0;
  for (const Trajectory& t : batch.trajectories) alive += t.busted ? 0 : 1;
  return static_cast<double>(alive) / static_cast<double>(batch.trajectories.size());
}

}  // namespace sandbag

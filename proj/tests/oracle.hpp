#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "sandbag/model.hpp"
#include "sandbag/rng.hpp"

// Independent oracle for tiny instances: the optimal value is the maximum
// over ALL deterministic (t, level) -> arm maps, each evaluated by full
// outcome-path enumeration of the expected clipped return. No Bellman
// recursion, no value decomposition, no tie-breaking — nothing shared with
// the solver beyond the instance itself.

namespace oracle {

using sandbag::DangerLevel;
using sandbag::EvalConfig;
using sandbag::Instance;

using StateKey = std::pair<int, std::int64_t>;  // (t, level units)
using Assignment = std::map<StateKey, int>;

// Decision points actually reachable forward from (1, Live(0)).
inline std::vector<StateKey> decision_points(const Instance& inst,
                                             const EvalConfig& config) {
  const std::int64_t h_units = inst.threshold_units(config);
  std::vector<StateKey> points;
  std::set<std::int64_t> frontier{0};
  for (int t = 1; t <= config.T; ++t) {
    for (std::int64_t u : frontier) points.emplace_back(t, u);
    std::set<std::int64_t> next;
    for (std::int64_t u : frontier) {
      for (std::size_t y = 0; y < inst.num_outcomes(); ++y) {
        const std::int64_t v = u + inst.outcome_units(y);
        if (v < h_units) next.insert(v);
      }
    }
    frontier = std::move(next);
  }
  return points;
}

// Expected clipped return of one fixed assignment from (t, units), by
// recursive enumeration over outcome paths.
inline double eval_assignment(const Instance& inst, const EvalConfig& config,
                              const Assignment& plan, std::int64_t h_units,
                              int t, std::int64_t units) {
  if (t > config.T) return config.T_prime * inst.mean(0);  // survived
  const int arm = plan.at({t, units});
  const double g = inst.quantum_value();
  double value = 0.0;
  for (std::size_t y = 0; y < inst.num_outcomes(); ++y) {
    const double p = inst.arm_pmf(arm)[y].value;
    if (p == 0.0) continue;
    const std::int64_t s = inst.outcome_units(y);
    if (units + s < h_units) {
      value += p * (static_cast<double>(s) * g +
                    eval_assignment(inst, config, plan, h_units, t + 1, units + s));
    } else {
      value += p * (-static_cast<double>(units) * g);  // bust forfeits the level
    }
  }
  return value;
}

inline double count_assignments(const Instance& inst, const EvalConfig& config) {
  double count = 1.0;
  const double arms = static_cast<double>(inst.num_arms());
  for (std::size_t i = 0; i < decision_points(inst, config).size(); ++i) {
    count *= arms;
    if (count > 1e12) break;
  }
  return count;
}

inline double optimal_value(const Instance& inst, const EvalConfig& config) {
  const std::int64_t h_units = inst.threshold_units(config);
  const std::vector<StateKey> points = decision_points(inst, config);
  const int arms = static_cast<int>(inst.num_arms());

  Assignment plan;
  for (const StateKey& key : points) plan[key] = 0;

  double best = eval_assignment(inst, config, plan, h_units, 1, 0);
  // Odometer over all |A|^N assignments.
  while (true) {
    std::size_t i = 0;
    for (; i < points.size(); ++i) {
      int& slot = plan[points[i]];
      if (++slot < arms) break;
      slot = 0;
    }
    if (i == points.size()) break;
    best = std::max(best, eval_assignment(inst, config, plan, h_units, 1, 0));
  }
  return best;
}

// Random tiny instance within the oracle's tractable envelope:
// |arms| <= 3, |outcomes| <= 3, T <= 4, assignment count capped.
struct TinyCase {
  Instance instance;
  EvalConfig config;
};

inline TinyCase random_tiny_case(sandbag::SplitMix64& rng) {
  using sandbag::Decimal;
  using sandbag::InstanceSpec;
  using sandbag::Probability;

  for (;;) {
    const int n_outcomes = 2 + static_cast<int>(rng() % 2);  // 2..3
    const int n_arms = 2 + static_cast<int>(rng() % 2);      // 2..3

    InstanceSpec spec;
    for (int y = 0; y < n_outcomes; ++y) {
      spec.outcomes.push_back(
          {"y" + std::to_string(y),
           Decimal::from_micro(static_cast<std::int64_t>(rng() % 6) * 1'000'000)});
    }
    for (int a = 0; a < n_arms; ++a) {
      InstanceSpec::ArmIn arm;
      arm.name = "arm" + std::to_string(a);
      std::vector<std::int64_t> weights(n_outcomes);
      std::int64_t total = 0;
      for (auto& w : weights) {
        w = 1 + static_cast<std::int64_t>(rng() % 99);
        total += w;
      }
      for (std::int64_t w : weights) {
        arm.pmf.push_back(Probability::from_double(static_cast<double>(w) /
                                                   static_cast<double>(total)));
      }
      spec.arms.push_back(std::move(arm));
    }

    EvalConfig config;
    config.T = 1 + static_cast<int>(rng() % 4);  // 1..4
    const double tprimes[] = {0.0, 0.5, 1.0, 3.0, 10.0};
    config.T_prime = tprimes[rng() % 5];
    config.h_star =
        Decimal::from_micro(static_cast<std::int64_t>(1 + rng() % 8) * 1'000'000);
    spec.eval = config;

    try {
      Instance inst = sandbag::build_instance(spec);
      if (count_assignments(inst, config) > 30'000.0) continue;
      return {std::move(inst), config};
    } catch (const sandbag::DuplicateMean&) {
      continue;  // resample; equal means are rejected by construction
    }
  }
}

}  // namespace oracle

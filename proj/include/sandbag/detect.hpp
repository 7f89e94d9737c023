#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "sandbag/model.hpp"
#include "sandbag/policy.hpp"
#include "sandbag/solver.hpp"

// Likelihood-ratio sandbagging test: log-likelihoods of observed score
// trajectories under hypothesized deterministic policies, LLR statistics,
// critical regions {llr > b}, and ROC/AUC. All likelihood arithmetic is in
// log space; zero probabilities become +-inf sentinels instead of underflow.

namespace sandbag {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Log f(r_1..r_tau) under `policy`: the danger-level sequence is
// reconstructed from the observed scores alone, and accumulation stops at
// the reconstructed stopping time. -inf when a step's score is outside the
// prescribed arm's support.
inline double log_likelihood_units(const std::vector<std::int64_t>& score_units,
                                   const Policy& policy, const Instance& instance,
                                   const EvalConfig& config) {
  const std::int64_t h_units = instance.threshold_units(config);
  DangerLevel level = DangerLevel::live(0);
  double acc = 0.0;
  bool impossible = false;
  const int steps = static_cast<int>(std::min<std::size_t>(
      score_units.size(), static_cast<std::size_t>(config.T)));
  for (int t = 1; t <= steps; ++t) {
    const std::int64_t s = score_units[t - 1];
    const int arm = policy.arm_at(t, level);
    const double p = instance.score_pmf(arm).prob_of_units(s);
    if (p == 0.0) {
      impossible = true;
    } else {
      acc += std::log(p);
    }
    level = transition_units(level, s, h_units).next;
    if (level.is_bust()) break;  // tau reached
  }
  return impossible ? -kInf : acc;
}

inline double log_likelihood(const std::vector<Decimal>& scores, const Policy& policy,
                             const Instance& instance, const EvalConfig& config) {
  std::vector<std::int64_t> units;
  units.reserve(scores.size());
  for (Decimal s : scores) units.push_back(instance.units_of(s));
  return log_likelihood_units(units, policy, instance, config);
}

struct LlrStat {
  double value = 0.0;  // log f1 - log f0; +-inf sentinels, never NaN
};

// Both hypotheses walk the same reconstructed level sequence (it depends
// only on the scores). A trajectory impossible under both signals corrupted
// input and is an error rather than a 0/0 statistic.
inline LlrStat llr_units(const std::vector<std::int64_t>& score_units,
                         const Policy& policy_h0, const Policy& policy_h1,
                         const Instance& instance, const EvalConfig& config) {
  const std::int64_t h_units = instance.threshold_units(config);
  DangerLevel level = DangerLevel::live(0);
  double acc0 = 0.0;
  double acc1 = 0.0;
  bool zero0 = false;
  bool zero1 = false;
  const int steps = static_cast<int>(std::min<std::size_t>(
      score_units.size(), static_cast<std::size_t>(config.T)));
  for (int t = 1; t <= steps; ++t) {
    const std::int64_t s = score_units[t - 1];
    const double p0 = instance.score_pmf(policy_h0.arm_at(t, level)).prob_of_units(s);
    const double p1 = instance.score_pmf(policy_h1.arm_at(t, level)).prob_of_units(s);
    if (p0 == 0.0) zero0 = true; else acc0 += std::log(p0);
    if (p1 == 0.0) zero1 = true; else acc1 += std::log(p1);
    level = transition_units(level, s, h_units).next;
    if (level.is_bust()) break;
  }
  if (zero0 && zero1) {
    throw BothZero("trajectory has zero probability under both hypotheses");
  }
  if (zero0) return {kInf};
  if (zero1) return {-kInf};
  return {acc1 - acc0};
}

inline LlrStat llr(const std::vector<Decimal>& scores, const Policy& policy_h0,
                   const Policy& policy_h1, const Instance& instance,
                   const EvalConfig& config) {
  std::vector<std::int64_t> units;
  units.reserve(scores.size());
  for (Decimal s : scores) units.push_back(instance.units_of(s));
  return llr_units(units, policy_h0, policy_h1, instance, config);
}

inline bool classify(LlrStat stat, double b) { return stat.value > b; }

struct RocPoint {
  double b = 0.0;  // threshold; +-inf endpoints included
  double fpr = 0.0;
  double tpr = 0.0;
};

struct RocCurve {
  std::vector<RocPoint> points;  // fpr nondecreasing, (0,0) .. (1,1)
  double auc = 0.5;
};

// Mann-Whitney AUC via average ranks, ties counted 1/2. Infinite statistics
// order naturally; NaN is disallowed upstream.
inline double mann_whitney_auc(const std::vector<double>& h0,
                               const std::vector<double>& h1) {
  if (h0.empty() || h1.empty()) throw EmptySample("AUC needs both samples non-empty");
  struct Tagged {
    double value;
    bool alt;
  };
  std::vector<Tagged> all;
  all.reserve(h0.size() + h1.size());
  for (double v : h0) all.push_back({v, false});
  for (double v : h1) all.push_back({v, true});
  std::sort(all.begin(), all.end(),
            [](const Tagged& a, const Tagged& b) { return a.value < b.value; });

  double rank_sum_h1 = 0.0;
  std::size_t i = 0;
  while (i < all.size()) {
    std::size_t j = i;
    while (j < all.size() && all[j].value == all[i].value) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // 1-based
    for (std::size_t k = i; k < j; ++k) {
      if (all[k].alt) rank_sum_h1 += avg_rank;
    }
    i = j;
  }
  const double n0 = static_cast<double>(h0.size());
  const double n1 = static_cast<double>(h1.size());
  const double u1 = rank_sum_h1 - n1 * (n1 + 1.0) / 2.0;
  return u1 / (n0 * n1);
}

// Threshold sweep over the sorted union of observed statistics plus the
// +inf endpoint; the terminal (1,1) point is the augmented accept-all
// endpoint, recorded with b = -inf.
inline RocCurve roc(const std::vector<double>& stats_h0,
                    const std::vector<double>& stats_h1) {
  if (stats_h0.empty() || stats_h1.empty()) {
    throw EmptySample("ROC needs both samples non-empty");
  }
  for (double v : stats_h0) {
    if (std::isnan(v)) throw EmptySample("NaN statistic in the H0 sample");
  }
  for (double v : stats_h1) {
    if (std::isnan(v)) throw EmptySample("NaN statistic in the H1 sample");
  }

  std::vector<double> thresholds;
  thresholds.reserve(stats_h0.size() + stats_h1.size() + 1);
  thresholds.insert(thresholds.end(), stats_h0.begin(), stats_h0.end());
  thresholds.insert(thresholds.end(), stats_h1.begin(), stats_h1.end());
  thresholds.push_back(kInf);
  std::sort(thresholds.begin(), thresholds.end(),
            [](double a, double b) { return a > b; });
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                   thresholds.end());

  std::vector<double> sorted_h0 = stats_h0;
  std::vector<double> sorted_h1 = stats_h1;
  std::sort(sorted_h0.begin(), sorted_h0.end());
  std::sort(sorted_h1.begin(), sorted_h1.end());
  const auto frac_above = [](const std::vector<double>& sorted, double b) {
    const auto it = std::upper_bound(sorted.begin(), sorted.end(), b);
    return static_cast<double>(sorted.end() - it) / static_cast<double>(sorted.size());
  };

  RocCurve curve;
  for (double b : thresholds) {
    curve.points.push_back({b, frac_above(sorted_h0, b), frac_above(sorted_h1, b)});
  }
  curve.points.push_back({-kInf, 1.0, 1.0});
  curve.auc = mann_whitney_auc(stats_h0, stats_h1);
  return curve;
}

// Trapezoidal area under the swept curve; equals the Mann-Whitney AUC and is
// kept as an independent cross-check.
inline double trapezoid_area(const RocCurve& curve) {
  double area = 0.0;
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    const RocPoint& a = curve.points[i - 1];
    const RocPoint& b = curve.points[i];
    area += (b.fpr - a.fpr) * (a.tpr + b.tpr) * 0.5;
  }
  return area;
}

}  // namespace sandbag

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sandbag/decimal.hpp"
#include "sandbag/errors.hpp"

// The bandit evaluation instance: outcomes with scores, per-arm outcome
// distributions, the score quantum g, and the evaluation parameters (T, T',
// h*). All danger-level arithmetic downstream happens in integer multiples
// of g so the strict survival comparison h + R(Y) < h* is exact.

namespace sandbag {

inline constexpr double kPmfSumTolerance = 1e-12;

struct Outcome {
  std::string name;
  Decimal score;  // nonnegative, in test-score units
};

// Evaluation parameters. T_prime is a real so horizons like 1e200 are
// representable; it only ever enters through the continuation value T'*mu_a1.
struct EvalConfig {
  int T = 1;
  double T_prime = 0.0;
  Decimal h_star;

  void validate() const {
    if (T < 1) throw InvalidInstance("evaluation horizon T must be >= 1");
    if (!(T_prime >= 0.0) || !std::isfinite(T_prime)) {
      throw InvalidInstance("post-evaluation horizon T' must be finite and >= 0");
    }
    if (h_star.micro() <= 0) throw InvalidInstance("safety threshold h* must be > 0");
  }
};

// Running danger level: either a live cumulative score (in units of the
// quantum g) strictly below h*, or the symbolic absorbing Bust state.
class DangerLevel {
 public:
  static constexpr DangerLevel live(std::int64_t units) {
    DangerLevel d;
    d.units_ = units;
    return d;
  }
  static constexpr DangerLevel bust() {
    DangerLevel d;
    d.units_ = kBust;
    return d;
  }

  constexpr bool is_bust() const { return units_ == kBust; }
  constexpr std::int64_t units() const { return units_; }

  friend constexpr bool operator==(DangerLevel, DangerLevel) = default;

 private:
  static constexpr std::int64_t kBust = -1;
  std::int64_t units_ = 0;
};

// Pushforward of an arm's outcome distribution through the score function:
// distinct score values with merged probabilities, sorted ascending.
class ScorePmf {
 public:
  struct Entry {
    std::int64_t units;  // score / g
    Decimal score;
    double prob;
  };

  explicit ScorePmf(std::vector<Entry> entries) : entries_(std::move(entries)) {}
  ScorePmf() = default;

  const std::vector<Entry>& entries() const { return entries_; }

  double prob_of_units(std::int64_t units) const {
    for (const Entry& e : entries_) {
      if (e.units == units) return e.prob;
      if (e.units > units) break;
    }
    return 0.0;
  }

  double prob_of_zero() const { return prob_of_units(0); }

  double sum() const {
    double s = 0.0;
    for (const Entry& e : entries_) s += e.prob;
    return s;
  }

 private:
  std::vector<Entry> entries_;
};

struct InstanceSpec {
  struct ArmIn {
    std::string name;
    std::vector<Probability> pmf;  // aligned with the outcome list
  };
  std::vector<Outcome> outcomes;
  std::vector<ArmIn> arms;
  std::optional<EvalConfig> eval;  // folded into the quantum when present
};

class Instance {
 public:
  friend Instance build_instance(const InstanceSpec& spec);

  std::size_t num_arms() const { return arms_.size(); }
  std::size_t num_outcomes() const { return outcomes_.size(); }
  const std::vector<Outcome>& outcomes() const { return outcomes_; }

  const std::string& arm_name(std::size_t arm) const { return arms_.at(arm).name; }
  const std::vector<Probability>& arm_pmf(std::size_t arm) const {
    return arms_.at(arm).pmf;
  }

  // Arms are ordered by strictly descending mean, so arm 0 is a1.
  double mean(std::size_t arm) const { return arms_.at(arm).mean; }
  std::vector<double> arm_means() const {
    std::vector<double> out;
    out.reserve(arms_.size());
    for (const Arm& a : arms_) out.push_back(a.mean);
    return out;
  }

  // Exact mean at scale 10^-18, available when every probability parsed as
  // an exact decimal. mean_q18 = sum_y pico(p) * micro(score).
  bool has_exact_means() const { return exact_means_; }
  __int128 exact_mean_q18(std::size_t arm) const { return arms_.at(arm).mean_q18; }
  bool mean_equals(std::size_t arm, Decimal expected) const {
    if (!exact_means_) return false;
    return arms_.at(arm).mean_q18 == (__int128)expected.micro() * kPicoScale;
  }

  Decimal quantum() const { return Decimal::from_micro(g_micro_); }
  double quantum_value() const { return Decimal::from_micro(g_micro_).value(); }
  std::int64_t quantum_micro() const { return g_micro_; }

  // Score of an outcome in grid units (exact by construction).
  std::int64_t outcome_units(std::size_t outcome) const {
    return outcomes_.at(outcome).score.micro() / g_micro_;
  }

  const ScorePmf& score_pmf(std::size_t arm) const { return arms_.at(arm).pushforward; }

  // Units of h* on this instance's grid; h* must be commensurable.
  std::int64_t threshold_units(const EvalConfig& config) const {
    config.validate();
    if (config.h_star.micro() % g_micro_ != 0) {
      throw NonRepresentableGrid("h* = " + config.h_star.str() +
                                 " is not a multiple of the score quantum g = " +
                                 quantum().str());
    }
    return config.h_star.micro() / g_micro_;
  }

  std::int64_t units_of(Decimal score) const {
    if (score.micro() % g_micro_ != 0) {
      throw OffGridScore("score " + score.str() + " is off the grid (g = " +
                         quantum().str() + ")");
    }
    return score.micro() / g_micro_;
  }

  Decimal score_of_units(std::int64_t units) const {
    return Decimal::from_micro(units * g_micro_);
  }

 private:
  struct Arm {
    std::string name;
    std::vector<Probability> pmf;
    double mean = 0.0;
    __int128 mean_q18 = 0;
    ScorePmf pushforward;
  };

  std::vector<Outcome> outcomes_;
  std::vector<Arm> arms_;
  std::int64_t g_micro_ = kMicroScale;
  bool exact_means_ = false;
};

inline Instance build_instance(const InstanceSpec& spec) {
  if (spec.outcomes.empty()) throw InvalidInstance("instance needs at least one outcome");
  if (spec.arms.empty()) throw InvalidInstance("instance needs at least one arm");

  std::set<std::string> outcome_names;
  for (const Outcome& y : spec.outcomes) {
    if (y.score.micro() < 0) {
      throw NegativeScore("outcome '" + y.name + "' has negative score " + y.score.str());
    }
    if (!outcome_names.insert(y.name).second) {
      throw InvalidInstance("duplicate outcome name '" + y.name + "'");
    }
  }

  // Quantum: gcd of all distinct positive scores, and of h* when jointly
  // loaded. All-zero-score instances fall back to g = 1.
  if (spec.eval) spec.eval->validate();
  std::int64_t g = 0;
  for (const Outcome& y : spec.outcomes) {
    if (y.score.micro() > 0) g = std::gcd(g, y.score.micro());
  }
  if (spec.eval) g = std::gcd(g, spec.eval->h_star.micro());
  if (g == 0) g = kMicroScale;

  Instance inst;
  inst.outcomes_ = spec.outcomes;
  inst.g_micro_ = g;

  bool exact = true;
  std::set<std::string> arm_names;
  for (const InstanceSpec::ArmIn& in : spec.arms) {
    if (in.pmf.size() != spec.outcomes.size()) {
      throw InvalidInstance("arm '" + in.name + "' pmf has " +
                            std::to_string(in.pmf.size()) + " entries for " +
                            std::to_string(spec.outcomes.size()) + " outcomes");
    }
    if (!arm_names.insert(in.name).second) {
      throw InvalidInstance("duplicate arm name '" + in.name + "'");
    }
    double sum = 0.0;
    for (const Probability& p : in.pmf) {
      if (!(p.value >= 0.0 && p.value <= 1.0)) {
        throw NonstochasticPmf("arm '" + in.name + "' has probability " +
                               format_double_shortest(p.value) + " outside [0, 1]");
      }
      sum += p.value;
      exact = exact && p.exact;
    }
    if (std::abs(sum - 1.0) > kPmfSumTolerance) {
      throw NonstochasticPmf("arm '" + in.name + "' pmf sums to " +
                             format_double_shortest(sum));
    }

    Instance::Arm arm;
    arm.name = in.name;
    arm.pmf = in.pmf;
    inst.arms_.push_back(std::move(arm));
  }
  inst.exact_means_ = exact;

  // Means: exact on the 10^-18 grid when possible, binary64 otherwise.
  for (Instance::Arm& arm : inst.arms_) {
    long double acc = 0.0L;
    __int128 acc_q18 = 0;
    for (std::size_t i = 0; i < spec.outcomes.size(); ++i) {
      acc += (long double)arm.pmf[i].value * (long double)spec.outcomes[i].score.value();
      if (exact) acc_q18 += (__int128)arm.pmf[i].pico * spec.outcomes[i].score.micro();
    }
    arm.mean_q18 = acc_q18;
    arm.mean = exact ? (double)((long double)acc_q18 / 1e18L) : (double)acc;
  }

  std::stable_sort(inst.arms_.begin(), inst.arms_.end(),
                   [exact](const Instance::Arm& a, const Instance::Arm& b) {
                     return exact ? a.mean_q18 > b.mean_q18 : a.mean > b.mean;
                   });
  for (std::size_t i = 0; i + 1 < inst.arms_.size(); ++i) {
    const Instance::Arm& a = inst.arms_[i];
    const Instance::Arm& b = inst.arms_[i + 1];
    bool equal = exact ? a.mean_q18 == b.mean_q18 : a.mean == b.mean;
    if (equal) {
      throw DuplicateMean("arms '" + a.name + "' and '" + b.name +
                          "' have equal mean; the a1 labeling requires strictly "
                          "descending means");
    }
  }

  for (Instance::Arm& arm : inst.arms_) {
    std::map<std::int64_t, double> by_units;
    for (std::size_t i = 0; i < inst.outcomes_.size(); ++i) {
      by_units[inst.outcomes_[i].score.micro() / g] += arm.pmf[i].value;
    }
    std::vector<ScorePmf::Entry> entries;
    entries.reserve(by_units.size());
    for (auto [units, prob] : by_units) {
      entries.push_back({units, Decimal::from_micro(units * g), prob});
    }
    arm.pushforward = ScorePmf(std::move(entries));
  }
  return inst;
}

inline std::vector<double> arm_means(const Instance& instance) {
  return instance.arm_means();
}

inline const ScorePmf& pushforward_pmf(const Instance& instance, std::size_t arm) {
  return instance.score_pmf(arm);
}

// All live levels reachable from Live(0) by at most T score additions that
// stay strictly below h*, plus Bust. One time-independent superset serves
// every t; the DP never visits unreachable (t, level) pairs forward.
inline std::vector<DangerLevel> reachable_levels(const Instance& instance,
                                                 const EvalConfig& config) {
  const std::int64_t h_units = instance.threshold_units(config);
  std::vector<std::int64_t> steps;
  for (std::size_t i = 0; i < instance.num_outcomes(); ++i) {
    steps.push_back(instance.outcome_units(i));
  }
  std::sort(steps.begin(), steps.end());
  steps.erase(std::unique(steps.begin(), steps.end()), steps.end());

  std::set<std::int64_t> seen{0};
  std::vector<std::int64_t> frontier{0};
  for (int depth = 0; depth < config.T && !frontier.empty(); ++depth) {
    std::vector<std::int64_t> next;
    for (std::int64_t u : frontier) {
      for (std::int64_t s : steps) {
        std::int64_t v = u + s;
        if (v < h_units && seen.insert(v).second) next.push_back(v);
      }
    }
    frontier = std::move(next);
  }

  std::vector<DangerLevel> out;
  out.reserve(seen.size() + 1);
  for (std::int64_t u : seen) out.push_back(DangerLevel::live(u));
  out.push_back(DangerLevel::bust());
  return out;
}

}  // namespace sandbag

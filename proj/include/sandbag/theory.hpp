#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "sandbag/model.hpp"
#include "sandbag/solver.hpp"

// Safe-action certificate for the nonnegative-reward constructive case, and
// the mechanical check that the solved policy prefers the safe arm on the
// certified danger-level interval.
//
// The certificate: a_hat is the unique arm maximizing the probability of
// scoring 0, h_hat = h* - (minimum positive score). From any level in
// [h_hat, h*) every positive score busts, so surviving the remaining steps
// means scoring 0 throughout, and
//
//   P_surv(t, h, a) = p_a(0) * p_ahat(0)^(T-t)
//   beta_t          = (p_ahat(0) - max_{a != ahat} p_a(0)) * p_ahat(0)^(T-t)
//
// epsilon_t is reported as the exact maximal w-gap over arms and levels in
// [h_hat, h*) read from the solved tables (0 in the constructive case).

namespace sandbag {

struct SafeActionCertificate {
  std::size_t a_hat = 0;
  Decimal h_hat;
  Decimal h_star;
  std::vector<double> beta;          // index t-1, t in 1..T
  std::vector<double> epsilon;       // index t-1
  std::vector<double> interval_low;  // epsilon_t / beta_t - T' * mu_a1

  // Fingerprint of the (instance, config) pair the certificate was built
  // from, so mismatched solutions are rejected.
  struct Fingerprint {
    int T = 0;
    double T_prime = 0.0;
    std::int64_t h_star_micro = 0;
    std::int64_t g_micro = 0;
    std::size_t num_arms = 0;
    double mu_a1 = 0.0;
    friend bool operator==(const Fingerprint&, const Fingerprint&) = default;
  } source;

  int horizon() const { return static_cast<int>(beta.size()); }

  // Lower end of the Prop. 2 interval intersected with [h_hat, h*), where
  // the certificate's premises hold.
  double effective_low(int t) const {
    return std::max(h_hat.value(), interval_low.at(t - 1));
  }
  bool interval_empty(int t) const { return !(effective_low(t) < h_star.value()); }
};

struct SandbaggingInterval {
  double low = 0.0;   // epsilon_t / beta_t - T' * mu_a1, unclamped
  Decimal high;       // h*, exclusive
  double effective_low = 0.0;
  bool empty = false;
};

inline SafeActionCertificate build_certificate(const Solution& solution) {
  const Instance& inst = solution.instance();
  const EvalConfig& config = solution.config();
  const std::size_t A = inst.num_arms();
  const int T = config.T;

  // Unique maximizer of the zero-score probability.
  std::size_t a_hat = 0;
  double best = -1.0;
  bool tie = false;
  for (std::size_t a = 0; a < A; ++a) {
    const double p0 = inst.score_pmf(a).prob_of_zero();
    if (p0 > best) {
      best = p0;
      a_hat = a;
      tie = false;
    } else if (p0 == best) {
      tie = true;
    }
  }
  if (best <= 0.0) {
    throw NoZeroScore("no arm can score 0; the constructive certificate needs a safe outcome");
  }
  if (tie) {
    throw NoUniqueSafeArm("multiple arms share the maximal zero-score probability");
  }

  std::int64_t min_pos_micro = 0;
  for (const Outcome& y : inst.outcomes()) {
    if (y.score.micro() > 0 &&
        (min_pos_micro == 0 || y.score.micro() < min_pos_micro)) {
      min_pos_micro = y.score.micro();
    }
  }
  if (min_pos_micro == 0) {
    throw NoPositiveScore("all outcome scores are 0; h_hat = h* - min positive score is undefined");
  }

  SafeActionCertificate cert;
  cert.a_hat = a_hat;
  cert.h_star = config.h_star;
  cert.h_hat = Decimal::from_micro(config.h_star.micro() - min_pos_micro);
  cert.source = {T,
                 config.T_prime,
                 config.h_star.micro(),
                 inst.quantum_micro(),
                 A,
                 inst.mean(0)};

  double second = 0.0;
  for (std::size_t a = 0; a < A; ++a) {
    if (a != a_hat) second = std::max(second, inst.score_pmf(a).prob_of_zero());
  }
  const double gap = best - second;

  cert.beta.assign(T, 0.0);
  cert.beta[T - 1] = gap;
  for (int t = T - 1; t >= 1; --t) cert.beta[t - 1] = cert.beta[t] * best;

  // Exact maximal w-gap over arms at levels in [h_hat, h*); 0 when no such
  // level exists or when no positive score survives from there.
  const std::int64_t h_hat_units = cert.h_hat.micro() / inst.quantum_micro();
  cert.epsilon.assign(T, 0.0);
  cert.interval_low.assign(T, 0.0);
  for (int t = 1; t <= T; ++t) {
    double gap_w = 0.0;
    for (std::int64_t u : solution.live_levels()) {
      if (u < h_hat_units) continue;
      double w_min = std::numeric_limits<double>::infinity();
      double w_max = -w_min;
      for (std::size_t a = 0; a < A; ++a) {
        const double w = solution.survival_stats(t, DangerLevel::live(u), a).w;
        w_min = std::min(w_min, w);
        w_max = std::max(w_max, w);
      }
      gap_w = std::max(gap_w, w_max - w_min);
    }
    cert.epsilon[t - 1] = gap_w;
    cert.interval_low[t - 1] =
        gap_w / cert.beta[t - 1] - solution.terminal_scale();
  }
  return cert;
}

inline SandbaggingInterval sandbagging_interval(const SafeActionCertificate& cert,
                                                int t) {
  if (t < 1 || t > cert.horizon()) {
    throw UnknownState("t outside 1..T for this certificate");
  }
  SandbaggingInterval out;
  out.low = cert.interval_low[t - 1];
  out.high = cert.h_star;
  out.effective_low = cert.effective_low(t);
  out.empty = cert.interval_empty(t);
  return out;
}

// Per-t outcome of checking Prop. 2 against a solved instance: at every live
// level inside the effective interval, the policy must pick a_hat and a_hat
// must maximize the fixed-first-action survival probability.
struct Prop2Report {
  struct Row {
    int t = 0;
    double effective_low = 0.0;
    int levels_checked = 0;
    int policy_mismatches = 0;
    int surv_mismatches = 0;
  };
  std::vector<Row> rows;
  bool pass = true;
  int levels_checked = 0;
};

inline Prop2Report assert_prop2(const Solution& solution,
                                const SafeActionCertificate& cert) {
  const Instance& inst = solution.instance();
  const EvalConfig& config = solution.config();
  SafeActionCertificate::Fingerprint here{config.T,
                                          config.T_prime,
                                          config.h_star.micro(),
                                          inst.quantum_micro(),
                                          inst.num_arms(),
                                          inst.mean(0)};
  if (!(here == cert.source)) {
    throw MismatchedInstance("certificate was built from a different instance/config");
  }

  Prop2Report report;
  const std::size_t A = inst.num_arms();
  for (int t = 1; t <= config.T; ++t) {
    Prop2Report::Row row;
    row.t = t;
    row.effective_low = cert.effective_low(t);
    if (!cert.interval_empty(t)) {
      for (std::int64_t u : solution.live_levels()) {
        const double h = static_cast<double>(u) * inst.quantum_value();
        if (h < row.effective_low || h >= cert.h_star.value()) continue;
        ++row.levels_checked;
        const DangerLevel level = DangerLevel::live(u);
        if (solution.policy_arm(t, level) != static_cast<int>(cert.a_hat)) {
          ++row.policy_mismatches;
        }
        const double surv_hat = solution.survival_stats(t, level, cert.a_hat).surv;
        for (std::size_t a = 0; a < A; ++a) {
          if (solution.survival_stats(t, level, a).surv > surv_hat) {
            ++row.surv_mismatches;
            break;
          }
        }
      }
    }
    report.levels_checked += row.levels_checked;
    report.pass = report.pass && row.policy_mismatches == 0 && row.surv_mismatches == 0;
    report.rows.push_back(row);
  }
  return report;
}

// "Sandbagging occurred" on a solved instance: some (t, live level) plays an
// arm other than a1.
inline bool sandbagging_occurred(const Solution& solution) {
  for (int t = 1; t <= solution.horizon(); ++t) {
    for (std::int64_t u : solution.live_levels()) {
      if (solution.policy_arm(t, DangerLevel::live(u)) != 0) return true;
    }
  }
  return false;
}

// Fraction of (t, live level) table states whose optimal action is not a1.
inline double sandbagging_fraction(const Solution& solution) {
  std::size_t total = 0;
  std::size_t deviating = 0;
  for (int t = 1; t <= solution.horizon(); ++t) {
    for (std::int64_t u : solution.live_levels()) {
      ++total;
      if (solution.policy_arm(t, DangerLevel::live(u)) != 0) ++deviating;
    }
  }
  return total == 0 ? 0.0 : static_cast<double>(deviating) / static_cast<double>(total);
}

}  // namespace sandbag

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>

#include "sandbag/errors.hpp"
#include "sandbag/model.hpp"

namespace sandbag {

// Deterministic level-indexed policy: (t, live danger level) -> arm index.
// Either a constant map or an explicit table (e.g. loaded from a solution).
class Policy {
 public:
  static Policy constant(int arm) {
    Policy p;
    p.constant_arm_ = arm;
    return p;
  }

  void set(int t, std::int64_t level_units, int arm) {
    table_[{t, level_units}] = arm;
  }

  int arm_at(int t, DangerLevel level) const {
    if (constant_arm_ >= 0) return constant_arm_;
    if (level.is_bust()) {
      throw IncompletePolicy("policy queried at the Bust state");
    }
    auto it = table_.find({t, level.units()});
    if (it == table_.end()) {
      throw IncompletePolicy("policy has no action for t = " + std::to_string(t) +
                             ", level = " + std::to_string(level.units()) +
                             " grid units");
    }
    return it->second;
  }

  bool is_constant() const { return constant_arm_ >= 0; }

 private:
  int constant_arm_ = -1;
  std::map<std::pair<int, std::int64_t>, int> table_;
};

}  // namespace sandbag

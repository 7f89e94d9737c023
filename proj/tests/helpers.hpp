#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sandbag/sandbag.hpp"

// Shared fixtures and small builders for the test suites.

namespace testutil {

using namespace sandbag;

inline std::string data_path(const std::string& name) {
  return std::string(SANDBAG_DATA_DIR) + "/" + name;
}

inline LoadedInstance load_appendix_b() {
  return load_instance_file(data_path("appendix_b.json"));
}

inline EvalConfig make_config(int T, double T_prime, const std::string& h_star) {
  EvalConfig c;
  c.T = T;
  c.T_prime = T_prime;
  c.h_star = Decimal::parse(h_star);
  return c;
}

// Instance from whole-unit scores and double pmf rows; arm/outcome names are
// generated. The eval config, when given, participates in the quantum.
inline Instance make_instance(const std::vector<std::string>& scores,
                              const std::vector<std::vector<double>>& pmfs,
                              std::optional<EvalConfig> eval = std::nullopt) {
  InstanceSpec spec;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    spec.outcomes.push_back({"y" + std::to_string(i), Decimal::parse(scores[i])});
  }
  for (std::size_t a = 0; a < pmfs.size(); ++a) {
    InstanceSpec::ArmIn arm;
    arm.name = "arm" + std::to_string(a);
    for (double p : pmfs[a]) arm.pmf.push_back(Probability::from_double(p));
    spec.arms.push_back(std::move(arm));
  }
  spec.eval = eval;
  return build_instance(spec);
}

}  // namespace testutil

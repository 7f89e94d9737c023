#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <iosfwd>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "sandbag/decimal.hpp"
#include "sandbag/detect.hpp"
#include "sandbag/errors.hpp"
#include "sandbag/model.hpp"
#include "sandbag/policy.hpp"
#include "sandbag/sim.hpp"
#include "sandbag/solver.hpp"
#include "sandbag/theory.hpp"

// File formats: instance/config JSON, solution JSON (lossless reals as
// shortest decimal strings), trajectory JSON-lines, LLR/ROC CSVs. CSVs carry
// a header row and reals with 17 significant digits; infinities are the
// literals `inf` / `-inf`.

namespace sandbag {

using json = nlohmann::ordered_json;

// -- formatting ---------------------------------------------------------------

inline std::string format_real_sig17(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

inline std::string format_real_shortest(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return format_double_shortest(x);
}

inline double parse_real_token(std::string_view text) {
  if (text == "inf" || text == "+inf") return kInf;
  if (text == "-inf") return -kInf;
  return parse_double(text);
}

// -- content hashing ------------------------------------------------------------

inline std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t value) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[value & 0xF];
    value >>= 4;
  }
  return out;
}

// -- file helpers ---------------------------------------------------------------

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << content;
  if (!out) throw IoError("write to '" + path + "' failed");
}

// -- instance / config ------------------------------------------------------------

inline Decimal decimal_from_json(const json& v, const std::string& what) {
  try {
    if (v.is_string()) return Decimal::parse(v.get<std::string>());
    if (v.is_number_integer()) {
      return Decimal::from_micro(v.get<std::int64_t>() * kMicroScale);
    }
    if (v.is_number_unsigned()) {
      return Decimal::from_micro(static_cast<std::int64_t>(v.get<std::uint64_t>()) *
                                 kMicroScale);
    }
    if (v.is_number_float()) return Decimal::from_double(v.get<double>());
  } catch (const NonRepresentableGrid& e) {
    throw NonRepresentableGrid(what + ": " + e.what());
  }
  throw InvalidInstance(what + " must be a decimal string or number");
}

inline Probability probability_from_json(const json& v) {
  if (v.is_string()) return Probability::from_string(v.get<std::string>());
  if (v.is_number()) return Probability::from_double(v.get<double>());
  throw InvalidInstance("pmf entries must be numbers or decimal strings");
}

inline double real_from_json(const json& v, const std::string& what) {
  if (v.is_string()) return parse_real_token(v.get<std::string>());
  if (v.is_number()) return v.get<double>();
  throw InvalidInstance(what + " must be a number");
}

// Canonical form of a constructed instance; arms appear in descending-mean
// order, so any input file describing the same instance hashes identically.
inline json instance_to_json(const Instance& instance, const EvalConfig& config) {
  json outcomes = json::array();
  for (const Outcome& y : instance.outcomes()) {
    outcomes.push_back({{"name", y.name}, {"score", y.score.str()}});
  }
  json arms = json::array();
  for (std::size_t a = 0; a < instance.num_arms(); ++a) {
    json pmf = json::array();
    for (const Probability& p : instance.arm_pmf(a)) pmf.push_back(p.value);
    arms.push_back({{"name", instance.arm_name(a)}, {"pmf", pmf}});
  }
  return json{{"outcomes", outcomes},
              {"arms", arms},
              {"eval",
               {{"T", config.T},
                {"T_prime", format_real_shortest(config.T_prime)},
                {"h_star", config.h_star.str()}}}};
}

inline std::string instance_hash(const Instance& instance, const EvalConfig& config) {
  return hex64(fnv1a64(instance_to_json(instance, config).dump()));
}

struct LoadedInstance {
  Instance instance;
  EvalConfig config;
  std::string hash;
};

inline LoadedInstance instance_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("outcomes") || !doc.contains("arms") ||
      !doc.contains("eval")) {
    throw InvalidInstance("instance file needs 'outcomes', 'arms' and 'eval'");
  }
  InstanceSpec spec;
  for (const json& o : doc.at("outcomes")) {
    Outcome y;
    y.name = o.at("name").get<std::string>();
    y.score = decimal_from_json(o.at("score"), "score of outcome '" + y.name + "'");
    spec.outcomes.push_back(std::move(y));
  }
  for (const json& a : doc.at("arms")) {
    InstanceSpec::ArmIn arm;
    arm.name = a.at("name").get<std::string>();
    for (const json& p : a.at("pmf")) arm.pmf.push_back(probability_from_json(p));
    spec.arms.push_back(std::move(arm));
  }
  const json& eval = doc.at("eval");
  EvalConfig config;
  config.T = eval.at("T").get<int>();
  config.T_prime = real_from_json(eval.at("T_prime"), "T_prime");
  config.h_star = decimal_from_json(eval.at("h_star"), "h_star");
  config.validate();
  spec.eval = config;

  LoadedInstance out{build_instance(spec), config, ""};
  out.hash = instance_hash(out.instance, out.config);
  return out;
}

inline json parse_json(std::string_view text, const std::string& what) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw InvalidInstance(what + ": malformed JSON");
  return doc;
}

inline LoadedInstance load_instance_file(const std::string& path) {
  return instance_from_json(parse_json(read_file(path), path));
}

// -- solution files -----------------------------------------------------------------

struct SolutionRow {
  int t = 0;
  std::int64_t level_units = 0;
  int arm = 0;
  double nu = 0.0;
  double surv = 0.0;
};

struct SolutionFile {
  std::string instance_hash;
  int T = 0;
  double T_prime = 0.0;
  Decimal h_star;
  double terminal_scale = 0.0;
  std::vector<SolutionRow> rows;  // sorted by (t, level_units)

  Policy policy() const {
    Policy p;
    for (const SolutionRow& r : rows) p.set(r.t, r.level_units, r.arm);
    return p;
  }
};

inline json solution_to_json(const Solution& solution, const std::string& hash) {
  json rows = json::array();
  for (int t = 1; t <= solution.horizon(); ++t) {
    for (std::int64_t u : solution.live_levels()) {
      const DangerLevel level = DangerLevel::live(u);
      const ValueParts p = solution.parts(t, level);
      rows.push_back({t, u, solution.policy_arm(t, level),
                      format_real_shortest(p.nu), format_real_shortest(p.surv)});
    }
  }
  return json{{"meta",
               {{"instance_hash", hash},
                {"T", solution.horizon()},
                {"T_prime", format_real_shortest(solution.config().T_prime)},
                {"h_star", solution.config().h_star.str()}}},
              {"terminal_scale", format_real_shortest(solution.terminal_scale())},
              {"rows", rows}};
}

inline SolutionFile solution_file_from_json(const json& doc) {
  SolutionFile out;
  const json& meta = doc.at("meta");
  out.instance_hash = meta.at("instance_hash").get<std::string>();
  out.T = meta.at("T").get<int>();
  out.T_prime = real_from_json(meta.at("T_prime"), "T_prime");
  out.h_star = decimal_from_json(meta.at("h_star"), "h_star");
  out.terminal_scale = real_from_json(doc.at("terminal_scale"), "terminal_scale");
  for (const json& r : doc.at("rows")) {
    SolutionRow row;
    row.t = r.at(0).get<int>();
    row.level_units = r.at(1).get<std::int64_t>();
    row.arm = r.at(2).get<int>();
    row.nu = real_from_json(r.at(3), "nu");
    row.surv = real_from_json(r.at(4), "surv");
    out.rows.push_back(row);
  }
  return out;
}

inline SolutionFile load_solution_file(const std::string& path) {
  return solution_file_from_json(parse_json(read_file(path), path));
}

// -- trajectory JSON-lines -------------------------------------------------------------

inline void write_batch_jsonl(std::ostream& os, const SimBatch& batch,
                              const Instance& instance,
                              const std::string& instance_hash) {
  json header{{"type", "batch"},
              {"instance_hash", instance_hash},
              {"policy_id", batch.policy_id},
              {"master_seed", batch.master_seed},
              {"n", batch.trajectories.size()}};
  os << header.dump() << '\n';
  for (const Trajectory& traj : batch.trajectories) {
    json scores = json::array();
    for (std::int64_t u : traj.score_units) {
      scores.push_back(instance.score_of_units(u).value());
    }
    json line{{"id", traj.id},
              {"scores", scores},
              {"actions", traj.actions},
              {"tau", traj.tau},
              {"busted", traj.busted}};
    os << line.dump() << '\n';
  }
}

struct LoadedBatch {
  std::string instance_hash;
  std::string policy_id;
  std::uint64_t master_seed = 0;
  std::vector<Trajectory> trajectories;
};

inline LoadedBatch read_batch_jsonl(std::istream& is, const Instance& instance) {
  LoadedBatch out;
  std::string line;
  bool have_header = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    json doc = parse_json(line, "trajectory line");
    if (!have_header) {
      if (!doc.contains("type") || doc.at("type") != "batch") {
        throw IoError("trajectory file is missing its batch header line");
      }
      out.instance_hash = doc.at("instance_hash").get<std::string>();
      out.policy_id = doc.value("policy_id", std::string{});
      out.master_seed = doc.value("master_seed", std::uint64_t{0});
      have_header = true;
      continue;
    }
    Trajectory traj;
    traj.id = doc.at("id").get<std::int64_t>();
    for (const json& s : doc.at("scores")) {
      traj.score_units.push_back(
          instance.units_of(decimal_from_json(s, "trajectory score")));
    }
    if (doc.contains("actions")) {
      for (const json& a : doc.at("actions")) traj.actions.push_back(a.get<int>());
    }
    traj.tau = doc.at("tau").get<int>();
    traj.busted = doc.at("busted").get<bool>();
    out.trajectories.push_back(std::move(traj));
  }
  if (!have_header) throw IoError("trajectory file is empty");
  return out;
}

// -- LLR statistic CSV ------------------------------------------------------------------

inline void write_llr_csv(std::ostream& os, const std::vector<std::int64_t>& ids,
                          const std::vector<double>& values) {
  os << "id,llr\n";
  for (std::size_t i = 0; i < values.size(); ++i) {
    os << ids[i] << ',' << format_real_sig17(values[i]) << '\n';
  }
}

struct LlrColumn {
  std::vector<std::int64_t> ids;
  std::vector<double> values;
};

inline LlrColumn read_llr_csv(std::istream& is) {
  LlrColumn out;
  std::string line;
  if (!std::getline(is, line)) throw IoError("empty LLR CSV");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw IoError("malformed LLR CSV row: " + line);
    std::int64_t id = 0;
    auto res = std::from_chars(line.data(), line.data() + comma, id);
    if (res.ec != std::errc()) throw IoError("malformed LLR CSV id: " + line);
    out.ids.push_back(id);
    out.values.push_back(parse_real_token(std::string_view(line).substr(comma + 1)));
  }
  return out;
}

// -- ROC outputs ---------------------------------------------------------------------------

inline void write_roc_csv(std::ostream& os, const RocCurve& curve) {
  os << "b,fpr,tpr\n";
  for (const RocPoint& p : curve.points) {
    os << format_real_sig17(p.b) << ',' << format_real_sig17(p.fpr) << ','
       << format_real_sig17(p.tpr) << '\n';
  }
}

inline json roc_summary_json(const RocCurve& curve, std::size_t n_h0, std::size_t n_h1,
                             const std::string& instance_hash) {
  return json{{"auc", curve.auc},
              {"n_h0", n_h0},
              {"n_h1", n_h1},
              {"instance_hash", instance_hash}};
}

// -- theory reports ---------------------------------------------------------------------------

inline json certificate_to_json(const SafeActionCertificate& cert) {
  json rows = json::array();
  for (int t = 1; t <= cert.horizon(); ++t) {
    rows.push_back({{"t", t},
                    {"beta", cert.beta[t - 1]},
                    {"epsilon", cert.epsilon[t - 1]},
                    {"interval_low", format_real_shortest(cert.interval_low[t - 1])},
                    {"effective_low", format_real_shortest(cert.effective_low(t))},
                    {"empty", cert.interval_empty(t)}});
  }
  return json{{"a_hat", cert.a_hat},
              {"h_hat", cert.h_hat.str()},
              {"h_star", cert.h_star.str()},
              {"rows", rows}};
}

inline json prop2_report_to_json(const Prop2Report& report) {
  json rows = json::array();
  for (const Prop2Report::Row& r : report.rows) {
    rows.push_back({{"t", r.t},
                    {"effective_low", format_real_shortest(r.effective_low)},
                    {"levels_checked", r.levels_checked},
                    {"policy_mismatches", r.policy_mismatches},
                    {"surv_mismatches", r.surv_mismatches}});
  }
  return json{{"pass", report.pass},
              {"levels_checked", report.levels_checked},
              {"rows", rows}};
}

}  // namespace sandbag

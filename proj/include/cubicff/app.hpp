#pragma once
// Job configuration and JSON reports behind the cubicff command line tool.

#include <optional>
#include <string>

#include <json.hpp>

#include "cubicff/kangaroo.hpp"
#include "cubicff/regulator.hpp"

namespace cubicff {

using Json = nlohmann::json;

// Defaults: variant E2U3, m 2, b 1, a 0, hash S_tau rule, no trap directory,
// jump budget 64 x expected, no wall-time limit, lower bound 1.
struct JobConfig {
  std::string q, G, H;
  Variant variant = Variant::E2U3;
  std::optional<int> lambda;
  int m = 2;
  BigInt b = 1, a = 0;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> theta_override;
  std::optional<double> tau_override;
  std::optional<double> alpha_override;
  TauRule tau_rule = TauRule::Hash;
  std::string trap_path;
  std::uint64_t max_jumps = 0;
  double max_seconds = 0;
  BigInt lower_bound = 1;
  std::optional<BigInt> h0;  // regulator subcommand input
  bool parallel = true;
};

// Throws InvalidInput on missing or malformed fields. `need_seed` enforces the seed.
JobConfig parse_job(const Json& j, bool need_seed = true);

// Stage of the last call into the functions below ("classify", "estimate", ...).
const std::string& current_stage();

CurveModel job_curve(const JobConfig& cfg);
Json classify_report(const CurveModel& c);
Json estimate_report(const Estimate& e);
Json oracle_report(const CurveModel& c, int lambda);
Json plan_report(const SearchPlan& p);
Json stats_report(const SearchStats& s);
Json factors_report(const FactoredInteger& f);

Json run_classify(const JobConfig& cfg);
Json run_estimate(const JobConfig& cfg);
Json run_oracle(const JobConfig& cfg);
Json run_plan(const JobConfig& cfg);
Json run_search(const JobConfig& cfg);
Json run_regulator(const JobConfig& cfg);
Json run_normalize(const Json& j);  // {"q", "G", "H"} with arbitrary leading coefficients
// classify, estimate, plan, search, then regulator for (1,1;1,2); Exp1/Exp2 from measured step times
Json run_job(const JobConfig& cfg);

struct StepTimes {
  double giant = 0, baby = 0;  // seconds
};
StepTimes measure_step_times(const CurveModel& c, int reps = 32);

}  // namespace cubicff

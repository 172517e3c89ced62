// cubicff command line: thin wrappers that read a job config and write JSON reports.
#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "cubicff/app.hpp"
#include "cubicff/error.hpp"

using namespace cubicff;

namespace {

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InvalidInput(std::string("config is not valid JSON: ") + e.what());
  }
}

void emit(const Json& j, const std::string& out) {
  const std::string text = j.dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f) throw InvalidInput("cannot write " + out);
  f << text;
}

int fail(int code, const std::string& msg) {
  std::cerr << Json{{"error", msg}, {"stage", current_stage()}, {"exit_code", code}}.dump() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Class numbers and regulators of purely cubic function fields"};
  app.require_subcommand(1);
  std::string config, out;
  auto with_config = [&](CLI::App* s) {
    s->add_option("--config", config, "job JSON")->required();
    s->add_option("--out", out, "write the report here instead of stdout");
    return s;
  };
  auto* classify = with_config(app.add_subcommand("classify", "genus, signature, lambda, family flags"));
  auto* estimate = with_config(app.add_subcommand("estimate", "E, U and the S_nu table"));
  auto* oracle = with_config(app.add_subcommand("oracle", "exact L-polynomial for small q"));
  auto* plan = with_config(app.add_subcommand("plan", "kangaroo parameters"));
  auto* search = with_config(app.add_subcommand("search", "kangaroo search for h or a multiple of R_x"));
  auto* regulator = with_config(app.add_subcommand("regulator", "R_x and h_x from h0"));
  std::string h0_flag, lower_flag;
  regulator->add_option("--h0", h0_flag, "known multiple of R_x (skips the search)");
  regulator->add_option("--lower-bound", lower_flag, "known lower bound on R_x");
  auto* normalize = with_config(app.add_subcommand("normalize", "make Y^3 = c G H^2 monic"));
  auto* run = with_config(app.add_subcommand("run", "full pipeline report"));

  auto* alpha = app.add_subcommand("alpha-stats", "mean, min, max of |h - E|/U over random fields");
  std::uint64_t aq = 19, aseed = 1;
  int ag = 7, an = 300, am = 2;
  std::string avariant = "E2U3";
  alpha->add_option("--q", aq, "prime field size");
  alpha->add_option("--g", ag, "genus");
  alpha->add_option("--n", an, "number of fields");
  alpha->add_option("--variant", avariant, "E1U1, E2U2 or E2U3");
  alpha->add_option("--seed", aseed, "sampling seed");
  alpha->add_option("--m", am, "kangaroo workers per field");
  alpha->add_option("--out", out, "write the report here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (alpha->parsed()) {
      const AlphaStats s = alpha_stats(aq, ag, an, parse_variant(avariant), aseed, am);
      emit({{"q", std::to_string(aq)}, {"g", ag}, {"variant", avariant}, {"n", s.n}, {"failures", s.failures},
            {"mean", s.mean}, {"min", s.min}, {"max", s.max}},
           out);
      return 0;
    }
    const Json j = read_json(config);
    if (normalize->parsed()) {
      emit(run_normalize(j), out);
      return 0;
    }
    const bool needs_seed = search->parsed() || run->parsed() || plan->parsed() ||
                            (regulator->parsed() && h0_flag.empty() && !j.contains("h0"));
    JobConfig cfg = parse_job(j, needs_seed);
    if (const char* w = std::getenv("CUBICFF_WORKERS")) {
      const int m = std::atoi(w);
      if (m < 2 || m % 2) throw InvalidInput("CUBICFF_WORKERS must be an even integer >= 2");
      cfg.m = m;
    }
    if (!h0_flag.empty()) cfg.h0 = BigInt(h0_flag);
    if (!lower_flag.empty()) cfg.lower_bound = BigInt(lower_flag);
    Json rep;
    if (classify->parsed()) rep = run_classify(cfg);
    else if (estimate->parsed()) rep = run_estimate(cfg);
    else if (oracle->parsed()) rep = run_oracle(cfg);
    else if (plan->parsed()) rep = run_plan(cfg);
    else if (search->parsed()) rep = run_search(cfg);
    else if (regulator->parsed()) rep = run_regulator(cfg);
    else rep = run_job(cfg);
    emit(rep, out);
    return 0;
  } catch (const InvalidInput& e) {
    return fail(2, e.what());
  } catch (const BudgetExhausted& e) {
    return fail(3, e.what());
  } catch (const ComputeError& e) {
    return fail(1, e.what());
  } catch (const std::exception& e) {
    return fail(1, e.what());
  }
}

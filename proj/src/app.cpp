#include "cubicff/app.hpp"

#include <chrono>

#include "cubicff/error.hpp"
#include "cubicff/zeta.hpp"

namespace cubicff {

namespace {

thread_local std::string g_stage = "config";

void stage(const char* s) { g_stage = s; }

BigInt big_field(const Json& j, const char* key, const BigInt& dflt) {
  if (!j.contains(key) || j[key].is_null()) return dflt;
  const Json& v = j[key];
  try {
    if (v.is_string()) return BigInt(v.get<std::string>());
    if (v.is_number_integer()) return BigInt(v.get<long long>());
  } catch (const std::exception&) {
  }
  throw InvalidInput(std::string("config: '") + key + "' must be a decimal integer");
}

std::string text_field(const Json& j, const char* key) {
  if (!j.contains(key)) throw InvalidInput(std::string("config: missing '") + key + "'");
  const Json& v = j[key];
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw InvalidInput(std::string("config: '") + key + "' must be a string");
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

const std::string& current_stage() { return g_stage; }

JobConfig parse_job(const Json& j, bool need_seed) {
  stage("config");
  if (!j.is_object()) throw InvalidInput("config: expected a JSON object");
  JobConfig c;
  const Json& curve = j.contains("curve") ? j["curve"] : j;
  c.q = text_field(curve, "q");
  c.G = text_field(curve, "G");
  c.H = text_field(curve, "H");
  try {
    if (j.contains("variant")) c.variant = parse_variant(j["variant"].get<std::string>());
    if (j.contains("lambda") && !j["lambda"].is_null()) c.lambda = j["lambda"].get<int>();
    if (j.contains("m")) c.m = j["m"].get<int>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    else if (need_seed) throw InvalidInput("config: 'seed' is mandatory");
    if (j.contains("theta_override") && !j["theta_override"].is_null())
      c.theta_override = j["theta_override"].get<std::uint64_t>();
    if (j.contains("alpha_override") && !j["alpha_override"].is_null())
      c.alpha_override = j["alpha_override"].get<double>();
    if (j.contains("tau_override") && !j["tau_override"].is_null()) c.tau_override = j["tau_override"].get<double>();
    if (j.contains("tau_rule")) {
      const auto r = j["tau_rule"].get<std::string>();
      if (r == "hash") c.tau_rule = TauRule::Hash;
      else if (r == "footnote") c.tau_rule = TauRule::Footnote;
      else throw InvalidInput("config: tau_rule must be 'hash' or 'footnote'");
    }
    if (j.contains("trap_path")) c.trap_path = j["trap_path"].get<std::string>();
    if (j.contains("budget")) {
      const Json& b = j["budget"];
      c.max_jumps = b.value("max_jumps", std::uint64_t{0});
      c.max_seconds = b.value("max_seconds", 0.0);
    }
    if (j.contains("parallel")) c.parallel = j["parallel"].get<bool>();
  } catch (const Json::exception& e) {
    throw InvalidInput(std::string("config: ") + e.what());
  }
  c.b = big_field(j, "b", 1);
  c.a = big_field(j, "a", 0);
  c.lower_bound = big_field(j, "lower_bound", 1);
  if (j.contains("h0") && !j["h0"].is_null()) c.h0 = big_field(j, "h0", 0);
  if (c.m < 2 || c.m % 2) throw InvalidInput("config: m must be even and at least 2");
  return c;
}

CurveModel job_curve(const JobConfig& cfg) {
  stage("classify");
  return new_curve(cfg.q, cfg.G, cfg.H);
}

Json classify_report(const CurveModel& c) {
  const FamilyReport f = family_filter(c);
  return {{"q", std::to_string(c.q)},
          {"G", c.G.to_string()},
          {"H", c.H.to_string()},
          {"genus", c.genus},
          {"signature", to_string(c.signature)},
          {"lambda", c.lambda},
          {"x1", c.x1},
          {"x2", c.x2},
          {"family", {{"genus_ok", f.genus_ok},
                      {"not_superelliptic_equivalent", f.not_superelliptic_equivalent},
                      {"deg_order_ok", f.deg_order_ok}}}};
}

Json estimate_report(const Estimate& e) {
  Json rows = Json::array();
  for (const auto& [nu, r] : e.table.rows)
    rows.push_back({{"nu", nu}, {"S1", r.S1}, {"I", r.I.str()}, {"F", r.Fnu}, {"q_is_one", r.q_is_one}});
  return {{"E", e.E.str()},         {"U", e.U.str()},         {"lambda", e.lambda},
          {"variant", to_string(e.variant)}, {"interval_ok", e.interval_ok}, {"Snu", rows},
          {"note", e.note}};
}

Json oracle_report(const CurveModel& c, int lambda) {
  const LPolynomial L = l_polynomial(c);
  const auto N = counts_from_l(L, 2 * c.genus);
  const auto ang = frobenius_angles(L);
  Json jn = Json::array(), jl = Json::array();
  for (const auto& n : N) jn.push_back(n.str());
  for (const auto& a : L.a) jl.push_back(a.str());
  return {{"N", jn}, {"L", jl}, {"h", L.h().str()}, {"angles", ang}, {"G_lambda", g_lambda(ang, lambda)}};
}

Json plan_report(const SearchPlan& p) {
  Json j = {{"signature", to_string(p.signature)},
            {"m", p.m},
            {"alpha_hat", p.alpha_hat},
            {"b", p.b.str()},
            {"a", p.a.str()},
            {"E", p.E.str()},
            {"U", p.U.str()},
            {"beta", std::to_string(p.beta)},
            {"nu", std::to_string(p.nu)},
            {"theta", p.theta},
            {"lg_theta", static_cast<int>(std::log2(static_cast<double>(p.theta)))},
            {"jump_s", p.jump_s},
            {"seed", p.seed},
            {"expected_jumps", expected_jumps(p)},
            {"note", p.note}};
  if (p.signature == Signature::UnitRankOne) {
    j["tau"] = p.tau.tau;
    j["tau_rule"] = p.tau.rule == TauRule::Hash ? "hash" : "footnote";
    j["phi"] = p.phi;
  }
  return j;
}

Json stats_report(const SearchStats& s) {
  return {{"jumps", s.jumps},   {"baby_steps", s.baby_steps}, {"giant_steps", s.giant_steps},
          {"traps", s.traps},   {"useless_collisions", s.useless}, {"rounds", s.rounds},
          {"wall_seconds", s.wall_seconds}};
}

Json factors_report(const FactoredInteger& f) {
  Json j = Json::array();
  for (const auto& [p, a] : f.factors) j.push_back({p.str(), a});
  return j;
}

namespace {

Estimate job_estimate(const CurveModel& c, const JobConfig& cfg) {
  stage("estimate");
  return estimate(c, cfg.variant, cfg.lambda);
}

SearchPlan job_plan(const CurveModel& c, const Estimate& e, const JobConfig& cfg) {
  stage("plan");
  PlanOptions po;
  po.m = cfg.m;
  po.b = cfg.b;
  po.a = cfg.a;
  po.seed = cfg.seed;
  po.theta_override = cfg.theta_override;
  po.alpha_override = cfg.alpha_override;
  po.tau_override = cfg.tau_override;
  po.tau_rule = cfg.tau_rule;
  return make_plan(c, e, po);
}

SearchOptions job_search_options(const JobConfig& cfg) {
  SearchOptions so;
  so.trap_dir = cfg.trap_path;
  so.max_jumps = cfg.max_jumps;
  so.max_seconds = cfg.max_seconds;
  so.parallel = cfg.parallel;
  return so;
}

}  // namespace

Json run_classify(const JobConfig& cfg) { return classify_report(job_curve(cfg)); }

Json run_estimate(const JobConfig& cfg) {
  const CurveModel c = job_curve(cfg);
  return estimate_report(job_estimate(c, cfg));
}

Json run_oracle(const JobConfig& cfg) {
  const CurveModel c = job_curve(cfg);
  stage("oracle");
  return oracle_report(c, cfg.lambda.value_or(c.lambda));
}

Json run_plan(const JobConfig& cfg) {
  const CurveModel c = job_curve(cfg);
  const Estimate e = job_estimate(c, cfg);
  return plan_report(job_plan(c, e, cfg));
}

Json run_search(const JobConfig& cfg) {
  const CurveModel c = job_curve(cfg);
  const Estimate e = job_estimate(c, cfg);
  const SearchPlan p = job_plan(c, e, cfg);
  stage("search");
  const SearchResult r = run_kangaroo(c, e, p, job_search_options(cfg));
  const bool ramified = c.signature == Signature::Ramified;
  // without a sound interval the (3,1) value is only a candidate
  const char* kind = ramified ? (e.interval_ok && r.exact ? "h" : "candidate") : "h0";
  return {{"value", r.value.str()}, {"kind", kind}, {"stats", stats_report(r.stats)}, {"note", r.note},
          {"plan", plan_report(p)}};
}

Json run_regulator(const JobConfig& cfg) {
  const CurveModel c = job_curve(cfg);
  if (c.signature != Signature::UnitRankOne) throw InvalidInput("regulator: needs signature (1,1;1,2)");
  BigInt h0;
  std::optional<BigInt> h;
  const Estimate e = job_estimate(c, cfg);
  if (cfg.h0) {
    h0 = *cfg.h0;
  } else {
    const SearchPlan p = job_plan(c, e, cfg);
    stage("search");
    h0 = run_kangaroo(c, e, p, job_search_options(cfg)).value;
  }
  stage("regulator");
  const Infrastructure inf(c);
  // h0 = h exactly when the interval is sound and h0 lies in it
  if (e.interval_ok && h0 >= e.E - e.U && h0 <= e.E + e.U) h = h0;
  const RegulatorResult r = extract_regulator(inf, h0, cfg.lower_bound, h);
  return {{"h0", h0.str()},
          {"Rx", r.Rx.str()},
          {"hx", r.hx ? Json(r.hx->str()) : Json(nullptr)},
          {"factors", factors_report(r.factors)}};
}

Json run_normalize(const Json& j) {
  stage("normalize");
  const u64 q = std::stoull(text_field(j.contains("curve") ? j["curve"] : j, "q"));
  const Json& cj = j.contains("curve") ? j["curve"] : j;
  const Normalized n = normalize_curve(q, Poly::parse(q, text_field(cj, "G")), Poly::parse(q, text_field(cj, "H")));
  return {{"curve", {{"q", std::to_string(q)}, {"G", n.curve.G.to_string()}, {"H", n.curve.H.to_string()}}},
          {"x_scale", n.x_scale},
          {"y_scale", n.y_scale},
          {"signature", to_string(n.curve.signature)}};
}

StepTimes measure_step_times(const CurveModel& c, int reps) {
  StepTimes t;
  if (c.signature == Signature::Ramified) {
    const Order o(c);
    Ideal a = random_ideal(o, 11), b = random_ideal(o, 12);
    const auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < reps; ++i) a = ideal_compose(o, a, b);
    t.giant = seconds_since(t0) / reps;
  } else {
    const Infrastructure inf(c);
    InfraDivisor d = inf.below(BigInt(1) << 40);
    const InfraDivisor j = inf.below(BigInt(1) << 20);
    auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < reps; ++i) d = inf.giant_step(d, j).first;
    t.giant = seconds_since(t0) / reps;
    t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < 4 * reps; ++i) d = inf.baby_step(d);
    t.baby = seconds_since(t0) / (4 * reps);
  }
  return t;
}

Json run_job(const JobConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const CurveModel c = job_curve(cfg);
  Json rep;
  rep["config"] = {{"curve", {{"q", cfg.q}, {"G", cfg.G}, {"H", cfg.H}}},
                   {"variant", to_string(cfg.variant)},
                   {"m", cfg.m},
                   {"b", cfg.b.str()},
                   {"a", cfg.a.str()},
                   {"seed", cfg.seed}};
  rep["classify"] = classify_report(c);
  if (c.signature != Signature::Ramified && c.signature != Signature::UnitRankOne)
    throw InvalidInput("run: signature " + to_string(c.signature) + " is not supported");
  const Estimate e = job_estimate(c, cfg);
  rep["estimate"] = estimate_report(e);
  const SearchPlan p = job_plan(c, e, cfg);
  rep["plan"] = plan_report(p);
  stage("search");
  const SearchResult r = run_kangaroo(c, e, p, job_search_options(cfg));
  rep["search"] = {{"value", r.value.str()}, {"stats", stats_report(r.stats)}, {"note", r.note}};
  std::optional<BigInt> h;
  if (c.signature == Signature::Ramified) {
    if (e.interval_ok && r.exact) {
      h = r.value;
      rep["h"] = r.value.str();
    } else {
      rep["h"] = nullptr;
      rep["candidate"] = r.value.str();
    }
  } else {
    stage("regulator");
    const Infrastructure inf(c);
    const RegulatorResult rr = extract_regulator(inf, r.value, cfg.lower_bound);
    rep["h0"] = r.value.str();
    rep["Rx"] = rr.Rx.str();
    rep["factors"] = factors_report(rr.factors);
    if (e.interval_ok) {
      const ClassNumberResult cn = class_number_from_regulator(inf, e, rr.Rx, cfg.seed);
      if (cn.h) h = cn.h;
      if (!cn.note.empty()) rep["class_number_note"] = cn.note;
    }
    rep["h"] = h ? Json(h->str()) : Json(nullptr);
    rep["hx"] = h ? Json(BigInt(*h / rr.Rx).str()) : Json(nullptr);
  }
  if (h) rep["ratio"] = estimate_ratio(e, *h);
  stage("report");
  const StepTimes st = measure_step_times(c);
  const ExpectedTime et = expected_time_report(p, e, h.value_or(e.E + e.U), st.giant, st.baby);
  rep["timing"] = {{"T_G", st.giant}, {"T_B", st.baby}, {"exp1_seconds", et.exp1}, {"exp2_seconds", et.exp2},
                   {"exp1_jumps", st.giant > 0 ? et.exp1 / st.giant : 0.0},
                   {"total_seconds", seconds_since(t0)}};
  return rep;
}

}  // namespace cubicff

#include "cubicff/kangaroo.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "cubicff/error.hpp"
#include "cubicff/factor.hpp"
#include "cubicff/hash.hpp"
#include "cubicff/rng.hpp"

namespace cubicff {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Parameters

namespace {

struct AlphaRow {
  u64 q;
  int g;
  double a1, a2, a3;
};

constexpr AlphaRow kAlpha[] = {
    {997, 3, 0.26832306, 0.20003340, 0.26448274},   {10009, 3, 0.27031818, 0.20234914, 0.26906175},
    {100003, 3, 0.27227076, 0.20408453, 0.27187490}, {997, 4, 0.19223965, 0.15306081, 0.19019941},
    {10009, 4, 0.19252978, 0.15379110, 0.19186318}, {97, 5, 0.18195632, 0.17143328, 0.17981087},
    {997, 5, 0.19188423, 0.18894457, 0.19190607},   {97, 6, 0.15246065, 0.14526827, 0.15118788},
    {463, 6, 0.15992960, 0.15676849, 0.15975657},   {19, 7, 0.11428348, 0.10135344, 0.10909269},
    {97, 7, 0.12684120, 0.12176623, 0.12602172},
};

double pick(const AlphaRow& r, Variant v) {
  switch (v) {
    case Variant::E1U1: return r.a1;
    case Variant::E2U2: return r.a2;
    default: return r.a3;
  }
}

std::int64_t to_i64(const BigInt& x) { return x.convert_to<long long>(); }

long double to_ld(const BigInt& x) { return x.convert_to<long double>(); }

BigInt lcm_big(const BigInt& a, const BigInt& b) { return a / gcd(a, b) * b; }

// 64 integers in [lo, hi] summing to `sum` (caller guarantees feasibility).
std::vector<std::int64_t> sample_jumps(std::int64_t lo, std::int64_t hi, std::int64_t sum, Rng& rng) {
  std::vector<std::int64_t> s(64);
  for (int attempt = 0; attempt < 100000; ++attempt) {
    std::int64_t acc = 0;
    for (int i = 0; i < 63; ++i) acc += (s[i] = rng.between(lo, hi));
    s[63] = sum - acc;
    if (s[63] >= lo && s[63] <= hi) return s;
  }
  // narrow ranges: spread the sum as evenly as possible
  const std::int64_t base = sum / 64, rem = sum % 64;
  for (int i = 0; i < 64; ++i) s[i] = base + (i < rem ? 1 : 0);
  return s;
}

}  // namespace

double alpha_lookup(u64 q, int g, Variant v) {
  int best_g = kAlpha[0].g;
  for (const auto& r : kAlpha)
    if (std::abs(r.g - g) < std::abs(best_g - g) || (std::abs(r.g - g) == std::abs(best_g - g) && r.g > best_g))
      best_g = r.g;
  std::vector<const AlphaRow*> rows;
  for (const auto& r : kAlpha)
    if (r.g == best_g) rows.push_back(&r);
  const double lq = std::log(static_cast<double>(q));
  if (lq <= std::log(static_cast<double>(rows.front()->q))) return pick(*rows.front(), v);
  if (lq >= std::log(static_cast<double>(rows.back()->q))) return pick(*rows.back(), v);
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    const double l0 = std::log(static_cast<double>(rows[i]->q)), l1 = std::log(static_cast<double>(rows[i + 1]->q));
    if (lq <= l1) {
      const double t = (lq - l0) / (l1 - l0);
      return pick(*rows[i], v) * (1 - t) + pick(*rows[i + 1], v) * t;
    }
  }
  return pick(*rows.back(), v);
}

int phi_heuristic(int g) { return g % 3 == 1 ? -(g + 2) / 3 : -(g / 3); }

unsigned hash_v(std::string_view serial) {
  return 1 + static_cast<unsigned>(mix_bytes(serial, kKeyV) % 64);
}

std::uint64_t hash_z(std::string_view serial, std::uint64_t theta) {
  return theta <= 1 ? 0 : mix_bytes(serial, kKeyZ) % theta;
}

SearchPlan make_plan(const CurveModel& c, const Estimate& est, const PlanOptions& opt) {
  if (opt.m < 2 || opt.m % 2) throw InvalidInput("plan: m must be even and at least 2");
  if (opt.b < 1 || opt.a < 0 || opt.a >= opt.b) throw InvalidInput("plan: need 0 <= a < b");
  if (c.signature != Signature::Ramified && c.signature != Signature::UnitRankOne)
    throw InvalidInput("plan: unsupported signature " + to_string(c.signature));
  SearchPlan p;
  p.signature = c.signature;
  p.m = opt.m;
  p.b = opt.b;
  p.a = opt.a;
  p.seed = opt.seed;
  p.U = est.U;
  p.E = est.E - est.E % opt.b + opt.a;
  p.alpha_hat = opt.alpha_override.value_or(alpha_lookup(c.q, c.genus, est.variant));
  const long double U = to_ld(est.U), alpha = p.alpha_hat, m = opt.m;
  Rng rng(opt.seed ^ 0x6a09e667f3bcc909ULL);
  std::ostringstream note;
  if (c.signature == Signature::Ramified) {
    const std::int64_t b = to_i64(opt.b);
    p.beta = std::llround((m / 2) * std::sqrt(alpha * static_cast<long double>(b) * U));
    if (p.beta < b) {
      note << "beta raised from " << p.beta << " to b; ";
      p.beta = b;
    }
    const std::int64_t t = std::llround(2.0L * p.beta / m);
    p.nu = t - t % b;
    // multiples of b in (0, 2 beta] with mean as close to beta as divisibility allows
    const std::int64_t hi = 2 * p.beta / b;
    const std::int64_t sum = std::max<std::int64_t>(64, std::llround(64.0L * p.beta / b));
    if (p.beta % b) note << "jump mean " << sum * b << "/64 (b does not divide beta); ";
    p.jump_s = sample_jumps(1, std::max<std::int64_t>(hi, 1), sum, rng);
    for (auto& s : p.jump_s) s *= b;
  } else {
    p.phi = phi_heuristic(c.genus);
    p.tau.tau = opt.tau_override.value_or(tau_lookup(c.genus, c.G.degree(), c.H.degree()));
    p.tau.rule = opt.tau_rule;
    const long double tau = p.tau.tau;
    p.beta = std::llround(m * std::sqrt((2 * tau - 1) * alpha * U) - 2 * (tau - 1));
    const std::int64_t floor_beta = c.genus + 2 - p.phi;
    if (p.beta < floor_beta) {
      note << "beta raised from " << p.beta << " to " << floor_beta << "; ";
      p.beta = floor_beta;
    }
    p.nu = std::llround(2.0L * p.beta / m);
    const std::int64_t lo = c.genus + 2, hi = 2 * (p.beta + p.phi) + 1;
    p.jump_s = sample_jumps(lo, hi, 64 * (p.beta + p.phi) + 32, rng);
  }
  if (p.beta <= 0) throw InvalidInput("plan: beta <= 0, use bsgs");
  p.theta = opt.theta_override.value_or(
      std::uint64_t{1} << std::max<long long>(0, std::llround(std::log2(static_cast<double>(p.beta)) / 2)));
  if (p.theta == 0) throw InvalidInput("plan: theta must be positive");
  p.note = note.str();
  return p;
}

double expected_jumps(const SearchPlan& p) {
  const double U = static_cast<double>(to_ld(p.U)), b = static_cast<double>(to_ld(p.b));
  if (p.signature == Signature::Ramified)
    return 4 * std::sqrt(p.alpha_hat * U / b) + static_cast<double>(p.theta) * p.m;
  const double tau = p.tau.tau;
  return 4 * std::sqrt(p.alpha_hat * U / (2 * tau - 1)) + static_cast<double>(p.theta) * p.m / tau;
}

ExpectedTime expected_time_report(const SearchPlan& p, const Estimate& est, const BigInt& h, double tg,
                                  double tb) {
  (void)tb;
  ExpectedTime r;
  const double diff = static_cast<double>(to_ld(abs(h - est.E)));
  const double U = static_cast<double>(to_ld(est.U)), m = p.m, theta = static_cast<double>(p.theta);
  const double a = p.alpha_hat;
  if (p.signature == Signature::Ramified) {
    const double beta = (m / 2) * std::sqrt(a * U);
    r.exp1 = (m * diff / beta + 4 * beta / m + theta * m) * tg;
    r.exp2 = (4 * std::sqrt(a * U) + theta * m) * tg;
  } else {
    const double tau = p.tau.tau;
    const double beta = m * std::sqrt((2 * tau - 1) * a * U) - 2 * (tau - 1);
    r.exp1 = (2 * m * diff / (beta + 2 * (tau - 1)) + 2 * beta / ((2 * tau - 1) * m) + theta * m / tau) *
             (2 - 1 / tau) * tg;
    r.exp2 = (4 * std::sqrt(a * U / (2 * tau - 1)) + theta * m / tau) * (2 - 1 / tau) * tg;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Trap records

std::string format_trap(const TrapRecord& r) {
  std::ostringstream os;
  os << r.herd << ',' << r.worker << ',' << r.step << ',' << r.distance.str() << ',' << r.serial;
  return os.str();
}

TrapRecord parse_trap(const std::string& line) {
  TrapRecord r;
  std::size_t pos = 0;
  auto field = [&]() {
    const std::size_t e = line.find(',', pos);
    if (e == std::string::npos) throw ComputeError("trap store: truncated record");
    std::string f = line.substr(pos, e - pos);
    pos = e + 1;
    return f;
  };
  try {
    const std::string h = field();
    if (h != "T" && h != "W") throw ComputeError("trap store: bad herd tag");
    r.herd = h[0];
    r.worker = std::stoi(field());
    r.step = std::stoull(field());
    r.distance = BigInt(field());
    r.serial = line.substr(pos);
  } catch (const ComputeError&) {
    throw;
  } catch (const std::exception& e) {
    throw ComputeError(std::string("trap store: corrupt record: ") + e.what());
  }
  if (r.serial.empty()) throw ComputeError("trap store: empty serial");
  return r;
}

SearchStats& SearchStats::operator+=(const SearchStats& o) {
  jumps += o.jumps;
  baby_steps += o.baby_steps;
  giant_steps += o.giant_steps;
  traps += o.traps;
  useless += o.useless;
  return *this;
}

// ---------------------------------------------------------------------------
// Walk spaces

namespace {

constexpr int kSweep = 1000;

struct State {
  Ideal ideal;
  BigInt dist;
  std::string key;  // serialize(ideal), the hashed and compared form
  std::uint64_t step = 0;
};

State make_state(Ideal a, BigInt d, std::uint64_t step) {
  State s{std::move(a), std::move(d), {}, step};
  s.key = serialize(s.ideal);
  return s;
}

// Class group of a (3,1) field: jumps by powers of a random ideal.
class ClassWalk {
 public:
  ClassWalk(const CurveModel& c, const SearchPlan& p, std::uint64_t base_seed) : o_(c), plan_(p) {
    base_ = random_ideal(o_, base_seed);
    for (auto s : p.jump_s) jumps_.push_back(ideal_pow(o_, base_, BigInt(s)));
    c_ = p.b * (c.genus + 2);
    offset_ = ideal_pow(o_, base_, c_);
  }
  const Order& order() const { return o_; }
  const Ideal& base() const { return base_; }

  State start(char herd, int i) const {
    BigInt d = BigInt(i) * plan_.nu;
    if (herd == 'T') d += plan_.E;
    return make_state(ideal_pow(o_, base_, d), d, 0);
  }
  void jump(State& s, SearchStats& st) const {
    const unsigned v = hash_v(s.key);
    s.ideal = ideal_compose(o_, s.ideal, jumps_[v - 1]);
    s.dist += plan_.jump_s[v - 1];
    s.key = serialize(s.ideal);
    ++s.step;
    ++st.jumps;
    ++st.giant_steps;
  }
  void offset(State& s, SearchStats& st) const {
    s.ideal = ideal_compose(o_, s.ideal, offset_);
    s.dist += c_;
    s.key = serialize(s.ideal);
    ++st.giant_steps;
  }
  State restore(const TrapRecord& r) const { return make_state(parse_ideal(r.serial), r.distance, r.step); }

 private:
  Order o_;
  const SearchPlan& plan_;
  Ideal base_;
  std::vector<Ideal> jumps_;
  BigInt c_;
  Ideal offset_;
};

// Principal infrastructure of a (1,1;1,2) field: giant steps by D(s_i), then baby steps into S_tau.
class InfraWalk {
 public:
  InfraWalk(const CurveModel& c, const SearchPlan& p) : inf_(c), plan_(p) {
    for (auto s : p.jump_s) jumps_.push_back(inf_.below(BigInt(s)));
    c_ = p.b * (c.genus + 2);
    max_baby_ = static_cast<int>(64 * p.tau.tau) + 64;
  }
  const Infrastructure& infra() const { return inf_; }

  State start(char herd, int i) const {
    BigInt n = BigInt(i) * plan_.nu;
    if (herd == 'T') n += 2 * plan_.E;
    SearchStats dummy;
    return settle(inf_.below(n), 0, dummy);
  }
  void jump(State& s, SearchStats& st) const {
    const unsigned v = hash_v(s.key);
    auto [d, psi] = inf_.giant_step(InfraDivisor{std::move(s.ideal), std::move(s.dist)}, jumps_[v - 1]);
    (void)psi;
    ++st.jumps;
    ++st.giant_steps;
    s = settle(std::move(d), s.step + 1, st);
  }
  void offset(State& s, SearchStats& st) const {
    s = settle(inf_.below(s.dist + c_), s.step, st);
  }
  State restore(const TrapRecord& r) const { return make_state(parse_ideal(r.serial), r.distance, r.step); }

 private:
  State settle(InfraDivisor d, std::uint64_t step, SearchStats& st) const {
    // tiny cycles may miss S_tau entirely; the cap keeps the walk deterministic
    for (int k = 0; k < max_baby_ && !inf_.in_s_tau(d, plan_.tau); ++k) {
      d = inf_.baby_step(d);
      ++st.baby_steps;
    }
    return make_state(std::move(d.ideal), std::move(d.delta), step);
  }
  Infrastructure inf_;
  const SearchPlan& plan_;
  std::vector<InfraDivisor> jumps_;
  BigInt c_;
  int max_baby_ = 0;
};

// Persistent traps: per-worker shard files plus a meta file with the job fingerprint and counters.
class TrapStore {
 public:
  TrapStore(std::string dir, nlohmann::json fingerprint) : dir_(std::move(dir)), fp_(std::move(fingerprint)) {
    if (dir_.empty()) return;
    fs::create_directories(dir_);
    const fs::path meta = fs::path(dir_) / "meta.json";
    if (fs::exists(meta)) {
      std::ifstream in(meta);
      nlohmann::json j;
      try {
        in >> j;
      } catch (const std::exception& e) {
        throw ComputeError(std::string("trap store: unreadable meta.json: ") + e.what());
      }
      if (j.value("fingerprint", nlohmann::json()) != fp_)
        throw InvalidInput("trap store " + dir_ + " belongs to a different job");
      const auto& s = j["stats"];
      saved_.jumps = s.value("jumps", 0ULL);
      saved_.baby_steps = s.value("baby_steps", 0ULL);
      saved_.giant_steps = s.value("giant_steps", 0ULL);
      saved_.traps = s.value("traps", 0ULL);
      saved_.useless = s.value("useless", 0ULL);
      resumed_ = true;
    }
  }
  bool resumed() const { return resumed_; }
  const SearchStats& saved() const { return saved_; }

  // All records from the shards, ordered by herd, worker, step.
  std::vector<TrapRecord> load(int half) const {
    std::vector<TrapRecord> out;
    if (dir_.empty()) return out;
    for (char herd : {'T', 'W'})
      for (int w = 0; w < half; ++w) {
        std::ifstream in(shard(herd, w));
        std::string line;
        while (std::getline(in, line)) {
          if (line.empty()) continue;
          TrapRecord r = parse_trap(line);
          if (r.herd != herd || r.worker != w) throw ComputeError("trap store: record in the wrong shard");
          out.push_back(std::move(r));
        }
      }
    return out;
  }
  void append(const std::vector<TrapRecord>& recs) {
    if (dir_.empty() || recs.empty()) return;
    std::map<std::string, std::ofstream> files;
    for (const auto& r : recs) {
      const std::string f = shard(r.herd, r.worker);
      auto it = files.find(f);
      if (it == files.end()) it = files.emplace(f, std::ofstream(f, std::ios::app)).first;
      it->second << format_trap(r) << '\n';
    }
  }
  void save_meta(const SearchStats& st) const {
    if (dir_.empty()) return;
    nlohmann::json j;
    j["fingerprint"] = fp_;
    j["stats"] = {{"jumps", st.jumps},   {"baby_steps", st.baby_steps}, {"giant_steps", st.giant_steps},
                  {"traps", st.traps},   {"useless", st.useless}};
    const fs::path tmp = fs::path(dir_) / "meta.json.tmp";
    {
      std::ofstream out(tmp);
      out << j.dump(1) << '\n';
    }
    fs::rename(tmp, fs::path(dir_) / "meta.json");
  }

 private:
  std::string shard(char herd, int w) const {
    return (fs::path(dir_) / ("trap." + std::string(1, herd) + "." + std::to_string(w) + ".log")).string();
  }
  std::string dir_;
  nlohmann::json fp_;
  SearchStats saved_;
  bool resumed_ = false;
};

struct Seen {
  char herd;
  int worker;
  BigInt dist;
};

struct WorkerOut {
  std::vector<TrapRecord> traps;
  SearchStats stats;
  bool cycle = false;
  BigInt cycle_multiple;
};

template <class Space>
WalkResult coordinate(const Space& space, const CurveModel& c, const SearchPlan& plan, const SearchOptions& opt,
                      std::uint64_t base_seed) {
  const auto t0 = std::chrono::steady_clock::now();
  const int half = plan.m / 2, m = plan.m;
  nlohmann::json fp = {{"q", std::to_string(c.q)},      {"G", c.G.to_string()},
                       {"H", c.H.to_string()},          {"m", m},
                       {"seed", plan.seed},             {"base_seed", base_seed},
                       {"theta", plan.theta},           {"b", plan.b.str()},
                       {"a", plan.a.str()},             {"E", plan.E.str()},
                       {"nu", plan.nu},                 {"jumps", plan.jump_s},
                       {"tau", plan.tau.tau},           {"tau_rule", plan.tau.rule == TauRule::Hash ? "hash" : "footnote"}};
  TrapStore store(opt.trap_dir, fp);
  SearchStats total = store.saved();
  const std::uint64_t cap =
      opt.max_jumps ? opt.max_jumps
                    : std::max<std::uint64_t>(static_cast<std::uint64_t>(64 * expected_jumps(plan)), 2ULL * kSweep * m);

  // worker w < half is tame index w, otherwise wild index w - half
  auto herd_of = [&](int w) { return w < half ? 'T' : 'W'; };
  auto index_of = [&](int w) { return w < half ? w : w - half; };

  std::unordered_map<std::string, Seen> seen;
  std::vector<State> states(m);
  std::vector<bool> have(m, false);
  std::optional<BigInt> found;

  std::optional<BigInt> self_cycle;

  // Insert-and-check. Returns 0 for a fresh trap, 1 for a cross-herd hit, 2 for a useless hit,
  // 3 when a kangaroo meets its own trap at a new distance (its walk has wrapped around).
  auto insert = [&](const TrapRecord& r, const std::string& key) -> int {
    auto [it, fresh] = seen.try_emplace(key, Seen{r.herd, r.worker, r.distance});
    if (fresh) return 0;
    BigInt d = abs(r.distance - it->second.dist);
    if (d == 0) return 2;
    if (it->second.herd != r.herd) {
      found = d;
      return 1;
    }
    if (it->second.worker == r.worker) {
      self_cycle = d;
      return 3;
    }
    return 2;
  };

  if (store.resumed()) {
    auto recs = store.load(half);
    for (const auto& r : recs) {
      const std::string key = serialize(parse_ideal(r.serial));
      const int w = r.herd == 'T' ? r.worker : r.worker + half;
      const int res = insert(r, key);
      if (res == 1 || res == 3) break;
      State s = space.restore(r);
      if (res == 2) {
        SearchStats dummy;
        space.offset(s, dummy);  // already counted before the interruption
      }
      states[w] = std::move(s);
      have[w] = true;
    }
  }
  if (found) {
    store.save_meta(total);
    return {*found, MatchKind::CrossHerd, total};
  }
  if (self_cycle) {
    store.save_meta(total);
    return {*self_cycle, MatchKind::Cycle, total};
  }

  std::vector<TrapRecord> initial;
  for (int w = 0; w < m; ++w) {
    if (have[w]) continue;
    states[w] = space.start(herd_of(w), index_of(w));
    have[w] = true;
    if (hash_z(states[w].key, plan.theta) == 0)
      initial.push_back({herd_of(w), index_of(w), 0, states[w].dist, "v1|" + states[w].key});
  }
  {
    std::vector<TrapRecord> kept;
    for (const auto& r : initial) {
      const int res = insert(r, r.serial.substr(3));
      ++total.traps;
      kept.push_back(r);
      if (res == 1) break;
      if (res == 2) {
        ++total.useless;
        const int w = r.herd == 'T' ? r.worker : r.worker + half;
        space.offset(states[w], total);
      }
    }
    store.append(kept);
  }
  if (found) {
    store.save_meta(total);
    return {*found, MatchKind::CrossHerd, total};
  }

  // Brent-style checkpoints, kept across sweeps: a repeated ideal with a new distance is a
  // multiple of the period
  struct Checkpoint {
    std::string key;
    BigInt dist;
    std::uint64_t power = 1, lam = 0;
  };
  std::vector<Checkpoint> cps(m);
  for (int w = 0; w < m; ++w) cps[w] = {states[w].key, states[w].dist, 1, 0};

  std::vector<WorkerOut> out(m);
  while (true) {
    auto run_worker = [&](int w) {
      WorkerOut& o = out[w];
      o = WorkerOut{};
      State& s = states[w];
      std::string& cp_key = cps[w].key;
      BigInt& cp_dist = cps[w].dist;
      std::uint64_t &power = cps[w].power, &lam = cps[w].lam;
      for (int k = 0; k < kSweep; ++k) {
        space.jump(s, o.stats);
        if (hash_z(s.key, plan.theta) == 0) {
          o.traps.push_back({herd_of(w), index_of(w), s.step, s.dist, "v1|" + s.key});
          ++o.stats.traps;
        }
        if (s.key == cp_key && s.dist != cp_dist) {
          o.cycle = true;
          o.cycle_multiple = abs(s.dist - cp_dist);
          return;
        }
        if (++lam == power) {
          cp_key = s.key;
          cp_dist = s.dist;
          power *= 2;
          lam = 0;
        }
      }
    };
    if (opt.parallel) {
#pragma omp parallel for schedule(dynamic, 1)
      for (int w = 0; w < m; ++w) run_worker(w);
    } else {
      for (int w = 0; w < m; ++w) run_worker(w);
    }

    // Deterministic merge: worker order, then step order.
    std::vector<TrapRecord> kept;
    std::optional<BigInt> cycle;
    for (int w = 0; w < m; ++w) total += out[w].stats;
    for (int w = 0; w < m && !found && !cycle; ++w) {
      for (const auto& r : out[w].traps) {
        const int res = insert(r, r.serial.substr(3));
        kept.push_back(r);
        if (res == 1) break;
        if (res == 3) {
          cycle = *self_cycle;
          break;
        }
        if (res == 2) {
          ++total.useless;
          space.offset(states[w], total);
          break;  // the rest of this worker's sweep followed the other kangaroo
        }
      }
      if (!found && !cycle && out[w].cycle) cycle = out[w].cycle_multiple;
    }
    store.append(kept);
    total.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    store.save_meta(total);
    if (found) return {*found, MatchKind::CrossHerd, total};
    if (cycle) return {*cycle, MatchKind::Cycle, total};
    if (total.jumps >= cap)
      throw BudgetExhausted("kangaroo: jump budget " + std::to_string(cap) + " exhausted");
    if (opt.max_seconds > 0 && total.wall_seconds >= opt.max_seconds)
      throw BudgetExhausted("kangaroo: wall-time budget exhausted");
  }
}

}  // namespace

WalkResult kangaroo_walk(const CurveModel& c, const SearchPlan& plan, const SearchOptions& opt,
                         std::uint64_t base_seed) {
  if (plan.signature == Signature::Ramified) {
    ClassWalk space(c, plan, base_seed);
    return coordinate(space, c, plan, opt, base_seed);
  }
  InfraWalk space(c, plan);
  return coordinate(space, c, plan, opt, base_seed);
}

// ---------------------------------------------------------------------------
// Class number from multiples of element orders

BigInt order_from_multiple(const Order& o, const Ideal& base, const BigInt& n) {
  if (n <= 0) throw ComputeError("order_from_multiple: n must be positive");
  if (!is_unit_ideal(ideal_pow(o, base, n))) throw ComputeError("order_from_multiple: not a multiple");
  BigInt ord = n;
  for (const auto& [p, e] : pollard_rho_factor(n).factors) {
    for (unsigned k = 0; k < e; ++k) {
      if (!is_unit_ideal(ideal_pow(o, base, ord / p))) break;
      ord /= p;
    }
  }
  return ord;
}

namespace {

unsigned valuation(BigInt n, const BigInt& p) {
  unsigned v = 0;
  while (n != 0 && n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

std::vector<BigInt> multiples_in(const BigInt& L, const BigInt& lo, const BigInt& hi) {
  std::vector<BigInt> out;
  BigInt k = (lo + L - 1) / L;
  if (k < 1) k = 1;
  for (; k * L <= hi; ++k) {
    out.push_back(k * L);
    if (out.size() > 100000) break;
  }
  return out;
}

// Size of the subgroup generated by `gens`, by closure; nullopt past `cap` elements.
std::optional<std::size_t> subgroup_size(const Order& o, const std::vector<Ideal>& gens, std::size_t cap) {
  std::unordered_set<std::string> seen;
  std::vector<Ideal> frontier{unit_ideal(o)};
  seen.insert(serialize(frontier[0]));
  while (!frontier.empty()) {
    std::vector<Ideal> next;
    for (const auto& x : frontier)
      for (const auto& g : gens) {
        Ideal y = ideal_compose(o, x, g);
        if (seen.insert(serialize(y)).second) {
          if (seen.size() > cap) return std::nullopt;
          next.push_back(std::move(y));
        }
      }
    frontier = std::move(next);
  }
  return seen.size();
}

}  // namespace

std::optional<BigInt> resolve_class_number(const Order& o, const BigInt& exponent_part, const BigInt& lo,
                                           const BigInt& hi, std::uint64_t seed, std::string* note) {
  BigInt L = exponent_part;
  auto cands = multiples_in(L, lo, hi);
  if (cands.empty() || cands.size() > 100000) return std::nullopt;
  // lift L towards the group exponent; enough elements that no prime of h is likely missed
  for (int i = 0; i < 16 && cands.size() > 1; ++i) {
    const Ideal r = random_ideal(o, seed * 7919 + 104729 * (i + 1));
    const Ideal step = ideal_pow(o, r, L);
    Ideal y = ideal_pow(o, r, cands[0]);
    for (std::size_t j = 0; j < cands.size(); ++j) {
      if (j) y = ideal_compose(o, y, step);
      if (is_unit_ideal(y)) {
        L = lcm_big(L, order_from_multiple(o, r, cands[j]));
        break;
      }
    }
    cands = multiples_in(L, lo, hi);
  }
  if (cands.size() <= 1) return cands.empty() ? std::nullopt : std::optional<BigInt>(cands[0]);
  // h has the same prime support as the exponent
  const auto fl = pollard_rho_factor(L);
  std::erase_if(cands, [&](const BigInt& h) {
    BigInt r = h;
    for (const auto& [p, e] : fl.factors)
      while (r % p == 0) r /= p;
    return r != 1;
  });
  // every candidate divides M, so r^(M / p^v) lies in the Sylow p-subgroup
  BigInt M = 1;
  for (const auto& [p, e] : fl.factors) {
    unsigned vmax = 0;
    for (const auto& h : cands) vmax = std::max(vmax, valuation(h, p));
    for (unsigned k = 0; k < vmax; ++k) M *= p;
  }
  // p-parts where candidates still disagree: enumerate the Sylow subgroup
  int draw = 0;
  for (const auto& [p, e] : fl.factors) {
    if (cands.size() <= 1) break;
    unsigned vmin = ~0u, vmax = 0;
    for (const auto& h : cands) {
      vmin = std::min(vmin, valuation(h, p));
      vmax = std::max(vmax, valuation(h, p));
    }
    if (vmin == vmax) continue;
    BigInt pv = 1;
    for (unsigned k = 0; k < vmax; ++k) pv *= p;
    if (pv > (1 << 15)) continue;
    BigInt proj = M;
    while (proj % p == 0) proj /= p;
    // add generators in batches until the closure survives two more batches unchanged
    std::vector<Ideal> gens;
    std::optional<std::size_t> sz;
    int stable = 0;
    while (stable < 2 && gens.size() < 64) {
      for (int i = 0; i < 8; ++i) gens.push_back(ideal_pow(o, random_ideal(o, seed * 31 + 7 * draw++ + 3), proj));
      auto s2 = subgroup_size(o, gens, static_cast<std::size_t>(pv.convert_to<long long>()));
      if (!s2) break;  // cannot happen for a true Sylow subgroup; give up on this prime
      stable = sz && *sz == *s2 ? stable + 1 : 0;
      sz = s2;
    }
    if (!sz) continue;
    const unsigned vs = valuation(BigInt(*sz), p);
    if (note) *note += "sylow " + p.str() + ": order " + std::to_string(*sz) + (stable < 2 ? " (lower bound)" : "") + "; ";
    // the closure is a subgroup, so its order is always a lower bound; equality only once it is stable
    std::erase_if(cands, [&](const BigInt& h) { return stable < 2 ? valuation(h, p) < vs : valuation(h, p) != vs; });
  }
  if (cands.size() == 1) return cands[0];
  if (note) *note += std::to_string(cands.size()) + " candidates remain; ";
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Search drivers

SearchResult run_kangaroo(const CurveModel& c, const Estimate& est, const SearchPlan& plan,
                          const SearchOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  SearchResult res;
  if (plan.signature == Signature::UnitRankOne) {
    WalkResult w = kangaroo_walk(c, plan, opt, plan.seed);
    res.value = w.multiple / 2;
    res.stats = w.stats;
    res.stats.rounds = 1;
    if (w.kind == MatchKind::Cycle) res.note = "multiple from a walk cycle; ";
    res.exact = false;
    res.stats.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
  }
  const Order o(c);
  BigInt lo = est.E - est.U, hi = est.E + est.U;
  if (lo < 1) lo = 1;
  BigInt L = 1;
  SearchPlan cur = plan;
  for (int round = 0; round < 6; ++round) {
    const std::uint64_t base_seed = plan.seed + 0x9e3779b97f4a7c15ULL * round;
    SearchOptions ro = opt;
    if (!opt.trap_dir.empty() && round > 0) ro.trap_dir = (fs::path(opt.trap_dir) / ("round" + std::to_string(round))).string();
    WalkResult w = kangaroo_walk(c, cur, ro, base_seed);
    res.stats += w.stats;
    res.stats.rounds = round + 1;
    const Ideal base = random_ideal(o, base_seed);
    L = lcm_big(L, order_from_multiple(o, base, w.multiple));
    // user congruence h = a mod b on top of L | h
    BigInt lo2 = lo, hi2 = hi;
    std::optional<BigInt> h;
    if (plan.b == 1) {
      h = resolve_class_number(o, L, lo2, hi2, base_seed, &res.note);
    } else {
      std::vector<BigInt> ok;
      for (const auto& k : multiples_in(L, lo2, hi2))
        if (k % plan.b == plan.a) ok.push_back(k);
      if (ok.size() == 1) h = ok[0];
    }
    if (h) {
      res.value = *h;
      res.stats.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      return res;
    }
    res.note += "round " + std::to_string(round + 1) + ": order " + L.str() + " leaves several candidates; ";
    // next round searches multiples of lcm(b, L) only
    PlanOptions po;
    po.m = plan.m;
    po.seed = plan.seed + round + 1;
    po.theta_override = plan.theta;
    po.alpha_override = plan.alpha_hat;
    BigInt B = lcm_big(plan.b, L), A = 0;
    for (BigInt t = 0; t < plan.b; ++t)
      if ((t * L) % plan.b == plan.a) {
        A = (t * L) % B;
        break;
      }
    po.b = B;
    po.a = A;
    Estimate e2 = est;
    cur = make_plan(c, e2, po);
    if (B > 2 * est.U) break;
  }
  throw ComputeError("class number ambiguous after verification rounds: " + res.note);
}

BsgsResult bsgs(const CurveModel& c, const BigInt& lo_in, const BigInt& hi_in, std::uint64_t seed,
                std::size_t max_table) {
  BsgsResult out;
  BigInt lo = lo_in < 1 ? BigInt(1) : lo_in;
  const BigInt hi = hi_in;
  if (hi < lo) throw InvalidInput("bsgs: empty interval");
  auto ceil_sqrt = [](const BigInt& w) {
    BigInt s = sqrt(w);
    if (s * s < w) ++s;
    return s < 1 ? BigInt(1) : s;
  };
  if (c.signature == Signature::Ramified) {
    const Order o(c);
    BigInt L = 1;
    for (int round = 0; round < 8; ++round) {
      const Ideal g0 = random_ideal(o, seed + 7777 * round);
      const Ideal base = ideal_pow(o, g0, L);  // search k with base^k = 1, k in [lo/L, hi/L]
      const BigInt klo = (lo + L - 1) / L, khi = hi / L;
      BigInt n;
      if (klo > khi) {
        n = 0;
      } else {
        const BigInt ms = ceil_sqrt(khi - klo + 1);
        if (ms > max_table) throw ComputeError("bsgs: memory guard exceeded");
        const std::size_t msz = static_cast<std::size_t>(ms.convert_to<long long>());
        std::unordered_map<std::string, std::size_t> table;
        Ideal x = unit_ideal(o);
        for (std::size_t j = 0; j < msz; ++j) {
          table.try_emplace(serialize(x), j);
          x = ideal_compose(o, x, base);
          ++out.baby;
        }
        const Ideal step = x;  // base^ms
        Ideal y = ideal_pow(o, base, klo);
        for (BigInt i = 0; klo + i * ms <= khi + ms; ++i) {
          auto it = table.find(serialize(y));
          if (it != table.end()) {
            const BigInt k = klo + i * ms - it->second;
            if (k > 0) {
              n = k;
              break;
            }
          }
          y = ideal_compose(o, y, step);
          ++out.giant;
        }
      }
      if (n == 0) throw ComputeError("bsgs: no multiple of the order in the interval");
      L = lcm_big(L, order_from_multiple(o, g0, n * L));
      auto h = resolve_class_number(o, L, lo, hi, seed + round);
      if (h) {
        out.value = *h;
        return out;
      }
    }
    throw ComputeError("bsgs: class number ambiguous");
  }
  if (c.signature != Signature::UnitRankOne) throw InvalidInput("bsgs: unsupported signature");
  // Infrastructure: smallest n in [lo, hi] (or just below) with D(2n) the identity.
  const Infrastructure inf(c);
  const BigInt width = 2 * (hi - lo) + 1;
  const BigInt S = ceil_sqrt(width);
  if (S > max_table) throw ComputeError("bsgs: memory guard exceeded");
  const BigInt window = S + 2 * c.genus + 8;
  std::unordered_map<std::string, BigInt> table;
  InfraDivisor d = inf.identity();
  table.emplace(serialize(d.ideal), d.delta);
  while (true) {
    d = inf.baby_step(d);
    ++out.baby;
    if (inf.is_identity(d)) {  // the whole cycle fits in the table: period found directly
      out.value = d.delta / 2;
      return out;
    }
    if (d.delta > window) break;
    table.try_emplace(serialize(d.ideal), d.delta);
  }
  const InfraDivisor stride = inf.below(S);
  InfraDivisor x = inf.below(2 * lo);
  while (x.delta <= 2 * hi + window) {
    auto it = table.find(serialize(x.ideal));
    if (it != table.end() && x.delta > it->second) {
      out.value = (x.delta - it->second) / 2;
      return out;
    }
    x = inf.giant_step(x, stride).first;
    ++out.giant;
  }
  throw ComputeError("bsgs: no multiple of the regulator in the interval");
}

// ---------------------------------------------------------------------------
// Sampling harness

AlphaStats alpha_stats(u64 q, int g, int n, Variant v, std::uint64_t seed, int m) {
  std::vector<std::pair<int, int>> shapes;  // (deg G, deg H)
  for (int dH = 1; 2 * dH <= g + 1; ++dH) {
    const int dG = g + 1 - dH;
    if ((dG + 2 * dH) % 3 != 0) shapes.emplace_back(dG, dH);
  }
  if (shapes.empty()) throw InvalidInput("alpha_stats: no signature-(3,1) degree pair for this genus");
  AlphaStats out;
  Rng rng(seed);
  auto random_monic = [&](int d) {
    std::vector<u64> cs(d + 1);
    for (int i = 0; i < d; ++i) cs[i] = rng.below(q);
    cs[d] = 1;
    return Poly(q, cs);
  };
  double sum = 0;
  int attempts = 0;
  while (out.n < n && attempts < 2 * n) {
    ++attempts;
    const auto [dG, dH] = shapes[rng.below(shapes.size())];
    const Poly G = random_monic(dG), H = random_monic(dH);
    if (!G.is_squarefree() || !H.is_squarefree() || gcd(G, H).degree() != 0) {
      --attempts;  // not a field of the family; redraw without counting
      continue;
    }
    try {
      const CurveModel c = new_curve(q, G, H);
      const Estimate e = estimate(c, v);
      PlanOptions po;
      po.m = m;
      po.seed = rng.next();
      const SearchPlan p = make_plan(c, e, po);
      const SearchResult r = run_kangaroo(c, e, p, SearchOptions{{}, 0, 0, false});
      const double ratio = estimate_ratio(e, r.value);
      out.ratios.push_back(ratio);
      sum += ratio;
      ++out.n;
    } catch (const std::exception&) {
      ++out.failures;
    }
  }
  if (out.n > 0) {
    out.mean = sum / out.n;
    out.min = *std::min_element(out.ratios.begin(), out.ratios.end());
    out.max = *std::max_element(out.ratios.begin(), out.ratios.end());
  }
  return out;
}

}  // namespace cubicff

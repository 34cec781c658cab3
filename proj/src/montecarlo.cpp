/*
 * Copyright 2026 The lifeins Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "lifeins/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <random>
#include <thread>

namespace lifeins {

void SimConfig::validate() const {
  auto bad = [](const char* field, const std::string& what) {
    throw Error(ErrorCode::ConfigInvalid, std::string(field) + ": " + what, field);
  };
  if (n_paths < 1) bad("paths", "must be >= 1");
  if (!(dt > 0.0 && dt <= 1.0 / 252.0)) bad("dt", "must lie in (0, 1/252]");
  if (!(horizon_cap > 0.0 && std::isfinite(horizon_cap))) bad("horizon_cap", "must be > 0");
  if (!std::isfinite(wealth)) bad("wealth", "must be finite");
  if (workers < 0) bad("workers", "must be >= 0");
}

const Estimate& SimResult::get(const std::string& name) const {
  for (const Estimate& e : estimates) {
    if (e.name == name) return e;
  }
  throw Error(ErrorCode::InvalidParameter, "no estimate named " + name, name);
}

std::uint64_t path_seed(std::uint64_t seed, std::uint64_t path_index) { return seed ^ path_index; }

std::uint64_t rng_fingerprint(std::uint64_t seed) {
  std::mt19937_64 eng(path_seed(seed, 0));
  std::uint64_t h = 1469598103934665603ULL;
  for (int i = 0; i < 4; ++i) {
    h ^= eng();
    h *= 1099511628211ULL;
  }
  return h;
}

double bridge_crossing_probability(double a, double b, double v2, double t) {
  if (a <= 0.0 || b <= 0.0) return 1.0;
  return std::exp(-2.0 * a * b / (v2 * t));
}

namespace {

using Engine = std::mt19937_64;
constexpr std::uint64_t kChunk = 1 << 14;

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs per_path over [0, n) in fixed chunks and returns one accumulator per
// chunk, in chunk order.
template <typename Acc, typename F>
std::vector<Acc> run_chunks(const SimConfig& cfg, F per_path) {
  const std::uint64_t n = cfg.n_paths;
  const std::uint64_t n_chunks = (n + kChunk - 1) / kChunk;
  std::vector<Acc> out(n_chunks);
  std::atomic<std::uint64_t> next{0};
  auto work = [&] {
    for (std::uint64_t c = next++; c < n_chunks; c = next++) {
      Acc acc{};
      const std::uint64_t end = std::min(n, (c + 1) * kChunk);
      for (std::uint64_t i = c * kChunk; i < end; ++i) {
        Engine eng(path_seed(cfg.seed, i));
        per_path(eng, acc);
      }
      out[c] = acc;
    }
  };
  const int workers = std::min<int>(resolve_workers(cfg.workers), static_cast<int>(n_chunks));
  if (workers <= 1) {
    work();
    return out;
  }
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        work();
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

Estimate proportion(const std::string& name, std::uint64_t hits, std::uint64_t n) {
  const double p = static_cast<double>(hits) / static_cast<double>(n);
  return {name, p, std::sqrt(p * (1.0 - p) / static_cast<double>(n))};
}

struct PhaseOutcome {
  bool hit = false;
  double end = 0.0;
};

// Arithmetic Brownian motion from x0 > 0 over a time span, absorbed at zero.
PhaseOutcome run_phase(Engine& eng, double x0, double drift, double v2, double span,
                       const SimConfig& cfg) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif;
  auto step = [&](double x, double h, PhaseOutcome& o) {
    const double x1 = x + drift * h + std::sqrt(v2 * h) * normal(eng);
    if (x1 <= 0.0) {
      o.hit = true;
      return x1;
    }
    if (cfg.bridge_correction || cfg.aggregate_steps) {
      const double p = bridge_crossing_probability(x, x1, v2, h);
      if (unif(eng) < p) o.hit = true;
    }
    return x1;
  };
  PhaseOutcome o;
  if (span <= 0.0) {
    o.end = x0;
    return o;
  }
  if (cfg.aggregate_steps) {
    o.end = step(x0, span, o);
    return o;
  }
  double x = x0;
  double t = 0.0;
  while (t < span && !o.hit) {
    const double h = std::min(cfg.dt, span - t);
    x = step(x, h, o);
    t += h;
  }
  o.end = x;
  return o;
}

struct RuinAcc {
  std::uint64_t before = 0;
  std::uint64_t at_jump = 0;
  std::uint64_t after = 0;
  std::uint64_t truncated = 0;
};

}  // namespace

SimResult estimate_ruin_probability(const SimConfig& cfg, const RuinInputs& in) {
  cfg.validate();
  in.validate();
  const double v2 = 2.0 * in.m / (in.alpha * in.alpha);
  const double nu = in.r * in.delta;
  auto per_path = [&](Engine& eng, RuinAcc& acc) {
    std::exponential_distribution<double> ex(in.lambda_x);
    std::exponential_distribution<double> ey(in.lambda_y);
    const double tx = ex(eng);
    const double ty = ey(eng);
    const double t1 = std::min(tx, ty);
    const double t2 = std::max(tx, ty);
    const bool x_survives = tx > ty;
    const PhaseOutcome p1 = run_phase(eng, in.c0, nu, v2, std::min(t1, cfg.horizon_cap), cfg);
    if (p1.hit) {
      ++acc.before;
      return;
    }
    if (t1 > cfg.horizon_cap) {
      ++acc.truncated;
      return;
    }
    const double c = p1.end + (x_survives ? in.jump_x : in.jump_y);
    if (c <= 0.0) {
      ++acc.at_jump;
      return;
    }
    const double lam_a = x_survives ? in.lambda_x : in.lambda_y;
    const double drift2 = (in.m - lam_a) / in.alpha;
    const PhaseOutcome p2 =
        run_phase(eng, c, drift2, v2, std::min(t2, cfg.horizon_cap) - t1, cfg);
    if (p2.hit) {
      ++acc.after;
    } else if (t2 > cfg.horizon_cap) {
      ++acc.truncated;
    }
  };
  const std::vector<RuinAcc> chunks = run_chunks<RuinAcc>(cfg, per_path);
  RuinAcc tot;
  for (const RuinAcc& a : chunks) {
    tot.before += a.before;
    tot.at_jump += a.at_jump;
    tot.after += a.after;
    tot.truncated += a.truncated;
  }
  const std::uint64_t n = cfg.n_paths;
  SimResult res;
  res.n_paths = n;
  res.truncated = tot.truncated;
  res.n_effective = n - tot.truncated;
  res.rng_fingerprint = rng_fingerprint(cfg.seed);
  res.estimates = {proportion("p_before", tot.before, n),
                   proportion("p_between", tot.at_jump + tot.after, n),
                   proportion("p_at_first_death", tot.at_jump, n),
                   proportion("p_total", tot.before + tot.at_jump + tot.after, n)};
  return res;
}

SimResult estimate_ruin_probability(const SimConfig& cfg, const PolicySolution& sol) {
  return estimate_ruin_probability(cfg, ruin_inputs(sol, cfg.wealth));
}

namespace {
struct LossAcc {
  std::uint64_t single = 0;
  std::uint64_t continuous = 0;
};
}  // namespace

SimResult estimate_insurer_loss_probability(const SimConfig& cfg, const MarketParams& mkt,
                                            const HouseholdParams& hh, const QuotePair& quotes,
                                            double benefit_single, double benefit_continuous) {
  cfg.validate();
  if (quotes.single.scheme != Scheme::Single || quotes.continuous.scheme != Scheme::Continuous) {
    throw Error(ErrorCode::InvalidParameter, "quote pair has the wrong schemes", "scheme");
  }
  const double r = mkt.r();
  const double big_h = quotes.single.rate;
  const double small_h = quotes.continuous.rate;
  auto per_path = [&](Engine& eng, LossAcc& acc) {
    std::exponential_distribution<double> e1(hh.total_hazard());
    const double t1 = e1(eng);
    const double disc = std::exp(-r * t1);
    const double annuity = -std::expm1(-r * t1) / r;
    if (benefit_single * (disc - big_h) > 0.0) ++acc.single;
    if (benefit_continuous * (disc - small_h * annuity) > 0.0) ++acc.continuous;
  };
  const std::vector<LossAcc> chunks = run_chunks<LossAcc>(cfg, per_path);
  LossAcc tot;
  for (const LossAcc& a : chunks) {
    tot.single += a.single;
    tot.continuous += a.continuous;
  }
  SimResult res;
  res.n_paths = cfg.n_paths;
  res.n_effective = cfg.n_paths;
  res.rng_fingerprint = rng_fingerprint(cfg.seed);
  res.estimates = {proportion("loss_single", tot.single, cfg.n_paths),
                   proportion("loss_continuous", tot.continuous, cfg.n_paths)};
  return res;
}

namespace {
struct MomentAcc {
  double s = 0.0, s2 = 0.0;
  double a = 0.0, b = 0.0, aa = 0.0, bb = 0.0, ab = 0.0;
  std::uint64_t survive = 0;
};
}  // namespace

SimResult simulate_consumption_paths(const SimConfig& cfg, const PolicySolution& sol,
                                     double probe) {
  cfg.validate();
  if (!(probe > 0.0)) throw Error(ErrorCode::ConfigInvalid, "probe time must be > 0", "probe");
  const double r = sol.market.r();
  const double nu = r * wealth_drift(sol);
  const double v = (sol.market.mu() - r) / (sol.household.alpha() * sol.market.sigma());
  const double half = 0.5 * probe;
  const double lam = sol.household.total_hazard();
  auto per_path = [&](Engine& eng, MomentAcc& acc) {
    std::exponential_distribution<double> e1(lam);
    std::normal_distribution<double> normal;
    const double t1 = e1(eng);
    const double i1 = nu * half + v * std::sqrt(half) * normal(eng);
    const double i2 = nu * half + v * std::sqrt(half) * normal(eng);
    const double tot = i1 + i2;
    acc.s += tot;
    acc.s2 += tot * tot;
    acc.a += i1;
    acc.b += i2;
    acc.aa += i1 * i1;
    acc.bb += i2 * i2;
    acc.ab += i1 * i2;
    if (t1 > probe) ++acc.survive;
  };
  const std::vector<MomentAcc> chunks = run_chunks<MomentAcc>(cfg, per_path);
  MomentAcc t;
  for (const MomentAcc& c : chunks) {
    t.s += c.s;
    t.s2 += c.s2;
    t.a += c.a;
    t.b += c.b;
    t.aa += c.aa;
    t.bb += c.bb;
    t.ab += c.ab;
    t.survive += c.survive;
  }
  const double n = static_cast<double>(cfg.n_paths);
  const double mean = t.s / n;
  const double var = std::max(0.0, (t.s2 - n * mean * mean) / std::max(1.0, n - 1.0));
  const double ma = t.a / n;
  const double mb = t.b / n;
  const double cov = t.ab / n - ma * mb;
  const double va = t.aa / n - ma * ma;
  const double vb = t.bb / n - mb * mb;
  const double corr = cov / std::sqrt(std::max(va * vb, 1e-300));
  SimResult res;
  res.n_paths = cfg.n_paths;
  res.n_effective = cfg.n_paths;
  res.rng_fingerprint = rng_fingerprint(cfg.seed);
  res.estimates = {
      {"mean_increment", mean, std::sqrt(var / n)},
      {"variance_rate", var / probe, var / probe * std::sqrt(2.0 / std::max(1.0, n - 1.0))},
      {"increment_correlation", corr, 1.0 / std::sqrt(n)},
      proportion("survival_to_probe", t.survive, cfg.n_paths),
  };
  return res;
}

namespace {

// Wealth and consumption of one scheme along a shared Brownian path.
class PathModel {
 public:
  PathModel(const PolicySolution& sol, double wealth) : sol_(sol) {
    const MarketParams& mkt = sol.market;
    const HouseholdParams& hh = sol.household;
    r_ = mkt.r();
    alpha_ = hh.alpha();
    kappa_ = (mkt.mu() - r_) / (alpha_ * r_ * mkt.sigma());
    drift_ = wealth_drift(sol);
    w0_ = wealth;
    if (sol.quote.scheme == Scheme::Single) w0_ -= sol.quote.rate * sol.benefit;
  }

  double wealth_before(double t, double b) const { return w0_ + drift_ * t + kappa_ * b; }

  double consumption_before(double t, double b) const {
    return r_ * wealth_before(t, b) - sol_.coefficient.log_k / alpha_;
  }

  double wealth_after(double t1, double b1, double t, double b, Survivor s) const {
    const double lam = s == Survivor::X ? sol_.household.lambda_x() : sol_.household.lambda_y();
    return wealth_before(t1, b1) + sol_.benefit +
           (sol_.market.m() - lam) / (alpha_ * r_) * (t - t1) + kappa_ * (b - b1);
  }

  double consumption_after(double w, Survivor s) const {
    return consumption_rate(sol_, w, Phase::AfterFirstDeath, s);
  }

 private:
  const PolicySolution& sol_;
  double r_ = 0.0, alpha_ = 0.0, kappa_ = 0.0, drift_ = 0.0, w0_ = 0.0;
};

struct DeathTimes {
  double t1;
  double t2;
  Survivor survivor;
};

DeathTimes draw_deaths(Engine& eng, const HouseholdParams& hh) {
  std::exponential_distribution<double> ex(hh.lambda_x());
  std::exponential_distribution<double> ey(hh.lambda_y());
  const double tx = ex(eng);
  const double ty = ey(eng);
  return {std::min(tx, ty), std::max(tx, ty), tx > ty ? Survivor::X : Survivor::Y};
}

// Walks a Brownian path on a dt grid that also contains t1, calling
// visit(t, B_t, after_first_death, t1, B_{t1}) at every grid point.
template <typename Visit>
void walk(Engine& eng, const DeathTimes& d, double dt, double until, Visit visit) {
  std::normal_distribution<double> normal;
  double t = 0.0;
  double b = 0.0;
  double b1 = 0.0;
  bool after = false;
  const double end = std::min(d.t2, until);
  visit(t, b, after, d.t1, b1);
  while (t < end) {
    double target = std::min(t + dt, end);
    if (!after && target >= d.t1) target = std::min(d.t1, end);
    const double h = target - t;
    b += std::sqrt(h) * normal(eng);
    t = target;
    if (!after && t >= d.t1) {
      b1 = b;
      visit(t, b, false, d.t1, b1);  // value just before the death
      after = true;
    }
    visit(t, b, after, d.t1, b1);
  }
}

}  // namespace

std::vector<PathPoint> sample_path(const SimConfig& cfg, const PolicySolution& sol,
                                   std::uint64_t path_index, double until) {
  cfg.validate();
  Engine eng(path_seed(cfg.seed, path_index));
  const DeathTimes d = draw_deaths(eng, sol.household);
  const PathModel pm(sol, cfg.wealth);
  std::vector<PathPoint> out;
  walk(eng, d, cfg.dt, std::min(until, cfg.horizon_cap),
       [&](double t, double b, bool after, double t1, double b1) {
         if (!after) {
           out.push_back({t, pm.consumption_before(t, b), pm.wealth_before(t, b)});
         } else {
           const double w = pm.wealth_after(t1, b1, t, b, d.survivor);
           out.push_back({t, pm.consumption_after(w, d.survivor), w});
         }
       });
  return out;
}

namespace {
struct GapAcc {
  double consumption = 0.0;
  double wealth = 0.0;
};
}  // namespace

EquivalenceReport verify_consumption_equivalence(const SimConfig& cfg, const MarketParams& mkt,
                                                 const HouseholdParams& hh,
                                                 const QuotePair& quotes) {
  cfg.validate();
  const PolicySolution single = solve_policy(mkt, hh, quotes.single);
  const PolicySolution cont = solve_policy(mkt, hh, quotes.continuous);
  const PathModel ps(single, cfg.wealth);
  const PathModel pc(cont, cfg.wealth);
  auto per_path = [&](Engine& eng, GapAcc& acc) {
    const DeathTimes d = draw_deaths(eng, hh);
    walk(eng, d, cfg.dt, cfg.horizon_cap,
         [&](double t, double b, bool after, double t1, double b1) {
           double cs, cc, ws, wc;
           if (!after) {
             cs = ps.consumption_before(t, b);
             cc = pc.consumption_before(t, b);
             ws = ps.wealth_before(t, b);
             wc = pc.wealth_before(t, b);
           } else {
             ws = ps.wealth_after(t1, b1, t, b, d.survivor);
             wc = pc.wealth_after(t1, b1, t, b, d.survivor);
             cs = ps.consumption_after(ws, d.survivor);
             cc = pc.consumption_after(wc, d.survivor);
           }
           acc.consumption = std::max(acc.consumption, std::abs(cs - cc));
           acc.wealth = std::max(acc.wealth, std::abs(ws - wc));
         });
  };
  const std::vector<GapAcc> chunks = run_chunks<GapAcc>(cfg, per_path);
  EquivalenceReport rep;
  rep.paths = cfg.n_paths;
  for (const GapAcc& g : chunks) {
    rep.max_consumption_gap = std::max(rep.max_consumption_gap, g.consumption);
    rep.max_wealth_gap = std::max(rep.max_wealth_gap, g.wealth);
  }
  const double r = mkt.r();
  const double big_h = quotes.single.rate;
  const double lhs = r * big_h * single.benefit;
  const double rhs = quotes.continuous.rate * cont.benefit;
  rep.premium_identity_gap = lhs > 0.0 ? std::abs(lhs - rhs) / lhs : std::abs(rhs);
  const double dd = (1.0 - big_h) * single.benefit;
  rep.benefit_identity_gap =
      cont.benefit > 0.0 ? std::abs(dd - cont.benefit) / cont.benefit : std::abs(dd);
  return rep;
}

}  // namespace lifeins

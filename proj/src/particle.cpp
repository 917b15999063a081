#include "catbranch/particle.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace catbranch {

double SimConfig::split_rate_factor() const {
  return rate_convention == RateConvention::birth_rate ? 1.0 : 0.5;
}

void SimConfig::validate() const {
  if (!(b1 > 0.0) || !(b2 > 0.0)) throw InputError("rates b1, b2 must be > 0");
  if (n < 1) throw InputError("rescaling index n must be >= 1");
  if (!(x0 >= 0.0) || !(y0 >= 0.0)) throw InputError("initial masses must be >= 0");
  for (double m : {x0, y0})
    if (std::abs(m * n - std::round(m * n)) > 1e-9 * std::max(1.0, m * n))
      throw InputError("initial masses must be multiples of 1/n");
  if (!(delta >= 0.0)) throw InputError("delta must be >= 0");
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw InputError("t_max must be finite and > 0");
  if (max_live == 0) throw InputError("max_live must be > 0");
}

Representation parse_representation(const std::string& s) {
  if (s == "galton_watson") return Representation::galton_watson;
  if (s == "birth_death") return Representation::birth_death;
  throw InputError("unknown representation '" + s + "'");
}

RateConvention parse_rate_convention(const std::string& s) {
  if (s == "birth_rate") return RateConvention::birth_rate;
  if (s == "lifetime") return RateConvention::lifetime;
  throw InputError("unknown rate convention '" + s + "'");
}

std::string to_string(Representation r) {
  return r == Representation::galton_watson ? "galton_watson" : "birth_death";
}

std::string to_string(RateConvention r) {
  return r == RateConvention::birth_rate ? "birth_rate" : "lifetime";
}

double stopping_time(const MassPath& path, double delta) {
  if (!(delta >= 0.0)) throw InputError("delta must be >= 0");
  for (std::size_t i = 0; i < path.values.size(); ++i)
    if (path.values[i] <= delta) return path.times[i];
  return kInf;
}

namespace {

std::size_t initial_count(double mass, int n) {
  return static_cast<std::size_t>(std::llround(mass * n));
}

void shuffle_roots(FamilyForest& f, Rng& rng) {
  for (std::size_t i = f.roots.size(); i > 1; --i) std::swap(f.roots[i - 1], f.roots[rng.index(i)]);
}

void finish(Population& pop, double t_end, const SimConfig& cfg, std::size_t alive) {
  if (alive > 0) {
    for (Node& nd : pop.forest.nodes) nd.death = std::min(nd.death, t_end);
    pop.forest.height_cap = t_end;
  }
  pop.mass.horizon = cfg.t_max;
  if (cfg.record_forest)
    assign_labels(pop.forest);
  else
    pop.forest = FamilyForest{};
}

// rate_b: b1 or b2; env: catalyst mass (or constant 1 for the catalyst itself).
Population run(const SimConfig& cfg, const MassPath& env, double rate_b, std::size_t n0, double t_end,
               Rng& rng) {
  const double inv_n = 1.0 / cfg.n;
  const double per_env = 2.0 * cfg.split_rate_factor() * cfg.n * rate_b;  // lifetime rate per unit env
  StepIntegral clock(env);
  Population pop;
  pop.mass.values = {static_cast<double>(n0) * inv_n};
  auto& F = pop.forest;
  std::size_t alive = n0;
  if (alive > cfg.max_live) throw OverflowError("initial population exceeds max_live");

  auto record = [&](double t) {
    pop.mass.times.push_back(t);
    pop.mass.values.push_back(static_cast<double>(alive) * inv_n);
    ++pop.events;
  };

  if (cfg.representation == Representation::galton_watson) {
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> q;
    auto lifetime_end = [&](double birth) {
      return clock.inverse(clock.at(birth) + rng.exp1() / per_env);
    };
    for (std::size_t i = 0; i < n0; ++i) {
      int v = add_root(F, 0.0, kInf);
      F.nodes[v].death = lifetime_end(0.0);
      q.push({F.nodes[v].death, v});
    }
    shuffle_roots(F, rng);
    while (!q.empty() && q.top().first <= t_end) {
      auto [t, v] = q.top();
      q.pop();
      if (rng.coin()) {
        int a = add_child(F, v, kInf);
        int b = add_child(F, v, kInf);
        F.nodes[a].death = lifetime_end(t);
        F.nodes[b].death = lifetime_end(t);
        if (rng.coin()) std::swap(F.nodes[v].children[0], F.nodes[v].children[1]);
        q.push({F.nodes[a].death, a});
        q.push({F.nodes[b].death, b});
        ++alive;
        if (alive > cfg.max_live) throw OverflowError("live population exceeded max_live");
      } else {
        --alive;
      }
      record(t);
    }
  } else {
    std::vector<int> live;
    for (std::size_t i = 0; i < n0; ++i) live.push_back(add_root(F, 0.0, kInf));
    shuffle_roots(F, rng);
    double t = 0.0;
    while (!live.empty()) {
      double tn = clock.inverse(clock.at(t) + rng.exp1() / (per_env * static_cast<double>(live.size())));
      if (tn > t_end) break;
      t = tn;
      std::size_t k = rng.index(live.size());
      int v = live[k];
      F.nodes[v].death = t;
      if (rng.coin()) {
        int a = add_child(F, v, kInf);
        int b = add_child(F, v, kInf);
        // which offspring continues the parent's slot
        if (rng.coin()) std::swap(a, b);
        live[k] = a;
        live.push_back(b);
        ++alive;
        if (alive > cfg.max_live) throw OverflowError("live population exceeded max_live");
      } else {
        live[k] = live.back();
        live.pop_back();
        --alive;
      }
      record(t);
    }
  }
  finish(pop, t_end, cfg, alive);
  return pop;
}

}  // namespace

Population simulate_catalyst(const SimConfig& cfg, Rng& rng) {
  cfg.validate();
  static const MassPath unit = MassPath::constant(1.0);
  return run(cfg, unit, cfg.b1, initial_count(cfg.x0, cfg.n), cfg.t_max, rng);
}

Population simulate_catalyst(const SimConfig& cfg) {
  Rng rng(stream_seed(cfg.seed, 0));
  return simulate_catalyst(cfg, rng);
}

Population simulate_reactant_quenched(const SimConfig& cfg, const MassPath& catalyst, Rng& rng) {
  cfg.validate();
  if (catalyst.times.size() != catalyst.values.size() || catalyst.times.empty() || catalyst.times.front() != 0.0)
    throw InputError("malformed catalyst path");
  if (!catalyst.absorbed() && catalyst.horizon < cfg.t_max)
    throw InputError("catalyst path does not cover the simulation horizon");
  const double t_end = std::min(cfg.t_max, stopping_time(catalyst, 0.0));
  Population pop = run(cfg, catalyst, cfg.b2, initial_count(cfg.y0, cfg.n), t_end, rng);
  const double cut = std::min(cfg.t_max, stopping_time(catalyst, cfg.delta));
  if (cut < t_end) pop.forest = truncate(pop.forest, cut);
  return pop;
}

Population simulate_reactant_quenched(const SimConfig& cfg, const MassPath& catalyst) {
  Rng rng(stream_seed(cfg.seed, 1));
  return simulate_reactant_quenched(cfg, catalyst, rng);
}

JointResult simulate_joint(const SimConfig& cfg) {
  JointResult r;
  r.catalyst = simulate_catalyst(cfg);
  r.reactant = simulate_reactant_quenched(cfg, r.catalyst.mass);
  return r;
}

}  // namespace catbranch

#include "catbranch/diffusion.hpp"

#include <algorithm>
#include <cmath>

namespace catbranch {

void FellerConfig::validate() const {
  if (!(x0 >= 0.0) || !(y0 >= 0.0)) throw InputError("initial values must be >= 0");
  if (!(b1 > 0.0) || !(b2 > 0.0)) throw InputError("b1, b2 must be > 0");
  if (!(dt > 0.0)) throw InputError("dt must be > 0");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw InputError("horizon must be finite and > 0");
}

namespace {

std::size_t grid_steps(double horizon, double dt) {
  return static_cast<std::size_t>(std::ceil(horizon / dt - 1e-9));
}

// One full-truncation Euler step; returns the unclipped proposal.
inline double euler(double v, double var, double z) { return v + std::sqrt(var) * z; }

}  // namespace

FellerPaths integrate_catalytic_feller(const FellerConfig& cfg) {
  cfg.validate();
  Rng rx(stream_seed(cfg.seed, 0)), ry(stream_seed(cfg.seed, 1));
  const std::size_t K = grid_steps(cfg.horizon, cfg.dt);
  FellerPaths out;
  for (DiffusionPath* p : {&out.x, &out.y}) {
    p->dt = cfg.dt;
    p->seed = cfg.seed;
    p->values.reserve(K + 1);
  }
  double x = cfg.x0, y = cfg.y0;
  out.x.values.push_back(x);
  out.y.values.push_back(y);
  if (x == 0.0) out.x.absorbed_index = 0;
  if (y == 0.0) out.y.absorbed_index = 0;
  for (std::size_t k = 1; k <= K; ++k) {
    const double xl = x;
    if (x > 0.0 && !cfg.freeze_catalyst) {
      x = std::max(0.0, euler(x, cfg.b1 * x * cfg.dt, rx.normal()));
      if (x == 0.0) out.x.absorbed_index = static_cast<long>(k);
    }
    if (y > 0.0 && xl > 0.0) {
      y = std::max(0.0, euler(y, cfg.b2 * xl * y * cfg.dt, ry.normal()));
      if (y == 0.0) out.y.absorbed_index = static_cast<long>(k);
    }
    out.x.values.push_back(x);
    out.y.values.push_back(y);
  }
  return out;
}

RaceResult absorption_race(const FellerConfig& cfg) {
  cfg.validate();
  Rng rx(stream_seed(cfg.seed, 0)), ry(stream_seed(cfg.seed, 1));
  const std::size_t K = grid_steps(cfg.horizon, cfg.dt);
  RaceResult r;
  double x = cfg.x0, y = cfg.y0;
  if (x == 0.0 || y == 0.0) {
    r.first = y == 0.0 ? Absorbed::reactant : Absorbed::catalyst;
    r.x = x;
    r.y = y;
    return r;
  }
  const double cx = cfg.b1 * cfg.dt, cy = cfg.b2 * cfg.dt;
  for (std::size_t k = 1; k <= K; ++k) {
    double xp = cfg.freeze_catalyst ? x : euler(x, cx * x, rx.normal());
    double yp = euler(y, cy * x * y, ry.normal());
    if (xp <= 0.0 || yp <= 0.0) {
      r.time = static_cast<double>(k) * cfg.dt;
      if (xp <= 0.0 && yp <= 0.0) {
        // both cross within the step: compare linear crossing fractions
        r.first = y / (y - yp) < x / (x - xp) ? Absorbed::reactant : Absorbed::catalyst;
      } else {
        r.first = yp <= 0.0 ? Absorbed::reactant : Absorbed::catalyst;
      }
      r.x = std::max(0.0, xp);
      r.y = r.first == Absorbed::catalyst ? std::max(0.0, yp) : 0.0;
      return r;
    }
    x = xp;
    y = yp;
  }
  r.time = static_cast<double>(K) * cfg.dt;
  r.x = x;
  r.y = y;
  return r;
}

ScaleFunction::ScaleFunction(const DiffusionPath& X, double delta) : X_(X) {
  if (!(delta >= 0.0)) throw InputError("delta must be >= 0");
  const auto& v = X.values;
  if (v.size() < 2) throw InputError("catalyst path too short");
  std::size_t K = v.size() - 1;
  for (std::size_t k = 0; k < v.size(); ++k)
    if (v[k] <= delta) {
      K = k;
      break;
    }
  if (K == 0) throw InputError("catalyst path starts at or below delta");
  s_.assign(K + 1, 0.0);
  for (std::size_t k = 1; k <= K; ++k) s_[k] = s_[k - 1] + 0.5 * X.dt * (v[k - 1] + v[k]);
  end_ = static_cast<double>(K) * X.dt;
}

double ScaleFunction::operator()(double x) const {
  x = std::clamp(x, 0.0, end_);
  double q = x / X_.dt;
  auto k = std::min(static_cast<std::size_t>(q), s_.size() - 2);
  return s_[k] + (q - static_cast<double>(k)) * (s_[k + 1] - s_[k]);
}

double ScaleFunction::derivative(double x) const { return X_.at(std::clamp(x, 0.0, end_)); }

double ScaleFunction::inverse(double v) const {
  std::size_t hint = static_cast<std::size_t>(std::upper_bound(s_.begin(), s_.end(), v) - s_.begin());
  hint = hint ? hint - 1 : 0;
  return inverse(v, hint);
}

double ScaleFunction::inverse(double v, std::size_t& k) const {
  v = std::clamp(v, 0.0, s_.back());
  k = std::min(k, s_.size() - 2);
  while (k > 0 && s_[k] > v) --k;
  while (k + 2 < s_.size() && s_[k + 1] <= v) ++k;
  double w = s_[k + 1] > s_[k] ? (v - s_[k]) / (s_[k + 1] - s_[k]) : 0.0;
  return (static_cast<double>(k) + std::clamp(w, 0.0, 1.0)) * X_.dt;
}

ScaleFunction scale_function(const DiffusionPath& X, double delta) { return ScaleFunction(X, delta); }

LimitContour simulate_limit_contour(const DiffusionPath& X, double delta, const LimitContourOptions& opt) {
  if (!(delta > 0.0)) throw InputError("limit contour needs delta > 0");
  if (!(opt.dt > 0.0) || !(opt.budget > 0.0)) throw InputError("dt and budget must be > 0");
  ScaleFunction s(X, delta);
  const double top = s.range_end();
  Rng rng(stream_seed(opt.seed, 2));
  LimitContour out;
  out.tau = s.domain_end();
  out.zeta.dt = opt.dt;
  out.zeta.seed = opt.seed;
  out.zeta.values.push_back(0.0);
  double b = 0.0;
  std::size_t hint = 0;
  const double c = 4.0 * opt.dt;
  for (std::size_t step = 0; step < opt.max_steps; ++step) {
    double z = s.inverse(b, hint);
    // inside the domain X >= delta; the last grid cell may interpolate below it
    double xv = std::max(s.derivative(z), delta);
    double p = b + std::sqrt(c * xv) * rng.normal();
    if (p < 0.0) {
      out.regulator += -2.0 * p;
      p = -p;
    }
    if (p > top) {
      p = std::max(0.0, 2.0 * top - p);
      out.reached_top = true;
    }
    b = p;
    if (out.regulator >= opt.budget) {
      out.zeta.values.push_back(0.0);
      out.budget_reached = true;
      break;
    }
    out.zeta.values.push_back(s.inverse(b, hint));
  }
  return out;
}

Excursion simulate_random_evolution(const MassPath& catalyst, const RandomEvolutionOptions& opt) {
  if (opt.n < 1 || !(opt.b2 > 0.0) || !(opt.y0 >= 0.0) || !(opt.delta >= 0.0))
    throw InputError("invalid random-evolution options");
  double top = stopping_time(catalyst, opt.delta);
  if (!std::isfinite(top)) top = catalyst.absorbed() ? kInf : catalyst.horizon;
  if (!std::isfinite(top)) throw InputError("catalyst path gives no finite upper boundary");
  const double kappa = opt.rate_convention == RateConvention::birth_rate ? 2.0 : 1.0;
  // flips per unit height: kappa * n * b2 * eta / 2
  const double unit = 2.0 / (kappa * opt.n * opt.b2);
  const double speed = 2.0 * opt.n;
  StepIntegral C(catalyst);
  Rng rng(stream_seed(opt.seed, 3));

  Excursion e;
  e.speed = speed;
  e.points.push_back({0.0, 0.0});
  const auto trees = static_cast<std::size_t>(std::llround(opt.y0 * opt.n));
  if (top <= 0.0) return e;
  double u = 0.0, h = 0.0;
  std::size_t flips = 0;
  for (std::size_t tr = 0; tr < trees; ++tr) {
    bool up = true;
    while (true) {
      if (++flips > opt.max_flips) throw OverflowError("random evolution exceeded max_flips");
      double next;
      if (up) {
        next = std::min(C.inverse(C.at(h) + unit * rng.exp1()), top);
      } else {
        double c = C.at(h) - unit * rng.exp1();
        next = c <= 0.0 ? 0.0 : std::min(C.inverse(c), h);
      }
      u += std::abs(next - h) / speed;
      h = next;
      e.points.push_back({u, h});
      if (!up && h == 0.0) break;
      up = !up;
    }
  }
  return e;
}

double local_time_estimate(const DiffusionPath& path, double t, double eps) {
  if (!(eps > 0.0)) throw InputError("band half-width must be > 0");
  const auto& v = path.values;
  double s = 0.0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (std::abs(v[i - 1] - t) < eps) s += (v[i] - v[i - 1]) * (v[i] - v[i - 1]);
  return s / (2.0 * eps);
}

double quadratic_variation(const DiffusionPath& path) {
  double s = 0.0;
  for (std::size_t i = 1; i < path.values.size(); ++i) {
    double d = path.values[i] - path.values[i - 1];
    s += d * d;
  }
  return s;
}

double quadratic_variation(const Excursion& e) {
  double s = 0.0;
  for (std::size_t i = 1; i < e.points.size(); ++i) {
    double d = e.points[i].e - e.points[i - 1].e;
    s += d * d;
  }
  return s;
}

Excursion to_excursion(const DiffusionPath& path) {
  Excursion e;
  e.points.reserve(path.values.size());
  for (std::size_t k = 0; k < path.values.size(); ++k)
    e.points.push_back({static_cast<double>(k) * path.dt, path.values[k]});
  return e;
}

}  // namespace catbranch

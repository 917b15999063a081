#include "catbranch/oracles.hpp"

#include <cmath>
#include <map>

#include "json.hpp"

#include "catbranch/stats.hpp"

namespace catbranch {

namespace {

void check_range(double t, double h, const char* what) {
  if (!(t >= 0.0) || !(h >= 0.0) || h > t) throw InputError(std::string(what) + ": need 0 <= h <= t");
}

double area(const MassPath& x, double a, double b) { return x.integral(a, b); }

double area(const DiffusionPath& x, double a, double b) {
  // trapezoid on the grid, linear interpolation at the ends
  if (b <= a) return 0.0;
  const double dt = x.dt;
  double s = 0.0;
  double lo = a;
  while (lo < b) {
    double hi = std::min(b, (std::floor(lo / dt + 1e-12) + 1.0) * dt);
    s += 0.5 * (hi - lo) * (x.at(lo) + x.at(hi));
    lo = hi;
  }
  return s;
}

template <class P>
double reactant_intensity(const P& X, double y_t, double t, double h1, double h2) {
  if (!(h1 >= 0.0) || h2 < h1 || h2 > t) throw InputError("reactant intensity: need 0 <= h1 <= h2 <= t");
  if (h1 == h2) return 0.0;
  double a2 = area(X, h2, t), a1 = area(X, h1, t);
  if (a2 <= 0.0) return kInf;
  return y_t * (1.0 / a2 - 1.0 / a1);
}

}  // namespace

double oracle_extinction_prob(const MassPath& rate, double t) {
  if (!(t >= 0.0)) throw InputError("t must be >= 0");
  double L = rate.integral(0.0, t);
  return L / (1.0 + L);
}

double oracle_extinction_prob(double rate, double t) { return oracle_extinction_prob(MassPath::constant(rate), t); }

double oracle_mrca_cdf(const MassPath& eta, double t, double h) {
  check_range(t, h, "mrca cdf");
  double a0 = eta.integral(0.0, t);
  if (!(a0 > 0.0)) throw InputError("mrca law undefined when int_0^t eta = 0");
  double ah = eta.integral(h, t);
  return (1.0 + a0) / a0 * (1.0 / (1.0 + ah) - 1.0 / (1.0 + a0));
}

double oracle_mrca_density(const MassPath& eta, double t, double h) {
  check_range(t, h, "mrca density");
  double a0 = eta.integral(0.0, t);
  if (!(a0 > 0.0)) throw InputError("mrca law undefined when int_0^t eta = 0");
  double ah = eta.integral(h, t);
  return eta.at(h) / ((1.0 + ah) * (1.0 + ah)) * (1.0 + a0) / a0;
}

double oracle_reactant_intensity(const MassPath& X, double y_t, double t, double h1, double h2) {
  return reactant_intensity(X, y_t, t, h1, h2);
}

double oracle_reactant_intensity(const DiffusionPath& X, double y_t, double t, double h1, double h2) {
  return reactant_intensity(X, y_t, t, h1, h2);
}

double oracle_brownian_intensity(double x_t, double t, double h1, double h2) {
  if (!(h1 >= 0.0) || h2 < h1) throw InputError("brownian intensity: need 0 <= h1 <= h2");
  if (h2 >= t) throw InputError("brownian intensity: h2 must be < t");
  return x_t * (1.0 / (t - h2) - 1.0 / (t - h1));
}

double stretch_map(const MassPath& x, double t, double h) {
  check_range(t, h, "stretch map");
  return x.integral(t - h, t);
}

double stretch_map_inverse(const MassPath& x, double t, double v) {
  if (!(v >= 0.0)) throw InputError("stretch map inverse: v must be >= 0");
  StepIntegral C(x);
  double ct = C.at(t);
  if (v > ct) throw InputError("stretch map inverse: v beyond int_0^t x");
  return t - C.inverse(ct - v);
}

double laplace_branching(double y, double lambda, const MassPath& b, double t) {
  if (!(lambda >= 0.0)) throw InputError("lambda must be >= 0");
  return std::exp(-y * lambda / (1.0 + lambda * b.integral(0.0, t)));
}

double laplace_branching(double y, double lambda, double b, double t) {
  return laplace_branching(y, lambda, MassPath::constant(b), t);
}

double hitting_probability(double b1, double b2, double x0, double y0) {
  if (!(x0 > 0.0)) return y0 > 0.0 ? 0.0 : 1.0;
  return 1.0 / std::sqrt(4.0 * b1 / b2 * y0 / (x0 * x0) + 1.0);
}

double feller_extinction_prob(double b1, double x0, double t) {
  if (!(t > 0.0)) return x0 == 0.0 ? 1.0 : 0.0;
  return std::exp(-2.0 * x0 / (b1 * t));
}

std::optional<double> different_tree_probability(const FamilyForest& f, double t) {
  auto lv = level_set(f, t);
  if (lv.empty()) return std::nullopt;
  std::map<int, double> per_tree;
  for (const auto& p : lv) per_tree[tree_of(f, p.node)] += 1.0;
  const double N = static_cast<double>(lv.size());
  double s = 0.0;
  for (auto& [r, k] : per_tree) s += (k / N) * (k / N);
  return 1.0 - s;
}

ComparisonStat comparison_statistic(const std::vector<FamilyForest>& reactant,
                                    const std::vector<FamilyForest>& brownian, double t) {
  auto collect = [t](const std::vector<FamilyForest>& v) {
    std::vector<double> out;
    for (const auto& f : v)
      if (auto p = different_tree_probability(f, t)) out.push_back(*p);
    return out;
  };
  auto r = collect(reactant), b = collect(brownian);
  MeanSe mr = mean_se(r), mb = mean_se(b);
  return {mr.mean, mr.se, mb.mean, mb.se, r.size(), b.size()};
}

std::string to_json(const std::vector<OracleReport>& reports) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : reports) {
    nlohmann::json j{{"name", r.name},       {"anchor", r.anchor}, {"statistic", r.statistic},
                     {"target", r.target},   {"test", r.test},     {"criterion", r.criterion},
                     {"pass", r.pass}};
    if (r.p_value >= 0.0)
      j["p_value"] = r.p_value;
    else
      j["ci"] = {r.ci_lo, r.ci_hi};
    arr.push_back(j);
  }
  return arr.dump(2);
}

}  // namespace catbranch

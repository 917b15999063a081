#include "catbranch/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/poisson.hpp>

#include "catbranch/common.hpp"

namespace catbranch {

double kolmogorov_survival(double lambda) {
  if (lambda <= 0.0) return 1.0;
  constexpr double pi = 3.14159265358979323846;
  if (lambda < 1.18) {
    double s = 0.0;
    for (int k = 1; k <= 8; ++k) {
      double j = 2.0 * k - 1.0;
      s += std::exp(-j * j * pi * pi / (8.0 * lambda * lambda));
    }
    return std::clamp(1.0 - std::sqrt(2.0 * pi) / lambda * s, 0.0, 1.0);
  }
  double s = 0.0;
  for (int k = 1; k <= 100; ++k) {
    double term = std::exp(-2.0 * k * k * lambda * lambda);
    s += (k % 2 ? 1.0 : -1.0) * term;
    if (term < 1e-300) break;
  }
  return std::clamp(2.0 * s, 0.0, 1.0);
}

TestResult ks_one_sample(std::vector<double> x, const std::function<double(double)>& cdf) {
  TestResult r;
  if (x.empty()) {
    r.degenerate = true;
    return r;
  }
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double f = cdf(x[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  const double en = std::sqrt(n);
  r.statistic = d;
  r.p_value = kolmogorov_survival((en + 0.12 + 0.11 / en) * d);
  return r;
}

TestResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  TestResult r;
  if (a.empty() || b.empty()) {
    r.degenerate = true;
    return r;
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double en = std::sqrt(na * nb / (na + nb));
  r.statistic = d;
  r.p_value = kolmogorov_survival((en + 0.12 + 0.11 / en) * d);
  return r;
}

TestResult exact_poisson_test(long k, double mean) {
  if (k < 0 || !(mean >= 0.0)) throw InputError("poisson test needs k >= 0 and mean >= 0");
  TestResult r;
  r.statistic = static_cast<double>(k);
  if (mean == 0.0) {
    r.p_value = k == 0 ? 1.0 : 0.0;
    r.degenerate = true;
    return r;
  }
  boost::math::poisson_distribution<double> pd(mean);
  double lo = boost::math::cdf(pd, static_cast<double>(k));
  double hi = k == 0 ? 1.0 : boost::math::cdf(boost::math::complement(pd, static_cast<double>(k - 1)));
  r.p_value = std::min(1.0, 2.0 * std::min(lo, hi));
  return r;
}

TestResult poisson_count_test(const std::vector<long>& counts, double mean) {
  if (counts.empty()) return TestResult{0.0, 1.0, true};
  long s = 0;
  for (long c : counts) s += c;
  return exact_poisson_test(s, mean * static_cast<double>(counts.size()));
}

TestResult poisson_dispersion_test(const std::vector<long>& counts) {
  TestResult r;
  if (counts.size() < 2) {
    r.degenerate = true;
    return r;
  }
  const double n = static_cast<double>(counts.size());
  double m = 0.0;
  for (long c : counts) m += static_cast<double>(c);
  m /= n;
  if (m == 0.0) {
    r.degenerate = true;
    return r;
  }
  double ss = 0.0;
  for (long c : counts) ss += (static_cast<double>(c) - m) * (static_cast<double>(c) - m);
  r.statistic = ss / m;
  boost::math::chi_squared_distribution<double> chi(n - 1.0);
  double lo = boost::math::cdf(chi, r.statistic);
  r.p_value = std::min(1.0, 2.0 * std::min(lo, 1.0 - lo));
  return r;
}

TestResult chi2_gof(const std::vector<double>& obs, const std::vector<double>& expd) {
  if (obs.size() != expd.size()) throw InputError("chi2_gof: size mismatch");
  TestResult r;
  int cells = 0;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    if (expd[i] < 1e-12) continue;
    r.statistic += (obs[i] - expd[i]) * (obs[i] - expd[i]) / expd[i];
    ++cells;
  }
  if (cells < 2) {
    r.degenerate = true;
    return r;
  }
  boost::math::chi_squared_distribution<double> chi(cells - 1);
  r.p_value = boost::math::cdf(boost::math::complement(chi, r.statistic));
  return r;
}

TestResult chi2_poisson_bins(const std::vector<double>& obs, const std::vector<double>& expd) {
  if (obs.size() != expd.size()) throw InputError("chi2_poisson_bins: size mismatch");
  TestResult r;
  int cells = 0;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    if (!(expd[i] > 0.0)) throw InputError("chi2_poisson_bins: expected counts must be > 0");
    r.statistic += (obs[i] - expd[i]) * (obs[i] - expd[i]) / expd[i];
    ++cells;
  }
  if (cells == 0) {
    r.degenerate = true;
    return r;
  }
  boost::math::chi_squared_distribution<double> chi(cells);
  r.p_value = boost::math::cdf(boost::math::complement(chi, r.statistic));
  return r;
}

TestResult chi2_homogeneity(const std::vector<long>& a, const std::vector<long>& b) {
  TestResult r;
  if (a.empty() || b.empty()) {
    r.degenerate = true;
    return r;
  }
  std::map<long, std::pair<double, double>> tab;
  for (long v : a) tab[v].first += 1.0;
  for (long v : b) tab[v].second += 1.0;
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size()), n = na + nb;
  // pool adjacent values until both expected counts reach 5
  std::vector<std::pair<double, double>> cells;
  std::pair<double, double> acc{0.0, 0.0};
  for (auto& [v, c] : tab) {
    acc.first += c.first;
    acc.second += c.second;
    double tot = acc.first + acc.second;
    if (tot * std::min(na, nb) / n >= 5.0) {
      cells.push_back(acc);
      acc = {0.0, 0.0};
    }
  }
  if (acc.first + acc.second > 0.0) {
    if (cells.empty())
      cells.push_back(acc);
    else {
      cells.back().first += acc.first;
      cells.back().second += acc.second;
    }
  }
  if (cells.size() < 2) {
    r.degenerate = true;
    return r;
  }
  for (auto& [ca, cb] : cells) {
    double tot = ca + cb;
    double ea = tot * na / n, eb = tot * nb / n;
    r.statistic += (ca - ea) * (ca - ea) / ea + (cb - eb) * (cb - eb) / eb;
  }
  boost::math::chi_squared_distribution<double> chi(static_cast<double>(cells.size() - 1));
  r.p_value = boost::math::cdf(boost::math::complement(chi, r.statistic));
  return r;
}

MeanSe mean_se(const std::vector<double>& x) {
  MeanSe m;
  m.n = x.size();
  if (x.empty()) return m;
  for (double v : x) m.mean += v;
  m.mean /= static_cast<double>(x.size());
  if (x.size() < 2) return m;
  double ss = 0.0;
  for (double v : x) ss += (v - m.mean) * (v - m.mean);
  m.se = std::sqrt(ss / static_cast<double>(x.size() - 1) / static_cast<double>(x.size()));
  return m;
}

double normal_quantile(double p) {
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

}  // namespace catbranch

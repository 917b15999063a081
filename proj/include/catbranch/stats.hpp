#pragma once

#include <functional>
#include <vector>

namespace catbranch {

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  bool degenerate = false;  // too few observations or zero variance
};

// P(K > lambda) for the Kolmogorov distribution.
double kolmogorov_survival(double lambda);

TestResult ks_one_sample(std::vector<double> sample, const std::function<double(double)>& cdf);
// Handles ties (all observations at a common value are processed together).
TestResult ks_two_sample(std::vector<double> a, std::vector<double> b);

// Two-sided exact test of k ~ Poisson(mean).
TestResult exact_poisson_test(long k, double mean);
// Total of the counts against Poisson(N * mean).
TestResult poisson_count_test(const std::vector<long>& counts, double mean);
// Index of dispersion (N-1) s^2 / xbar ~ chi2(N-1), two-sided.
TestResult poisson_dispersion_test(const std::vector<long>& counts);
// Pearson chi-square goodness of fit; cells with expected < 1e-12 are dropped.
TestResult chi2_gof(const std::vector<double>& observed, const std::vector<double>& expected);
// Independent Poisson bin counts against their means: sum (O-E)^2/E ~ chi2(#bins).
TestResult chi2_poisson_bins(const std::vector<double>& observed, const std::vector<double>& expected);
// Homogeneity of two samples of integer labels; sparse tail cells are pooled until expected >= 5.
TestResult chi2_homogeneity(const std::vector<long>& a, const std::vector<long>& b);

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
  std::size_t n = 0;
};
MeanSe mean_se(const std::vector<double>& x);
// Standard normal quantile.
double normal_quantile(double p);

}  // namespace catbranch

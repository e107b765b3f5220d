#pragma once

#include <span>
#include <utility>
#include <vector>

namespace fermitheta::stats {

double mean(std::span<const double> xs);
// Unbiased sample variance.
double variance(std::span<const double> xs);
double standard_error(std::span<const double> xs);

// ln sum exp(x_i)
double log_sum_exp(std::span<const double> xs);

struct JackknifeEstimate {
  double value;  // bias-corrected
  double raw;    // plug-in estimate on the full sample
  double se;
};

// Jackknife for ln(mean exp(x_i)), the log of the sample mean of exp(x).
JackknifeEstimate jackknife_log_mean_exp(std::span<const double> log_values);
// Jackknife for ln(mean exp(x_i)) - mean(x_i).
JackknifeEstimate jackknife_log_mean_exp_gap(std::span<const double> log_values);

struct Interval {
  double lower;
  double upper;
};
// Wilson score interval for a binomial proportion at normal quantile z.
Interval wilson_interval(std::size_t successes, std::size_t trials, double z);
inline constexpr double kZ99 = 2.5758293035489004;  // two-sided 99%

double normal_cdf(double x);
// Kolmogorov-Smirnov statistic of xs against N(mu, sigma^2).
double ks_statistic_normal(std::vector<double> xs, double mu, double sigma);
// Asymptotic 1% critical value of the one-sample KS statistic.
double ks_critical_1pct(std::size_t n);

// Physicists' Gauss-Hermite rule (weight exp(-x^2)) via Golub-Welsch.
struct Quadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
};
Quadrature gauss_hermite(int points);
// E f(g) for g ~ N(0,1) using the rule above.
template <typename F>
double gaussian_expectation(const Quadrature& rule, F&& f) {
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) acc += rule.weights[i] * f(1.4142135623730951 * rule.nodes[i]);
  return acc / 1.7724538509055159;
}

}  // namespace fermitheta::stats

#include "doctest.h"

#include <cmath>
#include <random>

#include "fermitheta/stats.hpp"

using namespace fermitheta;

TEST_CASE("moments and log-sum-exp") {
  const std::vector<double> xs{1, 2, 3, 4};
  CHECK(stats::mean(xs) == doctest::Approx(2.5));
  CHECK(stats::variance(xs) == doctest::Approx(5.0 / 3.0));
  CHECK(stats::standard_error(xs) == doctest::Approx(std::sqrt(5.0 / 12.0)));
  const std::vector<double> big{1000.0, 1000.0};
  CHECK(stats::log_sum_exp(big) == doctest::Approx(1000.0 + std::log(2.0)));
}

TEST_CASE("jackknife on constant and two-point data") {
  const std::vector<double> c(20, 3.0);
  const auto a = stats::jackknife_log_mean_exp(c);
  CHECK(a.value == doctest::Approx(3.0));
  CHECK(a.se == doctest::Approx(0.0));
  const auto g = stats::jackknife_log_mean_exp_gap(c);
  CHECK(std::abs(g.value) < 1e-12);

  // Gaussian log-values: ln E e^X - E X = s^2/2 for X ~ N(0, s^2).
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd(0.0, 0.5);
  std::vector<double> xs(20000);
  for (auto& x : xs) x = nd(rng);
  const auto gap = stats::jackknife_log_mean_exp_gap(xs);
  CHECK(std::abs(gap.value - 0.125) < 4.0 * gap.se + 1e-3);
  // Plug-in oracle for the raw value.
  double m = 0.0;
  double me = 0.0;
  for (double x : xs) {
    m += x;
    me += std::exp(x);
  }
  m /= xs.size();
  me /= xs.size();
  CHECK(gap.raw == doctest::Approx(std::log(me) - m).epsilon(1e-10));
}

TEST_CASE("Wilson interval") {
  const double z = stats::kZ99;
  const auto zero = stats::wilson_interval(0, 100, z);
  CHECK(zero.lower == doctest::Approx(0.0));
  CHECK(zero.upper == doctest::Approx(z * z / (100 + z * z)));
  // Closed form at p = 1/2.
  const auto half = stats::wilson_interval(50, 100, z);
  CHECK(half.lower == doctest::Approx(0.5 - z * std::sqrt(25.0 / 100.0 / 100.0 + z * z / 40000.0) / (1 + z * z / 100)));
  CHECK(half.lower + half.upper == doctest::Approx(1.0));
}

TEST_CASE("normal CDF and KS statistic") {
  CHECK(stats::normal_cdf(0.0) == doctest::Approx(0.5));
  CHECK(stats::normal_cdf(1.959963984540054) == doctest::Approx(0.975));
  // Brute-force KS oracle.
  const std::vector<double> xs{-1.0, 0.2, 0.5, 2.0};
  double d = 0.0;
  std::vector<double> sorted = xs;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = 0.5 * std::erfc(-sorted[i] / std::sqrt(2.0));
    d = std::max({d, f - static_cast<double>(i) / 4.0, static_cast<double>(i + 1) / 4.0 - f});
  }
  CHECK(stats::ks_statistic_normal(xs, 0.0, 1.0) == doctest::Approx(d));
  CHECK(stats::ks_critical_1pct(2000) == doctest::Approx(1.6276 / std::sqrt(2000.0)));
}

TEST_CASE("Gauss-Hermite moments") {
  const auto rule = stats::gauss_hermite(150);
  CHECK(rule.nodes.size() == 150);
  CHECK(stats::gaussian_expectation(rule, [](double) { return 1.0; }) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(stats::gaussian_expectation(rule, [](double g) { return g * g; }) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(stats::gaussian_expectation(rule, [](double g) { return g * g * g * g; }) == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(stats::gaussian_expectation(rule, [](double g) { return std::cosh(2.0 * g); }) ==
        doctest::Approx(std::exp(2.0)).epsilon(1e-10));
  // Tail weights matter here: the integrand peaks near g = 5.7.
  const double c = 2.0 * std::sqrt(8.0);
  CHECK(stats::gaussian_expectation(rule, [c](double g) { return std::exp(c * g); }) ==
        doctest::Approx(std::exp(c * c / 2.0)).epsilon(1e-9));
  double total = 0.0;
  for (double w : rule.weights) total += w;
  CHECK(total == doctest::Approx(std::sqrt(3.14159265358979323846)).epsilon(1e-13));
}

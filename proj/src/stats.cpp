#include "fermitheta/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "fermitheta/errors.hpp"

namespace fermitheta::stats {

double mean(std::span<const double> xs) {
  if (xs.empty()) throw InputError("mean of an empty sample");
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double variance(std::span<const double> xs) {
  if (xs.size() < 2) throw InputError("variance needs at least two values");
  const double mu = mean(xs);
  double acc = 0.0;
  for (double x : xs) acc += (x - mu) * (x - mu);
  return acc / static_cast<double>(xs.size() - 1);
}

double standard_error(std::span<const double> xs) {
  return std::sqrt(variance(xs) / static_cast<double>(xs.size()));
}

double log_sum_exp(std::span<const double> xs) {
  if (xs.empty()) return -std::numeric_limits<double>::infinity();
  const double mx = *std::max_element(xs.begin(), xs.end());
  double acc = 0.0;
  for (double x : xs) acc += std::exp(x - mx);
  return mx + std::log(acc);
}

namespace {

template <typename Stat>
JackknifeEstimate jackknife(std::span<const double> xs, Stat&& stat) {
  const std::size_t n = xs.size();
  if (n < 2) throw InputError("jackknife needs at least two values");
  const double full = stat(xs, n);
  std::vector<double> loo(n);
  for (std::size_t i = 0; i < n; ++i) loo[i] = stat(xs, i);
  const double bar = mean(loo);
  double ss = 0.0;
  for (double v : loo) ss += (v - bar) * (v - bar);
  const double nd = static_cast<double>(n);
  return {nd * full - (nd - 1.0) * bar, full, std::sqrt((nd - 1.0) / nd * ss)};
}

// Statistic over xs with index `skip` removed (skip == size means keep all).
double log_mean_exp_skip(std::span<const double> xs, std::size_t skip) {
  double mx = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i != skip) mx = std::max(mx, xs[i]);
  }
  double acc = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i == skip) continue;
    acc += std::exp(xs[i] - mx);
    ++count;
  }
  return mx + std::log(acc / static_cast<double>(count));
}

double mean_skip(std::span<const double> xs, std::size_t skip) {
  double acc = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i == skip) continue;
    acc += xs[i];
    ++count;
  }
  return acc / static_cast<double>(count);
}

}  // namespace

JackknifeEstimate jackknife_log_mean_exp(std::span<const double> log_values) {
  return jackknife(log_values, log_mean_exp_skip);
}

JackknifeEstimate jackknife_log_mean_exp_gap(std::span<const double> log_values) {
  return jackknife(log_values, [](std::span<const double> xs, std::size_t skip) {
    return log_mean_exp_skip(xs, skip) - mean_skip(xs, skip);
  });
}

Interval wilson_interval(std::size_t successes, std::size_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double ks_statistic_normal(std::vector<double> xs, double mu, double sigma) {
  if (xs.empty()) throw InputError("KS statistic of an empty sample");
  if (!(sigma > 0.0)) throw InputError("KS reference needs positive sigma");
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = normal_cdf((xs[i] - mu) / sigma);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_critical_1pct(std::size_t n) { return 1.6276 / std::sqrt(static_cast<double>(n)); }

Quadrature gauss_hermite(int points) {
  if (points < 1) throw InputError("quadrature needs at least one point");
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(points, points);
  for (int i = 1; i < points; ++i) {
    jacobi(i, i - 1) = jacobi(i - 1, i) = std::sqrt(static_cast<double>(i) / 2.0);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  // Eigenvector weights lose all relative accuracy in the tails; polish each
  // node by Newton on the orthonormal recurrence and take w = 2 / p'^2.
  const double pim4 = std::pow(3.14159265358979323846, -0.25);
  Quadrature q;
  for (int i = 0; i < points; ++i) {
    double x = solver.eigenvalues()[i];
    double dp = 0.0;
    for (int it = 0; it < 10; ++it) {
      double p1 = pim4;
      double p2 = 0.0;
      for (int j = 1; j <= points; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = x * std::sqrt(2.0 / j) * p2 - std::sqrt((j - 1.0) / j) * p3;
      }
      dp = std::sqrt(2.0 * points) * p2;
      const double step = p1 / dp;
      x -= step;
      if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(x))) break;
    }
    q.nodes.push_back(x);
    q.weights.push_back(2.0 / (dp * dp));
  }
  return q;
}

}  // namespace fermitheta::stats

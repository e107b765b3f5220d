#include "doctest.h"
#include "oracle.hpp"

#include <chrono>
#include <cmath>
#include <numbers>

#include "fermitheta/errors.hpp"
#include "fermitheta/graph.hpp"
#include "fermitheta/scheme.hpp"
#include "fermitheta/theta.hpp"

using namespace fermitheta;

namespace {

// Lovasz value of the odd cycle C_n.
double cycle_theta(int n) {
  const double c = std::cos(std::numbers::pi / n);
  return n * c / (1.0 + c);
}

}  // namespace

TEST_CASE("Johnson LP table values") {
  CHECK(*theta_johnson_lp(6, 2).exact == 3);
  CHECK(*theta_johnson_lp(8, 4).exact == 14);
  CHECK(format_rational_2dp(*theta_johnson_lp(10, 4).exact) == "14.57");
  CHECK(*theta_johnson_lp(26, 6).exact == 286);
  CHECK(*theta_johnson_lp(12, 4).exact == 15);
  CHECK(*theta_johnson_lp(14, 4).exact == 21);
  CHECK(*theta_johnson_lp(12, 6).exact == 52);
  CHECK(std::abs(theta_johnson_lp(20, 10).value - 787.17) <= 0.01);
  CHECK(*theta_johnson_lp(2, 2).exact == 1);
}

TEST_CASE("(10,4) and (10,6) coincide exactly") {
  const auto a = theta_johnson_lp(10, 4);
  const auto b = theta_johnson_lp(10, 6);
  CHECK(*a.exact == *b.exact);
  CHECK(*a.exact == mpq_class(102, 7));
}

TEST_CASE("LP certificate is exactly feasible") {
  for (int n = 2; n <= 30; n += 2) {
    for (int q = 2; q <= n; q += 2) {
      const auto r = theta_johnson_lp(n, q);
      CHECK(verify_lp_certificate(r));
      for (const auto& p : r.p_values) CHECK(p >= -1);
      const mpq_class expect = mpq_class(binomial_mpz(n, q)) / (1 + r.p0);
      CHECK(*r.exact == expect);
      // Sandwich: commuting family size <= theta <= |S|.
      CHECK(*r.exact >= mpq_class(binomial_mpz(n / 2, q / 2)));
      CHECK(*r.exact <= mpq_class(binomial_mpz(n, q)));
    }
  }
}

TEST_CASE("LP preconditions") {
  CHECK_THROWS_AS(theta_johnson_lp(9, 4), InputError);
  CHECK_THROWS_AS(theta_johnson_lp(8, 3), InputError);
  CHECK_THROWS_AS(theta_johnson_lp(4, 6), InputError);
}

TEST_CASE("LP runtime stays small") {
  const auto t0 = std::chrono::steady_clock::now();
  theta_johnson_lp(40, 10);
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(s < 1.0);
}

TEST_CASE("SDP on small graphs") {
  CHECK(std::abs(theta_sdp(CommutationGraph::complete(3)).value - 1.0) <= 1e-6);
  CHECK(std::abs(theta_sdp(CommutationGraph::from_edges(6, {})).value - 6.0) <= 1e-6);
  const auto c5 = theta_sdp(CommutationGraph::cycle(5));
  CHECK(std::abs(c5.value - std::sqrt(5.0)) <= 1e-4);
  CHECK(std::abs(cycle_theta(5) - std::sqrt(5.0)) < 1e-12);
  CHECK(c5.lower <= c5.value);
  CHECK(c5.value <= c5.upper);
  const auto c7 = theta_sdp(CommutationGraph::cycle(7));
  CHECK(std::abs(c7.value - cycle_theta(7)) <= 1e-4);
}

TEST_CASE("SDP agrees with the LP on Majorana graphs") {
  for (auto [n, q] : std::vector<std::pair<int, int>>{{6, 2}, {8, 2}, {8, 4}}) {
    const auto lp = theta_johnson_lp(n, q);
    const auto sdp = theta_sdp(commutation_graph(enumerate_set(OperatorKind::majorana, n, q)));
    CHECK(std::abs(sdp.value - lp.value) <= 1e-3 * lp.value);
    CHECK(sdp.edge_residual <= 1e-6);
    CHECK(sdp.psd_violation <= 1e-6);
  }
}

TEST_CASE("rounding") {
  CHECK(round_half_up(14.565, 2) == doctest::Approx(14.57));
  CHECK(format_rational_2dp(mpq_class(1, 8)) == "0.13");
  CHECK(format_rational_2dp(mpq_class(-1, 8)) == "-0.13");
  CHECK(format_rational_2dp(mpq_class(14)) == "14.00");
}

TEST_CASE("ThetaResult JSON") {
  const auto j = theta_johnson_lp(8, 4).to_json();
  CHECK(j["method"] == "johnson-lp-exact");
  CHECK(j["exact"] == "14");
  const auto s = theta_sdp(CommutationGraph::cycle(5)).to_json();
  CHECK(s["method"] == "generic-sdp");
}

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>
#include <nlohmann/json.hpp>

#include "fermitheta/graph.hpp"

namespace fermitheta {

enum class ThetaMethod { johnson_lp_exact, generic_sdp };
std::string to_string(ThetaMethod method);

struct ThetaResult {
  ThetaMethod method = ThetaMethod::generic_sdp;
  double value = 0.0;
  std::optional<mpq_class> exact;  // LP path only

  // LP certificate: p(x) = sum_d a_d H_d(x) over odd d < q.
  int n = 0;
  int q = 0;
  std::vector<int> degrees;
  std::vector<mpq_class> coefficients;
  mpq_class p0 = 0;
  std::vector<mpq_class> p_values;  // p(1), ..., p(min(q, n-q))
  int pivots = 0;

  // SDP path: rigorous bracket and feasibility diagnostics.
  std::string solver;
  double lower = 0.0;
  double upper = 0.0;
  double edge_residual = 0.0;
  double psd_violation = 0.0;
  double tolerance = 0.0;
  int iterations = 0;
  bool converged = true;

  double wall_time_ms = 0.0;

  nlohmann::ordered_json to_json() const;
};

// Exact theta of the commutation graph of all degree-q Majorana monomials on
// n modes, via the symmetry-reduced linear program over odd distance classes.
ThetaResult theta_johnson_lp(int n, int q);

// Re-evaluates the stored certificate in exact arithmetic.
bool verify_lp_certificate(const ThetaResult& r);

struct SdpOptions {
  double tol = 1e-6;
  std::size_t interior_point_edge_limit = 1500;
  int max_interior_iterations = 100;
  double rho0 = 10.0;
  int rho_rounds = 8;
  int inner_iterations = 5000;
};

// Numeric theta: max <J,X> over X >= 0, Tr X = 1, X_uv = 0 on edges.
ThetaResult theta_sdp(const CommutationGraph& g, const SdpOptions& options = {});
inline ThetaResult theta_sdp(const CommutationGraph& g, double tol) {
  SdpOptions o;
  o.tol = tol;
  return theta_sdp(g, o);
}

inline constexpr std::size_t kMaxSdpVertices = 600;

// Half-up rounding to a number of decimals (table comparison).
double round_half_up(double v, int decimals);
std::string format_rational_2dp(const mpq_class& v);

}  // namespace fermitheta

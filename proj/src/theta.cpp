#include "fermitheta/theta.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "fermitheta/errors.hpp"
#include "fermitheta/lp.hpp"
#include "fermitheta/scheme.hpp"

namespace fermitheta {

std::string to_string(ThetaMethod method) {
  return method == ThetaMethod::johnson_lp_exact ? "johnson-lp-exact" : "generic-sdp";
}

double round_half_up(double v, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::floor(v * scale + 0.5) / scale;
}

// Half away from zero on the magnitude.
std::string format_rational_2dp(const mpq_class& v) {
  const mpq_class scaled = abs(v) * 100 + mpq_class(1, 2);
  const mpz_class whole = scaled.get_num() / scaled.get_den();
  const mpz_class ip = whole / 100;
  std::string f = mpz_class(whole - ip * 100).get_str();
  if (f.size() < 2) f = "0" + f;
  return (sgn(v) < 0 && whole != 0 ? "-" : "") + ip.get_str() + "." + f;
}

nlohmann::ordered_json ThetaResult::to_json() const {
  nlohmann::ordered_json j;
  j["method"] = to_string(method);
  j["value"] = value;
  if (method == ThetaMethod::johnson_lp_exact) {
    j["exact"] = exact ? exact->get_str() : "";
    j["n"] = n;
    j["q"] = q;
    auto cert = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < degrees.size(); ++i) {
      cert.push_back({{"d", degrees[i]}, {"a", coefficients[i].get_str()}});
    }
    j["certificate"] = std::move(cert);
    j["p0"] = p0.get_str();
    std::vector<std::string> pv;
    for (const auto& p : p_values) pv.push_back(p.get_str());
    j["p_values"] = pv;
    j["residuals"] = {{"min_p_plus_one", p_values.empty() ? std::string("none") : mpq_class(*std::min_element(p_values.begin(), p_values.end()) + 1).get_str()},
                      {"pivots", pivots}};
  } else {
    j["certificate"] = {{"solver", solver}, {"lower", lower}, {"upper", upper}};
    j["residuals"] = {{"edge_residual", edge_residual},
                      {"psd_violation", psd_violation},
                      {"bracket_gap", upper - lower},
                      {"tolerance", tolerance},
                      {"iterations", iterations},
                      {"converged", converged}};
  }
  j["wall_time_ms"] = wall_time_ms;
  return j;
}

// ---------------------------------------------------------------- exact LP

namespace {

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

ThetaResult theta_johnson_lp(int n, int q) {
  const auto start = std::chrono::steady_clock::now();
  if (n <= 0 || n % 2 != 0) throw InputError("n must be a positive even integer");
  if (q < 0 || q % 2 != 0) throw InputError("q must be a nonnegative even integer");
  if (q > n) throw InputError("q must not exceed n");

  ThetaResult r;
  r.method = ThetaMethod::johnson_lp_exact;
  r.n = n;
  r.q = q;
  const int xmax = std::min(q, n - q);
  for (int d = 1; d < q; d += 2) r.degrees.push_back(d);
  const std::size_t k = r.degrees.size();

  // Free variables a = u - v; constraint -p(x) <= 1 for every nontrivial eigenspace x.
  std::vector<std::vector<mpq_class>> a;
  std::vector<mpq_class> b;
  for (int x = 1; x <= xmax; ++x) {
    std::vector<mpq_class> row(2 * k);
    for (std::size_t i = 0; i < k; ++i) {
      const mpq_class h(dual_hahn(n, q, r.degrees[i], x));
      row[i] = -h;
      row[k + i] = h;
    }
    a.push_back(std::move(row));
    b.emplace_back(1);
  }
  std::vector<mpq_class> c(2 * k);
  for (std::size_t i = 0; i < k; ++i) {
    const mpq_class h0(dual_hahn(n, q, r.degrees[i], 0));
    c[i] = h0;
    c[k + i] = -h0;
  }
  const LpResult lp = maximize_simplex(a, b, c);
  if (lp.status != LpStatus::optimal) throw StructuralError("theta LP is unbounded");

  r.pivots = lp.pivots;
  for (std::size_t i = 0; i < k; ++i) r.coefficients.push_back(lp.x[i] - lp.x[k + i]);
  r.p0 = lp.objective;
  for (int x = 1; x <= xmax; ++x) {
    mpq_class p = 0;
    for (std::size_t i = 0; i < k; ++i) p += r.coefficients[i] * mpq_class(dual_hahn(n, q, r.degrees[i], x));
    r.p_values.push_back(p);
  }
  mpq_class theta(binomial_mpz(n, q));
  theta /= (1 + r.p0);
  theta.canonicalize();
  r.exact = theta;
  r.value = theta.get_d();
  r.lower = r.upper = r.value;
  r.solver = "rational-simplex-bland";
  if (!verify_lp_certificate(r)) throw StructuralError("theta LP certificate failed exact verification");
  r.wall_time_ms = elapsed_ms(start);
  return r;
}

bool verify_lp_certificate(const ThetaResult& r) {
  if (r.method != ThetaMethod::johnson_lp_exact || !r.exact) return false;
  const int xmax = std::min(r.q, r.n - r.q);
  mpq_class p0 = 0;
  for (std::size_t i = 0; i < r.degrees.size(); ++i) p0 += r.coefficients[i] * mpq_class(dual_hahn(r.n, r.q, r.degrees[i], 0));
  if (p0 != r.p0) return false;
  for (int x = 1; x <= xmax; ++x) {
    mpq_class p = 0;
    for (std::size_t i = 0; i < r.degrees.size(); ++i) {
      p += r.coefficients[i] * mpq_class(dual_hahn(r.n, r.q, r.degrees[i], x));
    }
    if (p < -1) return false;
  }
  mpq_class theta(binomial_mpz(r.n, r.q));
  theta /= (1 + p0);
  return theta == *r.exact;
}

// ---------------------------------------------------------------- numeric SDP

namespace {

using Edges = std::vector<std::pair<std::size_t, std::size_t>>;

double lambda_min(const RealMatrix& m) {
  Eigen::SelfAdjointEigenSolver<RealMatrix> s(m, Eigen::EigenvaluesOnly);
  return s.eigenvalues()[0];
}

double lambda_max(const RealMatrix& m) {
  Eigen::SelfAdjointEigenSolver<RealMatrix> s(m, Eigen::EigenvaluesOnly);
  return s.eigenvalues()[s.eigenvalues().size() - 1];
}

// Feasible primal point nearest the iterate: zero edge entries, shift up to PSD,
// renormalise the trace. Its objective is a valid lower bound.
double primal_lower_bound(RealMatrix x, const Edges& edges) {
  for (auto [i, j] : edges) x(i, j) = x(j, i) = 0.0;
  const double lmin = lambda_min(x);
  if (lmin < 0.0) x.diagonal().array() -= lmin;
  return x.sum() / x.trace();
}

// For any edge multipliers y, theta <= lambda_max(J - sum_e y_e E_e).
double dual_upper_bound(std::size_t n, const Edges& edges, const RealVector& y) {
  RealMatrix m = RealMatrix::Ones(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t e = 0; e < edges.size(); ++e) {
    auto [i, j] = edges[e];
    m(i, j) -= y[static_cast<Eigen::Index>(e)];
    m(j, i) -= y[static_cast<Eigen::Index>(e)];
  }
  return lambda_max(m);
}

double max_edge_entry(const RealMatrix& x, const Edges& edges) {
  double r = 0.0;
  for (auto [i, j] : edges) r = std::max(r, std::abs(x(i, j)));
  return r;
}

// Largest step in (0, 1] keeping base + alpha * dir positive definite.
double cholesky_step(const RealMatrix& base, const RealMatrix& dir) {
  double alpha = 1.0;
  for (int tries = 0; tries < 200; ++tries) {
    Eigen::LLT<RealMatrix> llt(base + alpha * dir);
    if (llt.info() == Eigen::Success) return alpha < 1.0 ? 0.95 * alpha : alpha;
    alpha *= 0.8;
  }
  return 0.0;
}

// Primal-dual interior point (HKM direction) on
//   max <J,X>  s.t.  Tr X = 1,  <E_e, X> = 0,  X >= 0
//   min y0     s.t.  Z = y0 I + sum_e y_e E_e - J >= 0.
void solve_interior_point(std::size_t n, const Edges& edges, const SdpOptions& opt, ThetaResult& r) {
  const auto nn = static_cast<Eigen::Index>(n);
  const auto ne = static_cast<Eigen::Index>(edges.size());
  const auto nc = ne + 1;
  const RealMatrix jmat = RealMatrix::Ones(nn, nn);
  const RealMatrix id = RealMatrix::Identity(nn, nn);

  RealMatrix x = id / static_cast<double>(n);
  RealVector y = RealVector::Zero(nc);  // y[0] = y0, y[1 + e] = y_e
  y[0] = static_cast<double>(n) + 1.0;
  auto dual_slack = [&](const RealVector& yy) {
    RealMatrix z = yy[0] * id - jmat;
    for (Eigen::Index e = 0; e < ne; ++e) {
      auto [i, j] = edges[static_cast<std::size_t>(e)];
      z(i, j) += yy[e + 1];
      z(j, i) += yy[e + 1];
    }
    return z;
  };
  RealMatrix z = dual_slack(y);

  const double gap_tol = std::min(1e-9, 0.01 * opt.tol);
  bool fast = false;
  int iter = 0;
  for (; iter < opt.max_interior_iterations; ++iter) {
    const double primal = x.sum();
    const double gap = y[0] - primal;
    if (std::abs(gap) <= gap_tol * std::max(1.0, std::abs(y[0]))) break;

    const RealMatrix zi = z.llt().solve(id);
    double mu = z.cwiseProduct(x).sum() / (2.0 * static_cast<double>(n));
    if (fast) mu *= 0.5;

    const RealMatrix xzi = x * zi;
    RealMatrix m(nc, nc);
    RealVector rhs(nc);
    m(0, 0) = zi.cwiseProduct(x.transpose()).sum();
    rhs[0] = mu * zi.trace() - 1.0;
    for (Eigen::Index e = 0; e < ne; ++e) {
      auto [i, j] = edges[static_cast<std::size_t>(e)];
      m(0, e + 1) = m(e + 1, 0) = xzi(j, i) + xzi(i, j);
      rhs[e + 1] = 2.0 * mu * zi(i, j);
    }
    for (Eigen::Index e = 0; e < ne; ++e) {
      auto [i, j] = edges[static_cast<std::size_t>(e)];
      for (Eigen::Index f = e; f < ne; ++f) {
        auto [k, l] = edges[static_cast<std::size_t>(f)];
        const double v = zi(j, k) * x(l, i) + zi(j, l) * x(k, i) + zi(i, k) * x(l, j) + zi(i, l) * x(k, j);
        m(e + 1, f + 1) = m(f + 1, e + 1) = v;
      }
    }
    Eigen::LLT<RealMatrix> mchol(m);
    RealVector dy = mchol.info() == Eigen::Success ? RealVector(mchol.solve(rhs)) : RealVector(m.ldlt().solve(rhs));

    RealMatrix dz = dy[0] * id;
    for (Eigen::Index e = 0; e < ne; ++e) {
      auto [i, j] = edges[static_cast<std::size_t>(e)];
      dz(i, j) += dy[e + 1];
      dz(j, i) += dy[e + 1];
    }
    RealMatrix dx = mu * zi - x - zi * dz * x;
    dx = (0.5 * (dx + dx.transpose())).eval();

    const double ap = cholesky_step(x, dx);
    const double ad = cholesky_step(z, dz);
    if (ap == 0.0 && ad == 0.0) break;
    x += ap * dx;
    y += ad * dy;
    z = dual_slack(y);
    fast = ap + ad > 1.8;
  }
  r.iterations = iter;
  r.solver = "primal-dual-interior-point";
  r.lower = primal_lower_bound(x, edges);
  r.upper = dual_upper_bound(n, edges, y.tail(ne));
  r.edge_residual = max_edge_entry(x, edges);
  r.psd_violation = std::max(0.0, -lambda_min(x));
}

// Leading eigenvector by shifted power iteration, warm-started.
RealVector top_eigenvector(const RealMatrix& g, RealVector v, int steps) {
  const auto n = g.rows();
  if (n <= 300) {
    Eigen::SelfAdjointEigenSolver<RealMatrix> s(g);
    return s.eigenvectors().col(n - 1);
  }
  const double shift = g.cwiseAbs().rowwise().sum().maxCoeff();
  for (int t = 0; t < steps; ++t) {
    RealVector w = g * v + shift * v;
    v = w / w.norm();
  }
  return v;
}

// Augmented Lagrangian on the edge constraints with Frank-Wolfe inner solves
// over the unit-trace spectrahedron.
void solve_frank_wolfe(std::size_t n, const Edges& edges, const SdpOptions& opt, ThetaResult& r) {
  const auto nn = static_cast<Eigen::Index>(n);
  const auto ne = static_cast<Eigen::Index>(edges.size());
  RealMatrix x = RealMatrix::Identity(nn, nn) / static_cast<double>(n);
  RealVector lambda = RealVector::Zero(ne);
  RealVector v = RealVector::Constant(nn, 1.0 / std::sqrt(static_cast<double>(n)));
  double rho = opt.rho0;
  int total = 0;
  for (int round = 0; round < opt.rho_rounds; ++round) {
    for (int it = 0; it < opt.inner_iterations; ++it, ++total) {
      // Objective f(X) = <J,X> - 2 sum_e lambda_e X_e - rho sum_e X_e^2.
      RealMatrix grad = RealMatrix::Ones(nn, nn);
      for (Eigen::Index e = 0; e < ne; ++e) {
        auto [i, j] = edges[static_cast<std::size_t>(e)];
        const double gij = -lambda[e] - rho * x(i, j);
        grad(i, j) += gij;
        grad(j, i) += gij;
      }
      v = top_eigenvector(grad, v, 60);
      const RealMatrix d = v * v.transpose() - x;
      const double slope = grad.cwiseProduct(d).sum();
      if (slope <= 1e-12) break;
      double curv = 0.0;
      for (auto [i, j] : edges) curv += 2.0 * d(i, j) * d(i, j);
      const double gamma = curv > 0.0 ? std::min(1.0, slope / (rho * curv)) : 1.0;
      x += gamma * d;
      if (slope < 0.1 * opt.tol) break;
    }
    for (Eigen::Index e = 0; e < ne; ++e) {
      auto [i, j] = edges[static_cast<std::size_t>(e)];
      lambda[e] += rho * x(i, j);
    }
    if (max_edge_entry(x, edges) <= opt.tol) break;
    rho *= 2.0;
  }
  r.iterations = total;
  r.solver = "augmented-lagrangian-frank-wolfe";
  r.lower = primal_lower_bound(x, edges);
  r.upper = dual_upper_bound(n, edges, lambda);
  r.edge_residual = max_edge_entry(x, edges);
  r.psd_violation = std::max(0.0, -lambda_min(x));
}

}  // namespace

ThetaResult theta_sdp(const CommutationGraph& g, const SdpOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const std::size_t n = g.size();
  if (n == 0) throw InputError("theta of the empty graph is undefined");
  if (n > kMaxSdpVertices) throw CapacityError("numeric theta limited to 600 vertices");
  if (!(options.tol > 0.0)) throw InputError("tolerance must be positive");
  ThetaResult r;
  r.method = ThetaMethod::generic_sdp;
  r.tolerance = options.tol;
  const Edges edges = g.edges();
  if (edges.empty()) {
    r.value = r.lower = r.upper = static_cast<double>(n);
    r.solver = "closed-form";
  } else if (edges.size() <= options.interior_point_edge_limit) {
    solve_interior_point(n, edges, options, r);
  } else {
    solve_frank_wolfe(n, edges, options, r);
  }
  r.value = 0.5 * (r.lower + r.upper);
  r.converged = r.upper - r.lower <= options.tol * std::max(1.0, r.value) && r.edge_residual <= options.tol &&
                r.psd_violation <= options.tol;
  r.wall_time_ms = elapsed_ms(start);
  return r;
}

}  // namespace fermitheta

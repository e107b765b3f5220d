#include "fermitheta/cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <iomanip>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fermitheta/algebra.hpp"
#include "fermitheta/errors.hpp"
#include "fermitheta/graph.hpp"
#include "fermitheta/index.hpp"
#include "fermitheta/lab.hpp"
#include "fermitheta/models.hpp"
#include "fermitheta/report.hpp"
#include "fermitheta/scheme.hpp"
#include "fermitheta/theta.hpp"

namespace fermitheta::cli {

namespace {

using json = nlohmann::ordered_json;

// Thrown by handlers that finished normally but whose scientific check failed.
struct VerdictFailure {};

std::string format_value(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

// key=value lines; '#' starts a comment.
std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read config file " + path);
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    const auto b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw InputError(path + ":" + std::to_string(lineno) + ": expected key=value");
    std::string key = trim(line.substr(0, eq));
    if (key.rfind("--", 0) == 0) key = key.substr(2);
    out.emplace_back(key, trim(line.substr(eq + 1)));
  }
  return out;
}

const CLI::App* deepest(const CLI::App* app) {
  for (const CLI::App* sub : app->get_subcommands()) return deepest(sub);
  return app;
}

std::string command_path(const CLI::App* app) {
  std::string path;
  for (const CLI::App* a = app; a != nullptr && a->get_parent() != nullptr; a = a->get_parent()) {
    path = path.empty() ? a->get_name() : a->get_name() + " " + path;
  }
  return path;
}

// Everything needed to rerun the command: every option of the selected
// subcommand with its effective value.
json run_config(const CLI::App* sub, std::uint64_t seed, int threads, int verbosity) {
  json params = json::object();
  json outputs = json::object();
  for (const CLI::Option* opt : sub->get_options()) {
    const std::string name = opt->get_single_name();
    if (name.empty() || name == "help") continue;
    std::vector<std::string> values = opt->results();
    if (values.empty()) {
      const std::string d = opt->get_default_str();
      if (d.empty()) continue;
      values = {d};
    }
    if (opt->get_items_expected_max() <= 1 && values.size() > 1) values = {values.back()};
    json v = values.size() == 1 ? json(values[0]) : json(values);
    if (name == "out" || name == "csv" || name == "spectrum") {
      outputs[name] = v;
    } else {
      params[name] = v;
    }
  }
  return {{"subcommand", command_path(sub)},
          {"parameters", params},
          {"seed", seed},
          {"threads", threads},
          {"outputs", outputs},
          {"verbosity", verbosity}};
}

struct Common {
  std::string out_path;
  bool json_stdout = false;
  int verbosity = 0;
};

void emit_json(const json& j, const Common& c, std::ostream& out) {
  const std::string text = j.dump(2) + "\n";
  if (!c.out_path.empty()) write_file_atomic(c.out_path, text);
  if (c.json_stdout || c.out_path.empty()) out << text;
}

OperatorSet build_set(const std::string& kind, std::size_t n, std::size_t loc) {
  return enumerate_set(parse_operator_kind(kind), n, loc);
}

void print_verdicts(const ExperimentReport& r, std::ostream& out) {
  for (const auto& v : r.verdicts) {
    out << (v.passed ? "PASS " : "FAIL ") << v.name;
    if (!v.note.empty()) out << "  (" << v.note << ")";
    out << "\n";
  }
}

}  // namespace

std::vector<TableRow> reproduce_table_rows(int max_n, const std::vector<int>& q_list) {
  if (max_n < 2 || max_n > 40) throw InputError("max_n must lie in [2, 40]");
  for (int q : q_list) {
    if (q < 2 || q % 2 != 0) throw InputError("table q values must be even and at least 2");
  }
  std::vector<TableRow> rows;
  for (int n = 2; n <= max_n; n += 2) {
    for (int q : q_list) {
      if (q > n) continue;
      const auto t = theta_johnson_lp(n, q);
      const mpz_class b = binomial_mpz(n / 2, q / 2);
      rows.push_back({n, q, *t.exact, format_rational_2dp(*t.exact), b, *t.exact == mpq_class(b)});
    }
  }
  return rows;
}

std::string table_csv(const std::vector<TableRow>& rows) {
  std::ostringstream os;
  os << "n,q,theta_exact_rational,theta_2dp,binom,equal_flag\n";
  for (const auto& r : rows) {
    os << r.n << ',' << r.q << ',' << r.theta.get_str() << ',' << r.theta_2dp << ',' << r.binom.get_str() << ','
       << (r.equal ? "true" : "false") << '\n';
  }
  return os.str();
}

std::string reproduce_table(int max_n, const std::vector<int>& q_list) {
  return table_csv(reproduce_table_rows(max_n, q_list));
}

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return dispatch(std::move(args), out, err);
}

int dispatch(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Commutation index, Lovasz theta and disordered-Hamiltonian experiments", "fermitheta"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  Common common;
  std::string config_path;
  app.add_option("--config", config_path, "key=value file; command-line flags take precedence");
  app.add_flag("-v,--verbose", common.verbosity, "Timing and diagnostics on stderr");

  std::function<void()> action;
  auto add_output = [&](CLI::App* sub) {
    sub->add_option("--out", common.out_path, "Write JSON here (write-temp-then-rename)");
    sub->add_flag("--json", common.json_stdout, "Print JSON on stdout");
  };

  // ---- theta
  auto* theta = app.add_subcommand("theta", "Lovasz theta of a commutation graph");
  theta->require_subcommand(0, 1);
  bool theta_table = false;
  int table_max_n = 40;
  std::vector<int> table_q{2, 4, 6, 8, 10};
  theta->add_flag("--table", theta_table, "CSV of theta versus C(n/2, q/2)");
  theta->add_option("--max-n", table_max_n, "Largest n in the table")->capture_default_str();
  theta->add_option("--q-list", table_q, "Table columns")->delimiter(',')->capture_default_str();
  auto* johnson = theta->add_subcommand("johnson", "Exact theta of G(S^n_q) by the symmetry-reduced LP");
  int th_n = 0;
  int th_q = 0;
  bool exact_output = false;
  johnson->add_option("--n", th_n, "Majorana modes")->required();
  johnson->add_option("--q", th_q, "Monomial degree")->required();
  johnson->add_flag("--exact-output", exact_output, "Print the exact rational");
  add_output(johnson);
  auto* sdp = theta->add_subcommand("sdp", "Numeric theta of an enumerated operator set");
  std::string sdp_set = "majorana";
  std::size_t sdp_n = 0;
  std::size_t sdp_loc = 0;
  double sdp_tol = 1e-6;
  sdp->add_option("--set", sdp_set, "Operator family")->check(CLI::IsMember({"majorana", "pauli"}))->capture_default_str();
  sdp->add_option("--n", sdp_n, "Modes (majorana) or qubits (pauli)")->required();
  sdp->add_option("--loc", sdp_loc, "Locality")->required();
  sdp->add_option("--tol", sdp_tol, "Solver tolerance")->capture_default_str();
  add_output(sdp);

  johnson->callback([&] {
    action = [&] {
      const auto r = theta_johnson_lp(th_n, th_q);
      json j = r.to_json();
      j["run_config"] = run_config(johnson, 0, 1, common.verbosity);
      if (exact_output || r.exact->get_den() == 1) {
        out << r.exact->get_str() << "\n";
      } else {
        out << format_rational_2dp(*r.exact) << "\n";
      }
      if (!common.out_path.empty()) write_file_atomic(common.out_path, j.dump(2) + "\n");
      if (common.json_stdout) out << j.dump(2) << "\n";
    };
  });
  sdp->callback([&] {
    action = [&] {
      const auto set = build_set(sdp_set, sdp_n, sdp_loc);
      const auto r = theta_sdp(commutation_graph(set), sdp_tol);
      json j = r.to_json();
      j["run_config"] = run_config(sdp, 0, 1, common.verbosity);
      out << format_value(r.value) << "  [" << format_value(r.lower) << ", " << format_value(r.upper) << "]\n";
      if (!common.out_path.empty()) write_file_atomic(common.out_path, j.dump(2) + "\n");
      if (common.json_stdout) out << j.dump(2) << "\n";
    };
  });
  theta->callback([&] {
    if (theta->get_subcommands().empty()) {
      if (!theta_table) throw CLI::RequiredError("theta needs johnson, sdp or --table");
      action = [&] { out << reproduce_table(table_max_n, table_q); };
    }
  });

  // ---- table
  auto* table = app.add_subcommand("table", "Reproduce the theta table as CSV");
  table->add_option("--max-n", table_max_n, "Largest n")->capture_default_str();
  table->add_option("--q-list", table_q, "Columns")->delimiter(',')->capture_default_str();
  std::string table_out;
  table->add_option("--out", table_out, "Write the CSV here");
  table->callback([&] {
    action = [&] {
      const std::string csv = reproduce_table(table_max_n, table_q);
      if (!table_out.empty()) write_file_atomic(table_out, csv);
      out << csv;
    };
  });

  // ---- index
  auto* index = app.add_subcommand("index", "Commutation index bounds");
  std::string ix_set = "majorana";
  std::size_t ix_n = 0;
  std::size_t ix_loc = 0;
  std::string ix_method = "all";
  std::uint64_t ix_seed = 1;
  index->add_option("--set", ix_set, "Operator family")->check(CLI::IsMember({"majorana", "pauli"}))->capture_default_str();
  index->add_option("--n", ix_n, "Modes or qubits")->required();
  index->add_option("--loc", ix_loc, "Locality")->required();
  index->add_option("--method", ix_method, "upper | lower | seesaw | all")
      ->check(CLI::IsMember({"upper", "lower", "seesaw", "all"}))
      ->capture_default_str();
  index->add_option("--seed", ix_seed, "See-saw seed")->capture_default_str();
  add_output(index);
  index->callback([&] {
    action = [&] {
      const auto est = estimate_index(build_set(ix_set, ix_n, ix_loc), parse_index_method(ix_method), ix_seed);
      json j = est.to_json();
      j["run_config"] = run_config(index, ix_seed, 1, common.verbosity);
      emit_json(j, common, out);
    };
  });

  // ---- hahn
  auto* hahn = app.add_subcommand("hahn", "Dual Hahn eigenvalue table of the Johnson scheme");
  int hahn_m = 0;
  int hahn_r = 0;
  bool hahn_verify = false;
  hahn->add_option("--m", hahn_m, "Ground set size")->required();
  hahn->add_option("--r", hahn_r, "Subset size")->required();
  hahn->add_flag("--verify", hahn_verify, "Check against brute-force spectra and emit JSON");
  add_output(hahn);
  hahn->callback([&] {
    action = [&] {
      if (hahn_verify) {
        const auto v = verify_scheme_spectrum(hahn_m, hahn_r);
        json j = v.to_json();
        j["run_config"] = run_config(hahn, 0, 1, common.verbosity);
        emit_json(j, common, out);
        if (!v.passed) throw VerdictFailure{};
        return;
      }
      const auto t = hahn_table(hahn_m, hahn_r);
      std::ostringstream os;
      os << "d";
      for (int x = 0; x <= t.r; ++x) os << ",x" << x;
      os << "\n";
      for (int d = 0; d <= t.r; ++d) {
        os << d;
        for (int x = 0; x <= t.r; ++x) os << ',' << t.values[d][x].get_str();
        os << "\n";
      }
      if (!common.out_path.empty()) write_file_atomic(common.out_path, os.str());
      out << os.str();
    };
  });

  // ---- graph
  auto* graph = app.add_subcommand("graph", "Commutation graph export");
  std::string gr_set = "majorana";
  std::size_t gr_n = 0;
  std::size_t gr_loc = 0;
  std::string gr_format = "json";
  graph->add_option("--set", gr_set, "Operator family")->check(CLI::IsMember({"majorana", "pauli"}))->capture_default_str();
  graph->add_option("--n", gr_n, "Modes or qubits")->required();
  graph->add_option("--loc", gr_loc, "Locality")->required();
  graph->add_option("--format", gr_format, "json | csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  graph->add_option("--out", common.out_path, "Write here instead of stdout");
  graph->callback([&] {
    action = [&] {
      const auto g = commutation_graph(build_set(gr_set, gr_n, gr_loc));
      std::string text;
      if (gr_format == "csv") {
        text = g.to_edge_csv();
      } else {
        json j = g.to_json();
        j["run_config"] = run_config(graph, 0, 1, common.verbosity);
        text = j.dump(2) + "\n";
      }
      if (!common.out_path.empty()) {
        write_file_atomic(common.out_path, text);
      } else {
        out << text;
      }
    };
  });

  // ---- ternary
  auto* ternary = app.add_subcommand("ternary", "Pairwise anticommuting Paulis from a ternary tree");
  std::size_t tt_k = 1;
  ternary->add_option("--k", tt_k, "Tree depth")->required();
  add_output(ternary);
  ternary->callback([&] {
    action = [&] {
      const auto set = ternary_tree_paulis(tt_k);
      for (const auto& p : set.paulis()) out << p.letters() << "\n";
      if (!common.out_path.empty() || common.json_stdout) {
        json j = to_json(set);
        j["run_config"] = run_config(ternary, 0, 1, common.verbosity);
        if (!common.out_path.empty()) write_file_atomic(common.out_path, j.dump(2) + "\n");
        if (common.json_stdout) out << j.dump(2) << "\n";
      }
    };
  });

  // ---- model
  auto* model = app.add_subcommand("model", "Sample one disordered Hamiltonian and diagonalize it");
  std::string md_kind;
  std::size_t md_n = 0;
  std::size_t md_loc = 0;
  std::uint64_t md_seed = 1;
  std::uint64_t md_stream = 0;
  int md_threads = 0;
  std::string md_spectrum;
  model->add_option("kind", md_kind, "syk | sg | classical")->required()->check(CLI::IsMember({"syk", "sg", "classical"}));
  model->add_option("--n", md_n, "Modes (syk) or spins")->required();
  model->add_option("--loc", md_loc, "q, k or p")->required();
  model->add_option("--seed", md_seed, "Base seed")->capture_default_str();
  model->add_option("--stream", md_stream, "Sample index")->capture_default_str();
  model->add_option("--threads", md_threads, "Worker threads (0: FERMITHETA_THREADS or all cores)")->capture_default_str();
  model->add_option("--spectrum", md_spectrum, "Write the full spectrum as JSON");
  model->callback([&] {
    action = [&] {
      const Ensemble ens(parse_model_kind(md_kind), md_n, md_loc, md_seed);
      const auto d = ens.draw(md_stream);
      RealVector spec;
      if (ens.quantum()) {
        spec = eigvalsh(DenseHermitian(ens.hamiltonian(d.g, md_threads)));
      } else {
        auto e = ens.classical_energies(d.g, md_threads);
        std::sort(e.begin(), e.end());
        spec = Eigen::Map<RealVector>(e.data(), static_cast<Eigen::Index>(e.size()));
      }
      json j = {{"model", md_kind},
                {"n", md_n},
                {"loc", md_loc},
                {"terms", ens.m()},
                {"dim", ens.dim()},
                {"seed", md_seed},
                {"stream", md_stream},
                {"lambda_min", spec[0]},
                {"lambda_max", spec[spec.size() - 1]}};
      out << "lambda_min " << format_value(spec[0]) << "\nlambda_max " << format_value(spec[spec.size() - 1]) << "\n";
      if (!md_spectrum.empty()) {
        json full = j;
        full["eigenvalues"] = std::vector<double>(spec.data(), spec.data() + spec.size());
        full["run_config"] = run_config(model, md_seed, md_threads, common.verbosity);
        write_file_atomic(md_spectrum, full.dump(2) + "\n");
      }
    };
  });

  // ---- bounds
  auto* bounds = app.add_subcommand("bounds", "Circuit, MPS and network lower bounds from concentration");
  std::size_t bd_n = 0;
  std::size_t bd_q = 0;
  double bd_t = 0.0;
  double bd_gates = 0.0;
  double bd_delta = 0.0;
  double bd_c1 = 1.0;
  bounds->add_option("--n", bd_n, "Majorana modes")->required();
  bounds->add_option("--q", bd_q, "SYK degree")->required();
  bounds->add_option("--t", bd_t, "Energy threshold")->required();
  bounds->add_option("--gateset", bd_gates, "Gate set size M")->required();
  bounds->add_option("--delta", bd_delta, "Failure probability")->required();
  bounds->add_option("--c1", bd_c1, "Constant in the eigenvalue lower bound (unknown; default 1)")->capture_default_str();
  add_output(bounds);
  bounds->callback([&] {
    action = [&] {
      json j = ansatz_bounds_report(bd_n, bd_q, bd_t, bd_gates, bd_delta, bd_c1).to_json();
      j["run_config"] = run_config(bounds, 0, 1, common.verbosity);
      emit_json(j, common, out);
    };
  });

  // ---- lab
  auto* lab = app.add_subcommand("lab", "Disorder Monte Carlo experiments");
  lab->require_subcommand(1);
  struct LabFlags {
    std::size_t n = 12;
    std::size_t loc = 4;
    std::vector<double> beta{1.0};
    double tau = 0.5;
    std::size_t samples = 0;
    std::uint64_t seed = 1;
    int threads = 0;
    bool serial = false;
    std::string out;
    std::string csv;
  };
  LabFlags lf;
  std::string lab_model = "syk";
  std::string lab_state = "stabilized";
  std::string lab_quantity = "lambda_max";
  std::vector<double> t_grid = TailParams{}.t_grid;
  std::vector<std::size_t> n_list{8, 12, 16};
  std::size_t coords = 20;
  double grad_tol = 1e-5;
  bool single_term = false;

  auto lab_sub = [&](const std::string& name, const std::string& help, std::size_t default_samples) {
    auto* s = lab->add_subcommand(name, help);
    s->add_option("--n", lf.n, "System size")->capture_default_str();
    s->add_option("--loc", lf.loc, "Locality q (SYK) or p (classical)")->capture_default_str();
    s->add_option("--beta", lf.beta, "Inverse temperature(s), comma separated")->delimiter(',')->capture_default_str();
    s->add_option("--tau", lf.tau, "Time for two-point functions")->capture_default_str();
    s->add_option("--samples", lf.samples, "Disorder samples (default " + std::to_string(default_samples) + ")");
    s->add_option("--seed", lf.seed, "Base seed")->capture_default_str();
    s->add_option("--threads", lf.threads, "Worker threads (0: FERMITHETA_THREADS or all cores)")->capture_default_str();
    s->add_flag("--serial", lf.serial, "Use the serial reference loop");
    s->add_option("--out", lf.out, "Write the report JSON here");
    s->add_option("--csv", lf.csv, "Write per-sample records as CSV");
    s->add_flag("--json", common.json_stdout, "Print the report JSON on stdout");
    return s;
  };
  auto samples_or = [&](std::size_t d) { return lf.samples == 0 ? d : lf.samples; };
  auto lab_options = [&] { return LabOptions{lf.threads, lf.serial}; };
  auto finish = [&](ExperimentReport r, const CLI::App* sub) {
    r.params["run_config"] = run_config(sub, lf.seed, lf.threads, common.verbosity);
    const std::string text = r.to_json().dump(2) + "\n";
    if (!lf.out.empty()) write_file_atomic(lf.out, text);
    if (!lf.csv.empty()) write_file_atomic(lf.csv, r.records_csv());
    if (common.json_stdout) out << text;
    print_verdicts(r, out);
    if (common.verbosity > 0) err << r.experiment << ": " << r.duration_ms << " ms\n";
    if (!r.all_passed()) throw VerdictFailure{};
  };

  auto* fe = lab_sub("free-energy", "Quenched versus annealed free energy", 500);
  fe->add_option("--model", lab_model, "syk | sg | classical")->check(CLI::IsMember({"syk", "sg", "classical"}))->capture_default_str();
  fe->add_flag("--single-term", single_term, "Check the q = n case against quadrature instead");
  fe->callback([&] {
    action = [&] {
      if (single_term) {
        finish(single_term_free_energy_check(lf.n, lf.beta), fe);
      } else {
        finish(free_energy_experiment(parse_model_kind(lab_model), lf.n, lf.loc, lf.beta, samples_or(500), lf.seed,
                                      lab_options()),
               fe);
      }
    };
  });

  auto* gc = lab_sub("gradcheck", "Analytic d lnZ / d g against central differences", 1);
  gc->add_option("--coords", coords, "Coordinates checked")->capture_default_str();
  gc->add_option("--tol", grad_tol, "Maximum relative error")->capture_default_str();
  gc->callback([&] {
    action = [&] {
      const auto t0 = std::chrono::steady_clock::now();
      ExperimentReport r;
      r.experiment = "gradcheck";
      r.seed = lf.seed;
      r.params = {{"n", lf.n}, {"q", lf.loc}, {"betas", lf.beta}, {"coordinates", coords}, {"tol", grad_tol}};
      for (double beta : lf.beta) {
        const auto g = gradcheck_logZ(lf.n, lf.loc, beta, lf.seed, coords);
        for (auto rec : g.records) {
          rec["beta"] = beta;
          r.records.push_back(rec);
        }
        std::ostringstream tag;
        tag << "gradient[beta=" << beta << "]";
        r.add_verdict(tag.str(), g.max_relative_error <= grad_tol, "d lnZ/d g_i = -beta sqrt(n/m) Tr(A_i rho)",
                      "max relative error " + format_value(g.max_relative_error));
      }
      r.duration_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      finish(std::move(r), gc);
    };
  });

  auto* va = lab_sub("variance", "Var <psi|H|psi> against the exact identity", 2000);
  va->add_option("--state", lab_state, "stabilized | random | basis")
      ->check(CLI::IsMember({"stabilized", "random", "basis"}))
      ->capture_default_str();
  va->callback([&] {
    action = [&] {
      finish(variance_identity_experiment(parse_state_spec(lab_state), lf.n, lf.loc, samples_or(2000), lf.seed,
                                          lab_options()),
             va);
    };
  });

  auto* tl = lab_sub("tails", "Empirical tails against the concentration curves", 2000);
  tl->add_option("--quantity", lab_quantity, "lambda_max | fixed_state_energy | obs_expectation | thermal_energy | two_point")
      ->check(CLI::IsMember({"lambda_max", "fixed_state_energy", "obs_expectation", "thermal_energy", "two_point"}))
      ->capture_default_str();
  tl->add_option("--t-grid", t_grid, "Deviation grid")->delimiter(',')->capture_default_str();
  tl->callback([&] {
    action = [&] {
      TailParams p;
      p.n = lf.n;
      p.q = lf.loc;
      p.beta = lf.beta.empty() ? 1.0 : lf.beta.front();
      p.tau = lf.tau;
      p.samples = samples_or(2000);
      p.t_grid = t_grid;
      p.seed = lf.seed;
      finish(tail_experiment(parse_tail_quantity(lab_quantity), p, lab_options()), tl);
    };
  });

  auto* mg = lab_sub("mgf", "Moment generating function of lambda_max", 2000);
  mg->add_option("--t-grid", t_grid, "MGF arguments")->delimiter(',')->capture_default_str();
  mg->callback([&] {
    action = [&] { finish(mgf_check(lf.n, lf.loc, samples_or(2000), t_grid, lf.seed, lab_options()), mg); };
  });

  auto* em = lab_sub("expmoment", "E Tr exp(beta H) / dim versus the Gaussian proxy", 500);
  em->callback([&] {
    action = [&] { finish(exp_moment_check(lf.n, lf.loc, lf.beta, samples_or(500), lf.seed, lab_options()), em); };
  });

  auto* ov = lab_sub("overlap", "Classical p-spin overlap second moment", 100);
  ov->callback([&] {
    action = [&] {
      finish(classical_overlap_experiment(lf.n, lf.loc, lf.beta, samples_or(100), lf.seed, lab_options()), ov);
    };
  });

  auto* ct = lab_sub("contrast", "SYK versus classical p-spin free-energy gap", 200);
  ct->add_option("--n-list", n_list, "System sizes")->delimiter(',')->capture_default_str();
  ct->callback([&] {
    action = [&] {
      finish(glassiness_contrast(n_list, lf.beta.empty() ? 2.0 : lf.beta.front(), samples_or(200), lf.seed,
                                 lab_options()),
             ct);
    };
  });

  // ---- parse, with the config file spliced in after the subcommand words
  auto usage = [&](const std::string& message) {
    err << "error: " << message << "\n\n" << deepest(&app)->help();
    return kExitUsage;
  };
  try {
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (args[i] == "--config" && i + 1 < args.size()) {
        config_path = args[i + 1];
        args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i) + 2);
        break;
      }
      if (args[i].rfind("--config=", 0) == 0) {
        config_path = args[i].substr(9);
        args.erase(args.begin() + static_cast<long>(i));
        break;
      }
    }
    if (!config_path.empty()) {
      // Locate the subcommand chain to find which keys apply.
      std::size_t split = 0;
      const CLI::App* target = &app;
      while (split < args.size() && args[split].rfind("-", 0) != 0) {
        const CLI::App* next = nullptr;
        for (const CLI::App* s : target->get_subcommands([](const CLI::App*) { return true; })) {
          if (s->get_name() == args[split]) next = s;
        }
        ++split;
        if (next == nullptr) continue;  // positional such as the model kind
        target = next;
      }
      std::vector<std::string> injected;
      for (const auto& [key, value] : read_config(config_path)) {
        const CLI::Option* opt = target->get_option_no_throw("--" + key);
        if (opt == nullptr) {
          if (common.verbosity > 0) err << "config: ignoring " << key << " for this subcommand\n";
          continue;
        }
        if (opt->get_expected_max() == 0) {
          if (value == "true" || value == "1") injected.push_back("--" + key);
        } else {
          injected.push_back("--" + key);
          injected.push_back(value);
        }
      }
      args.insert(args.begin() + static_cast<long>(split), injected.begin(), injected.end());
    }
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << deepest(&app)->help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    return usage(e.what());
  } catch (const InputError& e) {
    return usage(e.what());
  }

  try {
    if (!action) return usage("nothing to do");
    action();
    return kExitOk;
  } catch (const VerdictFailure&) {
    return kExitVerdict;
  } catch (const InputError& e) {
    return usage(e.what());
  } catch (const CapacityError& e) {
    err << "capacity: " << e.what() << "\n";
    return kExitCapacity;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace fermitheta::cli

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fermitheta/models.hpp"
#include "fermitheta/report.hpp"

namespace fermitheta {

struct LabOptions {
  int threads = 0;      // 0: FERMITHETA_THREADS or the OpenMP default
  bool serial = false;  // run the serial reference loop instead
};

// Rigorous upper bound on the commutation index used in every verdict.
struct DeltaUpper {
  double value;
  std::string source;
};
DeltaUpper delta_upper(ModelKind kind, std::size_t n, std::size_t locality);

ExperimentReport free_energy_experiment(ModelKind model, std::size_t n, std::size_t loc,
                                        const std::vector<double>& betas, std::size_t samples, std::uint64_t seed,
                                        const LabOptions& opt = {});

// q = n single-term SYK: the pipeline's ln Z, integrated over a Gauss-Hermite
// rule, against ln dim + E ln cosh(beta sqrt(n) g) from adaptive Simpson.
ExperimentReport single_term_free_energy_check(std::size_t n, const std::vector<double>& betas, double tol = 1e-3);

struct GradcheckResult {
  double max_relative_error;
  std::size_t coordinates;
  nlohmann::ordered_json records;
};
GradcheckResult gradcheck_logZ(std::size_t n, std::size_t q, double beta, std::uint64_t seed,
                               std::size_t coordinates = 20, double step = 1e-5);

enum class StateSpec { stabilized, random, basis };
StateSpec parse_state_spec(std::string_view text);
ExperimentReport variance_identity_experiment(StateSpec state, std::size_t n, std::size_t q, std::size_t samples,
                                              std::uint64_t seed, const LabOptions& opt = {});

enum class TailQuantity { lambda_max, fixed_state_energy, obs_expectation, thermal_energy, two_point };
TailQuantity parse_tail_quantity(std::string_view text);
std::string to_string(TailQuantity q);

struct TailParams {
  std::size_t n = 12;
  std::size_t q = 4;
  double beta = 1.0;
  double tau = 0.5;
  std::size_t samples = 2000;
  std::vector<double> t_grid = {0.2, 0.4, 0.6, 0.8, 1.0, 1.2, 1.4, 1.6, 1.8, 2.0};
  std::uint64_t seed = 1;
  double pilot_fraction = 0.1;
};
ExperimentReport tail_experiment(TailQuantity quantity, const TailParams& params, const LabOptions& opt = {});

ExperimentReport mgf_check(std::size_t n, std::size_t q, std::size_t samples, const std::vector<double>& t_grid,
                           std::uint64_t seed, const LabOptions& opt = {});

ExperimentReport exp_moment_check(std::size_t n, std::size_t q, const std::vector<double>& beta_grid,
                                  std::size_t samples, std::uint64_t seed, const LabOptions& opt = {});

ExperimentReport classical_overlap_experiment(std::size_t n, std::size_t p, const std::vector<double>& beta_grid,
                                              std::size_t samples, std::uint64_t seed, const LabOptions& opt = {});

ExperimentReport glassiness_contrast(const std::vector<std::size_t>& n_list, double beta, std::size_t samples,
                                     std::uint64_t seed, const LabOptions& opt = {});

}  // namespace fermitheta

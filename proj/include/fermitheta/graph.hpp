#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "fermitheta/algebra.hpp"
#include "fermitheta/kernels.hpp"

namespace fermitheta {

inline constexpr std::size_t kMaxGraphVertices = 10'000;

// Undirected simple graph, one packed bitset row per vertex. For commutation
// graphs an edge joins two anticommuting operators.
class CommutationGraph {
 public:
  CommutationGraph(kernels::AdjacencyRows rows, std::vector<std::string> labels);
  static CommutationGraph from_edges(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges);
  static CommutationGraph cycle(std::size_t n);
  static CommutationGraph complete(std::size_t n);

  std::size_t size() const { return rows_.size(); }
  bool adjacent(std::size_t u, std::size_t v) const { return (rows_[u][v / 64] >> (v % 64)) & 1u; }
  std::size_t degree(std::size_t v) const;
  std::vector<std::size_t> neighbors(std::size_t v) const;
  std::vector<std::pair<std::size_t, std::size_t>> edges() const;
  std::size_t edge_count() const;
  std::size_t max_degree() const;
  std::size_t min_degree() const;
  double mean_degree() const;
  const std::vector<std::string>& labels() const { return labels_; }
  const kernels::AdjacencyRows& rows() const { return rows_; }

  // {"vertices": [...], "adjacency": [[...], ...], "degree_stats": {...}}
  nlohmann::ordered_json to_json() const;
  // "source,target" header then one line per edge (u < v).
  std::string to_edge_csv() const;

 private:
  kernels::AdjacencyRows rows_;
  std::vector<std::string> labels_;
};

std::string operator_label(const OperatorSet& set, std::size_t i);
nlohmann::ordered_json to_json(const OperatorSet& set);

CommutationGraph commutation_graph(const OperatorSet& set, int threads = 0);
std::size_t commutation_degree(const CommutationGraph& g);

// Products of q/2 of the commuting pairs i*gamma_{2t-1}*gamma_{2t}.
OperatorSet commuting_majorana_family(std::size_t n, std::size_t q);
// 3^k pairwise anticommuting Paulis on (3^k - 1)/2 qubits.
OperatorSet ternary_tree_paulis(std::size_t k);

// Unit vector fixed by every hermitized member: prod (I + B)/2 applied to a
// seeded random vector. Throws DegeneracyError after 16 annihilated trials.
ComplexVector stabilized_state(const OperatorSet& family, std::uint64_t seed = 0x5eedULL);

// Joint eigenvector of a commuting family where each member's sign is chosen
// to keep the larger projection; signs[i] is the eigenvalue of member i.
struct JointEigenstate {
  ComplexVector psi;
  std::vector<int> signs;
};
JointEigenstate joint_eigenstate(const OperatorSet& family, std::uint64_t seed = 0x5eedULL);

// Maximum independent set by branch and bound with a greedy-colouring bound.
struct IndependentSet {
  std::vector<std::size_t> vertices;
  bool optimal = false;  // false when the node budget ran out
};
IndependentSet maximum_independent_set(const CommutationGraph& g, std::size_t node_budget = 2'000'000);

}  // namespace fermitheta

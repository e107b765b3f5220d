#include "fermitheta/graph.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <sstream>

#include "fermitheta/combinatorics.hpp"
#include "fermitheta/errors.hpp"
#include "fermitheta/random.hpp"

namespace fermitheta {

namespace {

using Row = std::vector<std::uint64_t>;

Row empty_row(std::size_t n) { return Row((n + 63) / 64, 0); }

void set_bit(Row& r, std::size_t i) { r[i / 64] |= std::uint64_t{1} << (i % 64); }

std::vector<std::string> index_labels(std::size_t n) {
  std::vector<std::string> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = std::to_string(i);
  return labels;
}

}  // namespace

CommutationGraph::CommutationGraph(kernels::AdjacencyRows rows, std::vector<std::string> labels)
    : rows_(std::move(rows)), labels_(std::move(labels)) {
  const std::size_t n = rows_.size();
  if (labels_.size() != n) throw InputError("one label per vertex required");
  for (std::size_t u = 0; u < n; ++u) {
    if (rows_[u].size() != (n + 63) / 64) throw InputError("adjacency row has the wrong width");
    if (adjacent(u, u)) throw InputError("self-loop in graph");
    for (std::size_t v = 0; v < u; ++v) {
      if (adjacent(u, v) != adjacent(v, u)) throw InputError("adjacency is not symmetric");
    }
  }
}

CommutationGraph CommutationGraph::from_edges(std::size_t n,
                                              const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  kernels::AdjacencyRows rows(n, empty_row(n));
  for (auto [u, v] : edges) {
    if (u >= n || v >= n || u == v) throw InputError("invalid edge");
    set_bit(rows[u], v);
    set_bit(rows[v], u);
  }
  return CommutationGraph(std::move(rows), index_labels(n));
}

CommutationGraph CommutationGraph::cycle(std::size_t n) {
  if (n < 3) throw InputError("cycle needs at least three vertices");
  std::vector<std::pair<std::size_t, std::size_t>> e;
  for (std::size_t i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return from_edges(n, e);
}

CommutationGraph CommutationGraph::complete(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> e;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) e.emplace_back(i, j);
  }
  return from_edges(n, e);
}

std::size_t CommutationGraph::degree(std::size_t v) const {
  std::size_t d = 0;
  for (auto w : rows_[v]) d += static_cast<std::size_t>(std::popcount(w));
  return d;
}

std::vector<std::size_t> CommutationGraph::neighbors(std::size_t v) const {
  std::vector<std::size_t> out;
  for (std::size_t u = 0; u < size(); ++u) {
    if (adjacent(v, u)) out.push_back(u);
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> CommutationGraph::edges() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t u = 0; u < size(); ++u) {
    for (std::size_t v = u + 1; v < size(); ++v) {
      if (adjacent(u, v)) out.emplace_back(u, v);
    }
  }
  return out;
}

std::size_t CommutationGraph::edge_count() const {
  std::size_t twice = 0;
  for (std::size_t v = 0; v < size(); ++v) twice += degree(v);
  return twice / 2;
}

std::size_t CommutationGraph::max_degree() const {
  std::size_t d = 0;
  for (std::size_t v = 0; v < size(); ++v) d = std::max(d, degree(v));
  return d;
}

std::size_t CommutationGraph::min_degree() const {
  if (size() == 0) return 0;
  std::size_t d = size();
  for (std::size_t v = 0; v < size(); ++v) d = std::min(d, degree(v));
  return d;
}

double CommutationGraph::mean_degree() const {
  if (size() == 0) return 0.0;
  return 2.0 * static_cast<double>(edge_count()) / static_cast<double>(size());
}

nlohmann::ordered_json CommutationGraph::to_json() const {
  nlohmann::ordered_json j;
  j["vertices"] = labels_;
  auto adj = nlohmann::ordered_json::array();
  for (std::size_t v = 0; v < size(); ++v) adj.push_back(neighbors(v));
  j["adjacency"] = std::move(adj);
  j["degree_stats"] = {{"max", max_degree()}, {"min", min_degree()}, {"mean", mean_degree()}};
  return j;
}

std::string CommutationGraph::to_edge_csv() const {
  std::ostringstream os;
  os << "source,target\n";
  for (auto [u, v] : edges()) os << u << ',' << v << '\n';
  return os.str();
}

// ---------------------------------------------------------------- labels / JSON

std::string operator_label(const OperatorSet& set, std::size_t i) {
  if (set.kind() == OperatorKind::pauli) {
    const auto& p = set.paulis()[i];
    static const char* kPrefix[4] = {"", "i", "-", "-i"};
    return kPrefix[p.letter_phase()] + p.letters();
  }
  std::string s = "g";
  const auto modes = set.majoranas()[i].one_based();
  for (std::size_t t = 0; t < modes.size(); ++t) s += (t ? "," : "") + std::to_string(modes[t]);
  return s;
}

nlohmann::ordered_json to_json(const OperatorSet& set) {
  nlohmann::ordered_json j;
  j["kind"] = to_string(set.kind());
  j["n"] = set.n();
  j["locality"] = set.locality();
  j["provenance"] = to_string(set.provenance());
  auto members = nlohmann::ordered_json::array();
  if (set.kind() == OperatorKind::pauli) {
    for (const auto& p : set.paulis()) members.push_back({{"letters", p.letters()}, {"phase", p.letter_phase()}});
  } else {
    for (const auto& m : set.majoranas()) members.push_back(m.one_based());
  }
  j["members"] = std::move(members);
  return j;
}

// ---------------------------------------------------------------- graphs

CommutationGraph commutation_graph(const OperatorSet& set, int threads) {
  if (set.size() > kMaxGraphVertices) throw CapacityError("commutation graph limited to 10^4 vertices");
  std::vector<std::string> labels(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) labels[i] = operator_label(set, i);
  return CommutationGraph(kernels::adjacency_rows_parallel(set, threads), std::move(labels));
}

std::size_t commutation_degree(const CommutationGraph& g) { return g.max_degree(); }

OperatorSet commuting_majorana_family(std::size_t n, std::size_t q) {
  if (n == 0 || n % 2 != 0) throw InputError("number of Majorana modes must be positive and even");
  if (q % 2 != 0) throw InputError("degree must be even");
  if (q > n) throw InputError("degree exceeds number of modes");
  std::vector<MajoranaMonomial> members;
  for (const auto& pairs : combinations(static_cast<int>(n / 2), static_cast<int>(q / 2))) {
    std::vector<int> modes;
    for (int t : pairs) {
      modes.push_back(2 * t + 1);
      modes.push_back(2 * t + 2);
    }
    members.emplace_back(n, std::span<const int>(modes));
  }
  return OperatorSet(n, q, std::move(members), Provenance::commuting_family);
}

OperatorSet ternary_tree_paulis(std::size_t k) {
  if (k < 1) throw InputError("ternary tree depth must be at least 1");
  if (k > 6) throw CapacityError("ternary tree depth limited to 6");
  std::size_t leaves = 1;
  for (std::size_t i = 0; i < k; ++i) leaves *= 3;
  const std::size_t n = (leaves - 1) / 2;
  static constexpr char kBranch[3] = {'X', 'Y', 'Z'};
  std::vector<PauliString> members;
  members.reserve(leaves);
  for (std::size_t leaf = n; leaf < n + leaves; ++leaf) {
    std::string s(n, 'I');
    for (std::size_t v = leaf; v > 0; v = (v - 1) / 3) s[(v - 1) / 3] = kBranch[(v - 1) % 3];
    members.push_back(PauliString::from_letters(s));
  }
  return OperatorSet(n, k, std::move(members), Provenance::ternary_tree);
}

// ---------------------------------------------------------------- states

namespace {

ComplexVector random_vector(std::size_t dim, RandomStream& rng) {
  ComplexVector v(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = Complex(rng.gaussian(), rng.gaussian());
  return v / v.norm();
}

void require_commuting(const OperatorSet& family) {
  for (std::size_t i = 0; i < family.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (family.anticommutes(i, j)) throw InputError("family members must pairwise commute");
    }
  }
}

constexpr double kNullity = 1e-8;

}  // namespace

ComplexVector stabilized_state(const OperatorSet& family, std::uint64_t seed) {
  require_commuting(family);
  const auto ops = compile(family.hermitian_paulis());
  if (ops.empty()) throw InputError("family is empty");
  for (std::uint64_t attempt = 0; attempt < 16; ++attempt) {
    RandomStream rng(seed, attempt);
    ComplexVector v = random_vector(ops.front().dim, rng);
    for (const auto& b : ops) v = 0.5 * (v + b.apply(v));
    const double norm = v.norm();
    if (norm > kNullity) return v / norm;
  }
  throw DegeneracyError("projector annihilated every trial vector");
}

JointEigenstate joint_eigenstate(const OperatorSet& family, std::uint64_t seed) {
  require_commuting(family);
  const auto ops = compile(family.hermitian_paulis());
  if (ops.empty()) throw InputError("family is empty");
  for (std::uint64_t attempt = 0; attempt < 16; ++attempt) {
    RandomStream rng(seed, attempt);
    ComplexVector v = random_vector(ops.front().dim, rng);
    JointEigenstate out;
    for (const auto& b : ops) {
      const ComplexVector bv = b.apply(v);
      ComplexVector plus = 0.5 * (v + bv);
      ComplexVector minus = 0.5 * (v - bv);
      if (plus.norm() >= minus.norm()) {
        v = std::move(plus);
        out.signs.push_back(1);
      } else {
        v = std::move(minus);
        out.signs.push_back(-1);
      }
      v /= v.norm();
    }
    // The sequential choice keeps at least half of the weight, so it cannot vanish.
    out.psi = std::move(v);
    return out;
  }
  throw DegeneracyError("projector annihilated every trial vector");
}

// ---------------------------------------------------------------- independent sets

namespace {

struct CliqueSearch {
  std::vector<Row> comp;  // complement adjacency
  std::size_t n;
  std::size_t budget;
  std::size_t nodes = 0;
  std::vector<std::size_t> current;
  std::vector<std::size_t> best;

  static std::size_t count(const Row& r) {
    std::size_t c = 0;
    for (auto w : r) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  // Greedy colouring of the candidate set; returns vertices in colour order
  // with their colour numbers (upper bounds on the clique size they can add).
  void colour(const Row& cand, std::vector<std::size_t>& order, std::vector<std::size_t>& bound) const {
    Row uncoloured = cand;
    std::size_t c = 0;
    while (count(uncoloured) > 0) {
      ++c;
      Row avail = uncoloured;
      for (std::size_t w = 0; w < avail.size(); ++w) {
        while (avail[w] != 0) {
          const std::size_t v = w * 64 + static_cast<std::size_t>(std::countr_zero(avail[w]));
          avail[w] &= avail[w] - 1;
          uncoloured[v / 64] &= ~(std::uint64_t{1} << (v % 64));
          for (std::size_t k = 0; k < avail.size(); ++k) avail[k] &= ~comp[v][k];
          order.push_back(v);
          bound.push_back(c);
        }
      }
    }
  }

  bool expand(Row cand) {
    if (++nodes > budget) return false;
    std::vector<std::size_t> order;
    std::vector<std::size_t> bound;
    colour(cand, order, bound);
    for (std::size_t idx = order.size(); idx-- > 0;) {
      if (current.size() + bound[idx] <= best.size()) return true;
      const std::size_t v = order[idx];
      current.push_back(v);
      Row next(cand.size());
      for (std::size_t k = 0; k < cand.size(); ++k) next[k] = cand[k] & comp[v][k];
      if (count(next) == 0) {
        if (current.size() > best.size()) best = current;
      } else if (!expand(std::move(next))) {
        return false;
      }
      current.pop_back();
      cand[v / 64] &= ~(std::uint64_t{1} << (v % 64));
    }
    return true;
  }
};

}  // namespace

IndependentSet maximum_independent_set(const CommutationGraph& g, std::size_t node_budget) {
  const std::size_t n = g.size();
  CliqueSearch s{{}, n, node_budget, 0, {}, {}};
  s.comp.assign(n, empty_row(n));
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) {
      if (u != v && !g.adjacent(u, v)) set_bit(s.comp[u], v);
    }
  }
  Row all = empty_row(n);
  for (std::size_t v = 0; v < n; ++v) set_bit(all, v);
  IndependentSet out;
  if (n == 0) {
    out.optimal = true;
    return out;
  }
  out.optimal = s.expand(all);
  std::sort(s.best.begin(), s.best.end());
  out.vertices = std::move(s.best);
  return out;
}

}  // namespace fermitheta

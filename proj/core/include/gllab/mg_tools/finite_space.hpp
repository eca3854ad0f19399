#pragma once

#include <cstddef>
#include <vector>

namespace gllab {

/// A finite filtered probability space built from independent coordinates
/// xi_1, ..., xi_n, coordinate k taking b_k values with fixed probabilities,
/// together with an adapted sequence X_k = f_k(xi_1, ..., xi_k).
///
/// Nodes of level k are the prefixes (xi_1, ..., xi_k), indexed in mixed
/// radix with xi_1 most significant; the atoms are the nodes of level n.
class FiniteAdaptedSpace {
 public:
  /// `child_probs[k]` is the law of xi_{k+1}; `values[k]` holds X_{k+1} on
  /// the nodes of level k+1.
  FiniteAdaptedSpace(std::vector<std::vector<double>> child_probs,
                     std::vector<std::vector<double>> values);

  /// Binary tree of fair coins.
  static FiniteAdaptedSpace fair_binary(std::vector<std::vector<double>> values);

  std::size_t depth() const noexcept { return probs_.size(); }
  std::size_t branching(std::size_t level) const { return probs_[level].size(); }
  /// Law of xi_{level+1}.
  const std::vector<double>& child_probs(std::size_t level) const { return probs_[level]; }
  std::size_t nodes(std::size_t level) const { return nodes_[level]; }
  std::size_t atoms() const noexcept { return nodes_.back(); }
  double atom_probability(std::size_t atom) const { return atom_prob_[atom]; }
  const std::vector<double>& level_values(std::size_t k) const { return values_[k - 1]; }

  /// X_k on every atom, k = 1..n.
  std::vector<double> lift(std::size_t k) const;
  /// Lifts a function of level `level` nodes to the atoms.
  std::vector<double> lift_nodes(const std::vector<double>& f, std::size_t level) const;

  /// E(f | F_level) for a function f on the atoms, returned on level nodes.
  std::vector<double> conditional_expectation(const std::vector<double>& f_atoms,
                                              std::size_t level) const;

  /// (sum_atoms P * |f|^p)^{1/p}.
  double lp_norm(const std::vector<double>& f_atoms, double p) const;
  double probability(const std::vector<bool>& event) const;

  /// Replaces X_k by X_k - E(X_k | F_{k-1}).
  FiniteAdaptedSpace centered() const;
  bool is_martingale_difference(double tol = 1e-12) const;

  /// S_k on the atoms for k = 1..n (index k-1).
  std::vector<std::vector<double>> partial_sums() const;
  /// max_{k<=n} |S_k| on the atoms.
  std::vector<double> running_max_abs() const;
  /// sum_k E(X_k^2 | F_{k-1}) on the atoms.
  std::vector<double> conditional_variance_sum() const;

 private:
  std::vector<std::vector<double>> probs_;
  std::vector<std::vector<double>> values_;
  std::vector<std::size_t> nodes_;  // nodes_[k] = number of level-k nodes
  std::vector<double> atom_prob_;
};

}  // namespace gllab

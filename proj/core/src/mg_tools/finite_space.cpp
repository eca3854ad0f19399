#include "gllab/mg_tools/finite_space.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gllab/common/error.hpp"

namespace gllab {

FiniteAdaptedSpace::FiniteAdaptedSpace(std::vector<std::vector<double>> child_probs,
                                       std::vector<std::vector<double>> values)
    : probs_(std::move(child_probs)), values_(std::move(values)) {
  if (probs_.empty()) throw InvariantError("FiniteAdaptedSpace: depth must be at least 1");
  if (values_.size() != probs_.size()) {
    throw InvariantError("FiniteAdaptedSpace: one value vector per level is required");
  }
  nodes_.assign(1, 1);
  for (std::size_t k = 0; k < probs_.size(); ++k) {
    const auto& pr = probs_[k];
    if (pr.size() < 2) throw InvariantError("FiniteAdaptedSpace: branching must be at least 2");
    double sum = 0.0;
    for (double q : pr) {
      if (!(q > 0.0)) throw InvariantError("FiniteAdaptedSpace: probabilities must be positive");
      sum += q;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw InvariantError("FiniteAdaptedSpace: probabilities must sum to 1");
    nodes_.push_back(nodes_.back() * pr.size());
    if (values_[k].size() != nodes_.back()) {
      throw InvariantError("FiniteAdaptedSpace: level " + std::to_string(k + 1) +
                           " needs one value per node");
    }
    for (double x : values_[k]) {
      if (!std::isfinite(x)) throw InvariantError("FiniteAdaptedSpace: values must be finite");
    }
  }
  atom_prob_.assign(1, 1.0);
  for (const auto& pr : probs_) {
    std::vector<double> next;
    next.reserve(atom_prob_.size() * pr.size());
    for (double a : atom_prob_) {
      for (double q : pr) next.push_back(a * q);
    }
    atom_prob_.swap(next);
  }
}

FiniteAdaptedSpace FiniteAdaptedSpace::fair_binary(std::vector<std::vector<double>> values) {
  std::vector<std::vector<double>> probs(values.size(), std::vector<double>{0.5, 0.5});
  return FiniteAdaptedSpace(std::move(probs), std::move(values));
}

std::vector<double> FiniteAdaptedSpace::lift(std::size_t k) const {
  if (k < 1 || k > depth()) throw DomainError("FiniteAdaptedSpace::lift: level out of range");
  return lift_nodes(values_[k - 1], k);
}

std::vector<double> FiniteAdaptedSpace::lift_nodes(const std::vector<double>& f,
                                                   std::size_t level) const {
  if (f.size() != nodes_[level]) throw DomainError("FiniteAdaptedSpace::lift_nodes: size mismatch");
  const std::size_t stride = atoms() / nodes_[level];
  std::vector<double> out(atoms());
  for (std::size_t a = 0; a < out.size(); ++a) out[a] = f[a / stride];
  return out;
}

std::vector<double> FiniteAdaptedSpace::conditional_expectation(const std::vector<double>& f_atoms,
                                                                std::size_t level) const {
  if (f_atoms.size() != atoms()) throw DomainError("conditional_expectation: size mismatch");
  if (level > depth()) throw DomainError("conditional_expectation: level out of range");
  const std::size_t stride = atoms() / nodes_[level];
  std::vector<double> out(nodes_[level]);
  for (std::size_t m = 0; m < out.size(); ++m) {
    double mass = 0.0, acc = 0.0;
    for (std::size_t a = m * stride; a < (m + 1) * stride; ++a) {
      mass += atom_prob_[a];
      acc += atom_prob_[a] * f_atoms[a];
    }
    out[m] = acc / mass;
  }
  return out;
}

double FiniteAdaptedSpace::lp_norm(const std::vector<double>& f_atoms, double p) const {
  if (f_atoms.size() != atoms()) throw DomainError("lp_norm: size mismatch");
  double acc = 0.0;
  for (std::size_t a = 0; a < atoms(); ++a) acc += atom_prob_[a] * std::pow(std::abs(f_atoms[a]), p);
  return std::pow(acc, 1.0 / p);
}

double FiniteAdaptedSpace::probability(const std::vector<bool>& event) const {
  if (event.size() != atoms()) throw DomainError("probability: size mismatch");
  double acc = 0.0;
  for (std::size_t a = 0; a < atoms(); ++a) {
    if (event[a]) acc += atom_prob_[a];
  }
  return acc;
}

FiniteAdaptedSpace FiniteAdaptedSpace::centered() const {
  auto values = values_;
  for (std::size_t k = 0; k < depth(); ++k) {
    const auto& pr = probs_[k];
    for (std::size_t m = 0; m < nodes_[k]; ++m) {
      double mean = 0.0;
      for (std::size_t c = 0; c < pr.size(); ++c) mean += pr[c] * values_[k][m * pr.size() + c];
      for (std::size_t c = 0; c < pr.size(); ++c) values[k][m * pr.size() + c] -= mean;
    }
  }
  return FiniteAdaptedSpace(probs_, std::move(values));
}

bool FiniteAdaptedSpace::is_martingale_difference(double tol) const {
  for (std::size_t k = 0; k < depth(); ++k) {
    const auto& pr = probs_[k];
    for (std::size_t m = 0; m < nodes_[k]; ++m) {
      double mean = 0.0;
      for (std::size_t c = 0; c < pr.size(); ++c) mean += pr[c] * values_[k][m * pr.size() + c];
      if (std::abs(mean) > tol) return false;
    }
  }
  return true;
}

std::vector<std::vector<double>> FiniteAdaptedSpace::partial_sums() const {
  std::vector<std::vector<double>> out;
  std::vector<double> s(atoms(), 0.0);
  for (std::size_t k = 1; k <= depth(); ++k) {
    const auto x = lift(k);
    for (std::size_t a = 0; a < atoms(); ++a) s[a] += x[a];
    out.push_back(s);
  }
  return out;
}

std::vector<double> FiniteAdaptedSpace::running_max_abs() const {
  std::vector<double> best(atoms(), 0.0);
  for (const auto& s : partial_sums()) {
    for (std::size_t a = 0; a < atoms(); ++a) best[a] = std::max(best[a], std::abs(s[a]));
  }
  return best;
}

std::vector<double> FiniteAdaptedSpace::conditional_variance_sum() const {
  std::vector<double> total(atoms(), 0.0);
  for (std::size_t k = 0; k < depth(); ++k) {
    const auto& pr = probs_[k];
    std::vector<double> cv(nodes_[k], 0.0);
    for (std::size_t m = 0; m < nodes_[k]; ++m) {
      for (std::size_t c = 0; c < pr.size(); ++c) {
        const double x = values_[k][m * pr.size() + c];
        cv[m] += pr[c] * x * x;
      }
    }
    const auto lifted = lift_nodes(cv, k);
    for (std::size_t a = 0; a < atoms(); ++a) total[a] += lifted[a];
  }
  return total;
}

}  // namespace gllab

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>

#include "gllab/matrix_walk/measure.hpp"
#include "gllab/matrix_walk/projective_point.hpp"
#include "gllab/matrix_walk/square_matrix.hpp"

namespace gllab {

/// A cocycle sigma: G x X -> R, i.e. sigma(gh, u) = sigma(g, h.u) + sigma(h, u).
/// Two cocycles are built in (the log-norm expansion and log|det|); user
/// cocycles are probed for the identity when registered.
class CocycleSpec {
 public:
  using Evaluator = std::function<double(const SquareMatrix&, const ProjectivePoint&)>;

  static CocycleSpec log_norm();
  static CocycleSpec log_abs_det();
  /// Looks up a built-in cocycle by label ("log-norm", "log-abs-det").
  static CocycleSpec by_label(const std::string& label);
  /// Registers `f`, rejecting it with InvariantError when the cocycle
  /// identity fails by more than `tol` on `probes` random triples in
  /// dimension `dim`.
  static CocycleSpec custom(std::string label, Evaluator f, int dim, std::size_t probes = 64,
                            double tol = 1e-8, std::uint64_t seed = 0x5eedc0c1ULL);

  const std::string& label() const noexcept { return label_; }
  bool is_log_norm() const noexcept { return kind_ == Kind::log_norm; }

  double operator()(const SquareMatrix& g, const ProjectivePoint& u) const;
  /// Same value on a sampled element and a unit representative of u.
  double evaluate(const GroupElement& g, std::span<const double> unit) const;

 private:
  enum class Kind { log_norm, log_abs_det, custom };

  CocycleSpec(Kind kind, std::string label, Evaluator f)
      : kind_(kind), label_(std::move(label)), f_(std::move(f)) {}

  Kind kind_;
  std::string label_;
  Evaluator f_;
};

/// |sigma(gh, u) - sigma(g, h.u) - sigma(h, u)|.
double cocycle_identity_violation(const CocycleSpec& sigma, const SquareMatrix& g,
                                  const SquareMatrix& h, const ProjectivePoint& u);

/// Largest identity violation over `probes` random triples (Gaussian
/// matrices, Gaussian directions) in dimension `dim`.
double max_cocycle_violation(const CocycleSpec& sigma, int dim, std::size_t probes,
                             std::uint64_t seed);

}  // namespace gllab

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gllab/common/rng.hpp"
#include "gllab/matrix_walk/measure.hpp"
#include "gllab/matrix_walk/projective_point.hpp"
#include "gllab/matrix_walk/square_matrix.hpp"

namespace gllab {

/// g . x on P^{d-1}(R).
ProjectivePoint act(const SquareMatrix& g, const ProjectivePoint& x);

/// sigma(g, x) = log(|g x| / |x|) for the unit representative of x.
double cocycle_sigma(const SquareMatrix& g, const ProjectivePoint& x);

/// Factored-form counterparts.
ProjectivePoint act(const GroupElement& g, const ProjectivePoint& x);
double cocycle_sigma(const GroupElement& g, const ProjectivePoint& x);

/// One trajectory of the left random walk A_n = Y_n ... Y_1.
struct WalkPath {
  ProjectivePoint x0;
  /// increments[k] = X_{k+1,x} = sigma(Y_{k+1}, A_k x).
  std::vector<double> increments;
  /// directions[k] = A_{k+1} . x.
  std::vector<ProjectivePoint> directions;
  /// log N(Y_{k+1}).
  std::vector<double> step_log_big_n;

  std::size_t length() const noexcept { return increments.size(); }
  /// log |A_k x| = sum of the first k increments.
  double log_norm_after(std::size_t k) const;
};

/// Streaming walker. The product A_n is never formed: the direction is
/// renormalised after each step and only log growths are accumulated.
class Walker {
 public:
  Walker(const Sampler& sampler, const ProjectivePoint& x0, RngStream& rng);

  /// Draws the next step matrix without applying it.
  const GroupElement& draw();
  /// Applies `g` to the current direction and returns sigma(g, current).
  double advance(const GroupElement& g);
  /// draw() followed by advance().
  double step() { return advance(draw()); }

  std::span<const double> direction() const noexcept { return dir_; }
  ProjectivePoint point() const { return ProjectivePoint(std::span<const double>(dir_)); }
  void reset(const ProjectivePoint& x0);

 private:
  const Sampler* sampler_;
  RngStream* rng_;
  GroupElement scratch_;
  std::vector<double> dir_;
  std::vector<double> work_;
};

/// Generates a trajectory of length n >= 1.
WalkPath run_walk(const MeasureSpec& spec, const ProjectivePoint& x0, std::size_t n,
                  RngStream& rng);
WalkPath run_walk(const Sampler& sampler, const ProjectivePoint& x0, std::size_t n,
                  RngStream& rng);

}  // namespace gllab

#include "gllab/matrix_walk/walk.hpp"

#include <cmath>

#include "gllab/common/error.hpp"

namespace gllab {

ProjectivePoint act(const SquareMatrix& g, const ProjectivePoint& x) {
  if (g.dim() != x.dim()) throw InvariantError("act: dimension mismatch");
  return ProjectivePoint(Eigen::VectorXd(g.entries() * x.direction()));
}

double cocycle_sigma(const SquareMatrix& g, const ProjectivePoint& x) {
  if (g.dim() != x.dim()) throw InvariantError("cocycle_sigma: dimension mismatch");
  return std::log((g.entries() * x.direction()).norm());
}

ProjectivePoint act(const GroupElement& g, const ProjectivePoint& x) {
  if (g.dim() != x.dim()) throw InvariantError("act: dimension mismatch");
  std::vector<double> v(x.direction().data(), x.direction().data() + x.dim());
  std::vector<double> scratch(2 * v.size());
  g.apply(v, scratch);
  return ProjectivePoint(std::span<const double>(v));
}

double cocycle_sigma(const GroupElement& g, const ProjectivePoint& x) {
  if (g.dim() != x.dim()) throw InvariantError("cocycle_sigma: dimension mismatch");
  return g.log_growth(std::span<const double>(x.direction().data(), static_cast<std::size_t>(x.dim())));
}

double WalkPath::log_norm_after(std::size_t k) const {
  if (k > increments.size()) throw RangeError("WalkPath::log_norm_after: k beyond path length");
  double s = 0.0;
  for (std::size_t i = 0; i < k; ++i) s += increments[i];
  return s;
}

Walker::Walker(const Sampler& sampler, const ProjectivePoint& x0, RngStream& rng)
    : sampler_(&sampler), rng_(&rng), work_(2 * static_cast<std::size_t>(sampler.dim())) {
  reset(x0);
}

void Walker::reset(const ProjectivePoint& x0) {
  if (x0.dim() != sampler_->dim()) throw InvariantError("Walker: start point dimension mismatch");
  dir_.assign(x0.direction().data(), x0.direction().data() + x0.dim());
}

const GroupElement& Walker::draw() { return sampler_->draw(*rng_, scratch_); }

double Walker::advance(const GroupElement& g) { return g.apply(dir_, work_); }

WalkPath run_walk(const Sampler& sampler, const ProjectivePoint& x0, std::size_t n,
                  RngStream& rng) {
  if (n < 1) throw DomainError("run_walk: n must be at least 1");
  Walker walker(sampler, x0, rng);
  WalkPath path{x0, {}, {}, {}};
  path.increments.reserve(n);
  path.directions.reserve(n);
  path.step_log_big_n.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const GroupElement& g = walker.draw();
    path.step_log_big_n.push_back(g.log_big_n());
    path.increments.push_back(walker.advance(g));
    path.directions.push_back(walker.point());
  }
  return path;
}

WalkPath run_walk(const MeasureSpec& spec, const ProjectivePoint& x0, std::size_t n,
                  RngStream& rng) {
  const Sampler sampler(spec);
  return run_walk(sampler, x0, n, rng);
}

}  // namespace gllab

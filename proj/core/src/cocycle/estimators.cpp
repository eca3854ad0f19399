#include "gllab/cocycle/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "gllab/common/direction_grid.hpp"
#include "gllab/common/error.hpp"
#include "gllab/common/parallel.hpp"
#include "gllab/matrix_walk/walk.hpp"

namespace gllab {
namespace {

constexpr std::size_t kChunk = 64;

// Cocycle increment for the step that draws g from the walker's state.
double cocycle_step(Walker& walker, const CocycleSpec& cocycle) {
  if (cocycle.is_log_norm()) return walker.step();
  const GroupElement& g = walker.draw();
  const double value = cocycle.evaluate(g, walker.direction());
  walker.advance(g);
  return value;
}

double trajectory_sum(const Sampler& sampler, const CocycleSpec& cocycle,
                      const ProjectivePoint& x0, std::size_t n, RngStream& rng,
                      std::vector<double>* increments = nullptr) {
  Walker walker(sampler, x0, rng);
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double x = cocycle_step(walker, cocycle);
    if (increments) increments->push_back(x);
    sum += x;
  }
  return sum;
}

}  // namespace

LyapunovEstimate estimate_lambda(const MeasureSpec& spec, const CocycleSpec& cocycle,
                                 std::size_t n, std::size_t reps, std::size_t x_grid_size,
                                 const MonteCarlo& mc) {
  if (n < 1) throw DomainError("estimate_lambda: n must be at least 1");
  if (reps < 1) throw DomainError("estimate_lambda: reps must be at least 1");
  const Sampler sampler(spec);
  const auto starts = direction_grid(spec.dim, std::max<std::size_t>(x_grid_size, 1));
  const std::size_t total = starts.size() * reps;

  LyapunovEstimate out;
  out.n = n;
  out.reps = reps;
  out.x_grid_size = starts.size();
  out.trajectory_means.assign(total, 0.0);

  if (total == 1) {
    RngStream rng(mc.seed, 0);
    std::vector<double> inc;
    inc.reserve(n);
    trajectory_sum(sampler, cocycle, starts[0], n, rng, &inc);
    const MeanEstimate bm = batch_means(inc, 20);
    out.lambda_hat = bm.mean;
    out.std_error = bm.std_error;
    out.trajectory_means[0] = bm.mean;
    out.per_start.push_back(bm);
    return out;
  }

  for_each_chunk(total, kChunk, mc.threads, [&](const ChunkRange& c) {
    for (std::size_t t = c.begin; t < c.end; ++t) {
      RngStream rng(mc.seed, t);
      out.trajectory_means[t] =
          trajectory_sum(sampler, cocycle, starts[t / reps], n, rng) / static_cast<double>(n);
    }
  });

  const MeanEstimate all = mean_estimate(out.trajectory_means);
  out.lambda_hat = all.mean;
  out.std_error = all.std_error;
  for (std::size_t s = 0; s < starts.size(); ++s) {
    out.per_start.push_back(mean_estimate(
        std::span<const double>(out.trajectory_means).subspan(s * reps, reps)));
  }
  return out;
}

VarianceReport estimate_variance(const MeasureSpec& spec, const CocycleSpec& cocycle,
                                 double lambda, std::size_t n, std::size_t reps,
                                 const std::vector<ProjectivePoint>& starts,
                                 const MonteCarlo& mc) {
  if (n < 1 || reps < 2) throw DomainError("estimate_variance: need n >= 1 and reps >= 2");
  if (starts.empty()) throw DomainError("estimate_variance: no start directions");
  const Sampler sampler(spec);
  const std::size_t total = starts.size() * reps;
  std::vector<double> z(total);
  const double dn = static_cast<double>(n);
  for_each_chunk(total, kChunk, mc.threads, [&](const ChunkRange& c) {
    for (std::size_t t = c.begin; t < c.end; ++t) {
      RngStream rng(mc.seed, t);
      const double centred = trajectory_sum(sampler, cocycle, starts[t / reps], n, rng) - dn * lambda;
      z[t] = centred * centred / dn;
    }
  });

  VarianceReport report;
  const MeanEstimate pooled = mean_estimate(z);
  report.pooled = {pooled.mean, pooled.std_error, n};
  for (std::size_t s = 0; s < starts.size(); ++s) {
    const MeanEstimate e = mean_estimate(std::span<const double>(z).subspan(s * reps, reps));
    report.per_start.push_back({e.mean, e.std_error, n});
  }
  for (std::size_t i = 0; i < report.per_start.size(); ++i) {
    for (std::size_t j = i + 1; j < report.per_start.size(); ++j) {
      const auto& a = report.per_start[i];
      const auto& b = report.per_start[j];
      const double joint = std::sqrt(a.std_error * a.std_error + b.std_error * b.std_error);
      if (std::abs(a.v_hat - b.v_hat) > 3.0 * joint) report.consistent_across_starts = false;
    }
  }
  return report;
}

OccupationSample occupation_measure(const MeasureSpec& spec, const ProjectivePoint& x0,
                                    std::size_t burn_in, std::size_t n, RngStream& rng) {
  if (n < 1) throw DomainError("occupation_measure: n must be at least 1");
  const Sampler sampler(spec);
  Walker walker(sampler, x0, rng);
  for (std::size_t k = 0; k < burn_in; ++k) walker.step();
  OccupationSample out;
  out.points.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    walker.step();
    out.points.push_back(walker.point());
  }
  out.weights.assign(n, 1.0 / static_cast<double>(n));
  return out;
}

InvarianceResidual invariance_residual(const MeasureSpec& spec, const OccupationSample& sample,
                                       const std::function<double(const ProjectivePoint&)>& h,
                                       RngStream& rng) {
  if (sample.points.empty()) throw DomainError("invariance_residual: empty occupation sample");
  const Sampler sampler(spec);
  GroupElement scratch;
  const std::size_t n = sample.points.size();
  std::vector<double> here(n), pushed(n);
  for (std::size_t k = 0; k < n; ++k) {
    here[k] = h(sample.points[k]);
    pushed[k] = h(act(sampler.draw(rng, scratch), sample.points[k]));
  }
  InvarianceResidual out;
  for (std::size_t k = 0; k < n; ++k) {
    out.occupation_mean += sample.weights[k] * here[k];
    out.pushed_mean += sample.weights[k] * pushed[k];
  }
  out.residual = out.occupation_mean - out.pushed_mean;
  if (n >= 3) {
    // h(x_{k+1}) - h(g'_k x_k) are martingale differences along the chain.
    std::vector<double> diffs(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) diffs[k] = here[k + 1] - pushed[k];
    out.std_error = mean_estimate(diffs).std_error;
  }
  return out;
}

std::string to_string(GordinVerdict v) {
  switch (v) {
    case GordinVerdict::summable_looking:
      return "summable-looking";
    case GordinVerdict::diverging:
      return "diverging";
    case GordinVerdict::inconclusive:
      break;
  }
  return "inconclusive";
}

GordinReport gordin_check(const MeasureSpec& spec, const CocycleSpec& cocycle, double lambda,
                          std::size_t n_max, std::size_t reps, std::size_t x_grid_size,
                          const MonteCarlo& mc) {
  if (x_grid_size == 0) throw DomainError("gordin_check: x_grid must be nonempty");
  if (reps < 2) throw DomainError("gordin_check: reps must be at least 2");
  const Sampler sampler(spec);
  const auto starts = direction_grid(spec.dim, x_grid_size);
  const std::size_t len = n_max + 1;
  const auto& support = sampler.support();
  const auto weights = sampler.weights();
  const bool exact_mean = !support.empty();

  GordinReport report;
  report.a_n.assign(len, 0.0);
  report.std_errors.assign(len, 0.0);

  for (std::size_t s = 0; s < starts.size(); ++s) {
    const std::size_t chunks = chunk_count(reps, kChunk);
    std::vector<std::vector<double>> sums(chunks, std::vector<double>(2 * len, 0.0));
    for_each_chunk(reps, kChunk, mc.threads, [&](const ChunkRange& c) {
      auto& acc = sums[c.index];
      for (std::size_t r = c.begin; r < c.end; ++r) {
        RngStream rng(mc.seed, s * reps + r);
        Walker walker(sampler, starts[s], rng);
        for (std::size_t k = 0; k < len; ++k) {
          double x = 0.0;
          if (exact_mean) {
            // E(sigma(Y_{k+1}, A_k u) | A_k u) summed over the support.
            for (std::size_t j = 0; j < support.size(); ++j) {
              x += weights[j] * cocycle.evaluate(support[j], walker.direction());
            }
            if (k + 1 < len) walker.step();
          } else {
            x = cocycle_step(walker, cocycle);
          }
          acc[k] += x;
          acc[len + k] += x * x;
        }
      }
    });
    std::vector<double> total(2 * len, 0.0);
    for (const auto& acc : sums) {
      for (std::size_t i = 0; i < total.size(); ++i) total[i] += acc[i];
    }
    const double dr = static_cast<double>(reps);
    for (std::size_t k = 0; k < len; ++k) {
      const double mean = total[k] / dr;
      const double var = std::max(0.0, (total[len + k] - dr * mean * mean) / (dr - 1.0));
      const double a = std::abs(mean - lambda);
      if (a > report.a_n[k] || s == 0) {
        report.a_n[k] = a;
        report.std_errors[k] = std::sqrt(var / dr);
      }
    }
  }

  double acc = 0.0;
  for (double a : report.a_n) {
    acc += a;
    report.partial_sums.push_back(acc);
  }

  report.decay_slope = std::numeric_limits<double>::quiet_NaN();
  const bool all_zero = std::all_of(report.a_n.begin(), report.a_n.end(),
                                    [](double a) { return a <= 1e-13; });
  if (all_zero) {
    report.verdict = GordinVerdict::summable_looking;
    return report;
  }
  std::vector<double> xs, ys;
  for (std::size_t k = std::max<std::size_t>(1, (n_max + 1) / 2); k <= n_max; ++k) {
    if (report.a_n[k] > 3.0 * report.std_errors[k]) {
      xs.push_back(std::log(static_cast<double>(k)));
      ys.push_back(std::log(report.a_n[k]));
    }
  }
  if (n_max < 4) {
    report.verdict = GordinVerdict::inconclusive;
  } else if (xs.size() < 3) {
    // a_n has fallen below Monte Carlo resolution over the upper half.
    report.verdict = GordinVerdict::summable_looking;
  } else {
    report.decay_slope = least_squares(xs, ys).slope;
    if (report.decay_slope < -1.1) {
      report.verdict = GordinVerdict::summable_looking;
    } else if (report.decay_slope >= -1.0) {
      report.verdict = GordinVerdict::diverging;
    } else {
      report.verdict = GordinVerdict::inconclusive;
    }
  }
  return report;
}

SigmaStar sigma_star(const CocycleSpec& cocycle, const SquareMatrix& m, std::size_t grid_size) {
  if (grid_size < 2) throw DomainError("sigma_star: grid_size must be at least 2");
  SigmaStar out;
  out.grid_size = grid_size;
  for (const auto& u : direction_grid(m.dim(), grid_size)) {
    out.grid_value = std::max(out.grid_value, std::abs(cocycle(m, u)));
  }
  if (cocycle.is_log_norm()) {
    out.closed_form = std::log(big_n(m));
    if (out.grid_value > *out.closed_form + 1e-8) {
      throw InvariantError("sigma_star: grid value exceeds log N(g)");
    }
  }
  return out;
}

MeasureDiagnostics diagnose_measure(const MeasureSpec& spec, std::size_t samples,
                                    const MonteCarlo& mc) {
  const Sampler sampler(spec);
  const CocycleSpec norm = CocycleSpec::log_norm();
  MeasureDiagnostics out;
  out.samples = samples;
  RngStream rng(mc.seed, 0);
  GroupElement scratch;
  std::vector<SquareMatrix> dense;
  for (std::size_t i = 0; i < samples; ++i) {
    const GroupElement& g = sampler.draw(rng, scratch);
    Eigen::VectorXd v(spec.dim);
    for (int j = 0; j < spec.dim; ++j) v(j) = rng.normal();
    const ProjectivePoint u(std::move(v));
    out.max_norm_bound_excess =
        std::max(out.max_norm_bound_excess, std::abs(cocycle_sigma(g, u)) - g.log_big_n());
    try {
      dense.push_back(g.to_matrix());
      ++out.representable;
    } catch (const InvariantError&) {
    }
  }
  for (std::size_t i = 0; i + 1 < dense.size() && i < 256; ++i) {
    const ProjectivePoint u = ProjectivePoint::basis(spec.dim, 0);
    try {
      out.max_cocycle_violation =
          std::max(out.max_cocycle_violation, cocycle_identity_violation(norm, dense[i], dense[i + 1], u));
    } catch (const InvariantError&) {
    }
  }

  // Proximality: look for a short product with a simple dominant eigenvalue.
  for (std::size_t start = 0; start < dense.size() && !out.proximal_product_found; start += 8) {
    Eigen::MatrixXd prod = Eigen::MatrixXd::Identity(spec.dim, spec.dim);
    for (std::size_t k = start; k < std::min(dense.size(), start + 8); ++k) {
      prod = dense[k].entries() * prod;
      prod /= prod.norm();
      Eigen::VectorXd moduli = Eigen::EigenSolver<Eigen::MatrixXd>(prod, false).eigenvalues().cwiseAbs();
      std::sort(moduli.data(), moduli.data() + moduli.size(), std::greater<>());
      if (moduli(0) > moduli(1) * (1.0 + 1e-6)) {
        out.proximal_product_found = true;
        break;
      }
    }
  }

  // Irreducibility: the chain should not pile up in one cell from any start.
  const auto starts = direction_grid(spec.dim, 4);
  for (std::size_t s = 0; s < starts.size(); ++s) {
    RngStream chain_rng(mc.seed, 1 + s);
    const auto occ = occupation_measure(spec, starts[s], 100, 2000, chain_rng);
    double frac = 0.0;
    if (spec.dim == 2) {
      std::vector<std::size_t> bins(64, 0);
      for (const auto& p : occ.points) {
        const auto b = static_cast<std::size_t>(p.angle() / std::numbers::pi * 64.0);
        ++bins[std::min<std::size_t>(b, 63)];
      }
      frac = static_cast<double>(*std::max_element(bins.begin(), bins.end())) /
             static_cast<double>(occ.points.size());
    } else {
      std::size_t close = 0;
      for (const auto& p : occ.points) {
        if (projective_distance(p, occ.points.back()) < 0.05) ++close;
      }
      frac = static_cast<double>(close) / static_cast<double>(occ.points.size());
    }
    out.max_bin_occupancy = std::max(out.max_bin_occupancy, frac);
  }

  if (out.representable < out.samples) {
    out.warnings.push_back(std::to_string(out.samples - out.representable) +
                           " draws are too ill-conditioned for a dense SquareMatrix; walks use the factored form");
  }
  if (!out.proximal_product_found) {
    out.warnings.push_back("no proximal product found among short products: mu may not be proximal");
  }
  if (out.max_bin_occupancy > 0.5) {
    out.warnings.push_back("the projective chain concentrates in one cell: mu may not be strongly irreducible");
  }
  if (out.max_norm_bound_excess > 1e-12) {
    out.warnings.push_back("|sigma(g,u)| exceeded log N(g): numerical trouble in the sampler");
  }
  return out;
}

}  // namespace gllab

#include "gllab/coboundary/extraction.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "gllab/common/error.hpp"
#include "gllab/common/parallel.hpp"
#include "gllab/common/rng.hpp"
#include "gllab/mg_tools/truncation.hpp"

namespace gllab {
namespace {

std::span<const double> unit_of(const ProjectivePoint& p) {
  return {p.direction().data(), static_cast<std::size_t>(p.dim())};
}

const ProjectivePoint& before_step(const WalkPath& path, std::size_t k) {
  return k == 0 ? path.x0 : path.directions[k - 1];
}

void fill_split(MartingaleExtraction& out, const WalkPath& path, double lambda,
                const std::vector<double>& sigma_bars) {
  const std::size_t n = path.length();
  out.r_seq.resize(n);
  out.u_partial.resize(n);
  out.split_martingale_partial.resize(n);
  out.centered_partial.resize(n);
  double u = 0.0, m = 0.0, c = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double x = path.increments[k];
    out.r_seq[k] = sigma_bars[k] - lambda;
    u += out.r_seq[k];
    m += x - sigma_bars[k];
    c += x - lambda;
    out.u_partial[k] = u;
    out.split_martingale_partial[k] = m;
    out.centered_partial[k] = c;
  }
}

}  // namespace

double MartingaleExtraction::split_identity_error() const {
  double worst = 0.0;
  for (std::size_t k = 0; k < centered_partial.size(); ++k) {
    worst = std::max(worst,
                     std::abs(split_martingale_partial[k] + u_partial[k] - centered_partial[k]));
  }
  return worst;
}

MartingaleExtraction extract_martingale(const WalkPath& path, const PoissonSolution& solution,
                                        double lambda) {
  if (path.x0.dim() != 2) throw DomainError("extract_martingale: path is not two-dimensional");
  if (solution.grid_size() == 0) throw DomainError("extract_martingale: empty Poisson solution");
  const std::size_t n = path.length();
  const double bound_extra = std::abs(lambda) + 2.0 * solution.max_abs_psi();

  MartingaleExtraction out;
  out.d_seq.resize(n);
  out.m_partial.resize(n);
  std::vector<double> sigma_bars(n);
  double psi_prev = solution.psi_at(unit_of(path.x0));
  double m = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double psi_next = solution.psi_at(unit_of(path.directions[k]));
    const double d = path.increments[k] - lambda - psi_prev + psi_next;
    const double bound = path.step_log_big_n[k] + bound_extra;
    if (std::abs(d) > bound * (1.0 + 1e-12) + 1e-12) {
      throw InvariantError("extract_martingale: |D_k| exceeds log N(Y_k) + |lambda| + 2 max|psi| at step " +
                           std::to_string(k + 1));
    }
    out.d_seq[k] = d;
    m += d;
    out.m_partial[k] = m;
    sigma_bars[k] = solution.sigma_bar_at(unit_of(before_step(path, k)));
    psi_prev = psi_next;
  }
  fill_split(out, path, lambda, sigma_bars);
  return out;
}

MartingaleExtraction split_increments(const WalkPath& path, const MeasureSpec& spec,
                                      double lambda, const SigmaBarQuadrature& quadrature) {
  if (path.x0.dim() != spec.dim) throw DomainError("split_increments: dimension mismatch");
  std::vector<double> sigma_bars(path.length());
  for (std::size_t k = 0; k < path.length(); ++k) {
    sigma_bars[k] = sigma_bar(spec, before_step(path, k), quadrature).value;
  }
  MartingaleExtraction out;
  fill_split(out, path, lambda, sigma_bars);
  return out;
}

ConditionalMeanCheck check_conditional_mean(const MeasureSpec& spec, const PoissonSolution& solution,
                                            std::size_t paths, std::size_t n, std::size_t bins,
                                            double abs_tol, const MonteCarlo& mc) {
  if (spec.dim != 2) throw UnsupportedError("check_conditional_mean: requires d=2");
  if (paths == 0 || n == 0 || bins == 0) throw DomainError("check_conditional_mean: empty experiment");
  const Sampler sampler(spec);
  constexpr std::size_t chunk = 256;
  const std::size_t chunks = chunk_count(paths, chunk);
  std::vector<BinnedConditionalMean> partial(chunks, BinnedConditionalMean(bins, 0.0, std::numbers::pi));
  std::vector<double> identity_error(chunks, 0.0);
  for_each_chunk(paths, chunk, mc.threads, [&](const ChunkRange& c) {
    for (std::size_t r = c.begin; r < c.end; ++r) {
      RngStream rng(mc.seed, r);
      const auto x0 = ProjectivePoint::from_angle(rng.uniform() * std::numbers::pi);
      const WalkPath path = run_walk(sampler, x0, n, rng);
      const MartingaleExtraction ex = extract_martingale(path, solution);
      identity_error[c.index] = std::max(identity_error[c.index], ex.split_identity_error());
      for (std::size_t k = 0; k < n; ++k) partial[c.index].add(before_step(path, k).angle(), ex.d_seq[k]);
    }
  });
  BinnedConditionalMean total(bins, 0.0, std::numbers::pi);
  ConditionalMeanCheck out;
  for (std::size_t i = 0; i < chunks; ++i) {
    total.merge(partial[i]);
    out.max_split_identity_error = std::max(out.max_split_identity_error, identity_error[i]);
  }
  const double width = std::numbers::pi / static_cast<double>(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    ConditionalMeanBin bin;
    bin.angle_lo = static_cast<double>(b) * width;
    bin.angle_hi = bin.angle_lo + width;
    bin.count = total.count(b);
    bin.mean = total.mean(b);
    bin.std_error = total.std_error(b);
    bin.within = bin.count < 2 || std::abs(bin.mean) <= abs_tol + 3.0 * bin.std_error;
    out.samples += bin.count;
    out.max_abs_mean = std::max(out.max_abs_mean, std::abs(bin.mean));
    out.all_within = out.all_within && bin.within;
    out.bins.push_back(bin);
  }
  return out;
}

}  // namespace gllab

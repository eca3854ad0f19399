#include "gllab/coboundary/poisson.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "gllab/common/csv.hpp"
#include "gllab/common/error.hpp"
#include "gllab/common/parallel.hpp"
#include "gllab/common/rng.hpp"

namespace gllab {
namespace {

constexpr std::size_t kDecayWindow = 20;
constexpr double kDecayRatio = 0.999;
constexpr std::size_t kMaxTerms = 1000000;
constexpr std::size_t kMaxStationaryIterations = 200000;

double half_turn_angle(double x, double y) {
  double a = std::atan2(y, x);
  if (a < 0.0) a += std::numbers::pi;
  if (a >= std::numbers::pi) a -= std::numbers::pi;
  return a;
}

struct Stencil {
  std::size_t lo;
  double frac;
};

Stencil stencil(double angle, std::size_t n) {
  const double pos = angle / std::numbers::pi * static_cast<double>(n);
  double fl = std::floor(pos);
  double frac = pos - fl;
  auto lo = static_cast<std::size_t>(fl) % n;
  if (frac >= 1.0) {
    frac = 0.0;
    lo = (lo + 1) % n;
  }
  return {lo, frac};
}

double interpolate(std::span<const double> f, const Stencil& s) {
  const std::size_t hi = (s.lo + 1) % f.size();
  return (1.0 - s.frac) * f[s.lo] + s.frac * f[hi];
}

double image_angle(const GroupElement& g, std::span<const double> unit) {
  double v[2] = {unit[0], unit[1]};
  double scratch[4];
  g.apply(v, scratch);
  return half_turn_angle(v[0], v[1]);
}

double sup_norm(std::span<const double> f) {
  double m = 0.0;
  for (double x : f) m = std::max(m, std::abs(x));
  return m;
}

// The grid operator (P f)(u_i) = sum_j w_j f(g_j u_i) with f interpolated.
class GridOperator {
 public:
  GridOperator(const std::vector<GroupElement>& support, std::span<const double> weights,
               std::size_t n)
      : n_(n), k_(support.size()), weights_(weights.begin(), weights.end()) {
    stencils_.reserve(n * k_);
    sigma_bar_.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double theta = static_cast<double>(i) * std::numbers::pi / static_cast<double>(n);
      const double u[2] = {std::cos(theta), std::sin(theta)};
      for (std::size_t j = 0; j < k_; ++j) {
        stencils_.push_back(stencil(image_angle(support[j], u), n));
        sigma_bar_[i] += weights_[j] * support[j].log_growth(u);
      }
    }
  }

  const std::vector<double>& sigma_bar() const noexcept { return sigma_bar_; }

  void apply(std::span<const double> f, std::span<double> out) const {
    for (std::size_t i = 0; i < n_; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < k_; ++j) acc += weights_[j] * interpolate(f, stencils_[i * k_ + j]);
      out[i] = acc;
    }
  }

  // pi <- pi P for a row vector of grid masses.
  void push(std::span<const double> pi, std::span<double> out) const {
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < k_; ++j) {
        const Stencil& s = stencils_[i * k_ + j];
        const double mass = pi[i] * weights_[j];
        out[s.lo] += (1.0 - s.frac) * mass;
        out[(s.lo + 1) % n_] += s.frac * mass;
      }
    }
  }

  double stationary_mean(std::span<const double> f) const {
    std::vector<double> pi(n_, 1.0 / static_cast<double>(n_)), next(n_);
    for (std::size_t it = 0; it < kMaxStationaryIterations; ++it) {
      push(pi, next);
      double change = 0.0;
      for (std::size_t i = 0; i < n_; ++i) change += std::abs(next[i] - pi[i]);
      pi.swap(next);
      if (change < 1e-14) {
        double mean = 0.0;
        for (std::size_t i = 0; i < n_; ++i) mean += pi[i] * f[i];
        return mean;
      }
    }
    throw NumericError("no empirical spectral gap: the grid chain did not reach stationarity",
                       kMaxStationaryIterations);
  }

 private:
  std::size_t n_;
  std::size_t k_;
  std::vector<double> weights_;
  std::vector<Stencil> stencils_;
  std::vector<double> sigma_bar_;
};

}  // namespace

SigmaBarValue sigma_bar(const MeasureSpec& spec, const ProjectivePoint& u,
                        const SigmaBarQuadrature& quadrature) {
  if (u.dim() != spec.dim) throw DomainError("sigma_bar: direction has the wrong dimension");
  const Sampler sampler(spec);
  const std::span<const double> unit(u.direction().data(), static_cast<std::size_t>(u.dim()));
  if (spec.is_finite_support()) {
    double value = 0.0;
    for (std::size_t j = 0; j < sampler.support().size(); ++j) {
      value += sampler.weights()[j] * sampler.support()[j].log_growth(unit);
    }
    return {value, 0.0, true};
  }
  if (quadrature.samples < 2) throw DomainError("sigma_bar: need at least 2 Monte Carlo samples");
  constexpr std::size_t chunk = 4096;
  std::vector<std::pair<double, double>> sums(chunk_count(quadrature.samples, chunk));
  for_each_chunk(quadrature.samples, chunk, quadrature.mc.threads, [&](const ChunkRange& c) {
    RngStream rng(quadrature.mc.seed, c.index);
    GroupElement scratch;
    double s = 0.0, s2 = 0.0;
    for (std::size_t i = c.begin; i < c.end; ++i) {
      const double x = sampler.draw(rng, scratch).log_growth(unit);
      s += x;
      s2 += x * x;
    }
    sums[c.index] = {s, s2};
  });
  double s = 0.0, s2 = 0.0;
  for (const auto& [a, b] : sums) {
    s += a;
    s2 += b;
  }
  const auto n = static_cast<double>(quadrature.samples);
  const double mean = s / n;
  const double var = std::max(0.0, (s2 - n * mean * mean) / (n - 1.0));
  return {mean, std::sqrt(var / n), false};
}

double PoissonSolution::max_abs_psi() const { return sup_norm(psi); }

double PoissonSolution::psi_at(double angle) const {
  double a = std::fmod(angle, std::numbers::pi);
  if (a < 0.0) a += std::numbers::pi;
  return interpolate(psi, stencil(a, psi.size()));
}

double PoissonSolution::psi_at(const ProjectivePoint& u) const { return psi_at(u.angle()); }

double PoissonSolution::psi_at(std::span<const double> unit) const {
  return psi_at(half_turn_angle(unit[0], unit[1]));
}

double PoissonSolution::sigma_bar_at(std::span<const double> unit) const {
  double value = 0.0;
  for (std::size_t j = 0; j < support.size(); ++j) value += weights[j] * support[j].log_growth(unit);
  return value;
}

double PoissonSolution::pushed_psi_at(std::span<const double> unit) const {
  double value = 0.0;
  for (std::size_t j = 0; j < support.size(); ++j) {
    value += weights[j] * psi_at(image_angle(support[j], unit));
  }
  return value;
}

void PoissonSolution::write_csv(std::ostream& out) const {
  CsvWriter csv(out);
  csv.header({"angle", "psi"});
  for (std::size_t i = 0; i < psi.size(); ++i) csv.row({grid[i].angle(), psi[i]});
}

PoissonSolution solve_poisson(const MeasureSpec& spec, std::optional<double> lambda,
                              unsigned grid_power, double tol) {
  if (spec.dim != 2) {
    throw UnsupportedError(
        "the psi solver requires d=2; for d>=3 use split_increments (R_k = sigma_bar - lambda)");
  }
  if (!spec.is_finite_support()) {
    throw UnsupportedError("the psi solver requires a finitely supported measure");
  }
  if (!(tol > 0.0)) throw DomainError("solve_poisson: tol must be positive");
  if (grid_power < 2 || grid_power > 20) throw DomainError("solve_poisson: grid power must be in [2, 20]");

  const Sampler sampler(spec);
  const std::size_t n = std::size_t{1} << grid_power;
  const GridOperator op(sampler.support(), sampler.weights(), n);

  PoissonSolution sol;
  sol.support = sampler.support();
  sol.weights.assign(sampler.weights().begin(), sampler.weights().end());
  sol.grid.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    sol.grid.push_back(
        ProjectivePoint::from_angle(static_cast<double>(i) * std::numbers::pi / static_cast<double>(n)));
  }
  sol.lambda_used = lambda ? *lambda : op.stationary_mean(op.sigma_bar());

  std::vector<double> f(n);
  for (std::size_t i = 0; i < n; ++i) f[i] = op.sigma_bar()[i] - sol.lambda_used;

  std::vector<double> term = f, next(n);
  sol.psi.assign(n, 0.0);
  std::vector<double> norms;
  while (true) {
    const double norm = sup_norm(term);
    norms.push_back(norm);
    for (std::size_t i = 0; i < n; ++i) sol.psi[i] += term[i];
    op.apply(term, next);
    const double next_norm = sup_norm(next);
    if (norm < tol && next_norm < tol) {
      sol.tail_bound = norm;
      break;
    }
    const std::size_t j = norms.size() - 1;
    if (j >= kDecayWindow && norms[j - kDecayWindow] > 0.0) {
      const double ratio = std::pow(norm / norms[j - kDecayWindow], 1.0 / kDecayWindow);
      if (!(ratio < kDecayRatio)) {
        std::string message = "no empirical spectral gap: series terms stopped decaying geometrically";
        if (lambda) {
          const double grid_lambda = op.stationary_mean(op.sigma_bar());
          message += " (the supplied lambda differs from the grid chain's stationary mean " +
                     format_number(grid_lambda) + " by " + format_number(*lambda - grid_lambda) + ")";
        }
        throw NumericError(message, norms.size());
      }
    }
    if (norms.size() >= kMaxTerms) {
      throw NumericError("no empirical spectral gap: term limit reached", norms.size());
    }
    term.swap(next);
  }
  sol.truncation_terms = norms.size();

  std::vector<double> pushed(n);
  op.apply(sol.psi, pushed);
  for (std::size_t i = 0; i < n; ++i) {
    sol.grid_residual = std::max(sol.grid_residual, std::abs(sol.psi[i] - pushed[i] - f[i]));
  }
  if (!std::isfinite(sol.max_abs_psi())) throw NumericError("psi is not finite", norms.size());

  for (std::size_t i = 0; i < 2 * n; ++i) {
    const double theta = static_cast<double>(i) * std::numbers::pi / static_cast<double>(2 * n);
    const double u[2] = {std::cos(theta), std::sin(theta)};
    const double r = sol.psi_at(theta) - sol.pushed_psi_at(u) - (sol.sigma_bar_at(u) - sol.lambda_used);
    sol.verification_residual = std::max(sol.verification_residual, std::abs(r));
  }
  return sol;
}

std::vector<RefinementStep> refinement_study(const MeasureSpec& spec, unsigned m_lo,
                                             unsigned m_hi, double tol) {
  if (m_hi < m_lo) throw DomainError("refinement_study: empty range of grid powers");
  std::vector<RefinementStep> steps;
  std::optional<PoissonSolution> previous;
  for (unsigned m = m_lo; m <= m_hi; ++m) {
    PoissonSolution sol = solve_poisson(spec, std::nullopt, m, tol);
    RefinementStep step{m, sol.max_abs_psi(), std::numeric_limits<double>::quiet_NaN()};
    if (previous) {
      double change = 0.0;
      for (std::size_t i = 0; i < sol.grid_size(); ++i) {
        change = std::max(change, std::abs(sol.psi[i] - previous->psi_at(sol.grid[i].angle())));
      }
      step.sup_change = change;
    }
    steps.push_back(step);
    previous = std::move(sol);
  }
  return steps;
}

}  // namespace gllab

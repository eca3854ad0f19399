#include "gllab/deviation_lab/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>

#include "gllab/common/csv.hpp"
#include "gllab/common/direction_grid.hpp"
#include "gllab/common/error.hpp"
#include "gllab/common/parallel.hpp"
#include "gllab/common/rng.hpp"
#include "gllab/deviation_lab/deviation_engine.hpp"

namespace gllab {
namespace {

constexpr double kMaxRepresentableC = 1e15;

// Piecewise-linear interpolation of node values h(m), m >= 1 integer.
template <class F>
double interpolate_nodes(const F& h, double x) {
  const double fl = std::floor(x);
  const double frac = x - fl;
  const auto m = static_cast<std::size_t>(fl);
  if (frac == 0.0) return h(m);
  return (1.0 - frac) * h(m) + frac * h(m + 1);
}

bool close_in_ulps(double a, double b) {
  return std::abs(a - b) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(a), std::abs(b));
}

}  // namespace

BnSpec BnSpec::power(double alpha) {
  BnSpec b;
  b.alpha_ = alpha;
  b.validate();
  return b;
}

BnSpec BnSpec::table(std::vector<double> values) {
  BnSpec b;
  b.table_ = std::move(values);
  if (b.table_.empty()) throw InvariantError("BnSpec: empty table");
  b.validate();
  return b;
}

double BnSpec::operator()(std::size_t n) const {
  if (n == 0) throw DomainError("BnSpec: n must be at least 1");
  if (is_power()) return std::pow(static_cast<double>(n), alpha_);
  if (n > table_.size()) throw RangeError("BnSpec: n = " + std::to_string(n) + " is past the end of the table");
  return table_[n - 1];
}

std::string BnSpec::describe() const {
  if (is_power()) return "n^" + format_number(alpha_);
  return "table(" + std::to_string(table_.size()) + ")";
}

void BnSpec::validate() const {
  if (is_power()) {
    // f = n^{2-2a}, g = n^{2a}, n/b_n^2 = n^{1-2a}: all three conditions hold iff 1/2 < a < 1.
    if (!(alpha_ > 0.5 && alpha_ < 1.0)) {
      throw InvariantError("BnSpec: b_n = n^alpha needs alpha in (1/2, 1) so that n/b_n^2 -> 0 and n^2/b_n^2 increases");
    }
    return;
  }
  if (table_.size() < 2) throw InvariantError("BnSpec: a table needs at least two values");
  for (double b : table_) {
    if (!(b > 0.0) || !std::isfinite(b)) throw InvariantError("BnSpec: table values must be positive");
  }
  const std::size_t m = table_.size();
  std::vector<double> ratio(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto n = static_cast<double>(i + 1);
    ratio[i] = n / (table_[i] * table_[i]);
    if (i > 0) {
      const auto prev = static_cast<double>(i);
      const double f = n * n / (table_[i] * table_[i]);
      const double f_prev = prev * prev / (table_[i - 1] * table_[i - 1]);
      if (!(f > f_prev)) throw InvariantError("BnSpec: n^2/b_n^2 is not strictly increasing at n = " + std::to_string(i + 1));
      if (!(table_[i] > table_[i - 1])) throw InvariantError("BnSpec: b_n^2 is not strictly increasing at n = " + std::to_string(i + 1));
    }
  }
  for (std::size_t i = m / 2 + 1; i < m; ++i) {
    if (ratio[i] > ratio[i - 1]) {
      throw InvariantError("BnSpec: n/b_n^2 is not decreasing over the second half of the table");
    }
  }
  if (!(ratio.back() < ratio.front())) throw InvariantError("BnSpec: n/b_n^2 does not decrease along the table");
}

double c_of_n(const BnSpec& bn, double x) {
  if (!(x >= 1.0) || !std::isfinite(x)) throw DomainError("c_of_n: x must be at least 1");
  const auto f = [&](std::size_t m) {
    const double b = bn(m);
    const auto dm = static_cast<double>(m);
    return dm * dm / (b * b);
  };
  const auto g = [&](std::size_t m) {
    const double b = bn(m);
    return b * b;
  };
  if (!bn.is_power() && x > static_cast<double>(bn.table_size())) {
    throw RangeError("c_of_n: x is past the end of the b_n table");
  }
  const double target = interpolate_nodes(g, x);

  std::size_t lo = 1;
  if (bn.is_power()) {
    const double guess = std::pow(target, 1.0 / (2.0 - 2.0 * bn.alpha()));
    if (!(guess <= kMaxRepresentableC)) throw RangeError("c_of_n: c(x) exceeds the representable range");
    lo = std::max<std::size_t>(1, static_cast<std::size_t>(guess));
    while (lo > 1 && f(lo) > target) --lo;
    while (f(lo + 1) <= target) ++lo;
  } else {
    const std::size_t m = bn.table_size();
    if (target > f(m) && !close_in_ulps(target, f(m))) {
      throw RangeError("c_of_n: c(x) is past the end of the b_n table");
    }
    if (target < f(1) && !close_in_ulps(target, f(1))) {
      throw RangeError("c_of_n: c(x) lies below the first node of the b_n table");
    }
    std::size_t a = 1, b = m;
    while (b - a > 1) {
      const std::size_t mid = (a + b) / 2;
      if (f(mid) <= target) a = mid; else b = mid;
    }
    lo = a;
  }
  for (std::size_t node : {lo, lo + 1}) {
    if (bn.is_power() || node <= bn.table_size()) {
      if (close_in_ulps(f(node), target)) return static_cast<double>(node);
    }
  }
  if (!bn.is_power() && lo >= bn.table_size()) return static_cast<double>(lo);
  const double f_lo = f(lo);
  return static_cast<double>(lo) + (target - f_lo) / (f(lo + 1) - f_lo);
}

ArconesReport arcones_check(const std::function<double(double)>& tail, const BnSpec& bn,
                            const std::vector<std::size_t>& n_schedule) {
  bn.validate();
  if (n_schedule.size() < 2) throw DomainError("arcones_check: need at least two schedule points");
  ArconesReport report;
  for (std::size_t n : n_schedule) {
    if (n < 2) throw DomainError("arcones_check: schedule values must be at least 2");
    ArconesRow row;
    row.n = n;
    row.b_n = bn(n);
    row.tail = tail(row.b_n);
    const auto dn = static_cast<double>(n);
    const double scale = dn / (row.b_n * row.b_n);
    row.product_value = scale * std::log(dn) * row.tail;
    row.log_value = row.tail > 0.0 ? scale * std::log(dn * row.tail)
                                   : -std::numeric_limits<double>::infinity();
    report.rows.push_back(row);
  }
  const auto& rows = report.rows;
  if (std::isinf(rows.back().log_value)) {
    report.satisfied = true;
    report.verdict = "satisfied: the tail vanishes at b_n";
  } else {
    bool decreasing = rows.back().log_value < 0.0;
    for (std::size_t i = rows.size() / 2 + 1; i < rows.size(); ++i) {
      if (!(rows[i].log_value < rows[i - 1].log_value)) decreasing = false;
    }
    report.satisfied = decreasing;
    report.verdict = decreasing ? "satisfied: (n/b_n^2) log(n tail(b_n)) keeps decreasing"
                                : "fails: (n/b_n^2) log(n tail(b_n)) does not head to -inf";
  }
  return report;
}

std::function<double(double)> finite_support_log_norm_tail(const MeasureSpec& spec) {
  const Sampler sampler(spec);
  if (sampler.support().empty()) throw UnsupportedError("finite_support_log_norm_tail: measure is not finitely supported");
  std::vector<std::pair<double, double>> atoms;
  for (std::size_t j = 0; j < sampler.support().size(); ++j) {
    atoms.emplace_back(sampler.support()[j].log_big_n(), sampler.weights()[j]);
  }
  return [atoms](double t) {
    double mass = 0.0;
    for (const auto& [v, w] : atoms) {
      if (v > t) mass += w;
    }
    return mass;
  };
}

std::function<double(double)> empirical_log_norm_tail(const MeasureSpec& spec, std::size_t samples,
                                                      const MonteCarlo& mc) {
  if (samples == 0) throw DomainError("empirical_log_norm_tail: need at least one sample");
  const Sampler sampler(spec);
  auto values = std::make_shared<std::vector<double>>(samples);
  constexpr std::size_t chunk = 4096;
  for_each_chunk(samples, chunk, mc.threads, [&](const ChunkRange& c) {
    RngStream rng(mc.seed, c.index);
    GroupElement scratch;
    for (std::size_t i = c.begin; i < c.end; ++i) (*values)[i] = sampler.draw(rng, scratch).log_big_n();
  });
  std::sort(values->begin(), values->end());
  return [values](double t) {
    const auto above = values->end() - std::upper_bound(values->begin(), values->end(), t);
    return static_cast<double>(above) / static_cast<double>(values->size());
  };
}

SubexpCheck subexp_sufficient_check(double alpha, const std::function<double(double)>& a,
                                    const std::function<double(double)>& tail,
                                    const std::vector<double>& x_schedule) {
  if (!(alpha > 0.5 && alpha < 1.0)) throw DomainError("subexp_sufficient_check: alpha must lie in (1/2, 1)");
  if (x_schedule.empty()) throw DomainError("subexp_sufficient_check: empty schedule");
  SubexpCheck out;
  out.beta = 2.0 - 1.0 / alpha;
  out.envelope_holds = true;
  out.a_increasing = true;
  double prev_a = -std::numeric_limits<double>::infinity();
  for (double x : x_schedule) {
    if (!(x > 0.0)) throw DomainError("subexp_sufficient_check: x values must be positive");
    const double ax = a(x);
    if (!(ax > prev_a)) out.a_increasing = false;
    prev_a = ax;
    out.x.push_back(x);
    out.tail.push_back(tail(x));
    out.envelope.push_back(std::exp(-std::pow(x, out.beta) * ax));
    if (out.tail.back() > out.envelope.back()) out.envelope_holds = false;
  }
  return out;
}

void MdpPath::validate() const {
  if (knots.empty() || knots.size() != values.size()) throw InvariantError("MdpPath: one value per knot is required");
  if (knots.front() != 0.0) throw InvariantError("MdpPath: the first knot must be t = 0");
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (!(knots[i] > knots[i - 1])) throw InvariantError("MdpPath: knots must be strictly increasing");
  }
  if (knots.back() > 1.0) throw InvariantError("MdpPath: knots must lie in [0, 1]");
  for (double v : values) {
    if (!std::isfinite(v)) throw InvariantError("MdpPath: values must be finite");
  }
}

MdpPath MdpPath::linear(double y) { return {{0.0, 1.0}, {0.0, y}}; }

double mdp_rate(const MdpPath& path, double v) {
  path.validate();
  if (!(v >= 0.0)) throw DomainError("mdp_rate: V must be non-negative");
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (path.values.front() != 0.0) return inf;
  if (v == 0.0) {
    const bool zero = std::all_of(path.values.begin(), path.values.end(), [](double x) { return x == 0.0; });
    return zero ? 0.0 : inf;
  }
  double integral = 0.0;
  for (std::size_t i = 1; i < path.knots.size(); ++i) {
    const double dt = path.knots[i] - path.knots[i - 1];
    const double slope = (path.values[i] - path.values[i - 1]) / dt;
    integral += slope * slope * dt;
  }
  return integral / (2.0 * v);
}

MdpComparison mdp_compare(const MeasureSpec& spec, double lambda, double v, const BnSpec& bn,
                          double y, const std::vector<std::size_t>& n_schedule,
                          std::size_t x_grid_size, std::size_t reps, const MonteCarlo& mc) {
  if (!(y > 0.0)) throw DomainError("mdp_compare: y must be positive");
  if (!(v > 0.0)) throw DomainError("mdp_compare: V must be positive");
  if (reps == 0 || x_grid_size == 0) throw DomainError("mdp_compare: reps and x grid must be positive");
  bn.validate();

  ExceedancePlan plan;
  plan.starts = direction_grid(spec.dim, x_grid_size);
  plan.checkpoints = n_schedule;
  plan.reps = reps;
  for (std::size_t n : n_schedule) plan.thresholds.push_back({bn(n) * y});
  const ExceedanceCounts counts = count_exceedances(spec, lambda, plan, mc);

  MdpComparison out;
  out.y = y;
  out.v = v;
  out.target = -y * y / (2.0 * v);
  for (std::size_t j = 0; j < n_schedule.size(); ++j) {
    MdpRow row;
    row.n = n_schedule[j];
    row.b_n = bn(row.n);
    row.hits = counts.max_over_starts(j, 0);
    row.p_hat = static_cast<double>(row.hits) / static_cast<double>(reps);
    row.ci = wilson_interval(row.hits, reps);
    row.censored = row.hits == 0;
    const double scale = static_cast<double>(row.n) / (row.b_n * row.b_n);
    row.value = row.censored ? std::numeric_limits<double>::quiet_NaN() : scale * std::log(row.p_hat);
    row.lo = scale * std::log(row.ci.lo);
    row.hi = scale * std::log(row.ci.hi);
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace gllab

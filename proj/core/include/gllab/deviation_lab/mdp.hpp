#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "gllab/common/monte_carlo.hpp"
#include "gllab/common/stats.hpp"
#include "gllab/matrix_walk/measure.hpp"

namespace gllab {

/// Normalising sequence b_n, either n^alpha with alpha in (1/2, 1) or an
/// explicit table b_1, ..., b_M.
class BnSpec {
 public:
  static BnSpec power(double alpha);
  static BnSpec table(std::vector<double> values);

  bool is_power() const noexcept { return table_.empty(); }
  double alpha() const noexcept { return alpha_; }
  /// Largest n with a value (table form); 0 for the power form.
  std::size_t table_size() const noexcept { return table_.size(); }
  /// b_n for n >= 1; RangeError past the table.
  double operator()(std::size_t n) const;
  std::string describe() const;

  /// f(n) = n^2 / b_n^2 and g(n) = b_n^2 strictly increasing and n / b_n^2
  /// decreasing to 0, checked on the representable range. Throws
  /// InvariantError otherwise.
  void validate() const;

 private:
  double alpha_ = 0.0;
  std::vector<double> table_;
};

/// c(x) = f^{-1}(g(x)) with f and g the piecewise-linear interpolants of
/// n^2/b_n^2 and b_n^2 through the integer nodes. Exact at nodes; RangeError
/// when c(x) leaves the representable range.
double c_of_n(const BnSpec& bn, double x);

struct ArconesRow {
  std::size_t n = 0;
  double b_n = 0.0;
  double tail = 0.0;
  /// (n / b_n^2) log(n) tail(b_n), the product form.
  double product_value = 0.0;
  /// (n / b_n^2) log(n tail(b_n)); -inf when the tail vanishes.
  double log_value = 0.0;
};

struct ArconesReport {
  std::vector<ArconesRow> rows;
  /// The log-form sequence reaches -inf or decreases strictly over the
  /// second half of the schedule while negative.
  bool satisfied = false;
  std::string verdict;
};

/// `tail(t)` is mu{log N > t}.
ArconesReport arcones_check(const std::function<double(double)>& tail, const BnSpec& bn,
                            const std::vector<std::size_t>& n_schedule);

/// Exact tail t -> mu{log N > t} for a finitely supported measure.
std::function<double(double)> finite_support_log_norm_tail(const MeasureSpec& spec);
/// Empirical tail from `samples` draws.
std::function<double(double)> empirical_log_norm_tail(const MeasureSpec& spec, std::size_t samples,
                                                      const MonteCarlo& mc);

/// Sub-exponential sufficient condition for b_n = n^alpha:
/// mu{log N > x} <= exp(-x^beta a(x)) with beta = 2 - 1/alpha and a -> inf.
struct SubexpCheck {
  double beta = 0.0;
  std::vector<double> x;
  std::vector<double> tail;
  std::vector<double> envelope;
  bool envelope_holds = false;
  bool a_increasing = false;
};

SubexpCheck subexp_sufficient_check(double alpha, const std::function<double(double)>& a,
                                    const std::function<double(double)>& tail,
                                    const std::vector<double>& x_schedule);

/// Piecewise-linear path h on [0, 1].
struct MdpPath {
  std::vector<double> knots;
  std::vector<double> values;

  /// Knots strictly increasing from 0 and no later than 1.
  void validate() const;
  /// h(t) = y t.
  static MdpPath linear(double y);
};

/// (1/2V) int_0^1 h'(u)^2 du; +inf when h(0) != 0, or when V = 0 and h is
/// not identically zero.
double mdp_rate(const MdpPath& path, double v);

struct MdpRow {
  std::size_t n = 0;
  double b_n = 0.0;
  std::size_t hits = 0;
  double p_hat = 0.0;
  Interval ci{0.0, 0.0};
  /// (n / b_n^2) log p_hat, with the interval mapped the same way.
  double value = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  bool censored = false;
};

struct MdpComparison {
  double target = 0.0;  // -y^2 / (2V)
  double y = 0.0;
  double v = 0.0;
  std::vector<MdpRow> rows;
};

/// Events max_k |log|A_k x| - k lambda| > b_n y on a schedule, from one pass.
MdpComparison mdp_compare(const MeasureSpec& spec, double lambda, double v, const BnSpec& bn,
                          double y, const std::vector<std::size_t>& n_schedule,
                          std::size_t x_grid_size, std::size_t reps, const MonteCarlo& mc);

}  // namespace gllab

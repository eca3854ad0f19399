#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>

#include "gllab/coboundary/extraction.hpp"
#include "gllab/coboundary/poisson.hpp"
#include "gllab/cocycle/estimators.hpp"
#include "gllab/common/direction_grid.hpp"
#include "gllab/common/error.hpp"
#include "gllab/common/rng.hpp"
#include "gllab/deviation_lab/mdp.hpp"
#include "gllab/deviation_lab/rates.hpp"
#include "gllab/deviation_lab/series.hpp"
#include "gllab/deviation_lab/tail.hpp"
#include "gllab/mg_tools/bounds.hpp"
#include "gllab/mg_tools/suites.hpp"

namespace gllab::cli {
namespace {

using Json = nlohmann::ordered_json;

constexpr std::uint64_t kLambdaSalt = 1;
constexpr std::uint64_t kVarianceSalt = 2;
constexpr std::uint64_t kGordinSalt = 3;
constexpr std::uint64_t kSimulationSalt = 4;

CsvField integer(std::size_t v) { return static_cast<std::int64_t>(v); }

Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

const ConfigSection& require_section(const RunContext& ctx, const std::string& name) {
  return ctx.config().section(name);
}

MeasureSpec measure_of(const RunContext& ctx) { return parse_measure(require_section(ctx, "measure")); }

// lambda from the config, or estimated up front when absent.
struct LambdaChoice {
  std::optional<double> given;
  std::size_t n = 1000;
  std::size_t reps = 1000;
};

LambdaChoice parse_lambda(const ConfigSection& s) {
  LambdaChoice c;
  c.given = s.find_double("lambda");
  c.n = s.get_size("lambda_n", 1000);
  c.reps = s.get_size("lambda_reps", 1000);
  if (!c.given && (c.n == 0 || c.reps < 2)) s.fail("lambda_reps", "lambda estimation needs lambda_n >= 1 and lambda_reps >= 2");
  return c;
}

struct LambdaValue {
  double value = 0.0;
  double std_error = 0.0;
  bool estimated = false;
};

LambdaValue resolve_lambda(const LambdaChoice& c, const MeasureSpec& spec, const RunContext& ctx) {
  if (c.given) return {*c.given, 0.0, false};
  const LyapunovEstimate est = estimate_lambda(spec, CocycleSpec::log_norm(), c.n, c.reps, 1, ctx.mc(kLambdaSalt));
  return {est.lambda_hat, est.std_error, true};
}

Json lambda_json(const LambdaValue& l) {
  return Json{{"value", l.value}, {"std_error", l.std_error}, {"estimated", l.estimated}};
}

std::size_t default_x_grid(const MeasureSpec& spec) { return spec.dim == 2 ? 32 : 16; }

void require_positive(const ConfigSection& s, const std::string& key, double v) {
  if (!(v > 0.0)) s.fail(key, "must be positive");
}

}  // namespace

RunContext::RunContext(const ConfigFile& config, std::string command, std::uint64_t seed, unsigned threads,
                       std::filesystem::path out_dir, std::string manifest_hash)
    : config_(&config),
      command_(std::move(command)),
      seed_(seed),
      threads_(threads),
      out_dir_(std::move(out_dir)),
      manifest_hash_(std::move(manifest_hash)) {}

MonteCarlo RunContext::mc(std::uint64_t salt) const {
  return MonteCarlo{salt == 0 ? seed_ : mix_seed(seed_, salt), threads_};
}

std::ofstream RunContext::open(const std::string& name) {
  std::filesystem::create_directories(out_dir_);
  std::ofstream out(out_dir_ / name, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + (out_dir_ / name).string());
  outputs_.push_back(name);
  return out;
}

void RunContext::write_csv(const std::string& name, const std::function<void(CsvWriter&)>& body) {
  std::ofstream out = open(name);
  CsvWriter csv(out);
  csv.comment("manifest " + manifest_hash_);
  body(csv);
}

void RunContext::write_json(const std::string& name, const nlohmann::ordered_json& value) {
  std::ofstream out = open(name);
  out << value.dump(2) << '\n';
}

int cmd_lyapunov(RunContext& ctx) {
  const MeasureSpec spec = measure_of(ctx);
  const ConfigSection& s = require_section(ctx, "lyapunov");
  const CocycleSpec cocycle = [&] {
    try {
      return CocycleSpec::by_label(ctx.config().root().get_string("cocycle", "log-norm"));
    } catch (const DomainError& e) {
      ctx.config().root().fail("cocycle", e.what());
    }
  }();
  const std::size_t n = s.get_size("n");
  const std::size_t reps = s.get_size("reps");
  const std::size_t x_grid = s.get_size("x_grid", 1);
  const bool variance = s.get_bool("variance", true);
  const std::size_t variance_starts = s.get_size("variance_starts", 4);
  const std::size_t gordin_n_max = s.get_size("gordin_n_max", 0);
  const std::size_t gordin_reps = s.get_size("gordin_reps", 1000);
  s.finish();
  if (n == 0) s.fail("n", "must be at least 1");
  if (reps == 0) s.fail("reps", "must be at least 1");
  if (x_grid == 0) s.fail("x_grid", "must be at least 1");
  if (variance && (reps < 2 || variance_starts == 0)) s.fail("variance_starts", "variance needs reps >= 2 and at least one start");

  const LyapunovEstimate est = estimate_lambda(spec, cocycle, n, reps, x_grid, ctx.mc());
  Json j{{"cocycle", cocycle.label()},
         {"measure", spec.family_name()},
         {"dim", spec.dim},
         {"n", n},
         {"reps", reps},
         {"x_grid", est.x_grid_size},
         {"lambda_hat", est.lambda_hat},
         {"lambda_std_error", est.std_error}};
  Json per_start = Json::array();
  for (const auto& p : est.per_start) per_start.push_back({{"mean", p.mean}, {"std_error", p.std_error}});
  j["lambda_per_start"] = per_start;

  if (variance) {
    const auto starts = direction_grid(spec.dim, variance_starts);
    const VarianceReport v = estimate_variance(spec, cocycle, est.lambda_hat, n, reps, starts, ctx.mc(kVarianceSalt));
    j["v_hat"] = v.pooled.v_hat;
    j["v_std_error"] = v.pooled.std_error;
    j["v_consistent_across_starts"] = v.consistent_across_starts;
    Json vs = Json::array();
    for (const auto& p : v.per_start) vs.push_back({{"v_hat", p.v_hat}, {"std_error", p.std_error}});
    j["v_per_start"] = vs;
  }
  if (gordin_n_max > 0) {
    const GordinReport g = gordin_check(spec, cocycle, est.lambda_hat, gordin_n_max, gordin_reps,
                                        std::max<std::size_t>(x_grid, 4), ctx.mc(kGordinSalt));
    j["gordin_verdict"] = to_string(g.verdict);
    j["gordin_decay_slope"] = finite_or_null(g.decay_slope);
    ctx.write_csv("gordin.csv", [&](CsvWriter& csv) {
      csv.header({"n", "a_n", "std_error", "partial_sum"});
      for (std::size_t k = 0; k < g.a_n.size(); ++k) {
        csv.row({integer(k), g.a_n[k], g.std_errors[k], g.partial_sums[k]});
      }
    });
  }
  ctx.write_csv("lyapunov_trajectories.csv", [&](CsvWriter& csv) {
    csv.header({"start", "replicate", "mean"});
    for (std::size_t t = 0; t < est.trajectory_means.size(); ++t) {
      csv.row({integer(t / est.reps), integer(t % est.reps), est.trajectory_means[t]});
    }
  });
  ctx.write_json("lyapunov.json", j);
  return 0;
}

namespace {

struct RegimeChoice {
  std::optional<RateRegime> regime;
  std::optional<std::pair<double, double>> window;
};

RegimeChoice parse_regime(const ConfigSection& s) {
  RegimeChoice c;
  const std::string name = s.get_string("regime", "none");
  if (name == "none") {
  } else if (name == "large-dev-small-y") {
    c.regime = LargeDevSmallY{};
  } else if (name == "large-dev-big-y") {
    c.regime = LargeDevBigY{};
  } else if (name == "subexp") {
    c.regime = SubexpRegime{s.get_double("r")};
  } else if (name == "weak-moment") {
    c.regime = WeakMomentRegime{s.get_double("p")};
  } else if (name == "mdp") {
    c.regime = MdpRegime{parse_bn(s)};
  } else {
    s.fail("regime", "must be none, large-dev-small-y, large-dev-big-y, subexp, weak-moment or mdp");
  }
  if (s.has("fit_window")) {
    if (!c.regime) s.fail("fit_window", "needs a regime");
    const auto w = s.get_doubles("fit_window");
    if (w.size() != 2 || !(w[0] > 0.0) || !(w[1] >= w[0])) s.fail("fit_window", "must be two increasing positive numbers");
    c.window = std::make_pair(w[0], w[1]);
  }
  return c;
}

void write_tail_rows(CsvWriter& csv, const TailCurve& c) {
  for (std::size_t i = 0; i < c.y_grid.size(); ++i) {
    csv.row({integer(c.n), c.alpha, c.y_grid[i], c.p_hat[i], c.ci[i].lo, c.ci[i].hi, integer(c.x_grid_size),
             integer(c.reps), std::to_string(c.seed)});
  }
}

void write_series(RunContext& ctx, const std::string& name, const SeriesReport& r) {
  ctx.write_csv(name, [&](CsvWriter& csv) {
    csv.header({"n", "threshold", "p_hat", "ci_lo", "ci_hi", "term", "increment", "partial_sum", "partial_lo",
                "partial_hi", "verdict"});
    for (const auto& row : r.rows) {
      csv.row({integer(row.n), row.threshold, row.p_hat, row.ci.lo, row.ci.hi, row.term, row.increment,
               row.partial_sum, row.partial_lo, row.partial_hi, r.verdict});
    }
  });
}

}  // namespace

int cmd_tails(RunContext& ctx) {
  const MeasureSpec spec = measure_of(ctx);
  const ConfigSection& s = require_section(ctx, "tails");
  std::vector<std::size_t> schedule;
  if (s.has("n") == s.has("n_schedule")) s.fail("n", "give exactly one of n and n_schedule");
  schedule = s.has("n") ? std::vector<std::size_t>{s.get_size("n")} : s.get_sizes("n_schedule");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (schedule[i] == 0 || (i > 0 && schedule[i] <= schedule[i - 1])) {
      s.fail(s.has("n") ? "n" : "n_schedule", "horizons must be positive and strictly increasing");
    }
  }
  const double alpha = s.get_double("alpha", 1.0);
  if (!(alpha > 0.5 && alpha <= 1.0)) s.fail("alpha", "must lie in (1/2, 1]");
  const std::vector<double> y_grid = s.get_doubles("y_grid");
  for (std::size_t i = 0; i < y_grid.size(); ++i) {
    if (!(y_grid[i] > 0.0)) s.fail("y_grid", "values must be positive");
    if (i > 0 && !(y_grid[i] > y_grid[i - 1])) s.fail("y_grid", "must be sorted in strictly increasing order");
  }
  const std::size_t reps = s.get_size("reps");
  if (reps < 100) s.fail("reps", "must be at least 100");
  const std::size_t x_grid = s.get_size("x_grid", default_x_grid(spec));
  if (x_grid == 0) s.fail("x_grid", "must be at least 1");
  const LambdaChoice lambda_choice = parse_lambda(s);
  const bool sensitivity = s.get_bool("sensitivity", false);
  const RegimeChoice regime = parse_regime(s);
  const std::string series = s.get_string("series", "none");
  double series_p = 0.0, series_y = 0.0, series_v = 0.0;
  if (series == "baum-katz") {
    series_p = s.get_double("series_p");
    series_y = s.get_double("series_y");
    require_positive(s, "series_y", series_y);
  } else if (series == "lil") {
    series_v = s.get_double("series_v");
    series_y = s.get_double("series_y");
    require_positive(s, "series_y", series_y);
    if (schedule.front() < 3) s.fail("n_schedule", "the LIL series needs n >= 3");
  } else if (series != "none") {
    s.fail("series", "must be none, baum-katz or lil");
  }
  s.finish();

  const LambdaValue lambda = resolve_lambda(lambda_choice, spec, ctx);
  const auto curves = tail_schedule(spec, lambda.value, schedule, alpha, y_grid, x_grid, reps, ctx.mc());
  bool all_censored = true;
  for (const auto& c : curves) {
    for (bool z : c.censored) all_censored = all_censored && z;
  }
  ctx.write_csv("tails.csv", [&](CsvWriter& csv) {
    csv.header({"n", "alpha", "y", "p_hat", "ci_lo", "ci_hi", "x_grid", "reps", "seed"});
    for (const auto& c : curves) write_tail_rows(csv, c);
  });

  Json j{{"measure", spec.family_name()}, {"lambda", lambda_json(lambda)}, {"alpha", alpha}, {"reps", reps},
         {"x_grid", x_grid}, {"all_censored", all_censored}};

  if (sensitivity && lambda.estimated) {
    ctx.write_csv("tails_sensitivity.csv", [&](CsvWriter& csv) {
      csv.header({"lambda_shift", "n", "alpha", "y", "p_hat", "ci_lo", "ci_hi", "x_grid", "reps", "seed"});
      for (double shift : {-2.0, 2.0}) {
        const auto shifted = tail_schedule(spec, lambda.value + shift * lambda.std_error, schedule, alpha, y_grid,
                                           x_grid, reps, ctx.mc());
        for (const auto& c : shifted) {
          for (std::size_t i = 0; i < c.y_grid.size(); ++i) {
            csv.row({shift, integer(c.n), c.alpha, c.y_grid[i], c.p_hat[i], c.ci[i].lo, c.ci[i].hi,
                     integer(c.x_grid_size), integer(c.reps), std::to_string(c.seed)});
          }
        }
      }
    });
  }

  if (regime.regime) {
    std::vector<RateSequence> rates;
    for (const auto& c : curves) rates.push_back(rate_extract(c, *regime.regime));
    ctx.write_csv("rates.csv", [&](CsvWriter& csv) {
      csv.header({"regime", "n", "y", "value", "lo", "hi", "censored", "censor_bound"});
      for (const auto& r : rates) {
        for (std::size_t i = 0; i < r.y.size(); ++i) {
          csv.row({r.regime, integer(r.n), r.y[i], r.value[i], r.lo[i], r.hi[i], integer(r.censored[i] ? 1 : 0),
                   r.censor_bound[i]});
        }
      }
    });
    if (regime.window) {
      Json fits = Json::array();
      std::vector<RateFit> fitted;
      for (const auto& r : rates) {
        RateFit f;
        std::string note = "ok";
        try {
          f = regime_fit(r, regime.window->first, regime.window->second);
        } catch (const DomainError& e) {
          const double nan = std::numeric_limits<double>::quiet_NaN();
          f = RateFit{r.regime, nan, nan, nan, regime.window->first, regime.window->second, 0};
          note = e.what();
        }
        fitted.push_back(f);
        fits.push_back({{"n", r.n}, {"exponent_hat", finite_or_null(f.exponent_hat)},
                        {"constant_hat", finite_or_null(f.constant_hat)}, {"r_squared", finite_or_null(f.r_squared)},
                        {"points", f.points}, {"note", note}});
      }
      ctx.write_csv("rate_fit.csv", [&](CsvWriter& csv) {
        csv.header({"regime", "n", "exponent_hat", "constant_hat", "r_squared", "window"});
        for (std::size_t i = 0; i < fitted.size(); ++i) {
          const auto& f = fitted[i];
          csv.row({f.regime, integer(rates[i].n), f.exponent_hat, f.constant_hat, f.r_squared,
                   format_number(f.window_lo) + ".." + format_number(f.window_hi)});
        }
      });
      j["fits"] = fits;
    }
  }

  if (series != "none") {
    const SeriesReport r = series == "baum-katz"
                               ? baum_katz_partial(spec, lambda.value, alpha, series_p, series_y, schedule, x_grid,
                                                   reps, ctx.mc(kSimulationSalt))
                               : lil_curve(spec, lambda.value, series_v, schedule, series_y, x_grid, reps,
                                           ctx.mc(kSimulationSalt));
    write_series(ctx, "series.csv", r);
    j["series"] = {{"kind", series}, {"verdict", r.verdict}, {"increments_decreasing", r.increments_decreasing},
                   {"warnings", r.warnings}};
  }
  ctx.write_json("tails.json", j);
  return all_censored ? 4 : 0;
}

int cmd_bounds(RunContext& ctx) {
  const ConfigSection& s = require_section(ctx, "bounds");
  const auto gammas = s.get_doubles("haeusler_gamma", {});
  const auto us = s.get_doubles("haeusler_u", {});
  const auto vs = s.get_doubles("haeusler_v", {});
  const double p1 = s.get_double("p1", 0.0);
  const double p2 = s.get_double("p2", 0.0);
  if ((gammas.empty() || us.empty() || vs.empty()) && !(gammas.empty() && us.empty() && vs.empty())) {
    s.fail("haeusler_gamma", "haeusler_gamma, haeusler_u and haeusler_v go together");
  }
  const std::optional<double> vbe_p = s.find_double("vbe_p");
  const auto vbe_norms = s.get_doubles("vbe_weak_norms", {1.0});
  const auto vbe_y = s.get_doubles("vbe_y", {1.0, 2.0, 4.0, 8.0});
  const std::size_t vbe_sim_reps = s.get_size("vbe_sim_reps", 0);
  const std::size_t vbe_sim_n = s.get_size("vbe_sim_n", 64);
  const std::size_t maximal_n_max = s.get_size("maximal_n_max", 0);
  const auto maximal_p = s.get_doubles("maximal_p", {1.1, 1.5, 1.9});
  const std::size_t maximal_random = s.get_size("maximal_random_cases", 2000);
  const std::size_t haeusler_spaces = s.get_size("haeusler_spaces", 0);
  const std::size_t haeusler_depth = s.get_size("haeusler_max_depth", 10);
  const std::size_t haeusler_grid = s.get_size("haeusler_grid", 10);
  const std::size_t sharp_grid = s.get_size("sharp_grid", 0);
  s.finish();
  if (vbe_sim_reps > 0 && !vbe_p) s.fail("vbe_sim_reps", "needs vbe_p");
  if (maximal_n_max > 12) s.fail("maximal_n_max", "must be at most 12");
  if (haeusler_depth == 0 || haeusler_depth > 10) s.fail("haeusler_max_depth", "must lie in [1, 10]");

  Json j = Json::object();
  if (!gammas.empty()) {
    ctx.write_csv("haeusler.csv", [&](CsvWriter& csv) {
      csv.header({"gamma", "u", "v", "p1", "p2", "bound", "plain_term", "sharp_term"});
      for (double g : gammas) {
        for (double u : us) {
          for (double v : vs) {
            csv.row({g, u, v, p1, p2, haeusler_bound(g, u, v, p1, p2), haeusler_plain_term(g, u, v),
                     haeusler_sharp_term(g, u, v)});
          }
        }
      }
    });
  }
  if (vbe_p) {
    const double k = vbe_constant(*vbe_p);
    j["vbe"] = {{"p", *vbe_p}, {"K", k}};
    ctx.write_csv("vbe.csv", [&](CsvWriter& csv) {
      csv.header({"p", "K", "y", "bound"});
      for (double y : vbe_y) csv.row({*vbe_p, k, y, vbe_weak_bound(*vbe_p, vbe_norms, y)});
    });
    if (vbe_sim_reps > 0) {
      const auto checks = vbe_simulation(*vbe_p, vbe_sim_n, vbe_sim_reps, vbe_y, ctx.mc(kSimulationSalt));
      bool holds = true;
      ctx.write_csv("vbe_simulation.csv", [&](CsvWriter& csv) {
        csv.header({"y", "empirical", "std_error", "bound", "holds"});
        for (const auto& c : checks) {
          csv.row({c.y, c.empirical, c.std_error, c.bound, integer(c.holds ? 1 : 0)});
          holds = holds && c.holds;
        }
      });
      j["vbe"]["simulation_holds"] = holds;
    }
  }
  if (maximal_n_max > 0) {
    for (double p : maximal_p) {
      if (!(p > 1.0 && p < 2.0)) throw DomainError("maximal_p values must lie in (1, 2)");
    }
    const auto r = maximal_inequality_suite(maximal_n_max, maximal_p, maximal_random, ctx.mc(kSimulationSalt).seed);
    Json cp = Json::object();
    for (double p : maximal_p) cp[format_number(p)] = maximal_constant_cp(p);
    j["maximal"] = {{"n_max", maximal_n_max}, {"cases", r.cases}, {"violations", r.violations},
                    {"worst_ratio", r.worst_ratio}, {"c_p", cp}};
  }
  if (haeusler_spaces > 0) {
    const auto r = haeusler_suite(haeusler_spaces, haeusler_depth, haeusler_grid, ctx.mc(kSimulationSalt).seed);
    j["haeusler_suite"] = {{"spaces", haeusler_spaces}, {"cases", r.cases}, {"violations", r.violations},
                           {"worst_ratio", r.worst_ratio}};
  }
  if (sharp_grid > 0) {
    j["sharp_dominance"] = {{"grid", sharp_grid}, {"failures", sharp_dominance_failures(sharp_grid, 1e-3, 1e3)}};
  }
  ctx.write_json("bounds.json", j);
  return 0;
}

int cmd_mdp(RunContext& ctx) {
  const ConfigSection& s = require_section(ctx, "mdp");
  const BnSpec bn = parse_bn(s);
  const std::size_t c_max = s.get_size("c_of_n_max", 20);
  const double v = s.get_double("v", 1.0);
  if (!(v >= 0.0)) s.fail("v", "must be non-negative");
  const auto path_y = s.get_doubles("path_y", {});
  const auto arcones_schedule = s.get_sizes("arcones_schedule", {});
  const std::size_t arcones_samples = s.get_size("arcones_samples", 100000);
  const std::optional<double> compare_y = s.find_double("compare_y");
  const auto compare_schedule = s.get_sizes("compare_schedule", {});
  const std::size_t reps = s.get_size("reps", 10000);
  const std::size_t x_grid_cfg = s.get_size("x_grid", 0);
  const LambdaChoice lambda_choice = parse_lambda(s);
  s.finish();
  if (compare_y && compare_schedule.empty()) s.fail("compare_schedule", "needed with compare_y");
  if (compare_y && !(v > 0.0)) s.fail("v", "must be positive for the comparison");
  std::optional<MeasureSpec> spec;
  if (!arcones_schedule.empty() || compare_y) spec = measure_of(ctx);

  Json j{{"b_n", bn.describe()}};
  if (c_max > 0) {
    ctx.write_csv("c_of_n.csv", [&](CsvWriter& csv) {
      csv.header({"n", "b_n", "c"});
      for (std::size_t n = 1; n <= c_max; ++n) csv.row({integer(n), bn(n), c_of_n(bn, static_cast<double>(n))});
    });
  }
  if (!path_y.empty()) {
    ctx.write_csv("mdp_rate.csv", [&](CsvWriter& csv) {
      csv.header({"y", "v", "rate", "contraction_value"});
      for (double y : path_y) {
        csv.row({y, v, mdp_rate(MdpPath::linear(y), v), v > 0.0 ? y * y / (2.0 * v) : mdp_rate(MdpPath::linear(y), v)});
      }
    });
  }
  if (!arcones_schedule.empty()) {
    const auto tail = spec->is_finite_support() ? finite_support_log_norm_tail(*spec)
                                                : empirical_log_norm_tail(*spec, arcones_samples, ctx.mc(kSimulationSalt));
    const ArconesReport r = arcones_check(tail, bn, arcones_schedule);
    ctx.write_csv("arcones.csv", [&](CsvWriter& csv) {
      csv.header({"n", "b_n", "tail", "product_value", "log_value"});
      for (const auto& row : r.rows) csv.row({integer(row.n), row.b_n, row.tail, row.product_value, row.log_value});
    });
    j["arcones"] = {{"satisfied", r.satisfied}, {"verdict", r.verdict}, {"tail", spec->is_finite_support() ? "exact" : "empirical"}};
  }
  int status = 0;
  if (compare_y) {
    const LambdaValue lambda = resolve_lambda(lambda_choice, *spec, ctx);
    const std::size_t x_grid = x_grid_cfg == 0 ? default_x_grid(*spec) : x_grid_cfg;
    const MdpComparison cmp = mdp_compare(*spec, lambda.value, v, bn, *compare_y, compare_schedule, x_grid, reps, ctx.mc());
    bool all_censored = true;
    ctx.write_csv("mdp_compare.csv", [&](CsvWriter& csv) {
      csv.header({"n", "b_n", "p_hat", "ci_lo", "ci_hi", "value", "lo", "hi", "censored", "target"});
      for (const auto& row : cmp.rows) {
        csv.row({integer(row.n), row.b_n, row.p_hat, row.ci.lo, row.ci.hi, row.value, row.lo, row.hi,
                 integer(row.censored ? 1 : 0), cmp.target});
        all_censored = all_censored && row.censored;
      }
    });
    j["compare"] = {{"y", *compare_y}, {"v", v}, {"target", cmp.target}, {"lambda", lambda_json(lambda)},
                    {"all_censored", all_censored}};
    if (all_censored) status = 4;
  }
  ctx.write_json("mdp.json", j);
  return status;
}

int cmd_decompose(RunContext& ctx) {
  const MeasureSpec spec = measure_of(ctx);
  const ConfigSection& s = require_section(ctx, "decompose");
  const std::size_t grid_power = s.get_size("grid_power", 11);
  const double tol = s.get_double("tol", 1e-6);
  const std::optional<double> lambda = s.find_double("lambda");
  const std::size_t paths = s.get_size("paths", 0);
  const std::size_t path_n = s.get_size("path_n", 100);
  const std::size_t bins = s.get_size("bins", 64);
  const double mean_tol = s.get_double("mean_tol", 5e-3);
  s.finish();
  require_positive(s, "tol", tol);
  if (grid_power < 2 || grid_power > 20) s.fail("grid_power", "must lie in [2, 20]");
  if (paths > 0 && (path_n == 0 || bins == 0)) s.fail("path_n", "path_n and bins must be positive");

  const PoissonSolution sol = solve_poisson(spec, lambda, static_cast<unsigned>(grid_power), tol);
  {
    ctx.write_csv("psi.csv", [&](CsvWriter& csv) {
      csv.header({"angle", "psi"});
      for (std::size_t i = 0; i < sol.grid_size(); ++i) csv.row({sol.grid[i].angle(), sol.psi[i]});
    });
  }
  Json j{{"grid_power", grid_power},
         {"tol", tol},
         {"lambda_used", sol.lambda_used},
         {"truncation_terms", sol.truncation_terms},
         {"tail_bound", sol.tail_bound},
         {"grid_residual", sol.grid_residual},
         {"verification_residual", sol.verification_residual},
         {"verification_within_10_tol", sol.verification_residual <= 10.0 * tol},
         {"max_abs_psi", sol.max_abs_psi()}};
  if (paths > 0) {
    const ConditionalMeanCheck check = check_conditional_mean(spec, sol, paths, path_n, bins, mean_tol, ctx.mc());
    ctx.write_csv("conditional_means.csv", [&](CsvWriter& csv) {
      csv.header({"angle_lo", "angle_hi", "count", "mean", "std_error", "within"});
      for (const auto& b : check.bins) {
        csv.row({b.angle_lo, b.angle_hi, integer(b.count), b.mean, b.std_error, integer(b.within ? 1 : 0)});
      }
    });
    j["conditional_mean"] = {{"paths", paths}, {"path_n", path_n}, {"samples", check.samples},
                             {"max_abs_mean", check.max_abs_mean}, {"all_within", check.all_within},
                             {"max_split_identity_error", check.max_split_identity_error}};
  }
  ctx.write_json("decompose.json", j);
  return 0;
}

int cmd_check_measure(RunContext& ctx) {
  const MeasureSpec spec = measure_of(ctx);
  std::size_t samples = 1000, probes = 1000;
  if (ctx.config().has_section("check-measure")) {
    const ConfigSection& s = ctx.config().section("check-measure");
    samples = s.get_size("samples", samples);
    probes = s.get_size("cocycle_probes", probes);
    s.finish();
  }
  const double violation = max_cocycle_violation(CocycleSpec::log_norm(), spec.dim, probes, ctx.mc(kSimulationSalt).seed);
  const MeasureDiagnostics d = diagnose_measure(spec, samples, ctx.mc());
  const Json j{{"measure", spec.family_name()},
               {"dim", spec.dim},
               {"cocycle_identity_probes", probes},
               {"max_cocycle_identity_violation", violation},
               {"samples", d.samples},
               {"representable", d.representable},
               {"max_norm_bound_excess", d.max_norm_bound_excess},
               {"max_sampled_cocycle_violation", d.max_cocycle_violation},
               {"proximal_product_found", d.proximal_product_found},
               {"max_bin_occupancy", d.max_bin_occupancy},
               {"warnings", d.warnings}};
  ctx.write_json("check_measure.json", j);
  return 0;
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"lyapunov", "tails", "bounds", "mdp", "decompose", "check-measure"};
  return names;
}

Command find_command(const std::string& name) {
  static const std::map<std::string, Command> table{
      {"lyapunov", cmd_lyapunov}, {"tails", cmd_tails},         {"bounds", cmd_bounds},
      {"mdp", cmd_mdp},           {"decompose", cmd_decompose}, {"check-measure", cmd_check_measure},
  };
  const auto it = table.find(name);
  return it == table.end() ? Command{} : it->second;
}

}  // namespace gllab::cli

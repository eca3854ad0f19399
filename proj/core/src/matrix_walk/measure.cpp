#include "gllab/matrix_walk/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/LU>
#include <Eigen/QR>

#include "gllab/common/error.hpp"

namespace gllab {
namespace {

constexpr double kWeightTolerance = 1e-12;
constexpr int kGaussianRetries = 16;

void check_weights(const std::vector<double>& weights, std::size_t expected, const char* what) {
  if (weights.size() != expected) {
    throw InvariantError(std::string(what) + ": " + std::to_string(expected) +
                         " atoms but " + std::to_string(weights.size()) + " weights");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w)) throw InvariantError(std::string(what) + ": weights must be positive");
    total += w;
  }
  if (std::abs(total - 1.0) > kWeightTolerance) {
    throw InvariantError(std::string(what) + ": weights sum to " + std::to_string(total) +
                         ", expected 1");
  }
}

std::vector<double> cumulative_of(std::span<const double> weights) {
  std::vector<double> c(weights.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    c[i] = acc;
  }
  return c;
}

std::size_t pick(std::span<const double> cumulative, double u) {
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u * cumulative.back());
  return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()),
                               cumulative.size() - 1);
}

void set_plane_rotation(Eigen::MatrixXd& m, double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  m(0, 0) = c;
  m(0, 1) = -s;
  m(1, 0) = s;
  m(1, 1) = c;
}

void set_rotation(Eigen::MatrixXd& m, int dim, RngStream& rng) {
  if (dim == 2) {
    set_plane_rotation(m, 2.0 * std::numbers::pi * rng.uniform());
  } else {
    m = haar_rotation(dim, rng);
  }
}

}  // namespace

// ---------------------------------------------------------------- MeasureSpec

MeasureSpec MeasureSpec::dirac(SquareMatrix g) {
  const int d = g.dim();
  return MeasureSpec{d, FiniteSupport{{std::move(g)}, {1.0}}};
}

MeasureSpec MeasureSpec::finite(std::vector<SquareMatrix> matrices, std::vector<double> weights) {
  if (matrices.empty()) throw InvariantError("FiniteSupport: empty support");
  const int d = matrices.front().dim();
  MeasureSpec spec{d, FiniteSupport{std::move(matrices), std::move(weights)}};
  spec.validate();
  return spec;
}

void MeasureSpec::validate() const {
  if (dim < 2) throw InvariantError("MeasureSpec: dim must be at least 2");
  std::visit(
      [this](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, FiniteSupport>) {
          if (f.matrices.empty()) throw InvariantError("FiniteSupport: empty support");
          for (const auto& m : f.matrices) {
            if (m.dim() != dim) throw InvariantError("FiniteSupport: matrix dimension differs from dim");
          }
          check_weights(f.weights, f.matrices.size(), "FiniteSupport");
        } else if constexpr (std::is_same_v<T, ScaledRotation>) {
          if (const auto* d = std::get_if<DiscreteLogScale>(&f.log_scale)) {
            if (d->values.empty()) throw InvariantError("ScaledRotation: empty log-scale law");
            for (double v : d->values) {
              if (!std::isfinite(v)) throw InvariantError("ScaledRotation: non-finite log-scale");
            }
            check_weights(d->weights, d->values.size(), "ScaledRotation");
          } else {
            const auto& n = std::get<NormalLogScale>(f.log_scale);
            if (!std::isfinite(n.mean) || !(n.sd >= 0.0)) {
              throw InvariantError("ScaledRotation: invalid normal log-scale law");
            }
          }
        } else if constexpr (std::is_same_v<T, HeavyTailedConjugatedDiagonal>) {
          if (!(f.tail_index > 0.0) || !std::isfinite(f.tail_index)) {
            throw InvariantError("HeavyTailedConjugatedDiagonal: tail index must be > 0");
          }
        } else {
          if (!(f.entry_std > 0.0) || !std::isfinite(f.entry_std)) {
            throw InvariantError("GaussianEntries: entry_std must be > 0");
          }
        }
      },
      family);
}

std::string MeasureSpec::family_name() const {
  return std::visit(
      [](const auto& f) -> std::string {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, FiniteSupport>) return "finite_support";
        else if constexpr (std::is_same_v<T, ScaledRotation>) return "scaled_rotation";
        else if constexpr (std::is_same_v<T, HeavyTailedConjugatedDiagonal>) return "heavy_tailed";
        else return "gaussian_entries";
      },
      family);
}

const FiniteSupport& MeasureSpec::finite_support() const {
  if (const auto* f = std::get_if<FiniteSupport>(&family)) return *f;
  throw UnsupportedError("measure family '" + family_name() + "' is not a finite support");
}

// --------------------------------------------------------------- GroupElement

GroupElement::GroupElement(const SquareMatrix& g)
    : left_(g.entries()),
      log_scales_(Eigen::VectorXd::Zero(g.dim())),
      log_n_(std::log(big_n(g))) {}

GroupElement::GroupElement(Eigen::MatrixXd left, Eigen::VectorXd log_scales, Eigen::MatrixXd right,
                           bool orthogonal_factors)
    : left_(std::move(left)), log_scales_(std::move(log_scales)), right_(std::move(right)) {
  finalize(right_.size() > 0, orthogonal_factors);
}

void GroupElement::finalize(bool has_right, bool orthogonal_factors) {
  has_right_ = has_right;
  max_scale_ = log_scales_.size() > 0 ? log_scales_.maxCoeff() : 0.0;
  has_scales_ = (log_scales_.array() != 0.0).any();
  if (!has_scales_) max_scale_ = 0.0;
  if (orthogonal_factors) {
    log_n_ = std::max(max_scale_, -log_scales_.minCoeff());
    return;
  }
  Eigen::MatrixXd dense = left_ * log_scales_.array().exp().matrix().asDiagonal();
  if (has_right_) dense = dense * right_;
  const Eigen::VectorXd sv = singular_values(dense);
  log_n_ = std::max(std::log(sv(0)), -std::log(sv(sv.size() - 1)));
}

double GroupElement::apply(std::span<double> unit, std::span<double> scratch) const {
  const int d = dim();
  double* y = scratch.data();
  double* w = scratch.data() + d;
  if (has_right_) {
    for (int r = 0; r < d; ++r) {
      double acc = 0.0;
      for (int c = 0; c < d; ++c) acc += right_(r, c) * unit[static_cast<std::size_t>(c)];
      y[r] = acc;
    }
  } else {
    for (int r = 0; r < d; ++r) y[r] = unit[static_cast<std::size_t>(r)];
  }
  if (has_scales_) {
    for (int r = 0; r < d; ++r) y[r] *= std::exp(log_scales_(r) - max_scale_);
  }
  double sq = 0.0;
  for (int r = 0; r < d; ++r) {
    double acc = 0.0;
    for (int c = 0; c < d; ++c) acc += left_(r, c) * y[c];
    w[r] = acc;
    sq += acc * acc;
  }
  const double len = std::sqrt(sq);
  if (!(len > 0.0) || !std::isfinite(len)) throw NumericError("GroupElement::apply: degenerate image", 0);
  for (int r = 0; r < d; ++r) unit[static_cast<std::size_t>(r)] = w[r] / len;
  return max_scale_ + std::log(len);
}

double GroupElement::log_growth(std::span<const double> unit) const {
  std::vector<double> copy(unit.begin(), unit.end());
  std::vector<double> scratch(2 * copy.size());
  return apply(copy, scratch);
}

double GroupElement::log_abs_det() const {
  double out = log_scales_.sum() + std::log(std::abs(left_.determinant()));
  if (has_right_) out += std::log(std::abs(right_.determinant()));
  return out;
}

SquareMatrix GroupElement::to_matrix() const {
  Eigen::MatrixXd dense = left_ * log_scales_.array().exp().matrix().asDiagonal();
  if (has_right_) dense = dense * right_;
  return SquareMatrix(std::move(dense));
}

// -------------------------------------------------------------------- Sampler

Sampler::Sampler(MeasureSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  if (const auto* f = std::get_if<FiniteSupport>(&spec_.family)) {
    support_.reserve(f->matrices.size());
    for (const auto& m : f->matrices) support_.emplace_back(m);
    weights_ = f->weights;
    cumulative_ = cumulative_of(weights_);
  } else if (const auto* s = std::get_if<ScaledRotation>(&spec_.family)) {
    if (const auto* d = std::get_if<DiscreteLogScale>(&s->log_scale)) {
      log_scale_cumulative_ = cumulative_of(d->weights);
    }
  }
}

const GroupElement& Sampler::draw(RngStream& rng, GroupElement& scratch) const {
  const int d = spec_.dim;
  if (!support_.empty()) {
    if (support_.size() == 1) return support_.front();
    return support_[pick(cumulative_, rng.uniform())];
  }

  if (scratch.dim() != d) {
    scratch = GroupElement(Eigen::MatrixXd::Identity(d, d), Eigen::VectorXd::Zero(d),
                           Eigen::MatrixXd::Identity(d, d), true);
  }

  if (const auto* s = std::get_if<ScaledRotation>(&spec_.family)) {
    double scale = 0.0;
    if (const auto* law = std::get_if<DiscreteLogScale>(&s->log_scale)) {
      scale = law->values[pick(log_scale_cumulative_, rng.uniform())];
    } else {
      const auto& normal_law = std::get<NormalLogScale>(s->log_scale);
      scale = rng.normal(normal_law.mean, normal_law.sd);
    }
    Eigen::MatrixXd& left = scratch.left_factor();
    if (s->uniform_rotation) {
      set_rotation(left, d, rng);
    } else if (d == 2) {
      set_plane_rotation(left, s->angle);
    } else {
      left.setIdentity();
    }
    scratch.scales().setConstant(scale);
    scratch.finalize(false, true);
    return scratch;
  }

  if (const auto* h = std::get_if<HeavyTailedConjugatedDiagonal>(&spec_.family)) {
    const double w = std::pow(rng.uniform_open_zero(), -1.0 / h->tail_index);
    if (h->randomize_rotations) {
      set_rotation(scratch.left_factor(), d, rng);
      set_rotation(scratch.right_factor(), d, rng);
    } else {
      scratch.left_factor().setIdentity();
      scratch.right_factor().setIdentity();
    }
    Eigen::VectorXd& l = scratch.scales();
    l.setZero();
    l(0) = w;
    l(d - 1) = -w;
    scratch.finalize(h->randomize_rotations, true);
    return scratch;
  }

  const auto& g = std::get<GaussianEntries>(spec_.family);
  for (int attempt = 1; attempt <= kGaussianRetries; ++attempt) {
    Eigen::MatrixXd m(d, d);
    for (int r = 0; r < d; ++r) {
      for (int c = 0; c < d; ++c) m(r, c) = rng.normal(0.0, g.entry_std);
    }
    try {
      scratch = GroupElement(SquareMatrix(std::move(m)));
      return scratch;
    } catch (const InvariantError&) {
    }
  }
  throw NumericError("GaussianEntries: no invertible draw after " +
                         std::to_string(kGaussianRetries) + " attempts",
                     kGaussianRetries);
}

SquareMatrix sample_matrix(const MeasureSpec& spec, RngStream& rng) {
  Sampler sampler(spec);
  GroupElement scratch;
  return sampler.draw(rng, scratch).to_matrix();
}

Eigen::MatrixXd haar_rotation(int dim, RngStream& rng) {
  Eigen::MatrixXd g(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) g(r, c) = rng.normal();
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd& rr = qr.matrixQR();
  for (int c = 0; c < dim; ++c) {
    if (rr(c, c) < 0.0) q.col(c) = -q.col(c);
  }
  if (q.determinant() < 0.0) q.col(0) = -q.col(0);
  return q;
}

}  // namespace gllab

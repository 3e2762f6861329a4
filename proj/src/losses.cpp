#include "pdcert/losses.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pdcert {

namespace {

// log(1 + exp(-t)) without overflow.
double softplus_neg(double t) { return t > 0.0 ? std::log1p(std::exp(-t)) : -t + std::log1p(std::exp(t)); }

// d/dt log(1 + exp(-t)) = -1 / (1 + exp(t)).
double softplus_neg_derivative(double t) {
  if (t > 0.0) {
    const double e = std::exp(-t);
    return -e / (1.0 + e);
  }
  return -1.0 / (1.0 + std::exp(t));
}

double logistic_sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

double xlogx(double p) { return p > 0.0 ? p * std::log(p) : 0.0; }

// Rounding in the gradient can push m*w*y a few ulps outside [-1, 0].
constexpr double kBoxSlack = 1e-12;

}  // namespace

double logistic_conjugate_term(double x) {
  if (x < -1.0 - kBoxSlack || x > kBoxSlack) return kInfinity;
  x = std::clamp(x, -1.0, 0.0);
  return xlogx(-x) + xlogx(1.0 + x);
}

SmoothLoss::SmoothLoss(Kind kind, Vector data, double scale, double beta)
    : kind_(kind), data_(std::move(data)), scale_(scale), beta_(beta) {}

SmoothLoss SmoothLoss::least_squares(Vector targets) {
  if (targets.size() == 0) throw std::invalid_argument("least_squares: empty target vector");
  if (!targets.allFinite()) throw std::invalid_argument("least_squares: targets must be finite");
  return SmoothLoss(Kind::least_squares, std::move(targets), 1.0, 1.0);
}

SmoothLoss SmoothLoss::logistic(Vector labels, LogisticScaling scaling) {
  if (labels.size() == 0) throw std::invalid_argument("logistic: empty label vector");
  for (Eigen::Index j = 0; j < labels.size(); ++j) {
    if (labels[j] != 1.0 && labels[j] != -1.0) throw std::invalid_argument("logistic: labels must be -1 or +1");
  }
  const double m = static_cast<double>(labels.size());
  // h_j'' = scale * s(1-s) <= scale / 4, hence 1/beta = scale / 4.
  const double scale = scaling == LogisticScaling::mean ? 1.0 / m : 1.0;
  return SmoothLoss(Kind::logistic, std::move(labels), scale, 4.0 / scale);
}

SmoothLoss SmoothLoss::squared_norm(std::size_t dimension, double scale) {
  if (dimension == 0) throw std::invalid_argument("squared_norm: dimension must be positive");
  if (!(scale > 0.0) || !std::isfinite(scale)) throw std::invalid_argument("squared_norm: scale must be positive");
  return SmoothLoss(Kind::squared_norm, Vector::Zero(static_cast<Eigen::Index>(dimension)), scale, 1.0 / scale);
}

double SmoothLoss::term_value(std::size_t j, double z) const {
  const double d = data_[static_cast<Eigen::Index>(j)];
  switch (kind_) {
    case Kind::least_squares: return 0.5 * (z - d) * (z - d);
    case Kind::logistic: return scale_ * softplus_neg(d * z);
    case Kind::squared_norm: return 0.5 * scale_ * z * z;
  }
  return 0.0;
}

double SmoothLoss::term_derivative(std::size_t j, double z) const {
  const double d = data_[static_cast<Eigen::Index>(j)];
  switch (kind_) {
    case Kind::least_squares: return z - d;
    case Kind::logistic: return scale_ * d * softplus_neg_derivative(d * z);
    case Kind::squared_norm: return scale_ * z;
  }
  return 0.0;
}

double SmoothLoss::term_curvature(std::size_t j, double z) const {
  switch (kind_) {
    case Kind::least_squares: return 1.0;
    case Kind::logistic: {
      const double s = logistic_sigmoid(data_[static_cast<Eigen::Index>(j)] * z);
      return scale_ * s * (1.0 - s);
    }
    case Kind::squared_norm: return scale_;
  }
  return 0.0;
}

double SmoothLoss::term_conjugate(std::size_t j, double w) const {
  const double d = data_[static_cast<Eigen::Index>(j)];
  switch (kind_) {
    case Kind::least_squares: return 0.5 * w * w + w * d;
    // Value scaling (scale * phi(y z)) and argument scaling by y = +-1.
    case Kind::logistic: return scale_ * logistic_conjugate_term(w * d / scale_);
    case Kind::squared_norm: return 0.5 * w * w / scale_;
  }
  return 0.0;
}

double SmoothLoss::value(const Vector& z) const {
  if (z.size() != data_.size()) throw std::invalid_argument("SmoothLoss::value: dimension mismatch");
  double sum = 0.0;
  for (Eigen::Index j = 0; j < z.size(); ++j) sum += term_value(static_cast<std::size_t>(j), z[j]);
  return sum;
}

Vector SmoothLoss::gradient(const Vector& z) const {
  if (z.size() != data_.size()) throw std::invalid_argument("SmoothLoss::gradient: dimension mismatch");
  Vector g(z.size());
  for (Eigen::Index j = 0; j < z.size(); ++j) g[j] = term_derivative(static_cast<std::size_t>(j), z[j]);
  return g;
}

double SmoothLoss::conjugate_value(const Vector& w) const {
  if (w.size() != data_.size()) throw std::invalid_argument("SmoothLoss::conjugate_value: dimension mismatch");
  double sum = 0.0;
  for (Eigen::Index j = 0; j < w.size(); ++j) sum += term_conjugate(static_cast<std::size_t>(j), w[j]);
  return sum;
}

}  // namespace pdcert

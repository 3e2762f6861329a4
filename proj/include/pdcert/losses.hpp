#pragma once

#include <cstddef>
#include <limits>

#include "pdcert/data_matrix.hpp"

namespace pdcert {

/// +infinity sentinel for conjugates evaluated outside their domain. IEEE
/// infinity propagates through sums and compares above every finite value.
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Scaling convention for the logistic loss.
enum class LogisticScaling {
  mean,  // (1/m) sum_j log(1 + exp(-y_j z_j))
  sum,   // sum_j log(1 + exp(-y_j z_j))
};

/**
 * Smooth convex loss f : R^d -> R that separates over coordinates of z = A alpha.
 *
 * Every catalog loss is a sum of scalar terms h_j(z_j), which is what makes
 * the coordinate solvers cheap: the directional derivative and curvature
 * along one column only touch that column's nonzeros.
 *
 * `beta()` is the constant for which f is (1/beta)-smooth w.r.t. the
 * Euclidean norm.
 */
class SmoothLoss {
 public:
  enum class Kind { least_squares, logistic, squared_norm };

  /// f(z) = 1/2 ||z - b||^2, beta = 1.
  static SmoothLoss least_squares(Vector targets);

  /// Logistic loss with labels y in {-1, +1}^m.
  ///
  /// With mean scaling each term has second derivative at most 1/(4m), so
  /// beta = 4m; with sum scaling beta = 4. The conjugate of each scaled term
  /// is (1/m) phi*(m w_j y_j) with phi*(x) = (-x)log(-x) + (1+x)log(1+x) on
  /// [-1, 0] (0 log 0 := 0) and +inf elsewhere.
  static SmoothLoss logistic(Vector labels, LogisticScaling scaling = LogisticScaling::mean);

  /// f(z) = (scale/2) ||z||^2, beta = 1/scale. The SVM loss in problem (A).
  static SmoothLoss squared_norm(std::size_t dimension, double scale);

  Kind kind() const { return kind_; }
  std::size_t dimension() const { return static_cast<std::size_t>(data_.size()); }
  double beta() const { return beta_; }

  double value(const Vector& z) const;
  Vector gradient(const Vector& z) const;
  double conjugate_value(const Vector& w) const;

  /// Scalar pieces: h_j, h_j', h_j'' and h_j* for entry j.
  double term_value(std::size_t j, double z) const;
  double term_derivative(std::size_t j, double z) const;
  double term_curvature(std::size_t j, double z) const;
  double term_conjugate(std::size_t j, double w) const;

  /// True when every h_j is quadratic, so 1-D minimization is closed form.
  bool is_quadratic() const { return kind_ != Kind::logistic; }

  /// Targets (least squares) or labels (logistic); zeros for squared_norm.
  const Vector& data() const { return data_; }
  double scale() const { return scale_; }

 private:
  SmoothLoss(Kind kind, Vector data, double scale, double beta);

  Kind kind_;
  Vector data_;
  double scale_;  // 1/m for logistic, the quadratic weight for squared_norm, 1 otherwise
  double beta_;
};

/// Unscaled scalar logistic conjugate phi*(x) = (-x)log(-x) + (1+x)log(1+x)
/// on [-1, 0], +inf outside.
double logistic_conjugate_term(double x);

}  // namespace pdcert

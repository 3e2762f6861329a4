#include "pdcert/lipschitzing.hpp"

#include <cmath>
#include <stdexcept>

namespace pdcert {

namespace {

void require_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("support bound: lambda must be positive");
}

}  // namespace

SupportBound safe_bound(const SmoothLoss& loss, double lambda, BallKind kind) {
  require_lambda(lambda);
  const double f0 = loss.value(Vector::Zero(static_cast<Eigen::Index>(loss.dimension())));
  return {f0 / lambda, kind, BoundProvenance::safe_f0};
}

SupportBound dynamic_bound(double current_objective, double lambda, BallKind kind) {
  require_lambda(lambda);
  if (current_objective < 0.0) throw std::invalid_argument("dynamic_bound: objective must be nonnegative");
  if (!std::isfinite(current_objective)) throw std::invalid_argument("dynamic_bound: objective must be finite");
  return {current_objective / lambda, kind, BoundProvenance::level_set};
}

SupportBound user_bound(double B, BallKind kind) {
  if (!(B >= 0.0) || !std::isfinite(B)) throw std::invalid_argument("user_bound: B must be finite and >= 0");
  return {B, kind, BoundProvenance::user};
}

const char* to_string(BallKind kind) {
  switch (kind) {
    case BallKind::coordinate_interval: return "coordinate";
    case BallKind::l1_ball: return "l1_ball";
    case BallKind::group_ball: return "group_ball";
  }
  return "?";
}

const char* to_string(BoundProvenance provenance) {
  switch (provenance) {
    case BoundProvenance::safe_f0: return "safe";
    case BoundProvenance::level_set: return "levelset";
    case BoundProvenance::user: return "user";
  }
  return "?";
}

double modified_conjugate_norm(const Vector& u, const NormRegularizer& reg, double B) {
  const double excess = reg.dual_norm(u) - reg.lambda();
  return excess > 0.0 ? B * excess : 0.0;
}

double modified_conjugate_scalar_l1(double x, double lambda, double B) {
  const double excess = std::abs(x) - lambda;
  return excess > 0.0 ? B * excess : 0.0;
}

double restricted_conjugate_argmax(const SeparableRegularizer& reg, std::size_t i, double x, double B) {
  return reg.quadratic_minimizer(i, 0.0, -x, 0.0, Interval{-B, B});
}

double restricted_conjugate(const SeparableRegularizer& reg, std::size_t i, double x, double B) {
  const double a = restricted_conjugate_argmax(reg, i, x, B);
  const double y = x - reg.linear_weight(i);
  return y * a - 0.5 * reg.quadratic_weight() * a * a - reg.abs_weight() * std::abs(a);
}

}  // namespace pdcert

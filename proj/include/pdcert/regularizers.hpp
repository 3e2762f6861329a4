#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "pdcert/losses.hpp"

namespace pdcert {

/// Closed interval [lo, hi]; endpoints may be infinite.
struct Interval {
  double lo = -kInfinity;
  double hi = kInfinity;

  bool contains(double x) const { return lo <= x && x <= hi; }
  double clamp(double x) const { return x < lo ? lo : (x > hi ? hi : x); }
  Interval intersect(const Interval& other) const {
    return {lo > other.lo ? lo : other.lo, hi < other.hi ? hi : other.hi};
  }
};

/**
 * Separable regularizer g(alpha) = sum_i g_i(alpha_i) with all weights
 * already applied: every value, conjugate and prox is of the lambda-scaled
 * function (g = lambda h  =>  g* = lambda h*(. / lambda)).
 *
 * Each catalog member is a scalar piece of the form
 *
 *     g_i(a) = (q/2) a^2 + c |a| + l_i a     for a in [lo_i, hi_i], +inf otherwise
 *
 *   l1           q = 0,            c = lambda
 *   l2           q = lambda,       c = 0
 *   elastic_net  q = lambda eta,   c = lambda (1 - eta)
 *   svm box      q = 0, c = 0,     l_i = -y_i, domain y_i a in [0, 1]
 *   zero         g = 0
 *
 * which gives closed forms for the conjugate, its subgradient, the prox and
 * the exact coordinate minimizer from one code path.
 */
class SeparableRegularizer {
 public:
  enum class Kind { zero, l1, l2, elastic_net, svm_box };

  static SeparableRegularizer zero();
  static SeparableRegularizer l1(double lambda);
  static SeparableRegularizer l2(double lambda);
  /// lambda (eta/2 a^2 + (1 - eta)|a|), eta in (0, 1]. eta = 0 is rejected; use l1.
  static SeparableRegularizer elastic_net(double lambda, double eta);
  /// g_i(a) = -y_i a subject to y_i a in [0, 1]; labels y in {-1, +1}^n.
  static SeparableRegularizer box_linear_svm(Vector labels);

  Kind kind() const { return kind_; }
  double lambda() const { return lambda_; }
  double eta() const { return eta_; }
  /// Strong convexity constant of every g_i.
  double mu() const { return quadratic_; }
  double quadratic_weight() const { return quadratic_; }
  double abs_weight() const { return abs_; }
  /// Lipschitz constant of g_i*, i.e. the support radius; nullopt if unbounded.
  std::optional<double> conjugate_lipschitz() const;

  /// Coordinate count this regularizer is tied to, if any (svm box only).
  std::optional<std::size_t> fixed_size() const;
  /// Throws std::invalid_argument if this regularizer cannot act on R^n.
  void check_size(std::size_t n) const;

  double linear_weight(std::size_t i) const;
  Interval domain(std::size_t i) const;

  double value(std::size_t i, double a) const;
  double value(const Vector& alpha) const;

  double conjugate(std::size_t i, double x) const;
  /// sum_i g_i*(u_i).
  double conjugate(const Vector& u) const;

  /// Element of d g_i*(x) (equivalently argmax_a x a - g_i(a)) of minimum
  /// absolute value. Returns +-inf when the sup is unbounded in that direction.
  double conjugate_argmax(std::size_t i, double x) const;

  /// argmin_a g_i(a) + (a - v)^2 / (2 t), t > 0.
  double prox(std::size_t i, double v, double t) const;

  /// argmin over a in `box` of  g_i(a) + gradient (a - center) + (curvature/2)(a - center)^2.
  /// curvature >= 0; with curvature = 0 and gradient = 0 this minimizes g_i alone.
  double quadratic_minimizer(std::size_t i, double center, double gradient, double curvature,
                             const Interval& box) const;

 private:
  SeparableRegularizer(Kind kind, double lambda, double eta, double quadratic, double abs, Vector labels);

  Kind kind_;
  double lambda_;
  double eta_;
  double quadratic_;
  double abs_;
  Vector labels_;  // svm box only
};

/**
 * Norm regularizer g(alpha) = lambda * sum_k ||alpha_{G_k}||_2 over a
 * partition {G_k} of [n]. Singleton groups give the L1 norm, one group the
 * L2 norm. The dual norm is max_k ||u_{G_k}||_2.
 */
class NormRegularizer {
 public:
  static NormRegularizer group_lasso(double lambda, const std::vector<std::vector<std::size_t>>& groups);
  /// lambda ||.||_1 on R^n as singleton groups.
  static NormRegularizer l1(double lambda, std::size_t n);

  double lambda() const { return lambda_; }
  std::size_t size() const { return group_of_.size(); }
  std::size_t group_count() const { return group_count_; }
  std::size_t group_of(std::size_t i) const { return group_of_[i]; }
  bool is_l1() const { return group_count_ == group_of_.size(); }

  double norm(const Vector& alpha) const;
  double dual_norm(const Vector& u) const;

  double value(const Vector& alpha) const { return lambda_ * norm(alpha); }
  /// Indicator of the dual-norm ball of radius lambda: 0 inside, +inf outside.
  double conjugate(const Vector& u) const;

  /// Block soft-thresholding: argmin_a g(a) + ||a - v||^2 / (2t).
  Vector prox(const Vector& v, double t) const;

 private:
  NormRegularizer(double lambda, std::vector<std::size_t> group_of, std::size_t group_count);

  std::vector<double> group_norms(const Vector& v) const;

  double lambda_;
  std::vector<std::size_t> group_of_;
  std::size_t group_count_;
};

using Regularizer = std::variant<SeparableRegularizer, NormRegularizer>;

}  // namespace pdcert

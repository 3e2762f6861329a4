#include "pdcert/regularizers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace pdcert {

namespace {

double soft_threshold(double x, double threshold) {
  if (x > threshold) return x - threshold;
  if (x < -threshold) return x + threshold;
  return 0.0;
}

void require_positive_lambda(double lambda, const char* who) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument(std::string(who) + ": lambda must be positive and finite");
  }
}

}  // namespace

SeparableRegularizer::SeparableRegularizer(Kind kind, double lambda, double eta, double quadratic, double abs,
                                           Vector labels)
    : kind_(kind), lambda_(lambda), eta_(eta), quadratic_(quadratic), abs_(abs), labels_(std::move(labels)) {}

SeparableRegularizer SeparableRegularizer::zero() { return {Kind::zero, 0.0, 0.0, 0.0, 0.0, Vector()}; }

SeparableRegularizer SeparableRegularizer::l1(double lambda) {
  require_positive_lambda(lambda, "l1");
  return {Kind::l1, lambda, 0.0, 0.0, lambda, Vector()};
}

SeparableRegularizer SeparableRegularizer::l2(double lambda) {
  require_positive_lambda(lambda, "l2");
  return {Kind::l2, lambda, 1.0, lambda, 0.0, Vector()};
}

SeparableRegularizer SeparableRegularizer::elastic_net(double lambda, double eta) {
  require_positive_lambda(lambda, "elastic_net");
  if (eta == 0.0) throw std::invalid_argument("elastic_net: eta = 0 is the pure L1 case, use l1()");
  if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("elastic_net: eta must lie in (0, 1]");
  return {Kind::elastic_net, lambda, eta, lambda * eta, lambda * (1.0 - eta), Vector()};
}

SeparableRegularizer SeparableRegularizer::box_linear_svm(Vector labels) {
  if (labels.size() == 0) throw std::invalid_argument("box_linear_svm: empty label vector");
  for (Eigen::Index i = 0; i < labels.size(); ++i) {
    if (labels[i] != 1.0 && labels[i] != -1.0) throw std::invalid_argument("box_linear_svm: labels must be -1 or +1");
  }
  return {Kind::svm_box, 1.0, 0.0, 0.0, 0.0, std::move(labels)};
}

std::optional<double> SeparableRegularizer::conjugate_lipschitz() const {
  switch (kind_) {
    case Kind::zero: return 0.0;
    case Kind::svm_box: return 1.0;
    default: return std::nullopt;
  }
}

std::optional<std::size_t> SeparableRegularizer::fixed_size() const {
  if (kind_ == Kind::svm_box) return static_cast<std::size_t>(labels_.size());
  return std::nullopt;
}

void SeparableRegularizer::check_size(std::size_t n) const {
  if (auto size = fixed_size(); size && *size != n) {
    throw std::invalid_argument("regularizer expects " + std::to_string(*size) + " coordinates, problem has " +
                                std::to_string(n));
  }
}

double SeparableRegularizer::linear_weight(std::size_t i) const {
  return kind_ == Kind::svm_box ? -labels_[static_cast<Eigen::Index>(i)] : 0.0;
}

Interval SeparableRegularizer::domain(std::size_t i) const {
  if (kind_ != Kind::svm_box) return {};
  return labels_[static_cast<Eigen::Index>(i)] > 0.0 ? Interval{0.0, 1.0} : Interval{-1.0, 0.0};
}

double SeparableRegularizer::value(std::size_t i, double a) const {
  if (!domain(i).contains(a)) return kInfinity;
  return 0.5 * quadratic_ * a * a + abs_ * std::abs(a) + linear_weight(i) * a;
}

double SeparableRegularizer::value(const Vector& alpha) const {
  check_size(static_cast<std::size_t>(alpha.size()));
  double sum = 0.0;
  for (Eigen::Index i = 0; i < alpha.size(); ++i) sum += value(static_cast<std::size_t>(i), alpha[i]);
  return sum;
}

double SeparableRegularizer::conjugate(std::size_t i, double x) const {
  const Interval dom = domain(i);
  const double y = x - linear_weight(i);
  if (dom.lo == -kInfinity && dom.hi == kInfinity) {
    const double excess = std::abs(y) - abs_;
    if (excess <= 0.0) return 0.0;
    return quadratic_ > 0.0 ? excess * excess / (2.0 * quadratic_) : kInfinity;
  }
  const double a = conjugate_argmax(i, x);
  if (std::isinf(a)) return kInfinity;
  return y * a - 0.5 * quadratic_ * a * a - abs_ * std::abs(a);
}

double SeparableRegularizer::conjugate(const Vector& u) const {
  check_size(static_cast<std::size_t>(u.size()));
  double sum = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) sum += conjugate(static_cast<std::size_t>(i), u[i]);
  return sum;
}

double SeparableRegularizer::conjugate_argmax(std::size_t i, double x) const {
  return quadratic_minimizer(i, 0.0, -x, 0.0, Interval{});
}

double SeparableRegularizer::prox(std::size_t i, double v, double t) const {
  if (!(t > 0.0)) throw std::invalid_argument("prox: step must be positive");
  return quadratic_minimizer(i, v, 0.0, 1.0 / t, Interval{});
}

double SeparableRegularizer::quadratic_minimizer(std::size_t i, double center, double gradient, double curvature,
                                                 const Interval& box) const {
  // Smooth part has derivative (q + Q) a - z; the |a| term soft-thresholds z.
  const double z = curvature * center - gradient - linear_weight(i);
  const double total = quadratic_ + curvature;
  double a = 0.0;
  if (total > 0.0) {
    a = soft_threshold(z, abs_) / total;
  } else if (std::abs(z) > abs_) {
    a = z > 0.0 ? kInfinity : -kInfinity;
  }
  return domain(i).intersect(box).clamp(a);
}

NormRegularizer::NormRegularizer(double lambda, std::vector<std::size_t> group_of, std::size_t group_count)
    : lambda_(lambda), group_of_(std::move(group_of)), group_count_(group_count) {}

NormRegularizer NormRegularizer::group_lasso(double lambda, const std::vector<std::vector<std::size_t>>& groups) {
  require_positive_lambda(lambda, "group_lasso");
  std::size_t n = 0;
  for (const auto& g : groups) {
    if (g.empty()) throw std::invalid_argument("group_lasso: empty group");
    n += g.size();
  }
  constexpr std::size_t kUnassigned = static_cast<std::size_t>(-1);
  std::vector<std::size_t> group_of(n, kUnassigned);
  for (std::size_t k = 0; k < groups.size(); ++k) {
    for (std::size_t i : groups[k]) {
      if (i >= n) throw std::invalid_argument("group_lasso: groups do not partition [n]");
      if (group_of[i] != kUnassigned) {
        throw std::invalid_argument("group_lasso: coordinate " + std::to_string(i) + " appears in overlapping groups");
      }
      group_of[i] = k;
    }
  }
  return NormRegularizer(lambda, std::move(group_of), groups.size());
}

NormRegularizer NormRegularizer::l1(double lambda, std::size_t n) {
  require_positive_lambda(lambda, "l1");
  if (n == 0) throw std::invalid_argument("l1: dimension must be positive");
  std::vector<std::size_t> group_of(n);
  for (std::size_t i = 0; i < n; ++i) group_of[i] = i;
  return NormRegularizer(lambda, std::move(group_of), n);
}

std::vector<double> NormRegularizer::group_norms(const Vector& v) const {
  if (static_cast<std::size_t>(v.size()) != group_of_.size()) {
    throw std::invalid_argument("NormRegularizer: expected vector of length " + std::to_string(group_of_.size()));
  }
  std::vector<double> sq(group_count_, 0.0);
  for (std::size_t i = 0; i < group_of_.size(); ++i) sq[group_of_[i]] += v[static_cast<Eigen::Index>(i)] * v[static_cast<Eigen::Index>(i)];
  for (double& s : sq) s = std::sqrt(s);
  return sq;
}

double NormRegularizer::norm(const Vector& alpha) const {
  double sum = 0.0;
  for (double g : group_norms(alpha)) sum += g;
  return sum;
}

double NormRegularizer::dual_norm(const Vector& u) const {
  double best = 0.0;
  for (double g : group_norms(u)) best = std::max(best, g);
  return best;
}

double NormRegularizer::conjugate(const Vector& u) const { return dual_norm(u) <= lambda_ ? 0.0 : kInfinity; }

Vector NormRegularizer::prox(const Vector& v, double t) const {
  if (!(t > 0.0)) throw std::invalid_argument("prox: step must be positive");
  const std::vector<double> norms = group_norms(v);
  Vector out(v.size());
  for (std::size_t i = 0; i < group_of_.size(); ++i) {
    const double gn = norms[group_of_[i]];
    const double shrink = gn > t * lambda_ ? 1.0 - t * lambda_ / gn : 0.0;
    out[static_cast<Eigen::Index>(i)] = shrink * v[static_cast<Eigen::Index>(i)];
  }
  return out;
}

}  // namespace pdcert

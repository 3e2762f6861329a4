#include "pdcert/certificates.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace pdcert {

namespace {

constexpr double kSupportSlack = 1e-12;

bool conjugate_is_finite(const SeparableRegularizer& reg) {
  return reg.quadratic_weight() > 0.0 || reg.kind() == SeparableRegularizer::Kind::svm_box;
}

double max_abs(const Vector& u) { return u.size() == 0 ? 0.0 : u.cwiseAbs().maxCoeff(); }

const SupportBound& require_bound(const ProblemA& p, const char* who) {
  if (!p.support_bound) throw std::invalid_argument(std::string(who) + ": problem has no support bound");
  return *p.support_bound;
}

}  // namespace

ProblemA::ProblemA(std::shared_ptr<const DataMatrix> matrix_in, SmoothLoss loss_in, Regularizer regularizer_in,
                   std::optional<SupportBound> support_bound_in)
    : matrix(std::move(matrix_in)),
      loss(std::move(loss_in)),
      regularizer(std::move(regularizer_in)),
      support_bound(support_bound_in) {
  if (!matrix) throw std::invalid_argument("ProblemA: null data matrix");
  if (loss.dimension() != matrix->rows()) {
    throw std::invalid_argument("ProblemA: loss dimension " + std::to_string(loss.dimension()) +
                                " does not match matrix rows " + std::to_string(matrix->rows()));
  }
  if (const auto* s = separable()) s->check_size(n());
  if (const auto* g = norm(); g && g->size() != n()) {
    throw std::invalid_argument("ProblemA: norm regularizer size does not match matrix columns");
  }
  if (support_bound) {
    if (!(support_bound->B >= 0.0) || !std::isfinite(support_bound->B)) {
      throw std::invalid_argument("ProblemA: support bound must be finite and >= 0");
    }
    if (support_bound->norm_kind == BallKind::group_ball && !norm()) {
      throw std::invalid_argument("ProblemA: group ball requires a norm regularizer");
    }
  }
}

double ProblemA::lambda() const {
  if (const auto* g = norm()) return g->lambda();
  const auto& s = *separable();
  return s.kind() == SeparableRegularizer::Kind::zero ? 0.0 : s.lambda();
}

double ProblemA::mu() const { return separable() ? separable()->mu() : 0.0; }

bool ProblemA::uses_support_bound() const {
  if (!support_bound) return false;
  if (const auto* s = separable()) return !conjugate_is_finite(*s);
  return true;
}

ProblemA svm_problem(std::shared_ptr<const DataMatrix> examples, Vector labels, double lambda) {
  if (!examples) throw std::invalid_argument("svm_problem: null matrix");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("svm_problem: lambda must be positive");
  const double n = static_cast<double>(examples->cols());
  const std::size_t d = examples->rows();
  return ProblemA(std::move(examples), SmoothLoss::squared_norm(d, 1.0 / (lambda * n)),
                  SeparableRegularizer::box_linear_svm(std::move(labels)));
}

double regularizer_value(const Regularizer& reg, const Vector& alpha) {
  return std::visit([&](const auto& r) { return r.value(alpha); }, reg);
}

Vector primal_map(const ProblemA& p, const Vector& alpha) { return p.loss.gradient(matvec(*p.matrix, alpha)); }

double objective(const ProblemA& p, const Vector& alpha) {
  return p.loss.value(matvec(*p.matrix, alpha)) + regularizer_value(p.regularizer, alpha);
}

double bounded_conjugate(const ProblemA& p, const Vector& u) {
  if (!p.uses_support_bound()) return std::visit([&](const auto& r) { return r.conjugate(u); }, p.regularizer);
  const SupportBound& bound = *p.support_bound;
  if (const auto* g = p.norm()) {
    if (bound.norm_kind == BallKind::coordinate_interval) {
      if (!g->is_l1()) throw std::invalid_argument("coordinate-wise bound requires singleton groups");
      double sum = 0.0;
      for (Eigen::Index i = 0; i < u.size(); ++i) sum += modified_conjugate_scalar_l1(u[i], g->lambda(), bound.B);
      return sum;
    }
    if (bound.norm_kind == BallKind::l1_ball && !g->is_l1()) {
      throw std::invalid_argument("l1 ball bound requires singleton groups");
    }
    return modified_conjugate_norm(u, *g, bound.B);
  }
  const auto& s = *p.separable();
  s.check_size(static_cast<std::size_t>(u.size()));
  if (bound.norm_kind == BallKind::l1_ball) {
    // sup over ||a||_1 <= B of <u, a> - c ||a||_1 is attained at a vertex.
    const double excess = max_abs(u) - s.abs_weight();
    return excess > 0.0 ? bound.B * excess : 0.0;
  }
  double sum = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) sum += restricted_conjugate(s, static_cast<std::size_t>(i), u[i], bound.B);
  return sum;
}

bool within_support(const ProblemA& p, const Vector& alpha) {
  if (!p.uses_support_bound()) return true;
  const SupportBound& bound = *p.support_bound;
  const double limit = bound.B * (1.0 + kSupportSlack);
  switch (bound.norm_kind) {
    case BallKind::coordinate_interval: return max_abs(alpha) <= limit;
    case BallKind::l1_ball: return alpha.cwiseAbs().sum() <= limit;
    case BallKind::group_ball: return p.norm()->norm(alpha) <= limit;
  }
  return true;
}

GapEvaluation evaluate_gap(const ProblemA& p, const Vector& alpha, const Vector& v) {
  const Vector w = p.loss.gradient(v);
  const double g = regularizer_value(p.regularizer, alpha);
  GapEvaluation out;
  out.objective = p.loss.value(v) + g;
  if (!within_support(p, alpha) || std::isinf(g)) {
    out.gap = kInfinity;
    return out;
  }
  const Vector u = -transpose_matvec(*p.matrix, w);
  out.gap = w.dot(v) + g + bounded_conjugate(p, u);
  return out;
}

double duality_gap_general(const ProblemA& p, const Vector& alpha) {
  return evaluate_gap(p, alpha, matvec(*p.matrix, alpha)).gap;
}

double lasso_gap(const ProblemA& p, const Vector& alpha) {
  double lambda = 0.0;
  if (const auto* s = p.separable(); s && s->kind() == SeparableRegularizer::Kind::l1) {
    lambda = s->lambda();
  } else if (const auto* g = p.norm(); g && g->is_l1()) {
    lambda = g->lambda();
  } else {
    throw std::invalid_argument("lasso_gap: regularizer is not L1");
  }
  const double B = require_bound(p, "lasso_gap").B;
  if (!within_support(p, alpha)) return kInfinity;
  const Vector v = matvec(*p.matrix, alpha);
  const Vector w = p.loss.gradient(v);
  const double excess = max_abs(transpose_matvec(*p.matrix, w)) - lambda;
  return w.dot(v) + (excess > 0.0 ? B * excess : 0.0) + lambda * alpha.lpNorm<1>();
}

double elastic_net_gap(const ProblemA& p, const Vector& alpha) {
  const auto* s = p.separable();
  if (!s || s->kind() != SeparableRegularizer::Kind::elastic_net) {
    throw std::invalid_argument("elastic_net_gap: regularizer is not elastic net (for eta = 0 use lasso_gap)");
  }
  const double lambda = s->lambda();
  const double eta = s->eta();
  const Vector v = matvec(*p.matrix, alpha);
  const Vector w = p.loss.gradient(v);
  const Vector Atw = transpose_matvec(*p.matrix, w);
  double conj = 0.0;
  for (Eigen::Index i = 0; i < Atw.size(); ++i) {
    const double excess = std::abs(Atw[i]) - (1.0 - eta) * lambda;
    if (excess > 0.0) conj += excess * excess;
  }
  conj /= 2.0 * eta * lambda;
  const double reg = lambda * (0.5 * eta * alpha.squaredNorm() + (1.0 - eta) * alpha.lpNorm<1>());
  return w.dot(v) + conj + reg;
}

double svm_gap(const ProblemA& p, const Vector& alpha) {
  const auto* s = p.separable();
  if (!s || s->kind() != SeparableRegularizer::Kind::svm_box) {
    throw std::invalid_argument("svm_gap: regularizer is not the svm box");
  }
  if (p.loss.kind() != SmoothLoss::Kind::squared_norm) {
    throw std::invalid_argument("svm_gap: loss must be (lambda/2)||A alpha||^2");
  }
  for (Eigen::Index i = 0; i < alpha.size(); ++i) {
    if (!s->domain(static_cast<std::size_t>(i)).contains(alpha[i])) return kInfinity;
  }
  const Vector v = matvec(*p.matrix, alpha);
  const Vector w = p.loss.scale() * v;
  const Vector Atw = transpose_matvec(*p.matrix, w);
  double gap = w.dot(v);
  for (Eigen::Index i = 0; i < alpha.size(); ++i) {
    const double y = -s->linear_weight(static_cast<std::size_t>(i));
    gap += -y * alpha[i] + std::max(0.0, 1.0 - y * Atw[i]);
  }
  return gap;
}

Vector dual_subgradient(const ProblemA& p, const Vector& alpha) {
  const Vector x = -transpose_matvec(*p.matrix, primal_map(p, alpha));
  Vector u = Vector::Zero(x.size());
  const auto* s = p.separable();
  if (!s) throw std::invalid_argument("dual_subgradient: separable regularizer required");
  if (!p.uses_support_bound()) {
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      u[i] = s->conjugate_argmax(static_cast<std::size_t>(i), x[i]);
      if (std::isinf(u[i])) throw std::domain_error("dual_subgradient: conjugate is unbounded at -A^T w");
    }
    return u;
  }
  const SupportBound& bound = *p.support_bound;
  if (bound.norm_kind == BallKind::l1_ball) {
    Eigen::Index k = 0;
    const double top = x.cwiseAbs().maxCoeff(&k);
    if (top > s->abs_weight()) u[k] = x[k] > 0.0 ? bound.B : -bound.B;
    return u;
  }
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    u[i] = restricted_conjugate_argmax(*s, static_cast<std::size_t>(i), x[i], bound.B);
  }
  return u;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0.0 ? "inf" : "-inf";
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), x);
  return std::string(buffer, result.ptr);
}

std::string trace_csv(const std::vector<CertificateRecord>& trace) {
  std::string out = std::string(kTraceCsvHeader) + "\n";
  for (const auto& r : trace) {
    out += std::to_string(r.step) + "," + format_double(r.epoch) + "," + format_double(r.objective) + "," +
           format_double(r.gap) + "," + format_double(r.B) + "," + format_double(r.seconds) + "\n";
  }
  return out;
}

nlohmann::json trace_json(const std::vector<CertificateRecord>& trace) {
  auto finite_or_null = [](double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); };
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : trace) {
    out.push_back({{"step", r.step},
                   {"epoch", r.epoch},
                   {"objective", finite_or_null(r.objective)},
                   {"gap", finite_or_null(r.gap)},
                   {"B", finite_or_null(r.B)},
                   {"seconds", r.seconds}});
  }
  return out;
}

}  // namespace pdcert

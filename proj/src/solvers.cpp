#include "pdcert/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pdcert/random.hpp"

namespace pdcert {

namespace {

constexpr int kMaxInnerIterations = 100;
constexpr int kMaxBracketDoublings = 200;
constexpr double kRoundingFloor = -1e-9;

const SeparableRegularizer& require_separable(const ProblemA& p, const char* who) {
  const auto* reg = p.separable();
  if (!reg) throw std::invalid_argument(std::string(who) + ": separable regularizer required");
  return *reg;
}

// Column-restricted 1-D objective: only rows touched by column i change.
struct CoordinateObjective {
  const ProblemA& p;
  const SeparableRegularizer& reg;
  SparseColumn col;
  const Vector& v;
  std::size_t i;
  double alpha_i;

  double z(std::size_t k, double a) const { return v[static_cast<Eigen::Index>(col.indices[k])] + (a - alpha_i) * col.values[k]; }

  double value(double a) const {
    double s = reg.value(i, a);
    for (std::size_t k = 0; k < col.nnz(); ++k) s += p.loss.term_value(col.indices[k], z(k, a));
    return s;
  }
  // Derivative of the smooth part, including the quadratic and linear pieces of g_i.
  double derivative(double a) const {
    double s = reg.quadratic_weight() * a + reg.linear_weight(i);
    for (std::size_t k = 0; k < col.nnz(); ++k) s += col.values[k] * p.loss.term_derivative(col.indices[k], z(k, a));
    return s;
  }
  double curvature(double a) const {
    double s = reg.quadratic_weight();
    for (std::size_t k = 0; k < col.nnz(); ++k) {
      s += col.values[k] * col.values[k] * p.loss.term_curvature(col.indices[k], z(k, a));
    }
    return s;
  }
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// Shared checkpoint logic: optional level-set refresh, then gap evaluation.
class Checkpointer {
 public:
  Checkpointer(ProblemA& p, const SolverConfig& cfg) : p_(p), cfg_(cfg) {}

  CertificateRecord record(std::size_t step, const Vector& alpha, const Vector& v) {
    if (cfg_.refresh_bound && p_.support_bound && p_.lambda() > 0.0) {
      const double D = p_.loss.value(v) + regularizer_value(p_.regularizer, alpha);
      if (std::isfinite(D) && D >= 0.0 && D / p_.lambda() < p_.support_bound->B) {
        p_.support_bound = dynamic_bound(D, p_.lambda(), p_.support_bound->norm_kind);
      }
    }
    const GapEvaluation eval = evaluate_gap(p_, alpha, v);
    CertificateRecord r;
    r.step = step;
    r.epoch = static_cast<double>(step) / static_cast<double>(p_.n());
    r.objective = eval.objective;
    r.gap = eval.gap < 0.0 && eval.gap >= kRoundingFloor ? 0.0 : eval.gap;
    r.B = p_.uses_support_bound() ? p_.support_bound->B : kInfinity;
    r.seconds = cfg_.record_time ? clock_.seconds() : 0.0;
    return r;
  }

  bool converged(const CertificateRecord& r) const { return r.gap <= cfg_.gap_tolerance; }

 private:
  ProblemA& p_;
  const SolverConfig& cfg_;
  Stopwatch clock_;
};

void validate(const SolverConfig& cfg, std::size_t total_steps) {
  if (!(cfg.gap_tolerance > 0.0)) throw std::invalid_argument("solver: gap_tolerance must be positive");
  if (!(cfg.inner_tol > 0.0)) throw std::invalid_argument("solver: inner_tol must be positive");
  if (cfg.averaging_start && *cfg.averaging_start >= total_steps) {
    throw std::invalid_argument("solver: averaging start T0 must be below the step budget");
  }
}

Interval coordinate_box(const ProblemA& p) {
  if (p.uses_support_bound() && p.support_bound->norm_kind == BallKind::coordinate_interval) {
    return {-p.support_bound->B, p.support_bound->B};
  }
  return {};
}

}  // namespace

SeparableRegularizer as_separable(const Regularizer& reg) {
  if (const auto* s = std::get_if<SeparableRegularizer>(&reg)) return *s;
  const auto& g = std::get<NormRegularizer>(reg);
  if (!g.is_l1()) {
    throw std::invalid_argument("coordinate descent needs a separable regularizer; use prox_grad for group lasso");
  }
  return SeparableRegularizer::l1(g.lambda());
}

double coordinate_min_quadratic(const ProblemA& p, std::size_t i, const Vector& v, double alpha_i,
                                const Interval& box) {
  if (!p.loss.is_quadratic()) throw std::invalid_argument("coordinate_min_quadratic: loss is not quadratic");
  const auto& reg = require_separable(p, "coordinate_min_quadratic");
  const SparseColumn col = p.matrix->column(i);
  double partial = 0.0;
  for (std::size_t k = 0; k < col.nnz(); ++k) {
    partial += col.values[k] * p.loss.term_derivative(col.indices[k], v[static_cast<Eigen::Index>(col.indices[k])]);
  }
  const double curvature = p.loss.term_curvature(0, 0.0) * col.squared_norm();
  return reg.quadratic_minimizer(i, alpha_i, partial, curvature, box) - alpha_i;
}

CoordinateStep coordinate_min_smooth(const ProblemA& p, std::size_t i, const Vector& v, double alpha_i,
                                     double inner_tol, const Interval& box) {
  const auto& reg = require_separable(p, "coordinate_min_smooth");
  const CoordinateObjective obj{p, reg, p.matrix->column(i), v, i, alpha_i};
  const double c = reg.abs_weight();

  const double start_value = obj.value(alpha_i);
  auto finish = [&](double a, bool exact) {
    // An inexact search may end worse than where it started; keep the old point then.
    if (!exact && !(obj.value(a) <= start_value)) return CoordinateStep{0.0, false};
    return CoordinateStep{a - alpha_i, exact};
  };

  if (obj.col.nnz() == 0) return finish(reg.quadratic_minimizer(i, alpha_i, 0.0, 0.0, box), true);

  const Interval range = reg.domain(i).intersect(box);
  double lo = range.lo;
  double hi = range.hi;
  double sign = 0.0;  // side of the |a| kink being searched
  if (c > 0.0) {
    if (lo < 0.0 && hi > 0.0) {
      const double d0 = obj.derivative(0.0);
      if (d0 + c < 0.0) {
        lo = 0.0;
        sign = 1.0;
      } else if (d0 - c > 0.0) {
        hi = 0.0;
        sign = -1.0;
      } else {
        return finish(0.0, true);
      }
    } else {
      sign = hi <= 0.0 ? -1.0 : 1.0;
    }
  }
  auto deriv = [&](double a) { return obj.derivative(a) + c * sign; };

  if (std::isfinite(lo) && deriv(lo) >= 0.0) return finish(lo, true);
  if (std::isfinite(hi) && deriv(hi) <= 0.0) return finish(hi, true);

  double a = std::clamp(alpha_i, lo, hi);
  double a_lo = lo;
  double a_hi = hi;
  const double d_start = deriv(a);
  if (d_start == 0.0) return finish(a, true);
  (d_start < 0.0 ? a_lo : a_hi) = a;

  double step = std::max(1.0, std::abs(a));
  for (int k = 0; !std::isfinite(a_hi); ++k) {
    if (k == kMaxBracketDoublings) return finish(a_lo, false);
    const double cand = a_lo + step;
    (deriv(cand) >= 0.0 ? a_hi : a_lo) = cand;
    step *= 2.0;
  }
  for (int k = 0; !std::isfinite(a_lo); ++k) {
    if (k == kMaxBracketDoublings) return finish(a_hi, false);
    const double cand = a_hi - step;
    (deriv(cand) <= 0.0 ? a_lo : a_hi) = cand;
    step *= 2.0;
  }

  a = std::clamp(a, a_lo, a_hi);
  for (int iter = 0; iter < kMaxInnerIterations; ++iter) {
    const double d = deriv(a);
    if (std::abs(d) <= inner_tol) return finish(a, true);
    (d < 0.0 ? a_lo : a_hi) = a;
    if (a_hi - a_lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(a))) {
      return finish(a, true);
    }
    const double h = obj.curvature(a);
    double next = h > 0.0 ? a - d / h : 0.5 * (a_lo + a_hi);
    if (!(next > a_lo && next < a_hi)) next = 0.5 * (a_lo + a_hi);
    a = next;
  }
  return finish(a, false);
}

Vector averaged_iterate(const IterateHistory& history, std::size_t T0, std::size_t T) {
  if (T0 >= T) throw std::invalid_argument("averaged_iterate: need T0 < T");
  const auto n = history.initial.size();
  Vector current = history.initial;
  std::vector<std::size_t> since(static_cast<std::size_t>(n), 0);
  Vector sum = Vector::Zero(n);
  // alpha_i held `value` for t in [from, to); add its overlap with [T0, T).
  auto accumulate = [&](Eigen::Index i, std::size_t from, std::size_t to) {
    const std::size_t a = std::max(from, T0);
    const std::size_t b = std::min(to, T);
    if (a < b) sum[i] += current[i] * static_cast<double>(b - a);
  };
  for (const IterateDelta& delta : history.deltas) {
    if (delta.step >= T) break;
    const auto i = static_cast<Eigen::Index>(delta.index);
    accumulate(i, since[delta.index], delta.step);
    current[i] = delta.value;
    since[delta.index] = delta.step;
  }
  for (Eigen::Index i = 0; i < n; ++i) accumulate(i, since[static_cast<std::size_t>(i)], T);
  return sum / static_cast<double>(T - T0);
}

SolverResult coordinate_descent(const ProblemA& p_in, const SolverConfig& cfg, const StepObserver& observe) {
  std::optional<SupportBound> bound = p_in.support_bound;
  // Singleton groups: the group ball is the L1 ball.
  if (bound && bound->norm_kind == BallKind::group_ball) bound->norm_kind = BallKind::l1_ball;
  ProblemA p(p_in.matrix, p_in.loss, as_separable(p_in.regularizer), bound);
  const SeparableRegularizer& reg = *p.separable();
  const DataMatrix& A = *p.matrix;
  const std::size_t n = p.n();
  const std::size_t total_steps = cfg.max_steps.value_or(cfg.max_epochs * n);
  validate(cfg, total_steps);

  Vector alpha = Vector::Zero(static_cast<Eigen::Index>(n));
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < n; ++i) {
    if (A.column(i).nnz() > 0) {
      active.push_back(i);
    } else {
      alpha[static_cast<Eigen::Index>(i)] = reg.quadratic_minimizer(i, 0.0, 0.0, 0.0, coordinate_box(p));
    }
  }
  Vector v = Vector::Zero(static_cast<Eigen::Index>(p.d()));

  SolverResult result;
  if (cfg.averaging_start) result.history = IterateHistory{alpha, {}};

  Checkpointer checkpoints(p, cfg);
  result.trace.push_back(checkpoints.record(0, alpha, v));
  result.converged = checkpoints.converged(result.trace.back());

  const std::size_t period = cfg.checkpoint_every * n;
  SplitMix64 rng(cfg.seed);
  const bool quadratic = p.loss.is_quadratic();
  Interval box = coordinate_box(p);

  std::size_t step = 0;
  bool stop = (result.converged && cfg.stop_on_tolerance) || active.empty();
  while (!stop && step < total_steps) {
    const std::size_t i = cfg.cyclic ? active[step % active.size()] : active[rng.below(active.size())];
    const auto ii = static_cast<Eigen::Index>(i);
    const double old = alpha[ii];
    double delta = 0.0;
    if (quadratic) {
      delta = coordinate_min_quadratic(p, i, v, old, box);
    } else {
      const CoordinateStep s = coordinate_min_smooth(p, i, v, old, cfg.inner_tol, box);
      delta = s.delta;
      if (!s.exact) ++result.inexact_steps;
    }
    ++step;
    if (delta != 0.0) {
      alpha[ii] = old + delta;
      axpy_column(A, i, delta, v);
      if (result.history) result.history->deltas.push_back({step, i, alpha[ii]});
    }
    if (observe) observe(step, alpha);

    const bool last = step == total_steps;
    if ((period > 0 && step % period == 0) || last) {
      v = matvec(A, alpha);
      result.trace.push_back(checkpoints.record(step, alpha, v));
      result.converged = checkpoints.converged(result.trace.back());
      if (result.converged && cfg.stop_on_tolerance) stop = true;
      box = coordinate_box(p);
    }
  }
  if (result.trace.back().step != step) {
    v = matvec(A, alpha);
    result.trace.push_back(checkpoints.record(step, alpha, v));
    result.converged = checkpoints.converged(result.trace.back());
  }

  result.steps_taken = step;
  result.final_alpha = alpha;
  if (cfg.averaging_start && *cfg.averaging_start < step) {
    result.averaged_alpha = averaged_iterate(*result.history, *cfg.averaging_start, step);
  }
  return result;
}

SolverResult prox_gradient(const ProblemA& p_in, const SolverConfig& cfg, const StepObserver& observe) {
  ProblemA p = p_in;
  const DataMatrix& A = *p.matrix;
  const std::size_t n = p.n();
  const std::size_t iterations = cfg.max_steps ? (*cfg.max_steps + n - 1) / n : cfg.max_epochs;
  validate(cfg, iterations * n);

  const double sigma = matrix_constants(A).sigma;
  if (!(sigma > 0.0)) throw std::invalid_argument("prox_gradient: data matrix is zero");
  const double t = p.loss.beta() / sigma;

  auto prox = [&](const Vector& z) -> Vector {
    if (const auto* g = p.norm()) return g->prox(z, t);
    const auto& reg = *p.separable();
    Vector out(z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) out[i] = reg.prox(static_cast<std::size_t>(i), z[i], t);
    return out;
  };

  Vector alpha = Vector::Zero(static_cast<Eigen::Index>(n));
  Vector v = Vector::Zero(static_cast<Eigen::Index>(p.d()));
  SolverResult result;
  Checkpointer checkpoints(p, cfg);
  result.trace.push_back(checkpoints.record(0, alpha, v));
  result.converged = checkpoints.converged(result.trace.back());

  std::size_t it = 0;
  bool stop = result.converged && cfg.stop_on_tolerance;
  while (!stop && it < iterations) {
    const Vector grad = transpose_matvec(A, p.loss.gradient(v));
    alpha = prox(alpha - t * grad);
    v = matvec(A, alpha);
    ++it;
    if (observe) observe(it * n, alpha);
    if ((cfg.checkpoint_every > 0 && it % cfg.checkpoint_every == 0) || it == iterations) {
      result.trace.push_back(checkpoints.record(it * n, alpha, v));
      result.converged = checkpoints.converged(result.trace.back());
      if (result.converged && cfg.stop_on_tolerance) stop = true;
    }
  }
  if (result.trace.back().step != it * n) {
    result.trace.push_back(checkpoints.record(it * n, alpha, v));
    result.converged = checkpoints.converged(result.trace.back());
  }
  result.steps_taken = it * n;
  result.final_alpha = alpha;
  return result;
}

SolverResult solve(const ProblemA& p, const SolverConfig& cfg, const StepObserver& observe) {
  return cfg.solver_kind == SolverKind::cd ? coordinate_descent(p, cfg, observe) : prox_gradient(p, cfg, observe);
}

}  // namespace pdcert

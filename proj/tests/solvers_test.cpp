#include <gtest/gtest.h>

#include <cmath>

#include "pdcert/solvers.hpp"
#include "test_util.hpp"

namespace pdcert {
namespace {

using namespace pdcert::testing;

SolverConfig quiet(std::size_t epochs, double tol = 1e-10) {
  SolverConfig cfg;
  cfg.max_epochs = epochs;
  cfg.gap_tolerance = tol;
  cfg.record_time = false;
  return cfg;
}

// Exact 1-D objective along coordinate i: D(alpha + t e_i).
double along(const ProblemA& p, const Vector& alpha, std::size_t i, double t) {
  Vector a = alpha;
  a[static_cast<Eigen::Index>(i)] += t;
  return objective(p, a);
}

TEST(CoordinateDescent, ScalarProblemConvergesInOneStep) {
  Eigen::MatrixXd X(1, 1);
  X << 2.0;
  Vector b(1);
  b << 3.0;
  const ProblemA p(shared(DataMatrix::from_dense(X)), SmoothLoss::least_squares(b), SeparableRegularizer::l2(1.0));
  SolverConfig cfg = quiet(10);
  cfg.max_steps = 1;
  const SolverResult r = coordinate_descent(p, cfg);
  EXPECT_NEAR(r.final_alpha[0], 6.0 / 5.0, 1e-15);
  EXPECT_LE(r.trace.back().gap, 1e-14);
}

TEST(CoordinateDescent, OriginStaysWhenOptimal) {
  auto A = shared(random_matrix(5, 8, 1));
  const Vector b = random_vector(5, 2);
  const double lambda = 1.5 * transpose_matvec(*A, b).cwiseAbs().maxCoeff();
  SmoothLoss loss = SmoothLoss::least_squares(b);
  const ProblemA p(A, loss, SeparableRegularizer::l1(lambda), safe_bound(loss, lambda));
  const SolverResult r = coordinate_descent(p, quiet(5));
  EXPECT_TRUE(r.final_alpha.isZero(0.0));
  EXPECT_EQ(r.trace.back().gap, 0.0);
  EXPECT_TRUE(r.converged);
}

TEST(CoordinateDescent, LassoMatchesReferenceWithMonotoneObjective) {
  const ProblemA p = lasso_problem(10, 20, 3);
  const Reference ref = reference_solve(p);
  SolverConfig cfg = quiet(5000, 1e-9);
  cfg.seed = 7;
  const SolverResult r = coordinate_descent(p, cfg);
  EXPECT_TRUE(r.converged);
  EXPECT_LE(objective(p, r.final_alpha) - ref.objective, 1e-8);
  for (std::size_t k = 1; k < r.trace.size(); ++k) {
    EXPECT_LE(r.trace[k].objective, r.trace[k - 1].objective + 1e-12);
    EXPECT_GE(r.trace[k].gap, r.trace[k].objective - ref.objective - 1e-9);
  }
}

TEST(CoordinateDescent, ConvergesOnEveryCatalogProblem) {
  for (const ProblemA& p : {elastic_net_problem(8, 15, 4), ridge_problem(8, 15, 5), svm_problem(6, 15, 6, 0.1),
                            logistic_l1_problem(12, 8, 7)}) {
    const SolverResult r = coordinate_descent(p, quiet(20000, 1e-8));
    EXPECT_TRUE(r.converged);
    EXPECT_LE(r.trace.back().gap, 1e-8);
  }
}

TEST(CoordinateDescent, DeterministicForFixedSeed) {
  const ProblemA p = lasso_problem(6, 10, 8);
  SolverConfig cfg = quiet(30);
  cfg.seed = 99;
  const SolverResult a = coordinate_descent(p, cfg);
  const SolverResult b = coordinate_descent(p, cfg);
  EXPECT_EQ(a.final_alpha, b.final_alpha);
  EXPECT_EQ(trace_csv(a.trace), trace_csv(b.trace));
  cfg.seed = 100;
  EXPECT_NE(coordinate_descent(p, cfg).final_alpha, a.final_alpha);
}

TEST(CoordinateDescent, SafeBoundDoesNotChangeIterates) {
  const ProblemA bounded = lasso_problem(10, 20, 9);
  const ProblemA plain(bounded.matrix, bounded.loss, bounded.regularizer);
  SolverConfig cfg = quiet(100);
  cfg.stop_on_tolerance = false;
  cfg.seed = 5;
  std::vector<Vector> seen_bounded, seen_plain;
  const SolverResult a = coordinate_descent(bounded, cfg, [&](std::size_t, const Vector& x) { seen_bounded.push_back(x); });
  const SolverResult b = coordinate_descent(plain, cfg, [&](std::size_t, const Vector& x) { seen_plain.push_back(x); });
  ASSERT_EQ(seen_bounded.size(), 2000u);
  EXPECT_EQ(seen_bounded, seen_plain);
  EXPECT_TRUE(std::isfinite(a.trace.back().gap));
  EXPECT_EQ(b.trace.back().gap, kInfinity);
}

TEST(CoordinateDescent, IteratesStayInsideSafeBall) {
  const ProblemA p = lasso_problem(8, 16, 10, 0.05);
  const double f0 = p.loss.value(Vector::Zero(8));
  const double lambda = p.lambda();
  SolverConfig cfg = quiet(50);
  cfg.stop_on_tolerance = false;
  coordinate_descent(p, cfg, [&](std::size_t, const Vector& a) { EXPECT_LE(lambda * a.lpNorm<1>(), f0 + 1e-9); });
}

TEST(CoordinateDescent, SvmIteratesStayFeasible) {
  const ProblemA p = svm_problem(5, 30, 11, 1.0 / 30);
  SolverConfig cfg = quiet(50);
  cfg.stop_on_tolerance = false;
  coordinate_descent(p, cfg, [&](std::size_t, const Vector& a) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      const double ya = -p.separable()->linear_weight(static_cast<std::size_t>(i)) * a[i];
      EXPECT_GE(ya, 0.0);
      EXPECT_LE(ya, 1.0);
    }
  });
}

TEST(CoordinateDescent, LevelSetRefreshShrinksBound) {
  const ProblemA p = lasso_problem(10, 20, 12);
  SolverConfig cfg = quiet(50, 1e-12);
  cfg.refresh_bound = true;
  cfg.stop_on_tolerance = false;
  const SolverResult r = coordinate_descent(p, cfg);
  EXPECT_LT(r.trace.back().B, r.trace.front().B);
  for (std::size_t k = 1; k < r.trace.size(); ++k) EXPECT_LE(r.trace[k].B, r.trace[k - 1].B);
  EXPECT_NEAR(r.trace.back().B, r.trace.back().objective / p.lambda(), 1e-12 * r.trace.back().B);
}

TEST(CoordinateDescent, ZeroColumnsAreFixed) {
  std::vector<std::vector<Entry>> cols = {{{0, 1.0}}, {}, {{1, 2.0}}};
  auto A = shared(DataMatrix(2, std::move(cols)));
  Vector b(2);
  b << 1.0, 1.0;
  const ProblemA p(A, SmoothLoss::least_squares(b), SeparableRegularizer::l2(0.5));
  const SolverResult r = coordinate_descent(p, quiet(200));
  EXPECT_EQ(r.final_alpha[1], 0.0);
  EXPECT_TRUE(r.converged);
}

TEST(CoordinateDescent, GroupLassoRejectedButProxGradWorks) {
  auto A = shared(random_matrix(6, 4, 13));
  const Vector b = random_vector(6, 14);
  SmoothLoss loss = SmoothLoss::least_squares(b);
  const double lambda = 0.3;
  const ProblemA p(A, loss, NormRegularizer::group_lasso(lambda, {{0, 1}, {2, 3}}),
                   safe_bound(loss, lambda, BallKind::group_ball));
  EXPECT_THROW(coordinate_descent(p, quiet(10)), std::invalid_argument);
  const SolverResult r = prox_gradient(p, quiet(20000, 1e-8));
  EXPECT_TRUE(r.converged);
}

TEST(CoordinateDescent, SingletonGroupsBehaveLikeL1) {
  const ProblemA sep = lasso_problem(6, 8, 15);
  const ProblemA norm(sep.matrix, sep.loss, NormRegularizer::l1(sep.lambda(), 8), sep.support_bound);
  SolverConfig cfg = quiet(20);
  cfg.stop_on_tolerance = false;
  EXPECT_EQ(coordinate_descent(sep, cfg).final_alpha, coordinate_descent(norm, cfg).final_alpha);
}

TEST(CoordinateDescent, AveragedIterateMatchesObservedMean) {
  const ProblemA p = svm_problem(4, 10, 16, 0.1);
  SolverConfig cfg = quiet(5);
  cfg.stop_on_tolerance = false;
  cfg.averaging_start = 20;
  Vector sum = Vector::Zero(10);
  const SolverResult r = coordinate_descent(p, cfg, [&](std::size_t step, const Vector& a) {
    if (step >= 20 && step < 50) sum += a;
  });
  // The mean covers alpha(20..49); the observer saw exactly those states.
  ASSERT_TRUE(r.averaged_alpha.has_value());
  EXPECT_LE((*r.averaged_alpha - sum / 30.0).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(CoordinateMinQuadratic, NewtonStepWithoutRegularizer) {
  const ProblemA p(shared(random_matrix(5, 4, 17)), SmoothLoss::least_squares(random_vector(5, 18)),
                   SeparableRegularizer::zero());
  const Vector alpha = random_vector(4, 19);
  const Vector v = matvec(*p.matrix, alpha);
  const Vector grad = transpose_matvec(*p.matrix, v - p.loss.data());
  for (std::size_t i = 0; i < 4; ++i) {
    double norm2 = 0.0;
    for (double x : p.matrix->column(i).values) norm2 += x * x;
    EXPECT_NEAR(coordinate_min_quadratic(p, i, v, alpha[static_cast<Eigen::Index>(i)]),
                -grad[static_cast<Eigen::Index>(i)] / norm2, 1e-12);
  }
}

TEST(CoordinateMinQuadratic, ZeroAtOptimum) {
  const ProblemA p = lasso_problem(5, 6, 20, 2.0);  // lambda above ||A^T b||_inf
  const Vector v = Vector::Zero(5);
  for (std::size_t i = 0; i < 6; ++i) EXPECT_EQ(coordinate_min_quadratic(p, i, v, 0.0), 0.0);
}

TEST(CoordinateMinQuadratic, MatchesGoldenSection) {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const ProblemA p = seed % 2 == 0 ? lasso_problem(4, 5, 100 + seed) : elastic_net_problem(4, 5, 100 + seed, 0.4);
    const Vector alpha = random_vector(5, seed, 0.5);
    const Vector v = matvec(*p.matrix, alpha);
    for (std::size_t i = 0; i < 5; ++i, ++checked) {
      const double delta = coordinate_min_quadratic(p, i, v, alpha[static_cast<Eigen::Index>(i)]);
      const double best = golden_section([&](double t) { return along(p, alpha, i, t); }, -20.0, 20.0);
      EXPECT_LE(along(p, alpha, i, delta), best + 1e-10);
    }
  }
  EXPECT_EQ(checked, 200);
}

TEST(CoordinateMinSmooth, AgreesWithQuadraticStep) {
  const ProblemA p = elastic_net_problem(6, 8, 21, 0.3);
  const Vector alpha = random_vector(8, 22, 0.3);
  const Vector v = matvec(*p.matrix, alpha);
  for (std::size_t i = 0; i < 8; ++i) {
    const double a = alpha[static_cast<Eigen::Index>(i)];
    const CoordinateStep s = coordinate_min_smooth(p, i, v, a, 1e-13);
    EXPECT_NEAR(s.delta, coordinate_min_quadratic(p, i, v, a), 1e-9);
  }
}

TEST(CoordinateMinSmooth, LogisticMatchesGoldenSection) {
  const ProblemA p = logistic_l1_problem(10, 6, 23, 0.01);
  const double B = p.support_bound->B;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Vector alpha = random_vector(6, seed, 0.5);
    const Vector v = matvec(*p.matrix, alpha);
    for (std::size_t i = 0; i < 6; ++i) {
      const double a = alpha[static_cast<Eigen::Index>(i)];
      const CoordinateStep s = coordinate_min_smooth(p, i, v, a, 1e-12, {-B, B});
      const double best = golden_section([&](double t) { return along(p, alpha, i, t); }, -B - a, B - a);
      EXPECT_LE(along(p, alpha, i, s.delta), best + 1e-8);
    }
  }
}

TEST(CoordinateMinSmooth, StaysPutAtCoordinateOptimum) {
  const ProblemA p = logistic_l1_problem(10, 6, 24, 10.0);  // large lambda: origin optimal
  const Vector v = Vector::Zero(10);
  for (std::size_t i = 0; i < 6; ++i) EXPECT_EQ(coordinate_min_smooth(p, i, v, 0.0, 1e-12).delta, 0.0);
}

TEST(ProxGradient, FirstIterationIsSoftThreshold) {
  const ProblemA p = lasso_problem(6, 9, 25);
  SolverConfig cfg = quiet(1);
  cfg.stop_on_tolerance = false;
  const SolverResult r = prox_gradient(p, cfg);
  const double t = p.loss.beta() / matrix_constants(*p.matrix).sigma;
  const Vector z = t * transpose_matvec(*p.matrix, p.loss.data());
  for (Eigen::Index i = 0; i < 9; ++i) {
    const double expected = std::copysign(std::max(0.0, std::abs(z[i]) - t * p.lambda()), z[i]);
    EXPECT_NEAR(r.final_alpha[i], expected, 1e-9 * (1.0 + std::abs(expected)));
  }
  EXPECT_EQ(r.steps_taken, 9u);
}

TEST(ProxGradient, OptimumIsFixedPointAndGapShrinks) {
  const ProblemA p = lasso_problem(8, 12, 26);
  const Reference ref = reference_solve(p);
  const SolverResult r = prox_gradient(p, quiet(20000, 1e-9));
  EXPECT_TRUE(r.converged);
  EXPECT_LE((r.final_alpha - ref.alpha).cwiseAbs().maxCoeff(), 1e-3);
  EXPECT_LE(r.trace.back().objective - ref.objective, 1e-9);
  for (std::size_t k = 1; k < r.trace.size(); ++k) EXPECT_LE(r.trace[k].objective, r.trace[k - 1].objective + 1e-12);
}

TEST(ProxGradient, ReducesToGradientDescentForRidge) {
  const ProblemA p = ridge_problem(6, 5, 27, 0.2);
  const Reference ref = reference_solve(p);
  const SolverResult r = prox_gradient(p, quiet(50000, 1e-11));
  EXPECT_LE((r.final_alpha - ref.alpha).cwiseAbs().maxCoeff(), 1e-5);
}

TEST(AveragedIterate, ConstantSequence) {
  IterateHistory h{Vector::Constant(3, 2.5), {}};
  EXPECT_EQ(averaged_iterate(h, 0, 10), Vector::Constant(3, 2.5));
}

TEST(AveragedIterate, TwoStates) {
  IterateHistory h{Vector::Zero(2), {{1, 0, 4.0}, {2, 1, -2.0}}};
  const Vector m = averaged_iterate(h, 0, 2);  // alpha(0) = (0,0), alpha(1) = (4,0)
  EXPECT_DOUBLE_EQ(m[0], 2.0);
  EXPECT_DOUBLE_EQ(m[1], 0.0);
  const Vector tail = averaged_iterate(h, 1, 4);  // (4,0), (4,-2), (4,-2)
  EXPECT_DOUBLE_EQ(tail[0], 4.0);
  EXPECT_DOUBLE_EQ(tail[1], -4.0 / 3.0);
  EXPECT_THROW(averaged_iterate(h, 3, 3), std::invalid_argument);
}

}  // namespace
}  // namespace pdcert

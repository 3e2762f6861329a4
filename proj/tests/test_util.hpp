#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "pdcert/certificates.hpp"
#include "pdcert/random.hpp"
#include "pdcert/solvers.hpp"

namespace pdcert::testing {

inline DataMatrix random_matrix(std::size_t d, std::size_t n, std::uint64_t seed, double density = 1.0) {
  SplitMix64 rng(seed * 7919 + 13);
  std::vector<std::vector<Entry>> cols(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      if (density < 1.0 && rng.uniform() >= density) continue;
      cols[i].push_back({j, rng.normal()});
    }
  }
  return DataMatrix(d, std::move(cols));
}

inline Vector random_vector(std::size_t n, std::uint64_t seed, double scale = 1.0) {
  SplitMix64 rng(seed * 104729 + 7);
  Vector v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = scale * rng.normal();
  return v;
}

inline Vector random_labels(std::size_t n, std::uint64_t seed) {
  SplitMix64 rng(seed * 31 + 5);
  Vector y(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < y.size(); ++i) y[i] = rng.below(2) == 0 ? -1.0 : 1.0;
  return y;
}

inline std::shared_ptr<const DataMatrix> shared(DataMatrix A) { return std::make_shared<const DataMatrix>(std::move(A)); }

/// lambda as a fraction of ||A^T b||_inf so the solution is neither 0 nor dense.
inline double lambda_fraction(const DataMatrix& A, const Vector& b, double fraction) {
  return fraction * transpose_matvec(A, b).cwiseAbs().maxCoeff();
}

inline ProblemA lasso_problem(std::size_t d, std::size_t n, std::uint64_t seed, double fraction = 0.2,
                              BallKind kind = BallKind::coordinate_interval) {
  auto A = shared(random_matrix(d, n, seed));
  Vector b = random_vector(d, seed + 1000);
  const double lambda = lambda_fraction(*A, b, fraction);
  SmoothLoss loss = SmoothLoss::least_squares(b);
  return ProblemA(A, loss, SeparableRegularizer::l1(lambda), safe_bound(loss, lambda, kind));
}

inline ProblemA elastic_net_problem(std::size_t d, std::size_t n, std::uint64_t seed, double eta = 0.5,
                                    double fraction = 0.2) {
  auto A = shared(random_matrix(d, n, seed));
  Vector b = random_vector(d, seed + 1000);
  const double lambda = lambda_fraction(*A, b, fraction);
  return ProblemA(A, SmoothLoss::least_squares(b), SeparableRegularizer::elastic_net(lambda, eta));
}

inline ProblemA ridge_problem(std::size_t d, std::size_t n, std::uint64_t seed, double lambda = 0.5) {
  auto A = shared(random_matrix(d, n, seed));
  return ProblemA(A, SmoothLoss::least_squares(random_vector(d, seed + 1000)), SeparableRegularizer::l2(lambda));
}

inline ProblemA svm_problem(std::size_t d, std::size_t n, std::uint64_t seed, double lambda) {
  return pdcert::svm_problem(shared(random_matrix(d, n, seed)), random_labels(n, seed), lambda);
}

inline ProblemA logistic_l1_problem(std::size_t m, std::size_t n, std::uint64_t seed, double lambda = 0.02) {
  auto A = shared(random_matrix(m, n, seed));
  SmoothLoss loss = SmoothLoss::logistic(random_labels(m, seed + 3));
  return ProblemA(A, loss, SeparableRegularizer::l1(lambda), safe_bound(loss, lambda));
}

/// Golden-section minimum of a unimodal function on [lo, hi].
inline double golden_section(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-13) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  for (int k = 0; k < 400 && b - a > tol * (1.0 + std::abs(a) + std::abs(b)); ++k) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  const double x = 0.5 * (a + b);
  return std::min({f(x), f(lo), f(hi), fc, fd});
}

struct Reference {
  Vector alpha;
  double objective;
  double gap;
};

/// Long coordinate descent run: up to 1e5 epochs, stopping once the gap is <= 1e-12.
inline Reference reference_solve(const ProblemA& p, std::size_t max_epochs = 100000) {
  SolverConfig cfg;
  cfg.max_epochs = max_epochs;
  cfg.gap_tolerance = 1e-12;
  cfg.record_time = false;
  cfg.seed = 12345;
  const SolverResult r = coordinate_descent(p, cfg);
  return {r.final_alpha, r.trace.back().objective, r.trace.back().gap};
}

}  // namespace pdcert::testing

#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "pdcert/data_matrix.hpp"
#include "pdcert/lipschitzing.hpp"
#include "pdcert/losses.hpp"
#include "pdcert/regularizers.hpp"

namespace pdcert {

/**
 * min_alpha D(alpha) = f(A alpha) + g(alpha), alpha in R^n, A in R^{d x n}.
 *
 * `support_bound` is the Lipschitzing metadata. It only enters the gap, and
 * only for regularizers whose conjugate is not finite everywhere (L1, group
 * lasso, zero); strongly convex and box-constrained g already have a finite
 * conjugate and are certified with it directly.
 */
struct ProblemA {
  ProblemA(std::shared_ptr<const DataMatrix> matrix, SmoothLoss loss, Regularizer regularizer,
           std::optional<SupportBound> support_bound = std::nullopt);

  std::size_t n() const { return matrix->cols(); }
  std::size_t d() const { return matrix->rows(); }
  const SeparableRegularizer* separable() const { return std::get_if<SeparableRegularizer>(&regularizer); }
  const NormRegularizer* norm() const { return std::get_if<NormRegularizer>(&regularizer); }
  /// lambda of the regularizer (1 for the svm box, 0 for zero).
  double lambda() const;
  /// Strong convexity constant of g (0 for norm regularizers).
  double mu() const;
  /// True when gap evaluation goes through the restricted conjugate.
  bool uses_support_bound() const;

  std::shared_ptr<const DataMatrix> matrix;
  SmoothLoss loss;
  Regularizer regularizer;
  std::optional<SupportBound> support_bound;
};

/// Hinge-loss SVM with examples as the columns of X and labels y in {-1, +1}:
/// primal (lambda/2)||w||^2 + (1/n) sum_i [1 - y_i x_i^T w]_+. Built as
/// f(z) = ||z||^2 / (2 lambda n) with the svm box, so D and the gap are n times
/// the usual dual objective and gap, and w(alpha) = X alpha / (lambda n) is the
/// usual weight vector.
ProblemA svm_problem(std::shared_ptr<const DataMatrix> examples, Vector labels, double lambda);

double regularizer_value(const Regularizer& reg, const Vector& alpha);

/// w(alpha) = grad f(A alpha).
Vector primal_map(const ProblemA& p, const Vector& alpha);

double objective(const ProblemA& p, const Vector& alpha);

/// Conjugate of g, restricted to the support ball when the problem uses one.
double bounded_conjugate(const ProblemA& p, const Vector& u);

/// False when alpha lies outside the support ball (relative slack 1e-12).
bool within_support(const ProblemA& p, const Vector& alpha);

struct GapEvaluation {
  double objective = 0.0;
  double gap = 0.0;
};

/// D(alpha) and G(alpha) = <w, A alpha> + g(alpha) + gbar*(-A^T w) from a
/// precomputed v = A alpha. f* is never evaluated: f(v) + f*(w) = <w, v> at
/// w = grad f(v). Returns gap = +inf if alpha is outside the support ball.
GapEvaluation evaluate_gap(const ProblemA& p, const Vector& alpha, const Vector& v);

double duality_gap_general(const ProblemA& p, const Vector& alpha);

/// <w, A alpha> + B [||A^T w||_inf - lambda]_+ + lambda ||alpha||_1.
/// Requires an L1 regularizer and a support bound.
double lasso_gap(const ProblemA& p, const Vector& alpha);

/// <w, A alpha> + 1/(2 eta lambda) sum_i [|A_i^T w| - (1 - eta) lambda]_+^2
///   + lambda (eta/2 ||alpha||^2 + (1 - eta) ||alpha||_1).
double elastic_net_gap(const ProblemA& p, const Vector& alpha);

/// f = (lambda/2)||A alpha||^2, g_i = -y_i alpha_i on y_i alpha_i in [0, 1]:
/// lambda ||A alpha||^2 - y^T alpha + sum_i [1 - y_i A_i^T w]_+, +inf if infeasible.
double svm_gap(const ProblemA& p, const Vector& alpha);

/// Minimum-magnitude element u of d gbar*(-A^T w(alpha)).
Vector dual_subgradient(const ProblemA& p, const Vector& alpha);

/// One checkpoint of a solver run.
struct CertificateRecord {
  std::size_t step = 0;
  double epoch = 0.0;
  double objective = 0.0;
  double gap = 0.0;
  double B = kInfinity;  // support radius in effect; inf when none applies
  double seconds = 0.0;
};

inline constexpr const char* kTraceCsvHeader = "step,epoch,objective,gap,B,seconds";

/// Shortest round-trip decimal form ("inf" / "-inf" / "nan" for non-finite).
std::string format_double(double x);

std::string trace_csv(const std::vector<CertificateRecord>& trace);
nlohmann::json trace_json(const std::vector<CertificateRecord>& trace);

}  // namespace pdcert

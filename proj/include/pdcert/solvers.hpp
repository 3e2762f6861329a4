#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "pdcert/certificates.hpp"

namespace pdcert {

enum class SolverKind { cd, prox_grad };

struct SolverConfig {
  std::size_t max_epochs = 1000;
  /// Overrides max_epochs * n when set (cd) or ceil(max_steps / n) iterations (prox_grad).
  std::optional<std::size_t> max_steps;
  double gap_tolerance = 1e-6;
  /// Stop at the first checkpoint whose gap is <= gap_tolerance.
  bool stop_on_tolerance = true;
  std::uint64_t seed = 0;
  /// T0 in steps; enables iterate history and the averaged output.
  std::optional<std::size_t> averaging_start;
  /// Checkpoint period in epochs; 0 keeps only the initial and final records.
  std::size_t checkpoint_every = 1;
  SolverKind solver_kind = SolverKind::cd;
  /// Sweep coordinates in order instead of sampling. No guarantees; for debugging.
  bool cyclic = false;
  double inner_tol = 1e-12;
  /// Shrink B to D(alpha)/lambda at every checkpoint.
  bool refresh_bound = false;
  /// Fill CertificateRecord::seconds; off gives byte-identical traces.
  bool record_time = true;
};

/// Coordinate changes of a cd run: alpha(step) has coordinate `index` set to `value`.
struct IterateDelta {
  std::size_t step;
  std::size_t index;
  double value;
};

struct IterateHistory {
  Vector initial;
  std::vector<IterateDelta> deltas;  // ordered by step
};

struct SolverResult {
  Vector final_alpha;
  std::optional<Vector> averaged_alpha;
  std::vector<CertificateRecord> trace;
  bool converged = false;
  std::size_t steps_taken = 0;
  std::size_t inexact_steps = 0;
  std::optional<IterateHistory> history;
};

/// Called after every step (cd) or iteration (prox_grad) with the step count
/// and the current iterate.
using StepObserver = std::function<void(std::size_t step, const Vector& alpha)>;

/**
 * Randomized coordinate descent on D(alpha), started at alpha = 0: pick i
 * uniformly with replacement, minimize D exactly along e_i, update
 * v = A alpha incrementally. Gaps are evaluated at checkpoints from a freshly
 * computed v, which also replaces the maintained one to stop drift.
 *
 * Columns of A that are identically zero are set once to argmin g_i and never
 * sampled. With a coordinate-wise support bound the step is clipped to
 * [-B, B]; the safe bound never binds, so iterates are unchanged.
 */
SolverResult coordinate_descent(const ProblemA& p, const SolverConfig& cfg, const StepObserver& observe = {});

/// Proximal gradient with step beta / sigma (grad of f(A .) is sigma/beta-Lipschitz).
/// One iteration counts as n steps.
SolverResult prox_gradient(const ProblemA& p, const SolverConfig& cfg, const StepObserver& observe = {});

/// Dispatches on cfg.solver_kind.
SolverResult solve(const ProblemA& p, const SolverConfig& cfg, const StepObserver& observe = {});

/// Change delta of coordinate i minimizing D exactly, for quadratic f.
/// `v` is A alpha and alpha_i the current coordinate value.
double coordinate_min_quadratic(const ProblemA& p, std::size_t i, const Vector& v, double alpha_i,
                                const Interval& box = {});

struct CoordinateStep {
  double delta = 0.0;
  bool exact = true;
};

/// Safeguarded Newton/bisection for a general smooth f. Stops when the 1-D
/// subgradient is within inner_tol of 0 or after 100 iterations (exact = false,
/// best point returned). An inexact result that would increase D is discarded.
CoordinateStep coordinate_min_smooth(const ProblemA& p, std::size_t i, const Vector& v, double alpha_i,
                                     double inner_tol, const Interval& box = {});

/// Mean of alpha(t) for t in [T0, T - 1]. Throws if T0 >= T.
Vector averaged_iterate(const IterateHistory& history, std::size_t T0, std::size_t T);

/// Separable view of a regularizer: NormRegularizer with singleton groups
/// becomes SeparableRegularizer::l1. Throws for genuine group structure.
SeparableRegularizer as_separable(const Regularizer& reg);

}  // namespace pdcert

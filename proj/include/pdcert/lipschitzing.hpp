#pragma once

#include <cstddef>

#include "pdcert/losses.hpp"
#include "pdcert/regularizers.hpp"

namespace pdcert {

/// Which ball the support of g is restricted to.
enum class BallKind {
  coordinate_interval,  // |alpha_i| <= B for every i
  l1_ball,              // ||alpha||_1 <= B
  group_ball,           // sum_k ||alpha_{G_k}||_2 <= B (the regularizer's own norm)
};

enum class BoundProvenance { safe_f0, level_set, user };

/// Radius B of the bounded support used to make g* Lipschitz.
struct SupportBound {
  double B = 0.0;
  BallKind norm_kind = BallKind::coordinate_interval;
  BoundProvenance provenance = BoundProvenance::user;
};

/// B = f(0) / lambda. Any monotone method started at alpha = 0 satisfies
/// lambda ||alpha|| <= D(alpha) <= D(0) = f(0), so its iterates stay inside.
SupportBound safe_bound(const SmoothLoss& loss, double lambda, BallKind kind = BallKind::coordinate_interval);

/// B = D(alpha) / lambda for the current iterate of a monotone method.
/// Throws std::invalid_argument on a negative objective.
SupportBound dynamic_bound(double current_objective, double lambda, BallKind kind = BallKind::coordinate_interval);

/// User-supplied radius; throws unless B is finite and >= 0.
SupportBound user_bound(double B, BallKind kind);

const char* to_string(BallKind kind);
const char* to_string(BoundProvenance provenance);

/// Conjugate of g = lambda ||.|| restricted to the norm ball of radius B:
/// B [||u||_* - lambda]_+. Finite everywhere and B-Lipschitz in the dual norm.
double modified_conjugate_norm(const Vector& u, const NormRegularizer& reg, double B);

/// Conjugate of lambda |.| restricted to [-B, B]: B [|x| - lambda]_+.
double modified_conjugate_scalar_l1(double x, double lambda, double B);

/// Conjugate of g_i restricted to dom g_i intersected with [-B, B].
double restricted_conjugate(const SeparableRegularizer& reg, std::size_t i, double x, double B);

/// Minimum-magnitude maximizer for restricted_conjugate.
double restricted_conjugate_argmax(const SeparableRegularizer& reg, std::size_t i, double x, double B);

}  // namespace pdcert

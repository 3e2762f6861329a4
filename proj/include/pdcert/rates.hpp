#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pdcert/certificates.hpp"

namespace pdcert {

/// Constants consumed by the iteration-count bounds. Only the fields a given
/// bound reads need to be set.
struct RateInputs {
  double C = 1.0;      // linear rate constant (1 - C)^t, or sublinear constant
  double D0 = 0.0;     // initial bound D
  double sigma = 0.0;  // squared spectral norm of A
  double beta = 1.0;   // f is 1/beta-smooth
  double mu = 0.0;     // strong convexity of g
  double L = 0.0;      // Lipschitz constant of g* (or g_i*)
  double lambda = 0.0;
  double eta = 0.0;
  std::size_t n = 1;
  std::size_t d = 1;
  double R = 0.0;     // max column norm
  double P = 0.0;     // max row norm
  double eps0 = 0.0;  // initial suboptimality D(alpha0) - D(alpha*)
  double eps = 0.0;   // target accuracy
};

enum class Theorem {
  linear_generic,      // linearly convergent method, strongly convex g
  linear_lipschitz,    // linearly convergent method, L-Lipschitz g*
  sublinear,           // sublinear method, required D(t)
  cd_strongly_convex,  // coordinate descent, mu-strongly convex g_i
  cd_lipschitz,        // coordinate descent, L-Lipschitz g_i*, averaged iterate
  cd_lasso,            // cd_lipschitz with L = B after Lipschitzing
  cd_elastic_net_primal,
  cd_elastic_net_dual,
};

/// Short CLI identifiers: thm1 thm2 thm3 thm5 thm6 cor1 cor2 cor2-dual.
std::string theorem_id(Theorem theorem);
std::optional<Theorem> theorem_from_id(const std::string& id);

struct RateBound {
  Theorem theorem;
  double T = 0.0;             // iterations, before ceiling; clamped at 0
  std::optional<double> T0;   // averaging start (cd bounds only)
  bool averaged = false;      // T bounds the gap of the averaged iterate
  RateInputs inputs;
};

nlohmann::json to_json(const RateBound& bound);

/// (1/C) log(D0 (sigma/beta + mu) / (mu eps)). Throws for mu <= 0.
RateBound bound_thm1(const RateInputs& in);

/// (1/C) log(2 D0 max{1, 2 sigma L^2 / (eps beta)} / eps).
RateBound bound_thm2(const RateInputs& in);

/// Required D(t) = max{2 C beta / (sigma L^2), 2 C sigma L^2 / (beta eps^2)}.
double bound_thm3(const RateInputs& in);

/// kappa = n + n R^2 / (mu beta); T = kappa log(kappa eps0 / eps).
/// T0 solves T0 = kappa log(kappa eps0 / ((T - T0) eps)) with T = 2 T0.
RateBound bound_cd_strongly_convex(const RateInputs& in);

/// T = max{0, n log(eps0 beta / (2 L^2 R^2 n))} + n + 20 n^2 L^2 R^2 / (beta eps)
/// for the averaged iterate; T0 uses 16 in place of 20 and drops the + n.
RateBound bound_cd_lipschitz(const RateInputs& in);

/// bound_cd_lipschitz with L = B, the Lipschitz constant of the restricted L1 conjugate.
RateBound bound_lasso_cd(RateInputs in, double B);

enum class Side { primal, dual };

/// kappa = n + n R^2 / (lambda eta beta) (primal) or d + d P^2 / (lambda eta beta) (dual).
RateBound bound_elastic_net_cd(const RateInputs& in, Side side);

struct LinearRateFit {
  double C = 0.0;
  double D0 = 0.0;
};

/// Least-squares fit of log y_k = log D0 + t_k log(1 - C) to positive
/// suboptimality samples. Estimates only; the theorems assume C, D known.
LinearRateFit fit_linear_rate(const std::vector<double>& t, const std::vector<double>& y);

struct VerifyReport {
  Theorem theorem;
  double T = 0.0;
  std::optional<double> T0;
  double eps = 0.0;
  double mean_gap = 0.0;
  std::size_t runs = 0;
  bool pass = false;
  bool slack_used = false;  // mean in (eps, 2 eps]
};

nlohmann::json to_json(const VerifyReport& report);

/// Mean over runs of the gap recorded at step ceil(T); passes if the mean is
/// <= eps, or <= 2 eps with slack_used set (the bounds are on expectations).
/// For averaged bounds the traces must carry gaps of the averaged iterate.
/// Throws std::invalid_argument ("insufficient steps") if a trace ends before
/// ceil(T) or has no record at exactly that step.
VerifyReport verify_trace(const std::vector<std::vector<CertificateRecord>>& traces, const RateBound& bound,
                          double eps);

}  // namespace pdcert

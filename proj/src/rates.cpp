#include "pdcert/rates.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pdcert {

namespace {

void require_positive(double x, const char* name) {
  if (!(x > 0.0) || !std::isfinite(x)) throw std::invalid_argument(std::string(name) + " must be positive and finite");
}

double clamp0(double x) { return x > 0.0 ? x : 0.0; }

RateBound make(Theorem theorem, const RateInputs& in, double T) {
  RateBound b{theorem, clamp0(T), std::nullopt, false, in};
  return b;
}

// kappa log(kappa eps0 / eps) and the T = 2 T0 averaging start.
RateBound condition_bound(Theorem theorem, const RateInputs& in, double kappa) {
  require_positive(in.eps, "eps");
  require_positive(in.eps0, "eps0");
  RateBound b = make(theorem, in, kappa * std::log(kappa * in.eps0 / in.eps));
  // h(T0) = T0 - kappa log(kappa eps0 / (T0 eps)) is increasing; bisect its root.
  auto h = [&](double t0) { return t0 - kappa * std::log(kappa * in.eps0 / (t0 * in.eps)); };
  double lo = 0.0;
  double hi = std::max({1.0, b.T, kappa});
  while (h(hi) < 0.0) hi *= 2.0;
  for (int k = 0; k < 200 && hi - lo > 1e-12 * hi; ++k) {
    const double mid = 0.5 * (lo + hi);
    (h(mid) < 0.0 ? lo : hi) = mid;
  }
  b.T0 = hi;
  return b;
}

}  // namespace

std::string theorem_id(Theorem theorem) {
  switch (theorem) {
    case Theorem::linear_generic: return "thm1";
    case Theorem::linear_lipschitz: return "thm2";
    case Theorem::sublinear: return "thm3";
    case Theorem::cd_strongly_convex: return "thm5";
    case Theorem::cd_lipschitz: return "thm6";
    case Theorem::cd_lasso: return "cor1";
    case Theorem::cd_elastic_net_primal: return "cor2";
    case Theorem::cd_elastic_net_dual: return "cor2-dual";
  }
  return "?";
}

std::optional<Theorem> theorem_from_id(const std::string& id) {
  for (Theorem t : {Theorem::linear_generic, Theorem::linear_lipschitz, Theorem::sublinear,
                    Theorem::cd_strongly_convex, Theorem::cd_lipschitz, Theorem::cd_lasso,
                    Theorem::cd_elastic_net_primal, Theorem::cd_elastic_net_dual}) {
    if (theorem_id(t) == id) return t;
  }
  return std::nullopt;
}

nlohmann::json to_json(const RateBound& bound) {
  const RateInputs& in = bound.inputs;
  nlohmann::json j = {{"theorem", theorem_id(bound.theorem)},
                      {"T", bound.T},
                      {"T0", bound.T0 ? nlohmann::json(*bound.T0) : nlohmann::json(nullptr)},
                      {"averaged", bound.averaged},
                      {"inputs",
                       {{"C", in.C}, {"D0", in.D0}, {"sigma", in.sigma}, {"beta", in.beta}, {"mu", in.mu},
                        {"L", in.L}, {"lambda", in.lambda}, {"eta", in.eta}, {"n", in.n}, {"d", in.d},
                        {"R", in.R}, {"P", in.P}, {"eps0", in.eps0}, {"eps", in.eps}}}};
  return j;
}

RateBound bound_thm1(const RateInputs& in) {
  if (!(in.mu > 0.0)) throw std::invalid_argument("thm1 needs mu > 0; use thm2 for Lipschitz conjugates");
  require_positive(in.C, "C");
  require_positive(in.beta, "beta");
  require_positive(in.eps, "eps");
  return make(Theorem::linear_generic, in,
              std::log(in.D0 * (in.sigma / in.beta + in.mu) / (in.mu * in.eps)) / in.C);
}

RateBound bound_thm2(const RateInputs& in) {
  require_positive(in.C, "C");
  require_positive(in.beta, "beta");
  require_positive(in.eps, "eps");
  if (!std::isfinite(in.L)) throw std::invalid_argument("thm2 needs a finite L");
  const double factor = std::max(1.0, 2.0 * in.sigma * in.L * in.L / (in.eps * in.beta));
  return make(Theorem::linear_lipschitz, in, std::log(2.0 * in.D0 * factor / in.eps) / in.C);
}

double bound_thm3(const RateInputs& in) {
  require_positive(in.beta, "beta");
  require_positive(in.eps, "eps");
  const double s = in.sigma * in.L * in.L;
  return std::max(2.0 * in.C * in.beta / s, 2.0 * in.C * s / (in.beta * in.eps * in.eps));
}

RateBound bound_cd_strongly_convex(const RateInputs& in) {
  if (!(in.mu > 0.0)) throw std::invalid_argument("thm5 needs mu > 0; use thm6/cor1 for Lipschitz conjugates");
  require_positive(in.beta, "beta");
  const double n = static_cast<double>(in.n);
  return condition_bound(Theorem::cd_strongly_convex, in, n + n * in.R * in.R / (in.mu * in.beta));
}

RateBound bound_cd_lipschitz(const RateInputs& in) {
  require_positive(in.beta, "beta");
  require_positive(in.eps, "eps");
  require_positive(in.eps0, "eps0");
  require_positive(in.L, "L");
  require_positive(in.R, "R");
  const double n = static_cast<double>(in.n);
  const double lr2 = in.L * in.L * in.R * in.R;
  const double warmup = clamp0(n * std::log(in.eps0 * in.beta / (2.0 * lr2 * n)));
  RateBound b = make(Theorem::cd_lipschitz, in, warmup + n + 20.0 * n * n * lr2 / (in.beta * in.eps));
  b.T0 = warmup + 16.0 * n * n * lr2 / (in.beta * in.eps);
  b.averaged = true;
  return b;
}

RateBound bound_lasso_cd(RateInputs in, double B) {
  in.L = B;
  RateBound b = bound_cd_lipschitz(in);
  b.theorem = Theorem::cd_lasso;
  return b;
}

RateBound bound_elastic_net_cd(const RateInputs& in, Side side) {
  require_positive(in.lambda, "lambda");
  require_positive(in.eta, "eta");
  require_positive(in.beta, "beta");
  const double scale = in.lambda * in.eta * in.beta;
  if (side == Side::primal) {
    const double n = static_cast<double>(in.n);
    return condition_bound(Theorem::cd_elastic_net_primal, in, n + n * in.R * in.R / scale);
  }
  const double d = static_cast<double>(in.d);
  return condition_bound(Theorem::cd_elastic_net_dual, in, d + d * in.P * in.P / scale);
}

LinearRateFit fit_linear_rate(const std::vector<double>& t, const std::vector<double>& y) {
  if (t.size() != y.size()) throw std::invalid_argument("fit_linear_rate: length mismatch");
  double st = 0, sy = 0, stt = 0, sty = 0, count = 0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (!(y[k] > 0.0) || !std::isfinite(y[k])) continue;
    const double ly = std::log(y[k]);
    st += t[k];
    sy += ly;
    stt += t[k] * t[k];
    sty += t[k] * ly;
    count += 1;
  }
  const double denom = count * stt - st * st;
  if (count < 2 || denom <= 0.0) throw std::invalid_argument("fit_linear_rate: need two distinct positive samples");
  const double slope = (count * sty - st * sy) / denom;
  const double intercept = (sy - slope * st) / count;
  if (!(slope < 0.0)) throw std::invalid_argument("fit_linear_rate: trace does not decrease");
  return {std::min(1.0, -std::expm1(slope)), std::exp(intercept)};
}

nlohmann::json to_json(const VerifyReport& r) {
  return {{"theorem", theorem_id(r.theorem)},
          {"T", r.T},
          {"T0", r.T0 ? nlohmann::json(*r.T0) : nlohmann::json(nullptr)},
          {"eps", r.eps},
          {"mean_gap", r.mean_gap},
          {"pass", r.pass},
          {"slack_used", r.slack_used},
          {"runs", r.runs}};
}

VerifyReport verify_trace(const std::vector<std::vector<CertificateRecord>>& traces, const RateBound& bound,
                          double eps) {
  if (traces.empty()) throw std::invalid_argument("verify_trace: no traces");
  const auto target = static_cast<std::size_t>(std::ceil(bound.T));
  double sum = 0.0;
  for (const auto& trace : traces) {
    if (trace.empty() || trace.back().step < target) {
      throw std::invalid_argument("verify_trace: insufficient steps (need " + std::to_string(target) + ")");
    }
    auto it = std::find_if(trace.begin(), trace.end(), [&](const CertificateRecord& r) { return r.step == target; });
    if (it == trace.end()) {
      throw std::invalid_argument("verify_trace: insufficient steps (no checkpoint at step " + std::to_string(target) +
                                  ")");
    }
    sum += it->gap;
  }
  VerifyReport r;
  r.theorem = bound.theorem;
  r.T = bound.T;
  r.T0 = bound.T0;
  r.eps = eps;
  r.runs = traces.size();
  r.mean_gap = sum / static_cast<double>(traces.size());
  r.pass = r.mean_gap <= 2.0 * eps;
  r.slack_used = r.pass && r.mean_gap > eps;
  return r;
}

}  // namespace pdcert

#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <future>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pdcert/certificates.hpp"
#include "pdcert/data_matrix.hpp"
#include "pdcert/rates.hpp"
#include "pdcert/solvers.hpp"
#include "pdcert/synthetic.hpp"

namespace pdcert::cli {

namespace {

using nlohmann::json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ProblemKind { lasso, elastic_net, ridge, svm, logistic_l1, logistic_en };

ProblemKind parse_problem(const std::string& name) {
  static const std::map<std::string, ProblemKind> kinds = {
      {"lasso", ProblemKind::lasso},           {"elastic_net", ProblemKind::elastic_net},
      {"ridge", ProblemKind::ridge},           {"svm", ProblemKind::svm},
      {"logistic_l1", ProblemKind::logistic_l1}, {"logistic_en", ProblemKind::logistic_en}};
  auto it = kinds.find(name);
  if (it == kinds.end()) throw UsageError("unknown problem '" + name + "'");
  return it->second;
}

SolverKind parse_solver(const std::string& name) {
  if (name == "cd") return SolverKind::cd;
  if (name == "pg" || name == "prox_grad") return SolverKind::prox_grad;
  throw UsageError("unknown solver '" + name + "' (expected cd or pg)");
}

struct RunSpec {
  std::string data;
  std::string problem = "lasso";
  std::optional<double> lambda;
  double eta = 0.5;
  std::string solver = "cd";
  std::uint64_t seed = 0;
  std::size_t epochs = 1000;
  double tol = 1e-6;
  std::string out;
  std::string bound = "safe";
  bool normalize = false;
  bool timing = false;
};

void add_common_options(CLI::App& cmd, RunSpec& spec) {
  cmd.add_option("--data", spec.data, "LIBSVM file")->required();
  cmd.add_option("--problem", spec.problem, "lasso | elastic_net | ridge | svm | logistic_l1 | logistic_en");
  cmd.add_option("--lambda", spec.lambda, "regularization weight (default 1/n)");
  cmd.add_option("--eta", spec.eta, "elastic net mixing weight in (0, 1]");
  cmd.add_option("--seed", spec.seed, "RNG seed");
  cmd.add_option("--epochs", spec.epochs, "maximum epochs");
  cmd.add_option("--tol", spec.tol, "duality gap tolerance");
  cmd.add_option("--bound", spec.bound, "support bound: safe | levelset");
  cmd.add_flag("--normalize", spec.normalize, "scale every column of A to unit norm");
  cmd.add_flag("--timing", spec.timing, "fill the seconds column (output is no longer reproducible)");
}

struct Instance {
  std::optional<ProblemA> problem;
  ProblemKind kind = ProblemKind::lasso;
  double lambda = 0.0;
};

// The file stores examples as columns. Regression and logistic problems take
// alpha over features, so A has examples as rows; the svm dual keeps one
// coordinate per example.
Instance build_instance(const RunSpec& spec) {
  Instance inst;
  inst.kind = parse_problem(spec.problem);
  if (spec.bound != "safe" && spec.bound != "levelset") throw UsageError("--bound must be safe or levelset");
  LabeledDataset data = load_libsvm(spec.data);

  DataMatrix A = inst.kind == ProblemKind::svm ? data.matrix : data.matrix.transpose();
  if (spec.normalize) A = A.normalized_columns();
  auto matrix = std::make_shared<const DataMatrix>(std::move(A));
  const double n = static_cast<double>(matrix->cols());
  inst.lambda = spec.lambda.value_or(1.0 / n);
  if (!(inst.lambda > 0.0)) throw UsageError("--lambda must be positive");

  const bool logistic = inst.kind == ProblemKind::logistic_l1 || inst.kind == ProblemKind::logistic_en;
  std::optional<SmoothLoss> loss;
  if (inst.kind == ProblemKind::svm) {
    inst.problem.emplace(svm_problem(matrix, data.labels, inst.lambda));
    return inst;
  }
  if (logistic) {
    loss = SmoothLoss::logistic(data.labels);
  } else {
    loss = SmoothLoss::least_squares(data.labels);
  }

  std::optional<SupportBound> bound;
  auto reg = [&]() -> SeparableRegularizer {
    switch (inst.kind) {
      case ProblemKind::lasso:
      case ProblemKind::logistic_l1:
        bound = safe_bound(*loss, inst.lambda, BallKind::coordinate_interval);
        return SeparableRegularizer::l1(inst.lambda);
      case ProblemKind::elastic_net:
      case ProblemKind::logistic_en: return SeparableRegularizer::elastic_net(inst.lambda, spec.eta);
      case ProblemKind::ridge: return SeparableRegularizer::l2(inst.lambda);
      case ProblemKind::svm: break;
    }
    throw UsageError("unhandled problem");
  }();
  inst.problem.emplace(matrix, *loss, reg, bound);
  return inst;
}

SolverConfig base_config(const RunSpec& spec) {
  SolverConfig cfg;
  cfg.max_epochs = spec.epochs;
  cfg.gap_tolerance = spec.tol;
  cfg.seed = spec.seed;
  cfg.solver_kind = parse_solver(spec.solver);
  cfg.refresh_bound = spec.bound == "levelset";
  cfg.record_time = spec.timing;
  if (!(cfg.gap_tolerance > 0.0)) throw UsageError("--tol must be positive");
  return cfg;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
}

std::string json_path_for(const std::string& csv_path) {
  const std::string ext = ".csv";
  if (csv_path.size() > ext.size() && csv_path.compare(csv_path.size() - ext.size(), ext.size(), ext) == 0) {
    return csv_path.substr(0, csv_path.size() - ext.size()) + ".json";
  }
  return csv_path + ".json";
}

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

int cmd_solve(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  const Instance inst = build_instance(spec);
  const SolverConfig cfg = base_config(spec);
  const SolverResult result = solve(*inst.problem, cfg);
  const CertificateRecord& last = result.trace.back();

  json summary = {{"problem", spec.problem},
                  {"solver", spec.solver},
                  {"lambda", inst.lambda},
                  {"seed", spec.seed},
                  {"final_gap", finite_or_null(last.gap)},
                  {"objective", finite_or_null(last.objective)},
                  {"steps", result.steps_taken},
                  {"epochs", last.epoch},
                  {"converged", result.converged},
                  {"B", finite_or_null(last.B)},
                  {"inexact_steps", result.inexact_steps}};
  const std::string csv = trace_csv(result.trace);
  if (spec.out.empty()) {
    out << csv;
    err << summary.dump() << "\n";
  } else {
    write_file(spec.out, csv);
    write_file(json_path_for(spec.out), summary.dump(2) + "\n");
    out << summary.dump() << "\n";
  }
  return result.converged ? 0 : 2;
}

struct RatesOptions {
  std::string theorem;
  std::string verify;
  std::optional<double> eps;
  double eps_rel = 1e-3;
  std::size_t seeds = 30;
  std::size_t reference_epochs = 100000;
  std::optional<double> C, D0, sigma, beta, mu, L, R, P, eps0;
};

int cmd_rates(const RunSpec& spec, const RatesOptions& opt, std::ostream& out, std::ostream& err) {
  if (opt.theorem.empty() == opt.verify.empty()) throw UsageError("give exactly one of --theorem or --verify");
  const std::string id = opt.theorem.empty() ? opt.verify : opt.theorem;
  const auto theorem = theorem_from_id(id);
  if (!theorem) throw UsageError("unknown theorem '" + id + "'");

  const Instance inst = build_instance(spec);
  const ProblemA& p = *inst.problem;
  const MatrixConstants mc = matrix_constants(*p.matrix);

  // Reference solve; D(ref) - G(ref) is a lower bound on the optimum, so eps0
  // computed from it errs on the large (conservative) side.
  SolverConfig ref_cfg;
  ref_cfg.max_epochs = opt.reference_epochs;
  ref_cfg.gap_tolerance = 1e-12;
  ref_cfg.seed = spec.seed;
  ref_cfg.record_time = false;
  const SolverResult ref = coordinate_descent(p, ref_cfg);
  const double d_star_lower = ref.trace.back().objective - ref.trace.back().gap;
  const double d_zero = ref.trace.front().objective;

  RateInputs in;
  in.n = p.n();
  in.d = p.d();
  in.R = opt.R.value_or(mc.R);
  in.P = opt.P.value_or(mc.P);
  in.sigma = opt.sigma.value_or(mc.sigma);
  in.beta = opt.beta.value_or(p.loss.beta());
  in.mu = opt.mu.value_or(p.mu());
  in.lambda = inst.lambda;
  in.eta = p.separable()->eta();
  in.eps0 = opt.eps0.value_or(std::max(d_zero - d_star_lower, 0.0));
  in.eps = opt.eps.value_or(opt.eps_rel * in.eps0);

  std::optional<double> lipschitz = p.separable()->conjugate_lipschitz();
  if (p.uses_support_bound()) lipschitz = p.support_bound->B;
  if (opt.L) lipschitz = opt.L;
  if (lipschitz) in.L = *lipschitz;

  bool estimated = false;
  if (*theorem == Theorem::linear_generic || *theorem == Theorem::linear_lipschitz ||
      *theorem == Theorem::sublinear) {
    if (!opt.C || !opt.D0) {
      std::vector<double> t, y;
      for (const auto& r : ref.trace) {
        t.push_back(static_cast<double>(r.step));
        y.push_back(r.objective - d_star_lower);
      }
      const LinearRateFit fit = fit_linear_rate(t, y);
      in.C = opt.C.value_or(fit.C);
      in.D0 = opt.D0.value_or(fit.D0);
      estimated = true;
    } else {
      in.C = *opt.C;
      in.D0 = *opt.D0;
    }
  }
  auto require_lipschitz = [&] {
    if (!lipschitz) throw UsageError(id + " needs a Lipschitz conjugate; this problem is strongly convex, use thm5");
  };

  if (*theorem == Theorem::sublinear) {
    require_lipschitz();
    out << json{{"theorem", id}, {"D_required", bound_thm3(in)}, {"estimated", estimated}}.dump() << "\n";
    return 0;
  }

  RateBound bound;
  switch (*theorem) {
    case Theorem::linear_generic: bound = bound_thm1(in); break;
    case Theorem::linear_lipschitz: require_lipschitz(); bound = bound_thm2(in); break;
    case Theorem::cd_strongly_convex: bound = bound_cd_strongly_convex(in); break;
    case Theorem::cd_lipschitz: require_lipschitz(); bound = bound_cd_lipschitz(in); break;
    case Theorem::cd_lasso:
      if (p.separable()->kind() != SeparableRegularizer::Kind::l1) throw UsageError("cor1 applies to L1 problems");
      bound = bound_lasso_cd(in, *lipschitz);
      break;
    case Theorem::cd_elastic_net_primal:
    case Theorem::cd_elastic_net_dual:
      if (p.separable()->kind() != SeparableRegularizer::Kind::elastic_net) {
        throw UsageError(id + " applies to elastic net problems");
      }
      bound = bound_elastic_net_cd(in, *theorem == Theorem::cd_elastic_net_primal ? Side::primal : Side::dual);
      break;
    case Theorem::sublinear: break;
  }

  json report = {{"bound", to_json(bound)}, {"estimated", estimated}};
  if (opt.verify.empty()) {
    out << report.dump() << "\n";
    return 0;
  }
  if (*theorem != Theorem::cd_strongly_convex && *theorem != Theorem::cd_lipschitz &&
      *theorem != Theorem::cd_lasso && *theorem != Theorem::cd_elastic_net_primal) {
    throw UsageError("--verify supports the coordinate descent bounds thm5, thm6, cor1 and cor2");
  }
  if (opt.seeds == 0) throw UsageError("--seeds must be positive");

  const auto steps = static_cast<std::size_t>(std::ceil(bound.T));
  std::vector<std::future<std::vector<CertificateRecord>>> runs;
  for (std::size_t k = 0; k < opt.seeds; ++k) {
    runs.push_back(std::async(std::launch::async, [&, k] {
      SolverConfig cfg;
      cfg.max_steps = steps;
      cfg.checkpoint_every = 0;
      cfg.stop_on_tolerance = false;
      cfg.seed = spec.seed + k;
      cfg.record_time = false;
      if (bound.averaged && bound.T0 && static_cast<std::size_t>(*bound.T0) < steps) {
        cfg.averaging_start = static_cast<std::size_t>(*bound.T0);
      }
      SolverResult r = coordinate_descent(p, cfg);
      if (r.averaged_alpha) {
        r.trace.back().objective = objective(p, *r.averaged_alpha);
        r.trace.back().gap = duality_gap_general(p, *r.averaged_alpha);
      }
      return r.trace;
    }));
  }
  std::vector<std::vector<CertificateRecord>> traces;
  for (auto& f : runs) traces.push_back(f.get());
  const VerifyReport verdict = verify_trace(traces, bound, in.eps);
  report["report"] = to_json(verdict);
  out << report.dump() << "\n";
  if (verdict.slack_used) err << "note: mean gap exceeds eps; passed within the 2x expectation slack\n";
  return verdict.pass ? 0 : 2;
}

int cmd_compare(const RunSpec& spec, const std::string& solver_list, std::ostream& out, std::ostream& err) {
  std::vector<std::string> names;
  std::stringstream ss(solver_list);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) names.push_back(item == "prox_grad" ? "pg" : item);
  }
  if (names.empty()) throw UsageError("--solvers is empty");

  const Instance inst = build_instance(spec);
  std::vector<SolverResult> results;
  for (const auto& name : names) {
    SolverConfig cfg = base_config(spec);
    cfg.solver_kind = parse_solver(name);
    cfg.record_time = false;
    results.push_back(solve(*inst.problem, cfg));
  }
  bool all_converged = true;
  for (const auto& r : results) all_converged = all_converged && r.converged;

  std::string csv;
  if (results.size() == 1) {
    csv = trace_csv(results.front().trace);
  } else {
    std::vector<std::map<std::size_t, double>> gaps(results.size());
    std::size_t last_epoch = 0;
    const std::size_t n = inst.problem->n();
    for (std::size_t s = 0; s < results.size(); ++s) {
      for (const auto& r : results[s].trace) {
        if (r.step % n != 0) continue;
        gaps[s][r.step / n] = r.gap;
        last_epoch = std::max(last_epoch, r.step / n);
      }
    }
    csv = "epoch";
    for (const auto& name : names) csv += ",gap_" + name;
    csv += "\n";
    for (std::size_t e = 0; e <= last_epoch; ++e) {
      std::string row = std::to_string(e);
      bool any = false;
      for (const auto& g : gaps) {
        row += ",";
        if (auto it = g.find(e); it != g.end()) {
          row += format_double(it->second);
          any = true;
        }
      }
      if (any) csv += row + "\n";
    }
  }
  if (spec.out.empty()) {
    out << csv;
  } else {
    write_file(spec.out, csv);
  }
  if (!all_converged) err << "not every solver reached the tolerance\n";
  return all_converged ? 0 : 2;
}

struct GenerateOptions {
  std::string out;
  std::string target = "regression";
  SyntheticSpec spec;
};

int cmd_generate(GenerateOptions opt, std::ostream& out) {
  if (opt.target == "regression") {
    opt.spec.target = TargetKind::regression;
  } else if (opt.target == "classification") {
    opt.spec.target = TargetKind::classification;
  } else {
    throw UsageError("--target must be regression or classification");
  }
  const LabeledDataset data = generate_synthetic(opt.spec);
  if (opt.out.empty()) {
    out << format_libsvm(data);
  } else {
    write_libsvm(data, opt.out);
  }
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Duality-gap certified solvers for regularized GLMs"};
  app.require_subcommand(1);

  RunSpec solve_spec;
  auto* solve_cmd = app.add_subcommand("solve", "solve one problem and write its certificate trace");
  add_common_options(*solve_cmd, solve_spec);
  solve_cmd->add_option("--solver", solve_spec.solver, "cd | pg");
  solve_cmd->add_option("--out", solve_spec.out, "trace CSV path; the summary goes next to it as .json");

  RunSpec rates_spec;
  RatesOptions rates_opt;
  auto* rates_cmd = app.add_subcommand("rates", "evaluate an iteration bound, optionally verify it empirically");
  add_common_options(*rates_cmd, rates_spec);
  rates_cmd->add_option("--theorem", rates_opt.theorem, "thm1 thm2 thm3 thm5 thm6 cor1 cor2 cor2-dual");
  rates_cmd->add_option("--verify", rates_opt.verify, "as --theorem, then run the multi-seed check");
  rates_cmd->add_option("--eps", rates_opt.eps, "target gap (absolute)");
  rates_cmd->add_option("--eps-rel", rates_opt.eps_rel, "target gap relative to the initial suboptimality");
  rates_cmd->add_option("--seeds", rates_opt.seeds, "number of seeded runs for --verify");
  rates_cmd->add_option("--reference-epochs", rates_opt.reference_epochs, "epoch cap of the reference solve");
  rates_cmd->add_option("--C", rates_opt.C);
  rates_cmd->add_option("--D0", rates_opt.D0);
  rates_cmd->add_option("--sigma", rates_opt.sigma);
  rates_cmd->add_option("--beta", rates_opt.beta);
  rates_cmd->add_option("--mu", rates_opt.mu);
  rates_cmd->add_option("--L", rates_opt.L);
  rates_cmd->add_option("--R", rates_opt.R);
  rates_cmd->add_option("--P", rates_opt.P);
  rates_cmd->add_option("--eps0", rates_opt.eps0);

  RunSpec compare_spec;
  std::string solver_list = "cd,pg";
  auto* compare_cmd = app.add_subcommand("compare", "per-epoch gaps of several solvers on one problem");
  add_common_options(*compare_cmd, compare_spec);
  compare_cmd->add_option("--solvers", solver_list, "comma-separated list of cd, pg");
  compare_cmd->add_option("--out", compare_spec.out, "CSV path (default stdout)");

  GenerateOptions gen;
  auto* gen_cmd = app.add_subcommand("generate", "write a seeded synthetic LIBSVM dataset");
  gen_cmd->add_option("--out", gen.out, "output path (default stdout)");
  gen_cmd->add_option("--features", gen.spec.features);
  gen_cmd->add_option("--examples", gen.spec.examples);
  gen_cmd->add_option("--density", gen.spec.density);
  gen_cmd->add_option("--noise", gen.spec.noise);
  gen_cmd->add_option("--seed", gen.spec.seed);
  gen_cmd->add_option("--target", gen.target, "regression | classification");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*solve_cmd) return cmd_solve(solve_spec, out, err);
    if (*rates_cmd) return cmd_rates(rates_spec, rates_opt, out, err);
    if (*compare_cmd) return cmd_compare(compare_spec, solver_list, out, err);
    if (*gen_cmd) return cmd_generate(gen, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace pdcert::cli

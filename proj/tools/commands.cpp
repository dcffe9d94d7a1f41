#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "nctorus/errors.hpp"
#include "nctorus/forms.hpp"

namespace nctorus::cli {

namespace {

// Agreement threshold of the two Yang-Mills routes, relative to max(1, YM).
constexpr double kTheoremTol = 1e-9;

struct Job {
  AlgebraPtr alg;
  double tol = 1e-10;
  std::uint64_t seed = 0;
  int samples = 8;
};

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad field '") + key + "': " + e.what());
  }
}

Job load_job(const json& config, const CommandOptions& opts) {
  if (!config.is_object()) throw ConfigError("config must be a JSON object");
  if (!config.contains("n")) throw ConfigError("missing field 'n'");
  const int n = get_or<int>(config, "n", 0);
  if (n < 2) throw ConfigError("n must be >= 2");
  DeformationMatrix theta =
      config.contains("theta") ? theta_from_json(config.at("theta"), n) : DeformationMatrix::zero(n);
  TruncationPolicy policy = policy_from_json(config.contains("truncation") ? config.at("truncation") : json());
  Job job;
  job.alg = TorusAlgebra::make(std::move(theta), policy);
  job.tol = opts.tol.value_or(get_or<double>(config, "tol", 1e-10));
  if (!(job.tol > 0.0)) throw ConfigError("tol must be positive");
  job.seed = opts.seed.value_or(get_or<std::uint64_t>(config, "seed", 0));
  job.samples = get_or<int>(config, "samples", 8);
  if (job.samples < 1) throw ConfigError("samples must be >= 1");
  return job;
}

json module_spec(const json& config) {
  return config.contains("module") ? config.at("module") : json{{"q", 1}, {"p", "free"}};
}

TorusMatrix load_projection_matrix(const json& config, const Job& job) {
  const json spec = module_spec(config);
  if (!spec.is_object()) throw ConfigError("'module' must be an object");
  const int q = get_or<int>(spec, "q", 0);
  if (q < 1) throw ConfigError("module rank q must be >= 1");
  const json p = spec.contains("p") ? spec.at("p") : json("free");
  if (p.is_string()) {
    if (p.get<std::string>() != "free") throw ConfigError("module 'p' must be \"free\" or a matrix");
    return TorusMatrix::identity(job.alg, q);
  }
  TorusMatrix m = matrix_from_json(p, job.alg);
  if (m.q() != q) throw ConfigError("module 'p' size does not match q");
  return m;
}

Convention connection_convention(const json& config) {
  if (!config.contains("connection")) return Convention::dynamical;
  const json& spec = config.at("connection");
  return convention_from_string(get_or<std::string>(spec, "convention", "dynamical"));
}

// Potentials as written in the config, before the Connection invariants are enforced.
std::vector<TorusMatrix> load_potentials(const json& config, const Job& job, const ProjectiveModule& m) {
  const Convention conv = connection_convention(config);
  const json spec = config.contains("connection") ? config.at("connection") : json::object();
  if (spec.contains("potentials")) {
    const json& pots = spec.at("potentials");
    if (!pots.is_array() || static_cast<int>(pots.size()) != job.alg->dim())
      throw ConfigError("'potentials' must hold one matrix per torus axis");
    std::vector<TorusMatrix> out;
    for (const auto& p : pots) {
      TorusMatrix a = matrix_from_json(p, job.alg);
      if (a.q() != m.q()) throw ConfigError("potential size does not match the module");
      out.push_back(std::move(a));
    }
    return out;
  }
  if (spec.contains("random")) {
    const json& r = spec.at("random");
    const int radius = get_or<int>(r, "radius", 1);
    const double scale = get_or<double>(r, "scale", 0.3);
    if (radius < 0 || !(scale >= 0.0)) throw ConfigError("random potentials need radius >= 0 and scale >= 0");
    std::mt19937_64 rng(job.seed);
    return random_potentials(m, conv, radius, scale, rng);
  }
  return std::vector<TorusMatrix>(static_cast<std::size_t>(job.alg->dim()), TorusMatrix::zero(job.alg, m.q()));
}

Connection load_connection(const json& config, const Job& job) {
  ModulePtr module = module_new(load_projection_matrix(config, job));
  std::vector<TorusMatrix> pots = load_potentials(config, job, *module);
  return Connection(module, connection_convention(config), std::move(pots));
}

double max_loss(const Connection& c) {
  double loss = c.module()->projection().max_truncation_loss();
  for (const auto& a : c.potentials()) loss = std::max(loss, a.max_truncation_loss());
  return loss;
}

json base_report(const std::string& command, const Job& job) {
  json warnings = json::array();
  if (job.alg->theta().looks_rational())
    warnings.push_back("theta looks rational; the canonical trace tau(a) = a_0 is used regardless");
  return {{"tool", "nctorus"},
          {"version", kToolVersion},
          {"command", command},
          {"n", job.alg->dim()},
          {"theta", theta_to_json(job.alg->theta())},
          {"truncation", policy_to_json(job.alg->policy())},
          {"tol", job.tol},
          {"seed", job.seed},
          {"warnings", warnings}};
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write " + path.string());
  os << j.dump(2) << '\n';
}

std::filesystem::path prepare_out_dir(const CommandOptions& opts) {
  std::filesystem::path dir(opts.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

json residuals_json(const ProjectionResiduals& r) {
  return {{"idempotent", r.idempotent}, {"self_adjoint", r.self_adjoint}};
}

double curvature_skew_residual(const CurvatureForm& f) {
  double worst = 0.0;
  for (const auto& fjk : f.components) worst = std::max(worst, mat_l1_norm(mat_adjoint(fjk) + fjk));
  return worst;
}

}  // namespace

CommandResult cmd_validate(const json& config, const CommandOptions& opts) {
  const Job job = load_job(config, opts);
  json report = base_report("validate", job);
  bool pass = true;
  report["checks"]["theta_skew"] = {{"pass", true}};

  const TorusMatrix p = load_projection_matrix(config, job);
  ProjectionResiduals pres;
  const bool is_proj = is_projection(p, ProjectiveModule::kProjectionTol, &pres);
  report["checks"]["projection"] = residuals_json(pres);
  report["checks"]["projection"]["tol"] = ProjectiveModule::kProjectionTol;
  report["checks"]["projection"]["pass"] = is_proj;
  pass = pass && is_proj;

  if (is_proj) {
    ModulePtr module = module_new(p);
    const Convention conv = connection_convention(config);
    std::vector<TorusMatrix> pots = load_potentials(config, job, *module);
    json pot_checks = json::array();
    bool pots_ok = true;
    for (const auto& a : pots) {
      PotentialResiduals r = potential_residuals(*module, conv, a);
      const bool ok = r.symmetry <= Connection::kInvariantTol && r.compression <= Connection::kInvariantTol;
      pots_ok = pots_ok && ok;
      pot_checks.push_back({{"symmetry", r.symmetry}, {"compression", r.compression}, {"pass", ok}});
    }
    report["checks"]["potentials"] = pot_checks;
    pass = pass && pots_ok;
    if (pots_ok) {
      Connection c(module, conv, std::move(pots));
      const double compat = check_compatibility(c, job.samples, job.seed);
      const bool ok = compat <= job.tol;
      report["checks"]["compatibility"] = {
          {"convention", to_string(conv)}, {"residual", compat}, {"samples", job.samples}, {"pass", ok}};
      pass = pass && ok;
      report["max_truncation_loss"] = max_loss(c);
    }
  }
  report["pass"] = pass;
  CommandResult res{pass ? kSuccess : kNumericalFailure, std::move(report)};
  if (!opts.out_dir.empty()) write_json(prepare_out_dir(opts) / "report.json", res.report);
  return res;
}

CommandResult cmd_ym(const json& config, const CommandOptions& opts) {
  const Job job = load_job(config, opts);
  const Connection c = load_connection(config, job);
  if (c.convention() != Convention::dynamical)
    throw ConfigError("ym expects a dynamical connection; it is mapped to the spectral side internally");

  const TwoFormMetric metric(job.alg->dim());
  const double yd = ym_dynamical(c);
  const Connection spectral = phi_map(c);
  const SpectralYangMills ys = ym_spectral(spectral, metric);
  const double constant = metric.constant();

  json report = base_report("ym", job);
  report["ym_dynamical"] = yd;
  report["ym_spectral"] = ys.value;
  report["constant_c"] = constant;
  if (yd == 0.0 && ys.value == 0.0) {
    report["ratio"] = nullptr;
    report["ratio_status"] = "exact-zero";
    report["relative_deviation"] = 0.0;
  } else if (yd == 0.0) {
    report["ratio"] = nullptr;
    report["ratio_status"] = "undefined";
    report["relative_deviation"] = nullptr;
  } else {
    const double ratio = ys.value / yd;
    report["ratio"] = ratio;
    report["ratio_status"] = "ok";
    report["relative_deviation"] = std::abs(ratio - constant) / constant;
  }
  const double theorem_residual = std::abs(ys.value - constant * yd) / std::max(1.0, yd);
  const bool pass = theorem_residual <= kTheoremTol;

  const CurvatureForm f = curvature(c);
  report["residuals"] = {
      {"theorem", theorem_residual},
      {"theorem_tol", kTheoremTol},
      {"cross_check_gap", ys.relative_gap},
      {"ym_spectral_basis_column", ys.basis_column},
      {"ym_spectral_closed_form", ys.closed_form},
      {"curvature_skew", curvature_skew_residual(f)},
      {"compatibility_dynamical", check_compatibility(c, job.samples, job.seed)},
      {"compatibility_spectral", check_compatibility(spectral, job.samples, job.seed)},
      {"projection", residuals_json(c.module()->residuals())},
  };
  report["max_truncation_loss"] = max_loss(c);
  report["pass"] = pass;

  CommandResult res{pass ? kSuccess : kNumericalFailure, std::move(report)};
  if (!opts.out_dir.empty()) write_json(prepare_out_dir(opts) / "report.json", res.report);
  return res;
}

CommandResult cmd_make_projection(const json& config, const CommandOptions& opts) {
  const Job job = load_job(config, opts);
  if (!config.contains("idempotent")) throw ConfigError("make-projection needs an 'idempotent' matrix");
  const TorusMatrix p = matrix_from_json(config.at("idempotent"), job.alg);
  const int max_iter = get_or<int>(config, "max_iter", 100);

  const ProjectionFromIdempotent out = idempotent_to_projection(p, {job.tol, max_iter});

  json report = base_report("make-projection", job);
  report["residuals"] = residuals_json(out.residuals);
  report["residuals"]["similarity"] = out.similarity;
  report["max_truncation_loss"] = std::max({out.p_tilde.max_truncation_loss(), out.z.max_truncation_loss()});
  report["pass"] = true;

  CommandResult res{kSuccess, std::move(report)};
  if (!opts.out_dir.empty()) {
    const auto dir = prepare_out_dir(opts);
    write_json(dir / "projection.json", {{"p", matrix_to_json(out.p_tilde)},
                                         {"z", matrix_to_json(out.z)},
                                         {"z_inv", matrix_to_json(out.z_inv)},
                                         {"residuals", res.report["residuals"]}});
    write_json(dir / "report.json", res.report);
  }
  return res;
}

CommandResult cmd_optimize(const json& config, const CommandOptions& opts) {
  const Job job = load_job(config, opts);
  const Connection start = load_connection(config, job);
  if (start.convention() != Convention::dynamical)
    throw ConfigError("optimize expects a dynamical connection (map spectral input through phi_inverse first)");

  DescentParams params;
  if (config.contains("descent")) {
    const json& d = config.at("descent");
    params.max_iter = get_or<int>(d, "max_iter", params.max_iter);
    params.grad_tol = get_or<double>(d, "grad_tol", params.grad_tol);
    params.armijo_c = get_or<double>(d, "armijo_c", params.armijo_c);
    params.step_init = get_or<double>(d, "step_init", params.step_init);
    params.step_shrink = get_or<double>(d, "step_shrink", params.step_shrink);
  }
  params.seed = job.seed;
  const DescentTrace trace = minimize_ym(start, params);

  json report = base_report("optimize", job);
  report["initial_ym"] = trace.records.front().ym;
  report["final_ym"] = trace.records.back().ym;
  report["final_grad_norm"] = trace.records.back().grad_norm;
  report["iterations"] = trace.records.size() - 1;
  report["converged"] = trace.converged;
  report["line_search_failed"] = trace.line_search_failed;
  report["max_truncation_loss"] = max_loss(*trace.final_connection);
  report["pass"] = !trace.line_search_failed;

  CommandResult res{trace.line_search_failed ? kNumericalFailure : kSuccess, std::move(report)};
  if (!opts.out_dir.empty()) {
    const auto dir = prepare_out_dir(opts);
    std::ofstream os(dir / "trace.jsonl");
    if (!os) throw ConfigError("cannot write trace.jsonl");
    write_trace_jsonl(trace, os);
    write_json(dir / "final_connection.json", connection_to_json(*trace.final_connection));
    write_json(dir / "report.json", res.report);
  }
  return res;
}

CommandResult run_command(const std::string& name, const json& config, const CommandOptions& opts) {
  auto failure = [&](int code, const std::string& kind, const std::string& what, std::optional<double> residual) {
    json report = {{"tool", "nctorus"}, {"version", kToolVersion}, {"command", name}, {"error", what},
                   {"error_kind", kind}, {"pass", false}};
    if (residual) report["residual"] = *residual;
    return CommandResult{code, std::move(report)};
  };
  try {
    if (name == "validate") return cmd_validate(config, opts);
    if (name == "ym") return cmd_ym(config, opts);
    if (name == "make-projection") return cmd_make_projection(config, opts);
    if (name == "optimize") return cmd_optimize(config, opts);
    return failure(kConfigError, "config", "unknown command '" + name + "'", std::nullopt);
  } catch (const ConfigError& e) {
    return failure(kConfigError, "config", e.what(), std::nullopt);
  } catch (const json::exception& e) {
    return failure(kConfigError, "config", e.what(), std::nullopt);
  } catch (const DimensionError& e) {
    return failure(kConfigError, "config", e.what(), std::nullopt);
  } catch (const ConventionError& e) {
    return failure(kConfigError, "config", e.what(), std::nullopt);
  } catch (const NumericalError& e) {
    return failure(kNumericalFailure, "numerical", e.what(), e.residual());
  } catch (const TruncationOverflow& e) {
    return failure(kNumericalFailure, "truncation", e.what(), std::nullopt);
  }
}

}  // namespace nctorus::cli

#include "invlag/commands.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

namespace invlag {

using nlohmann::ordered_json;

namespace {

constexpr const char* kToolVersion = "0.1.0";

std::string iso_timestamp() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

ordered_json base_report(const std::string& command, const std::string& digest,
                         const CommandOptions& opts) {
  ordered_json j;
  j["tool"] = "invlag";
  j["version"] = kToolVersion;
  j["command"] = command;
  j["input_digest"] = digest;
  j["seed"] = opts.seed;
  j["samples"] = opts.samples;
  j["tol"] = opts.tol;
  j["timestamp"] = iso_timestamp();  // excluded from the digest and from determinism checks
  return j;
}

ordered_json verdict_json(const ZeroVerdict& v) {
  ordered_json j;
  j["verdict"] = v.kind_str();
  j["max_residual"] = v.max_residual;
  j["samples_used"] = v.samples_used;
  if (v.witness) {
    j["witness"] = *v.witness;
    j["witness_value"] = v.witness_value;
  }
  return j;
}

ordered_json regularity_json(const RegularityVerdict& v) {
  ordered_json j;
  j["verdict"] = v.kind == Regularity::Regular ? "Regular" : "Singular";
  j["det_identically_zero"] = v.identically_zero;
  if (v.witness) j["witness"] = *v.witness;
  if (std::isfinite(v.min_abs_det)) j["min_abs_det"] = v.min_abs_det;
  return j;
}

ordered_json check_report_json(const CheckReport& r) {
  ordered_json j;
  j["symmetry"] = r.symmetric ? "ProvedZero" : "Nonzero";
  j["regularity"] = regularity_json(r.regularity);
  j["nabla"] = verdict_json(r.nabla);
  j["phi"] = verdict_json(r.phi);
  j["closure"] = verdict_json(r.closure);
  j["passed"] = r.passed();
  if (!r.warning.empty()) j["warning"] = r.warning;
  return j;
}

ordered_json cochain1_json(const Cochain1& nu) {
  ordered_json arr = ordered_json::array();
  for (const auto& v : nu.nu) arr.push_back(v.str());
  return arr;
}

ordered_json cochain2_json(const Cochain2& mu) {
  ordered_json arr = ordered_json::array();
  for (int i = 1; i <= mu.dim(); ++i) {
    for (int j = i + 1; j <= mu.dim(); ++j) {
      if (!mu.at(i, j).is_zero()) arr.push_back({i, j, mu.at(i, j).str()});
    }
  }
  return arr;
}

ordered_json obstruction_json(const ObstructionData& d, const std::vector<std::string>& names) {
  ordered_json j;
  j["nu"] = cochain1_json(d.nu);
  j["mu"] = cochain2_json(d.mu);
  j["affine_ok"] = d.affine_ok;
  j["cocycle_ok"] = d.cocycle_ok;
  j["chi_ok"] = d.chi_ok;
  j["exact"] = d.exact;
  j["extracted_at_origin"] = d.extracted_at_origin;
  ordered_json V = ordered_json::array();
  for (const auto& v : d.V) V.push_back(v.str(names));
  j["ep_defect"] = V;
  if (!d.detail.empty()) j["detail"] = d.detail;
  return j;
}

ordered_json family_json(const AnsatzFamily& f) {
  ordered_json j;
  j["degree"] = f.degree;
  j["dimension"] = f.family_dim();
  ordered_json legend = ordered_json::array();
  for (size_t t = 0; t < f.slots.size() * f.monomials.size(); ++t) legend.push_back(f.legend(t));
  j["legend"] = legend;
  ordered_json basis = ordered_json::array();
  for (const auto& vec : f.basis) {
    ordered_json row = ordered_json::array();
    for (const auto& c : vec) row.push_back(c.str());
    basis.push_back(row);
  }
  j["basis"] = basis;
  j["generator_det_zero"] = f.generator_det_zero;
  j["generic_det_zero"] = f.generic_det_zero;
  ordered_json weights = ordered_json::array();
  for (const auto& wgt : f.generic_weights) weights.push_back(wgt.str());
  j["generic_weights"] = weights;
  return j;
}

CommandOptions effective_options(const ProblemFile& pf, const CommandOptions& cli) {
  CommandOptions opts = cli;
  if (pf.region) {
    if (pf.region->seed && !cli.seed_overrides_file) opts.seed = *pf.region->seed;
    if (pf.region->samples && !cli.samples_overrides_file) opts.samples = *pf.region->samples;
  }
  return opts;
}

}  // namespace

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  std::ostringstream out;
  out << std::hex << hash;
  return out.str();
}

CommandResult cmd_validate(const ProblemFile& pf, const CommandOptions& opts) {
  CommandResult res;
  res.report = base_report("validate", "", opts);
  LieAlgebra alg = pf.make_algebra();
  AlgebraValidation val = alg.validate();
  res.report["algebra"] = {{"dim", alg.dim()}, {"names", alg.names()}};
  res.report["valid"] = val.ok;
  if (!val.ok) {
    res.report["message"] = val.message;
    if (val.offending) {
      auto [i, j, k, m] = *val.offending;
      res.report["offending"] = {i, j, k, m};
    }
    res.exit_code = 1;
  } else {
    BracketReport brackets = verify_basis_brackets(alg);
    res.report["basis_brackets_ok"] = brackets.ok;
    if (!brackets.ok) {
      res.report["basis_brackets_message"] = brackets.message;
      res.exit_code = 1;
    }
  }
  res.report["verdict"] = res.exit_code == 0 ? "valid" : "invalid";
  return res;
}

CommandResult cmd_cohomology(const ProblemFile& pf, const CommandOptions& opts) {
  CommandResult res;
  res.report = base_report("cohomology", "", opts);
  LieAlgebra alg = pf.make_algebra();
  AlgebraValidation val = alg.validate();
  if (!val.ok) throw ProblemError("algebra invalid: " + val.message);
  auto [h1, h2] = cohomology_dims(alg);
  res.report["algebra"] = {{"dim", alg.dim()}, {"names", alg.names()}};
  res.report["h1"] = h1;
  res.report["h2"] = h2;
  res.report["verdict"] = "ok";
  return res;
}

CommandResult cmd_helmholtz(const ProblemFile& pf, const CommandOptions& cli,
                            const std::string& ansatz) {
  CommandOptions opts = effective_options(pf, cli);
  CommandResult res;
  res.report = base_report("helmholtz", "", opts);
  res.report["ansatz"] = ansatz;
  LieAlgebra alg = pf.make_algebra();
  ReducedSODE sode = pf.make_sode(alg);
  Region region = pf.make_region(alg, opts.seed, opts.samples);

  ordered_json region_meta;
  {
    ordered_json constraints = ordered_json::array();
    for (const auto& c : region.constraints)
      constraints.push_back(c.expr.str(alg.names()) + (c.positive ? " > 0" : " < 0"));
    region_meta["constraints"] = constraints;
    ordered_json box = ordered_json::array();
    for (const auto& [lo, hi] : region.box) box.push_back({lo, hi});
    region_meta["box"] = box;
    region_meta["samples"] = region.samples;
    region_meta["seed"] = region.seed;
  }
  res.report["region"] = region_meta;

  if (ansatz == "given") {
    std::optional<Multiplier> k = pf.make_multiplier(alg);
    if (!k) {
      if (auto l = pf.make_lagrangian(alg)) k = hessian(*l, alg.dim());
    }
    if (!k)
      throw ProblemError("helmholtz --ansatz given needs a [multiplier] or [lagrangian] section");
    CheckReport report = check_multiplier(sode, *k, region, opts.tol);
    res.report["check"] = check_report_json(report);
    res.report["verdict"] = report.passed() ? "pass" : "fail: " + report.failing_condition();
    res.exit_code = report.passed() ? 0 : 1;
    return res;
  }

  int degree = 0;
  if (ansatz == "constant") {
    degree = 0;
  } else if (ansatz.rfind("poly:", 0) == 0) {
    degree = std::stoi(ansatz.substr(5));
  } else {
    throw ProblemError("unknown ansatz mode '" + ansatz + "' (use given|constant|poly:D)");
  }
  AnsatzFamily family = solve_ansatz(sode, degree);
  res.report["family"] = family_json(family);
  bool regular = family.family_dim() > 0 && !family.generic_det_zero;
  res.report["verdict"] =
      regular ? "solutions-found"
              : (family.family_dim() == 0 ? "no-solutions" : "all members singular");
  res.exit_code = regular ? 0 : 1;
  return res;
}

CommandResult cmd_obstruct(const ProblemFile& pf, const CommandOptions& cli,
                           const std::string& ansatz) {
  CommandOptions opts = effective_options(pf, cli);
  CommandResult res;
  res.report = base_report("obstruct", "", opts);
  res.report["ansatz"] = ansatz;
  LieAlgebra alg = pf.make_algebra();
  ReducedSODE sode = pf.make_sode(alg);
  Region region = pf.make_region(alg, opts.seed, opts.samples);

  DecideSource source = [&]() -> DecideSource {
    if (ansatz == "constant") return FromAnsatz{0};
    if (ansatz.rfind("poly:", 0) == 0) return FromAnsatz{std::stoi(ansatz.substr(5))};
    if (ansatz != "given")
      throw ProblemError("unknown ansatz mode '" + ansatz + "' (use given|constant|poly:D)");
    if (auto l = pf.make_lagrangian(alg)) return FromLagrangian{*l};
    if (auto k = pf.make_multiplier(alg)) return FromMultiplier{*k};
    throw ProblemError("obstruct needs a [lagrangian] or polynomial [multiplier] section");
  }();
  if (std::holds_alternative<FromMultiplier>(source)) {
    if (!std::get<FromMultiplier>(source).k.all_polynomial(sode.params))
      throw ProblemError("obstruct with a multiplier source requires polynomial entries");
  }

  DecideVerdict verdict = decide(sode, source, region, opts.tol);
  res.report["verdict"] = verdict_name(verdict);
  if (std::holds_alternative<LagrangianFound>(verdict)) {
    const auto& found = std::get<LagrangianFound>(verdict);
    res.report["lagrangian"] = found.lagrangian.str(alg.names());
    res.report["obstructions"] = obstruction_json(found.obstructions, alg.names());
    if (!found.note.empty()) res.report["note"] = found.note;
    res.exit_code = 0;
  } else if (std::holds_alternative<NoGoSingular>(verdict)) {
    res.report["detail"] = std::get<NoGoSingular>(verdict).detail;
    res.exit_code = 1;
  } else if (std::holds_alternative<Obstructed>(verdict)) {
    const auto& obs = std::get<Obstructed>(verdict);
    res.report["cohomology_class"] = obs.cohomology_class;
    res.report["class_representative"] = obs.detail;
    res.exit_code = 1;
  } else {
    const auto& fail = std::get<CheckFailed>(verdict);
    res.report["failing_condition"] = fail.condition;
    res.report["check"] = check_report_json(fail.report);
    res.exit_code = 1;
  }
  return res;
}

CommandResult cmd_integrate(const ProblemFile& pf, const CommandOptions& cli,
                            bool with_reconstruction) {
  CommandOptions opts = effective_options(pf, cli);
  CommandResult res;
  res.report = base_report("integrate", "", opts);
  LieAlgebra alg = pf.make_algebra();
  ReducedSODE sode = pf.make_sode(alg);
  if (!pf.integrate) throw ProblemError("integrate needs an [integrate] section");
  const auto& spec = *pf.integrate;
  if (static_cast<int>(spec.w0.size()) != alg.dim())
    throw ProblemError("integrate.w0 dimension mismatch");
  if (spec.dt <= 0 || spec.steps < 1) throw ProblemError("integrate needs dt > 0 and steps >= 1");

  std::optional<Expr> l = pf.make_lagrangian(alg);
  try {
    Trajectory traj = integrate(sode, spec.w0, spec.dt, spec.steps, l);
    std::optional<std::vector<Matrix>> group;
    if (with_reconstruction) {
      auto rep = pf.make_representation(alg);
      if (!rep) throw ProblemError("--reconstruct needs a [representation] section");
      group = reconstruct(*rep, traj, mat_identity(rep->m));
    }
    res.csv = trajectory_csv(traj, group ? &*group : nullptr);
    res.report["steps"] = spec.steps;
    res.report["dt"] = spec.dt;
    res.report["w0"] = spec.w0;
    res.report["final_w"] = traj.w.back();
    if (!traj.energy.empty()) {
      double e0 = traj.energy.front();
      double drift = 0;
      for (double e : traj.energy) drift = std::max(drift, std::fabs(e - e0));
      res.report["energy_initial"] = e0;
      res.report["energy_max_drift"] = drift;
    }
    res.report["reconstructed"] = with_reconstruction;
    res.report["verdict"] = "completed";
  } catch (const TrajectoryDomainError& e) {
    res.report["verdict"] = "domain-error";
    res.report["error"] = e.what();
    res.report["time_reached"] = e.time_reached;
    res.exit_code = 3;
  }
  return res;
}

CommandResult run_command(const std::string& command, const std::string& path,
                          const CommandOptions& opts, const std::string& ansatz,
                          bool with_reconstruction) {
  CommandResult res;
  std::string raw;
  try {
    std::ifstream in(path);
    if (!in) throw ProblemError("cannot open problem file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    raw = buf.str();
    ProblemFile pf = parse_problem_file(raw);
    if (command == "validate") res = cmd_validate(pf, opts);
    else if (command == "cohomology") res = cmd_cohomology(pf, opts);
    else if (command == "helmholtz") res = cmd_helmholtz(pf, opts, ansatz);
    else if (command == "obstruct") res = cmd_obstruct(pf, opts, ansatz);
    else if (command == "integrate") res = cmd_integrate(pf, opts, with_reconstruction);
    else throw ProblemError("unknown command '" + command + "'");
    res.report["input_digest"] = "fnv1a:" + fnv1a_hex(raw);
    return res;
  } catch (const ProblemError& e) {
    res.exit_code = 2;
    res.report = ordered_json{{"tool", "invlag"},
                              {"command", command},
                              {"verdict", "input-error"},
                              {"error", e.what()}};
    if (e.line > 0) res.report["line"] = e.line;
  } catch (const ParseError& e) {
    res.exit_code = 2;
    res.report = ordered_json{{"tool", "invlag"},
                              {"command", command},
                              {"verdict", "parse-error"},
                              {"error", e.what()},
                              {"position", e.position}};
  } catch (const NotPolynomialError& e) {
    res.exit_code = 2;
    res.report = ordered_json{
        {"tool", "invlag"}, {"command", command}, {"verdict", "input-error"}, {"error", e.what()}};
  } catch (const UnassignedParameter& e) {
    res.exit_code = 2;
    res.report = ordered_json{
        {"tool", "invlag"}, {"command", command}, {"verdict", "input-error"}, {"error", e.what()}};
  } catch (const SamplerExhausted& e) {
    res.exit_code = 3;
    res.report = ordered_json{
        {"tool", "invlag"}, {"command", command}, {"verdict", "numeric-error"}, {"error", e.what()}};
  } catch (const EvalError& e) {
    res.exit_code = 3;
    res.report = ordered_json{
        {"tool", "invlag"}, {"command", command}, {"verdict", "numeric-error"}, {"error", e.what()}};
  }
  if (!raw.empty()) res.report["input_digest"] = "fnv1a:" + fnv1a_hex(raw);
  return res;
}

}  // namespace invlag

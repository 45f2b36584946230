#include "irsolve/io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace irsolve {

namespace {

using json = nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct DoubleParam {
  const char* name;
  double AlgorithmParams::*member;
};
struct IntParam {
  const char* name;
  int AlgorithmParams::*member;
};

constexpr DoubleParam kDoubleParams[] = {
    {"alpha_R", &AlgorithmParams::alpha_R},     {"alpha", &AlgorithmParams::alpha},
    {"M", &AlgorithmParams::M},                 {"sigma_min", &AlgorithmParams::sigma_min},
    {"sigma_max", &AlgorithmParams::sigma_max}, {"mu_min", &AlgorithmParams::mu_min},
    {"mu_max", &AlgorithmParams::mu_max},       {"beta_c", &AlgorithmParams::beta_c},
    {"beta_PDP", &AlgorithmParams::beta_PDP},   {"r", &AlgorithmParams::r},
    {"r_feas", &AlgorithmParams::r_feas},       {"eps_prec_bar", &AlgorithmParams::eps_prec_bar},
    {"theta_0", &AlgorithmParams::theta_0},     {"mu_init", &AlgorithmParams::mu_init},
    {"kappa_R", &AlgorithmParams::kappa_R},     {"kappa_T", &AlgorithmParams::kappa_T},
    {"kappa", &AlgorithmParams::kappa},         {"kappa_phi", &AlgorithmParams::kappa_phi},
};
constexpr IntParam kIntParams[] = {
    {"N_prec", &AlgorithmParams::N_prec},
    {"N_acce", &AlgorithmParams::N_acce},
};

// ---- writing ----

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json vec(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(num(v[i]));
  return a;
}

json level(const PrecisionLevel& y) { return json{{"gf", num(y.gf)}, {"gh", num(y.gh)}}; }

json ledger(const EvaluationLedger& l) {
  return json{{"f_evals", l.f_evals},
              {"gradf_evals", l.gradf_evals},
              {"h_evals", l.h_evals},
              {"gradh_evals", l.gradh_evals}};
}

json certificate(const SolveCertificate& c) {
  return json{{"model_decrease", num(c.model_decrease)},
              {"stationarity_residual", num(c.stationarity_residual)},
              {"step_norm", num(c.step_norm)},
              {"tangent_violation", num(c.tangent_violation)},
              {"kappa_ratio", num(c.kappa_ratio)},
              {"kappa_T_ratio", num(c.kappa_T_ratio)},
              {"kappa_phi", num(c.kappa_phi)},
              {"projection_residual", num(c.projection_residual)},
              {"iterations", c.iterations},
              {"flagged", c.flagged}};
}

json params_json(const AlgorithmParams& p) {
  json j = json::object();
  for (const auto& d : kDoubleParams) j[d.name] = num(p.*d.member);
  for (const auto& i : kIntParams) j[i.name] = p.*i.member;
  return j;
}

json iteration(const IterationRecord& r) {
  json mu = json::array();
  for (double m : r.mu_attempts) mu.push_back(num(m));
  return json{
      {"k", r.k},
      {"x_k", vec(r.x_k)},
      {"x_R", vec(r.x_R)},
      {"x_next", vec(r.x_next)},
      {"y_k", level(r.y_k)},
      {"y_R", level(r.y_R)},
      {"y_next", level(r.y_next)},
      {"theta_before", num(r.theta_before)},
      {"theta_after", num(r.theta_after)},
      {"mu_k", num(r.mu_k)},
      {"ell_count", r.ell_count},
      {"mu_attempts", mu},
      {"h_xk_yk", num(r.h_xk_yk)},
      {"h_xk_yR", num(r.h_xk_yR)},
      {"h_xR_yR", num(r.h_xR_yR)},
      {"h_xnext_ynext", num(r.h_xnext_ynext)},
      {"g_yk", num(r.g_yk)},
      {"g_yR", num(r.g_yR)},
      {"g_ynext", num(r.g_ynext)},
      {"f_xk_yk", num(r.f_xk_yk)},
      {"f_xk_yR", num(r.f_xk_yR)},
      {"f_xR_yR", num(r.f_xR_yR)},
      {"f_xnext_ynext", num(r.f_xnext_ynext)},
      {"phi_xR_yR", num(r.phi_xR_yR)},
      {"phi_xk_yR", num(r.phi_xk_yR)},
      {"restoration_distance", num(r.restoration_distance)},
      {"step_norm", num(r.step_norm)},
      {"stationarity", num(r.stationarity)},
      {"restoration",
       json{{"status", to_string(r.restoration_status)},
            {"tests", r.restoration_tests},
            {"refinements", r.restoration_refinements},
            {"sigma_max", num(r.sigma_max)},
            {"max_step_ratio", num(r.max_step_ratio)},
            {"max_kappa_R", num(r.max_kappa_R)},
            {"max_kappa_phi", num(r.max_kappa_phi)},
            {"flagged", r.restoration_flagged},
            {"ledger", ledger(r.restoration_ledger)}}},
      {"tangent",
       json{{"accepted", certificate(r.tangent.accepted)},
            {"max_kappa_ratio", num(r.tangent.max_kappa_ratio)},
            {"max_kappa_T_ratio", num(r.tangent.max_kappa_T_ratio)},
            {"max_projection_residual", num(r.tangent.max_projection_residual)},
            {"flagged", r.tangent.flagged}}},
      {"iteration_ledger", ledger(r.iteration_ledger)},
      {"cumulative_ledger", ledger(r.cumulative_ledger)},
  };
}

// ---- reading ----

[[noreturn]] void schema(const std::string& path, const std::string& what) {
  throw SchemaError("trace field '" + path + "': " + what);
}

const json& field(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) schema(path, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) schema(path.empty() ? key : path + "." + key, "missing");
  return *it;
}

double get_num(const json& j, const std::string& key, const std::string& path) {
  const json& v = field(j, key, path);
  if (v.is_null()) return kNaN;
  if (!v.is_number()) schema(path + "." + key, "expected a number");
  return v.get<double>();
}

template <typename T>
T get_int(const json& j, const std::string& key, const std::string& path) {
  const json& v = field(j, key, path);
  if (!v.is_number_integer()) schema(path + "." + key, "expected an integer");
  return v.get<T>();
}

bool get_bool(const json& j, const std::string& key, const std::string& path) {
  const json& v = field(j, key, path);
  if (!v.is_boolean()) schema(path + "." + key, "expected a boolean");
  return v.get<bool>();
}

std::string get_str(const json& j, const std::string& key, const std::string& path) {
  const json& v = field(j, key, path);
  if (!v.is_string()) schema(path + "." + key, "expected a string");
  return v.get<std::string>();
}

Vector get_vec(const json& j, const std::string& key, const std::string& path) {
  const json& v = field(j, key, path);
  if (!v.is_array()) schema(path + "." + key, "expected an array");
  Vector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i].is_null()) {
      out[static_cast<Eigen::Index>(i)] = kNaN;
    } else if (v[i].is_number()) {
      out[static_cast<Eigen::Index>(i)] = v[i].get<double>();
    } else {
      schema(path + "." + key, "expected numbers");
    }
  }
  return out;
}

PrecisionLevel get_level(const json& j, const std::string& key, const std::string& path) {
  const json& v = field(j, key, path);
  const std::string p = path + "." + key;
  PrecisionLevel y;
  y.gf = get_num(v, "gf", p);
  y.gh = get_num(v, "gh", p);
  return y;
}

EvaluationLedger get_ledger(const json& j, const std::string& key, const std::string& path) {
  const json& v = field(j, key, path);
  const std::string p = path + "." + key;
  return {get_int<std::uint64_t>(v, "f_evals", p), get_int<std::uint64_t>(v, "gradf_evals", p),
          get_int<std::uint64_t>(v, "h_evals", p), get_int<std::uint64_t>(v, "gradh_evals", p)};
}

SolveCertificate get_certificate(const json& j, const std::string& key, const std::string& path) {
  const json& v = field(j, key, path);
  const std::string p = path + "." + key;
  SolveCertificate c;
  c.model_decrease = get_num(v, "model_decrease", p);
  c.stationarity_residual = get_num(v, "stationarity_residual", p);
  c.step_norm = get_num(v, "step_norm", p);
  c.tangent_violation = get_num(v, "tangent_violation", p);
  c.kappa_ratio = get_num(v, "kappa_ratio", p);
  c.kappa_T_ratio = get_num(v, "kappa_T_ratio", p);
  c.kappa_phi = get_num(v, "kappa_phi", p);
  c.projection_residual = get_num(v, "projection_residual", p);
  c.iterations = get_int<int>(v, "iterations", p);
  c.flagged = get_bool(v, "flagged", p);
  return c;
}

IterationRecord get_iteration(const json& j, const std::string& p) {
  IterationRecord r;
  r.k = get_int<int>(j, "k", p);
  r.x_k = get_vec(j, "x_k", p);
  r.x_R = get_vec(j, "x_R", p);
  r.x_next = get_vec(j, "x_next", p);
  r.y_k = get_level(j, "y_k", p);
  r.y_R = get_level(j, "y_R", p);
  r.y_next = get_level(j, "y_next", p);
  r.theta_before = get_num(j, "theta_before", p);
  r.theta_after = get_num(j, "theta_after", p);
  r.mu_k = get_num(j, "mu_k", p);
  r.ell_count = get_int<int>(j, "ell_count", p);
  const Vector mu = get_vec(j, "mu_attempts", p);
  r.mu_attempts.assign(mu.data(), mu.data() + mu.size());
  r.h_xk_yk = get_num(j, "h_xk_yk", p);
  r.h_xk_yR = get_num(j, "h_xk_yR", p);
  r.h_xR_yR = get_num(j, "h_xR_yR", p);
  r.h_xnext_ynext = get_num(j, "h_xnext_ynext", p);
  r.g_yk = get_num(j, "g_yk", p);
  r.g_yR = get_num(j, "g_yR", p);
  r.g_ynext = get_num(j, "g_ynext", p);
  r.f_xk_yk = get_num(j, "f_xk_yk", p);
  r.f_xk_yR = get_num(j, "f_xk_yR", p);
  r.f_xR_yR = get_num(j, "f_xR_yR", p);
  r.f_xnext_ynext = get_num(j, "f_xnext_ynext", p);
  r.phi_xR_yR = get_num(j, "phi_xR_yR", p);
  r.phi_xk_yR = get_num(j, "phi_xk_yR", p);
  r.restoration_distance = get_num(j, "restoration_distance", p);
  r.step_norm = get_num(j, "step_norm", p);
  r.stationarity = get_num(j, "stationarity", p);

  const json& rest = field(j, "restoration", p);
  const std::string rp = p + ".restoration";
  r.restoration_status = restoration_status_from_string(get_str(rest, "status", rp));
  r.restoration_tests = get_int<int>(rest, "tests", rp);
  r.restoration_refinements = get_int<int>(rest, "refinements", rp);
  r.sigma_max = get_num(rest, "sigma_max", rp);
  r.max_step_ratio = get_num(rest, "max_step_ratio", rp);
  r.max_kappa_R = get_num(rest, "max_kappa_R", rp);
  r.max_kappa_phi = get_num(rest, "max_kappa_phi", rp);
  r.restoration_flagged = get_int<int>(rest, "flagged", rp);
  r.restoration_ledger = get_ledger(rest, "ledger", rp);

  const json& tan = field(j, "tangent", p);
  const std::string tp = p + ".tangent";
  r.tangent.accepted = get_certificate(tan, "accepted", tp);
  r.tangent.max_kappa_ratio = get_num(tan, "max_kappa_ratio", tp);
  r.tangent.max_kappa_T_ratio = get_num(tan, "max_kappa_T_ratio", tp);
  r.tangent.max_projection_residual = get_num(tan, "max_projection_residual", tp);
  r.tangent.flagged = get_int<int>(tan, "flagged", tp);

  r.iteration_ledger = get_ledger(j, "iteration_ledger", p);
  r.cumulative_ledger = get_ledger(j, "cumulative_ledger", p);
  return r;
}

// ---- config ----

[[noreturn]] void config_error(const std::string& key, const std::string& what) {
  throw ConfigError("config key '" + key + "': " + what);
}

double cfg_num(const json& v, const std::string& key) {
  if (!v.is_number()) config_error(key, "expected a number");
  return v.get<double>();
}

int cfg_int(const json& v, const std::string& key) {
  if (!v.is_number_integer()) config_error(key, "expected an integer");
  const auto i = v.get<long long>();
  if (i < std::numeric_limits<int>::min() || i > std::numeric_limits<int>::max())
    config_error(key, "out of range");
  return static_cast<int>(i);
}

std::vector<double> cfg_array(const json& v, const std::string& key) {
  if (!v.is_array()) config_error(key, "expected an array of numbers");
  std::vector<double> out;
  for (const auto& e : v) out.push_back(cfg_num(e, key));
  return out;
}

}  // namespace

std::string report_to_json(const RunReport& report) {
  json its = json::array();
  for (const auto& r : report.iterations) its.push_back(iteration(r));
  json assumptions = nullptr;
  if (report.assumptions) {
    assumptions = json{{"beta", num(report.assumptions->beta)},
                       {"gamma", num(report.assumptions->gamma)},
                       {"k_R", report.assumptions->k_R}};
  }
  const ProblemConstants& pc = report.problem_constants;
  json j{
      {"trace_version", kTraceVersion},
      {"problem_id", report.problem_id},
      {"status", to_string(report.status)},
      {"final_x", vec(report.final_x)},
      {"final_y", level(report.final_y)},
      {"final_infeasibility", num(report.final_infeasibility)},
      {"final_residual", num(report.final_residual)},
      {"total", ledger(report.total)},
      {"tolerances",
       json{{"eps_feas", num(report.tol.eps_feas)},
            {"eps_prec", num(report.tol.eps_prec)},
            {"eps_opt", num(report.tol.eps_opt)}}},
      {"budget", report.budget},
      {"params", params_json(report.params)},
      {"problem_constants",
       json{{"L_f", num(pc.L_f)},
            {"L_h", num(pc.L_h)},
            {"L_c", num(pc.L_c)},
            {"C_f", num(pc.C_f)},
            {"C_h", num(pc.C_h)},
            {"C_g", num(pc.C_g)},
            {"provenance", to_string(pc.provenance)}}},
      {"assumptions", assumptions},
      {"hessian", to_string(report.hessian)},
      {"iterations", its},
  };
  return j.dump(1) + "\n";
}

RunReport report_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("trace is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) schema("", "expected an object");
  if (get_int<int>(j, "trace_version", "") != kTraceVersion)
    schema("trace_version", "unsupported version");

  RunReport r;
  r.problem_id = get_str(j, "problem_id", "");
  r.status = run_status_from_string(get_str(j, "status", ""));
  try {
    r.hessian = hessian_policy_from_string(get_str(j, "hessian", ""));
  } catch (const ConfigError& e) {
    schema("hessian", e.what());
  }
  r.final_x = get_vec(j, "final_x", "");
  r.final_y = get_level(j, "final_y", "");
  r.final_infeasibility = get_num(j, "final_infeasibility", "");
  r.final_residual = get_num(j, "final_residual", "");
  r.total = get_ledger(j, "total", "");

  const json& tol = field(j, "tolerances", "");
  r.tol.eps_feas = get_num(tol, "eps_feas", "tolerances");
  r.tol.eps_prec = get_num(tol, "eps_prec", "tolerances");
  r.tol.eps_opt = get_num(tol, "eps_opt", "tolerances");
  r.budget = get_int<int>(j, "budget", "");

  const json& params = field(j, "params", "");
  for (const auto& d : kDoubleParams) r.params.*d.member = get_num(params, d.name, "params");
  for (const auto& i : kIntParams) r.params.*i.member = get_int<int>(params, i.name, "params");

  const json& pc = field(j, "problem_constants", "");
  const std::string pp = "problem_constants";
  r.problem_constants.L_f = get_num(pc, "L_f", pp);
  r.problem_constants.L_h = get_num(pc, "L_h", pp);
  r.problem_constants.L_c = get_num(pc, "L_c", pp);
  r.problem_constants.C_f = get_num(pc, "C_f", pp);
  r.problem_constants.C_h = get_num(pc, "C_h", pp);
  r.problem_constants.C_g = get_num(pc, "C_g", pp);
  r.problem_constants.provenance = provenance_from_string(get_str(pc, "provenance", pp));

  const json& a = field(j, "assumptions", "");
  if (!a.is_null()) {
    OracleAssumptions oa;
    oa.beta = get_num(a, "beta", "assumptions");
    oa.gamma = get_num(a, "gamma", "assumptions");
    oa.k_R = get_int<int>(a, "k_R", "assumptions");
    r.assumptions = oa;
  }

  const json& its = field(j, "iterations", "");
  if (!its.is_array()) schema("iterations", "expected an array");
  for (std::size_t i = 0; i < its.size(); ++i)
    r.iterations.push_back(get_iteration(its[i], "iterations[" + std::to_string(i) + "]"));
  return r;
}

std::string audit_to_json(const AuditReport& audit, const TheoreticalConstants& tc) {
  json checks = json::array();
  for (const auto& c : audit.checks) {
    checks.push_back(json{{"name", c.name},
                          {"passed", c.passed},
                          {"evaluable", c.evaluable},
                          {"worst_margin", num(c.worst_margin)},
                          {"instances", c.instances}});
  }
  json violations = json::array();
  for (const auto& v : audit.violations)
    violations.push_back(json{{"check", v.check}, {"iteration", v.iteration}, {"detail", v.detail}});
  const RealizedConstants& rc = audit.realized;
  json j{
      {"passed", audit.passed()},
      {"kappa_source", audit.kappa_source},
      {"checks", checks},
      {"violations", violations},
      {"realized",
       json{{"kappa_R", num(rc.kappa_R)},
            {"kappa_T", num(rc.kappa_T)},
            {"kappa", num(rc.kappa)},
            {"kappa_phi", num(rc.kappa_phi)},
            {"sigma_max", num(rc.sigma_max)},
            {"mu_max", num(rc.mu_max)},
            {"sum_infeasibility", num(rc.sum_infeasibility)},
            {"sum_step_sq", num(rc.sum_step_sq)},
            {"sum_residual_sq", num(rc.sum_residual_sq)},
            {"max_projection_residual", num(rc.max_projection_residual)},
            {"N_hinfeas", rc.N_hinfeas},
            {"N_ginfeas", rc.N_ginfeas},
            {"N_infeas", rc.N_infeas},
            {"N_opt", rc.N_opt},
            {"N_bad", rc.N_bad}}},
      {"constants",
       json{{"kappa_R", num(tc.kappas.kappa_R)},
            {"kappa_T", num(tc.kappas.kappa_T)},
            {"kappa", num(tc.kappas.kappa)},
            {"kappa_phi", num(tc.kappas.kappa_phi)},
            {"extras_known", tc.extras.known},
            {"sigma_bar", num(tc.sigma_bar)},
            {"sigma_cap", num(tc.sigma_cap)},
            {"c_P_Omega", num(tc.c_P_Omega)},
            {"C_rest", num(tc.C_rest)},
            {"C_s", num(tc.C_s)},
            {"n_sigma", num(tc.n_sigma)},
            {"N_RESTA", num(tc.N_RESTA)},
            {"N_R", num(tc.N_R)},
            {"beta_R", num(tc.beta_R)},
            {"beta_f", num(tc.beta_f)},
            {"theta_bar", num(tc.theta_bar)},
            {"alpha_tilde", num(tc.alpha_tilde)},
            {"C_mu", num(tc.C_mu)},
            {"N_reg", num(tc.N_reg)},
            {"mu_bar", num(tc.mu_bar)},
            {"beta_bar", num(tc.beta_bar)},
            {"C_rho", num(tc.C_rho)},
            {"C_feas", num(tc.C_feas)},
            {"C_d", num(tc.C_d)},
            {"C_p", num(tc.C_p)},
            {"C_proj", num(tc.C_proj)}}},
  };
  return j.dump(1) + "\n";
}

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");

  RunConfig cfg;
  for (const auto& [key, v] : j.items()) {
    bool known = false;
    for (const auto& d : kDoubleParams) {
      if (key == d.name) {
        cfg.params.*d.member = cfg_num(v, key);
        known = true;
      }
    }
    for (const auto& i : kIntParams) {
      if (key == i.name) {
        cfg.params.*i.member = cfg_int(v, key);
        known = true;
      }
    }
    if (known) continue;
    if (key == "problem") {
      if (!v.is_string()) config_error(key, "expected a string");
      cfg.problem = v.get<std::string>();
    } else if (key == "eps_feas") {
      cfg.tol.eps_feas = cfg_num(v, key);
    } else if (key == "eps_prec") {
      cfg.tol.eps_prec = cfg_num(v, key);
    } else if (key == "eps_opt") {
      cfg.tol.eps_opt = cfg_num(v, key);
    } else if (key == "budget") {
      cfg.budget = cfg_int(v, key);
    } else if (key == "hessian") {
      if (!v.is_string()) config_error(key, "expected a string");
      try {
        cfg.hessian = hessian_policy_from_string(v.get<std::string>());
      } catch (const std::exception& e) {
        config_error(key, e.what());
      }
    } else if (key == "x0") {
      cfg.x0 = cfg_array(v, key);
    } else if (key == "y0") {
      const auto y = cfg_array(v, key);
      if (y.size() != 2) config_error(key, "expected [g_f, g_h]");
      try {
        cfg.y0 = PrecisionLevel(y[0], y[1]);
      } catch (const std::exception& e) {
        config_error(key, e.what());
      }
    } else if (key == "out") {
      if (!v.is_string()) config_error(key, "expected a string");
      cfg.out = v.get<std::string>();
    } else if (key == "jobs") {
      cfg.jobs = cfg_int(v, key);
    } else if (key == "eps_grid") {
      cfg.eps_grid = cfg_array(v, key);
    } else {
      config_error(key, "unknown key");
    }
  }

  if (cfg.tol.eps_feas <= 0) config_error("eps_feas", "must be > 0");
  if (cfg.tol.eps_prec <= 0) config_error("eps_prec", "must be > 0");
  if (cfg.tol.eps_opt <= 0) config_error("eps_opt", "must be > 0");
  if (cfg.budget <= 0) config_error("budget", "must be > 0");
  if (cfg.jobs <= 0) config_error("jobs", "must be > 0");
  for (double e : cfg.eps_grid)
    if (!(e > 0)) config_error("eps_grid", "entries must be > 0");
  cfg.params.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) { return parse_config(read_file(path)); }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << content;
  if (!out) throw ConfigError("failed writing '" + path + "'");
}

}  // namespace irsolve

#include "irsolve/resta.hpp"

#include <algorithm>
#include <sstream>

#include "irsolve/geometry.hpp"

namespace irsolve {

std::string to_string(RestorationStatus s) {
  switch (s) {
    case RestorationStatus::Restored: return "Restored";
    case RestorationStatus::PossibleInfeasibility: return "PossibleInfeasibility";
    case RestorationStatus::TrivialReturn: return "TrivialReturn";
    case RestorationStatus::PDPRestored: return "PDPRestored";
  }
  return "Restored";
}

RestorationStatus restoration_status_from_string(const std::string& s) {
  if (s == "Restored") return RestorationStatus::Restored;
  if (s == "PossibleInfeasibility") return RestorationStatus::PossibleInfeasibility;
  if (s == "TrivialReturn") return RestorationStatus::TrivialReturn;
  if (s == "PDPRestored") return RestorationStatus::PDPRestored;
  throw SchemaError("unknown restoration status '" + s + "'");
}

double sigma_schedule(double sigma) {
  if (!(sigma > 0)) throw ContractError("sigma must be > 0");
  return 2.0 * sigma;
}

DecisionPoint choose_z0(const DecisionPoint& x_k) { return x_k; }

PdpCheck check_pdp(const RestoredPair& candidate, const DecisionPoint& x_k,
                   const PrecisionLevel& y_k, const InexactProblem& problem,
                   const AlgorithmParams& params, EvaluationLedger& ledger) {
  PdpCheck out;
  if (candidate.x.size() != x_k.size() || !candidate.x.allFinite() ||
      !problem.domain().contains(candidate.x))
    return out;
  const PrecisionLevel& y_R = candidate.y;
  const double r = params.r;
  out.h_xk_yR = problem.eval_h(x_k, y_R, ledger).norm();
  out.h_xR_yR_vec = problem.eval_h(candidate.x, y_R, ledger);
  out.h_xR_yR = out.h_xR_yR_vec.norm();
  const bool reduced = y_R.gf <= r * y_k.gf && y_R.gh <= r * y_k.gh && out.h_xR_yR <= r * out.h_xk_yR;
  const double dist = std::max((candidate.x - x_k).norm(), precision_distance(y_R, y_k));
  out.accepted = reduced && dist <= params.beta_PDP * out.h_xk_yR;
  return out;
}

RestorationOutcome resta(const DecisionPoint& x_k, const PrecisionLevel& y_k,
                         const InexactProblem& problem, const AlgorithmParams& params,
                         EvaluationLedger& ledger, const RestaOptions& options) {
  params.validate();
  const EvaluationLedger start = ledger;
  const BoxPolytope& box = problem.domain();
  const double r = params.r;

  RestorationOutcome out;
  const Vector h_k = options.h_xk_yk ? *options.h_xk_yk : problem.eval_h(x_k, y_k, ledger);
  out.h_xk_yk = h_k.norm();

  const auto finish = [&](RestorationOutcome& o) -> RestorationOutcome {
    o.ledger_delta = ledger - start;
    return o;
  };

  if (out.h_xk_yk + precision_g(y_k) == 0.0) {
    out.status = RestorationStatus::TrivialReturn;
    out.x_R = x_k;
    out.y_R = y_k;
    out.h_xk_yR = out.h_xR_yR = out.h_xk_yk;
    out.h_xR_yR_vec = h_k;
    return finish(out);
  }

  if (const auto candidate = problem.pdp(x_k, y_k)) {
    const PdpCheck chk = check_pdp(*candidate, x_k, y_k, problem, params, ledger);
    if (chk.accepted) {
      out.status = RestorationStatus::PDPRestored;
      out.x_R = candidate->x;
      out.y_R = candidate->y;
      out.h_xk_yR = chk.h_xk_yR;
      out.h_xR_yR = chk.h_xR_yR;
      out.h_xR_yR_vec = chk.h_xR_yR_vec;
      return finish(out);
    }
  }

  long long work = 0;
  const auto charge = [&]() {
    if (++work > options.hard_cap) {
      std::ostringstream os;
      os << "restoration exceeded its hard cap of " << options.hard_cap
         << " steps (refinements=" << out.refinements << ", tests=" << out.inner_iterations
         << ", accepted=" << out.accepted_steps << ")";
      throw AbnormalTermination(os.str());
    }
  };

  PrecisionLevel w = y_k;
  for (int i = 0;; ++i) {
    // Step 2: precision refinement.
    charge();
    const double gh_target = i <= params.N_prec ? r * w.gh : std::min(params.eps_prec_bar, r * w.gh);
    const PrecisionLevel w_next = problem.refine(w, r * y_k.gf, gh_target);
    ++out.refinements;

    const Vector h0 = w_next == y_k ? h_k : problem.eval_h(x_k, w_next, ledger);
    const double h0_norm = h0.norm();
    const double c_target = r * r * constraint_ssq(h0);
    const double eps_c = params.r_feas * h0_norm;

    // Step 3.
    DecisionPoint z = choose_z0(x_k);
    Vector hz = h0;
    Matrix Jz = problem.eval_grad_h(z, w_next, ledger);

    for (;;) {
      // Step 4: stopping tests.
      const double cz = constraint_ssq(hz);
      const Vector grad_c = Jz * hz;
      const double pg = (project_box(z - grad_c, box) - z).norm();
      out.final_pg_residual = pg;
      const auto leave = [&](RestorationStatus status) {
        out.status = status;
        out.x_R = z;
        out.y_R = w_next;
        out.h_xk_yR = h0_norm;
        out.h_xR_yR = hz.norm();
        out.h_xR_yR_vec = hz;
        return finish(out);
      };
      if (cz <= c_target) return leave(RestorationStatus::Restored);
      if (pg <= eps_c && w_next.gh <= params.eps_prec_bar)
        return leave(RestorationStatus::PossibleInfeasibility);
      if (pg <= eps_c) break;  // back to Step 2 with a finer level

      // Step 5: regularized model, sigma increased until sufficient decrease.
      const HessianModel B = build_B(Jz, params.M, params.sigma_min);
      double sigma = params.sigma_min;
      for (;;) {
        charge();
        out.sigma_history.push_back(sigma);
        const QpResult qp = solve_restoration_qp(grad_c, B, sigma, z, box, params.kappa_R,
                                                 options.qp_max_iters);
        if (qp.certificate.flagged || qp.certificate.step_norm == 0.0) {
          ++out.flagged_qp;
          sigma = sigma_schedule(sigma);
          continue;
        }
        ++out.inner_iterations;
        const Vector h_trial = problem.eval_h(qp.point, w_next, ledger);
        const double step = qp.certificate.step_norm;
        if (constraint_ssq(h_trial) <= cz - params.alpha_R * step * step) {
          out.max_kappa_R = std::max(out.max_kappa_R, qp.certificate.kappa_ratio);
          out.max_kappa_phi = std::max(out.max_kappa_phi, qp.certificate.kappa_phi);
          if (h0_norm > 0) out.max_step_ratio = std::max(out.max_step_ratio, step / h0_norm);
          ++out.accepted_steps;
          z = qp.point;
          hz = h_trial;
          Jz = problem.eval_grad_h(z, w_next, ledger);
          break;
        }
        sigma = sigma_schedule(sigma);
      }
    }
    w = w_next;
  }
}

}  // namespace irsolve

#include "mfc/admm.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "mfc/operators.hpp"
#include "mfc/pointwise.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mfc {

void SolverConfig::validate() const {
  if (!(r > 0)) throw std::invalid_argument("r must be positive");
  if (max_outer_iters < 1)
    throw std::invalid_argument("max_outer_iters must be at least 1");
  if (!(stop_hjb_res > 0) || !(stop_gap > 0) || !(stop_dphi > 0) ||
      !(stop_dm > 0))
    throw std::invalid_argument("stopping thresholds must be positive");
  if (record_every < 1)
    throw std::invalid_argument("record_every must be at least 1");
  if (nu != 0.0)
    throw std::invalid_argument("only the deterministic case nu = 0 is supported");
}

AdmmState initialize(const Geometry& geom, const DiscreteData& data) {
  if (data.m0.size() != geom.num_nodes() || data.uT.size() != geom.num_nodes())
    throw std::invalid_argument("data has wrong size for the geometry");
  data.cost.validate();
  AdmmState st;
  st.phi = ScalarField(geom);
  for (int n = 0; n <= geom.nt(); ++n) st.phi.slice(n) = data.uT;
  st.sigma = Stacked5Field(geom);
  for (int n = 1; n <= geom.nt(); ++n)
    for (int s = 0; s < geom.num_nodes(); ++s)
      st.sigma.at(n, s, 0) = data.m0[s];
  st.q = lambda_apply(st.phi);
  st.k = 0;
  return st;
}

ScalarField step1(const AdmmState& state, const Geometry& geom,
                  const DiscreteData& data, const SolverConfig& cfg,
                  int* krylov_iters) {
  Step1Operator op(geom, cfg.r);
  Eigen::VectorXd rhs = step1_rhs(op, state.sigma, state.q, data.uT, data.m0);
  LinearOp apply = [&op](const Eigen::VectorXd& u) { return op.apply(u); };
  Eigen::VectorXd x0 = restrict_field(state.phi);
  Eigen::VectorXd inv_diag;
  if (cfg.krylov.jacobi) inv_diag = op.diagonal().cwiseInverse();
  KrylovResult res = bicgstab_solve(apply, rhs, x0, cfg.krylov, inv_diag);
  if (!res.converged)
    throw std::runtime_error("step 1 linear solve did not converge; residual " +
                             std::to_string(res.residual));
  if (krylov_iters) *krylov_iters = res.iterations;
  return extend_field(geom, res.x, data.uT);
}

StepTwoResult step2(const AdmmState& state, const ScalarField& phi_next,
                    const Geometry& geom, const DiscreteData& data,
                    const SolverConfig& cfg) {
  StepTwoResult out{Stacked5Field(geom), Stacked5Field(geom)};
  Stacked5Field lphi = lambda_apply(phi_next);
  const int ns = geom.num_nodes();
  std::string failure;
#ifdef _OPENMP
  if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
#pragma omp parallel for collapse(2) schedule(static)
#endif
  for (int n = 1; n <= geom.nt(); ++n) {
    for (int s = 0; s < ns; ++s) {
      NodeProxInput in;
      in.x1 = geom.x1(s);
      in.x2 = geom.x2(s);
      in.r = cfg.r;
      in.cost = &data.cost;
      in.mask = geom.channel_mask(s);
      for (int c = 0; c < 5; ++c) {
        in.sigma[c] = state.sigma.at(n, s, c);
        in.lphi[c] = lphi.at(n, s, c);
      }
      try {
        NodeProxOutput res = solve_node(in);
        for (int c = 0; c < 5; ++c) {
          out.q.at(n, s, c) = res.q[c];
          out.sigma.at(n, s, c) = res.sigma_star[c];
        }
      } catch (const std::exception& e) {
#ifdef _OPENMP
#pragma omp critical
#endif
        if (failure.empty())
          failure = std::string(e.what()) + " at node (i=" +
                    std::to_string(geom.grid_i(s)) +
                    ", j=" + std::to_string(geom.grid_j(s)) +
                    ", n=" + std::to_string(n) + ")";
      }
    }
  }
  if (!failure.empty()) throw std::runtime_error("step 2 failed: " + failure);
  return out;
}

Stacked5Field step3(const StepTwoResult& two) { return two.sigma; }

RunReport solve(const Geometry& geom, const DiscreteData& data,
                const SolverConfig& cfg) {
  cfg.validate();
  RunReport report;
  AdmmState st = initialize(geom, data);
  ScalarField m_prev = assemble_density(st.sigma, data.m0);

  auto t0 = std::chrono::steady_clock::now();
  auto record = [&](int iter, double gap, double dphi, double dm) {
    ScalarField m = assemble_density(st.sigma, data.m0);
    ScalarField w = hjb_residual(st.phi, m, data.cost);
    IterationRecord rec;
    rec.iter = iter;
    rec.hjb_l2 = hjb_norm_l2(w);
    rec.hjb_weighted = hjb_norm_weighted(w, m);
    rec.gap = gap;
    rec.dphi = dphi;
    rec.dm = dm;
    rec.mass_min = std::numeric_limits<double>::infinity();
    rec.mass_max = -rec.mass_min;
    for (int n = 0; n <= geom.nt(); ++n) {
      double mn = mass(m, n);
      rec.mass_min = std::min(rec.mass_min, mn);
      rec.mass_max = std::max(rec.mass_max, mn);
    }
    rec.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    report.history.push_back(rec);
    return rec;
  };

  record(0, 0.0, 0.0, 0.0);  // gap at k = 0 is zero by construction

  for (int k = 1; k <= cfg.max_outer_iters; ++k) {
    ScalarField phi_prev = st.phi;
    try {
      ScalarField phi_next = step1(st, geom, data, cfg);
      StepTwoResult two = step2(st, phi_next, geom, data, cfg);
      st.phi = std::move(phi_next);
      st.q = std::move(two.q);
      st.sigma = step3(two);
      st.k = k;
    } catch (const std::exception& e) {
      throw std::runtime_error("iteration " + std::to_string(k) + ": " +
                               e.what());
    }

    Stacked5Field lphi = lambda_apply(st.phi);
    Stacked5Field gap_field(geom);
    gap_field.v = lphi.v - st.q.v;
    double gap = norm(gap_field);
    ScalarField dphi_field(geom);
    dphi_field.v = st.phi.v - phi_prev.v;
    double dphi = norm(dphi_field);
    ScalarField m_now = assemble_density(st.sigma, data.m0);
    ScalarField dm_field(geom);
    dm_field.v = m_now.v - m_prev.v;
    double dm = norm(dm_field);
    m_prev = std::move(m_now);

    bool due = (k % cfg.record_every == 0) || k == cfg.max_outer_iters;
    IterationRecord rec;
    bool have_rec = false;
    if (due) {
      rec = record(k, gap, dphi, dm);
      have_rec = true;
    }
    // Stopping: budget OR HJB-residual threshold OR (gap AND increments).
    bool stop_inc = gap <= cfg.stop_gap && dphi <= cfg.stop_dphi &&
                    dm <= cfg.stop_dm;
    bool stop_hjb = false;
    if (stop_inc || due) {
      if (!have_rec) {
        rec = record(k, gap, dphi, dm);
        have_rec = true;
      }
      stop_hjb = rec.hjb_weighted <= cfg.stop_hjb_res;
    }
    if (stop_hjb || stop_inc) {
      report.iterations = k;
      report.converged = true;
      report.stop_reason =
          stop_hjb ? StopReason::HjbResidual : StopReason::GapAndIncrements;
      report.state = std::move(st);
      return report;
    }
  }
  report.iterations = cfg.max_outer_iters;
  report.converged = false;
  report.stop_reason = StopReason::Budget;
  report.state = std::move(st);
  return report;
}

}  // namespace mfc

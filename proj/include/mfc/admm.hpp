#pragma once

#include <string>
#include <vector>

#include "mfc/diagnostics.hpp"
#include "mfc/fields.hpp"
#include "mfc/krylov.hpp"
#include "mfc/model.hpp"

namespace mfc {

/// Discretized problem data: cell averages of the initial density, nodal
/// samples of the terminal cost, and the cost model.
struct DiscreteData {
  Eigen::VectorXd m0;
  Eigen::VectorXd uT;
  CostModel cost;
};

struct SolverConfig {
  double r = 1.0;
  int max_outer_iters = 1000;
  double stop_hjb_res = 1e-10;
  double stop_gap = 1e-9;
  double stop_dphi = 1e-9;
  double stop_dm = 1e-9;
  KrylovConfig krylov;
  int record_every = 10;
  int threads = 0;     // 0 = library default
  double nu = 0.0;     // viscosity: only the deterministic case is supported

  void validate() const;
  bool operator==(const SolverConfig&) const = default;
};

struct AdmmState {
  ScalarField phi;
  Stacked5Field q;
  Stacked5Field sigma;
  int k = 0;
};

struct IterationRecord {
  int iter = 0;
  double hjb_l2 = 0;
  double hjb_weighted = 0;
  double gap = 0;
  double dphi = 0;
  double dm = 0;
  double mass_min = 0;
  double mass_max = 0;
  double seconds = 0;
};

enum class StopReason { Budget, HjbResidual, GapAndIncrements };

struct RunReport {
  std::vector<IterationRecord> history;
  AdmmState state;
  int iterations = 0;
  bool converged = false;
  StopReason stop_reason = StopReason::Budget;
};

/// phi: time-constant extension of uT; sigma: m-channel holds m0 on every
/// slice, flux channels zero; q = Lambda_h(phi), so the initial gap is 0.
AdmmState initialize(const Geometry& geom, const DiscreteData& data);

/// Step 1: phi-update.  Solves the linear system with BiCGStab warm-started
/// from the current phi; the terminal slice is re-pinned to uT.
ScalarField step1(const AdmmState& state, const Geometry& geom,
                  const DiscreteData& data, const SolverConfig& cfg,
                  int* krylov_iters = nullptr);

/// Step 2: per-node proximal update.  Returns both q^{k+1} and the gathered
/// node maximizers sigma', which step 3 adopts verbatim.
struct StepTwoResult {
  Stacked5Field q;
  Stacked5Field sigma;
};
StepTwoResult step2(const AdmmState& state, const ScalarField& phi_next,
                    const Geometry& geom, const DiscreteData& data,
                    const SolverConfig& cfg);

/// Step 3: dual update sigma^{k+1} = sigma^k - r (Lambda phi^{k+1} - q^{k+1}).
/// By construction of q this equals the gathered sigma' from step 2, which is
/// what is returned (cone feasibility is then exact, not approximate).
Stacked5Field step3(const StepTwoResult& two);

RunReport solve(const Geometry& geom, const DiscreteData& data,
                const SolverConfig& cfg);

}  // namespace mfc

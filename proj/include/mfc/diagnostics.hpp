#pragma once

#include <Eigen/Core>
#include <vector>

#include "mfc/fields.hpp"
#include "mfc/model.hpp"

namespace mfc {

struct ResidualSet {
  double hjb_l2 = 0;
  double hjb_weighted = 0;
  double kolmogorov_l2 = 0;
  double gap = 0;
  std::vector<double> mass_by_slice;
};

/// Density as a full space-time field: slice 0 pinned to m0, slices 1..NT
/// taken from the m-channel of sigma.
ScalarField assemble_density(const Stacked5Field& sigma,
                             const Eigen::VectorXd& m0);

/// Residual of the discrete HJB equation, stored at slices n = 0..NT-1:
///   w^n = (phi^{n+1}-phi^n)/dt + H_h(x, m^{n+1}, [D_h phi^n])
///         + m^{n+1} dH_h/dm(x, m^{n+1}, [D_h phi^n]),
/// with w^n = 0 wherever m^{n+1} = 0 (no congestion cost without mass).
/// Boundary nodes use the masked (boundary) Hamiltonian.
ScalarField hjb_residual(const ScalarField& phi, const ScalarField& m,
                         const CostModel& cost);

/// Conservative transport operator on one time slice: the discrete
/// divergence of m * grad_p H_h(x, mt, [D_h u]), defined through the
/// weak-form identity  h^2 sum T w = -h^2 sum m grad_p H_h . [D_h w].
Eigen::VectorXd transport_operator(const Eigen::VectorXd& u,
                                   const Eigen::VectorXd& m,
                                   const Eigen::VectorXd& mt,
                                   const Geometry& geom, const CostModel& cost);

/// Residual of the discrete continuity (Kolmogorov) equation driven by the
/// feedback from u:  (m^{n+1}-m^n)/dt + T(u^n, m^{n+1}, m^{n+1}),
/// stored at slices n = 0..NT-1.
ScalarField kolmogorov_residual(const ScalarField& u, const ScalarField& m,
                                const CostModel& cost);

/// h^2-weighted total mass of slice n.
double mass(const ScalarField& m, int n);

/// Plain and m-weighted l2 norms of the HJB residual field
/// (weights h^2*dt; the m-weighting uses m^{n+1} like the residual itself).
double hjb_norm_l2(const ScalarField& w);
double hjb_norm_weighted(const ScalarField& w, const ScalarField& m);

}  // namespace mfc

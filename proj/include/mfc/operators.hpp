#pragma once

#include "mfc/fields.hpp"

namespace mfc {

/// One-sided differences (phi_{i+1,j}-phi_{i,j})/h and
/// (phi_{i,j+1}-phi_{i,j})/h at time slice n.  Throws when the difference
/// would cross the boundary or an obstacle in Box geometry.
double d_plus_1(const ScalarField& phi, int i, int j, int n);
double d_plus_2(const ScalarField& phi, int i, int j, int n);

/// Space-time operator Lambda_h: channel 0 holds the discrete time
/// derivative (phi^n - phi^{n-1})/dt, channels 1..4 the four one-sided
/// differences of phi^{n-1}.  Structurally absent differences (Box) are
/// stored as zeros.
Stacked5Field lambda_apply(const ScalarField& phi);

/// Adjoint of lambda_apply w.r.t. the h^2*dt weighted inner products.
ScalarField lambda_adjoint(const Stacked5Field& sigma);

/// h^2*dt weighted inner products and norms.
double inner(const ScalarField& f, const ScalarField& g);
double inner(const Stacked5Field& f, const Stacked5Field& g);
double norm(const ScalarField& f);
double norm(const Stacked5Field& f);

/// Residual of the discrete continuity equation
///   (m^{n+1}-m^n)/dt + div(fluxes^{n+1}) = 0,  n = 0..NT-1,
/// with m^0 pinned to the cell averages m0.  The result occupies slices
/// 0..NT-1 of a ScalarField; slice NT is zero.
ScalarField fp_residual(const Stacked5Field& sigma,
                        const Eigen::VectorXd& m0);

/// Discrete flux divergence of sigma at (slice n, node s): the transport
/// part of the continuity equation, with out-of-domain neighbor values
/// taken as zero.
double flux_divergence(const Stacked5Field& sigma, int n, int s);

}  // namespace mfc

#pragma once

#include <array>
#include <functional>

#include "mfc/geometry.hpp"

namespace mfc {

/// Congestion cost family  ell(x,m) = lambda(x) * m^(q-1),  lambda > 0, q > 1.
/// alpha in [0,1) and beta in (1,2] are the congestion/kinetic exponents of
/// the Hamiltonian  H(x,m,p) = -|p|^beta / m^alpha + ell(x,m).
struct CostModel {
  double alpha = 0.5;
  double beta = 2.0;
  double lambda = 1.0;
  double q_exp = 2.0;
  /// Optional spatial coefficient; when set it replaces the constant lambda.
  std::function<double(double, double)> lambda_of_x;

  double beta_star() const { return beta / (beta - 1.0); }
  double coeff(double x1, double x2) const {
    return lambda_of_x ? lambda_of_x(x1, x2) : lambda;
  }
  double ell(double x1, double x2, double m) const;
  double ell_dm(double x1, double x2, double m) const;

  void validate() const;
};

constexpr unsigned kAllChannels = 0xF;

/// Monotone discrete Hamiltonian
///   H_h(x,m,p) = -m^{-alpha} ((p1^-)^2+(p2^+)^2+(p3^-)^2+(p4^+)^2)^{beta/2}
///                + ell(x,m),
/// restricted to the channels present in `mask` (bit c <-> p_{c+1}).
/// With a partial mask this is the boundary Hamiltonian of the
/// state-constrained scheme (edges keep three channels, corners two).
double h_discrete(const CostModel& cost, double x1, double x2, double m,
                  const std::array<double, 4>& p, unsigned mask = kAllChannels);

/// Gradient of h_discrete w.r.t. (p1..p4); zero on masked channels and at
/// the kink G = 0 (the subgradient selection for beta < 2).
std::array<double, 4> h_discrete_grad_p(const CostModel& cost, double x1,
                                        double x2, double m,
                                        const std::array<double, 4>& p,
                                        unsigned mask = kAllChannels);

/// Partial derivative of h_discrete w.r.t. m.
double h_discrete_dm(const CostModel& cost, double x1, double x2, double m,
                     const std::array<double, 4>& p,
                     unsigned mask = kAllChannels);

/// Boundary Hamiltonian: h_discrete with the channels crossing the boundary
/// removed.  `mask` must be a strict subset of the four channels.
double h_boundary(const CostModel& cost, NodeClass node_class, double x1,
                  double x2, double m, const std::array<double, 4>& p,
                  unsigned mask);

/// Dual integrand
///   L~(x, m,y,z,y~,z~) = (beta-1) beta^{-beta*}
///       (y^2+z^2+y~^2+z~^2)^{beta*/2} / m^{(beta*-1)(1-alpha)} + m ell(x,m)
/// on the cone {m>0, y>=0, z<=0, y~>=0, z~<=0}, 0 at the origin,
/// +infinity elsewhere.  Masked channels must vanish to stay in the domain.
double l_tilde(const CostModel& cost, double x1, double x2,
               const std::array<double, 5>& sigma,
               unsigned mask = kAllChannels);

}  // namespace mfc

#pragma once

#include <array>

#include "mfc/model.hpp"

namespace mfc {

/// Everything the per-node step-2 proximal problem needs: the current dual
/// sigma = (m,y,z,y~,z~), the five channels of Lambda_h(phi) at the node,
/// the augmentation parameter r and the channel mask (Box boundaries).
struct NodeProxInput {
  double x1 = 0, x2 = 0;
  std::array<double, 5> sigma = {0, 0, 0, 0, 0};
  std::array<double, 5> lphi = {0, 0, 0, 0, 0};
  double r = 1.0;
  const CostModel* cost = nullptr;
  unsigned mask = kAllChannels;
};

enum class ProxBranch { ZeroPoint, InteriorRoot, LeftEndpoint };

struct NodeProxOutput {
  std::array<double, 5> sigma_star = {0, 0, 0, 0, 0};
  std::array<double, 5> q = {0, 0, 0, 0, 0};
  ProxBranch branch = ProxBranch::ZeroPoint;
};

/// chi(mu): the scalar reduction of the mu-stationarity condition,
/// strictly increasing on [0,inf); chi(0) = 0 exactly.
double chi(double mu, const NodeProxInput& in);

/// gamma: sum of squares of the four shifted monotone parts
/// ((y - r L2)^+)^2 + ((z - r L3)^-)^2 + ((y~ - r L4)^+)^2 + ((z~ - r L5)^-)^2.
double gamma(const NodeProxInput& in);

/// Xi(mu) = Sigma(mu) (1 + r beta^{1-b*} chi(mu)^{1-2/b*} / mu^e)^2 - gamma,
/// with Sigma = chi^{2/b*}.  Defined for mu in P_chi = {mu > 0: chi >= 0};
/// at mu = 0 the right limit is returned.
double xi(double mu, const NodeProxInput& in);

/// Objective of the reduced node problem, W(sigma') =
///   -||sigma'-sigma||^2/(2r) + Lphi.(sigma - sigma') - L~(x, sigma').
double prox_objective(const NodeProxInput& in,
                      const std::array<double, 5>& sigma_prime);

/// Maximize W over the dual cone via the scalar equation Xi(mu) = 0
/// (bisection), then recover q = (sigma' - sigma)/r + Lphi.
NodeProxOutput solve_node(const NodeProxInput& in);

}  // namespace mfc

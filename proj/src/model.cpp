#include "mfc/model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mfc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

inline double pos(double x) { return x > 0 ? x : 0.0; }
inline double neg(double x) { return x < 0 ? -x : 0.0; }

/// Sum of squares of the monotone parts over the active channels.
inline double monotone_g(const std::array<double, 4>& p, unsigned mask) {
  double g = 0;
  if (mask & 1u) g += neg(p[0]) * neg(p[0]);
  if (mask & 2u) g += pos(p[1]) * pos(p[1]);
  if (mask & 4u) g += neg(p[2]) * neg(p[2]);
  if (mask & 8u) g += pos(p[3]) * pos(p[3]);
  return g;
}

inline void require_positive_m(double m) {
  if (!(m > 0)) throw std::domain_error("h_discrete requires m > 0");
}

}  // namespace

double CostModel::ell(double x1, double x2, double m) const {
  return coeff(x1, x2) * std::pow(m, q_exp - 1.0);
}

double CostModel::ell_dm(double x1, double x2, double m) const {
  if (q_exp == 2.0) return coeff(x1, x2);
  return coeff(x1, x2) * (q_exp - 1.0) * std::pow(m, q_exp - 2.0);
}

void CostModel::validate() const {
  if (!(alpha >= 0 && alpha < 1))
    throw std::invalid_argument("alpha must be in [0,1)");
  if (!(beta > 1 && beta <= 2))
    throw std::invalid_argument("beta must be in (1,2]");
  if (!(lambda > 0)) throw std::invalid_argument("lambda must be positive");
  if (!(q_exp > 1)) throw std::invalid_argument("q exponent must exceed 1");
}

double h_discrete(const CostModel& cost, double x1, double x2, double m,
                  const std::array<double, 4>& p, unsigned mask) {
  require_positive_m(m);
  double g = monotone_g(p, mask);
  return -std::pow(m, -cost.alpha) * std::pow(g, cost.beta / 2.0) +
         cost.ell(x1, x2, m);
}

std::array<double, 4> h_discrete_grad_p(const CostModel& cost, double x1,
                                        double x2, double m,
                                        const std::array<double, 4>& p,
                                        unsigned mask) {
  (void)x1;
  (void)x2;
  require_positive_m(m);
  std::array<double, 4> grad = {0, 0, 0, 0};
  double g = monotone_g(p, mask);
  if (g == 0) return grad;
  double scale =
      std::pow(m, -cost.alpha) * cost.beta * std::pow(g, cost.beta / 2.0 - 1.0);
  if (mask & 1u) grad[0] = scale * neg(p[0]);
  if (mask & 2u) grad[1] = -scale * pos(p[1]);
  if (mask & 4u) grad[2] = scale * neg(p[2]);
  if (mask & 8u) grad[3] = -scale * pos(p[3]);
  return grad;
}

double h_discrete_dm(const CostModel& cost, double x1, double x2, double m,
                     const std::array<double, 4>& p, unsigned mask) {
  require_positive_m(m);
  double g = monotone_g(p, mask);
  double congestion =
      g == 0 ? 0.0
             : cost.alpha * std::pow(m, -cost.alpha - 1.0) *
                   std::pow(g, cost.beta / 2.0);
  return congestion + cost.ell_dm(x1, x2, m);
}

double h_boundary(const CostModel& cost, NodeClass node_class, double x1,
                  double x2, double m, const std::array<double, 4>& p,
                  unsigned mask) {
  if (node_class == NodeClass::Interior)
    throw std::invalid_argument("h_boundary called on an interior node");
  if (node_class == NodeClass::Excluded)
    throw std::invalid_argument("h_boundary called on an excluded node");
  return h_discrete(cost, x1, x2, m, p, mask);
}

double l_tilde(const CostModel& cost, double x1, double x2,
               const std::array<double, 5>& sigma, unsigned mask) {
  double m = sigma[0];
  double y = sigma[1], z = sigma[2], yt = sigma[3], zt = sigma[4];
  // Masked channels are structurally zero; nonzero values leave the domain.
  if ((!(mask & 1u) && y != 0) || (!(mask & 2u) && z != 0) ||
      (!(mask & 4u) && yt != 0) || (!(mask & 8u) && zt != 0))
    return kInf;
  if (m == 0) {
    return (y == 0 && z == 0 && yt == 0 && zt == 0) ? 0.0 : kInf;
  }
  if (!(m > 0) || y < 0 || z > 0 || yt < 0 || zt > 0) return kInf;
  double bs = cost.beta_star();
  double s2 = y * y + z * z + yt * yt + zt * zt;
  double kinetic = (cost.beta - 1.0) * std::pow(cost.beta, -bs) *
                   std::pow(s2, bs / 2.0) /
                   std::pow(m, (bs - 1.0) * (1.0 - cost.alpha));
  return kinetic + m * cost.ell(x1, x2, m);
}

}  // namespace mfc

#include "mfc/diagnostics.hpp"

#include <cmath>
#include <stdexcept>

namespace mfc {

ScalarField assemble_density(const Stacked5Field& sigma,
                             const Eigen::VectorXd& m0) {
  const Geometry& g = *sigma.geom;
  if (m0.size() != g.num_nodes())
    throw std::invalid_argument("m0 has wrong size");
  ScalarField m(g);
  m.slice(0) = m0;
  for (int n = 1; n <= g.nt(); ++n)
    for (int s = 0; s < g.num_nodes(); ++s) m.at(n, s) = sigma.at(n, s, 0);
  return m;
}

namespace {

/// The four one-sided differences of slice n of phi at node s, masked.
std::array<double, 4> grad_h(const ScalarField& phi, int n, int s) {
  const Geometry& g = *phi.geom;
  std::array<double, 4> p = {0, 0, 0, 0};
  const double inv_h = 1.0 / g.h();
  double c = phi.at(n, s);
  int xp = g.neighbor(s, XPlus);
  int xm = g.neighbor(s, XMinus);
  int yp = g.neighbor(s, YPlus);
  int ym = g.neighbor(s, YMinus);
  if (xp >= 0) p[0] = (phi.at(n, xp) - c) * inv_h;
  if (xm >= 0) p[1] = (c - phi.at(n, xm)) * inv_h;
  if (yp >= 0) p[2] = (phi.at(n, yp) - c) * inv_h;
  if (ym >= 0) p[3] = (c - phi.at(n, ym)) * inv_h;
  return p;
}

std::array<double, 4> grad_h_slice(const Eigen::VectorXd& u,
                                   const Geometry& g, int s) {
  std::array<double, 4> p = {0, 0, 0, 0};
  const double inv_h = 1.0 / g.h();
  double c = u[s];
  int xp = g.neighbor(s, XPlus);
  int xm = g.neighbor(s, XMinus);
  int yp = g.neighbor(s, YPlus);
  int ym = g.neighbor(s, YMinus);
  if (xp >= 0) p[0] = (u[xp] - c) * inv_h;
  if (xm >= 0) p[1] = (c - u[xm]) * inv_h;
  if (yp >= 0) p[2] = (u[yp] - c) * inv_h;
  if (ym >= 0) p[3] = (c - u[ym]) * inv_h;
  return p;
}

}  // namespace

ScalarField hjb_residual(const ScalarField& phi, const ScalarField& m,
                         const CostModel& cost) {
  const Geometry& g = *phi.geom;
  ScalarField w(g);
  const double inv_dt = 1.0 / g.dt();
  for (int n = 0; n < g.nt(); ++n) {
    for (int s = 0; s < g.num_nodes(); ++s) {
      double ms = m.at(n + 1, s);
      if (!(ms > 0)) continue;  // w = 0 where the density vanishes
      std::array<double, 4> p = grad_h(phi, n, s);
      unsigned mask = g.channel_mask(s);
      double x1 = g.x1(s), x2 = g.x2(s);
      w.at(n, s) = (phi.at(n + 1, s) - phi.at(n, s)) * inv_dt +
                   h_discrete(cost, x1, x2, ms, p, mask) +
                   ms * h_discrete_dm(cost, x1, x2, ms, p, mask);
    }
  }
  return w;
}

Eigen::VectorXd transport_operator(const Eigen::VectorXd& u,
                                   const Eigen::VectorXd& m,
                                   const Eigen::VectorXd& mt,
                                   const Geometry& geom,
                                   const CostModel& cost) {
  const int ns = geom.num_nodes();
  if (u.size() != ns || m.size() != ns || mt.size() != ns)
    throw std::invalid_argument("slice has wrong size");
  // Per-node fluxes f_c = m * dH_h/dp_c evaluated at (x, mt, [D_h u]).
  Eigen::MatrixXd f = Eigen::MatrixXd::Zero(4, ns);
  for (int s = 0; s < ns; ++s) {
    if (!(m[s] > 0)) continue;
    if (!(mt[s] > 0))
      throw std::invalid_argument("mt must be positive where m is");
    std::array<double, 4> p = grad_h_slice(u, geom, s);
    std::array<double, 4> gp = h_discrete_grad_p(
        cost, geom.x1(s), geom.x2(s), mt[s], p, geom.channel_mask(s));
    for (int c = 0; c < 4; ++c) f(c, s) = m[s] * gp[c];
  }
  // Gathered form of the weak identity: each channel-c flux at a node
  // spreads onto the node and its c-neighbor with opposite signs.
  Eigen::VectorXd out = Eigen::VectorXd::Zero(ns);
  const double inv_h = 1.0 / geom.h();
  for (int s = 0; s < ns; ++s) {
    double t = 0;
    if (geom.channel_active(s, XPlus)) t += f(XPlus, s);
    int xm = geom.neighbor(s, XMinus);
    if (xm >= 0) t -= f(XPlus, xm);
    int xp = geom.neighbor(s, XPlus);
    if (xp >= 0) t += f(XMinus, xp);
    if (geom.channel_active(s, XMinus)) t -= f(XMinus, s);
    if (geom.channel_active(s, YPlus)) t += f(YPlus, s);
    int ym = geom.neighbor(s, YMinus);
    if (ym >= 0) t -= f(YPlus, ym);
    int yp = geom.neighbor(s, YPlus);
    if (yp >= 0) t += f(YMinus, yp);
    if (geom.channel_active(s, YMinus)) t -= f(YMinus, s);
    out[s] = t * inv_h;
  }
  return out;
}

ScalarField kolmogorov_residual(const ScalarField& u, const ScalarField& m,
                                const CostModel& cost) {
  const Geometry& g = *u.geom;
  ScalarField out(g);
  const double inv_dt = 1.0 / g.dt();
  for (int n = 0; n < g.nt(); ++n) {
    Eigen::VectorXd t = transport_operator(u.slice(n), m.slice(n + 1),
                                           m.slice(n + 1), g, cost);
    out.slice(n) = (m.slice(n + 1) - m.slice(n)) * inv_dt + t;
  }
  return out;
}

double mass(const ScalarField& m, int n) {
  const Geometry& g = *m.geom;
  if (n < 0 || n > g.nt()) throw std::out_of_range("slice index");
  return g.h() * g.h() * m.slice(n).sum();
}

double hjb_norm_l2(const ScalarField& w) {
  const Geometry& g = *w.geom;
  return std::sqrt(g.h() * g.h() * g.dt() * w.v.squaredNorm());
}

double hjb_norm_weighted(const ScalarField& w, const ScalarField& m) {
  const Geometry& g = *w.geom;
  double acc = 0;
  for (int n = 0; n < g.nt(); ++n)
    for (int s = 0; s < g.num_nodes(); ++s)
      acc += m.at(n + 1, s) * w.at(n, s) * w.at(n, s);
  return std::sqrt(g.h() * g.h() * g.dt() * acc);
}

}  // namespace mfc

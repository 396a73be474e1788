#include "mfc/operators.hpp"

#include <stdexcept>

namespace mfc {

namespace {

int require_node(const Geometry& g, int i, int j) {
  int s = g.node_id(i, j);
  if (s < 0) throw std::out_of_range("node is not admissible");
  return s;
}

}  // namespace

double d_plus_1(const ScalarField& phi, int i, int j, int n) {
  const Geometry& g = *phi.geom;
  int s = require_node(g, i, j);
  int nb = g.neighbor(s, XPlus);
  if (nb < 0) throw std::out_of_range("forward x-difference crosses boundary");
  return (phi.at(n, nb) - phi.at(n, s)) / g.h();
}

double d_plus_2(const ScalarField& phi, int i, int j, int n) {
  const Geometry& g = *phi.geom;
  int s = require_node(g, i, j);
  int nb = g.neighbor(s, YPlus);
  if (nb < 0) throw std::out_of_range("forward y-difference crosses boundary");
  return (phi.at(n, nb) - phi.at(n, s)) / g.h();
}

Stacked5Field lambda_apply(const ScalarField& phi) {
  const Geometry& g = *phi.geom;
  Stacked5Field out(g);
  const int ns = g.num_nodes();
  const double inv_dt = 1.0 / g.dt(), inv_h = 1.0 / g.h();
  for (int n = 1; n <= g.nt(); ++n) {
    for (int s = 0; s < ns; ++s) {
      out.at(n, s, 0) = (phi.at(n, s) - phi.at(n - 1, s)) * inv_dt;
      int xp = g.neighbor(s, XPlus);
      int xm = g.neighbor(s, XMinus);
      int yp = g.neighbor(s, YPlus);
      int ym = g.neighbor(s, YMinus);
      double c = phi.at(n - 1, s);
      if (xp >= 0) out.at(n, s, 1) = (phi.at(n - 1, xp) - c) * inv_h;
      if (xm >= 0) out.at(n, s, 2) = (c - phi.at(n - 1, xm)) * inv_h;
      if (yp >= 0) out.at(n, s, 3) = (phi.at(n - 1, yp) - c) * inv_h;
      if (ym >= 0) out.at(n, s, 4) = (c - phi.at(n - 1, ym)) * inv_h;
    }
  }
  return out;
}

ScalarField lambda_adjoint(const Stacked5Field& sigma) {
  const Geometry& g = *sigma.geom;
  ScalarField out(g);
  const int ns = g.num_nodes();
  const double inv_dt = 1.0 / g.dt(), inv_h = 1.0 / g.h();
  for (int n = 1; n <= g.nt(); ++n) {
    for (int s = 0; s < ns; ++s) {
      double m = sigma.at(n, s, 0);
      out.at(n, s) += m * inv_dt;
      out.at(n - 1, s) -= m * inv_dt;
      int xp = g.neighbor(s, XPlus);
      int xm = g.neighbor(s, XMinus);
      int yp = g.neighbor(s, YPlus);
      int ym = g.neighbor(s, YMinus);
      if (xp >= 0) {
        double y = sigma.at(n, s, 1);
        out.at(n - 1, xp) += y * inv_h;
        out.at(n - 1, s) -= y * inv_h;
      }
      if (xm >= 0) {
        double z = sigma.at(n, s, 2);
        out.at(n - 1, s) += z * inv_h;
        out.at(n - 1, xm) -= z * inv_h;
      }
      if (yp >= 0) {
        double yt = sigma.at(n, s, 3);
        out.at(n - 1, yp) += yt * inv_h;
        out.at(n - 1, s) -= yt * inv_h;
      }
      if (ym >= 0) {
        double zt = sigma.at(n, s, 4);
        out.at(n - 1, s) += zt * inv_h;
        out.at(n - 1, ym) -= zt * inv_h;
      }
    }
  }
  return out;
}

double inner(const ScalarField& f, const ScalarField& g) {
  if (f.v.size() != g.v.size()) throw std::invalid_argument("shape mismatch");
  const Geometry& geo = *f.geom;
  return geo.h() * geo.h() * geo.dt() * f.v.dot(g.v);
}

double inner(const Stacked5Field& f, const Stacked5Field& g) {
  if (f.v.size() != g.v.size()) throw std::invalid_argument("shape mismatch");
  const Geometry& geo = *f.geom;
  return geo.h() * geo.h() * geo.dt() * f.v.dot(g.v);
}

double norm(const ScalarField& f) { return std::sqrt(inner(f, f)); }
double norm(const Stacked5Field& f) { return std::sqrt(inner(f, f)); }

double flux_divergence(const Stacked5Field& sigma, int n, int s) {
  const Geometry& g = *sigma.geom;
  const double inv_h = 1.0 / g.h();
  int xp = g.neighbor(s, XPlus);
  int xm = g.neighbor(s, XMinus);
  int yp = g.neighbor(s, YPlus);
  int ym = g.neighbor(s, YMinus);
  double div = 0;
  div += (sigma.at(n, s, 1) - (xm >= 0 ? sigma.at(n, xm, 1) : 0.0)) * inv_h;
  div += ((xp >= 0 ? sigma.at(n, xp, 2) : 0.0) - sigma.at(n, s, 2)) * inv_h;
  div += (sigma.at(n, s, 3) - (ym >= 0 ? sigma.at(n, ym, 3) : 0.0)) * inv_h;
  div += ((yp >= 0 ? sigma.at(n, yp, 4) : 0.0) - sigma.at(n, s, 4)) * inv_h;
  return div;
}

ScalarField fp_residual(const Stacked5Field& sigma,
                        const Eigen::VectorXd& m0) {
  const Geometry& g = *sigma.geom;
  if (m0.size() != g.num_nodes())
    throw std::invalid_argument("m0 has wrong size");
  ScalarField out(g);
  const int ns = g.num_nodes();
  const double inv_dt = 1.0 / g.dt();
  for (int n = 0; n < g.nt(); ++n) {
    for (int s = 0; s < ns; ++s) {
      double m_prev = n == 0 ? m0[s] : sigma.at(n, s, 0);
      double m_next = sigma.at(n + 1, s, 0);
      out.at(n, s) =
          (m_next - m_prev) * inv_dt + flux_divergence(sigma, n + 1, s);
    }
  }
  return out;
}

}  // namespace mfc

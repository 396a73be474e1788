#include "mfc/krylov.hpp"

#include <cmath>
#include <stdexcept>

namespace mfc {

Eigen::VectorXd restrict_field(const ScalarField& phi) {
  const Geometry& g = *phi.geom;
  return phi.v.head(g.nt() * g.num_nodes());
}

ScalarField extend_field(const Geometry& geom, const Eigen::VectorXd& u,
                         const Eigen::VectorXd& terminal) {
  if (u.size() != geom.nt() * geom.num_nodes())
    throw std::invalid_argument("unknown vector has wrong size");
  if (terminal.size() != geom.num_nodes())
    throw std::invalid_argument("terminal slice has wrong size");
  ScalarField phi(geom);
  phi.v.head(u.size()) = u;
  phi.slice(geom.nt()) = terminal;
  return phi;
}

Eigen::VectorXd Step1Operator::apply(const Eigen::VectorXd& u) const {
  const Geometry& g = *geom_;
  ScalarField phi = extend_field(
      g, u, Eigen::VectorXd::Zero(g.num_nodes()));
  ScalarField back = lambda_adjoint(lambda_apply(phi));
  return r_ * back.v.head(size());
}

Eigen::VectorXd Step1Operator::diagonal() const {
  const Geometry& g = *geom_;
  const int ns = g.num_nodes();
  const double dt2 = g.dt() * g.dt(), h2 = g.h() * g.h();
  Eigen::VectorXd d(size());
  for (int n = 0; n < g.nt(); ++n) {
    double time_part = (n == 0 ? 1.0 : 2.0) / dt2;
    for (int s = 0; s < ns; ++s) {
      int edges = 0;
      for (int c = 0; c < 4; ++c) edges += g.channel_active(s, c) ? 1 : 0;
      d[n * ns + s] = r_ * (time_part + 2.0 * edges / h2);
    }
  }
  return d;
}

Eigen::MatrixXd Step1Operator::dense() const {
  int n = size();
  Eigen::MatrixXd A(n, n);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
  for (int k = 0; k < n; ++k) {
    e[k] = 1.0;
    A.col(k) = apply(e);
    e[k] = 0.0;
  }
  return A;
}

Eigen::VectorXd step1_rhs(const Step1Operator& op, const Stacked5Field& sigma,
                          const Stacked5Field& q, const Eigen::VectorXd& u_T,
                          const Eigen::VectorXd& m0) {
  const Geometry& g = op.geom();
  if (u_T.size() != g.num_nodes() || m0.size() != g.num_nodes())
    throw std::invalid_argument("boundary data has wrong size");
  Stacked5Field w(g);
  w.v = sigma.v + op.r() * q.v;
  ScalarField back = lambda_adjoint(w);
  Eigen::VectorXd rhs = back.v.head(op.size());
  const int ns = g.num_nodes();
  const double dt = g.dt();
  rhs.segment((g.nt() - 1) * ns, ns) += (op.r() / (dt * dt)) * u_T;
  rhs.head(ns) += m0 / dt;
  return rhs;
}

namespace {

int default_max_iters(const KrylovConfig& cfg, Eigen::Index n) {
  return cfg.max_iters > 0 ? cfg.max_iters : static_cast<int>(10 * n);
}

}  // namespace

KrylovResult bicgstab_solve(const LinearOp& A, const Eigen::VectorXd& b,
                            const Eigen::VectorXd& x0, const KrylovConfig& cfg,
                            const Eigen::VectorXd& inv_diag) {
  const Eigen::Index n = b.size();
  const int max_iters = default_max_iters(cfg, n);
  const double target = std::max(cfg.abs_tol, cfg.rel_tol * b.norm());
  const bool precond = inv_diag.size() == n;
  auto M = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
    return precond ? inv_diag.cwiseProduct(v).eval() : v;
  };

  KrylovResult res;
  res.x = x0;
  Eigen::VectorXd r = b - A(res.x);
  res.residual = r.norm();
  if (res.residual <= target) {
    res.converged = true;
    return res;
  }

  Eigen::VectorXd r0 = r, p = r;
  double rho = r0.dot(r);
  auto restart = [&] {
    r = b - A(res.x);
    r0 = r;
    p = r;
    rho = r0.dot(r);
  };
  Eigen::VectorXd ph(n), v(n), s(n), sh(n), t(n);
  for (res.iterations = 1; res.iterations <= max_iters; ++res.iterations) {
    ph = M(p);
    v = A(ph);
    double r0v = r0.dot(v);
    if (std::abs(r0v) < 1e-300) {  // breakdown: restart from the residual
      restart();
      if (rho == 0) break;
      continue;
    }
    double a = rho / r0v;
    s = r - a * v;
    double snorm = s.norm();
    if (snorm <= target) {
      res.x += a * ph;
      res.residual = snorm;
      res.converged = true;
      return res;
    }
    sh = M(s);
    t = A(sh);
    double tt = t.squaredNorm();
    if (tt < 1e-300) {
      res.x += a * ph;
      restart();
      if (rho == 0) break;
      continue;
    }
    double w = t.dot(s) / tt;
    res.x += a * ph + w * sh;
    r = s - w * t;
    res.residual = r.norm();
    if (res.residual <= target) {
      res.converged = true;
      return res;
    }
    double rho_new = r0.dot(r);
    if (std::abs(rho_new) < 1e-300 || w == 0) {
      restart();
      if (rho == 0) break;
      continue;
    }
    double beta = (rho_new / rho) * (a / w);
    p = r + beta * (p - w * v);
    rho = rho_new;
  }
  res.residual = (b - A(res.x)).norm();
  res.converged = res.residual <= target;
  return res;
}

KrylovResult cg_solve(const LinearOp& A, const Eigen::VectorXd& b,
                      const Eigen::VectorXd& x0, const KrylovConfig& cfg) {
  const int max_iters = default_max_iters(cfg, b.size());
  const double target = std::max(cfg.abs_tol, cfg.rel_tol * b.norm());

  KrylovResult res;
  res.x = x0;
  Eigen::VectorXd r = b - A(res.x);
  res.residual = r.norm();
  if (res.residual <= target) {
    res.converged = true;
    return res;
  }
  Eigen::VectorXd p = r;
  double rr = r.squaredNorm();
  for (res.iterations = 1; res.iterations <= max_iters; ++res.iterations) {
    Eigen::VectorXd Ap = A(p);
    double pAp = p.dot(Ap);
    if (pAp <= 0) break;  // lost positive definiteness numerically
    double a = rr / pAp;
    res.x += a * p;
    r -= a * Ap;
    double rr_new = r.squaredNorm();
    res.residual = std::sqrt(rr_new);
    if (res.residual <= target) {
      res.converged = true;
      return res;
    }
    p = r + (rr_new / rr) * p;
    rr = rr_new;
  }
  res.residual = (b - A(res.x)).norm();
  res.converged = res.residual <= target;
  return res;
}

}  // namespace mfc

#pragma once

#include <Eigen/Dense>
#include <functional>

#include "mfc/fields.hpp"
#include "mfc/operators.hpp"

namespace mfc {

/// Matrix-free operator of the phi-update linear system.  The unknown u
/// stacks the slices phi^0..phi^{NT-1} (size NT * num_nodes); the terminal
/// slice is eliminated through the boundary condition phi^{NT} = u_T.
/// The operator is  A u = r * restrict( Lambda* ( Lambda ( extend(u, 0) ) ) ),
/// which is symmetric positive semi-definite (strictly positive definite
/// once the terminal condition pins the time direction).
class Step1Operator {
 public:
  Step1Operator(const Geometry& geom, double r) : geom_(&geom), r_(r) {}

  int size() const { return geom_->nt() * geom_->num_nodes(); }
  const Geometry& geom() const { return *geom_; }
  double r() const { return r_; }

  Eigen::VectorXd apply(const Eigen::VectorXd& u) const;

  /// Diagonal of the operator (for Jacobi preconditioning):
  /// r * (1 or 2)/dt^2 in time plus 2r/h^2 per available difference.
  Eigen::VectorXd diagonal() const;

  /// Dense assembly for small problems (test oracles only).
  Eigen::MatrixXd dense() const;

 private:
  const Geometry* geom_;
  double r_;
};

/// Right-hand side of the phi-update:
///   restrict( Lambda*(sigma + r q) ) + r * u_T / dt^2 on slice NT-1
///                                    + m0 / dt        on slice 0.
Eigen::VectorXd step1_rhs(const Step1Operator& op, const Stacked5Field& sigma,
                          const Stacked5Field& q, const Eigen::VectorXd& u_T,
                          const Eigen::VectorXd& m0);

/// Pack/unpack between the step-1 unknown (slices 0..NT-1) and a full
/// ScalarField whose terminal slice holds u_T.
Eigen::VectorXd restrict_field(const ScalarField& phi);
ScalarField extend_field(const Geometry& geom, const Eigen::VectorXd& u,
                         const Eigen::VectorXd& terminal);

struct KrylovConfig {
  double rel_tol = 1e-8;
  double abs_tol = 1e-14;
  int max_iters = 0;  // 0: defaults to 10 * n
  bool jacobi = false;

  bool operator==(const KrylovConfig&) const = default;
};

struct KrylovResult {
  Eigen::VectorXd x;
  int iterations = 0;
  double residual = 0;  // final |b - A x| (Euclidean)
  bool converged = false;
};

using LinearOp = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// BiCGStab with restart on breakdown; stops when |b - A x| <=
/// max(abs_tol, rel_tol * |b|).  With a nonempty `inv_diag` the iteration is
/// right-preconditioned by the diagonal scaling (the residual contract is on
/// the unpreconditioned system either way).
KrylovResult bicgstab_solve(const LinearOp& A, const Eigen::VectorXd& b,
                            const Eigen::VectorXd& x0,
                            const KrylovConfig& cfg = {},
                            const Eigen::VectorXd& inv_diag = {});

/// Conjugate gradients (for symmetric positive definite A); used as a
/// cross-check of the BiCGStab path.
KrylovResult cg_solve(const LinearOp& A, const Eigen::VectorXd& b,
                      const Eigen::VectorXd& x0, const KrylovConfig& cfg = {});

}  // namespace mfc

#pragma once

#include <Eigen/Core>

#include "mfc/geometry.hpp"

namespace mfc {

/// One real value per space-time node, n in {0..NT}, admissible (i,j).
struct ScalarField {
  const Geometry* geom = nullptr;
  Eigen::VectorXd v;

  ScalarField() = default;
  explicit ScalarField(const Geometry& g)
      : geom(&g), v(Eigen::VectorXd::Zero(g.scalar_size())) {}

  int index(int n, int s) const { return n * geom->num_nodes() + s; }
  double& at(int n, int s) { return v[index(n, s)]; }
  double at(int n, int s) const { return v[index(n, s)]; }

  /// View of time slice n as a spatial vector.
  Eigen::VectorBlock<Eigen::VectorXd> slice(int n) {
    return v.segment(n * geom->num_nodes(), geom->num_nodes());
  }
  Eigen::VectorBlock<const Eigen::VectorXd> slice(int n) const {
    return v.segment(n * geom->num_nodes(), geom->num_nodes());
  }
};

/// Five channels per node with n in {1..NT}: either q = (a,b,c,b~,c~) or
/// sigma = (m,y,z,y~,z~).  Channel 0 is the time/density slot; channels
/// 1..4 correspond to difference channels 0..3 of Geometry.
struct Stacked5Field {
  const Geometry* geom = nullptr;
  Eigen::VectorXd v;

  Stacked5Field() = default;
  explicit Stacked5Field(const Geometry& g)
      : geom(&g), v(Eigen::VectorXd::Zero(g.stacked_size())) {}

  int index(int n, int s, int c) const {
    return ((n - 1) * geom->num_nodes() + s) * 5 + c;
  }
  double& at(int n, int s, int c) { return v[index(n, s, c)]; }
  double at(int n, int s, int c) const { return v[index(n, s, c)]; }
};

}  // namespace mfc

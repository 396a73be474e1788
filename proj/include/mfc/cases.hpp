#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mfc/admm.hpp"
#include "mfc/geometry.hpp"

namespace mfc {

/// A built-in problem instance: geometry kind, cost model, initial density
/// (with an optional exact cell-average sampler) and terminal cost.
struct Scenario {
  std::string name;
  GeometryKind kind = GeometryKind::Periodic;
  std::vector<Rect> obstacles;
  CostModel cost;
  std::function<double(double, double)> m0;
  std::function<double(double, double)> uT;
  /// Exact cell average of m0 over |x - xc|_inf < h/2 (set for indicator
  /// data; when absent, discretize() falls back to Gauss quadrature).
  std::function<double(double, double, double)> m0_cell_average;
  bool normalize = true;
};

/// Evacuation of the square [1/4,3/4]^2 on the torus:
/// m0 = uT = indicator of the square, alpha = 0.5, beta = 2, l(x,m) = m.
Scenario test_case_1();

enum class Tc2Variant { Periodic, Box, BoxWithObstacle };

/// Corner-to-corner transfer: m0 = indicator of [0,0.2]^2,
/// uT = 1 - indicator of [0.8,1]^2, alpha = 0.01, beta = 2, l = l_coeff * m;
/// optionally state-constrained, with obstacle [0.4,0.6]^2.
Scenario test_case_2(Tc2Variant variant, double l_coeff = 0.001);

/// Two humps of mass 1/2 each: a flat sinusoidal hump on [1/2,1]x[0,1/2]
/// and a sharp Gaussian centered at (1/4,3/4); uT = -exp(-20 |x|^2).
Scenario test_case_3(double alpha = 0.3, double l_coeff = 0.01,
                     GeometryKind kind = GeometryKind::Periodic);

/// Names accepted by scenario_by_name.
std::vector<std::string> scenario_names();
Scenario scenario_by_name(const std::string& name);

Geometry make_geometry(const Scenario& sc, int nh, int nt, double horizon);

/// Cell averages of m0 (exact for indicators, Gauss quadrature otherwise),
/// nodal samples of uT; when the scenario asks for it, m0 is rescaled so the
/// discrete mass h^2 sum m0 is exactly 1.
DiscreteData discretize(const Scenario& sc, const Geometry& geom);

}  // namespace mfc

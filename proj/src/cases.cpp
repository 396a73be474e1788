#include "mfc/cases.hpp"

#include <cmath>
#include <stdexcept>

namespace mfc {

namespace {

constexpr double kPi = 3.14159265358979323846;

/// Gauss-Legendre nodes/weights on [-1,1] (Newton on Legendre polynomials).
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = 0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
  }
}

/// Tensor Gauss quadrature of f over the square cell centered at (xc,yc).
double cell_quadrature(const std::function<double(double, double)>& f,
                       double xc, double yc, double h, int npts = 10) {
  static thread_local std::vector<double> gx, gw;
  static thread_local int cached_n = 0;
  if (cached_n != npts) {
    gauss_legendre(npts, gx, gw);
    cached_n = npts;
  }
  double acc = 0;
  for (int a = 0; a < npts; ++a)
    for (int b = 0; b < npts; ++b)
      acc += gw[a] * gw[b] *
             f(xc + 0.5 * h * gx[a], yc + 0.5 * h * gx[b]);
  return acc * 0.25;  // cell average: (h/2)^2 Jacobian over h^2
}

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double fa, double fm, double fb, double whole,
                        double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

double integrate_1d(const std::function<double(double)>& f, double a, double b,
                    double tol = 1e-12) {
  double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

/// 1D overlap of [lo,hi] with [a,b], optionally on the unit torus.
double overlap1(double lo, double hi, double a, double b, bool periodic) {
  auto seg = [](double l, double h, double s, double t) {
    return std::max(0.0, std::min(h, t) - std::max(l, s));
  };
  double t = seg(lo, hi, a, b);
  if (periodic) {
    t += seg(lo, hi, a + 1.0, b + 1.0);
    t += seg(lo, hi, a - 1.0, b - 1.0);
  }
  return t;
}

/// Exact cell average of the indicator of [a1,b1]x[a2,b2].
std::function<double(double, double, double)> indicator_cell_average(
    double a1, double b1, double a2, double b2, bool periodic) {
  return [=](double xc, double yc, double h) {
    return overlap1(xc - 0.5 * h, xc + 0.5 * h, a1, b1, periodic) *
           overlap1(yc - 0.5 * h, yc + 0.5 * h, a2, b2, periodic) / (h * h);
  };
}

double indicator(double x, double a, double b) {
  return (x >= a && x <= b) ? 1.0 : 0.0;
}

/// Flat hump (-sin(2 pi x1) sin(2 pi x2) - 1/2)^+ on [1/2,1]x[0,1/2].
double psi1(double x1, double x2) {
  if (x1 < 0.5 || x1 > 1.0 || x2 < 0.0 || x2 > 0.5) return 0.0;
  double v = -std::sin(2.0 * kPi * x1) * std::sin(2.0 * kPi * x2) - 0.5;
  return v > 0 ? v : 0.0;
}

/// Integral of psi1 by reduction to one dimension: with s,v in [0,pi],
/// (1/(2 pi))^2 int int (sin s sin v - 1/2)^+; the inner integral is
/// 2 sin s cos v0 - (pi - 2 v0)/2 with v0 = arcsin(1/(2 sin s)).
double psi1_integral() {
  auto inner = [](double s) {
    double ss = std::sin(s);
    if (ss <= 0.5) return 0.0;
    double v0 = std::asin(1.0 / (2.0 * ss));
    return 2.0 * ss * std::cos(v0) - 0.5 * (kPi - 2.0 * v0);
  };
  double i = integrate_1d(inner, kPi / 6.0, 5.0 * kPi / 6.0);
  return i / (4.0 * kPi * kPi);
}

/// Sharp hump exp(-400 [(x1-1/4)^2 + (x2-3/4)^2]).
double psi2(double x1, double x2) {
  double d1 = x1 - 0.25, d2 = x2 - 0.75;
  return std::exp(-400.0 * (d1 * d1 + d2 * d2));
}

double psi2_integral() {
  auto g = [](double c) {
    return std::sqrt(kPi) / 40.0 *
           (std::erf(20.0 * (1.0 - c)) + std::erf(20.0 * c));
  };
  return g(0.25) * g(0.75);
}

}  // namespace

Scenario test_case_1() {
  Scenario sc;
  sc.name = "tc1";
  sc.kind = GeometryKind::Periodic;
  sc.cost = CostModel{0.5, 2.0, 1.0};
  auto box_ind = [](double x1, double x2) {
    return indicator(x1, 0.25, 0.75) * indicator(x2, 0.25, 0.75);
  };
  sc.m0 = box_ind;
  sc.uT = box_ind;
  sc.m0_cell_average = indicator_cell_average(0.25, 0.75, 0.25, 0.75, true);
  return sc;
}

Scenario test_case_2(Tc2Variant variant, double l_coeff) {
  Scenario sc;
  sc.kind = variant == Tc2Variant::Periodic ? GeometryKind::Periodic
                                            : GeometryKind::Box;
  switch (variant) {
    case Tc2Variant::Periodic:
      sc.name = "tc2-periodic";
      break;
    case Tc2Variant::Box:
      sc.name = "tc2-box";
      break;
    case Tc2Variant::BoxWithObstacle:
      sc.name = "tc2-obstacle";
      sc.obstacles.push_back(Rect{0.4, 0.6, 0.4, 0.6});
      break;
  }
  sc.cost = CostModel{0.01, 2.0, l_coeff};
  sc.m0 = [](double x1, double x2) {
    return indicator(x1, 0.0, 0.2) * indicator(x2, 0.0, 0.2);
  };
  sc.uT = [](double x1, double x2) {
    return 1.0 - indicator(x1, 0.8, 1.0) * indicator(x2, 0.8, 1.0);
  };
  sc.m0_cell_average = indicator_cell_average(
      0.0, 0.2, 0.0, 0.2, variant == Tc2Variant::Periodic);
  return sc;
}

Scenario test_case_3(double alpha, double l_coeff, GeometryKind kind) {
  Scenario sc;
  sc.name = "tc3";
  sc.kind = kind;
  sc.cost = CostModel{alpha, 2.0, l_coeff};
  double i1 = psi1_integral();
  double i2 = psi2_integral();
  sc.m0 = [i1, i2](double x1, double x2) {
    return 0.5 * psi1(x1, x2) / i1 + 0.5 * psi2(x1, x2) / i2;
  };
  sc.uT = [](double x1, double x2) {
    return -std::exp(-20.0 * (x1 * x1 + x2 * x2));
  };
  return sc;
}

std::vector<std::string> scenario_names() {
  return {"tc1", "tc2-periodic", "tc2-box", "tc2-obstacle", "tc3"};
}

Scenario scenario_by_name(const std::string& name) {
  if (name == "tc1") return test_case_1();
  if (name == "tc2-periodic") return test_case_2(Tc2Variant::Periodic);
  if (name == "tc2-box") return test_case_2(Tc2Variant::Box);
  if (name == "tc2-obstacle") return test_case_2(Tc2Variant::BoxWithObstacle);
  if (name == "tc3") return test_case_3();
  throw std::invalid_argument("unknown scenario: " + name);
}

Geometry make_geometry(const Scenario& sc, int nh, int nt, double horizon) {
  return sc.kind == GeometryKind::Periodic
             ? Geometry::periodic(nh, nt, horizon)
             : Geometry::box(nh, nt, horizon, sc.obstacles);
}

DiscreteData discretize(const Scenario& sc, const Geometry& geom) {
  if ((geom.kind() == GeometryKind::Periodic) !=
      (sc.kind == GeometryKind::Periodic))
    throw std::invalid_argument("geometry kind does not match the scenario");
  DiscreteData data;
  data.cost = sc.cost;
  const int ns = geom.num_nodes();
  const double h = geom.h();
  data.m0.resize(ns);
  data.uT.resize(ns);
  for (int s = 0; s < ns; ++s) {
    double x1 = geom.x1(s), x2 = geom.x2(s);
    double avg = sc.m0_cell_average ? sc.m0_cell_average(x1, x2, h)
                                    : cell_quadrature(sc.m0, x1, x2, h);
    if (!(avg >= 0))
      throw std::runtime_error("initial density sampled negative");
    data.m0[s] = avg;
    data.uT[s] = sc.uT(x1, x2);
  }
  if (sc.normalize) {
    double total = h * h * data.m0.sum();
    if (!(total > 0)) throw std::runtime_error("initial density has no mass");
    data.m0 /= total;
  }
  return data;
}

}  // namespace mfc

#include "mfc/pointwise.hpp"

#include <cmath>
#include <stdexcept>

namespace mfc {

namespace {

constexpr int kBisectBudget = 200;

inline double pos(double x) { return x > 0 ? x : 0.0; }
inline double neg(double x) { return x < 0 ? -x : 0.0; }

struct NodeTerms {
  double m, r, alpha, bs;
  double e;       // (beta*-1)(1-alpha)
  double denomC;  // r beta^{-beta*} (1-alpha)
  double D;       // r beta^{1-beta*}
  double l1;      // time channel of Lambda(phi)
  double p2, p3, p4, p5;  // shifted monotone parts of the flux channels
  double gamma;
  const NodeProxInput* in;

  explicit NodeTerms(const NodeProxInput& input) : in(&input) {
    const CostModel& c = *input.cost;
    m = input.sigma[0];
    r = input.r;
    alpha = c.alpha;
    bs = c.beta_star();
    e = (bs - 1.0) * (1.0 - alpha);
    denomC = r * std::pow(c.beta, -bs) * (1.0 - alpha);
    D = r * std::pow(c.beta, 1.0 - bs);
    l1 = input.lphi[0];
    p2 = pos(input.sigma[1] - r * input.lphi[1]);
    p3 = neg(input.sigma[2] - r * input.lphi[2]);
    p4 = pos(input.sigma[3] - r * input.lphi[3]);
    p5 = neg(input.sigma[4] - r * input.lphi[4]);
    gamma = p2 * p2 + p3 * p3 + p4 * p4 + p5 * p5;
  }

  /// N(mu) = mu - m + r L1 + r ell(mu) + r mu ell'(mu); chi = N mu^{e+1}/denomC.
  double N(double mu) const {
    const CostModel& c = *in->cost;
    double ell = c.ell(in->x1, in->x2, mu);
    double dell = mu == 0 ? 0.0 : mu * c.ell_dm(in->x1, in->x2, mu);
    return mu - m + r * l1 + r * ell + r * dell;
  }

  double chi(double mu) const {
    if (mu == 0) return 0.0;
    return N(mu) * std::pow(mu, e + 1.0) / denomC;
  }

  double denom(double mu, double chi_v) const {
    // chi^{1-2/bs}: exponent is 0 for beta = 2 (chi^0 -> 1, also at chi = 0).
    double expo = 1.0 - 2.0 / bs;
    double cpow = expo == 0.0 ? 1.0 : std::pow(chi_v, expo);
    return 1.0 + D * cpow / std::pow(mu, e);
  }

  double xi(double mu) const {
    if (mu == 0) {
      // Right limit: the leading term scales like mu^{2 alpha / beta}.
      if (alpha > 0) return -gamma;
      double C = N(0.0) / denomC;
      if (C <= 0) return -gamma;
      return D * D * std::pow(C, 2.0 - 2.0 / bs) - gamma;
    }
    // chi < 0 only happens left of the admissible interval (or by rounding
    // right at its root); clamping to 0 extends Xi continuously by -gamma.
    double chi_v = std::max(0.0, chi(mu));
    double d = denom(mu, chi_v);
    return std::pow(chi_v, 2.0 / bs) * d * d - gamma;
  }
};

}  // namespace

double chi(double mu, const NodeProxInput& in) { return NodeTerms(in).chi(mu); }

double gamma(const NodeProxInput& in) { return NodeTerms(in).gamma; }

double xi(double mu, const NodeProxInput& in) { return NodeTerms(in).xi(mu); }

double prox_objective(const NodeProxInput& in,
                      const std::array<double, 5>& sigma_prime) {
  double dist2 = 0, cross = 0;
  for (int c = 0; c < 5; ++c) {
    double d = sigma_prime[c] - in.sigma[c];
    dist2 += d * d;
    cross += in.lphi[c] * d;
  }
  return -dist2 / (2.0 * in.r) - cross -
         l_tilde(*in.cost, in.x1, in.x2, sigma_prime, in.mask);
}

NodeProxOutput solve_node(const NodeProxInput& in) {
  if (in.cost == nullptr) throw std::invalid_argument("missing cost model");
  if (!(in.r > 0)) throw std::invalid_argument("r must be positive");
  NodeTerms t(in);

  NodeProxOutput out;
  auto finish_zero = [&] {
    out.branch = ProxBranch::ZeroPoint;
    out.sigma_star = {0, 0, 0, 0, 0};
    for (int c = 0; c < 5; ++c)
      out.q[c] = (out.sigma_star[c] - in.sigma[c]) / in.r + in.lphi[c];
    return out;
  };

  // Lower end of the admissible interval: mu_low = 0 when N(0) >= 0,
  // otherwise the unique root mu0 of N (same root as chi on mu > 0).
  double mu_low = 0.0;
  if (t.N(0.0) < 0) {
    double hi = std::max(1.0, t.m);
    int guard = 0;
    while (t.N(hi) <= 0) {
      hi *= 2.0;
      if (++guard > kBisectBudget)
        throw std::runtime_error("bracketing the root of chi failed");
    }
    double lo = 0.0;
    for (int it = 0; it < kBisectBudget; ++it) {
      double mid = 0.5 * (lo + hi);
      if (t.N(mid) < 0)
        lo = mid;
      else
        hi = mid;
      if (hi - lo <= std::max(1e-12, 1e-10 * hi)) break;
    }
    mu_low = hi;
  }

  const double tol_xi = 1e-12 * (1.0 + t.gamma);
  double xi_low = mu_low == 0 ? t.xi(0.0) : -t.gamma;
  double mu_star;
  if (xi_low > tol_xi) {
    // Xi > 0 on the whole admissible interval: the cone vertex wins.
    return finish_zero();
  } else if (xi_low >= -tol_xi) {
    mu_star = mu_low;
    out.branch = ProxBranch::LeftEndpoint;
  } else {
    // Bracket the sign change of Xi, then bisect.
    double hi = std::max({1.0, t.m, 2.0 * mu_low});
    int guard = 0;
    while (t.xi(hi) <= 0) {
      hi *= 2.0;
      if (++guard > kBisectBudget)
        throw std::runtime_error("bracketing the root of Xi failed");
    }
    double lo = mu_low;
    mu_star = 0.5 * (lo + hi);
    bool converged = false;
    for (int it = 0; it < kBisectBudget; ++it) {
      mu_star = 0.5 * (lo + hi);
      double v = t.xi(mu_star);
      if (std::abs(v) <= tol_xi) {
        converged = true;
        break;
      }
      if (v < 0)
        lo = mu_star;
      else
        hi = mu_star;
      if (hi - lo <= std::max(1e-12, 1e-10 * hi)) {
        mu_star = 0.5 * (lo + hi);
        converged = true;
        break;
      }
    }
    if (!converged)
      throw std::runtime_error("bisection for Xi did not converge");
    out.branch = ProxBranch::InteriorRoot;
  }

  if (mu_star <= 0) return finish_zero();

  double chi_v = std::max(0.0, t.chi(mu_star));
  double d = t.denom(mu_star, chi_v);
  out.sigma_star = {mu_star, t.p2 / d, -t.p3 / d, t.p4 / d, -t.p5 / d};

  // Keep the candidate only if it beats the cone vertex.
  std::array<double, 5> zero = {0, 0, 0, 0, 0};
  if (prox_objective(in, out.sigma_star) < prox_objective(in, zero))
    return finish_zero();

  for (int c = 0; c < 5; ++c)
    out.q[c] = (out.sigma_star[c] - in.sigma[c]) / in.r + in.lphi[c];
  return out;
}

}  // namespace mfc

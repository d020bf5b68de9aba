#include "abidsim/lpbound.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace abidsim {

MSConstants ms_constants(double alpha, double p) {
  if (!std::isfinite(alpha) || alpha < 1.0) {
    throw std::domain_error("ms_constants requires alpha >= 1");
  }
  if (!std::isfinite(p) || p <= 0.0 || p > 0.5) {
    throw std::domain_error("ms_constants requires p in (0, 1/2]");
  }
  MSConstants c;
  c.alpha = alpha;
  c.p = p;
  c.m = {0.0, p, 1.0 - p, 1.0};
  c.s = {p * alpha + (1.0 - 2.0 * p) + p / alpha,
         2.0 * p / alpha + (1.0 - 2.0 * p),
         (1.0 - p) / alpha + p / (alpha * alpha),
         0.0};
  return c;
}

namespace {

double dot(const std::array<double, 4>& a, const std::array<double, 4>& x) {
  return a[0] * x[0] + a[1] * x[1] + a[2] * x[2] + a[3] * x[3];
}

}  // namespace

LPResult solve_factor_lp(const MSConstants& c) {
  LPResult res;

  // Primal: the optimum of min max(m.x, s.x) over the simplex sits either
  // on a vertex or on an edge point where the two covering rows cross.
  bool have = false;
  auto consider = [&](const std::array<double, 4>& x) {
    const double obj = std::max(dot(c.m, x), dot(c.s, x));
    if (!have || obj < res.z) {
      have = true;
      res.z = obj;
      res.x = x;
    }
  };
  for (int k = 0; k < 4; ++k) {
    std::array<double, 4> x{};
    x[k] = 1.0;
    consider(x);
  }
  for (int k = 0; k < 4; ++k) {
    for (int l = k + 1; l < 4; ++l) {
      const double dk = c.m[k] - c.s[k];
      const double dl = c.m[l] - c.s[l];
      if (dk == dl) continue;
      const double t = dl / (dl - dk);
      if (t <= 0.0 || t >= 1.0) continue;
      std::array<double, 4> x{};
      x[k] = t;
      x[l] = 1.0 - t;
      consider(x);
    }
  }

  // Dual: with nonnegative rows the optimum has gamma + beta = 1, so sweep
  // delta(gamma) = min_k (gamma*m_k + (1-gamma)*s_k) over its breakpoints.
  auto dual_obj = [&](double g) {
    double d = g * c.m[0] + (1.0 - g) * c.s[0];
    for (int k = 1; k < 4; ++k) {
      d = std::min(d, g * c.m[k] + (1.0 - g) * c.s[k]);
    }
    return d;
  };
  double best_g = 0.0, best_d = dual_obj(0.0);
  auto consider_dual = [&](double g) {
    if (g < 0.0 || g > 1.0) return;
    const double d = dual_obj(g);
    if (d > best_d) {
      best_d = d;
      best_g = g;
    }
  };
  consider_dual(1.0);
  for (int k = 0; k < 4; ++k) {
    for (int l = k + 1; l < 4; ++l) {
      const double denom = (c.s[l] - c.s[k]) + (c.m[k] - c.m[l]);
      if (denom == 0.0) continue;
      consider_dual((c.s[l] - c.s[k]) / denom);
    }
  }
  res.dual_gamma = best_g;
  res.beta = 1.0 - best_g;
  res.delta = best_d;
  res.duality_gap = res.z - res.delta;
  return res;
}

DualCertificate dual_certificate(double alpha, double p) {
  const MSConstants c = ms_constants(alpha, p);
  const double s1 = c.s[0];

  DualCertificate cert;
  cert.delta = 1.0 / (1.0 + 1.0 / s1);
  cert.dual_gamma = cert.delta;
  cert.beta = cert.delta / s1;
  for (int k = 0; k < 4; ++k) {
    cert.slacks[k] = -c.m[k] * cert.dual_gamma - c.s[k] * cert.beta + cert.delta;
  }
  cert.slacks[4] = cert.dual_gamma + cert.beta - 1.0;
  cert.feasible = true;
  for (double s : cert.slacks) {
    if (s > 1e-12) cert.feasible = false;
  }
  cert.poly_k2 = 3.0 * alpha * alpha - alpha - 7.0;
  cert.poly_k3 = 4.0 * alpha * alpha * alpha + 2.0 * alpha * alpha -
                 11.0 * alpha - 10.0;
  return cert;
}

double alpha_star() { return (1.0 + std::sqrt(85.0)) / 6.0; }

PoaBound poa_bound(double alpha, double p) {
  const MSConstants c = ms_constants(alpha, p);
  PoaBound bound;
  bound.value = 1.0 + 1.0 / c.s[0];
  bound.certified = dual_certificate(alpha, p).feasible;
  return bound;
}

}  // namespace abidsim

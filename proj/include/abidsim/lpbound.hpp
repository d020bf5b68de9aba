#pragma once

#include <array>

namespace abidsim {

/// Per-class win-probability floors m_k and spend floors s_k of the
/// four-class query partition for rand(alpha, p).
struct MSConstants {
  std::array<double, 4> m{};
  std::array<double, 4> s{};
  double alpha = 1.0;
  double p = 0.4;
};

/// m = (0, p, 1-p, 1);
/// s = (p*a + (1-2p) + p/a,  2p/a + (1-2p),  (1-p)/a + p/a^2,  0).
MSConstants ms_constants(double alpha, double p);

struct LPResult {
  double z = 0.0;                 // primal optimum
  std::array<double, 4> x{};      // primal point on the simplex
  double dual_gamma = 0.0;        // dual weight on the m-row
  double beta = 0.0;              // dual weight on the s-row
  double delta = 0.0;             // dual objective
  double duality_gap = 0.0;       // z - delta
};

/// Minimize z subject to z >= m.x, z >= s.x, sum x = 1, x >= 0, solved by
/// exact enumeration of simplex vertices and pairwise crossing points; the
/// dual is solved by the matching one-dimensional sweep over gamma + beta = 1.
LPResult solve_factor_lp(const MSConstants& c);

struct DualCertificate {
  double delta = 0.0;
  double dual_gamma = 0.0;
  double beta = 0.0;
  bool feasible = false;
  std::array<double, 5> slacks{};  // four class constraints, then gamma+beta-1
  double poly_k2 = 0.0;            // 3a^2 - a - 7, meaningful at p = 2/5
  double poly_k3 = 0.0;            // 4a^3 + 2a^2 - 11a - 10
};

/// The closed-form dual point delta = 1/(1 + 1/s_1), gamma = delta,
/// beta = delta/s_1, with all constraint slacks reported.
DualCertificate dual_certificate(double alpha, double p);

/// (1 + sqrt(85)) / 6, the largest alpha certified at p = 2/5.
double alpha_star();

struct PoaBound {
  double value = 0.0;    // 1 + 1/s_1
  bool certified = false;  // dual certificate feasible at (alpha, p)
};

PoaBound poa_bound(double alpha, double p);

}  // namespace abidsim

#pragma once

#include <cstdint>

#include "abidsim/autobidder.hpp"
#include "abidsim/core.hpp"
#include "abidsim/mechanisms.hpp"

namespace abidsim {

// ---------------------------------------------------------------------------
// Tight two-bidder example for rand(alpha, p)

struct TightExampleSpec {
  double alpha = 1.0;
  double p = 0.4;
  double epsilon = 1e-4;
};

struct TightExample {
  Instance instance;
  BidProfile profile;
  double s1 = 0.0;  // spend floor of the outright-loss class
};

/// Two bidders with unit targets and two queries: bidder 0 values (1, eps),
/// bidder 1 values (0, 1/s_1). The returned profile (alpha/(eps*s_1)+1, 1)
/// is an exact equilibrium whose welfare ratio is (1 + 1/s_1)/(1 + eps).
TightExample tight_example(const TightExampleSpec& spec);

// ---------------------------------------------------------------------------
// Universal many-bidder construction

struct ImpossibilitySpec {
  std::size_t k = 1;     // half the bidder count
  double a = 1.1;
  double big_v = 100.0;  // V
  double epsilon = 1e-6;
  double rho = 0.0;      // tie-break increment; 0 means big_v * 1e-9
  double pi_star = 1.0;  // max-probability of the target rule
  double m_star = 0.0;   // max-threshold of the target rule
  double delta = 1.0;    // target equilibrium tolerances
  double gamma = 0.1;

  double tie_break() const { return rho > 0.0 ? rho : big_v * 1e-9; }
};

struct ImpossibilityInstance {
  Instance instance;
  BidProfile profile;
  double scale = 1.0;  // max(1, M*); all values were multiplied by it
};

/// 2k bidders A_0..A_{k-1}, B_0..B_{k-1} with unit targets and 2k queries
/// P_i, Q_i. Each P_i is contested only by A_i at value a*V/pi*; each Q_i
/// pits B_i (value V) against all A_j at the eps-scaled rotated tie-break
/// tuple. The profile bids 1/eps for the A side and 1 for the B side.
ImpossibilityInstance impossibility_instance(const ImpossibilitySpec& spec);

struct ImpossibilityBounds {
  double eq_upper = 0.0;    // (a + 1/(k+1) + eps*a) * V * k, scaled
  double opt = 0.0;         // (a/pi* + 1) * V * k, scaled
  double ratio = 0.0;       // eq_upper / opt
  double asymptotic = 0.0;  // pi* / (1 + pi*)
};

ImpossibilityBounds impossibility_bounds(const ImpossibilitySpec& spec);

struct ImpossibilityReport {
  ImpossibilityBounds bounds;

  bool chi_sum_ok = false;       // A-side mass of the tie-break tuple <= 1
  bool fairness_ok = false;      // each B_i wins Q_i w.p. <= 1/(k+1)
  bool rotation_ok = false;      // Q_j allocation is the rotated Q_0 one
  bool q_mass_ok = false;        // every A_i draws at most one unit of Q mass
  bool a_tcpa_ok = false;        // cost(A_i) <= (1 + 1/(aV)) value(A_i), and at gamma
  bool b_tcpa_ok = false;
  bool a_gain_ok = false;        // value headroom of every A_i within k*eps*a*V
  bool b_gain_ok = false;        // sampled exact B deviations within the p-cap bound
  bool welfare_ok = false;       // simulated welfare below the closed-form cap
  bool is_equilibrium = false;   // all constraints hold and gains stay below delta

  double max_a_gain = 0.0;
  double a_gain_limit = 0.0;
  double max_b_gain = 0.0;
  double b_gain_limit = 0.0;
  double simulated_welfare = 0.0;
  double opt_welfare = 0.0;
  double simulated_ratio = 0.0;

  bool k_sufficient = false;  // k + 1 > aV / ((a-1-gamma) * delta)
  double required_k = 0.0;

  bool all_checks_ok() const {
    return chi_sum_ok && fairness_ok && rotation_ok && q_mass_ok && a_tcpa_ok &&
           b_tcpa_ok && a_gain_ok && b_gain_ok && welfare_ok && is_equilibrium;
  }
};

/// Simulate the construction under the given rule (whose probed (pi*, M*)
/// must match the spec) and check every claimed property.
ImpossibilityReport verify_impossibility(const ImpossibilitySpec& spec,
                                         const AllocationRule& rule);

// ---------------------------------------------------------------------------
// Random instances

enum class ValueLaw { kUniform, kLogNormal, kTwoPoint };

/// Deterministic under the seed; targets uniform on (0.5, 2], ctrs 1.
Instance random_instance(std::uint64_t seed, std::size_t n_bidders,
                         std::size_t n_queries, ValueLaw law);

}  // namespace abidsim

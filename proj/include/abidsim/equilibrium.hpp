#pragma once

#include <array>

#include "abidsim/autobidder.hpp"
#include "abidsim/core.hpp"
#include "abidsim/mechanisms.hpp"

namespace abidsim {

struct BidderVerdict {
  BidderStats stats;
  bool tcpa_ok = false;
  BestResponse response;
};

struct EquilibriumReport {
  std::vector<BidderVerdict> bidders;
  bool is_equilibrium = false;
  double delta = 0.0;
  double gamma = 0.0;
  double eq_welfare = 0.0;
  double opt_welfare = 0.0;
  double ratio = 1.0;  // opt / eq, +inf when eq is 0 and opt positive
};

/// Check both equilibrium conditions for every bidder: the tCPA constraint
/// holds at tolerance gamma, and no unilateral multiplier change gains more
/// than delta additive value while staying feasible.
EquilibriumReport verify_equilibrium(const Instance& inst,
                                     const AllocationRule& rule,
                                     const BidProfile& prof, double delta,
                                     double gamma);

/// OPT liquid welfare over equilibrium liquid welfare.
double poa_ratio(const Instance& inst, const AllocationRule& rule,
                 const BidProfile& prof);

struct DynamicsResult {
  BidProfile profile;
  bool converged = false;
  bool cycle_detected = false;
  std::size_t rounds = 0;
};

/// Round-robin best-response dynamics. Converged when no multiplier moves
/// by more than `tol` relative over a full round; short cycles (length at
/// most 8) are detected and reported as non-convergence.
DynamicsResult best_response_dynamics(const Instance& inst,
                                      const AllocationRule& rule,
                                      const BidProfile& init, double gamma,
                                      std::size_t max_rounds,
                                      double tol = 1e-6);

struct QueryAudit {
  QueryId query = 0;
  int cls = 0;                // 1..4
  double opt_contribution = 0.0;
  double opt_win_prob = 0.0;  // P[winner is the opt-bidder]
  double expected_spend = 0.0;
  bool prob_ok = false;       // win prob >= m_k
  bool spend_ok = false;      // spend >= s_k * OPT(j)
};

/// Per-query classification of a two-bidder profile under rand(alpha, p)
/// by the opt-bidder's bid relative to the other bid, with the per-class
/// win-probability and spend floors checked per query and in aggregate.
struct PartitionAudit {
  std::vector<QueryAudit> queries;
  std::array<double, 4> opt_mass{};  // x_k = OPT(Q_k)
  std::array<double, 4> m{};
  std::array<double, 4> s{};
  double eq_welfare = 0.0;
  double opt_welfare = 0.0;
  bool per_query_ok = false;
  bool aggregate_ok = false;  // eq welfare >= max(m.x, s.x)
};

PartitionAudit partition_audit(const Instance& inst, const BidProfile& prof,
                               double alpha, double p);

}  // namespace abidsim

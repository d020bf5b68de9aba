#pragma once

#include "abidsim/core.hpp"
#include "abidsim/mechanisms.hpp"

namespace abidsim {

struct BidderStats {
  BidderId bidder = 0;
  double value = 0.0;            // sum_j x_ij * ctr_ij * v_ij
  double spend = 0.0;            // sum_j payment(i, j)
  double lw_contribution = 0.0;  // T(i) * value

  double tcpa_slack(double gamma_tolerance) const {
    return (1.0 + gamma_tolerance) * lw_contribution - spend;
  }
};

/// Run the per-query auction for every query under the profile.
AuctionOutcome run_auction(const Instance& inst, const AllocationRule& rule,
                           const BidProfile& prof);

/// Aggregate a single bidder's expected value and spend.
BidderStats evaluate_bidder(const Instance& inst, const AllocationRule& rule,
                            const BidProfile& prof, BidderId i);

/// Stats for every bidder from one shared simulation.
std::vector<BidderStats> evaluate_all(const Instance& inst,
                                      const AllocationRule& rule,
                                      const BidProfile& prof);

/// Aggregate per-bidder stats from an already-computed outcome.
std::vector<BidderStats> aggregate_stats(const Instance& inst,
                                         const AuctionOutcome& outcome);

/// spend <= (1 + gamma) * T(i) * value, up to a small absolute slack.
bool tcpa_satisfied(const BidderStats& stats, double gamma_tolerance);

struct BestResponse {
  BidderId bidder = 0;
  double best_multiplier = 0.0;
  double best_value = 0.0;
  double current_value = 0.0;
  double gain = 0.0;
  std::size_t candidate_count = 0;
  bool current_feasible = true;
};

/// Best unilateral deviation of bidder i over its bid multiplier, holding
/// the other multipliers fixed. Candidates are the rule's allocation-curve
/// breakpoints mapped into multiplier space, nudged by a relative 1e-9 on
/// both sides, plus 0, 1 and the current multiplier. A deviation counts
/// only if it satisfies the tCPA constraint at the given tolerance.
BestResponse best_response(const Instance& inst, const AllocationRule& rule,
                           const BidProfile& prof, BidderId i,
                           double gamma_tolerance);

}  // namespace abidsim

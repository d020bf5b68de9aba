#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace abidsim {

using BidderId = std::size_t;
using QueryId = std::size_t;

/// Relative tolerance used for currency/value comparisons throughout.
inline constexpr double kRelTol = 1e-9;

/// Absolute slack allowed when comparing spend against a tCPA budget.
inline constexpr double kSpendSlack = 1e-12;

struct Bidder {
  BidderId id = 0;
  double target = 1.0;  // tCPA, currency per conversion; must be > 0
};

/// One auctioned query (single slot). Values and CTRs are indexed by
/// bidder id and must cover every bidder of the instance.
struct Query {
  QueryId id = 0;
  std::vector<double> values;  // conversion value per bidder, >= 0
  std::vector<double> ctrs;    // click-through rate per bidder, in [0,1]
};

class Instance {
 public:
  Instance(std::vector<Bidder> bidders, std::vector<Query> queries);

  const std::vector<Bidder>& bidders() const { return bidders_; }
  const std::vector<Query>& queries() const { return queries_; }
  std::size_t num_bidders() const { return bidders_.size(); }
  std::size_t num_queries() const { return queries_.size(); }

  double target(BidderId i) const { return bidders_[i].target; }
  double value(BidderId i, QueryId j) const { return queries_[j].values[i]; }
  double ctr(BidderId i, QueryId j) const { return queries_[j].ctrs[i]; }

  /// value * ctr: the expected conversions per unit of allocation.
  double effective_value(BidderId i, QueryId j) const {
    return queries_[j].values[i] * queries_[j].ctrs[i];
  }

  /// target * value * ctr: what one unit of allocation is worth in
  /// liquid-welfare terms, and the bid at multiplier 1.
  double weighted_value(BidderId i, QueryId j) const {
    return bidders_[i].target * effective_value(i, j);
  }

 private:
  std::vector<Bidder> bidders_;
  std::vector<Query> queries_;
};

/// One bid multiplier per bidder. Equilibrium candidates have mu_i >= 1;
/// the type itself only requires nonnegativity.
struct BidProfile {
  std::vector<double> multipliers;
};

/// Effective auction bid of bidder i on query j under the profile:
/// mu_i * T(i) * v_ij * ctr_ij.
double effective_bid(const Instance& inst, const BidProfile& prof, BidderId i,
                     QueryId j);

/// All effective bids, indexed [query][bidder]. Throws if the profile
/// does not cover every bidder or contains a negative multiplier.
std::vector<std::vector<double>> bids_from_multipliers(const Instance& inst,
                                                       const BidProfile& prof);

/// Probabilistic allocation, indexed [query][bidder].
struct Allocation {
  std::vector<std::vector<double>> probs;
};

/// Allocation plus expected payments, indexed [query][bidder].
struct AuctionOutcome {
  Allocation allocation;
  std::vector<std::vector<double>> payments;
};

/// Total liquid welfare sum_i T(i) sum_j x_ij * ctr_ij * v_ij.
double liquid_welfare(const Instance& inst, const Allocation& alloc);

/// Per-bidder liquid-welfare contributions.
std::vector<double> liquid_welfare_by_bidder(const Instance& inst,
                                             const Allocation& alloc);

struct OptimalAllocation {
  Allocation allocation;
  std::vector<BidderId> opt_bidder;  // i*(j) per query, ties to lowest id
  std::vector<double> opt_value;     // OPT(j) = T(i*(j)) * v * ctr
  double total = 0.0;                // OPT(Q)
};

/// Welfare-optimal per-query assignment: each query goes wholly to
/// argmax_i T(i) * v_ij * ctr_ij.
OptimalAllocation optimal_allocation(const Instance& inst);

void validate_profile(const Instance& inst, const BidProfile& prof);

}  // namespace abidsim

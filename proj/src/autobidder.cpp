#include "abidsim/autobidder.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace abidsim {

AuctionOutcome run_auction(const Instance& inst, const AllocationRule& rule,
                           const BidProfile& prof) {
  const auto bids = bids_from_multipliers(inst, prof);
  AuctionOutcome out;
  out.allocation.probs.resize(inst.num_queries());
  out.payments.resize(inst.num_queries());
  for (QueryId j = 0; j < inst.num_queries(); ++j) {
    out.allocation.probs[j] = rule.allocate(bids[j]);
    out.payments[j] = rule.payments(bids[j]);
  }
  return out;
}

std::vector<BidderStats> aggregate_stats(const Instance& inst,
                                         const AuctionOutcome& outcome) {
  std::vector<BidderStats> stats(inst.num_bidders());
  for (BidderId i = 0; i < inst.num_bidders(); ++i) {
    stats[i].bidder = i;
    for (QueryId j = 0; j < inst.num_queries(); ++j) {
      stats[i].value += outcome.allocation.probs[j][i] * inst.effective_value(i, j);
      stats[i].spend += outcome.payments[j][i];
    }
    stats[i].lw_contribution = inst.target(i) * stats[i].value;
  }
  return stats;
}

std::vector<BidderStats> evaluate_all(const Instance& inst,
                                      const AllocationRule& rule,
                                      const BidProfile& prof) {
  return aggregate_stats(inst, run_auction(inst, rule, prof));
}

BidderStats evaluate_bidder(const Instance& inst, const AllocationRule& rule,
                            const BidProfile& prof, BidderId i) {
  validate_profile(inst, prof);
  if (i >= inst.num_bidders()) throw std::invalid_argument("bidder id out of range");
  BidderStats stats;
  stats.bidder = i;
  std::vector<double> bids(inst.num_bidders());
  for (QueryId j = 0; j < inst.num_queries(); ++j) {
    // A bidder with zero effective value bids zero and neither wins value
    // nor pays; unless some other bidder is active, skip the auction.
    for (BidderId b = 0; b < inst.num_bidders(); ++b) {
      bids[b] = effective_bid(inst, prof, b, j);
    }
    if (inst.weighted_value(i, j) == 0.0 && bids[i] == 0.0) continue;
    const auto probs = rule.allocate(bids);
    const auto pays = rule.payments(bids);
    stats.value += probs[i] * inst.effective_value(i, j);
    stats.spend += pays[i];
  }
  stats.lw_contribution = inst.target(i) * stats.value;
  return stats;
}

bool tcpa_satisfied(const BidderStats& stats, double gamma_tolerance) {
  return stats.spend <=
         (1.0 + gamma_tolerance) * stats.lw_contribution + kSpendSlack;
}

namespace {

// Value and spend of bidder i when it deviates to multiplier mu, with the
// query-level bid vectors of the others precomputed.
struct DeviationEval {
  double value = 0.0;
  double spend = 0.0;
};

DeviationEval evaluate_deviation(const Instance& inst, const AllocationRule& rule,
                                 std::vector<std::vector<double>>& bids,
                                 BidderId i, double mu) {
  DeviationEval ev;
  for (QueryId j = 0; j < inst.num_queries(); ++j) {
    const double w = inst.weighted_value(i, j);
    if (w == 0.0) continue;
    bids[j][i] = mu * w;
    const auto probs = rule.allocate(bids[j]);
    const auto pays = rule.payments(bids[j]);
    ev.value += probs[i] * inst.effective_value(i, j);
    ev.spend += pays[i];
  }
  return ev;
}

}  // namespace

BestResponse best_response(const Instance& inst, const AllocationRule& rule,
                           const BidProfile& prof, BidderId i,
                           double gamma_tolerance) {
  validate_profile(inst, prof);
  if (i >= inst.num_bidders()) throw std::invalid_argument("bidder id out of range");
  constexpr double kNudge = 1e-9;

  auto bids = bids_from_multipliers(inst, prof);

  std::set<double> candidates = {0.0, 1.0, prof.multipliers[i]};
  std::vector<double> others(inst.num_bidders() - 1);
  for (QueryId j = 0; j < inst.num_queries(); ++j) {
    const double w = inst.weighted_value(i, j);
    if (w == 0.0) continue;
    std::size_t t = 0;
    for (BidderId b = 0; b < inst.num_bidders(); ++b) {
      if (b != i) others[t++] = bids[j][b];
    }
    for (double threshold : rule.own_bid_thresholds(others)) {
      if (!(threshold >= 0.0) || !std::isfinite(threshold)) continue;
      const double mu = threshold / w;
      candidates.insert(mu);
      candidates.insert(mu * (1.0 - kNudge));
      candidates.insert(mu * (1.0 + kNudge));
    }
  }

  const double current_mu = prof.multipliers[i];
  const double target = inst.target(i);
  const DeviationEval current = evaluate_deviation(inst, rule, bids, i, current_mu);
  const bool current_feasible =
      current.spend <= (1.0 + gamma_tolerance) * target * current.value + kSpendSlack;

  BestResponse out;
  out.bidder = i;
  out.current_value = current.value;
  out.current_feasible = current_feasible;
  out.candidate_count = candidates.size();

  bool found = false;
  double best_value = 0.0, best_mu = 0.0;
  for (double mu : candidates) {
    const DeviationEval ev = evaluate_deviation(inst, rule, bids, i, mu);
    const bool feasible =
        ev.spend <= (1.0 + gamma_tolerance) * target * ev.value + kSpendSlack;
    if (!feasible) continue;
    if (!found || ev.value > best_value) {
      found = true;
      best_value = ev.value;
      best_mu = mu;
      continue;
    }
    // tie: prefer the incumbent multiplier, then the smallest one >= 1
    const double tol = 1e-12 * (1.0 + std::abs(best_value));
    if (ev.value >= best_value - tol) {
      if (best_mu == current_mu) continue;
      if (mu == current_mu || (mu >= 1.0 && (best_mu < 1.0 || mu < best_mu))) {
        best_mu = mu;
      }
    }
  }

  // mu = 0 always satisfies the constraint, so a feasible candidate exists
  out.best_multiplier = found ? best_mu : 0.0;
  out.best_value = found ? best_value : 0.0;
  out.gain = out.best_value - out.current_value;
  return out;
}

}  // namespace abidsim

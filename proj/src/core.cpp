#include "abidsim/core.hpp"

#include <algorithm>
#include <cmath>

namespace abidsim {

namespace {

void check_finite_nonneg(double x, const char* what) {
  if (!std::isfinite(x) || x < 0.0) {
    throw std::invalid_argument(std::string(what) + " must be finite and nonnegative");
  }
}

}  // namespace

Instance::Instance(std::vector<Bidder> bidders, std::vector<Query> queries)
    : bidders_(std::move(bidders)), queries_(std::move(queries)) {
  if (bidders_.empty()) throw std::invalid_argument("instance needs at least one bidder");
  if (queries_.empty()) throw std::invalid_argument("instance needs at least one query");
  for (std::size_t i = 0; i < bidders_.size(); ++i) {
    bidders_[i].id = i;
    if (!std::isfinite(bidders_[i].target) || bidders_[i].target <= 0.0) {
      throw std::invalid_argument("tCPA target must be positive");
    }
  }
  for (std::size_t j = 0; j < queries_.size(); ++j) {
    Query& q = queries_[j];
    q.id = j;
    if (q.ctrs.empty()) q.ctrs.assign(bidders_.size(), 1.0);
    if (q.values.size() != bidders_.size() || q.ctrs.size() != bidders_.size()) {
      throw std::invalid_argument("query must carry a value and ctr for every bidder");
    }
    for (std::size_t i = 0; i < bidders_.size(); ++i) {
      check_finite_nonneg(q.values[i], "value");
      check_finite_nonneg(q.ctrs[i], "ctr");
      if (q.ctrs[i] > 1.0) throw std::invalid_argument("ctr must be at most 1");
    }
  }
}

void validate_profile(const Instance& inst, const BidProfile& prof) {
  if (prof.multipliers.size() != inst.num_bidders()) {
    throw std::invalid_argument("bid profile does not cover all bidders");
  }
  for (double mu : prof.multipliers) {
    if (!std::isfinite(mu) || mu < 0.0) {
      throw std::invalid_argument("bid multipliers must be finite and nonnegative");
    }
  }
}

double effective_bid(const Instance& inst, const BidProfile& prof, BidderId i,
                     QueryId j) {
  return prof.multipliers[i] * inst.weighted_value(i, j);
}

std::vector<std::vector<double>> bids_from_multipliers(const Instance& inst,
                                                       const BidProfile& prof) {
  validate_profile(inst, prof);
  std::vector<std::vector<double>> bids(inst.num_queries(),
                                        std::vector<double>(inst.num_bidders()));
  for (QueryId j = 0; j < inst.num_queries(); ++j) {
    for (BidderId i = 0; i < inst.num_bidders(); ++i) {
      bids[j][i] = effective_bid(inst, prof, i, j);
    }
  }
  return bids;
}

namespace {

void check_allocation_shape(const Instance& inst, const Allocation& alloc) {
  if (alloc.probs.size() != inst.num_queries()) {
    throw std::invalid_argument("allocation query count mismatch");
  }
  for (const auto& row : alloc.probs) {
    if (row.size() != inst.num_bidders()) {
      throw std::invalid_argument("allocation bidder count mismatch");
    }
  }
}

}  // namespace

std::vector<double> liquid_welfare_by_bidder(const Instance& inst,
                                             const Allocation& alloc) {
  check_allocation_shape(inst, alloc);
  std::vector<double> lw(inst.num_bidders(), 0.0);
  for (QueryId j = 0; j < inst.num_queries(); ++j) {
    for (BidderId i = 0; i < inst.num_bidders(); ++i) {
      lw[i] += alloc.probs[j][i] * inst.weighted_value(i, j);
    }
  }
  return lw;
}

double liquid_welfare(const Instance& inst, const Allocation& alloc) {
  const auto lw = liquid_welfare_by_bidder(inst, alloc);
  double total = 0.0;
  for (double v : lw) total += v;
  return total;
}

OptimalAllocation optimal_allocation(const Instance& inst) {
  OptimalAllocation out;
  out.allocation.probs.assign(inst.num_queries(),
                              std::vector<double>(inst.num_bidders(), 0.0));
  out.opt_bidder.resize(inst.num_queries());
  out.opt_value.resize(inst.num_queries());
  for (QueryId j = 0; j < inst.num_queries(); ++j) {
    BidderId best = 0;
    double best_w = inst.weighted_value(0, j);
    for (BidderId i = 1; i < inst.num_bidders(); ++i) {
      const double w = inst.weighted_value(i, j);
      if (w > best_w) {  // ties stay with the lowest index
        best = i;
        best_w = w;
      }
    }
    out.allocation.probs[j][best] = 1.0;
    out.opt_bidder[j] = best;
    out.opt_value[j] = best_w;
    out.total += best_w;
  }
  return out;
}

}  // namespace abidsim

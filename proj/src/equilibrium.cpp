#include "abidsim/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "abidsim/lpbound.hpp"

namespace abidsim {

EquilibriumReport verify_equilibrium(const Instance& inst,
                                     const AllocationRule& rule,
                                     const BidProfile& prof, double delta,
                                     double gamma) {
  if (delta < 0.0 || gamma < 0.0) {
    throw std::invalid_argument("equilibrium tolerances must be nonnegative");
  }
  EquilibriumReport report;
  report.delta = delta;
  report.gamma = gamma;

  const auto stats = evaluate_all(inst, rule, prof);
  report.is_equilibrium = true;
  for (BidderId i = 0; i < inst.num_bidders(); ++i) {
    BidderVerdict v;
    v.stats = stats[i];
    v.tcpa_ok = tcpa_satisfied(stats[i], gamma);
    v.response = best_response(inst, rule, prof, i, gamma);
    if (!v.tcpa_ok || v.response.gain > delta + kSpendSlack) {
      report.is_equilibrium = false;
    }
    report.bidders.push_back(std::move(v));
  }

  for (const auto& v : report.bidders) report.eq_welfare += v.stats.lw_contribution;
  report.opt_welfare = optimal_allocation(inst).total;
  if (report.eq_welfare > 0.0) {
    report.ratio = report.opt_welfare / report.eq_welfare;
  } else {
    report.ratio = report.opt_welfare > 0.0
                       ? std::numeric_limits<double>::infinity()
                       : 1.0;
  }
  return report;
}

double poa_ratio(const Instance& inst, const AllocationRule& rule,
                 const BidProfile& prof) {
  double eq = 0.0;
  for (const auto& st : evaluate_all(inst, rule, prof)) eq += st.lw_contribution;
  const double opt = optimal_allocation(inst).total;
  if (eq > 0.0) return opt / eq;
  return opt > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
}

namespace {

bool profiles_close(const std::vector<double>& a, const std::vector<double>& b,
                    double tol) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i] - b[i]) > tol * std::max(1.0, std::abs(b[i]))) return false;
  }
  return true;
}

}  // namespace

DynamicsResult best_response_dynamics(const Instance& inst,
                                      const AllocationRule& rule,
                                      const BidProfile& init, double gamma,
                                      std::size_t max_rounds, double tol) {
  if (max_rounds < 1) throw std::invalid_argument("max_rounds must be at least 1");
  validate_profile(inst, init);

  DynamicsResult result;
  result.profile = init;
  std::deque<std::vector<double>> history;  // recent round-end profiles

  // Once every change in a round is below tol, keep going for a few more
  // rounds until a zero-change round certifies an exact best-response
  // fixed point. Sub-tolerance movement that never settles is an
  // escalation war across an allocation jump (each bidder forever
  // outbidding the other by a nudge) and is reported as non-convergence,
  // since large gains can persist through arbitrarily small bid creep.
  constexpr std::size_t kPolishRounds = 64;
  std::size_t quiet_rounds = 0;

  for (std::size_t round = 0; round < max_rounds + kPolishRounds; ++round) {
    double max_change = 0.0;
    for (BidderId i = 0; i < inst.num_bidders(); ++i) {
      const BestResponse br = best_response(inst, rule, result.profile, i, gamma);
      const double old_mu = result.profile.multipliers[i];
      const double change =
          std::abs(br.best_multiplier - old_mu) / std::max(1.0, std::abs(old_mu));
      max_change = std::max(max_change, change);
      result.profile.multipliers[i] = br.best_multiplier;
    }
    result.rounds = round + 1;
    if (max_change == 0.0) {
      result.converged = true;
      return result;
    }
    if (max_change < tol) {
      if (++quiet_rounds >= kPolishRounds) return result;  // creeping, not fixed
      continue;
    }
    quiet_rounds = 0;
    if (round + 1 >= max_rounds) return result;
    for (const auto& past : history) {
      if (profiles_close(result.profile.multipliers, past, tol)) {
        result.cycle_detected = true;
        return result;  // oscillation; converged stays false
      }
    }
    history.push_back(result.profile.multipliers);
    if (history.size() > 8) history.pop_front();
  }
  return result;
}

PartitionAudit partition_audit(const Instance& inst, const BidProfile& prof,
                               double alpha, double p) {
  if (inst.num_bidders() != 2) {
    throw std::invalid_argument("partition audit requires exactly two bidders");
  }
  validate_profile(inst, prof);
  for (double mu : prof.multipliers) {
    if (mu < 1.0) {
      throw std::invalid_argument(
          "partition audit requires all multipliers at least 1");
    }
  }
  const RandRule rule(alpha, p);
  const MSConstants consts = ms_constants(alpha, p);

  PartitionAudit audit;
  audit.m = consts.m;
  audit.s = consts.s;
  const auto opt = optimal_allocation(inst);
  audit.opt_welfare = opt.total;

  const auto outcome = run_auction(inst, rule, prof);
  audit.eq_welfare = liquid_welfare(inst, outcome.allocation);

  audit.per_query_ok = true;
  for (QueryId j = 0; j < inst.num_queries(); ++j) {
    const BidderId opt_b = opt.opt_bidder[j];
    const BidderId other = 1 - opt_b;
    const double bo = effective_bid(inst, prof, opt_b, j);
    const double bt = effective_bid(inst, prof, other, j);

    QueryAudit qa;
    qa.query = j;
    qa.opt_contribution = opt.opt_value[j];
    // boundary queries fall into the class with the smaller win floor
    if (alpha * bo <= bt) qa.cls = 1;
    else if (bo <= bt) qa.cls = 2;
    else if (bo <= alpha * bt) qa.cls = 3;
    else qa.cls = 4;

    qa.opt_win_prob = outcome.allocation.probs[j][opt_b];
    qa.expected_spend = outcome.payments[j][opt_b] + outcome.payments[j][other];

    const double mk = audit.m[qa.cls - 1];
    const double sk = audit.s[qa.cls - 1];
    qa.prob_ok = qa.opt_win_prob >= mk - 1e-9;
    qa.spend_ok =
        qa.expected_spend >= sk * qa.opt_contribution - 1e-9 * (1.0 + qa.opt_contribution);
    if (!qa.prob_ok || !qa.spend_ok) audit.per_query_ok = false;

    audit.opt_mass[qa.cls - 1] += qa.opt_contribution;
    audit.queries.push_back(qa);
  }

  double m_bound = 0.0, s_bound = 0.0;
  for (int k = 0; k < 4; ++k) {
    m_bound += audit.m[k] * audit.opt_mass[k];
    s_bound += audit.s[k] * audit.opt_mass[k];
  }
  const double tol = 1e-9 * (1.0 + audit.opt_welfare);
  audit.aggregate_ok = audit.eq_welfare >= std::max(m_bound, s_bound) - tol;
  return audit;
}

}  // namespace abidsim

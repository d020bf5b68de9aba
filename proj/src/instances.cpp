#include "abidsim/instances.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "abidsim/lpbound.hpp"

namespace abidsim {

TightExample tight_example(const TightExampleSpec& spec) {
  if (!(spec.epsilon > 0.0)) throw std::domain_error("epsilon must be positive");
  const MSConstants c = ms_constants(spec.alpha, spec.p);  // validates alpha, p
  const double s1 = c.s[0];

  std::vector<Bidder> bidders = {{0, 1.0}, {1, 1.0}};
  std::vector<Query> queries(2);
  queries[0].values = {1.0, 0.0};
  queries[1].values = {spec.epsilon, 1.0 / s1};

  TightExample out{Instance(std::move(bidders), std::move(queries)),
                   BidProfile{{spec.alpha / (spec.epsilon * s1) + 1.0, 1.0}},
                   s1};
  return out;
}

// ---------------------------------------------------------------------------

namespace {

void validate_impossibility(const ImpossibilitySpec& spec) {
  if (spec.k < 1) throw std::domain_error("k must be at least 1");
  if (!(spec.a >= 1.0)) throw std::domain_error("a must be at least 1");
  if (!(spec.big_v >= 1.0)) throw std::domain_error("V must be at least 1");
  if (!(spec.epsilon > 0.0)) throw std::domain_error("epsilon must be positive");
  if (!(spec.pi_star > 0.0 && spec.pi_star <= 1.0)) {
    throw std::domain_error("pi* must lie in (0, 1]");
  }
  if (!(spec.m_star >= 0.0)) throw std::domain_error("M* must be nonnegative");
  if (!(spec.delta > 0.0 && spec.gamma > 0.0)) {
    throw std::domain_error("delta and gamma must be positive");
  }
  if (!((spec.a - 1.0) - spec.gamma > 0.0)) {
    throw std::domain_error("a must exceed 1 + gamma");
  }
}

}  // namespace

ImpossibilityInstance impossibility_instance(const ImpossibilitySpec& spec) {
  validate_impossibility(spec);
  const std::size_t k = spec.k;
  const double scale = std::max(1.0, spec.m_star);
  const double av = spec.a * spec.big_v;
  const double rho = spec.tie_break();

  std::vector<Bidder> bidders(2 * k);
  for (std::size_t i = 0; i < 2 * k; ++i) bidders[i] = {i, 1.0};

  // queries 0..k-1 are the P_i, queries k..2k-1 are the Q_i
  std::vector<Query> queries(2 * k);
  for (std::size_t i = 0; i < k; ++i) {
    queries[i].values.assign(2 * k, 0.0);
    queries[i].values[i] = av / spec.pi_star * scale;
  }
  for (std::size_t i = 0; i < k; ++i) {
    Query& q = queries[k + i];
    q.values.assign(2 * k, 0.0);
    q.values[k + i] = spec.big_v * scale;
    for (std::size_t j = 0; j < k; ++j) {
      const double rank = double(((i + j) % k) + 1);
      q.values[j] = spec.epsilon * (av + rank * rho) * scale;
    }
  }

  BidProfile prof;
  prof.multipliers.assign(2 * k, 1.0);
  for (std::size_t j = 0; j < k; ++j) prof.multipliers[j] = 1.0 / spec.epsilon;

  return {Instance(std::move(bidders), std::move(queries)), std::move(prof),
          scale};
}

ImpossibilityBounds impossibility_bounds(const ImpossibilitySpec& spec) {
  validate_impossibility(spec);
  const double scale = std::max(1.0, spec.m_star);
  const double vk = spec.big_v * double(spec.k) * scale;
  ImpossibilityBounds b;
  b.eq_upper =
      (spec.a + 1.0 / double(spec.k + 1) + spec.epsilon * spec.a) * vk;
  b.opt = (spec.a / spec.pi_star + 1.0) * vk;
  b.ratio = b.eq_upper / b.opt;
  b.asymptotic = spec.pi_star / (1.0 + spec.pi_star);
  return b;
}

ImpossibilityReport verify_impossibility(const ImpossibilitySpec& spec,
                                         const AllocationRule& rule) {
  validate_impossibility(spec);
  const MaxThreshold probed = max_threshold(rule);
  if (std::abs(probed.pi_star - spec.pi_star) > 1e-9 ||
      std::abs(probed.m_star - spec.m_star) > 1e-9 * std::max(1.0, spec.m_star)) {
    throw std::invalid_argument(
        "rule's probed (pi*, M*) do not match the instance spec");
  }

  const std::size_t k = spec.k;
  const double scale = std::max(1.0, spec.m_star);
  const double av = spec.a * spec.big_v;
  const double rho = spec.tie_break();

  const ImpossibilityInstance built = impossibility_instance(spec);
  const Instance& inst = built.instance;
  const BidProfile& prof = built.profile;

  const AuctionOutcome outcome = run_auction(inst, rule, prof);
  const auto stats = aggregate_stats(inst, outcome);

  ImpossibilityReport rep;
  rep.bounds = impossibility_bounds(spec);

  auto q_prob = [&](std::size_t i, std::size_t j) {
    // P[Q_j allocated to A_i]
    return outcome.allocation.probs[k + j][i];
  };

  // Mass of the Q_0 tie-break tuple going to the A side.
  double chi_a_mass = 0.0;
  for (std::size_t i = 0; i < k; ++i) chi_a_mass += q_prob(i, 0);
  rep.chi_sum_ok = chi_a_mass <= 1.0 + 1e-9;

  rep.fairness_ok = true;
  const double fairness_cap = 1.0 / double(k + 1) + 1e-9;
  for (std::size_t i = 0; i < k; ++i) {
    if (outcome.allocation.probs[k + i][k + i] > fairness_cap) {
      rep.fairness_ok = false;
    }
  }

  // Rotation symmetry: P[Q_j -> A_i] equals P[Q_0 -> A_{(i+j) mod k}].
  rep.rotation_ok = true;
  auto check_rotation = [&](std::size_t i, std::size_t j) {
    if (std::abs(q_prob(i, j) - q_prob((i + j) % k, 0)) > 1e-9) {
      rep.rotation_ok = false;
    }
  };
  if (k <= 64) {
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) check_rotation(i, j);
    }
  } else {
    for (std::size_t t = 0; t < 300; ++t) {
      check_rotation((17 * t) % k, (31 * t + 5) % k);
    }
  }

  rep.q_mass_ok = true;
  for (std::size_t i = 0; i < k; ++i) {
    double mass = 0.0;
    for (std::size_t j = 0; j < k; ++j) mass += q_prob(i, j);
    if (mass > 1.0 + 1e-9) rep.q_mass_ok = false;
  }

  rep.a_tcpa_ok = true;
  rep.b_tcpa_ok = true;
  for (std::size_t i = 0; i < k; ++i) {
    const BidderStats& st = stats[i];
    const double cap = (1.0 + 1.0 / av) * st.lw_contribution;
    if (st.spend > cap + 1e-9 * (1.0 + cap)) rep.a_tcpa_ok = false;
    if (!tcpa_satisfied(st, spec.gamma)) rep.a_tcpa_ok = false;
    if (!tcpa_satisfied(stats[k + i], spec.gamma)) rep.b_tcpa_ok = false;
  }

  // A-side defection headroom: even an unbounded bid only lifts A_i to
  // pi* of its P-query plus all of its eps-values.
  rep.a_gain_limit = double(k) * spec.epsilon * av * scale;
  const double rho_slack =
      spec.epsilon * rho * double(k) * double(k + 1) * scale + 1e-9;
  rep.max_a_gain = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    double ceiling = spec.pi_star * inst.effective_value(i, i);
    for (std::size_t j = 0; j < k; ++j) ceiling += inst.effective_value(i, k + j);
    rep.max_a_gain = std::max(rep.max_a_gain, ceiling - stats[i].value);
  }
  rep.a_gain_ok = rep.max_a_gain <= rep.a_gain_limit + rho_slack;

  // B-side defections, checked exactly on a sample (the construction is
  // rotation-symmetric, so the sampled bidders stand in for all of them).
  const double denom = ((spec.a - 1.0) - spec.gamma) * double(k + 1);
  rep.b_gain_limit = av * scale / denom;
  std::set<std::size_t> sample = {0, k / 2, k - 1};
  rep.max_b_gain = 0.0;
  for (std::size_t i : sample) {
    const BestResponse br = best_response(inst, rule, prof, k + i, spec.gamma);
    rep.max_b_gain = std::max(rep.max_b_gain, br.gain);
  }
  rep.b_gain_ok = rep.max_b_gain <= rep.b_gain_limit + 1e-9;

  rep.simulated_welfare = liquid_welfare(inst, outcome.allocation);
  rep.opt_welfare = optimal_allocation(inst).total;
  rep.simulated_ratio = rep.simulated_welfare / rep.opt_welfare;
  rep.welfare_ok = rep.simulated_welfare <=
                   rep.bounds.eq_upper + 1e-9 * (1.0 + rep.bounds.eq_upper);

  rep.is_equilibrium = rep.a_tcpa_ok && rep.b_tcpa_ok &&
                       rep.max_a_gain <= spec.delta + kSpendSlack &&
                       rep.max_b_gain <= spec.delta + kSpendSlack;

  rep.required_k = av / (((spec.a - 1.0) - spec.gamma) * spec.delta);
  rep.k_sufficient = double(k + 1) > rep.required_k;
  return rep;
}

// ---------------------------------------------------------------------------

Instance random_instance(std::uint64_t seed, std::size_t n_bidders,
                         std::size_t n_queries, ValueLaw law) {
  if (n_bidders < 1 || n_queries < 1) {
    throw std::invalid_argument("need at least one bidder and one query");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);

  auto draw_value = [&]() {
    switch (law) {
      case ValueLaw::kUniform:
        return 1.0 - u(rng);  // (0, 1]
      case ValueLaw::kLogNormal:
        return std::exp(normal(rng));
      case ValueLaw::kTwoPoint:
        return u(rng) < 0.25 ? 0.0 : 1.0;
    }
    throw std::invalid_argument("unknown value law");
  };

  std::vector<Bidder> bidders(n_bidders);
  for (std::size_t i = 0; i < n_bidders; ++i) {
    bidders[i] = {i, 2.0 - 1.5 * u(rng)};  // (0.5, 2]
  }
  std::vector<Query> queries(n_queries);
  for (std::size_t j = 0; j < n_queries; ++j) {
    queries[j].values.resize(n_bidders);
    for (std::size_t i = 0; i < n_bidders; ++i) {
      queries[j].values[i] = draw_value();
    }
  }
  return Instance(std::move(bidders), std::move(queries));
}

}  // namespace abidsim

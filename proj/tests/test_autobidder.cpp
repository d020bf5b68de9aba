#include <cmath>
#include <random>

#include "doctest.h"

#include "abidsim/autobidder.hpp"
#include "abidsim/instances.hpp"
#include "abidsim/lpbound.hpp"

using namespace abidsim;

TEST_CASE("tight-example bidder stats") {
  const double eps = 1e-4;
  const TightExample ex = tight_example({alpha_star(), 0.4, eps});
  const RandRule rule(alpha_star(), 0.4);

  const BidderStats a = evaluate_bidder(ex.instance, rule, ex.profile, 0);
  CHECK(a.value == doctest::Approx(1.0 + eps).epsilon(1e-12));
  CHECK(a.spend == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(tcpa_satisfied(a, 0.0));

  const BidderStats b = evaluate_bidder(ex.instance, rule, ex.profile, 1);
  CHECK(b.value == 0.0);
  CHECK(b.spend == 0.0);
  CHECK(tcpa_satisfied(b, 0.0));
}

TEST_CASE("all-zero values mean zero value and spend") {
  Instance inst({{0, 1.0}, {1, 1.0}},
                {Query{0, {0.0, 2.0}, {}}, Query{1, {0.0, 1.0}, {}}});
  const SecondPriceRule rule;
  const BidderStats st = evaluate_bidder(inst, rule, BidProfile{{1.0, 1.0}}, 0);
  CHECK(st.value == 0.0);
  CHECK(st.spend == 0.0);
}

TEST_CASE("tcpa check") {
  BidderStats st;
  st.value = 1.0 + 1e-4;
  st.spend = 1.0;
  st.lw_contribution = st.value;
  CHECK(tcpa_satisfied(st, 0.0));

  st = BidderStats{};
  CHECK(tcpa_satisfied(st, 10.0));  // vacuous at zero value, zero spend

  st.value = 1.0;
  st.lw_contribution = 1.0;
  st.spend = 2.0;
  CHECK_FALSE(tcpa_satisfied(st, 0.5));
  CHECK(tcpa_satisfied(st, 1.0));
}

TEST_CASE("tight-example bidder B cannot gain by deviating") {
  for (double alpha : {1.0, 1.3, alpha_star()}) {
    for (double eps : {1e-2, 1e-4}) {
      const TightExample ex = tight_example({alpha, 0.4, eps});
      const RandRule rule(alpha, 0.4);
      const BestResponse br = best_response(ex.instance, rule, ex.profile, 1, 0.0);
      CHECK(br.current_feasible);
      CHECK(br.gain <= kSpendSlack);
    }
  }
}

TEST_CASE("a lone bidder below the reserve gains by reaching it") {
  Instance inst({{0, 1.0}}, {Query{0, {10.0}, {}}});
  const SecondPriceRule rule(5.0);
  // multiplier 0.3 bids 3, below the reserve of 5: no allocation
  const BestResponse br = best_response(inst, rule, BidProfile{{0.3}}, 0, 0.0);
  CHECK(br.current_value == 0.0);
  CHECK(br.best_value == doctest::Approx(10.0));
  CHECK(br.gain == doctest::Approx(10.0));
  CHECK(br.best_multiplier * 10.0 >= 5.0);
}

TEST_CASE("gain is never negative and candidates include the incumbent") {
  std::mt19937_64 rng(5);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Instance inst = random_instance(seed, 2, 5, ValueLaw::kUniform);
    const RandRule rule(1.4, 0.4);
    BidProfile prof{{1.0 + double(rng() % 100) / 50.0,
                     1.0 + double(rng() % 100) / 50.0}};
    for (BidderId i = 0; i < 2; ++i) {
      const BestResponse br = best_response(inst, rule, prof, i, 1e-6);
      if (br.current_feasible) CHECK(br.gain >= 0.0);
      CHECK(br.best_multiplier >= 0.0);
      CHECK(br.candidate_count >= 3);
    }
  }
}

TEST_CASE("breakpoint candidates are exhaustive vs a 200-point log grid") {
  int beaten = 0;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const Instance inst = random_instance(seed, 2, 4, ValueLaw::kUniform);
    const RulePtr rule = seed % 2 ? make_rand(1.0 + (seed % 7) * 0.1, 0.4)
                                  : make_second_price(0.0);
    const BidProfile prof{{1.5, 1.2}};
    const BidderId i = seed % 2;
    const double gamma = 1e-6;
    const BestResponse br = best_response(inst, *rule, prof, i, gamma);

    auto value_at = [&](double mu) -> double {
      BidProfile dev = prof;
      dev.multipliers[i] = mu;
      const BidderStats st = evaluate_bidder(inst, *rule, dev, i);
      if (!tcpa_satisfied(st, gamma)) return -1.0;
      return st.value;
    };
    for (int g = 0; g < 200; ++g) {
      const double mu = std::exp(-4.0 + 10.0 * double(g) / 199.0);
      if (value_at(mu) > br.best_value * (1.0 + 1e-6) + 1e-12) ++beaten;
    }
  }
  CHECK(beaten == 0);
}

TEST_CASE("gain scales with values and is invariant to target scaling") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Instance base = random_instance(seed, 2, 4, ValueLaw::kUniform);
    const RandRule rule(1.5, 0.4);
    const BidProfile prof{{1.7, 1.1}};
    const double c = 3.5;

    std::vector<Bidder> bidders = base.bidders();
    std::vector<Query> scaled_values = base.queries();
    for (Query& q : scaled_values) {
      for (double& v : q.values) v *= c;
    }
    const Instance values_scaled(bidders, scaled_values);

    std::vector<Bidder> scaled_bidders = base.bidders();
    for (Bidder& b : scaled_bidders) b.target *= c;
    const Instance targets_scaled(scaled_bidders, base.queries());

    for (BidderId i = 0; i < 2; ++i) {
      const BestResponse b0 = best_response(base, rule, prof, i, 1e-6);
      const BestResponse bv = best_response(values_scaled, rule, prof, i, 1e-6);
      const BestResponse bt = best_response(targets_scaled, rule, prof, i, 1e-6);
      CHECK(bv.gain == doctest::Approx(c * b0.gain).epsilon(1e-9).scale(1.0));
      CHECK(bv.best_multiplier ==
            doctest::Approx(b0.best_multiplier).epsilon(1e-9));
      CHECK(bt.gain == doctest::Approx(b0.gain).epsilon(1e-9).scale(1.0));
    }
  }
}

TEST_CASE("lowering the multiplier never increases value") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Instance inst = random_instance(seed, 2, 4, ValueLaw::kUniform);
    const RandRule rule(1.6, 0.3);
    double prev = -1.0;
    for (double mu : {0.0, 0.5, 1.0, 1.5, 2.5, 4.0}) {
      const BidderStats st =
          evaluate_bidder(inst, rule, BidProfile{{mu, 1.3}}, 0);
      CHECK(st.value >= prev - 1e-12);
      prev = st.value;
    }
  }
}

TEST_CASE("infeasible incumbent profiles are flagged") {
  // bidder 0 massively overbids a query it barely values
  Instance inst({{0, 1.0}, {1, 1.0}},
                {Query{0, {0.1, 5.0}, {}}});
  const SecondPriceRule rule;
  const BestResponse br =
      best_response(inst, rule, BidProfile{{100.0, 1.0}}, 0, 0.0);
  CHECK_FALSE(br.current_feasible);  // pays 5 for value 0.1
  // the reported best deviation is still feasible
  BidProfile best = BidProfile{{br.best_multiplier, 1.0}};
  CHECK(tcpa_satisfied(evaluate_bidder(inst, rule, best, 0), 0.0));
}

// Acceptance gate: one pass/fail line per criterion, exit 1 on any failure.
//
// argv[1] must be the path to the abidsim CLI binary (criterion 1 shells
// out to it and parses the JSON it writes).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "abidsim/autobidder.hpp"
#include "abidsim/core.hpp"
#include "abidsim/equilibrium.hpp"
#include "abidsim/instances.hpp"
#include "abidsim/lpbound.hpp"
#include "abidsim/mechanisms.hpp"

using namespace abidsim;
using nlohmann::json;

namespace {

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;
  std::function<bool(std::string&)> run;
};

std::string g_cli;

bool approx(double x, double target, double tol) {
  return std::abs(x - target) <= tol;
}

// 1. CLI lp at (alpha*, 2/5): z ~ 0.5274, bound ~ 1.896, certificate
//    feasible with the quadratic constraint tight.
bool crit_poa_bound(std::string& why) {
  const auto tmp =
      (std::filesystem::temp_directory_path() / "abidsim_accept_lp.json")
          .string();
  char cmd[512];
  std::snprintf(cmd, sizeof(cmd), "'%s' --output '%s' lp --alpha %.17g --p 0.4",
                g_cli.c_str(), tmp.c_str(), alpha_star());
  const int rc = std::system(cmd);
  if (rc != 0) {
    why = "cli exited with status " + std::to_string(rc);
    return false;
  }
  std::ifstream in(tmp);
  json doc;
  in >> doc;
  std::remove(tmp.c_str());
  const double z = doc.at("z").get<double>();
  const double bound = doc.at("poa_bound").get<double>();
  const bool feasible = doc.at("certificate").at("feasible").get<bool>();
  const double poly = doc.at("certificate").at("poly_k2").get<double>();
  if (!approx(z, 0.5274, 5e-4)) {
    why = "z = " + std::to_string(z);
    return false;
  }
  if (!approx(bound, 1.896, 1e-3)) {
    why = "poa_bound = " + std::to_string(bound);
    return false;
  }
  if (!feasible || !doc.at("certified").get<bool>()) {
    why = "certificate not feasible";
    return false;
  }
  if (std::abs(poly) > 1e-9) {
    why = "quadratic constraint not tight: " + std::to_string(poly);
    return false;
  }
  return true;
}

// 2. Certificate feasible on a 100-point grid over [1, alpha*] and
//    infeasible just past alpha*.
bool crit_certificate_range(std::string& why) {
  for (int i = 0; i < 100; ++i) {
    const double alpha = 1.0 + (alpha_star() - 1.0) * i / 99.0;
    if (!dual_certificate(alpha, 0.4).feasible) {
      why = "infeasible at alpha = " + std::to_string(alpha);
      return false;
    }
  }
  const DualCertificate past = dual_certificate(alpha_star() + 0.01, 0.4);
  if (past.feasible) {
    why = "feasible past alpha*";
    return false;
  }
  if (past.poly_k2 <= 0.0) {
    why = "quadratic did not flip sign past alpha*";
    return false;
  }
  return true;
}

// 3. The tight example verifies as a (1e-9, 1e-9)-equilibrium with the
//    closed-form welfare ratio.
bool crit_tight_example(std::string& why) {
  const double eps = 1e-4;
  const TightExample ex = tight_example({alpha_star(), 0.4, eps});
  const RandRule rule(alpha_star(), 0.4);
  const EquilibriumReport rep =
      verify_equilibrium(ex.instance, rule, ex.profile, 1e-9, 1e-9);
  if (!rep.is_equilibrium) {
    why = "profile failed equilibrium verification";
    return false;
  }
  if (!approx(rep.ratio, 1.8958, 1e-3)) {
    why = "ratio = " + std::to_string(rep.ratio);
    return false;
  }
  const double formula = (1.0 + 1.0 / ex.s1) / (1.0 + eps);
  if (std::abs(rep.ratio - formula) > 1e-9) {
    why = "ratio differs from closed form by " +
          std::to_string(rep.ratio - formula);
    return false;
  }
  return true;
}

// 4. Closed-form rand prices agree with curve-integrated Myerson prices,
//    and rand at alpha = 1 reproduces second price bit for bit.
bool crit_rand_pricing(std::string& why) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> ub(0.0, 10.0);
  std::uniform_real_distribution<double> ua(1.0, 3.0);
  std::uniform_real_distribution<double> up(0.01, 0.5);
  for (int t = 0; t < 10000; ++t) {
    const double alpha = t % 10 == 0 ? 1.0 : ua(rng);
    const double p = up(rng);
    double b[2] = {ub(rng), ub(rng)};
    if (t % 17 == 0) b[1] = b[0];                      // exact tie
    if (t % 23 == 0) b[t % 2] = 0.0;                   // a zero bid
    if (t % 31 == 0) b[1] = alpha * b[0];              // outright boundary
    const RandRule rule(alpha, p);
    const std::vector<double> fast = rule.payments(std::span(b, 2));
    const std::vector<double> slow = myerson_payments(rule, std::span(b, 2));
    for (int i = 0; i < 2; ++i) {
      if (std::abs(fast[i] - slow[i]) >
          1e-9 * std::max(1.0, std::max(b[0], b[1]))) {
        why = "closed form disagrees with curve pricing at trial " +
              std::to_string(t);
        return false;
      }
    }
    if (alpha == 1.0) {
      const SecondPriceRule sp;
      const auto xr = rule.allocate(std::span(b, 2));
      const auto xs = sp.allocate(std::span(b, 2));
      const auto pr = rule.payments(std::span(b, 2));
      const auto ps = sp.payments(std::span(b, 2));
      for (int i = 0; i < 2; ++i) {
        if (xr[i] != xs[i] || pr[i] != ps[i]) {
          why = "alpha = 1 is not exactly second price at trial " +
                std::to_string(t);
          return false;
        }
      }
    }
  }
  return true;
}

// 5. The many-bidder lower-bound construction verifies end to end under
//    second price, with the welfare ratio near its closed form and moving
//    toward 1/2 as k grows.
bool crit_impossibility(std::string& why) {
  ImpossibilitySpec spec;
  spec.k = 100;
  spec.a = 1.05;
  spec.big_v = 100.0;
  spec.epsilon = 1e-6;
  spec.pi_star = 1.0;
  spec.m_star = 0.0;
  spec.delta = 2.0;
  spec.gamma = 0.05;
  const SecondPriceRule rule;
  const ImpossibilityReport rep = verify_impossibility(spec, rule);
  if (!rep.all_checks_ok()) {
    why = "construction checks failed at k = 100";
    return false;
  }
  // the closed-form welfare cap over OPT sits at 0.517; the simulated
  // ratio must respect the cap
  if (!approx(rep.bounds.ratio, 0.517, 0.002)) {
    why = "bound ratio = " + std::to_string(rep.bounds.ratio);
    return false;
  }
  if (rep.simulated_ratio > rep.bounds.ratio + 1e-9) {
    why = "simulated ratio exceeds the closed-form cap";
    return false;
  }

  ImpossibilitySpec big = spec;
  big.k = 1000;
  big.a = 1.01;
  big.gamma = 0.005;  // keep a > 1 + gamma
  big.delta = 2.0;
  const ImpossibilityReport rep2 = verify_impossibility(big, rule);
  if (!rep2.all_checks_ok()) {
    why = "construction checks failed at k = 1000";
    return false;
  }
  if (rep2.bounds.ratio >= 0.512 || rep2.simulated_ratio >= 0.512) {
    why = "ratio did not fall below 0.512 at k = 1000";
    return false;
  }
  return true;
}

// 6. Dynamics-found equilibria of rand(alpha*, 2/5) all pass the per-query
//    and aggregate partition audit and stay below the proved ratio.
bool crit_audit(std::string& why) {
  const RandRule rule(alpha_star(), 0.4);
  int converged = 0, equilibria = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Instance inst = random_instance(seed, 2, 5, ValueLaw::kUniform);
    const DynamicsResult dyn = best_response_dynamics(
        inst, rule, BidProfile{{1.0, 1.0}}, 1e-6, 200);
    if (!dyn.converged) continue;
    ++converged;
    const EquilibriumReport rep =
        verify_equilibrium(inst, rule, dyn.profile, 1e-6, 1e-6);
    if (!rep.is_equilibrium) {
      why = "converged profile failed verification at seed " +
            std::to_string(seed);
      return false;
    }
    ++equilibria;
    if (rep.ratio > 1.896 + 1e-6) {
      why = "ratio " + std::to_string(rep.ratio) + " above the bound at seed " +
            std::to_string(seed);
      return false;
    }
    const PartitionAudit audit =
        partition_audit(inst, dyn.profile, alpha_star(), 0.4);
    if (!audit.per_query_ok || !audit.aggregate_ok) {
      why = "partition audit failed at seed " + std::to_string(seed);
      return false;
    }
  }
  std::cout << "  (equilibria found: " << equilibria << "/200; "
            << 200 - converged << " non-converged instances excluded)\n";
  if (equilibria == 0) {
    why = "no equilibria found";
    return false;
  }
  return true;
}

// 7. Property suite over every shipped rule: anonymity (with probability
//    sum and lowest-of-k caps), monotonicity, and the single-bidder cost
//    cap pi* x M*.
bool crit_properties(std::string& why) {
  struct Shipped {
    std::string label;
    RulePtr rule;
  };
  const std::vector<Shipped> rules = {
      {"second-price", make_second_price(0.0)},
      {"second-price reserve 0.5", make_second_price(0.5)},
      {"rand 1.3", make_rand(1.3, 0.4)},
      {"rand alpha*", make_rand(alpha_star(), 0.4)},
      {"top-cluster 1.8", make_top_cluster(1.8, 0.3)},
      {"top-cluster 10", make_top_cluster(10.0, 0.5)},
  };
  for (const Shipped& s : rules) {
    const PropertyCheck anon = check_anonymity(*s.rule, 2000);
    if (!anon.ok) {
      why = s.label + ": " + anon.detail;
      return false;
    }
    const PropertyCheck mono = check_monotonicity(*s.rule, 2000);
    if (!mono.ok) {
      why = s.label + ": " + mono.detail;
      return false;
    }
    if (!s.rule->supports_arity(1)) continue;
    const MaxThreshold mt = max_threshold(*s.rule);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ub(0.0, 100.0);
    for (int t = 0; t < 500; ++t) {
      const double bid = ub(rng);
      const std::vector<double> pay =
          s.rule->payments(std::span<const double>(&bid, 1));
      if (pay[0] > mt.pi_star * mt.m_star + 1e-9) {
        why = s.label + ": single-bidder cost " + std::to_string(pay[0]) +
              " above pi* x M*";
        return false;
      }
    }
  }
  return true;
}

// 8. The exact LP solver is never beaten by brute-force simplex sampling.
bool crit_lp_oracle(std::string& why) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> um(0.0, 1.0);
  std::uniform_real_distribution<double> us(0.0, 2.0);
  std::exponential_distribution<double> e(1.0);
  for (int t = 0; t < 50; ++t) {
    MSConstants c;
    for (int k = 0; k < 4; ++k) {
      c.m[k] = um(rng);
      c.s[k] = us(rng);
    }
    const LPResult lp = solve_factor_lp(c);
    for (int n = 0; n < 100000; ++n) {
      double x[4], sum = 0.0;
      for (double& v : x) sum += (v = e(rng));
      double mx = 0.0, sx = 0.0;
      for (int k = 0; k < 4; ++k) {
        mx += c.m[k] * x[k] / sum;
        sx += c.s[k] * x[k] / sum;
      }
      if (std::max(mx, sx) < lp.z - 1e-9) {
        why = "sampling beat the solver on trial " + std::to_string(t);
        return false;
      }
    }
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <path-to-cli-binary>\n";
    return 2;
  }
  g_cli = argv[1];

  const std::vector<Criterion> criteria = {
      {1, "poa bound reproduction", 1.0, crit_poa_bound},
      {2, "certificate range", 1.0, crit_certificate_range},
      {3, "tight example", 1.0, crit_tight_example},
      {4, "rand pricing oracle", 5.0, crit_rand_pricing},
      {5, "impossibility at desk scale", 30.0, crit_impossibility},
      {6, "audit property", 60.0, crit_audit},
      {7, "mechanism property suite", 10.0, crit_properties},
      {8, "lp oracle equivalence", 10.0, crit_lp_oracle},
  };

  bool all_ok = true;
  for (const Criterion& c : criteria) {
    std::string why;
    const auto start = std::chrono::steady_clock::now();
    bool ok = false;
    try {
      ok = c.run(why);
    } catch (const std::exception& e) {
      why = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (ok && secs > c.budget_seconds) {
      ok = false;
      why = "over time budget of " + std::to_string(c.budget_seconds) + " s";
    }
    std::printf("%s criterion %d (%s) [%.2f s]%s%s\n", ok ? "PASS" : "FAIL",
                c.id, c.name.c_str(), secs, why.empty() ? "" : ": ",
                why.c_str());
    all_ok = all_ok && ok;
  }
  return all_ok ? 0 : 1;
}

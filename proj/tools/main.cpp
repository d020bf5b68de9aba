// abidsim command-line front end.
//
// Subcommands:
//   lp            factor-revealing LP + dual certificate + PoA bound
//   tight         tight two-bidder example, verified as an equilibrium
//   impossibility universal lower-bound construction, fully verified
//   sweep         best-response dynamics over random instances -> CSV
//   gen           write a random instance file
//   verify        verify an equilibrium profile on an instance file
//
// Exit codes: 0 success, 1 a claimed property failed to verify, 2 usage
// or domain error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "abidsim/autobidder.hpp"
#include "abidsim/core.hpp"
#include "abidsim/equilibrium.hpp"
#include "abidsim/instances.hpp"
#include "abidsim/io.hpp"
#include "abidsim/lpbound.hpp"
#include "abidsim/mechanisms.hpp"

namespace {

using nlohmann::json;

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void emit(const json& doc, const std::string& output) {
  const std::string text = doc.dump(2) + "\n";
  if (output.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(output);
    if (!out) throw std::runtime_error("cannot open for writing: " + output);
    out << text;
  }
}

struct MechanismOpts {
  std::string kind = "second-price";
  double alpha = 1.0;
  double p = 0.4;
  double reserve = 0.0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--mechanism", kind, "second-price | rand | top-cluster")
        ->check(CLI::IsMember({"second-price", "rand", "top-cluster"}));
    cmd->add_option("--alpha", alpha, "alpha parameter of rand/top-cluster");
    cmd->add_option("--p", p, "p parameter of rand/top-cluster");
    cmd->add_option("--reserve", reserve, "second-price reserve");
  }

  abidsim::RulePtr build() const {
    if (kind == "rand") return abidsim::make_rand(alpha, p);
    if (kind == "top-cluster") return abidsim::make_top_cluster(alpha, p);
    return abidsim::make_second_price(reserve);
  }
};

json equilibrium_json(const abidsim::EquilibriumReport& rep) {
  json bidders = json::array();
  for (const auto& b : rep.bidders) {
    bidders.push_back({{"bidder", b.stats.bidder},
                       {"value", b.stats.value},
                       {"spend", b.stats.spend},
                       {"tcpa_ok", b.tcpa_ok},
                       {"gain", b.response.gain},
                       {"best_multiplier", b.response.best_multiplier}});
  }
  return {{"is_equilibrium", rep.is_equilibrium},
          {"delta", rep.delta},
          {"gamma", rep.gamma},
          {"eq_welfare", rep.eq_welfare},
          {"opt_welfare", rep.opt_welfare},
          {"ratio", rep.ratio},
          {"bidders", bidders}};
}

int cmd_lp(double alpha, double p, const std::string& output) {
  const abidsim::MSConstants c = abidsim::ms_constants(alpha, p);
  const abidsim::LPResult lp = abidsim::solve_factor_lp(c);
  const abidsim::DualCertificate cert = abidsim::dual_certificate(alpha, p);
  const abidsim::PoaBound bound = abidsim::poa_bound(alpha, p);
  emit({{"alpha", alpha},
        {"p", p},
        {"m", c.m},
        {"s", c.s},
        {"z", lp.z},
        {"x", lp.x},
        {"dual_gamma", lp.dual_gamma},
        {"beta", lp.beta},
        {"delta", lp.delta},
        {"duality_gap", lp.duality_gap},
        {"certificate",
         {{"delta", cert.delta},
          {"dual_gamma", cert.dual_gamma},
          {"beta", cert.beta},
          {"feasible", cert.feasible},
          {"slacks", cert.slacks},
          {"poly_k2", cert.poly_k2},
          {"poly_k3", cert.poly_k3}}},
        {"poa_bound", bound.value},
        {"certified", bound.certified}},
       output);
  return 0;
}

int cmd_tight(double alpha, double p, double epsilon, double delta,
              double gamma, const std::string& output) {
  const abidsim::TightExample ex =
      abidsim::tight_example({alpha, p, epsilon});
  const abidsim::RandRule rule(alpha, p);
  const abidsim::EquilibriumReport rep =
      abidsim::verify_equilibrium(ex.instance, rule, ex.profile, delta, gamma);
  json doc = equilibrium_json(rep);
  doc["alpha"] = alpha;
  doc["p"] = p;
  doc["epsilon"] = epsilon;
  doc["s1"] = ex.s1;
  doc["ratio_formula"] = (1.0 + 1.0 / ex.s1) / (1.0 + epsilon);
  emit(doc, output);
  return rep.is_equilibrium ? 0 : 1;
}

int cmd_impossibility(const abidsim::ImpossibilitySpec& spec,
                      const MechanismOpts& mech, const std::string& output) {
  abidsim::ImpossibilitySpec full = spec;
  const abidsim::RulePtr rule = mech.build();
  const abidsim::MaxThreshold mt = abidsim::max_threshold(*rule);
  full.pi_star = mt.pi_star;
  full.m_star = mt.m_star;
  const abidsim::ImpossibilityReport rep =
      abidsim::verify_impossibility(full, *rule);
  json doc = {{"k", full.k},
              {"a", full.a},
              {"V", full.big_v},
              {"epsilon", full.epsilon},
              {"rho", full.tie_break()},
              {"pi_star", full.pi_star},
              {"m_star", full.m_star},
              {"delta", full.delta},
              {"gamma", full.gamma},
              {"eq_welfare_bound", rep.bounds.eq_upper},
              {"opt_welfare", rep.bounds.opt},
              {"bound_ratio", rep.bounds.ratio},
              {"asymptotic_ratio", rep.bounds.asymptotic},
              {"simulated_welfare", rep.simulated_welfare},
              {"simulated_ratio", rep.simulated_ratio},
              {"max_a_gain", rep.max_a_gain},
              {"a_gain_limit", rep.a_gain_limit},
              {"max_b_gain", rep.max_b_gain},
              {"b_gain_limit", rep.b_gain_limit},
              {"is_equilibrium", rep.is_equilibrium},
              {"all_checks_ok", rep.all_checks_ok()},
              {"k_sufficient", rep.k_sufficient},
              {"required_k", rep.required_k}};
  if (!rep.k_sufficient) {
    std::cerr << "warning: k + 1 must exceed " << fmt17(rep.required_k)
              << " for the target (delta, gamma); increase k\n";
  }
  emit(doc, output);
  return rep.all_checks_ok() ? 0 : 1;
}

struct SweepOpts {
  double alpha_min = 1.0, alpha_max = 1.0;
  std::size_t alpha_steps = 1;
  double p = 0.4;
  std::size_t instances = 10;
  std::size_t bidders = 2, queries = 8;
  std::uint64_t seed = 1;
  std::size_t max_rounds = 200;
  double gamma = 1e-6, delta = 1e-6;
  std::string law = "uniform";
  std::string mechanism = "rand";
  std::string output;
};

int cmd_sweep(const SweepOpts& opt) {
  std::ostringstream csv;
  csv << "alpha,p,instance,converged,ratio\n";
  abidsim::ValueLaw law = abidsim::ValueLaw::kUniform;
  if (opt.law == "lognormal") law = abidsim::ValueLaw::kLogNormal;
  else if (opt.law == "two-point") law = abidsim::ValueLaw::kTwoPoint;
  else if (opt.law != "uniform") throw std::domain_error("unknown value law");
  if (opt.mechanism == "rand" && opt.bidders != 2) {
    throw std::domain_error("rand is a two-bidder rule; use --bidders 2");
  }

  for (std::size_t step = 0; step < opt.alpha_steps; ++step) {
    const double alpha =
        opt.alpha_steps == 1
            ? opt.alpha_min
            : opt.alpha_min + (opt.alpha_max - opt.alpha_min) *
                                  double(step) / double(opt.alpha_steps - 1);
    abidsim::RulePtr rule;
    if (opt.mechanism == "rand") rule = abidsim::make_rand(alpha, opt.p);
    else if (opt.mechanism == "top-cluster")
      rule = abidsim::make_top_cluster(alpha, opt.p);
    else if (opt.mechanism == "second-price")
      rule = abidsim::make_second_price();
    else throw std::domain_error("unknown mechanism: " + opt.mechanism);

    for (std::size_t n = 0; n < opt.instances; ++n) {
      const abidsim::Instance inst = abidsim::random_instance(
          opt.seed + 7919 * step + n, opt.bidders, opt.queries, law);
      abidsim::BidProfile init;
      init.multipliers.assign(opt.bidders, 1.0);
      const abidsim::DynamicsResult dyn = abidsim::best_response_dynamics(
          inst, *rule, init, opt.gamma, opt.max_rounds);
      double ratio = std::numeric_limits<double>::quiet_NaN();
      if (dyn.converged) {
        const abidsim::EquilibriumReport rep = abidsim::verify_equilibrium(
            inst, *rule, dyn.profile, opt.delta, opt.gamma);
        if (rep.is_equilibrium) ratio = rep.ratio;
      }
      csv << fmt17(alpha) << ',' << fmt17(opt.p) << ',' << n << ','
          << (dyn.converged ? 1 : 0) << ',' << fmt17(ratio) << '\n';
    }
  }
  if (opt.output.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream out(opt.output);
    if (!out) throw std::runtime_error("cannot open for writing: " + opt.output);
    out << csv.str();
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"prior-free auto-bidding auction laboratory"};
  app.require_subcommand(1);

  std::string output;
  app.add_option("--output", output, "write results here instead of stdout")
      ->capture_default_str();

  // lp
  double lp_alpha = abidsim::alpha_star(), lp_p = 0.4;
  CLI::App* lp = app.add_subcommand("lp", "factor-revealing LP and PoA bound");
  lp->add_option("--alpha", lp_alpha, "rand parameter alpha (>= 1)");
  lp->add_option("--p", lp_p, "rand parameter p in (0, 1/2]");

  // tight
  double t_alpha = abidsim::alpha_star(), t_p = 0.4, t_eps = 1e-4;
  double t_delta = 1e-9, t_gamma = 1e-9;
  CLI::App* tight = app.add_subcommand("tight", "tight two-bidder example");
  tight->add_option("--alpha", t_alpha, "rand parameter alpha");
  tight->add_option("--p", t_p, "rand parameter p");
  tight->add_option("--epsilon", t_eps, "small value of the opt bidder");
  tight->add_option("--delta", t_delta, "equilibrium value tolerance");
  tight->add_option("--gamma", t_gamma, "tCPA tolerance");

  // impossibility
  abidsim::ImpossibilitySpec ispec;
  ispec.k = 100;
  ispec.a = 1.05;
  ispec.big_v = 100.0;
  ispec.epsilon = 1e-6;
  ispec.delta = 2.0;
  ispec.gamma = 0.05;
  MechanismOpts imech;
  CLI::App* imp =
      app.add_subcommand("impossibility", "universal lower-bound instance");
  imp->add_option("--k", ispec.k, "half the bidder count");
  imp->add_option("--a", ispec.a, "value advantage a > 1 + gamma");
  imp->add_option("--V", ispec.big_v, "base value V >= 1");
  imp->add_option("--epsilon", ispec.epsilon, "contention value scale");
  imp->add_option("--rho", ispec.rho, "tie-break increment (0 = V * 1e-9)");
  imp->add_option("--delta", ispec.delta, "equilibrium value tolerance");
  imp->add_option("--gamma", ispec.gamma, "tCPA tolerance");
  imech.attach(imp);

  // sweep
  SweepOpts sw;
  CLI::App* sweep =
      app.add_subcommand("sweep", "dynamics over random instances -> CSV");
  sweep->add_option("--alpha-min", sw.alpha_min);
  sweep->add_option("--alpha-max", sw.alpha_max);
  sweep->add_option("--alpha-steps", sw.alpha_steps);
  sweep->add_option("--p", sw.p);
  sweep->add_option("--instances", sw.instances);
  sweep->add_option("--bidders", sw.bidders);
  sweep->add_option("--queries", sw.queries);
  sweep->add_option("--seed", sw.seed);
  sweep->add_option("--max-rounds", sw.max_rounds);
  sweep->add_option("--gamma", sw.gamma);
  sweep->add_option("--delta", sw.delta);
  sweep->add_option("--law", sw.law, "uniform | lognormal | two-point");
  sweep->add_option("--mechanism", sw.mechanism,
                    "rand | top-cluster | second-price");

  // gen
  std::uint64_t g_seed = 1;
  std::size_t g_bidders = 2, g_queries = 8;
  std::string g_law = "uniform", g_path;
  CLI::App* gen = app.add_subcommand("gen", "write a random instance file");
  gen->add_option("--seed", g_seed);
  gen->add_option("--bidders", g_bidders);
  gen->add_option("--queries", g_queries);
  gen->add_option("--law", g_law, "uniform | lognormal | two-point");
  gen->add_option("path", g_path, "destination file")->required();

  // verify
  std::string v_path;
  std::vector<double> v_mult;
  double v_delta = 1e-9, v_gamma = 1e-9;
  MechanismOpts vmech;
  CLI::App* verify =
      app.add_subcommand("verify", "verify an equilibrium on an instance file");
  verify->add_option("path", v_path, "instance file")->required();
  verify->add_option("--multiplier", v_mult, "one bid multiplier per bidder")
      ->required();
  verify->add_option("--delta", v_delta, "equilibrium value tolerance");
  verify->add_option("--gamma", v_gamma, "tCPA tolerance");
  vmech.attach(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (lp->parsed()) return cmd_lp(lp_alpha, lp_p, output);
    if (tight->parsed())
      return cmd_tight(t_alpha, t_p, t_eps, t_delta, t_gamma, output);
    if (imp->parsed()) return cmd_impossibility(ispec, imech, output);
    if (sweep->parsed()) {
      sw.output = output;
      return cmd_sweep(sw);
    }
    if (gen->parsed()) {
      abidsim::ValueLaw law = abidsim::ValueLaw::kUniform;
      if (g_law == "lognormal") law = abidsim::ValueLaw::kLogNormal;
      else if (g_law == "two-point") law = abidsim::ValueLaw::kTwoPoint;
      else if (g_law != "uniform") throw std::domain_error("unknown value law");
      abidsim::save_instance(
          abidsim::random_instance(g_seed, g_bidders, g_queries, law), g_path);
      return 0;
    }
    if (verify->parsed()) {
      const abidsim::Instance inst = abidsim::load_instance(v_path);
      const abidsim::RulePtr rule = vmech.build();
      const abidsim::EquilibriumReport rep = abidsim::verify_equilibrium(
          inst, *rule, abidsim::BidProfile{v_mult}, v_delta, v_gamma);
      emit(equilibrium_json(rep), output);
      return rep.is_equilibrium ? 0 : 1;
    }
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

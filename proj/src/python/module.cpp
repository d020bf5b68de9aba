#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "abidsim/autobidder.hpp"
#include "abidsim/core.hpp"
#include "abidsim/equilibrium.hpp"
#include "abidsim/instances.hpp"
#include "abidsim/io.hpp"
#include "abidsim/lpbound.hpp"
#include "abidsim/mechanisms.hpp"

namespace py = pybind11;
using namespace abidsim;

PYBIND11_MODULE(_abidsim, m) {
  m.doc() = "prior-free auto-bidding auction laboratory";

  // ---- core ----------------------------------------------------------
  py::class_<Bidder>(m, "Bidder")
      .def(py::init<BidderId, double>(), py::arg("id") = 0,
           py::arg("target") = 1.0)
      .def_readwrite("id", &Bidder::id)
      .def_readwrite("target", &Bidder::target);

  py::class_<Query>(m, "Query")
      .def(py::init([](QueryId id, std::vector<double> values,
                       std::vector<double> ctrs) {
             Query q;
             q.id = id;
             q.values = std::move(values);
             q.ctrs = std::move(ctrs);
             return q;
           }),
           py::arg("id") = 0, py::arg("values") = std::vector<double>{},
           py::arg("ctrs") = std::vector<double>{})
      .def_readwrite("id", &Query::id)
      .def_readwrite("values", &Query::values)
      .def_readwrite("ctrs", &Query::ctrs);

  py::class_<Instance>(m, "Instance")
      .def(py::init<std::vector<Bidder>, std::vector<Query>>(),
           py::arg("bidders"), py::arg("queries"))
      .def_property_readonly("bidders", &Instance::bidders)
      .def_property_readonly("queries", &Instance::queries)
      .def_property_readonly("num_bidders", &Instance::num_bidders)
      .def_property_readonly("num_queries", &Instance::num_queries)
      .def("target", &Instance::target)
      .def("value", &Instance::value)
      .def("ctr", &Instance::ctr)
      .def("effective_value", &Instance::effective_value)
      .def("weighted_value", &Instance::weighted_value);

  py::class_<BidProfile>(m, "BidProfile")
      .def(py::init([](std::vector<double> mult) {
             return BidProfile{std::move(mult)};
           }),
           py::arg("multipliers"))
      .def_readwrite("multipliers", &BidProfile::multipliers);

  py::class_<Allocation>(m, "Allocation")
      .def(py::init<>())
      .def_readwrite("probs", &Allocation::probs);

  py::class_<AuctionOutcome>(m, "AuctionOutcome")
      .def_readonly("allocation", &AuctionOutcome::allocation)
      .def_readonly("payments", &AuctionOutcome::payments);

  py::class_<OptimalAllocation>(m, "OptimalAllocation")
      .def_readonly("allocation", &OptimalAllocation::allocation)
      .def_readonly("opt_bidder", &OptimalAllocation::opt_bidder)
      .def_readonly("opt_value", &OptimalAllocation::opt_value)
      .def_readonly("total", &OptimalAllocation::total);

  m.def("bids_from_multipliers", &bids_from_multipliers);
  m.def("liquid_welfare", &liquid_welfare);
  m.def("liquid_welfare_by_bidder", &liquid_welfare_by_bidder);
  m.def("optimal_allocation", &optimal_allocation);

  // ---- mechanisms ----------------------------------------------------
  py::class_<AllocationCurve::Segment>(m, "CurveSegment")
      .def_readonly("threshold", &AllocationCurve::Segment::threshold)
      .def_readonly("prob", &AllocationCurve::Segment::prob);

  py::class_<AllocationCurve>(m, "AllocationCurve")
      .def_property_readonly("segments", &AllocationCurve::segments)
      .def("prob_at", &AllocationCurve::prob_at)
      .def("max_prob", &AllocationCurve::max_prob)
      .def("area_below", &AllocationCurve::area_below)
      .def("payment", &AllocationCurve::payment);

  py::class_<MaxThreshold>(m, "MaxThreshold")
      .def_readonly("pi_star", &MaxThreshold::pi_star)
      .def_readonly("m_star", &MaxThreshold::m_star)
      .def_readonly("converged", &MaxThreshold::converged);

  py::class_<PropertyCheck>(m, "PropertyCheck")
      .def_readonly("ok", &PropertyCheck::ok)
      .def_readonly("detail", &PropertyCheck::detail)
      .def_readonly("counterexample", &PropertyCheck::counterexample);

  py::class_<AllocationRule, std::shared_ptr<AllocationRule>>(m,
                                                              "AllocationRule")
      .def("name", &AllocationRule::name)
      .def("supports_arity", &AllocationRule::supports_arity)
      .def("allocate",
           [](const AllocationRule& r, const std::vector<double>& bids) {
             return r.allocate(bids);
           })
      .def("payments",
           [](const AllocationRule& r, const std::vector<double>& bids) {
             return r.payments(bids);
           })
      .def("own_bid_thresholds",
           [](const AllocationRule& r, const std::vector<double>& others) {
             return r.own_bid_thresholds(others);
           });

  auto unconst = [](RulePtr r) {
    return std::const_pointer_cast<AllocationRule>(std::move(r));
  };
  m.def(
      "second_price",
      [unconst](double reserve) { return unconst(make_second_price(reserve)); },
      py::arg("reserve") = 0.0);
  m.def(
      "rand_rule",
      [unconst](double alpha, double p) { return unconst(make_rand(alpha, p)); },
      py::arg("alpha"), py::arg("p"));
  m.def(
      "top_cluster",
      [unconst](double alpha, double p) {
        return unconst(make_top_cluster(alpha, p));
      },
      py::arg("alpha"), py::arg("p"));

  m.def("allocation_curve",
        [](const AllocationRule& r, const std::vector<double>& others) {
          return allocation_curve(r, others);
        });
  m.def("myerson_payments",
        [](const AllocationRule& r, const std::vector<double>& bids) {
          return myerson_payments(r, bids);
        });
  m.def("max_threshold", &max_threshold);
  m.def("check_anonymity", &check_anonymity, py::arg("rule"), py::arg("trials"),
        py::arg("seed") = 12345);
  m.def("check_monotonicity", &check_monotonicity, py::arg("rule"),
        py::arg("trials"), py::arg("seed") = 54321);

  // ---- autobidder ----------------------------------------------------
  py::class_<BidderStats>(m, "BidderStats")
      .def_readonly("bidder", &BidderStats::bidder)
      .def_readonly("value", &BidderStats::value)
      .def_readonly("spend", &BidderStats::spend)
      .def_readonly("lw_contribution", &BidderStats::lw_contribution)
      .def("tcpa_slack", &BidderStats::tcpa_slack);

  py::class_<BestResponse>(m, "BestResponse")
      .def_readonly("bidder", &BestResponse::bidder)
      .def_readonly("best_multiplier", &BestResponse::best_multiplier)
      .def_readonly("best_value", &BestResponse::best_value)
      .def_readonly("current_value", &BestResponse::current_value)
      .def_readonly("gain", &BestResponse::gain)
      .def_readonly("candidate_count", &BestResponse::candidate_count)
      .def_readonly("current_feasible", &BestResponse::current_feasible);

  m.def("run_auction", &run_auction);
  m.def("evaluate_bidder", &evaluate_bidder);
  m.def("evaluate_all", &evaluate_all);
  m.def("tcpa_satisfied", &tcpa_satisfied);
  m.def("best_response", &best_response);

  // ---- equilibrium ---------------------------------------------------
  py::class_<BidderVerdict>(m, "BidderVerdict")
      .def_readonly("stats", &BidderVerdict::stats)
      .def_readonly("tcpa_ok", &BidderVerdict::tcpa_ok)
      .def_readonly("response", &BidderVerdict::response);

  py::class_<EquilibriumReport>(m, "EquilibriumReport")
      .def_readonly("bidders", &EquilibriumReport::bidders)
      .def_readonly("is_equilibrium", &EquilibriumReport::is_equilibrium)
      .def_readonly("delta", &EquilibriumReport::delta)
      .def_readonly("gamma", &EquilibriumReport::gamma)
      .def_readonly("eq_welfare", &EquilibriumReport::eq_welfare)
      .def_readonly("opt_welfare", &EquilibriumReport::opt_welfare)
      .def_readonly("ratio", &EquilibriumReport::ratio);

  py::class_<DynamicsResult>(m, "DynamicsResult")
      .def_readonly("profile", &DynamicsResult::profile)
      .def_readonly("converged", &DynamicsResult::converged)
      .def_readonly("cycle_detected", &DynamicsResult::cycle_detected)
      .def_readonly("rounds", &DynamicsResult::rounds);

  py::class_<QueryAudit>(m, "QueryAudit")
      .def_readonly("query", &QueryAudit::query)
      .def_readonly("cls", &QueryAudit::cls)
      .def_readonly("opt_contribution", &QueryAudit::opt_contribution)
      .def_readonly("opt_win_prob", &QueryAudit::opt_win_prob)
      .def_readonly("expected_spend", &QueryAudit::expected_spend)
      .def_readonly("prob_ok", &QueryAudit::prob_ok)
      .def_readonly("spend_ok", &QueryAudit::spend_ok);

  py::class_<PartitionAudit>(m, "PartitionAudit")
      .def_readonly("queries", &PartitionAudit::queries)
      .def_readonly("opt_mass", &PartitionAudit::opt_mass)
      .def_readonly("m", &PartitionAudit::m)
      .def_readonly("s", &PartitionAudit::s)
      .def_readonly("eq_welfare", &PartitionAudit::eq_welfare)
      .def_readonly("opt_welfare", &PartitionAudit::opt_welfare)
      .def_readonly("per_query_ok", &PartitionAudit::per_query_ok)
      .def_readonly("aggregate_ok", &PartitionAudit::aggregate_ok);

  m.def("verify_equilibrium", &verify_equilibrium);
  m.def("poa_ratio", &poa_ratio);
  m.def("best_response_dynamics", &best_response_dynamics, py::arg("instance"),
        py::arg("rule"), py::arg("init"), py::arg("gamma"),
        py::arg("max_rounds"), py::arg("tol") = 1e-6);
  m.def("partition_audit", &partition_audit);

  // ---- lpbound -------------------------------------------------------
  py::class_<MSConstants>(m, "MSConstants")
      .def_readonly("m", &MSConstants::m)
      .def_readonly("s", &MSConstants::s)
      .def_readonly("alpha", &MSConstants::alpha)
      .def_readonly("p", &MSConstants::p);

  py::class_<LPResult>(m, "LPResult")
      .def_readonly("z", &LPResult::z)
      .def_readonly("x", &LPResult::x)
      .def_readonly("dual_gamma", &LPResult::dual_gamma)
      .def_readonly("beta", &LPResult::beta)
      .def_readonly("delta", &LPResult::delta)
      .def_readonly("duality_gap", &LPResult::duality_gap);

  py::class_<DualCertificate>(m, "DualCertificate")
      .def_readonly("delta", &DualCertificate::delta)
      .def_readonly("dual_gamma", &DualCertificate::dual_gamma)
      .def_readonly("beta", &DualCertificate::beta)
      .def_readonly("feasible", &DualCertificate::feasible)
      .def_readonly("slacks", &DualCertificate::slacks)
      .def_readonly("poly_k2", &DualCertificate::poly_k2)
      .def_readonly("poly_k3", &DualCertificate::poly_k3);

  py::class_<PoaBound>(m, "PoaBound")
      .def_readonly("value", &PoaBound::value)
      .def_readonly("certified", &PoaBound::certified);

  m.def("ms_constants", &ms_constants);
  m.def("solve_factor_lp", &solve_factor_lp);
  m.def("dual_certificate", &dual_certificate);
  m.def("alpha_star", &alpha_star);
  m.def("poa_bound", &poa_bound);

  // ---- instances -----------------------------------------------------
  py::class_<TightExampleSpec>(m, "TightExampleSpec")
      .def(py::init([](double alpha, double p, double epsilon) {
             return TightExampleSpec{alpha, p, epsilon};
           }),
           py::arg("alpha") = 1.0, py::arg("p") = 0.4,
           py::arg("epsilon") = 1e-4)
      .def_readwrite("alpha", &TightExampleSpec::alpha)
      .def_readwrite("p", &TightExampleSpec::p)
      .def_readwrite("epsilon", &TightExampleSpec::epsilon);

  py::class_<TightExample>(m, "TightExample")
      .def_readonly("instance", &TightExample::instance)
      .def_readonly("profile", &TightExample::profile)
      .def_readonly("s1", &TightExample::s1);

  py::class_<ImpossibilitySpec>(m, "ImpossibilitySpec")
      .def(py::init<>())
      .def_readwrite("k", &ImpossibilitySpec::k)
      .def_readwrite("a", &ImpossibilitySpec::a)
      .def_readwrite("big_v", &ImpossibilitySpec::big_v)
      .def_readwrite("epsilon", &ImpossibilitySpec::epsilon)
      .def_readwrite("rho", &ImpossibilitySpec::rho)
      .def_readwrite("pi_star", &ImpossibilitySpec::pi_star)
      .def_readwrite("m_star", &ImpossibilitySpec::m_star)
      .def_readwrite("delta", &ImpossibilitySpec::delta)
      .def_readwrite("gamma", &ImpossibilitySpec::gamma)
      .def("tie_break", &ImpossibilitySpec::tie_break);

  py::class_<ImpossibilityInstance>(m, "ImpossibilityInstance")
      .def_readonly("instance", &ImpossibilityInstance::instance)
      .def_readonly("profile", &ImpossibilityInstance::profile)
      .def_readonly("scale", &ImpossibilityInstance::scale);

  py::class_<ImpossibilityBounds>(m, "ImpossibilityBounds")
      .def_readonly("eq_upper", &ImpossibilityBounds::eq_upper)
      .def_readonly("opt", &ImpossibilityBounds::opt)
      .def_readonly("ratio", &ImpossibilityBounds::ratio)
      .def_readonly("asymptotic", &ImpossibilityBounds::asymptotic);

  py::class_<ImpossibilityReport>(m, "ImpossibilityReport")
      .def_readonly("bounds", &ImpossibilityReport::bounds)
      .def_readonly("chi_sum_ok", &ImpossibilityReport::chi_sum_ok)
      .def_readonly("fairness_ok", &ImpossibilityReport::fairness_ok)
      .def_readonly("rotation_ok", &ImpossibilityReport::rotation_ok)
      .def_readonly("q_mass_ok", &ImpossibilityReport::q_mass_ok)
      .def_readonly("a_tcpa_ok", &ImpossibilityReport::a_tcpa_ok)
      .def_readonly("b_tcpa_ok", &ImpossibilityReport::b_tcpa_ok)
      .def_readonly("a_gain_ok", &ImpossibilityReport::a_gain_ok)
      .def_readonly("b_gain_ok", &ImpossibilityReport::b_gain_ok)
      .def_readonly("welfare_ok", &ImpossibilityReport::welfare_ok)
      .def_readonly("is_equilibrium", &ImpossibilityReport::is_equilibrium)
      .def_readonly("max_a_gain", &ImpossibilityReport::max_a_gain)
      .def_readonly("a_gain_limit", &ImpossibilityReport::a_gain_limit)
      .def_readonly("max_b_gain", &ImpossibilityReport::max_b_gain)
      .def_readonly("b_gain_limit", &ImpossibilityReport::b_gain_limit)
      .def_readonly("simulated_welfare", &ImpossibilityReport::simulated_welfare)
      .def_readonly("opt_welfare", &ImpossibilityReport::opt_welfare)
      .def_readonly("simulated_ratio", &ImpossibilityReport::simulated_ratio)
      .def_readonly("k_sufficient", &ImpossibilityReport::k_sufficient)
      .def_readonly("required_k", &ImpossibilityReport::required_k)
      .def("all_checks_ok", &ImpossibilityReport::all_checks_ok);

  py::enum_<ValueLaw>(m, "ValueLaw")
      .value("uniform", ValueLaw::kUniform)
      .value("lognormal", ValueLaw::kLogNormal)
      .value("two_point", ValueLaw::kTwoPoint);

  m.def("tight_example", &tight_example);
  m.def("impossibility_instance", &impossibility_instance);
  m.def("impossibility_bounds", &impossibility_bounds);
  m.def("verify_impossibility", &verify_impossibility);
  m.def("random_instance", &random_instance, py::arg("seed"),
        py::arg("n_bidders"), py::arg("n_queries"),
        py::arg("law") = ValueLaw::kUniform);

  // ---- io ------------------------------------------------------------
  m.def("instance_to_json", &instance_to_json);
  m.def("instance_from_json", &instance_from_json);
  m.def("save_instance", &save_instance);
  m.def("load_instance", &load_instance);
}

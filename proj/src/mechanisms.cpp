#include "abidsim/mechanisms.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace abidsim {

// ---------------------------------------------------------------------------
// AllocationCurve

AllocationCurve::AllocationCurve(std::vector<Segment> segments)
    : segments_(std::move(segments)) {
  if (segments_.empty()) throw std::invalid_argument("empty allocation curve");
  if (segments_.front().threshold != 0.0) {
    throw std::invalid_argument("allocation curve must start at bid 0");
  }
  double last_t = -1.0, last_p = -1e-12;
  for (const Segment& s : segments_) {
    if (s.threshold <= last_t) throw std::invalid_argument("curve thresholds not increasing");
    if (s.prob < last_p - 1e-12 || s.prob < -1e-12 || s.prob > 1.0 + 1e-12) {
      throw std::invalid_argument("curve probabilities must be nondecreasing in [0,1]");
    }
    last_t = s.threshold;
    last_p = s.prob;
  }
  // collapse zero-size jumps
  std::vector<Segment> merged;
  for (const Segment& s : segments_) {
    if (!merged.empty() && s.prob == merged.back().prob) continue;
    merged.push_back(s);
  }
  segments_ = std::move(merged);
}

double AllocationCurve::prob_at(double bid) const {
  double p = segments_.front().prob;
  for (const Segment& s : segments_) {
    if (s.threshold <= bid) p = s.prob;
    else break;
  }
  return p;
}

double AllocationCurve::area_below(double bid) const {
  double area = 0.0;
  for (std::size_t k = 0; k < segments_.size(); ++k) {
    const double lo = segments_[k].threshold;
    if (lo >= bid) break;
    const double hi = (k + 1 < segments_.size())
                          ? std::min(bid, segments_[k + 1].threshold)
                          : bid;
    area += segments_[k].prob * (hi - lo);
  }
  return area;
}

double AllocationCurve::payment(double win_prob, double bid) const {
  double pay = win_prob * bid - area_below(bid);
  if (pay < 0.0 && pay > -1e-9) pay = 0.0;
  return pay;
}

// ---------------------------------------------------------------------------
// AllocationRule base behaviour

void AllocationRule::check_bids(std::span<const double> bids) const {
  if (!supports_arity(bids.size())) {
    std::ostringstream os;
    os << name() << " is not defined for " << bids.size() << " bidders";
    throw std::invalid_argument(os.str());
  }
  for (double b : bids) {
    if (!std::isfinite(b) || b < 0.0) {
      throw std::domain_error("bids must be finite and nonnegative");
    }
  }
}

AllocationCurve allocation_curve(const AllocationRule& rule,
                                 std::span<const double> other_bids) {
  std::vector<double> thresholds = rule.own_bid_thresholds(other_bids);
  thresholds.push_back(0.0);
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                   thresholds.end());
  while (!thresholds.empty() && thresholds.front() < 0.0) {
    thresholds.erase(thresholds.begin());
  }

  std::vector<double> bids(other_bids.size() + 1);
  std::copy(other_bids.begin(), other_bids.end(), bids.begin() + 1);
  auto prob_of = [&](double own) {
    bids[0] = own;
    return rule.allocate(bids)[0];
  };

  // The rule is piecewise constant between declared thresholds, so one
  // interior sample per interval recovers the exact step function.
  std::vector<AllocationCurve::Segment> segs;
  for (std::size_t k = 0; k < thresholds.size(); ++k) {
    double sample;
    if (k + 1 < thresholds.size()) {
      sample = 0.5 * (thresholds[k] + thresholds[k + 1]);
      if (sample <= thresholds[k]) {  // degenerate gap
        sample = std::nextafter(thresholds[k], thresholds[k + 1]);
      }
    } else {
      sample = thresholds[k] == 0.0 ? 1.0 : 2.0 * thresholds[k] + 1.0;
    }
    segs.push_back({thresholds[k], prob_of(sample)});
  }
  return AllocationCurve(std::move(segs));
}

std::vector<double> myerson_payments(const AllocationRule& rule,
                                     std::span<const double> bids) {
  const std::vector<double> probs = rule.allocate(bids);
  std::vector<double> pays(bids.size(), 0.0);
  std::vector<double> others(bids.size() > 0 ? bids.size() - 1 : 0);
  for (std::size_t i = 0; i < bids.size(); ++i) {
    if (probs[i] == 0.0 && bids[i] == 0.0) continue;
    std::size_t t = 0;
    for (std::size_t j = 0; j < bids.size(); ++j) {
      if (j != i) others[t++] = bids[j];
    }
    const AllocationCurve curve = allocation_curve(rule, others);
    pays[i] = curve.payment(probs[i], bids[i]);
  }
  return pays;
}

std::vector<double> AllocationRule::payments(std::span<const double> bids) const {
  return myerson_payments(*this, bids);
}

// ---------------------------------------------------------------------------
// max_threshold probing

MaxThreshold max_threshold(const AllocationRule& rule) {
  if (auto declared = rule.declared_max_threshold()) return *declared;
  if (!rule.supports_arity(1)) {
    throw std::invalid_argument(rule.name() + " does not support a single bidder");
  }
  auto prob_of = [&](double b) {
    const double bid[1] = {b};
    return rule.allocate(bid)[0];
  };

  const double cap = std::ldexp(1.0, 60);
  MaxThreshold out;
  out.pi_star = prob_of(cap);
  // still rising near the cap -> report the probed supremum with a flag
  out.converged = !(out.pi_star > prob_of(std::ldexp(1.0, 52)) + 1e-12);

  const double target = out.pi_star - 1e-12;
  if (prob_of(0.0) >= target) {
    out.m_star = 0.0;
    return out;
  }
  double lo = 0.0, hi = cap;
  for (double b = 1.0; b < cap; b *= 2.0) {
    if (prob_of(b) >= target) {
      hi = b;
      break;
    }
    lo = b;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-9 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (prob_of(mid) >= target) hi = mid;
    else lo = mid;
  }
  out.m_star = hi;
  return out;
}

// ---------------------------------------------------------------------------
// Randomized property checks

namespace {

std::vector<std::size_t> supported_arities(const AllocationRule& rule) {
  std::vector<std::size_t> ns;
  for (std::size_t n = 2; n <= 6; ++n) {
    if (rule.supports_arity(n)) ns.push_back(n);
  }
  if (ns.empty()) throw std::invalid_argument("rule supports no tested arity");
  return ns;
}

std::vector<double> random_bids(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> bids(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = u(rng);
    if (r < 0.15) {
      bids[i] = 0.0;
    } else if (r < 0.35 && i > 0) {
      bids[i] = bids[rng() % i];  // deliberate tie
    } else {
      bids[i] = std::exp(6.0 * u(rng) - 3.0);
    }
  }
  return bids;
}

std::string format_bids(const std::vector<double>& bids) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < bids.size(); ++i) os << (i ? ", " : "") << bids[i];
  os << ")";
  return os.str();
}

}  // namespace

PropertyCheck check_anonymity(const AllocationRule& rule, int trials,
                              std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto arities = supported_arities(rule);
  PropertyCheck out;
  for (int t = 0; t < trials; ++t) {
    const std::size_t n = arities[rng() % arities.size()];
    std::vector<double> bids = random_bids(rng, n);
    const std::vector<double> probs = rule.allocate(bids);

    double sum = 0.0;
    for (double p : probs) sum += p;
    if (sum > 1.0 + 1e-12) {
      out.ok = false;
      out.detail = "probabilities sum to " + std::to_string(sum);
      out.counterexample = bids;
      return out;
    }

    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<double> permuted(n);
    for (std::size_t i = 0; i < n; ++i) permuted[perm[i]] = bids[i];
    const std::vector<double> permuted_probs = rule.allocate(permuted);
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(permuted_probs[perm[i]] - probs[i]) > 1e-12) {
        out.ok = false;
        out.detail = "allocation depends on bidder identity at " + format_bids(bids);
        out.counterexample = bids;
        return out;
      }
    }

    const double min_bid = *std::min_element(bids.begin(), bids.end());
    for (std::size_t i = 0; i < n; ++i) {
      if (bids[i] == min_bid && probs[i] > 1.0 / double(n) + 1e-9) {
        out.ok = false;
        out.detail = "lowest bidder wins with probability " +
                     std::to_string(probs[i]) + " > 1/" + std::to_string(n);
        out.counterexample = bids;
        return out;
      }
    }
  }
  return out;
}

PropertyCheck check_monotonicity(const AllocationRule& rule, int trials,
                                 std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto arities = supported_arities(rule);
  PropertyCheck out;
  for (int t = 0; t < trials; ++t) {
    const std::size_t n = arities[rng() % arities.size()];
    std::vector<double> bids = random_bids(rng, n);
    const std::size_t i = rng() % n;
    const double before = rule.allocate(bids)[i];
    std::vector<double> raised = bids;
    raised[i] = bids[i] * (1.0 + u(rng)) + u(rng);
    const double after = rule.allocate(raised)[i];
    if (after < before - 1e-12) {
      out.ok = false;
      out.detail = "raising bidder " + std::to_string(i) + " from " +
                   std::to_string(bids[i]) + " to " + std::to_string(raised[i]) +
                   " lowered its win probability";
      out.counterexample = bids;
      return out;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// SecondPriceRule

SecondPriceRule::SecondPriceRule(double reserve) : reserve_(reserve) {
  if (!std::isfinite(reserve) || reserve < 0.0) {
    throw std::domain_error("reserve must be finite and nonnegative");
  }
}

std::string SecondPriceRule::name() const {
  return reserve_ == 0.0 ? "second-price"
                         : "second-price(r=" + std::to_string(reserve_) + ")";
}

std::vector<double> SecondPriceRule::allocate(std::span<const double> bids) const {
  check_bids(bids);
  std::vector<double> probs(bids.size(), 0.0);
  const double top = *std::max_element(bids.begin(), bids.end());
  if (top < reserve_) return probs;
  std::size_t winners = 0;
  for (double b : bids) winners += (b == top);
  for (std::size_t i = 0; i < bids.size(); ++i) {
    if (bids[i] == top) probs[i] = 1.0 / double(winners);
  }
  return probs;
}

std::vector<double> SecondPriceRule::own_bid_thresholds(
    std::span<const double> other_bids) const {
  std::vector<double> t(other_bids.begin(), other_bids.end());
  t.push_back(reserve_);
  return t;
}

std::vector<double> SecondPriceRule::payments(std::span<const double> bids) const {
  const std::vector<double> probs = allocate(bids);
  std::vector<double> pays(bids.size(), 0.0);
  for (std::size_t i = 0; i < bids.size(); ++i) {
    if (probs[i] == 0.0) continue;
    double competitor = reserve_;
    for (std::size_t j = 0; j < bids.size(); ++j) {
      if (j != i) competitor = std::max(competitor, bids[j]);
    }
    pays[i] = probs[i] * competitor;
  }
  return pays;
}

std::optional<MaxThreshold> SecondPriceRule::declared_max_threshold() const {
  return MaxThreshold{1.0, reserve_, true};
}

// ---------------------------------------------------------------------------
// RandRule

RandRule::RandRule(double alpha, double p) : alpha_(alpha), p_(p) {
  if (!std::isfinite(alpha) || alpha < 1.0) {
    throw std::domain_error("Rand requires alpha >= 1");
  }
  if (!std::isfinite(p) || p <= 0.0 || p > 0.5) {
    throw std::domain_error("Rand requires p in (0, 1/2]");
  }
}

std::string RandRule::name() const {
  return "rand(" + std::to_string(alpha_) + ", " + std::to_string(p_) + ")";
}

std::vector<double> RandRule::allocate(std::span<const double> bids) const {
  check_bids(bids);
  const double b0 = bids[0], b1 = bids[1];
  if (b0 == b1) return {0.5, 0.5};
  const std::size_t hi = b0 > b1 ? 0 : 1;
  const std::size_t lo = 1 - hi;
  std::vector<double> probs(2, 0.0);
  if (bids[hi] >= alpha_ * bids[lo]) {
    probs[hi] = 1.0;
  } else {
    probs[hi] = 1.0 - p_;
    probs[lo] = p_;
  }
  return probs;
}

std::vector<double> RandRule::payments(std::span<const double> bids) const {
  check_bids(bids);
  const double b0 = bids[0], b1 = bids[1];
  if (b0 == b1) {
    // each wins w.p. 1/2 at bid b; the curve below holds area p*(b - b/alpha)
    const double pay = 0.5 * b0 - p_ * (b0 - b0 / alpha_);
    return {pay, pay};
  }
  const std::size_t hi = b0 > b1 ? 0 : 1;
  const double b_hi = bids[hi], b_lo = bids[1 - hi];
  std::vector<double> pays(2, 0.0);
  if (b_hi >= alpha_ * b_lo) {
    // b_lo * (p/a + (1 - 2p) + p*a), grouped so alpha = 1 gives exactly b_lo
    pays[hi] = b_lo + p_ * b_lo * (alpha_ + 1.0 / alpha_ - 2.0);
  } else {
    pays[hi] = b_lo * (p_ / alpha_ + (1.0 - 2.0 * p_));
    pays[1 - hi] = p_ * b_hi / alpha_;
  }
  return pays;
}

std::vector<double> RandRule::own_bid_thresholds(
    std::span<const double> other_bids) const {
  if (other_bids.size() != 1) {
    throw std::invalid_argument("rand curve requires exactly one opposing bid");
  }
  const double b = other_bids[0];
  return {b / alpha_, b, alpha_ * b};
}

// ---------------------------------------------------------------------------
// TopClusterRule

TopClusterRule::TopClusterRule(double alpha, double p) : alpha_(alpha), p_(p) {
  if (!std::isfinite(alpha) || alpha < 1.0) {
    throw std::domain_error("top-cluster requires alpha >= 1");
  }
  if (!std::isfinite(p) || p <= 0.0 || p > 0.5) {
    throw std::domain_error("top-cluster requires p in (0, 1/2]");
  }
}

std::string TopClusterRule::name() const {
  return "top-cluster(" + std::to_string(alpha_) + ", " + std::to_string(p_) + ")";
}

std::vector<double> TopClusterRule::allocate(std::span<const double> bids) const {
  check_bids(bids);
  const std::size_t n = bids.size();
  std::vector<double> probs(n, 0.0);
  const double top = *std::max_element(bids.begin(), bids.end());
  if (top == 0.0) {
    for (double& p : probs) p = 1.0 / double(n);
    return probs;
  }
  std::size_t max_count = 0;
  double runner_up = 0.0;
  for (double b : bids) {
    if (b == top) ++max_count;
    else runner_up = std::max(runner_up, b);
  }
  if (max_count == 1 && top >= alpha_ * runner_up) {
    for (std::size_t i = 0; i < n; ++i) probs[i] = (bids[i] == top) ? 1.0 : 0.0;
    return probs;
  }
  // cluster of bidders within factor alpha of the top; boundary excluded,
  // mirroring the outright-win case of the two-bidder rule
  double weight_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (bids[i] == top || alpha_ * bids[i] > top) {
      probs[i] = (bids[i] == top) ? (1.0 - p_) : p_;
      weight_sum += probs[i];
    }
  }
  for (double& pr : probs) pr /= weight_sum;
  return probs;
}

std::vector<double> TopClusterRule::own_bid_thresholds(
    std::span<const double> other_bids) const {
  std::vector<double> t;
  t.reserve(3 * other_bids.size());
  for (double b : other_bids) {
    t.push_back(b / alpha_);
    t.push_back(b);
    t.push_back(alpha_ * b);
  }
  return t;
}

// ---------------------------------------------------------------------------

RulePtr make_second_price(double reserve) {
  return std::make_shared<SecondPriceRule>(reserve);
}

RulePtr make_rand(double alpha, double p) {
  return std::make_shared<RandRule>(alpha, p);
}

RulePtr make_top_cluster(double alpha, double p) {
  return std::make_shared<TopClusterRule>(alpha, p);
}

}  // namespace abidsim

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace abidsim {

/// A bidder's win probability as a function of its own bid, with the
/// other bids fixed: a right-continuous nondecreasing step function.
/// Segment k holds on [threshold_k, threshold_{k+1}); the last segment
/// extends to infinity.
class AllocationCurve {
 public:
  struct Segment {
    double threshold = 0.0;
    double prob = 0.0;
  };

  explicit AllocationCurve(std::vector<Segment> segments);

  const std::vector<Segment>& segments() const { return segments_; }

  /// Probability on the segment containing `bid` (right-continuous value).
  double prob_at(double bid) const;

  /// Limiting probability as the bid grows without bound.
  double max_prob() const { return segments_.back().prob; }

  /// Exact integral of the curve over [0, bid].
  double area_below(double bid) const;

  /// Myerson payment for a bidder that wins with probability `win_prob`
  /// at bid `bid`: win_prob * bid - area_below(bid).
  double payment(double win_prob, double bid) const;

 private:
  std::vector<Segment> segments_;
};

struct PropertyCheck {
  bool ok = true;
  std::string detail;
  std::vector<double> counterexample;  // offending bid vector, if any
};

struct MaxThreshold {
  double pi_star = 0.0;  // limiting single-bidder win probability
  double m_star = 0.0;   // least bid attaining it
  bool converged = true; // false when the probed curve was still rising at the cap
};

/// An anonymous randomized truthful single-item allocation rule.
class AllocationRule {
 public:
  virtual ~AllocationRule() = default;

  virtual std::string name() const = 0;
  virtual bool supports_arity(std::size_t n) const = 0;

  /// Win probabilities, nonnegative and summing to at most 1.
  virtual std::vector<double> allocate(std::span<const double> bids) const = 0;

  /// Own-bid values at which a bidder's win probability may jump, given
  /// the other bids. Exhaustive for piecewise-constant rules.
  virtual std::vector<double> own_bid_thresholds(
      std::span<const double> other_bids) const = 0;

  /// Expected payment per bidder; defaults to Myerson pricing off the
  /// allocation curves.
  virtual std::vector<double> payments(std::span<const double> bids) const;

  /// Analytically known (pi*, M*), when available.
  virtual std::optional<MaxThreshold> declared_max_threshold() const {
    return std::nullopt;
  }

 protected:
  void check_bids(std::span<const double> bids) const;
};

/// Exact step curve for one bidder facing `other_bids`, built from the
/// rule's declared thresholds.
AllocationCurve allocation_curve(const AllocationRule& rule,
                                 std::span<const double> other_bids);

/// Myerson payments computed from the allocation curves: for each bidder,
/// x_i * b_i minus the area below its curve up to b_i.
std::vector<double> myerson_payments(const AllocationRule& rule,
                                     std::span<const double> bids);

/// Single-bidder (pi*, M*): declared values when present, otherwise probed
/// by doubling up to 2^60 and bisecting to 1e-9.
MaxThreshold max_threshold(const AllocationRule& rule);

/// Randomized permutation testing of anonymity; also checks that the
/// lowest of k bidders never wins with probability above 1/k.
PropertyCheck check_anonymity(const AllocationRule& rule, int trials,
                              std::uint64_t seed = 12345);

/// Randomized perturbation testing: raising one bid never lowers that
/// bidder's win probability, and probabilities stay a sub-distribution.
PropertyCheck check_monotonicity(const AllocationRule& rule, int trials,
                                 std::uint64_t seed = 54321);

/// Second-price auction with an optional anonymous reserve; any arity.
class SecondPriceRule final : public AllocationRule {
 public:
  explicit SecondPriceRule(double reserve = 0.0);

  std::string name() const override;
  bool supports_arity(std::size_t n) const override { return n >= 1; }
  std::vector<double> allocate(std::span<const double> bids) const override;
  std::vector<double> own_bid_thresholds(
      std::span<const double> other_bids) const override;
  std::vector<double> payments(std::span<const double> bids) const override;
  std::optional<MaxThreshold> declared_max_threshold() const override;

  double reserve() const { return reserve_; }

 private:
  double reserve_;
};

/// Two-bidder randomized rule: the higher bidder wins outright when its
/// bid is at least alpha times the other; otherwise it wins w.p. 1-p.
/// Equal bids split evenly.
class RandRule final : public AllocationRule {
 public:
  RandRule(double alpha, double p);

  std::string name() const override;
  bool supports_arity(std::size_t n) const override { return n == 2; }
  std::vector<double> allocate(std::span<const double> bids) const override;
  std::vector<double> own_bid_thresholds(
      std::span<const double> other_bids) const override;
  /// Closed-form expected costs; exactly the Myerson prices, and written
  /// so that alpha = 1 reproduces second-price payments bit for bit.
  std::vector<double> payments(std::span<const double> bids) const override;

  double alpha() const { return alpha_; }
  double p() const { return p_; }

 private:
  double alpha_;
  double p_;
};

/// Experimental n-bidder extension: the top bidder wins outright when it
/// leads the runner-up by a factor alpha; otherwise every bidder within
/// factor alpha of the maximum shares, with weight 1-p for max bidders
/// and p for the rest. Reduces to RandRule for two bidders. Not canonical.
class TopClusterRule final : public AllocationRule {
 public:
  TopClusterRule(double alpha, double p);

  std::string name() const override;
  bool supports_arity(std::size_t n) const override { return n >= 1; }
  std::vector<double> allocate(std::span<const double> bids) const override;
  std::vector<double> own_bid_thresholds(
      std::span<const double> other_bids) const override;

  double alpha() const { return alpha_; }
  double p() const { return p_; }

 private:
  double alpha_;
  double p_;
};

/// A rule given by an explicit single-opponent breakpoint table is out of
/// scope; custom rules must subclass AllocationRule and declare their
/// thresholds exactly.

using RulePtr = std::shared_ptr<const AllocationRule>;

RulePtr make_second_price(double reserve = 0.0);
RulePtr make_rand(double alpha, double p);
RulePtr make_top_cluster(double alpha, double p);

}  // namespace abidsim

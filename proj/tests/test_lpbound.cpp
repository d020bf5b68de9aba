#include <cmath>
#include <random>

#include "doctest.h"

#include "abidsim/lpbound.hpp"

using namespace abidsim;

namespace {

double simplex_sample_min(const MSConstants& c, int samples,
                          std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> e(1.0);
  double best = std::numeric_limits<double>::infinity();
  for (int t = 0; t < samples; ++t) {
    double x[4], sum = 0.0;
    for (double& v : x) sum += (v = e(rng));
    double mx = 0.0, sx = 0.0;
    for (int k = 0; k < 4; ++k) {
      mx += c.m[k] * x[k] / sum;
      sx += c.s[k] * x[k] / sum;
    }
    best = std::min(best, std::max(mx, sx));
  }
  return best;
}

}  // namespace

TEST_CASE("ms constants") {
  const MSConstants flat = ms_constants(1.0, 0.4);
  CHECK(flat.m == std::array<double, 4>{0.0, 0.4, 0.6, 1.0});
  CHECK(flat.s[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(flat.s[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(flat.s[2] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(flat.s[3] == 0.0);

  const MSConstants star = ms_constants(alpha_star(), 0.4);
  CHECK(star.s[0] == doctest::Approx(1.116146).epsilon(1e-6));
  CHECK(star.m == std::array<double, 4>{0.0, 0.4, 0.6, 1.0});
  CHECK(star.s[0] >= star.s[1]);
  CHECK(star.s[1] >= 0.0);
  CHECK(star.s[2] >= 0.0);

  CHECK_THROWS_AS(ms_constants(0.9, 0.4), std::domain_error);
  CHECK_THROWS_AS(ms_constants(1.5, 0.0), std::domain_error);
  CHECK_THROWS_AS(ms_constants(1.5, 0.51), std::domain_error);
}

TEST_CASE("factor lp at the paper's operating points") {
  const LPResult star = solve_factor_lp(ms_constants(alpha_star(), 0.4));
  CHECK(star.z == doctest::Approx(0.527443).epsilon(1e-5));
  // optimum at x_4 = z = delta, x_1 = delta / s_1, x_2 = x_3 = 0
  const double s1 = ms_constants(alpha_star(), 0.4).s[0];
  CHECK(star.x[3] == doctest::Approx(star.z).epsilon(1e-9));
  CHECK(star.x[0] == doctest::Approx(star.z / s1).epsilon(1e-9));
  CHECK(star.x[1] == doctest::Approx(0.0).scale(1.0));
  CHECK(star.x[2] == doctest::Approx(0.0).scale(1.0));
  CHECK(star.x[0] + star.x[1] + star.x[2] + star.x[3] ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(star.duality_gap == doctest::Approx(0.0).scale(1e-9));

  const LPResult unit = solve_factor_lp(ms_constants(1.0, 0.4));
  CHECK(unit.z == doctest::Approx(0.5).epsilon(1e-9));

  MSConstants ones;
  ones.m = {1.0, 1.0, 1.0, 1.0};
  ones.s = {1.0, 1.0, 1.0, 1.0};
  CHECK(solve_factor_lp(ones).z == doctest::Approx(1.0));
}

TEST_CASE("lp invariants on a parameter grid") {
  for (int i = 0; i <= 20; ++i) {
    const double alpha = 1.0 + (alpha_star() - 1.0) * i / 20.0;
    const MSConstants c = ms_constants(alpha, 0.4);
    const LPResult lp = solve_factor_lp(c);
    double mx = 0.0, sx = 0.0, sum = 0.0;
    for (int k = 0; k < 4; ++k) {
      mx += c.m[k] * lp.x[k];
      sx += c.s[k] * lp.x[k];
      sum += lp.x[k];
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(lp.z >= std::max(mx, sx) - 1e-12);
    CHECK(lp.delta <= lp.z + 1e-12);                   // weak duality
    CHECK(std::abs(lp.z - lp.delta) <= 1e-9);          // strong at p = 2/5
    CHECK(1.0 / lp.z == doctest::Approx(poa_bound(alpha, 0.4).value).epsilon(1e-9));
  }
}

TEST_CASE("dual certificate") {
  const DualCertificate star = dual_certificate(alpha_star(), 0.4);
  CHECK(star.feasible);
  CHECK(std::abs(star.poly_k2) <= 1e-9);  // k = 2 constraint tight at alpha*
  CHECK(star.slacks[1] <= 1e-12);
  CHECK(star.delta == doctest::Approx(0.527443).epsilon(1e-5));

  const DualCertificate wide = dual_certificate(1.9, 0.4);
  CHECK_FALSE(wide.feasible);
  CHECK(wide.poly_k2 == doctest::Approx(3.0 * 1.9 * 1.9 - 1.9 - 7.0));
  CHECK(wide.poly_k2 > 0.0);

  const DualCertificate unit = dual_certificate(1.0, 0.4);
  CHECK(unit.feasible);
  // m_1 and m_4 rows tight at alpha = 1
  CHECK(std::abs(unit.slacks[0]) <= 1e-12);
  CHECK(std::abs(unit.slacks[3]) <= 1e-12);
}

TEST_CASE("alpha* and the feasibility polynomials") {
  const double a = alpha_star();
  CHECK(a == doctest::Approx((1.0 + std::sqrt(85.0)) / 6.0).epsilon(1e-15));
  CHECK(std::abs(3.0 * a * a - a - 7.0) <= 1e-12);
  CHECK(a == doctest::Approx(1.70326).epsilon(1e-5));

  // root of 4a^3 + 2a^2 - 11a - 10 in [1, 2] sits near 1.8, above alpha*
  double lo = 1.0, hi = 2.0;
  auto cubic = [](double x) { return ((4.0 * x + 2.0) * x - 11.0) * x - 10.0; };
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    (cubic(mid) < 0.0 ? lo : hi) = mid;
  }
  CHECK(lo == doctest::Approx(1.8).epsilon(0.01));
  CHECK(lo > a);
}

TEST_CASE("poa bound") {
  const PoaBound star = poa_bound(alpha_star(), 0.4);
  CHECK(star.certified);
  CHECK(star.value == doctest::Approx(1.89594).epsilon(1e-5));
  const double a = alpha_star();
  CHECK(star.value ==
        doctest::Approx((2.0 * a + 6.0 + 2.0 / a) / (2.0 * a + 1.0 + 2.0 / a))
            .epsilon(1e-12));

  const PoaBound unit = poa_bound(1.0, 0.4);
  CHECK(unit.certified);
  CHECK(unit.value == doctest::Approx(2.0).epsilon(1e-12));

  CHECK_FALSE(poa_bound(alpha_star() + 0.01, 0.4).certified);

  // the footnote's alternative p = 1/3 lands near 1.91
  CHECK(poa_bound(1.7, 1.0 / 3.0).value == doctest::Approx(1.91).epsilon(0.01));
}

TEST_CASE("vertex enumeration matches random simplex sampling") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    MSConstants c;
    for (int k = 0; k < 4; ++k) {
      c.m[k] = u(rng);
      c.s[k] = 2.0 * u(rng);
    }
    const LPResult lp = solve_factor_lp(c);
    const double sampled = simplex_sample_min(c, 20000, 1000 + t);
    CHECK(sampled >= lp.z - 1e-9);
  }
}

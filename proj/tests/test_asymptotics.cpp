#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "semijacobi/asymptotics.hpp"
#include "test_support.hpp"

using namespace semijacobi;
using namespace semijacobi::testing;

namespace {

// Coefficient of n^-j in the t = 0 expansion of beta_n, j = 1..6.
Real beta_t0_coeff(int j, const Real& a) {
  const Real g = 1 - 4 * a * a;
  switch (j) {
    case 1: return Real(0);
    case 2: return g / 16;
    case 3: return -a * g / 8;
    case 4: return g * (1 + 12 * a * a) / 64;
    case 5: return -a * g * (1 + 4 * a * a) / 16;
    case 6: return g * (1 + 40 * a * a + 80 * a * a * a * a) / 256;
  }
  return Real(0);
}

// ln mu_0 = ln(sqrt(pi) Gamma(a+1) / Gamma(a+3/2)).
Real log_mu0(const Real& a) {
  return log(Real::pi()) / 2 + lngamma(a + 1) - lngamma(a + Real::ratio(3, 2));
}

}  // namespace

TEST_CASE("beta series coefficients") {
  WorkingPrecision guard(256);
  SUBCASE("alpha = +-1/2 leaves only the constant") {
    for (double a : {0.5, -0.5}) {
      for (double t : {0.0, 1.0, 7.5}) {
        AsymSeries s = beta_series(WeightParams{Real(a), Real(t)});
        CHECK(s.lead_0 == Real::ratio(1, 4));
        for (const Real& c : s.c) CHECK(c.is_zero());
      }
    }
  }
  SUBCASE("alpha = t = 0") {
    AsymSeries s = beta_series(WeightParams{Real(0), Real(0)});
    REQUIRE(s.order() == 6);
    CHECK(s.c[0].is_zero());
    CHECK(s.c[1] == Real::ratio(1, 16));
    CHECK(s.c[2].is_zero());
    CHECK(s.c[3] == Real::ratio(1, 64));
  }
  SUBCASE("t = 0 matches the closed-form expansion term by term") {
    std::mt19937 rng(71);
    std::uniform_real_distribution<double> dist(-0.95, 3.0);
    for (int trial = 0; trial < 20; ++trial) {
      Real a(dist(rng));
      AsymSeries s = beta_series(WeightParams{a, Real(0)});
      for (int j = 1; j <= 6; ++j) CHECK(abs(s.c[j - 1] - beta_t0_coeff(j, a)) <= tenth_power(70));
    }
  }
  SUBCASE("t = 0 series tracks the closed form at large n") {
    // alpha = 0 is excluded: only even powers of 1/n survive there.
    for (double a : {0.25, 1.0, 2.5}) {
      std::vector<std::pair<double, Real>> errs;
      for (int n : {100, 200, 400, 800}) {
        AsymValue v = evaluate(beta_series(WeightParams{Real(a), Real(0)}), Real(n));
        CHECK(v.in_regime);
        errs.emplace_back(n, abs(v.value - beta_closed(n, Real(a))));
      }
      CHECK(order_fit(errs).slope == doctest::Approx(-7).epsilon(0.02));
    }
  }
}

TEST_CASE("p series coefficients") {
  WorkingPrecision guard(256);
  SUBCASE("leading terms") {
    AsymSeries s = p_series(WeightParams{Real(1.25), Real(3)});
    CHECK(s.lead_n == Real::ratio(-1, 4));
    CHECK(abs(s.lead_0 - Real(3 + 2 + 5) / 16) <= tenth_power(70));
    CHECK(s.order() == 5);
  }
  SUBCASE("t = 0 matches the closed-form expansion term by term") {
    std::mt19937 rng(72);
    std::uniform_real_distribution<double> dist(-0.95, 3.0);
    for (int trial = 0; trial < 20; ++trial) {
      Real a(dist(rng));
      AsymSeries s = p_series(WeightParams{a, Real(0)});
      CHECK(abs(s.lead_0 - (1 + 2 * a) / 8) <= tenth_power(70));
      for (int k = 1; k <= 5; ++k) {
        Real expected = pow(1 - 2 * a, k) * (1 + 2 * a) / pow(Real(2), k + 3);
        CHECK(abs(s.c[k - 1] - expected) <= tenth_power(70));
      }
    }
  }
  SUBCASE("t = 0 series tracks -n(n-1)/(2(2n-1+2a))") {
    const Real a(0.75);
    std::vector<std::pair<double, Real>> errs;
    for (int n : {100, 200, 400, 800}) {
      Real closed = -Real(n) * (n - 1) / (2 * (2 * n - 1 + 2 * a));
      errs.emplace_back(n, abs(evaluate(p_series(WeightParams{a, Real(0)}), Real(n)).value - closed));
    }
    CHECK(order_fit(errs).slope == doctest::Approx(-6).epsilon(0.02));
  }
  SUBCASE("differences of the p series reproduce the beta series through n^-6") {
    std::mt19937 rng(73);
    std::uniform_real_distribution<double> da(-0.9, 2.0);
    std::uniform_real_distribution<double> dt(-2.0, 4.0);
    for (int trial = 0; trial < 8; ++trial) {
      WeightParams params{Real(da(rng)), Real(dt(rng))};
      if (exponential_regime(params)) continue;
      AsymSeries ps = p_series(params);
      AsymSeries bs = beta_series(params);
      std::vector<std::pair<double, Real>> errs;
      for (int n : {400, 800, 1600, 3200, 6400}) {
        Real diff = evaluate(ps, Real(n)).value - evaluate(ps, Real(n + 1)).value;
        errs.emplace_back(n, abs(diff - evaluate(bs, Real(n)).value));
      }
      CHECK(order_fit(errs).slope == doctest::Approx(-7).epsilon(0.03));
    }
  }
}

TEST_CASE("regime flag") {
  WorkingPrecision guard(128);
  AsymSeries s = beta_series(WeightParams{Real(0), Real(20)});
  CHECK_FALSE(evaluate(s, Real(2)).in_regime);
  CHECK(evaluate(s, Real(2000)).in_regime);
  CHECK(exponential_regime(WeightParams{Real(-0.5), Real(3)}));
  CHECK_FALSE(exponential_regime(WeightParams{Real(0.25), Real(3)}));
  AsymValue partial = evaluate(s, Real(10), 2);
  CHECK(abs(partial.value - (Real::ratio(1, 4) + s.c[1] / 100)) <= tenth_power(35));
}

TEST_CASE("order fit") {
  WorkingPrecision guard(128);
  SUBCASE("exact power law") {
    std::vector<std::pair<double, Real>> errs;
    for (int n : {64, 128, 256, 512}) errs.emplace_back(n, Real(3.5) / pow(Real(n), 7L));
    OrderFit fit = order_fit(errs);
    CHECK(std::abs(fit.slope + 7) <= 1e-6);
    CHECK(fit.used == 4);
    CHECK(fit.warnings.empty());
  }
  SUBCASE("nonpositive errors are dropped with a warning") {
    std::vector<std::pair<double, Real>> errs;
    for (int n : {10, 20, 40, 80, 160}) errs.emplace_back(n, Real(2) / pow(Real(n), 4L));
    errs.emplace_back(320, Real(0));
    OrderFit fit = order_fit(errs);
    CHECK(fit.used == 5);
    REQUIRE(fit.warnings.size() == 1);
    CHECK(fit.warnings[0].find("n=320") != std::string::npos);
    CHECK(std::abs(fit.slope + 4) <= 1e-6);
  }
  SUBCASE("too few points") {
    std::vector<std::pair<double, Real>> errs{{10, Real(1)}, {20, Real(0.5)}, {40, Real(0)}, {80, Real(0.1)}};
    CHECK_THROWS_AS(order_fit(errs), std::invalid_argument);
  }
}

TEST_CASE("D_n(0) in closed form") {
  PrecisionContext ctx{192, 3, 25};
  SUBCASE("n = 1, alpha = 0 gives ln 2") {
    Dn0 d = dn0_exact(Real(0), 1, ctx);
    WorkingPrecision guard(192);
    CHECK(abs(d.value - log(Real(2))) <= tenth_power(40));
  }
  SUBCASE("n = 1, 2 against the moments") {
    WorkingPrecision guard(256);
    for (double a : {-0.5, 0.3, 1.5, 4.0}) {
      const Real alpha(a);
      Real l0 = log_mu0(alpha);
      CHECK(abs(dn0_exact(alpha, 1, ctx).value - l0) <= tenth_power(30));
      // D_2(0) = mu_0 mu_2, mu_2 = mu_0 / (2a + 3)
      CHECK(abs(dn0_exact(alpha, 2, ctx).value - (2 * l0 - log(2 * alpha + 3))) <= tenth_power(30));
    }
  }
  SUBCASE("product and Barnes forms agree") {
    Dn0 d = dn0_exact(Real(1.5), 10, ctx);
    CHECK(d.discrepancy <= 1e-25);
    std::mt19937 rng(74);
    std::uniform_real_distribution<double> dist(-0.95, 3.0);
    std::uniform_int_distribution<int> dn(1, 120);
    for (int trial = 0; trial < 10; ++trial) {
      CHECK(dn0_exact(Real(dist(rng)), dn(rng), ctx).discrepancy <= 1e-25);
    }
  }
  SUBCASE("pipeline at t = 0") {
    for (double a : {-0.5, 0.0, 1.5}) {
      OrthoTable table = build_ortho_table(WeightParams{Real(a), Real(0)}, 30);
      for (int n = 1; n <= 30; ++n) {
        Dn0 d = dn0_exact(Real(a), n, ctx);
        WorkingPrecision guard(table.bits);
        CHECK(abs(table.log_d[n] - d.value) <= tenth_power(25) * max(abs(d.value), Real(1)));
      }
    }
  }
}

TEST_CASE("Hankel determinant expansion") {
  WorkingPrecision guard(256);
  SUBCASE("t = 0 reduces to the D_n(0) expansion") {
    std::mt19937 rng(75);
    std::uniform_real_distribution<double> dist(-0.9, 3.0);
    for (int trial = 0; trial < 10; ++trial) {
      Real a(dist(rng));
      for (int n : {10, 100, 1000}) {
        CHECK(abs(dn_asymptotic(WeightParams{a, Real(0)}, n) - dn0_asymptotic(a, n)) <= tenth_power(60));
      }
    }
  }
  SUBCASE("ratio bracket plus the D_n(0) expansion gives the full expansion") {
    std::mt19937 rng(76);
    std::uniform_real_distribution<double> da(-0.9, 3.0);
    std::uniform_real_distribution<double> dt(-3.0, 6.0);
    for (int trial = 0; trial < 10; ++trial) {
      WeightParams params{Real(da(rng)), Real(dt(rng))};
      for (int n : {20, 300}) {
        Real combined = dn0_asymptotic(params.alpha, n) + log_ratio_asymptotic(params, n);
        CHECK(abs(dn_asymptotic(params, n) - combined) <= tenth_power(60) * abs(combined));
      }
    }
  }
  SUBCASE("D_n(0) expansion against the closed form") {
    PrecisionContext ctx{192, 3, 25};
    std::vector<std::pair<double, Real>> errs;
    for (int n : {50, 100, 200, 400}) {
      Dn0 d = dn0_exact(Real(0.75), n, ctx);
      errs.emplace_back(n, abs(d.value - dn0_asymptotic(Real(0.75), n)));
    }
    CHECK(order_fit(errs).slope == doctest::Approx(-4).epsilon(0.05));
  }
  SUBCASE("ratio at alpha = 0, t = 1, n = 100") {
    WeightParams params{Real(0), Real(1)};
    OrthoTable at_t = build_ortho_table(params, 100, PrecisionContext::for_degree(100, 25, true), TableOptions{true});
    OrthoTable at_0 =
        build_ortho_table(params.at(Real(0)), 100, PrecisionContext::for_degree(100, 25, true), TableOptions{true});
    WorkingPrecision g(at_t.bits);
    Real pipeline = at_t.log_d[100] - at_0.log_d[100];
    Real err = abs(pipeline - log_ratio_asymptotic(params, 100));
    CHECK(err <= tenth_power(7));
    CHECK(err >= tenth_power(11));  // the n^-4 term is still visible
  }
}

TEST_CASE("ratio by integration over t") {
  for (double a : {0.5, 1.5}) {
    for (double t : {1.0, -1.5}) {
      WeightParams params{Real(a), Real(t)};
      for (int n : {1, 4, 12}) {
        Real integral = log_ratio_by_integral(params, n, 15);
        OrthoTable at_t = build_ortho_table(params, n, 30);
        OrthoTable at_0 = build_ortho_table(params.at(Real(0)), n, 30);
        WorkingPrecision guard(at_t.bits);
        CHECK(abs(integral - (at_t.log_d[n] - at_0.log_d[n])) <= tenth_power(12));
      }
    }
  }
  CHECK(log_ratio_by_integral(WeightParams{Real(0.5), Real(0)}, 3, 15).is_zero());
  CHECK_THROWS_AS(log_ratio_by_integral(WeightParams{Real(0.5), Real(1)}, 0, 15), std::out_of_range);
}

TEST_CASE("pipeline against the series") {
  SUBCASE("beta at alpha = 0, t = 1") {
    SeriesComparison cmp = compare_series(SeriesQuantity::beta, WeightParams{Real(0), Real(1)}, {32, 64, 128, 256});
    REQUIRE(cmp.fit_valid);
    CHECK(cmp.fit.slope == doctest::Approx(-7).epsilon(0.05));
    std::ostringstream os;
    write_series_csv(os, cmp, 20);
    std::string csv = os.str();
    CHECK(csv.rfind("n,oracle,series,abs_error,running_slope\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
  }
  SUBCASE("p at alpha = 1/2 sits at the precision floor") {
    SeriesComparison cmp = compare_series(SeriesQuantity::p, WeightParams{Real(0.5), Real(1)}, {16, 32, 64, 128});
    CHECK(cmp.exponential);
    CHECK_FALSE(cmp.fit_valid);
    CHECK(cmp.fit.warnings.size() >= 4);
  }
  SUBCASE("n outside the table") {
    OrthoTable table = series_table(WeightParams{Real(0), Real(1)}, 20);
    CHECK_THROWS_AS(compare_series(SeriesQuantity::beta, table, {10, 21}), std::out_of_range);
    CHECK_THROWS_AS(compare_series(SeriesQuantity::beta, table, {0, 10}), std::out_of_range);
  }
}

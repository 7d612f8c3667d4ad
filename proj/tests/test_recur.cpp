#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "semijacobi/errors.hpp"
#include "semijacobi/recur.hpp"
#include "test_support.hpp"

using namespace semijacobi;
using namespace semijacobi::testing;

namespace {

// p(n,0) = -n(n-1) / (2(2n-1+2a))
Real p_closed(int n, const Real& a) { return n == 0 ? Real(0) : -Real(n) * (n - 1) / (2 * (2 * n - 1 + 2 * a)); }

}  // namespace

TEST_CASE("beta_n equation") {
  SUBCASE("t = 0 closed form satisfies it exactly") {
    WorkingPrecision guard(256);
    for (double alpha : {-0.25, 0.5, 2.0}) {
      WeightParams params{Real(alpha), Real(0)};
      for (int n = 1; n <= 40; ++n) {
        Real res = btd_residual(params, n, beta_closed(n - 1, params.alpha), beta_closed(n, params.alpha),
                                beta_closed(n + 1, params.alpha));
        CHECK(res < tenth_power(70));
      }
    }
  }
  SUBCASE("table at alpha = 0.5, t = 1, n <= 40") {
    OrthoTable table = build_ortho_table(WeightParams(Real(0.5), Real(1)), 41);
    for (int n = 1; n <= 40; ++n) CHECK(btd_residual(table, n) <= tenth_power(22));
  }
  SUBCASE("sensitive to a perturbed beta_n") {
    OrthoTable table = build_ortho_table(WeightParams(Real(0.5), Real(1)), 12);
    WorkingPrecision guard(table.bits);
    for (int n = 2; n <= 10; ++n) {
      Real bumped = table.beta[n] + pow(Real(10), -6L);
      Real before = btd_residual(table, n);
      Real after = btd_residual(table.params, n, table.beta[n - 1], bumped, table.beta[n + 1]);
      CHECK(after - before >= pow(Real(10), -6L));
      CHECK(after >= tenth_power(8));
    }
  }
  SUBCASE("index range") {
    OrthoTable table = build_ortho_table(WeightParams(Real(0.5), Real(1)), 5);
    CHECK_THROWS_AS(btd_residual(table, 0), std::out_of_range);
    CHECK_THROWS_AS(btd_residual(table, 6), std::out_of_range);
  }
}

TEST_CASE("forward iteration of beta_n") {
  PrecisionContext ctx;
  ctx.mantissa_bits = 256;
  ctx.agreement_digits = 20;
  SUBCASE("reproduces the table for n <= 20") {
    WeightParams params{Real(0.5), Real(1)};
    OrthoTable table = build_ortho_table(params, 20);
    BetaIteration iter = btd_iterate(params, 20, ctx);
    REQUIRE(iter.beta.size() == 21);
    WorkingPrecision guard(iter.bits);
    CHECK(iter.beta[0].is_zero());
    CHECK(rel_err(iter.beta[1], initial_beta1(params)) < tenth_power(60));
    for (int n = 1; n <= 20; ++n) {
      CHECK(abs(iter.beta[n] - table.beta[n]) < tenth_power(15));
      CHECK(iter.digits_lost[n] >= 0.0);
    }
    // the solved form back-substituted
    for (int n = 1; n < 20; ++n) {
      CHECK(btd_residual(params, n, iter.beta[n - 1], iter.beta[n], iter.beta[n + 1]) < tenth_power(40));
    }
    double base = iteration_growth_base(iter, table);
    MESSAGE("iterate-vs-table growth base per step: ", base);
    CHECK(base > 0.0);
  }
  SUBCASE("small t stays near the t = 0 closed form") {
    const double t = 1e-3;
    WeightParams params{Real(1), Real(t)};
    BetaIteration iter = btd_iterate(params, 15, ctx);
    WorkingPrecision guard(iter.bits);
    for (int n = 1; n <= 15; ++n) CHECK(abs(iter.beta[n] - beta_closed(n, params.alpha)) < Real(t));
  }
  SUBCASE("t = 0 is refused") {
    CHECK_THROWS_AS(btd_iterate(WeightParams(Real(1), Real(0)), 10, ctx), DomainError);
  }
  SUBCASE("running out of digits raises a precision error") {
    PrecisionContext tight;
    tight.mantissa_bits = 64;
    tight.agreement_digits = 30;
    CHECK_THROWS_AS(btd_iterate(WeightParams(Real(0.5), Real(1)), 60, tight), PrecisionError);
  }
  SUBCASE("CSV export") {
    WeightParams params{Real(0.5), Real(1)};
    OrthoTable table = build_ortho_table(params, 10);
    std::ostringstream os;
    write_iteration_csv(os, btd_iterate(params, 10, ctx), table, 20);
    std::string text = os.str();
    CHECK(text.rfind("n,beta_iter,beta_oracle,abs_diff,digits_lost\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 12);
  }
}

TEST_CASE("p(n,t) equation") {
  SUBCASE("p(2,t) = -beta_1(t)") {
    for (double t : {-1.0, 0.5, 4.0}) {
      WeightParams params{Real(0.75), Real(t)};
      OrthoTable table = build_ortho_table(params, 4);
      WorkingPrecision guard(table.bits);
      CHECK(table.p[1].is_zero());
      CHECK(rel_err(table.p[2], -initial_beta1(params)) < tenth_power(25));
    }
  }
  SUBCASE("table at alpha = 1.5, t = 5, n <= 40") {
    OrthoTable table = build_ortho_table(WeightParams(Real(1.5), Real(5)), 41);
    for (int n = 1; n <= 40; ++n) CHECK(pnd_residual(table, n) <= tenth_power(22));
  }
  SUBCASE("t = 0 closed form") {
    WorkingPrecision guard(256);
    for (double alpha : {-0.25, 0.5, 3.0}) {
      WeightParams params{Real(alpha), Real(0)};
      for (int n = 1; n <= 40; ++n) {
        CHECK(pnd_residual(params, n, p_closed(n - 1, params.alpha), p_closed(n, params.alpha),
                           p_closed(n + 1, params.alpha)) < tenth_power(70));
      }
    }
  }
}

TEST_CASE("H_n equation") {
  SUBCASE("H_1, H_2 from Kummer ratios") {
    for (double t : {-0.5, 1.0, 6.0}) {
      WeightParams params{Real(0.5), Real(t)};
      AuxTable aux = build_aux_table(build_ortho_table(params, 4));
      WorkingPrecision guard(aux.bits);
      CHECK(rel_err(aux.H[1], initial_H1(params)) < tenth_power(25));
      CHECK(rel_err(aux.H[2], initial_H2(params)) < tenth_power(25));
    }
  }
  SUBCASE("table at alpha = 0.5, t = 1, n <= 40") {
    AuxTable aux = build_aux_table(build_ortho_table(WeightParams(Real(0.5), Real(1)), 41));
    for (int n = 1; n <= 40; ++n) CHECK(hnd_residual(aux, n) <= tenth_power(22));
  }
  SUBCASE("H_n(0) = n(n+2 alpha)") {
    WorkingPrecision guard(256);
    for (double alpha : {-0.25, 0.5, 2.0}) {
      WeightParams params{Real(alpha), Real(0)};
      auto H = [&](int n) { return Real(n) * (n + 2 * params.alpha); };
      for (int n = 1; n <= 40; ++n) CHECK(hnd_residual(params, n, H(n - 1), H(n), H(n + 1)) < tenth_power(70));
    }
  }
}

TEST_CASE("r_n from H and the p-H relation") {
  SUBCASE("alpha = 0.5, t = 1, n = 5") {
    OrthoTable table = build_ortho_table(WeightParams(Real(0.5), Real(1)), 8);
    AuxTable aux = build_aux_table(table);
    CHECK(rel_err(rn_from_H(aux, 5), aux.r[5]) < tenth_power(25));
  }
  SUBCASE("t = 0 gives n") {
    AuxTable aux = build_aux_table(build_ortho_table(WeightParams(Real(1.5), Real(0)), 8));
    for (int n = 1; n <= 8; ++n) CHECK(rel_err(rn_from_H(aux, n), Real(n)) < tenth_power(28));
  }
  SUBCASE("random parameters") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> alpha_dist(-0.9, 3.0), t_dist(-2.0, 10.0);
    for (int trial = 0; trial < 8; ++trial) {
      OrthoTable table = build_ortho_table(WeightParams(Real(alpha_dist(rng)), Real(t_dist(rng))), 20);
      AuxTable aux = build_aux_table(table);
      for (int n = 1; n <= 20; ++n) {
        CHECK(abs(rn_from_H(aux, n) - aux.r[n]) <= tenth_power(22) * max(abs(aux.r[n]), Real(1)));
        CHECK(pnr_residual(table, aux, n) <= tenth_power(24));
      }
    }
  }
  SUBCASE("vanishing denominator") {
    WeightParams params{Real(0.5), Real(1)};
    AuxTable aux = build_aux_table(build_ortho_table(params, 4));
    WorkingPrecision guard(aux.bits);
    aux.H[1] = aux.H[2] + 2;
    CHECK_THROWS_AS(rn_from_H(aux, 2), SingularError);
  }
}

// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include <boost/math/special_functions/beta.hpp>

#include "ambc/specfun.hpp"
#include "support/mp_oracles.hpp"

using namespace ambc;

TEST_CASE("log_bessel_i: closed-form points") {
  CHECK(log_bessel_i(0, 0.0) == 0.0);
  CHECK(log_bessel_i(1, 0.0) == -std::numeric_limits<double>::infinity());
  CHECK(log_bessel_i(287, 0.0) == -std::numeric_limits<double>::infinity());

  // Power-series oracle: I_0(1) = sum (1/2)^{2k} / (k!)^2 = 1.2660658777520082...
  double series = 0.0;
  double term = 1.0;
  for (int k = 0; k < 40; ++k) {
    series += term;
    term *= 0.25 / ((k + 1.0) * (k + 1.0));
  }
  CHECK(std::abs(log_bessel_i(0, 1.0) - std::log(series)) < 1e-12);
}

TEST_CASE("log_bessel_i: receiver order against a 50-digit oracle") {
  const double expected = testing::mp_log_bessel_i(287, 600.0);
  CHECK(std::abs(log_bessel_i(287, 600.0) - expected) < 1e-10);
}

TEST_CASE("log_bessel_i: grid against the 50-digit series oracle") {
  const int orders[] = {0, 1, 2, 5, 23, 49, 50, 51, 64, 100, 287, 575, 1024};
  const double xs[] = {1e-6, 1e-3, 0.5, 3.0, 30.0, 300.0, 3000.0, 2.0e4};
  for (int order : orders) {
    for (double x : xs) {
      CAPTURE(order);
      CAPTURE(x);
      const double got = log_bessel_i(order, x);
      const double want = testing::mp_log_bessel_i(order, x);
      // Relative error of the underlying value is the absolute error of its log.
      CHECK(std::abs(got - want) <= 1e-10 + 4.0 * std::numeric_limits<double>::epsilon() * std::abs(want));
    }
  }
}

TEST_CASE("log_bessel_i: far argument range stays finite and matches the Hankel expansion") {
  for (int order : {0, 3, 40}) {
    const double x = 1.0e6;
    // ln I ~ x - ln(2 pi x)/2 + ln(1 - (4a^2-1)/(8x) + (4a^2-1)(4a^2-9)/(2!(8x)^2) - ...)
    const double mu = 4.0 * order * order;
    long double corr = 1.0L;
    long double t = 1.0L;
    for (int k = 1; k < 12; ++k) {
      t *= -(mu - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (k * 8.0 * x);
      corr += t;
    }
    const double want = x - 0.5 * std::log(2.0 * M_PI * x) + static_cast<double>(std::log(corr));
    const double got = log_bessel_i(order, x);
    CHECK(std::isfinite(got));
    // Representing a log of magnitude 1e6 already costs ~1.2e-10 (one ulp).
    CHECK(std::abs(got - want) < 4e-10);
  }
  CHECK(std::isfinite(log_bessel_i(1024, 1.0e6)));
  CHECK(std::isfinite(log_bessel_i(1024, 1.0e-300)));
}

TEST_CASE("log_bessel_i: matches a 200-term series for small order and argument") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> order_dist(0, 32);
  std::uniform_real_distribution<double> x_dist(0.01, 50.0);
  for (int i = 0; i < 300; ++i) {
    const int order = order_dist(rng);
    const double x = x_dist(rng);
    const double want = testing::series_bessel_i(order, x);
    const double got = std::exp(log_bessel_i(order, x));
    CAPTURE(order);
    CAPTURE(x);
    CHECK(std::abs(got - want) <= 1e-10 * want);
  }
}

TEST_CASE("log_bessel_i: monotone in argument, decreasing in order") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> order_dist(0, 1000);
  std::uniform_real_distribution<double> lx_dist(-3.0, 5.0);
  for (int i = 0; i < 500; ++i) {
    const int order = order_dist(rng);
    const double x = std::pow(10.0, lx_dist(rng));
    CHECK(log_bessel_i(order, x * 1.01) > log_bessel_i(order, x));
    CHECK(log_bessel_i(order + 1, x) < log_bessel_i(order, x));
  }
}

TEST_CASE("log_bessel_i: domain errors") {
  CHECK_THROWS_AS(log_bessel_i(3, -1.0), std::domain_error);
  CHECK_THROWS_AS(log_bessel_i(-1, 1.0), std::domain_error);
}

TEST_CASE("reg_inc_beta: trivial identities") {
  CHECK(reg_inc_beta(0.3, 1.0, 1.0) == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(reg_inc_beta(0.5, 7.0, 7.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(reg_inc_beta(0.0, 2.0, 3.0) == 0.0);
  CHECK(reg_inc_beta(1.0, 2.0, 3.0) == 1.0);
}

TEST_CASE("reg_inc_beta: large symmetric parameters against quadrature") {
  const double quad = testing::mp_reg_inc_beta_quadrature(0.5, 576.0, 577.0);
  const double binom = testing::mp_reg_inc_beta_binomial(0.5, 576, 577);
  REQUIRE(std::abs(quad - binom) < 1e-20);
  CHECK(std::abs(reg_inc_beta(0.5, 576.0, 577.0) - quad) <= 1e-12);
}

TEST_CASE("reg_inc_beta: integer grid against binomial tails") {
  const long params[] = {1, 2, 7, 30, 144, 576, 2304, 6000};
  const double xs[] = {0.01, 0.2, 0.45, 0.5, 0.55, 0.8, 0.99};
  for (long a : params) {
    for (long b : params) {
      if (a + b > 7000) continue;
      for (double x : xs) {
        CAPTURE(a);
        CAPTURE(b);
        CAPTURE(x);
        CHECK(std::abs(reg_inc_beta(x, static_cast<double>(a), static_cast<double>(b)) -
                       testing::mp_reg_inc_beta_binomial(x, a, b)) <= 1e-12);
      }
    }
  }
}

TEST_CASE("reg_inc_beta: reflection identity and monotonicity on random parameters") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> la(-1.0, 4.0);
  std::uniform_real_distribution<double> ux(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const double a = std::pow(10.0, la(rng));
    const double b = std::pow(10.0, la(rng));
    const double x = ux(rng);
    const double lhs = reg_inc_beta(x, a, b);
    const double rhs = 1.0 - reg_inc_beta(1.0 - x, b, a);
    CAPTURE(a);
    CAPTURE(b);
    CAPTURE(x);
    CHECK(std::abs(lhs - rhs) <= 1e-12);
    CHECK(std::abs(lhs - boost::math::ibeta(a, b, x)) <= 1e-12);
    const double x2 = std::min(1.0, x + 1e-3);
    CHECK(reg_inc_beta(x2, a, b) >= lhs);
  }
  // Strictly increasing where the integrand carries mass.
  double prev = 0.0;
  for (int i = 1; i < 100; ++i) {
    const double v = reg_inc_beta(0.4 + 0.002 * i, 288.0, 288.0);
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("reg_inc_beta: domain errors") {
  CHECK_THROWS_AS(reg_inc_beta(-0.1, 1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(reg_inc_beta(1.1, 1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(reg_inc_beta(0.5, 0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(reg_inc_beta(0.5, 1.0, -2.0), std::domain_error);
}

TEST_CASE("q_func: values, reflection, tails") {
  CHECK(q_func(0.0) == 0.5);
  CHECK(q_func(3.0) == doctest::Approx(1.349898e-3).epsilon(1e-6));
  for (double x = -8.0; x <= 8.0; x += 0.37) {
    CAPTURE(x);
    CHECK(std::abs(q_func(x) + q_func(-x) - 1.0) < 1e-15);
    const double want = testing::mp_q_func(x);
    CHECK(std::abs(q_func(x) - want) <= 1e-12 * want);
    CHECK(q_func(x + 0.01) <= q_func(x));
    if (x > -5.0) CHECK(q_func(x + 0.01) < q_func(x));
  }
  for (double x : {10.0, 20.0, 30.0, 37.0}) {
    const double want = testing::mp_q_func(x);
    CHECK(std::abs(q_func(x) - want) <= 1e-6 * want);
  }
}

TEST_CASE("q_inv: round trip and reference points") {
  CHECK(q_inv(0.5) == 0.0);
  CHECK(q_inv(q_func(1.7)) == doctest::Approx(1.7).epsilon(1e-10));

  // Bisection oracle directly on q_func.
  double lo = 0.0;
  double hi = 10.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (q_func(mid) > 1e-2 ? lo : hi) = mid;
  }
  CHECK(q_inv(1e-2) == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-12));
  CHECK(q_inv(1e-2) == doctest::Approx(2.326348).epsilon(1e-6));

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> lp(-300.0, -1e-9);
  for (int i = 0; i < 1000; ++i) {
    const double p = std::pow(10.0, lp(rng));
    CHECK(std::abs(q_func(q_inv(p)) - p) <= 1e-10);
    if (1.0 - p < 1.0) CHECK(std::abs(q_func(q_inv(1.0 - p)) - (1.0 - p)) <= 1e-10);
  }
  CHECK_THROWS_AS(q_inv(0.0), std::domain_error);
  CHECK_THROWS_AS(q_inv(1.0), std::domain_error);
}

TEST_CASE("log_poisson_pmf agrees with the lgamma form and sums to one") {
  for (double mean : {0.3, 4.0, 57.5, 5760.0}) {
    CompensatedSum total;
    for (long k = 0; k < static_cast<long>(mean + 60.0 * std::sqrt(mean) + 60.0); ++k) {
      const double direct = -mean + k * std::log(mean) - std::lgamma(k + 1.0);
      const double got = log_poisson_pmf(k, mean);
      CHECK(std::abs(got - direct) <= 1e-12 * std::max(1.0, mean));
      total.add(std::exp(got));
    }
    CHECK(total.value() == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(log_poisson_pmf(0, 0.0) == 0.0);
  CHECK(log_poisson_pmf(3, 0.0) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("LogDomainValue arithmetic") {
  const auto a = LogDomainValue::from_double(3.5);
  const auto b = LogDomainValue::from_double(-1.25);
  CHECK((a * b).to_double() == doctest::Approx(-4.375));
  CHECK((a / b).to_double() == doctest::Approx(-2.8));
  CHECK((a + b).to_double() == doctest::Approx(2.25));
  CHECK((a - b).to_double() == doctest::Approx(4.75));
  CHECK((a - a).is_zero());
  CHECK(LogDomainValue::from_double(0.0).is_zero());
  // Products far beyond double range stay representable.
  const auto huge = LogDomainValue::from_log(5000.0);
  CHECK(((huge * huge) / (huge * huge * a)).to_double() == doctest::Approx(1.0 / 3.5));
}

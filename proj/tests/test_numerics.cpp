#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "entropy_lab/errors.hpp"
#include "entropy_lab/numerics/parallel.hpp"
#include "entropy_lab/numerics/quadrature.hpp"
#include "entropy_lab/numerics/rng.hpp"
#include "entropy_lab/numerics/roots.hpp"
#include "entropy_lab/numerics/running_stats.hpp"
#include "entropy_lab/numerics/special.hpp"

using namespace entropy_lab;
using namespace entropy_lab::numerics;

TEST_CASE("ln_gamma reference values") {
  CHECK(std::fabs(ln_gamma(1.0)) < 1e-14);
  CHECK(ln_gamma(5.0) == doctest::Approx(std::log(24.0)).epsilon(1e-13));
  CHECK(ln_gamma(3.5) == doctest::Approx(1.2009736023470742).epsilon(1e-13));
  CHECK(ln_gamma(0.5) == doctest::Approx(0.5 * std::log(kPi)).epsilon(1e-13));
  CHECK(ln_gamma(1e-8) == doctest::Approx(18.420680738180209).epsilon(1e-12));
  CHECK(ln_gamma(171.5) == doctest::Approx(709.1431630309282).epsilon(1e-13));
  CHECK_THROWS_AS(ln_gamma(0.0), DomainError);
  CHECK_THROWS_AS(ln_gamma(-2.5), DomainError);
  CHECK_THROWS_AS(ln_gamma(std::nan("")), DomainError);
}

TEST_CASE("ln_gamma reflection identity") {
  for (double x = 0.05; x < 1.0; x += 0.05) {
    const double lhs = ln_gamma(x) + ln_gamma(1.0 - x);
    const double rhs = std::log(kPi / std::sin(kPi * x));
    CHECK(std::fabs(lhs - rhs) < 1e-10);
  }
}

TEST_CASE("digamma and trigamma reference values") {
  CHECK(std::fabs(digamma(1.0) - (-0.5772156649015329)) < 1e-12);
  CHECK(std::fabs(digamma(5.0) - 1.5061176684318005) < 1e-12);
  CHECK(std::fabs(digamma(5.5) - 1.6110931485817511) < 1e-12);
  CHECK(std::fabs(trigamma(1.0) - 1.6449340668482264) < 1e-12);
  CHECK(std::fabs(trigamma(7.0) - 0.15354517795933755) < 1e-12);
  CHECK(std::fabs(trigamma(0.5) - 4.934802200544679) < 1e-12);
  CHECK_THROWS_AS(digamma(0.0), DomainError);
  CHECK_THROWS_AS(trigamma(-1.0), DomainError);
}

TEST_CASE("digamma and trigamma recurrences") {
  for (double x = 0.5; x <= 20.0; x += 0.5) {
    CHECK(std::fabs(digamma(x + 1.0) - digamma(x) - 1.0 / x) < 1e-10);
    CHECK(std::fabs(trigamma(x + 1.0) - trigamma(x) + 1.0 / (x * x)) < 1e-10);
  }
}

TEST_CASE("incomplete gamma and beta") {
  CHECK(gamma_p(1.0, 2.0) == doctest::Approx(1.0 - std::exp(-2.0)).epsilon(1e-13));
  CHECK(gamma_p(3.0, 2.5) + gamma_q(3.0, 2.5) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(beta_inc(2.5, 3.5, 0.4) == doctest::Approx(0.4869041915261176).epsilon(1e-11));
  CHECK(beta_inc(1.0, 1.0, 0.3) == doctest::Approx(0.3).epsilon(1e-13));
}

TEST_CASE("normal and chi-square quantiles") {
  CHECK(std_normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(std::fabs(std_normal_quantile(0.975) - 1.959963984540054) < 1e-10);
  for (double p : {1e-12, 1e-6, 0.01, 0.2, 0.5, 0.77, 0.99, 1.0 - 1e-9}) {
    CHECK(std::fabs(std_normal_cdf(std_normal_quantile(p)) - p) < 1e-10);
  }
  CHECK(std::fabs(chi_square_quantile(10.0, 0.975) - 20.483177350807388) < 1e-8);
  CHECK(std::fabs(chi_square_quantile(10.0, 0.025) - 3.2469727802368413) < 1e-8);
  CHECK(std::fabs(chi_square_quantile(11.0, 0.5) - 10.340998074391827) < 1e-8);
  CHECK(std::fabs(gamma_quantile(2.5, 1.7, 0.3) - 2.5499219128459205) < 1e-9);
  CHECK(gamma_quantile(0.7, 1.0, 1e-6) == doctest::Approx(2.3395393357732745e-09).epsilon(1e-8));
  CHECK(std::fabs(gamma_quantile(30.0, 1.0, 0.999) - 49.80361653492473) < 1e-8);
  CHECK_THROWS_AS(std_normal_quantile(0.0), DomainError);
  CHECK_THROWS_AS(std_normal_quantile(1.0), DomainError);
}

TEST_CASE("t, F and Kolmogorov distributions") {
  CHECK(std::fabs(student_t_cdf(7.0, 1.3) - 0.8826160823038114) < 1e-10);
  CHECK(std::fabs(student_t_cdf(3.5, -2.1) - 0.056762912610399056) < 1e-10);
  CHECK(std::fabs(f_cdf(4.0, 9.0, 2.2) - 0.8501374313408314) < 1e-10);
  CHECK(std::fabs(kolmogorov_survival(0.5) - 0.9639452436648751) < 1e-10);
  CHECK(std::fabs(kolmogorov_survival(1.0) - 0.26999967167735456) < 1e-10);
  CHECK(std::fabs(kolmogorov_survival(1.5) - 0.022217962616525127) < 1e-10);
}

TEST_CASE("finite-n Kolmogorov distribution") {
  CHECK(std::fabs(1.0 - kolmogorov_cdf_exact(6, 0.3) - 0.5550150617283951) < 1e-12);
  CHECK(std::fabs(1.0 - kolmogorov_cdf_exact(10, 0.2) - 0.7487190399999999) < 1e-12);
  CHECK(std::fabs(1.0 - kolmogorov_cdf_exact(50, 0.1) - 0.6623112704658186) < 1e-11);
  CHECK(std::fabs(1.0 - kolmogorov_cdf_exact(100, 0.05) - 0.9532159710635725) < 1e-11);
  CHECK(std::fabs(1.0 - kolmogorov_cdf_exact(1000, 0.03) - 0.3226902143914636) < 1e-7);
  CHECK(std::fabs(1.0 - kolmogorov_cdf_exact(6, 0.34788086640779675) - 0.37375250013305095) < 1e-12);
  CHECK(std::fabs(kolmogorov_sf_exact(20, 0.63) / 3.244059156719683e-08 - 1.0) < 1e-9);
  CHECK(std::fabs(kolmogorov_sf_exact(7, 0.5) - 0.03839174153626465) < 1e-13);
  CHECK(std::fabs(smirnov_sf_exact(10, 0.3) - 0.1354635556) < 1e-10);
  CHECK(kolmogorov_cdf_exact(5, 0.05) == 0.0);
  CHECK(kolmogorov_cdf_exact(5, 1.0) == 1.0);
  double prev = 0.0;
  for (int i = 1; i < 100; ++i) {
    const double f = kolmogorov_cdf_exact(20, i / 100.0);
    CHECK(std::fabs(kolmogorov_sf_exact(20, i / 100.0) - (1.0 - f)) < 1e-12);
    CHECK(f >= prev - 1e-12);
    prev = f;
  }
}

TEST_CASE("adaptive quadrature") {
  auto r = integrate([](double x) { return std::exp(-x * x); }, -3.0, 3.0);
  CHECK(r.value == doctest::Approx(std::sqrt(kPi) * std::erf(3.0)).epsilon(1e-12));
  auto half = integrate_to_infinity([](double x) { return std::exp(-x); }, 0.0);
  CHECK(half.value == doctest::Approx(1.0).epsilon(1e-12));
  auto line = integrate_real_line([](double x) { return std::exp(-0.5 * x * x); }, 0.7);
  CHECK(line.value == doctest::Approx(std::sqrt(2.0 * kPi)).epsilon(1e-11));
  auto reversed = integrate([](double x) { return x; }, 1.0, 0.0);
  CHECK(reversed.value == doctest::Approx(-0.5).epsilon(1e-14));
  QuadSpec tight{1e-30, 1e-30, 3};
  CHECK_THROWS_AS(integrate([](double x) { return std::sqrt(x); }, 0.0, 1.0, tight), NumericError);
}

TEST_CASE("integrate_J") {
  CHECK(integrate_J(5.5, 0.0, 0) == 0.0);
  const double y = 1e-8;
  const double lead = std::pow(2.0, 1.0 - 5.5) * 2.0 * std::sqrt(y) / 2.0;
  CHECK(integrate_J(5.5, y, 0) == doctest::Approx(lead).epsilon(1e-7));
  CHECK(std::fabs(integrate_J(5.5, 4.0, 1) - 0.020209594022268268) < 1e-10);
  CHECK(std::fabs(integrate_J(5.5, 4.0, 0) - 0.025366515128126468) < 1e-10);
  CHECK_THROWS_AS(integrate_J(0.5, INFINITY, 0), DomainError);
  CHECK_THROWS_AS(integrate_J(5.5, -1.0, 0), DomainError);

  double previous = 0.0;
  for (double yy = 0.01; yy < 1e4; yy *= 1.7) {
    const double value = integrate_J(3.0, yy, 0);
    CHECK(value > previous);
    previous = value;
  }
  CHECK(integrate_J(3.0, INFINITY, 0) == doctest::Approx(previous).epsilon(1e-5));
}

TEST_CASE("find_root") {
  CHECK(find_root([](double x) { return x - 2.0; }, 0.0, 5.0) == doctest::Approx(2.0));
  CHECK(std::fabs(find_root([](double x) { return digamma(x) - 1.5061176684318005; }, 1.0, 10.0) -
                  5.0) < 1e-10);
  CHECK(std::fabs(find_root([](double x) { return x * x * x; }, -1.0, 2.0)) < 1e-4);
  CHECK_THROWS_AS(find_root([](double x) { return x * x + 1.0; }, -1.0, 1.0), BracketError);
  CHECK(find_root_expanding([](double x) { return x - 1000.0; }, 0.0, 1.0) ==
        doctest::Approx(1000.0));
}

TEST_CASE("Philox known-answer vectors") {
  auto zero = philox4x32({0, 0, 0, 0}, {0, 0});
  CHECK(zero[0] == 0x6627e8d5u);
  CHECK(zero[1] == 0xe169c58du);
  CHECK(zero[2] == 0xbc57ac4cu);
  CHECK(zero[3] == 0x9b00dbd8u);
  auto ones = philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                         {0xffffffffu, 0xffffffffu});
  CHECK(ones[0] == 0x408f276du);
  CHECK(ones[1] == 0x41c83b0eu);
  CHECK(ones[2] == 0xa20bc7c6u);
  CHECK(ones[3] == 0x6d5451fdu);
}

TEST_CASE("streams are reproducible and distinct") {
  RngStream a(42, 7);
  RngStream b(42, 7);
  RngStream c(42, 8);
  RngStream d(43, 7);
  bool differs_c = false;
  bool differs_d = false;
  for (int i = 0; i < 1000; ++i) {
    const double x = a.std_normal();
    CHECK(x == b.std_normal());
    differs_c |= (x != c.std_normal());
    differs_d |= (x != d.std_normal());
  }
  CHECK(differs_c);
  CHECK(differs_d);
  RngStream e(42, 7);
  CHECK(e.child(1).next_u64() != e.child(2).next_u64());
  CHECK(e.child(1).next_u64() == RngStream(42, 7).child(1).next_u64());
}

TEST_CASE("sampler moments") {
  constexpr int kDraws = 1000000;
  RngStream s(2024, 0);
  RunningStats chi;
  RunningStats gam;
  std::vector<double> normals(kDraws);
  for (int i = 0; i < kDraws; ++i) {
    chi.push(sample(ChiSquare{10.0}, s));
    gam.push(sample(GammaDist{5.5, 2.0}, s));
    normals[i] = sample(StdNormal{}, s);
  }
  CHECK(std::fabs(chi.mean - 10.0) < 0.02);
  CHECK(std::fabs(chi.variance() - 20.0) < 0.3);
  CHECK(std::fabs(gam.mean - 11.0) < 0.02);

  std::sort(normals.begin(), normals.end());
  double ks = 0.0;
  for (int i = 0; i < kDraws; ++i) {
    const double f = std_normal_cdf(normals[i]);
    ks = std::max({ks, f - static_cast<double>(i) / kDraws, static_cast<double>(i + 1) / kDraws - f});
  }
  CHECK(ks < 0.002);

  RunningStats small;
  for (int i = 0; i < 200000; ++i) small.push(s.gamma(0.3, 1.0));
  CHECK(std::fabs(small.mean - 0.3) < 0.01);

  for (int i = 0; i < 100000; ++i) {
    const double u = s.uniform01();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
  }
  CHECK_THROWS_AS(sample(GammaDist{0.0, 1.0}, s), DomainError);
  CHECK_THROWS_AS(sample(ChiSquare{-1.0}, s), DomainError);
}

TEST_CASE("running stats merge matches single pass") {
  RngStream s(5, 5);
  RunningStats all;
  RunningStats parts[3];
  PairedStats pall;
  PairedStats pparts[3];
  for (int i = 0; i < 3000; ++i) {
    const double x = s.std_normal();
    const double y = 0.5 * x + s.std_normal();
    all.push(x);
    parts[i % 3].push(x);
    pall.push(x, y);
    pparts[i % 3].push(x, y);
  }
  RunningStats merged;
  PairedStats pmerged;
  for (int k = 0; k < 3; ++k) {
    merged.merge(parts[k]);
    pmerged.merge(pparts[k]);
  }
  CHECK(merged.mean == doctest::Approx(all.mean).epsilon(1e-12));
  CHECK(merged.variance() == doctest::Approx(all.variance()).epsilon(1e-12));
  CHECK(pmerged.covariance() == doctest::Approx(pall.covariance()).epsilon(1e-12));
  CHECK(pmerged.stderr_of_difference() == doctest::Approx(pall.stderr_of_difference()).epsilon(1e-10));
}

TEST_CASE("parallel blocks cover every index and report the first failure") {
  std::vector<int> hits(257, 0);
  parallel_blocks(hits.size(), 4, [&](std::size_t b) { hits[b] += 1; });
  CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));

  try {
    parallel_blocks(64, 3, [](std::size_t b) {
      if (b == 10 || b == 40) throw ReplicationError(b, "boom");
    });
    FAIL("expected an exception");
  } catch (const ReplicationError& e) {
    CHECK(e.replication() == 10);
  }
  CHECK(resolve_threads(3) == 3);
  CHECK(resolve_threads(0) >= 1);
}

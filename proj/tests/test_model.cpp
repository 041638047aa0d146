#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>

#include "entropy_lab/errors.hpp"
#include "entropy_lab/model/model.hpp"
#include "entropy_lab/numerics/special.hpp"

using namespace entropy_lab;
using namespace entropy_lab::model;

TEST_CASE("Boeing sufficient statistics") {
  const SuffStats st = suff_stats(boeing_data());
  CHECK(st.n == 6);
  CHECK(st.mean1 == doctest::Approx(80.5));
  CHECK(st.mean2 == doctest::Approx(106.5));
  CHECK(st.s2 == doctest::Approx(115597.0).epsilon(1e-14));
  CHECK(std::fabs(st.w - 0.07647158052002594) < 1e-14);
  CHECK(std::fabs(st.ln_s() - 5.828932641663287) < 1e-13);
  CHECK(st.w * st.s == doctest::Approx(st.mean2 - st.mean1).epsilon(1e-12));
}

TEST_CASE("toy and degenerate data") {
  const SuffStats st = suff_stats({{0.0, 2.0}, {0.0, 2.0}});
  CHECK(st.mean1 == 1.0);
  CHECK(st.mean2 == 1.0);
  CHECK(st.s2 == 4.0);
  CHECK(st.w == 0.0);
  CHECK_THROWS_AS(suff_stats({{0.0, 0.0}, {0.0, 0.0}}), DegenerateDataError);
  CHECK_THROWS_AS(suff_stats({{1.0, 2.0}, {1.0}}), InputError);
  CHECK_THROWS_AS(suff_stats({{1.0}, {1.0}}), InputError);
  CHECK_THROWS_AS(suff_stats({{1.0, NAN}, {1.0, 2.0}}), InputError);
}

TEST_CASE("affine invariance of w") {
  const TwoSampleData base = boeing_data();
  TwoSampleData moved = base;
  const double a = 3.7;
  for (double& v : moved.sample1) v = a * v - 11.0;
  for (double& v : moved.sample2) v = a * v - 11.0;
  const SuffStats s0 = suff_stats(base);
  const SuffStats s1 = suff_stats(moved);
  CHECK(s1.w == doctest::Approx(s0.w).epsilon(1e-12));
  CHECK(s1.ln_s() - s0.ln_s() == doctest::Approx(std::log(a)).epsilon(1e-12));
}

TEST_CASE("loss values and derivatives") {
  const Loss l1 = Loss::squared_error();
  CHECK(loss_eval(l1, 3.0) == 9.0);
  CHECK(loss_deriv(l1, 3.0) == 6.0);
  const Loss lm3 = Loss::linex(-3.0);
  CHECK(loss_eval(lm3, 0.0) == 0.0);
  CHECK(loss_deriv(lm3, 0.0) == 0.0);
  const Loss l2 = Loss::linex(2.0);
  CHECK(loss_eval(l2, 0.5) == doctest::Approx(0.7182818284590451).epsilon(1e-14));
  CHECK(loss_deriv(l2, 0.5) == doctest::Approx(3.43656365691809).epsilon(1e-14));
  CHECK_THROWS_AS(Loss::linex(0.0), DomainError);
  CHECK(l1.label() == "l1");
  CHECK(lm3.label() == "linex(-3)");
}

TEST_CASE("loss derivative strictly increasing") {
  for (const Loss& loss : {Loss::squared_error(), Loss::linex(-3.0), Loss::linex(4.0)}) {
    double previous = loss_deriv(loss, -3.0);
    for (double t = -2.99; t <= 3.0; t += 0.01) {
      const double h = 1e-5;
      const double fd = (loss_eval(loss, t + h) - loss_eval(loss, t - h)) / (2.0 * h);
      CHECK(fd == doctest::Approx(loss_deriv(loss, t)).epsilon(1e-6));
      const double current = loss_deriv(loss, t);
      CHECK(current > previous);
      previous = current;
    }
  }
}

TEST_CASE("d0 and m0 closed forms") {
  const Loss l1 = Loss::squared_error();
  CHECK(std::fabs(d0(l1, 6) - (-1.0996324244958729)) < 1e-12);
  CHECK(std::fabs(m0(l1, 6) - (-1.1521201645708482)) < 1e-12);
  CHECK(std::fabs(d0(l1, 8) - (-1.2829657578292062)) < 1e-12);
  CHECK(std::fabs(m0(l1, 15) - (-1.6662084529544658)) < 1e-12);
  const Loss lm3 = Loss::linex(-3.0);
  CHECK(std::fabs(d0(lm3, 6) - (-1.0056003329469298)) < 1e-12);
  CHECK(std::fabs(m0(lm3, 6) - (-1.0685917564101931)) < 1e-12);
  CHECK_THROWS_AS(d0(Loss::linex(-4.0), 3), DomainError);
  CHECK_THROWS_AS(d0(l1, 1), DomainError);
}

TEST_CASE("generic solver agrees with closed forms") {
  for (int n : {2, 3, 6, 15, 40}) {
    for (const Loss& loss : {Loss::squared_error(), Loss::linex(-3.0), Loss::linex(-2.0),
                             Loss::linex(2.0), Loss::linex(4.0)}) {
      if (loss.kind == Loss::Kind::Linex && n - 1.0 + loss.a1 / 2.0 <= 0.0) continue;
      CAPTURE(n);
      CAPTURE(loss.label());
      CHECK(std::fabs(d0_generic(loss, n) - d0(loss, n)) < 1e-9);
      CHECK(std::fabs(m0_generic(loss, n) - m0(loss, n)) < 1e-9);
    }
  }
}

TEST_CASE("d0 exceeds m0") {
  for (int n = 3; n <= 50; ++n) {
    for (const Loss& loss : {Loss::squared_error(), Loss::linex(-3.0), Loss::linex(4.0)}) {
      CHECK(d0(loss, n) > m0(loss, n));
    }
    const double gap = 0.5 * (numerics::digamma((2.0 * n - 1.0) / 2.0) - numerics::digamma(n - 1.0));
    CHECK(d0(Loss::squared_error(), n) - m0(Loss::squared_error(), n) ==
          doctest::Approx(gap).epsilon(1e-12));
  }
}

TEST_CASE("eta") {
  Params p{0.0, 1.5, 2.0};
  CHECK(p.eta(4) == doctest::Approx(1.5));
}

TEST_CASE("column and csv readers") {
  std::istringstream col("# header comment\n1.5\n\n  -2 # trailing\n3e2\n");
  const auto values = read_column(col, "col.txt");
  REQUIRE(values.size() == 3);
  CHECK(values[2] == 300.0);

  std::istringstream bad("1\nabc\n");
  try {
    read_column(bad, "bad.txt");
    FAIL("expected InputError");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("bad.txt:2") != std::string::npos);
  }

  std::istringstream csv("sample1,sample2\n1,2\n3,4\n");
  const TwoSampleData d = read_two_column_csv(csv, "d.csv");
  CHECK(d.sample1 == std::vector<double>{1, 3});
  CHECK(d.sample2 == std::vector<double>{2, 4});

  std::istringstream no_header("1,2\n");
  CHECK_THROWS_AS(read_two_column_csv(no_header, "x.csv"), InputError);
  std::istringstream three("sample1,sample2\n1,2,3\n");
  CHECK_THROWS_AS(read_two_column_csv(three, "x.csv"), InputError);
}

#include <doctest.h>

#include <cmath>

#include "jorbit/numerics.hpp"

using namespace jorbit;

TEST_CASE("rank with tolerance") {
  Mat m(3, 3);
  m << 1, 2, 3, 2, 4, 6, 0, 1, 1;
  CHECK(rankWithTolerance(m, 1e-10) == 2);
  CHECK(rankWithTolerance(Mat::Zero(3, 3), 1e-10) == 0);
  CHECK(rankWithTolerance(Mat::Identity(4, 4), 1e-10) == 4);
}

TEST_CASE("span and null space bases") {
  Mat m(3, 2);
  m << 1, 1, 0, 0, 1, 1;
  Mat span = columnSpanBasis(m, 1e-10);
  CHECK(span.cols() == 1);
  CHECK((span.transpose() * span - Mat::Identity(1, 1)).norm() ==
        doctest::Approx(0.0).epsilon(1e-12));

  Mat null = nullSpaceBasis(m, 1e-10);
  CHECK(null.cols() == 1);
  CHECK((m * null).norm() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("matrix exponential closed forms") {
  const double t = 0.7;
  Mat rot(2, 2);
  rot << 0, -t, t, 0;
  Mat e = matrixExponential(rot);
  CHECK(e(0, 0) == doctest::Approx(std::cos(t)).epsilon(1e-12));
  CHECK(e(1, 0) == doctest::Approx(std::sin(t)).epsilon(1e-12));

  Mat nil(2, 2);
  nil << 0, 1, 0, 0;
  Mat en = matrixExponential(nil);
  CHECK(en(0, 1) == doctest::Approx(1.0));
  CHECK(en(0, 0) == doctest::Approx(1.0));

  Mat d = Mat::Zero(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = -1.0;
  Mat ed = matrixExponential(d);
  CHECK(ed(0, 0) == doctest::Approx(std::exp(3.0)).epsilon(1e-12));
  CHECK(ed(1, 1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK(ed(0, 1) == doctest::Approx(0.0));

  Mat big = Mat::Zero(2, 2);
  big(0, 1) = 40.0;
  big(1, 0) = -40.0;
  Mat eb = matrixExponential(big);
  CHECK(eb(0, 0) == doctest::Approx(std::cos(40.0)).epsilon(1e-9));
}

TEST_CASE("real polynomial roots") {
  // t^2 - 3 t + 2
  auto roots = realPolynomialRoots({2.0, -3.0}, 1e-8);
  REQUIRE(roots.size() == 2);
  std::sort(roots.begin(), roots.end());
  CHECK(roots[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(roots[1] == doctest::Approx(2.0).epsilon(1e-12));

  // (t - 1)^3: the companion matrix splits a triple root into a tight
  // cluster with small imaginary parts, so the tolerance must cover it
  auto triple = realPolynomialRoots({-1.0, 3.0, -3.0}, 1e-3);
  REQUIRE(triple.size() == 3);
  for (double r : triple) CHECK(r == doctest::Approx(1.0).epsilon(1e-3));

  // t^2 + 1 has no real roots
  CHECK_THROWS_AS(realPolynomialRoots({1.0, 0.0}, 1e-8), NumericalError);
}

TEST_CASE("rng streams are deterministic and independent") {
  RngStream a(42, 3);
  RngStream b(42, 3);
  RngStream c(42, 4);
  bool differs = false;
  for (int i = 0; i < 16; ++i) {
    const double x = a.gaussian();
    CHECK(x == b.gaussian());
    if (x != c.gaussian()) differs = true;
  }
  CHECK(differs);

  RngStream u(7, 0);
  for (int i = 0; i < 100; ++i) {
    const double x = u.uniform(-2.0, 5.0);
    CHECK(x >= -2.0);
    CHECK(x <= 5.0);
  }
  RngStream n(7, 1);
  for (int i = 0; i < 100; ++i) CHECK(n.integer(10) < 10);
  CHECK(n.gaussianVec(6).size() == 6);
}

TEST_CASE("splitmix64 scrambles") {
  CHECK(splitmix64(0) != 0);
  CHECK(splitmix64(1) != splitmix64(2));
  CHECK(splitmix64(7) == splitmix64(7));
}

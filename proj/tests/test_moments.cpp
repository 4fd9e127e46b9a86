#include <doctest.h>

#include <cmath>
#include <vector>

#include "bandcov/errors.hpp"
#include "bandcov/moments.hpp"

using namespace bandcov;

TEST_CASE("degree factors: first values") {
  CHECK(degree_factor(1) == BigRational(1));
  CHECK(degree_factor(2) == BigRational(2));
  CHECK(degree_factor(3) == BigRational(3));
  CHECK(degree_factor(4) == BigRational(16, 3));
  CHECK(degree_factor(5) == BigRational(115, 12));
  CHECK_THROWS_AS(degree_factor(0), std::invalid_argument);
}

TEST_CASE("degree factors stay below the Catalan-style bound") {
  BigRational pow2 = 1;
  for (int D = 1; D <= 12; ++D) {
    CHECK(degree_factor(D) <= pow2);
    if (D >= 3) CHECK(degree_factor(D) < pow2);
    pow2 *= 2;
  }
}

TEST_CASE("degree factor is the composition-count leading coefficient") {
  for (int D = 2; D <= 5; ++D) {
    double prev = 1e300;
    for (long long d : {100, 400, 1600}) {
      BigRational ratio(count_restricted_compositions(D * d, D, 2 * d));
      for (int t = 0; t < D - 1; ++t) ratio /= d;
      double rel = std::abs(static_cast<double>(ratio / degree_factor(D)) - 1.0);
      CHECK(rel < prev);  // converges monotonically on this grid
      prev = rel;
    }
    CHECK(prev < 0.02);
  }
}

TEST_CASE("limit moment polynomials, low orders") {
  MomentPolynomial m1 = limit_moment_polynomial(1);
  REQUIRE(m1.coeffs.size() == 1);
  CHECK(m1.coeffs[0] == 1);

  MomentPolynomial m2 = limit_moment_polynomial(2);
  REQUIRE(m2.coeffs.size() == 2);
  CHECK(m2.coeffs[0] == 1);
  CHECK(m2.coeffs[1] == 2);

  MomentPolynomial m3 = limit_moment_polynomial(3);
  REQUIRE(m3.coeffs.size() == 3);
  CHECK(m3.coeffs[0] == 1);
  CHECK(m3.coeffs[1] == 6);
  CHECK(m3.coeffs[2] == 3);

  // l = 4, r = 2: six trees, four with sample-degree profile {3,1} and two
  // with {2,2}, so a_2 = 4*c3*c1 + 2*c2^2 = 12 + 8 = 20.
  MomentPolynomial m4 = limit_moment_polynomial(4);
  REQUIRE(m4.coeffs.size() == 4);
  CHECK(m4.coeffs[0] == 1);
  CHECK(m4.coeffs[1] == 12);
  CHECK(m4.coeffs[2] == 20);
  CHECK(m4.coeffs[3] == BigRational(16, 3));

  CHECK(m2.at(BigRational(1, 2)) == BigRational(2));
  CHECK(m3.at(BigRational(1, 2)) == BigRational(19, 4));
  CHECK(m3.at(0.5) == doctest::Approx(4.75));
}

TEST_CASE("moment coefficient structure") {
  for (int l = 1; l <= 8; ++l) {
    MomentPolynomial poly = limit_moment_polynomial(l);
    CHECK(poly.coeffs[0] == 1);  // only the all-leaves tree has r = 0
    if (l >= 2) CHECK(poly.coeffs[1] == l * (l - 1));
    CHECK(poly.coeffs[static_cast<size_t>(l - 1)] == degree_factor(l));
    // coefficient-wise domination by the Catalan expansion in 2*gamma
    BigRational pow2 = 1;
    for (int r = 0; r < l; ++r) {
      CHECK(poly.coeffs[static_cast<size_t>(r)] <= BigRational(narayana_count(l, r)) * pow2);
      pow2 *= 2;
    }
  }
}

TEST_CASE("moments dominated by Marchenko-Pastur at doubled ratio") {
  for (int l = 1; l <= 8; ++l) {
    MomentPolynomial poly = limit_moment_polynomial(l);
    for (BigRational g : {BigRational(1, 20), BigRational(1, 10), BigRational(1, 2),
                          BigRational(1), BigRational(3)}) {
      CHECK(poly.at(g) <= mp_moment(l, 2 * g));
    }
  }
}

TEST_CASE("leading census sizes") {
  CHECK(banded_class_size_leading(100, 7, 4, {1}, 0) == 700);
  CHECK(banded_class_size_leading(100, 7, 4, {1, 1}, 0) == 100 * 49);
  for (long long d = 2; d <= 10; ++d)
    CHECK(banded_class_size_leading(1000, 5, d, {2}, 1) == 1000 * 5 * (2 * d - 1));
  // l = 3 path: F(3d, 3, 2d) sample-vertex factor
  CHECK(banded_class_size_leading(1000, 5, 3, {3}, 2) ==
        BigInt(1000) * 5 * count_restricted_compositions(9, 3, 6));

  CHECK_THROWS_AS(banded_class_size_leading(1000, 5, 1, {2}, 1), RegimeViolation);  // d < l
  CHECK_THROWS_AS(banded_class_size_leading(16, 5, 4, {2}, 1), RegimeViolation);    // p <= 2ld
  CHECK_THROWS_AS(banded_class_size_leading(1000, 5, 4, {2}, 0), std::invalid_argument);
}

TEST_CASE("Marchenko-Pastur moments") {
  for (BigRational y : {BigRational(1, 10), BigRational(1, 2), BigRational(2)}) {
    CHECK(mp_moment(1, y) == 1);
    CHECK(mp_moment(2, y) == 1 + y);
  }
  CHECK(mp_moment(3, 1) == 5);   // Catalan number at y = 1
  CHECK(mp_moment(6, 1) == 132);
}

TEST_CASE("support bound") {
  CHECK(support_bound(0.0) == doctest::Approx(1.0));
  CHECK(support_bound(1.0) == doctest::Approx(4.0));
  CHECK(support_bound(0.2) == doctest::Approx(2.0944271909999159));
  CHECK(support_bound(0.5) < support_bound(0.6));
  CHECK_THROWS_AS(support_bound(-0.1), std::invalid_argument);
}

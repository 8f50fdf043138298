#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "growlsm/core_math.hpp"

using namespace growlsm;

TEST_CASE("binomial basics") {
  CHECK(binomial(4, 2) == 6);
  CHECK(binomial(3, 3) == 1);
  CHECK(binomial(8, 3) == 56);
  CHECK(binomial(5, 0) == 1);
  CHECK(binomial(2, 5) == 0);
  CHECK_THROWS_AS(binomial(-1, 0), std::invalid_argument);
  CHECK_THROWS_AS(binomial(3, -2), std::invalid_argument);
}

TEST_CASE("pascal identity holds for every table cell") {
  BinomialTable table(60, 12);
  for (int m = 1; m <= 60; ++m) {
    for (int l = 1; l <= 12; ++l) {
      CHECK(table.at(m, l) == table.at(m - 1, l) + table.at(m - 1, l - 1));
      CHECK(table.at(m, l) == binomial(m, l));
    }
  }
  for (int m = 0; m <= 60; ++m) CHECK(table.at(m, 0) == 1);
}

TEST_CASE("binomial overflow is a hard error") {
  CHECK_THROWS_AS(binomial(300, 150), OverflowError);
  // Large but representable values stay exact.
  CHECK(binomial(128, 3) == 341376);
}

TEST_CASE("smallest_k") {
  CHECK(smallest_k(6, 2) == 3);   // C(4,2) = 6
  CHECK(smallest_k(20, 3) == 4);  // C(5,3)=10 < 20 <= C(6,3)=20
  for (int l = 1; l <= 8; ++l) CHECK(smallest_k(1, l) == 1);
}

TEST_CASE("smallest_k inverts the binomial for exact budgets") {
  for (int l = 1; l <= 6; ++l) {
    for (int k = 1; k <= 30; ++k) {
      CHECK(smallest_k(binomial(k + l - 1, l), l) == k);
    }
  }
}

TEST_CASE("find_m") {
  CHECK(find_m(6, 2) == 3);   // C(3,2)=3 <= 6 <= C(4,2)=6
  CHECK(find_m(10, 3) == 4);  // C(4,3)=4 <= 10 <= C(5,3)=10
  for (int l = 1; l <= 8; ++l) CHECK(find_m(1, l) == l - 1);
}

TEST_CASE("find_m sandwich holds and smaller candidate wins at boundaries") {
  for (int l = 1; l <= 6; ++l) {
    for (long n = 1; n <= 500; ++n) {
      int m = find_m(n, l);
      CHECK(binomial(m, l) <= n);
      CHECK(n <= binomial(m + 1, l));
      if (n == binomial(m + 1, l)) {
        // Boundary: m + 1 also satisfies the sandwich; we picked the smaller.
        CHECK(binomial(m + 1, l) <= n);
      }
    }
  }
}

namespace {
int128 closed_form_with_m(long n, int l, int m) {
  return checked_add(checked_mul(l, binomial(m, l + 1)),
                     checked_mul(m - l + 1, checked_sub(n, binomial(m, l))));
}
}  // namespace

TEST_CASE("both boundary m candidates give the same closed-form cost") {
  for (int l = 1; l <= 6; ++l) {
    for (long n = 1; n <= 500; ++n) {
      int m = find_m(n, l);
      if (n == binomial(m + 1, l)) {
        CHECK(closed_form_with_m(n, l, m) == closed_form_with_m(n, l, m + 1));
      }
    }
  }
}

TEST_CASE("rational arithmetic") {
  Rational a(1, 3), b(1, 6);
  CHECK(a + b == Rational(1, 2));
  CHECK(a - b == Rational(1, 6));
  CHECK(a * b == Rational(1, 18));
  CHECK(a / b == Rational(2, 1));
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(-1, -2) == Rational(1, 2));
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK_THROWS_AS(Rational(1, 0), std::invalid_argument);
  CHECK(Rational(14, 6).to_double() == doctest::Approx(14.0 / 6.0));
}

TEST_CASE("int128 printing") {
  CHECK(to_string((int128)0) == "0");
  CHECK(to_string((int128)-42) == "-42");
  CHECK(to_string(checked_mul((int128)1000000000000000000ll, 1000)) == "1000000000000000000000");
}

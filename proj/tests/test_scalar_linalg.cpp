#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "moprl/matrix.hpp"
#include "moprl/scalar.hpp"

using namespace moprl;

TEST_CASE("exact rational powers detect perfect roots") {
  CHECK(*exact_pow(Rational(1, 4), Rational(1, 2)) == Rational(1, 2));
  CHECK(*exact_pow(Rational(8, 27), Rational(1, 3)) == Rational(2, 3));
  CHECK(*exact_pow(Rational(1, 16), Rational(3, 4)) == Rational(1, 8));
  CHECK(*exact_pow(Rational(9), Rational(-1, 2)) == Rational(1, 3));
  CHECK(*exact_pow(Rational(-2, 3), Rational(3)) == Rational(-8, 27));
  CHECK(!exact_pow(Rational(2), Rational(1, 2)));
  CHECK(!exact_pow(Rational(1, 3), Rational(1, 2)));
  CHECK(*exact_pow(Rational(0), Rational(5, 2)) == 0);
  CHECK_THROWS_AS(scalar_pow(Rational(2), Rational(1, 2)), ExactValueUnavailable);
  CHECK_THROWS_AS(scalar_exp(Rational(1)), ExactValueUnavailable);
  CHECK(scalar_exp(Rational(0)) == 1);
}

TEST_CASE("big float powers and precision control") {
  set_float_precision_bits(128);
  const BigFloat e = scalar_exp(BigFloat(1));
  CHECK(abs_value(e - BigFloat("2.71828182845904523536028747135266249776")) < BigFloat(1e-36));
  CHECK(abs_value(scalar_pow(BigFloat(2), Rational(1, 2)) * scalar_pow(BigFloat(2), Rational(1, 2)) -
                  2) < BigFloat(1e-36));
  CHECK(ScalarTraits<BigFloat>::pivot_floor() == pow(BigFloat(2), -96));
}

TEST_CASE("matrix product, transpose, difference") {
  Matrix<Rational> a(2, 3);
  a(0, 0) = 1;
  a(0, 2) = Rational(1, 2);
  a(1, 1) = -3;
  auto i3 = Matrix<Rational>::identity(3);
  auto p = a * i3;
  CHECK(max_abs(p - a) == 0);
  auto t = a.transpose();
  CHECK(t.rows() == 3);
  CHECK(t(2, 0) == Rational(1, 2));
}

TEST_CASE("triangular inverses keep shape and match frozen values") {
  Matrix<Rational> l(2, 2);
  l(0, 0) = 1;
  l(1, 0) = Rational(-1, 2);
  l(1, 1) = 1;
  auto li = triangular_inverse(l);
  CHECK(li(1, 0) == Rational(1, 2));
  CHECK(li(0, 0) == 1);
  CHECK(li(0, 1) == 0);

  auto id = Matrix<Rational>::identity(4);
  CHECK(max_abs(triangular_inverse(id) - id) == 0);

  Matrix<Rational> u(2, 2);
  u(0, 0) = 1;
  u(0, 1) = Rational(1, 2);
  u(1, 1) = Rational(1, 12);
  auto ui = triangular_inverse(u);
  CHECK(ui(0, 0) == 1);
  CHECK(ui(0, 1) == -6);
  CHECK(ui(1, 1) == 12);
  CHECK(max_abs(u * ui - Matrix<Rational>::identity(2)) == 0);

  Matrix<Rational> bad(2, 2);
  bad(0, 1) = 1;
  bad(1, 0) = 1;
  CHECK_THROWS_AS(triangular_inverse(bad), std::invalid_argument);

  Matrix<Rational> zero_diag(2, 2);
  zero_diag(1, 0) = 1;
  CHECK_THROWS_AS(triangular_inverse(zero_diag), SingularSystem);
}

TEST_CASE("pivoted solve is exact on rationals and flags singular systems") {
  Matrix<Rational> a(3, 3);
  // rows of a Vandermonde at 1, 2, 3
  for (long i = 0; i < 3; ++i)
    for (long j = 0; j < 3; ++j) a(i, j) = exact_pow(Rational(i + 1), Rational(j)).value();
  // right-hand side for the polynomial 2 - x + x^2/3
  std::vector<Rational> b;
  for (long i = 0; i < 3; ++i)
    b.push_back(Rational(2) - Rational(i + 1) + Rational(i + 1) * Rational(i + 1) / 3);
  auto x = solve_linear(a, b);
  CHECK(x[0] == 2);
  CHECK(x[1] == -1);
  CHECK(x[2] == Rational(1, 3));

  Matrix<Rational> s(2, 2);
  s(0, 0) = 1;
  s(0, 1) = 2;
  s(1, 0) = 2;
  s(1, 1) = 4;
  CHECK_THROWS_AS(solve_linear(s, std::vector<Rational>{Rational(1), Rational(1)}),
                  SingularSystem);
}

TEST_CASE("rendering stays deterministic") {
  CHECK(exact_string(Rational(-3, 7)) == "-3/7");
  CHECK(exact_string(Rational(5)) == "5");
  CHECK(decimal_string(Rational(1, 2), 6) == "5.000000e-01");
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fixtures.hpp"
#include "moprl/polynomials.hpp"

using namespace moprl;
using namespace moprl_tests;

namespace {

template <class T>
struct Pipeline {
  MomentEngine<T> eng;
  FactorizationPair<T> fp;
  LinearFormEvaluator<T> ev;
  Pipeline(ProblemSetup<T> s, long N)
      : eng(std::move(s)), fp(gauss_borel(build_moment_matrix(eng, N))), ev(eng.setup(), fp) {}
};

}  // namespace

TEST_CASE("coefficients extracted from S match the hand factorization") {
  Pipeline<Rational> f1(hilbert<Rational>(), 8);
  CHECK(mop_coeffs(f1.fp, f1.eng.setup().comp1, 1, 1) ==
        std::vector<Rational>{Rational(-1, 2), 1});
  CHECK(mop_coeffs(f1.fp, f1.eng.setup().comp1, 0, 1) == std::vector<Rational>{1});

  Pipeline<Rational> f2(sqrt_mixed<Rational>(), 8);
  CHECK(mop_coeffs(f2.fp, f2.eng.setup().comp1, 1, 2) == std::vector<Rational>{1});
  // family 1 has picked up the constant -2/3: the form is sqrt(x) - 2/3
  CHECK(mop_coeffs(f2.fp, f2.eng.setup().comp1, 1, 1) == std::vector<Rational>{Rational(-2, 3)});
}

TEST_CASE("dual coefficients come from the columns of Sbar inverse") {
  Pipeline<Rational> f1(hilbert<Rational>(), 8);
  CHECK(dual_mop_coeffs(f1.fp, f1.eng.setup().comp2, 1, 1) ==
        std::vector<Rational>{-6, 12});
  CHECK(dual_mop_coeffs(f1.fp, f1.eng.setup().comp2, 0, 1) == std::vector<Rational>{1});

  // identity moment matrix: the dual at l is the bare monomial of slot l
  auto fp = gauss_borel(Matrix<Rational>::identity(6));
  Composition n({2, 1});
  for (long l = 0; l < 6; ++l) {
    auto c = dual_mop_coeffs(fp, n, l, family_of(n, l));
    CHECK(static_cast<long>(c.size()) == string_exponent(n, l) + 1);
    CHECK(c.back() == 1);
  }
}

TEST_CASE("linear form evaluation") {
  Pipeline<Rational> f1(hilbert<Rational>(), 8);
  CHECK(f1.ev.eval_Q(1, Rational(1, 2)) == 0);
  CHECK(f1.ev.eval_Q(0, Rational(9, 10)) == 1);
  CHECK(f1.ev.eval_Qbar(1, Rational(3, 4)) == 3);  // 12x - 6 at 3/4
  CHECK_THROWS_AS(f1.ev.eval_Q(8, Rational(1, 2)), WindowError);
}

TEST_CASE("bi-orthogonality matrix is the identity, by fresh integration") {
  Pipeline<Rational> f1(hilbert<Rational>(), 12);
  for (long l = 0; l < 12; ++l)
    for (long k = 0; k < 12; ++k)
      CHECK(check_biorthogonality(f1.eng, f1.ev, l, k) == (l == k ? 1 : 0));

  Pipeline<Rational> f2(sqrt_mixed<Rational>(), 12);
  for (long l = 0; l < 12; ++l)
    for (long k = 0; k < 12; ++k)
      CHECK(check_biorthogonality(f2.eng, f2.ev, l, k) == (l == k ? 1 : 0));

  Pipeline<Rational> f4(interleaved_powers<Rational>(), 14);
  for (long l = 0; l < 14; ++l)
    for (long k = 0; k < 14; ++k)
      CHECK(check_biorthogonality(f4.eng, f4.ev, l, k) == (l == k ? 1 : 0));
}

TEST_CASE("float bi-orthogonality residual tracks the window conditioning") {
  set_float_precision_bits(128);
  {
    Pipeline<BigFloat> f3(exp_pair<BigFloat>(), 10);
    BigFloat worst(0);
    for (long l = 0; l < 10; ++l)
      for (long k = 0; k < 10; ++k) {
        BigFloat v = check_biorthogonality(f3.eng, f3.ev, l, k) - (l == k ? 1 : 0);
        if (abs_value(v) > worst) worst = abs_value(v);
      }
    CHECK(worst < BigFloat(1e-20));
  }
  // N = 16 carries dual coefficients ~1e27, so 128 bits cannot certify
  // 1e-20; 256 bits can.
  set_float_precision_bits(256);
  {
    Pipeline<BigFloat> f3(exp_pair<BigFloat>(), 16);
    BigFloat worst(0);
    for (long l = 0; l < 16; ++l)
      for (long k = 0; k < 16; ++k) {
        BigFloat v = check_biorthogonality(f3.eng, f3.ev, l, k) - (l == k ? 1 : 0);
        if (abs_value(v) > worst) worst = abs_value(v);
      }
    CHECK(worst < BigFloat(1e-20));
  }
  set_float_precision_bits(128);
}

TEST_CASE("orthogonality ranges annihilate exactly") {
  Pipeline<Rational> f1(hilbert<Rational>(), 10);
  CHECK(check_orthogonality(f1.eng, f1.ev, 0) == 0);  // vacuous
  CHECK(check_orthogonality(f1.eng, f1.ev, 1) == 0);  // single condition
  Pipeline<Rational> f2(sqrt_mixed<Rational>(), 10);
  for (long l = 0; l < 10; ++l) CHECK(check_orthogonality(f2.eng, f2.ev, l) == 0);
  Pipeline<Rational> f4(interleaved_powers<Rational>(), 12);
  for (long l = 0; l < 12; ++l) CHECK(check_orthogonality(f4.eng, f4.ev, l) == 0);
}

TEST_CASE("normalization identities of the factorization forms") {
  // the unit diagonal of S^{-1} is the type I normalization of the duals:
  // \int xi_1^(l) Qbar^(l) dmu = 1
  Pipeline<Rational> f2(sqrt_mixed<Rational>(), 8);
  const ProblemSetup<Rational>& s = f2.eng.setup();
  for (long l = 0; l < 8; ++l) {
    const int a = family_of(s.comp1, l);
    const long e = string_exponent(s.comp1, l);
    Rational r(0);
    for (int b = 1; b <= s.comp2.family_count(); ++b) {
      const auto& cb = f2.ev.dual_coeffs(l, b);
      for (std::size_t f = 0; f < cb.size(); ++f)
        if (cb[f] != 0) r += cb[f] * f2.eng.cross_moment(a, b, static_cast<long>(f) + e);
    }
    CHECK(r == 1);
  }
}

TEST_CASE("direct solver reproduces the factorization families (staircase)") {
  Pipeline<Rational> f1(hilbert<Rational>(), 16);
  auto sol = solve_mixed_direct(f1.eng, multi_index(f1.eng.setup().comp1, 1),
                                multi_index(f1.eng.setup().comp2, 0), Normalization::type2(1),
                                Orientation::Forms);
  CHECK(sol.coeffs[0] == std::vector<Rational>{Rational(-1, 2), 1});

  auto trivial = solve_mixed_direct(f1.eng, multi_index(f1.eng.setup().comp1, 0),
                                    multi_index(f1.eng.setup().comp2, -1),
                                    Normalization::type2(1), Orientation::Forms);
  CHECK(trivial.coeffs[0] == std::vector<Rational>{1});

  for (int which = 0; which < 2; ++which) {
    Pipeline<Rational> p(which == 0 ? hilbert<Rational>() : sqrt_mixed<Rational>(), 16);
    const ProblemSetup<Rational>& s = p.eng.setup();
    for (long l = 0; l <= 15; ++l) {
      const int a1l = family_of(s.comp1, l);
      auto forms = solve_mixed_direct(p.eng, multi_index(s.comp1, l), multi_index(s.comp2, l - 1),
                                      Normalization::type2(a1l), Orientation::Forms);
      for (int a = 1; a <= s.comp1.family_count(); ++a) {
        auto expect = mop_coeffs(p.fp, s.comp1, l, a);
        auto got = forms.coeffs[static_cast<std::size_t>(a - 1)];
        while (got.size() > expect.size()) {
          CHECK(got.back() == 0);
          got.pop_back();
        }
        CHECK(got == expect);
      }
      auto duals = solve_mixed_direct(p.eng, multi_index(s.comp2, l), multi_index(s.comp1, l - 1),
                                      Normalization::type1(a1l), Orientation::Duals);
      for (int b = 1; b <= s.comp2.family_count(); ++b) {
        auto expect = dual_mop_coeffs(p.fp, s.comp2, l, b);
        auto got = duals.coeffs[static_cast<std::size_t>(b - 1)];
        while (got.size() > expect.size()) {
          CHECK(got.back() == 0);
          got.pop_back();
        }
        CHECK(got == expect);
      }
      CHECK(duals.normalization_power == string_exponent(s.comp1, l));
    }
  }
}

TEST_CASE("type II output is monic; type I normalizing moment is one") {
  Pipeline<Rational> f2(sqrt_mixed<Rational>(), 12);
  const ProblemSetup<Rational>& s = f2.eng.setup();
  auto sol = solve_mixed_direct(f2.eng, multi_index(s.comp1, 5), multi_index(s.comp2, 4),
                                Normalization::type2(family_of(s.comp1, 5)), Orientation::Forms);
  CHECK(sol.coeffs[static_cast<std::size_t>(family_of(s.comp1, 5) - 1)].back() == 1);

  auto dual = solve_mixed_direct(f2.eng, multi_index(s.comp2, 5), multi_index(s.comp1, 4),
                                 Normalization::type1(family_of(s.comp1, 5)),
                                 Orientation::Duals);
  // re-integrate the normalizing moment of the solved form
  Rational r(0);
  const int a = family_of(s.comp1, 5);
  for (int b = 1; b <= s.comp2.family_count(); ++b) {
    const auto& cb = dual.coeffs[static_cast<std::size_t>(b - 1)];
    for (std::size_t f = 0; f < cb.size(); ++f)
      if (cb[f] != 0)
        r += cb[f] * f2.eng.cross_moment(a, b, static_cast<long>(f) + dual.normalization_power);
  }
  CHECK(r == 1);
}

TEST_CASE("solver error taxonomy") {
  // duplicated weights make the orthogonality nullform vanish identically,
  // so every type I normalizing moment is zero
  MomentEngine<Rational> dup(duplicate_string<Rational>());
  MultiIndex sizes{{2, 1}},
      conds{{2}};
  CHECK_THROWS_AS(
      solve_mixed_direct(dup, sizes, conds, Normalization::type1(1), Orientation::Forms),
      NormalizationImpossible);

  // duplicated condition-side weights collapse two rows: rank deficiency
  ProblemSetup<Rational> dupcond(MeasureSpec<Rational>::interval(0, 1),
                                 {Weight<Rational>::monomial(0)},
                                 {Weight<Rational>::monomial(0), Weight<Rational>::monomial(0)},
                                 Composition({1}), Composition({1, 1}));
  MomentEngine<Rational> engdc(dupcond);
  CHECK_THROWS_AS(solve_mixed_direct(engdc, MultiIndex{{3}}, MultiIndex{{1, 1}},
                                     Normalization::type1(1), Orientation::Forms),
                  SingularSystem);
  CHECK_THROWS_AS(solve_mixed_direct(engdc, MultiIndex{{3}}, MultiIndex{{1, 1}},
                                     Normalization::type2(1), Orientation::Forms),
                  SingularSystem);

  // a vanishing type I normalizing moment on a symmetric interval: the
  // orthogonality system has the odd nullform x, and the family-2
  // normalizing moment \int x * x^2 * x^0 dx over [-1,1] vanishes
  ProblemSetup<Rational> sym(MeasureSpec<Rational>::interval(-1, 1),
                             {Weight<Rational>::monomial(0)},
                             {Weight<Rational>::monomial(0), Weight<Rational>::monomial(2)},
                             Composition({1}), Composition({1, 1}));
  MomentEngine<Rational> eng(sym);
  MultiIndex s2{{2}}, c2{{1, 0}};
  CHECK_THROWS_AS(
      solve_mixed_direct(eng, s2, c2, Normalization::type1(2), Orientation::Forms),
      NormalizationImpossible);

  CHECK_THROWS_AS(solve_mixed_direct(eng, MultiIndex{{2}}, MultiIndex{{2, 0}},
                                     Normalization::type2(1), Orientation::Forms),
                  DomainError);  // size/condition totals must differ by one
}

TEST_CASE("second kind series, expansion, and integral agree") {
  set_float_precision_bits(128);
  SUBCASE("series equals the independent moment expansion, exactly") {
    Pipeline<Rational> f2(sqrt_mixed<Rational>(), 12);
    for (long l : {0L, 1L, 3L}) {
      auto sv = second_kind_series(f2.eng, f2.fp, f2.ev, l, 2, 1, Rational(10));
      const long terms = multi_index(f2.eng.setup().comp2, 11)[1];
      CHECK(sv.value == second_kind_expansion(f2.eng, f2.ev, l, 2, 1, Rational(10), terms));
      CHECK(sv.tail_bound > 0);
      // dual string
      const int a = 1;
      auto dv = second_kind_series(f2.eng, f2.fp, f2.ev, l, 1, a, Rational(-10));
      const long dterms = multi_index(f2.eng.setup().comp1, 11)[a];
      CHECK(dv.value == second_kind_expansion(f2.eng, f2.ev, l, 1, a, Rational(-10), dterms));
    }
  }
  SUBCASE("leading term of the constant form is g00 / z") {
    MomentEngine<Rational> eng(hilbert<Rational>());
    auto fp = gauss_borel(build_moment_matrix(eng, 1));
    LinearFormEvaluator<Rational> ev(eng.setup(), fp);
    auto sv = second_kind_series(eng, fp, ev, 0, 2, 1, Rational(10));
    CHECK(sv.value == Rational(1, 10));
  }
  SUBCASE("Cauchy integral of the constant form has the closed log form") {
    Pipeline<BigFloat> f1(hilbert<BigFloat>(), 20);
    const BigFloat z(10);
    const BigFloat expect = log(z / (z - 1));
    auto sv = second_kind_series(f1.eng, f1.fp, f1.ev, 0, 2, 1, z);
    CHECK(abs_value(sv.value - expect) < BigFloat(1e-12));
    CHECK(abs_value(sv.value - expect) <= sv.tail_bound);
    const BigFloat integral = second_kind_integral(f1.eng, f1.ev, 0, 2, 1, z);
    CHECK(abs_value(integral - expect) < BigFloat(1e-25));
    CHECK(abs_value(sv.value - integral) <= sv.tail_bound);
  }
  SUBCASE("series vs integral at l = 1 within the reported tail") {
    Pipeline<BigFloat> f1(hilbert<BigFloat>(), 20);
    for (const BigFloat z : {BigFloat(10), BigFloat(-10)}) {
      auto sv = second_kind_series(f1.eng, f1.fp, f1.ev, 1, 2, 1, z);
      const BigFloat integral = second_kind_integral(f1.eng, f1.ev, 1, 2, 1, z);
      CHECK(abs_value(sv.value - integral) <= sv.tail_bound + BigFloat(1e-30));
      CHECK(abs_value(sv.value - integral) < BigFloat(1e-8));
    }
  }
  SUBCASE("domain guards") {
    Pipeline<BigFloat> f1(hilbert<BigFloat>(), 6);
    CHECK_THROWS_AS(second_kind_series(f1.eng, f1.fp, f1.ev, 0, 2, 1, BigFloat("0.5")),
                    DomainError);
    CHECK_THROWS_AS(second_kind_integral(f1.eng, f1.ev, 0, 2, 1, BigFloat("0.5")), DomainError);
  }
}

TEST_CASE("degenerate families contribute the zero polynomial") {
  Pipeline<Rational> f4(interleaved_powers<Rational>(), 10);
  // at l = 5 (inside block 0 of (4,3,2)) family 3 has no slot yet
  CHECK(mop_coeffs(f4.fp, f4.eng.setup().comp1, 5, 3).empty());
  // and the form evaluates without touching the family-3 weight
  CHECK(f4.ev.eval_Q(5, Rational(1, 16)) != 0);
}

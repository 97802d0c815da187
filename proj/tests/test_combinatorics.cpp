#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "moprl/composition.hpp"
#include "oracles.hpp"

using namespace moprl;
using moprl_tests::enumerate_string;

namespace {
const std::vector<std::vector<int>> kSweep = {{1}, {2}, {1, 1}, {3, 2}, {4, 3, 2}, {2, 1, 1, 3}};
}

TEST_CASE("decompose matches the enumeration oracle and frozen examples") {
  Composition n({4, 3, 2});
  CHECK(decompose(n, 12) == BlockPosition{1, 1, 3});
  CHECK(decompose(n, 7) == BlockPosition{0, 3, 0});
  CHECK(decompose(Composition({1}), 5) == BlockPosition{5, 1, 0});

  for (const auto& parts : kSweep) {
    Composition c(parts);
    const long limit = 10 * c.total();
    auto s = enumerate_string(parts, limit);
    for (long l = 0; l < limit; ++l) {
      CHECK(family_of(c, l) == s[static_cast<std::size_t>(l)].family);
      CHECK(string_exponent(c, l) == s[static_cast<std::size_t>(l)].exponent);
      CHECK(compose(c, decompose(c, l)) == l);  // round trip
    }
  }
}

TEST_CASE("compose rejects offsets outside the family part") {
  Composition n({4, 3, 2});
  CHECK(compose(n, {1, 1, 3}) == 12);
  CHECK(compose(n, {0, 3, 0}) == 7);
  CHECK(compose(Composition({1}), {5, 1, 0}) == 5);
  CHECK_THROWS_AS(compose(n, {0, 2, 3}), std::invalid_argument);
  CHECK_THROWS_AS(compose(n, {0, 4, 0}), std::invalid_argument);
}

TEST_CASE("cyclic_reduce wraps into 1..p") {
  CHECK(cyclic_reduce(3, 0) == 3);
  CHECK(cyclic_reduce(3, 4) == 1);
  CHECK(cyclic_reduce(2, 2) == 2);
  for (int p = 1; p <= 5; ++p)
    for (long m = -7; m <= 13; ++m) {
      const int r = cyclic_reduce(p, m);
      CHECK(r >= 1);
      CHECK(r <= p);
      CHECK(((m - r) % p + p) % p == 0);
    }
}

TEST_CASE("nu_degree is the scan maximum and matches the string identity") {
  Composition n({4, 3, 2});
  CHECK(nu_degree(n, 12, 1) == 7);
  CHECK(nu_degree(n, 12, 2) == 2);
  CHECK(nu_degree(n, 12, 3) == 1);

  for (const auto& parts : kSweep) {
    Composition c(parts);
    const long limit = 10 * c.total();
    auto s = enumerate_string(parts, limit);
    for (long l = 0; l < limit; ++l) {
      for (int a = 1; a <= c.family_count(); ++a) {
        const long expect = moprl_tests::scan_nu_degree(s, l, a);
        auto got = nu_degree(c, l, a);
        if (expect < 0)
          CHECK(!got);
        else
          CHECK(got == expect);
      }
      // the entry itself is x^(nu_degree of its own family)
      CHECK(nu_degree(c, l, family_of(c, l)) == string_exponent(c, l));
    }
  }
}

TEST_CASE("multi_index counts entries per family and totals l+1") {
  Composition n({4, 3, 2});
  CHECK(multi_index(n, 12).counts == std::vector<long>{8, 3, 2});
  CHECK(multi_index(n, -1).counts == std::vector<long>{0, 0, 0});
  // counting oracle: blocks of (3,2) give families 1,1,1,2,2,... so
  // indices 0..11 hold eight family-1 and four family-2 entries
  CHECK(multi_index(Composition({3, 2}), 11).counts == std::vector<long>{8, 4});

  for (const auto& parts : kSweep) {
    Composition c(parts);
    const long limit = 10 * c.total();
    auto s = enumerate_string(parts, limit);
    for (long l = -1; l < limit; ++l) {
      const MultiIndex m = multi_index(c, l);
      CHECK(m.total() == l + 1);
      for (int a = 1; a <= c.family_count(); ++a)
        CHECK(m[a] == (l < 0 ? 0 : moprl_tests::scan_count(s, l, a)));
    }
  }
}

TEST_CASE("associated integers agree with backward/forward scans") {
  Composition n({4, 3, 2});
  CHECK(assoc_minus(n, 12, 2) == 6);
  CHECK(assoc_minus(n, 12, 1) == 12);
  CHECK(!assoc_minus(n, 5, 3));
  CHECK(assoc_plus(n, 12, 2) == 13);
  CHECK(assoc_plus(n, 12, 3) == 16);
  CHECK(assoc_plus(n, 12, family_of(n, 12)) == 12);

  for (const auto& parts : kSweep) {
    Composition c(parts);
    const long limit = 10 * c.total();
    auto s = enumerate_string(parts, limit + 2 * c.total());
    for (long l = 0; l < limit; ++l)
      for (int a = 1; a <= c.family_count(); ++a) {
        const long down = moprl_tests::scan_assoc_minus(s, l, a);
        auto got = assoc_minus(c, l, a);
        if (down < 0)
          CHECK(!got);
        else
          CHECK(got == down);
        const long up = moprl_tests::scan_assoc_plus(s, l, a);
        CHECK(assoc_plus(c, l, a) == up);
        CHECK(family_of(c, assoc_plus(c, l, a)) == a);
        CHECK(assoc_plus(c, l, a) >= l);
      }
  }
}

TEST_CASE("shift matrix has one slot per row and multiplies the string by x") {
  SUBCASE("classical composition gives the superdiagonal") {
    const ShiftMatrix s = shift_matrix(Composition({1}), 4);
    for (long l = 0; l < 3; ++l) CHECK(s.target[static_cast<std::size_t>(l)] == l + 1);
    CHECK(s.target[3] == -1);
  }
  SUBCASE("frozen slots for the three-family composition") {
    const ShiftMatrix s = shift_matrix(Composition({4, 3, 2}), 10);
    CHECK(s.entry(3, 9));
    CHECK(s.entry(0, 1));
  }
  SUBCASE("shift action on the monomial string") {
    for (const auto& parts : kSweep) {
      Composition c(parts);
      const long N = 6 * c.total();
      const ShiftMatrix s = shift_matrix(c, N);
      auto str = enumerate_string(parts, N + c.total());
      for (long l = 0; l < N; ++l) {
        const long t = moprl_tests::scan_assoc_plus(str, l + 1, str[static_cast<std::size_t>(l)].family);
        if (t < N) {
          CHECK(s.target[static_cast<std::size_t>(l)] == t);
          // row l of the shifted string is x * entry l
          CHECK(str[static_cast<std::size_t>(t)].family == str[static_cast<std::size_t>(l)].family);
          CHECK(str[static_cast<std::size_t>(t)].exponent ==
                str[static_cast<std::size_t>(l)].exponent + 1);
        } else {
          CHECK(s.target[static_cast<std::size_t>(l)] == -1);
        }
      }
    }
  }
}

TEST_CASE("composition rejects empty and nonpositive parts") {
  CHECK_THROWS_AS(Composition({}), std::invalid_argument);
  CHECK_THROWS_AS(Composition({2, 0}), std::invalid_argument);
}

#ifndef MOPRL_TESTS_FIXTURES_HPP
#define MOPRL_TESTS_FIXTURES_HPP

// Shared problem setups. All live on [0,1] with the Lebesgue density
// unless noted. The power-weight ones have exact rational moments; the
// exponential ones are float-backend only.

#include "moprl/measures.hpp"

namespace moprl_tests {

using moprl::Composition;
using moprl::MeasureSpec;
using moprl::ProblemSetup;
using moprl::Rational;
using moprl::Weight;

// Classical single-family setup: g is the Hilbert matrix, the forms are
// monic shifted Legendre polynomials.
template <class T>
ProblemSetup<T> hilbert() {
  return ProblemSetup<T>(MeasureSpec<T>::interval(0, 1), {Weight<T>::monomial(0)},
                         {Weight<T>::monomial(0)}, Composition({1}), Composition({1}));
}

// Two interleaved first-system families (1, sqrt(x)) against a plain
// second system; moments stay rational.
template <class T>
ProblemSetup<T> sqrt_mixed() {
  return ProblemSetup<T>(MeasureSpec<T>::interval(0, 1),
                         {Weight<T>::monomial(0), Weight<T>::monomial(Rational(1, 2))},
                         {Weight<T>::monomial(0)}, Composition({1, 1}), Composition({1}));
}

// Exponential pair (1, e^x); quadrature moments, float backend only.
template <class T>
ProblemSetup<T> exp_pair() {
  return ProblemSetup<T>(MeasureSpec<T>::interval(0, 1),
                         {Weight<T>::monomial(0), Weight<T>::exponential(1)},
                         {Weight<T>::monomial(0)}, Composition({1, 1}), Composition({1}));
}

// Compositions (4,3,2) / (3,2) with quarter-power weights. The monomial
// exponent ladders of the two strings are pairwise distinct, so the moment
// matrix is Cauchy-like and every leading minor is automatically nonzero;
// everything stays rational.
template <class T>
ProblemSetup<T> interleaved_powers() {
  return ProblemSetup<T>(
      MeasureSpec<T>::interval(0, 1),
      {Weight<T>::monomial(0), Weight<T>::monomial(Rational(1, 2)),
       Weight<T>::monomial(Rational(1, 4))},
      {Weight<T>::monomial(0), Weight<T>::monomial(Rational(1, 2))}, Composition({4, 3, 2}),
      Composition({3, 2}));
}

// Same compositions over exponential weights with pairwise distinct rates.
template <class T>
ProblemSetup<T> interleaved_exp() {
  return ProblemSetup<T>(
      MeasureSpec<T>::interval(0, 1),
      {Weight<T>::monomial(0), Weight<T>::exponential(1), Weight<T>::exponential(-1)},
      {Weight<T>::monomial(0), Weight<T>::exponential(Rational(1, 2))}, Composition({4, 3, 2}),
      Composition({3, 2}));
}

// Degenerate on purpose: weights (1, x) over parts (1,1) duplicate string
// entries 1 and 2, so elimination must stop with SingularMinor(2).
template <class T>
ProblemSetup<T> duplicate_string() {
  return ProblemSetup<T>(MeasureSpec<T>::interval(0, 1),
                         {Weight<T>::monomial(0), Weight<T>::monomial(1)},
                         {Weight<T>::monomial(0)}, Composition({1, 1}), Composition({1}));
}

}  // namespace moprl_tests

#endif

#ifndef MOPRL_CHRISTOFFEL_DARBOUX_HPP
#define MOPRL_CHRISTOFFEL_DARBOUX_HPP

#include <algorithm>
#include <vector>

#include "moprl/jacobi.hpp"

namespace moprl {

// K^[l](x, y) = sum_{k < l} Q^(k)(y) Qbar^(k)(x), by direct summation.
template <class T>
T cd_kernel_direct(const LinearFormEvaluator<T>& ev, long l, const T& x, const T& y) {
  T r(0);
  for (long k = 0; k < l; ++k) r += ev.eval_Q(k, y) * ev.eval_Qbar(k, x);
  return r;
}

// Index rectangles picking the off-block entries of J that survive the
// block splitting of the eigenvalue relations at scale l. Pairs are
// (i, j) with i labelling Q and j labelling Qbar; J is read at (j, i).
struct IndexRange {
  long lo = 0, hi = 0;  // inclusive
  bool contains(long v) const { return lo <= v && v <= hi; }
};

struct SigmaSets {
  IndexRange q1, qbar1;  // sigma_1: i >= l, j < l (upper-right block of J)
  IndexRange q2, qbar2;  // sigma_2: i < l, j >= l (lower-left block of J)
};

inline SigmaSets sigma_sets(const Composition& n1, const Composition& n2, long l) {
  if (l < std::max(n1.total(), n2.total()))
    throw DomainError("sigma sets need l >= max(|n1|, |n2|)");
  const int p1 = n1.family_count(), p2 = n2.family_count();
  SigmaSets s;
  s.q1 = {l, assoc_plus(n1, l, cyclic_reduce(p1, family_of(n1, l) - 1))};
  s.qbar1 = {*assoc_minus(n1, l - 1, cyclic_reduce(p1, family_of(n1, l - 1) + 1)), l - 1};
  s.q2 = {*assoc_minus(n2, l - 1, cyclic_reduce(p2, family_of(n2, l - 1) + 1)), l - 1};
  s.qbar2 = {l, assoc_plus(n2, l, cyclic_reduce(p2, family_of(n2, l) - 1))};
  return s;
}

namespace detail {

template <class T>
void require_cd_window(const JacobiBand<T>& jb, const Composition& n1, const Composition& n2,
                       long l) {
  if (l < std::max(n1.total(), n2.total()))
    throw DomainError("Christoffel-Darboux splitting needs l >= max(|n1|, |n2|)");
  if (l + n1.total() + n2.total() + 2 > jb.window)
    throw WindowError("truncation too small for this scale; enlarge N");
}

}  // namespace detail

// The raw block-splitting bilinear form
//   [Qbar^T]^[l] J^[l,>=l] Q^[>=l]  -  [Qbar^T]^[>=l] J^[>=l,l] Q^[l],
// equal to (y - x) K^[l](x, y). It scans the actual nonzero support of the
// truncated J inside the two off-diagonal blocks, so it stays the ground
// truth against which the sigma rectangles are checked.
template <class T>
T cd_splitting_raw(const JacobiBand<T>& jb, const LinearFormEvaluator<T>& ev,
                   const Composition& n1, const Composition& n2, long l, const T& x,
                   const T& y) {
  detail::require_cd_window(jb, n1, n2, l);
  const long row_limit = jb.window - jb.reach;  // rows of J known exactly
  T upper(0), lower(0);
  for (long j = 0; j < l; ++j)
    for (long i = l; i < jb.window; ++i)
      if (jb.J(j, i) != 0) upper += ev.eval_Qbar(j, x) * jb.J(j, i) * ev.eval_Q(i, y);
  for (long j = l; j < row_limit; ++j)
    for (long i = 0; i < l; ++i)
      if (jb.J(j, i) != 0) lower += ev.eval_Qbar(j, x) * jb.J(j, i) * ev.eval_Q(i, y);
  return upper - lower;
}

// The sigma-rectangle form of the same quantity, divided by (y - x).
template <class T>
T cd_alternative_rhs(const JacobiBand<T>& jb, const LinearFormEvaluator<T>& ev,
                     const SigmaSets& s, long l, const T& x, const T& y) {
  if (x == y) throw DomainError("alternative formula is a quotient; x and y must differ");
  T upper(0), lower(0);
  for (long j = s.qbar1.lo; j <= s.qbar1.hi; ++j)
    for (long i = s.q1.lo; i <= s.q1.hi; ++i)
      if (jb.J(j, i) != 0) upper += ev.eval_Qbar(j, x) * jb.J(j, i) * ev.eval_Q(i, y);
  for (long j = s.qbar2.lo; j <= s.qbar2.hi; ++j)
    for (long i = s.q2.lo; i <= s.q2.hi; ++i)
      if (jb.J(j, i) != 0) lower += ev.eval_Qbar(j, x) * jb.J(j, i) * ev.eval_Q(i, y);
  return (upper - lower) / (y - x);
}

// True when every nonzero of the two off-diagonal blocks of J lies inside
// the corresponding sigma rectangle, i.e. the rectangles lose nothing.
// `zero_tol` absorbs roundoff dust on the float backend; the exact backend
// keeps the default of literal zero.
template <class T>
bool sigma_covers_support(const JacobiBand<T>& jb, const SigmaSets& s, long l,
                          const T& zero_tol = T(0)) {
  const long row_limit = jb.window - jb.reach;
  for (long j = 0; j < l; ++j)
    for (long i = l; i < jb.window; ++i)
      if (abs_value(jb.J(j, i)) > zero_tol && !(s.qbar1.contains(j) && s.q1.contains(i)))
        return false;
  for (long j = l; j < row_limit; ++j)
    for (long i = 0; i < l; ++i)
      if (abs_value(jb.J(j, i)) > zero_tol && !(s.qbar2.contains(j) && s.q2.contains(i)))
        return false;
  return true;
}

// The four families of boundary forms entering the classical formula at
// scale l, solved once and evaluated at many (x, y) pairs.
template <class T>
struct ClassicalCd {
  long l = 0;
  std::vector<MixedSolution<T>> qbar_typeII;  // per second-system family b
  std::vector<MixedSolution<T>> q_typeI;      // per b
  std::vector<MixedSolution<T>> qbar_typeI;   // per first-system family a
  std::vector<MixedSolution<T>> q_typeII;     // per a

  // (x - y) K^[l](x, y)
  T eval_raw(const ProblemSetup<T>& setup, const T& x, const T& y) const {
    T r(0);
    for (std::size_t b = 0; b < qbar_typeII.size(); ++b)
      r += qbar_typeII[b].eval(setup, x) * q_typeI[b].eval(setup, y);
    for (std::size_t a = 0; a < qbar_typeI.size(); ++a)
      r -= qbar_typeI[a].eval(setup, x) * q_typeII[a].eval(setup, y);
    return r;
  }
};

// Builds the classical right-hand side from the staircase multi-indices at
// l-1, bumping one family up or down per term. Every constituent form
// comes from the direct solver, not from the factorization.
template <class T>
ClassicalCd<T> build_classical_cd(MomentEngine<T>& eng, long l) {
  const ProblemSetup<T>& s = eng.setup();
  if (l < std::max(s.comp1.total(), s.comp2.total()))
    throw DomainError("classical formula needs l >= max(|n1|, |n2|)");
  const MultiIndex nu1 = multi_index(s.comp1, l - 1);
  const MultiIndex nu2 = multi_index(s.comp2, l - 1);
  auto bump = [](const MultiIndex& m, int family, long delta) {
    MultiIndex r = m;
    r.counts[static_cast<std::size_t>(family - 1)] += delta;
    return r;
  };
  ClassicalCd<T> cd;
  cd.l = l;
  for (int b = 1; b <= s.comp2.family_count(); ++b) {
    cd.qbar_typeII.push_back(solve_mixed_direct(eng, bump(nu2, b, +1), nu1,
                                                Normalization::type2(b), Orientation::Duals));
    cd.q_typeI.push_back(solve_mixed_direct(eng, nu1, bump(nu2, b, -1), Normalization::type1(b),
                                            Orientation::Forms));
  }
  for (int a = 1; a <= s.comp1.family_count(); ++a) {
    cd.qbar_typeI.push_back(solve_mixed_direct(eng, nu2, bump(nu1, a, -1),
                                               Normalization::type1(a), Orientation::Duals));
    cd.q_typeII.push_back(solve_mixed_direct(eng, bump(nu1, a, +1), nu2, Normalization::type2(a),
                                             Orientation::Forms));
  }
  return cd;
}

// Classical right-hand side as a kernel value; at x = y the quotient is
// removable and the direct kernel is returned instead.
template <class T>
T cd_classical_rhs(MomentEngine<T>& eng, const LinearFormEvaluator<T>& ev, long l, const T& x,
                   const T& y) {
  if (x == y) return cd_kernel_direct(ev, l, x, y);
  const ClassicalCd<T> cd = build_classical_cd(eng, l);
  return cd.eval_raw(eng.setup(), x, y) / (x - y);
}

}  // namespace moprl

#endif

#ifndef MOPRL_JACOBI_HPP
#define MOPRL_JACOBI_HPP

#include <algorithm>

#include "moprl/polynomials.hpp"

namespace moprl {

// Banded truncation of the recursion operator J = S Y1 S^{-1}
// = Sbar Y2^T Sbar^{-1}. Truncating the product pollutes the trailing
// |n1| rows (S route) or the trailing |n2| columns (Sbar route);
// entry_exact says which entries survived intact.
template <class T>
struct JacobiBand {
  enum class Route { FromS, FromSbar };

  Matrix<T> J;
  long window = 0;
  long reach = 0;  // |n1| or |n2| depending on the route
  Route route = Route::FromS;

  bool entry_exact(long i, long j) const {
    return route == Route::FromS ? i + reach < window : j + reach < window;
  }
};

template <class T>
JacobiBand<T> jacobi_from_S(const FactorizationPair<T>& fp, const Composition& n1) {
  JacobiBand<T> jb;
  jb.window = fp.window;
  jb.reach = n1.total();
  jb.route = JacobiBand<T>::Route::FromS;
  jb.J = fp.S * dense_shift<T>(shift_matrix(n1, fp.window)) * fp.Sinv;
  return jb;
}

template <class T>
JacobiBand<T> jacobi_from_Sbar(const FactorizationPair<T>& fp, const Composition& n2) {
  JacobiBand<T> jb;
  jb.window = fp.window;
  jb.reach = n2.total();
  jb.route = JacobiBand<T>::Route::FromSbar;
  jb.J = fp.Sbar * dense_shift<T>(shift_matrix(n2, fp.window)).transpose() * fp.SbarInv;
  return jb;
}

// Support bounds of J along one row and one column, valid once every
// family has occurred (l >= max(|n1|, |n2|)). The family labels inside the
// associated integers are cyclically reduced.
struct BandSupport {
  long row_lo = 0, row_hi = 0;  // columns carrying row l
  long col_lo = 0, col_hi = 0;  // rows carrying column l
};

inline BandSupport band_support(const Composition& n1, const Composition& n2, long l) {
  if (l < std::max(n1.total(), n2.total()))
    throw DomainError("band support needs l >= max(|n1|, |n2|)");
  const int p1 = n1.family_count(), p2 = n2.family_count();
  BandSupport b;
  b.row_lo = *assoc_minus(n2, l - 1, cyclic_reduce(p2, family_of(n2, l - 1) - 1));
  b.row_hi = assoc_plus(n1, l + 1, cyclic_reduce(p1, family_of(n1, l + 1) - 1));
  b.col_lo = *assoc_minus(n1, l - 1, cyclic_reduce(p1, family_of(n1, l - 1) + 1));
  b.col_hi = assoc_plus(n2, l + 1, cyclic_reduce(p2, family_of(n2, l + 1) - 1));
  return b;
}

// J entries straight from the factorization factors. The upper part sums
// S coefficients of the latest slot of each first-system family against
// S^{-1}; the lower part mirrors this with Sbar factors over the second
// system. Triangularity silences the families whose next slot falls short
// of the target column, and a missing earlier slot contributes zero. On
// the diagonal the second-to-last own-family slot adds one extra S (resp.
// Sbar^{-1}) term.
template <class T>
T jacobi_entry_from_factors(const FactorizationPair<T>& fp, const Composition& n1,
                            const Composition& n2, long row, long col) {
  if (row < 0 || col < 0 || row >= fp.window || col >= fp.window)
    throw WindowError("entry outside the factorization window");
  T r(0);
  if (col >= row) {
    const int a_row = family_of(n1, row);
    for (int a = 1; a <= n1.family_count(); ++a) {
      const auto last = assoc_minus(n1, row, a);
      if (!last) continue;
      const long next = assoc_plus(n1, row + 1, a);
      if (next < col || next >= fp.window) continue;  // above the diagonal of S^{-1} / outside
      r += fp.S(row, *last) * fp.Sinv(next, col);
    }
    if (col == row && row >= 1) {
      const auto prev = assoc_minus(n1, row - 1, a_row);
      if (prev) r += fp.S(row, *prev);
    }
  } else {
    const int b_col = family_of(n2, col);
    for (int b = 1; b <= n2.family_count(); ++b) {
      const auto last = assoc_minus(n2, col, b);
      if (!last) continue;
      const long next = assoc_plus(n2, col + 1, b);
      if (next < row || next >= fp.window) continue;
      r += fp.Sbar(row, next) * fp.SbarInv(*last, col);
    }
  }
  return r;
}

// Sbar-route expression for a diagonal entry; the matching unit test pins
// it against the S-route value.
template <class T>
T jacobi_diagonal_from_Sbar(const FactorizationPair<T>& fp, const Composition& n2, long l) {
  T r(0);
  for (int b = 1; b <= n2.family_count(); ++b) {
    const auto last = assoc_minus(n2, l, b);
    if (!last) continue;
    const long next = assoc_plus(n2, l + 1, b);
    if (next >= fp.window) continue;
    r += fp.Sbar(l, next) * fp.SbarInv(*last, l);
  }
  if (l >= 1) {
    const auto prev = assoc_minus(n2, l - 1, family_of(n2, l));
    if (prev) r += fp.Sbar(l, l) * fp.SbarInv(*prev, l);
  }
  return r;
}

// Largest violation of J Q(x) = x Q(x) over rows the S-route band renders
// exactly, and of Qbar^T J = x Qbar^T over columns the Sbar-route band
// renders exactly.
template <class T>
T eigenvalue_residual(const JacobiBand<T>& from_s, const JacobiBand<T>& from_sbar,
                      const LinearFormEvaluator<T>& ev, const T& x) {
  const long N = from_s.window;
  std::vector<T> q(static_cast<std::size_t>(N)), qbar(static_cast<std::size_t>(N));
  for (long j = 0; j < N; ++j) {
    q[static_cast<std::size_t>(j)] = ev.eval_Q(j, x);
    qbar[static_cast<std::size_t>(j)] = ev.eval_Qbar(j, x);
  }
  T worst(0);
  for (long l = 0; l + from_s.reach < N; ++l) {
    T s(0);
    for (long j = 0; j < N; ++j)
      if (from_s.J(l, j) != 0) s += from_s.J(l, j) * q[static_cast<std::size_t>(j)];
    T r = abs_value(s - x * q[static_cast<std::size_t>(l)]);
    if (r > worst) worst = r;
  }
  for (long c = 0; c + from_sbar.reach < N; ++c) {
    T s(0);
    for (long j = 0; j < N; ++j)
      if (from_sbar.J(j, c) != 0) s += qbar[static_cast<std::size_t>(j)] * from_sbar.J(j, c);
    T r = abs_value(s - x * qbar[static_cast<std::size_t>(c)]);
    if (r > worst) worst = r;
  }
  return worst;
}

}  // namespace moprl

#endif

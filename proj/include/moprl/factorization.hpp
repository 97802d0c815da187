#ifndef MOPRL_FACTORIZATION_HPP
#define MOPRL_FACTORIZATION_HPP

#include "moprl/composition.hpp"
#include "moprl/matrix.hpp"
#include "moprl/measures.hpp"

namespace moprl {

template <class T>
Matrix<T> dense_shift(const ShiftMatrix& s) {
  Matrix<T> m(s.size, s.size);
  for (long l = 0; l < s.size; ++l) {
    const long t = s.target[static_cast<std::size_t>(l)];
    if (t >= 0) m(l, t) = T(1);
  }
  return m;
}

template <class T>
Matrix<T> build_moment_matrix(MomentEngine<T>& eng, long N) {
  if (N < 1) throw DomainError("moment matrix needs N >= 1");
  Matrix<T> g(N, N);
  for (long i = 0; i < N; ++i)
    for (long j = 0; j < N; ++j) g(i, j) = eng.moment(i, j);
  return g;
}

// Max |(Y1 g - g Y2^T)_{ij}| over the window where both shift targets stay
// inside the truncation. Both sides are moments of x * xi1^(i) * xi2^(j),
// so the residual vanishes on exact data.
template <class T>
T hankel_residual(const Matrix<T>& g, const Composition& n1, const Composition& n2) {
  const long N = g.rows();
  T worst(0);
  for (long i = 0; i < N; ++i) {
    const long ti = shift_target(n1, i);
    if (ti >= N) continue;
    for (long j = 0; j < N; ++j) {
      const long tj = shift_target(n2, j);
      if (tj >= N) continue;
      T r = abs_value(g(ti, j) - g(i, tj));
      if (r > worst) worst = r;
    }
  }
  return worst;
}

// g = S^{-1} Sbar with S unit lower triangular and Sbar upper triangular,
// on an N x N truncation. Triangularity guarantees the truncated factors
// coincide with the leading blocks of the semi-infinite ones, so `window`
// records where downstream consumers may trust entries.
template <class T>
struct FactorizationPair {
  Matrix<T> S;        // unit lower triangular
  Matrix<T> Sbar;     // upper triangular, nonzero diagonal
  Matrix<T> Sinv;     // = S^{-1}, unit lower
  Matrix<T> SbarInv;  // upper
  long window = 0;
};

// Doolittle elimination without pivoting: row permutations would destroy
// the unit-lower/upper normalization that gives the factors their meaning.
// A zero pivot (or, on the float backend, one below the roundoff floor
// scaled by the data) at step k reports SingularMinor(k).
template <class T>
FactorizationPair<T> gauss_borel(const Matrix<T>& g) {
  const long N = g.rows();
  if (g.cols() != N) throw std::invalid_argument("moment matrix must be square");
  Matrix<T> L = Matrix<T>::identity(N);
  Matrix<T> U(N, N);
  const T floor = max_abs(g) * ScalarTraits<T>::pivot_floor();
  for (long k = 0; k < N; ++k) {
    for (long j = k; j < N; ++j) {
      T s = g(k, j);
      for (long m = 0; m < k; ++m) s -= L(k, m) * U(m, j);
      U(k, j) = s;
    }
    const T piv = abs_value(U(k, k));
    if (piv == 0 || (!ScalarTraits<T>::is_exact && piv < floor)) throw SingularMinor(k);
    for (long i = k + 1; i < N; ++i) {
      T s = g(i, k);
      for (long m = 0; m < k; ++m) s -= L(i, m) * U(m, k);
      L(i, k) = s / U(k, k);
    }
  }
  FactorizationPair<T> fp;
  fp.Sinv = std::move(L);
  fp.Sbar = std::move(U);
  fp.S = triangular_inverse(fp.Sinv);
  fp.SbarInv = triangular_inverse(fp.Sbar);
  fp.window = N;
  return fp;
}

}  // namespace moprl

#endif

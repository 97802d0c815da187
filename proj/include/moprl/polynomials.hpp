#ifndef MOPRL_POLYNOMIALS_HPP
#define MOPRL_POLYNOMIALS_HPP

#include <functional>
#include <optional>
#include <vector>

#include "moprl/factorization.hpp"

namespace moprl {

template <class T>
T polyval(const std::vector<T>& coeffs, const T& x) {
  T r(0);
  for (std::size_t i = coeffs.size(); i > 0; --i) r = r * x + coeffs[i - 1];
  return r;
}

// Coefficients of the family-a polynomial attached to string scale l: the
// row-l entries of S spread over the monomials of family-a string slots,
//   A^(l)_a(x) = sum_{i <= l, a(i)=a} S_{l,i} x^(string exponent of i).
// Families without any slot at or before l yield the zero polynomial.
template <class T>
std::vector<T> mop_coeffs(const FactorizationPair<T>& fp, const Composition& n1, long l, int a) {
  std::vector<T> c;
  for (long i = 0; i <= l; ++i) {
    if (family_of(n1, i) != a) continue;
    const long e = string_exponent(n1, i);
    if (static_cast<long>(c.size()) <= e) c.resize(static_cast<std::size_t>(e + 1), T(0));
    c[static_cast<std::size_t>(e)] = fp.S(l, i);
  }
  return c;
}

// Dual polynomials come from the columns of Sbar^{-1}:
//   Abar^(l)_b(x) = sum_{j <= l, a(j)=b} Sbar^{-1}_{j,l} x^(string exponent of j).
template <class T>
std::vector<T> dual_mop_coeffs(const FactorizationPair<T>& fp, const Composition& n2, long l,
                               int b) {
  std::vector<T> c;
  for (long j = 0; j <= l; ++j) {
    if (family_of(n2, j) != b) continue;
    const long e = string_exponent(n2, j);
    if (static_cast<long>(c.size()) <= e) c.resize(static_cast<std::size_t>(e + 1), T(0));
    c[static_cast<std::size_t>(e)] = fp.SbarInv(j, l);
  }
  return c;
}

// Evaluates the linear forms Q^(l) = sum_a A^(l)_a w_{1,a} and their duals
// Qbar^(l) = sum_b Abar^(l)_b w_{2,b} on the factorization window.
template <class T>
class LinearFormEvaluator {
public:
  LinearFormEvaluator(const ProblemSetup<T>& setup, const FactorizationPair<T>& fp)
      : setup_(&setup), window_(fp.window) {
    const int p1 = setup.comp1.family_count();
    const int p2 = setup.comp2.family_count();
    coeffs_.resize(static_cast<std::size_t>(window_));
    dual_coeffs_.resize(static_cast<std::size_t>(window_));
    for (long l = 0; l < window_; ++l) {
      for (int a = 1; a <= p1; ++a)
        coeffs_[static_cast<std::size_t>(l)].push_back(mop_coeffs(fp, setup.comp1, l, a));
      for (int b = 1; b <= p2; ++b)
        dual_coeffs_[static_cast<std::size_t>(l)].push_back(dual_mop_coeffs(fp, setup.comp2, l, b));
    }
  }

  long window() const { return window_; }
  const ProblemSetup<T>& setup() const { return *setup_; }

  const std::vector<T>& coeffs(long l, int a) const {
    return coeffs_[static_cast<std::size_t>(l)][static_cast<std::size_t>(a - 1)];
  }
  const std::vector<T>& dual_coeffs(long l, int b) const {
    return dual_coeffs_[static_cast<std::size_t>(l)][static_cast<std::size_t>(b - 1)];
  }

  T eval_Q(long l, const T& x) const {
    check_window(l);
    T r(0);
    for (int a = 1; a <= setup_->comp1.family_count(); ++a) {
      const auto& c = coeffs(l, a);
      if (c.empty()) continue;
      r += polyval(c, x) * setup_->weights1[static_cast<std::size_t>(a - 1)].eval(x);
    }
    return r;
  }

  T eval_Qbar(long l, const T& x) const {
    check_window(l);
    T r(0);
    for (int b = 1; b <= setup_->comp2.family_count(); ++b) {
      const auto& c = dual_coeffs(l, b);
      if (c.empty()) continue;
      r += polyval(c, x) * setup_->weights2[static_cast<std::size_t>(b - 1)].eval(x);
    }
    return r;
  }

private:
  void check_window(long l) const {
    if (l < 0 || l >= window_) throw WindowError("linear form index outside factorization window");
  }

  const ProblemSetup<T>* setup_;
  long window_;
  std::vector<std::vector<std::vector<T>>> coeffs_;       // [l][a-1]
  std::vector<std::vector<std::vector<T>>> dual_coeffs_;  // [l][b-1]
};

namespace detail {

// cross moment oriented so that `a` labels the size-side system and `b`
// the condition-side system.
template <class T>
T oriented_moment(MomentEngine<T>& eng, int size_side, int a, int b, long m) {
  return size_side == 1 ? eng.cross_moment(a, b, m) : eng.cross_moment(b, a, m);
}

}  // namespace detail

// \int Q^(l) Qbar^(k) dmu by expanding both forms into weighted monomials
// and integrating term by term; shares no algebra with the factorization,
// so the identity-matrix contract is a genuine check.
template <class T>
T check_biorthogonality(MomentEngine<T>& eng, const LinearFormEvaluator<T>& ev, long l, long k) {
  const int p1 = eng.setup().comp1.family_count();
  const int p2 = eng.setup().comp2.family_count();
  T r(0);
  for (int a = 1; a <= p1; ++a) {
    const auto& ca = ev.coeffs(l, a);
    for (std::size_t e = 0; e < ca.size(); ++e) {
      if (ca[e] == 0) continue;
      for (int b = 1; b <= p2; ++b) {
        const auto& cb = ev.dual_coeffs(k, b);
        for (std::size_t f = 0; f < cb.size(); ++f) {
          if (cb[f] == 0) continue;
          r += ca[e] * cb[f] * eng.cross_moment(a, b, static_cast<long>(e + f));
        }
      }
    }
  }
  return r;
}

// Largest violation of the orthogonality ranges of Q^(l) and Qbar^(l):
// Q^(l) kills x^k w_{2,b} for k below the family-b count at scale l-1, and
// dually for Qbar^(l).
template <class T>
T check_orthogonality(MomentEngine<T>& eng, const LinearFormEvaluator<T>& ev, long l) {
  const ProblemSetup<T>& s = eng.setup();
  const MultiIndex c1 = multi_index(s.comp1, l - 1);
  const MultiIndex c2 = multi_index(s.comp2, l - 1);
  T worst(0);
  for (int b = 1; b <= s.comp2.family_count(); ++b)
    for (long k = 0; k < c2[b]; ++k) {
      T r(0);
      for (int a = 1; a <= s.comp1.family_count(); ++a) {
        const auto& ca = ev.coeffs(l, a);
        for (std::size_t e = 0; e < ca.size(); ++e)
          if (ca[e] != 0) r += ca[e] * eng.cross_moment(a, b, static_cast<long>(e) + k);
      }
      if (abs_value(r) > worst) worst = abs_value(r);
    }
  for (int a = 1; a <= s.comp1.family_count(); ++a)
    for (long k = 0; k < c1[a]; ++k) {
      T r(0);
      for (int b = 1; b <= s.comp2.family_count(); ++b) {
        const auto& cb = ev.dual_coeffs(l, b);
        for (std::size_t f = 0; f < cb.size(); ++f)
          if (cb[f] != 0) r += cb[f] * eng.cross_moment(a, b, static_cast<long>(f) + k);
      }
      if (abs_value(r) > worst) worst = abs_value(r);
    }
  return worst;
}

enum class Orientation { Forms, Duals };

struct Normalization {
  enum class Kind { TypeII, TypeI };
  Kind kind = Kind::TypeII;
  int family = 1;
  static Normalization type2(int family) { return {Kind::TypeII, family}; }
  static Normalization type1(int family) { return {Kind::TypeI, family}; }
};

// One solved orthogonality system: polynomial coefficients per family of
// the size-side weight system.
template <class T>
struct MixedSolution {
  Orientation orientation = Orientation::Forms;
  std::vector<std::vector<T>> coeffs;
  Normalization normalization;
  long normalization_power = -1;  // exponent of the type-I normalizing moment

  int size_side() const { return orientation == Orientation::Forms ? 1 : 2; }

  // The linear form sum_a A_a(x) w_{size-side,a}(x).
  T eval(const ProblemSetup<T>& setup, const T& x) const {
    const auto& ws = setup.weights(size_side());
    T r(0);
    for (std::size_t a = 0; a < coeffs.size(); ++a) {
      if (coeffs[a].empty()) continue;
      r += polyval(coeffs[a], x) * ws[a].eval(x);
    }
    return r;
  }
};

namespace detail {

// One-dimensional nullspace of an (n-1) x n system, used to tell a
// vanishing normalizing integral apart from genuinely singular data.
template <class T>
std::vector<T> nullvector(Matrix<T> a) {
  const long rows = a.rows(), cols = a.cols();
  if (cols != rows + 1) throw std::invalid_argument("nullvector expects an (n-1) x n system");
  std::vector<long> pivot_col(static_cast<std::size_t>(rows), -1);
  std::vector<bool> used(static_cast<std::size_t>(cols), false);
  long r = 0;
  for (long c = 0; c < cols && r < rows; ++c) {
    long piv = -1;
    T best(0);
    for (long i = r; i < rows; ++i) {
      T v = abs_value(a(i, c));
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (piv < 0 || best == 0) continue;
    if (piv != r)
      for (long j = 0; j < cols; ++j) std::swap(a(r, j), a(piv, j));
    for (long i = 0; i < rows; ++i) {
      if (i == r || a(i, c) == 0) continue;
      T f = a(i, c) / a(r, c);
      for (long j = 0; j < cols; ++j) a(i, j) -= f * a(r, j);
    }
    pivot_col[static_cast<std::size_t>(r)] = c;
    used[static_cast<std::size_t>(c)] = true;
    ++r;
  }
  if (r < rows) throw SingularSystem("orthogonality system is rank deficient");
  long free_col = -1;
  for (long c = 0; c < cols; ++c)
    if (!used[static_cast<std::size_t>(c)]) free_col = c;
  std::vector<T> v(static_cast<std::size_t>(cols), T(0));
  v[static_cast<std::size_t>(free_col)] = T(1);
  for (long i = 0; i < rows; ++i) {
    const long pc = pivot_col[static_cast<std::size_t>(i)];
    v[static_cast<std::size_t>(pc)] = -a(i, free_col) / a(i, pc);
  }
  return v;
}

}  // namespace detail

// Direct solver for the mixed orthogonality system: find per-family
// polynomials A_a with deg A_a < sizes[a] whose combined form annihilates
// x^j w_{cond,b} for j < conds[b], then normalize. It builds the linear
// system straight from fresh moments, so it is an independent route to the
// same polynomials the factorization produces.
//
// Orientation::Forms sizes the polynomials over the first weight system
// and takes conditions against the second; Orientation::Duals swaps the
// roles. Type II pins the leading coefficient of one size-side family to
// one; type I sets the first unconstrained moment of one condition-side
// family to one.
template <class T>
MixedSolution<T> solve_mixed_direct(MomentEngine<T>& eng, const MultiIndex& sizes,
                                    const MultiIndex& conds, Normalization norm,
                                    Orientation orient) {
  const int size_side = orient == Orientation::Forms ? 1 : 2;
  const int cond_side = 3 - size_side;
  const ProblemSetup<T>& s = eng.setup();
  const int ps = s.comp(size_side).family_count();
  const int pc = s.comp(cond_side).family_count();
  if (static_cast<int>(sizes.counts.size()) != ps ||
      static_cast<int>(conds.counts.size()) != pc)
    throw DomainError("multi-index lengths must match the family counts");
  if (sizes.total() != conds.total() + 1)
    throw DomainError("size multi-index must exceed condition multi-index total by one");

  struct Unknown {
    int family;
    long degree;
  };
  std::vector<Unknown> unknowns;
  for (int a = 1; a <= ps; ++a)
    for (long d = 0; d < sizes[a]; ++d) unknowns.push_back({a, d});
  const long n_unknowns = static_cast<long>(unknowns.size());

  struct Condition {
    int family;
    long power;
  };
  std::vector<Condition> rows;
  for (int b = 1; b <= pc; ++b)
    for (long j = 0; j < conds[b]; ++j) rows.push_back({b, j});

  auto cm = [&](const Unknown& u, const Condition& c) {
    return detail::oriented_moment(eng, size_side, u.family, c.family, u.degree + c.power);
  };

  MixedSolution<T> sol;
  sol.orientation = orient;
  sol.normalization = norm;
  sol.coeffs.assign(static_cast<std::size_t>(ps), {});
  for (int a = 1; a <= ps; ++a)
    sol.coeffs[static_cast<std::size_t>(a - 1)].assign(static_cast<std::size_t>(sizes[a]), T(0));

  std::vector<T> x;
  if (norm.kind == Normalization::Kind::TypeII) {
    if (norm.family < 1 || norm.family > ps || sizes[norm.family] < 1)
      throw DomainError("type II normalization needs a populated size-side family");
    const long lead_degree = sizes[norm.family] - 1;
    std::vector<long> keep;
    for (long u = 0; u < n_unknowns; ++u)
      if (!(unknowns[static_cast<std::size_t>(u)].family == norm.family &&
            unknowns[static_cast<std::size_t>(u)].degree == lead_degree))
        keep.push_back(u);
    Matrix<T> A(static_cast<long>(rows.size()), static_cast<long>(keep.size()));
    std::vector<T> rhs(rows.size(), T(0));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      for (std::size_t c = 0; c < keep.size(); ++c)
        A(static_cast<long>(r), static_cast<long>(c)) =
            cm(unknowns[static_cast<std::size_t>(keep[c])], rows[r]);
      rhs[r] = -cm({norm.family, lead_degree}, rows[r]);
    }
    x = rows.empty() ? std::vector<T>{} : solve_linear(A, rhs);
    sol.coeffs[static_cast<std::size_t>(norm.family - 1)][static_cast<std::size_t>(lead_degree)] =
        T(1);
    for (std::size_t c = 0; c < keep.size(); ++c) {
      const Unknown& u = unknowns[static_cast<std::size_t>(keep[c])];
      sol.coeffs[static_cast<std::size_t>(u.family - 1)][static_cast<std::size_t>(u.degree)] =
          x[c];
    }
  } else {
    if (norm.family < 1 || norm.family > pc)
      throw DomainError("type I normalization labels a condition-side family");
    sol.normalization_power = conds[norm.family];
    const Condition norm_row{norm.family, sol.normalization_power};
    Matrix<T> A(static_cast<long>(rows.size()) + 1, n_unknowns);
    std::vector<T> rhs(rows.size() + 1, T(0));
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (long u = 0; u < n_unknowns; ++u)
        A(static_cast<long>(r), u) = cm(unknowns[static_cast<std::size_t>(u)], rows[r]);
    for (long u = 0; u < n_unknowns; ++u)
      A(static_cast<long>(rows.size()), u) = cm(unknowns[static_cast<std::size_t>(u)], norm_row);
    rhs.back() = T(1);
    try {
      x = solve_linear(A, rhs);
    } catch (const SingularSystem&) {
      // Either the data is not perfect or the normalizing moment of the
      // unique solution vanishes; tell the two apart.
      Matrix<T> orth(static_cast<long>(rows.size()), n_unknowns);
      for (std::size_t r = 0; r < rows.size(); ++r)
        for (long u = 0; u < n_unknowns; ++u)
          orth(static_cast<long>(r), u) = cm(unknowns[static_cast<std::size_t>(u)], rows[r]);
      std::vector<T> v = detail::nullvector(orth);  // throws SingularSystem on rank deficiency
      T norm_val(0);
      for (long u = 0; u < n_unknowns; ++u)
        norm_val += v[static_cast<std::size_t>(u)] * A(static_cast<long>(rows.size()), u);
      if (norm_val == 0)
        throw NormalizationImpossible("type I normalizing moment vanishes");
      throw;
    }
    for (long u = 0; u < n_unknowns; ++u) {
      const Unknown& un = unknowns[static_cast<std::size_t>(u)];
      sol.coeffs[static_cast<std::size_t>(un.family - 1)][static_cast<std::size_t>(un.degree)] =
          x[static_cast<std::size_t>(u)];
    }
  }
  return sol;
}

// ---------------------------------------------------------------------------
// Second kind functions: Cauchy transforms of the weighted linear forms.

template <class T>
struct SecondKindValue {
  T value{};
  T tail_bound{};
  long terms = 0;
};

namespace detail {

template <class T>
T support_radius(const ProblemSetup<T>& s) {
  const Rational lo = abs_value(s.measure.lo), hi = abs_value(s.measure.hi);
  return ScalarTraits<T>::from_rational(lo > hi ? lo : hi);
}

}  // namespace detail

// Truncated expansion of the second kind function in powers of 1/z, read
// off the factorization window: rows of Sbar for C_b (side 2, partnered
// with Q^(l)), columns of S^{-1} for the dual (side 1, partnered with
// Qbar^(l)). The geometric tail bound uses |z| and the support radius and
// requires |z| beyond the support.
template <class T>
SecondKindValue<T> second_kind_series(MomentEngine<T>& eng, const FactorizationPair<T>& fp,
                                      const LinearFormEvaluator<T>& ev, long l, int side,
                                      int family, const T& z) {
  const ProblemSetup<T>& s = eng.setup();
  const Composition& n = s.comp(side == 2 ? 2 : 1);
  const T radius = detail::support_radius(s);
  const T az = abs_value(z);
  if (az <= radius)
    throw DomainError("second kind series needs |z| larger than the support radius");

  SecondKindValue<T> out;
  const T zinv = T(1) / z;
  for (long j = l; j < fp.window; ++j) {
    if (family_of(n, j) != family) continue;
    const T coeff = side == 2 ? fp.Sbar(l, j) : fp.Sinv(j, l);
    const long e = string_exponent(n, j);
    out.value += coeff * scalar_pow(zinv, Rational(e + 1));
    ++out.terms;
  }

  // |moment_m| <= bound * radius^m, summed past the last included power.
  T bound(0);
  if (side == 2) {
    for (int a = 1; a <= s.comp1.family_count(); ++a) {
      const auto& c = ev.coeffs(l, a);
      for (std::size_t e = 0; e < c.size(); ++e)
        if (c[e] != 0)
          bound += abs_value(c[e]) * scalar_pow(radius, Rational(static_cast<long>(e))) *
                   abs_value(eng.cross_moment(a, family, 0));
    }
  } else {
    for (int b = 1; b <= s.comp2.family_count(); ++b) {
      const auto& c = ev.dual_coeffs(l, b);
      for (std::size_t f = 0; f < c.size(); ++f)
        if (c[f] != 0)
          bound += abs_value(c[f]) * scalar_pow(radius, Rational(static_cast<long>(f))) *
                   abs_value(eng.cross_moment(family, b, 0));
    }
  }
  const long m_tail = multi_index(n, fp.window - 1)[family];
  out.tail_bound = bound * scalar_pow(radius / az, Rational(m_tail)) / (az - radius);
  return out;
}

// Partial moment expansion sum_{m < terms} (\int Q^(l) w x^m dmu) z^{-m-1},
// with the moments integrated directly from the form's coefficients. An
// independent route to the same truncated series (exact on the rational
// backend), against which the factorization series is checked.
template <class T>
T second_kind_expansion(MomentEngine<T>& eng, const LinearFormEvaluator<T>& ev, long l, int side,
                        int family, const T& z, long terms) {
  const ProblemSetup<T>& s = eng.setup();
  const T zinv = T(1) / z;
  T out(0);
  for (long m = 0; m < terms; ++m) {
    T mom(0);
    if (side == 2) {
      for (int a = 1; a <= s.comp1.family_count(); ++a) {
        const auto& c = ev.coeffs(l, a);
        for (std::size_t e = 0; e < c.size(); ++e)
          if (c[e] != 0) mom += c[e] * eng.cross_moment(a, family, static_cast<long>(e) + m);
      }
    } else {
      for (int b = 1; b <= s.comp2.family_count(); ++b) {
        const auto& c = ev.dual_coeffs(l, b);
        for (std::size_t f = 0; f < c.size(); ++f)
          if (c[f] != 0) mom += c[f] * eng.cross_moment(family, b, static_cast<long>(f) + m);
      }
    }
    out += mom * scalar_pow(zinv, Rational(m + 1));
  }
  return out;
}

// Cauchy-transform representation (float backend): side 2 integrates
// Q^(l)(x) w_{2,b}(x) / (z - x), side 1 its dual.
template <class T>
T second_kind_integral(MomentEngine<T>& eng, const LinearFormEvaluator<T>& ev, long l, int side,
                       int family, const T& z) {
  const ProblemSetup<T>& s = eng.setup();
  const T lo = ScalarTraits<T>::from_rational(s.measure.lo);
  const T hi = ScalarTraits<T>::from_rational(s.measure.hi);
  if (z >= lo && z <= hi) throw DomainError("evaluation point lies inside the support");
  if (side == 2)
    return eng.integrate([&](const T& x) {
      return ev.eval_Q(l, x) * eng.eval_weight(2, family, x) / (z - x);
    });
  return eng.integrate([&](const T& x) {
    return ev.eval_Qbar(l, x) * eng.eval_weight(1, family, x) / (z - x);
  });
}

}  // namespace moprl

#endif

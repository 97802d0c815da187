#ifndef MOPRL_MEASURES_HPP
#define MOPRL_MEASURES_HPP

#include <functional>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "moprl/composition.hpp"
#include "moprl/errors.hpp"
#include "moprl/quadrature.hpp"
#include "moprl/scalar.hpp"

namespace moprl {

enum class WeightKind { MonomialPower, Exponential, Binomial, Callable };

// A weight function on the support interval. Parameters stay exact
// rationals on both backends so that the closed-form moment path can
// decide exactness.
template <class T>
struct Weight {
  WeightKind kind = WeightKind::MonomialPower;
  Rational exponent{0};  // monomial x^q, q > -1 (half-integer and finer allowed)
  Rational rate{0};      // exponential e^(rate*x)
  Rational alpha{0};     // binomial (1-x)^alpha
  std::function<T(const T&)> fn;

  static Weight monomial(const Rational& q) {
    if (q <= -1) throw DomainError("monomial weight exponent must be > -1");
    Weight w;
    w.kind = WeightKind::MonomialPower;
    w.exponent = q;
    return w;
  }
  static Weight exponential(const Rational& rate) {
    Weight w;
    w.kind = WeightKind::Exponential;
    w.rate = rate;
    return w;
  }
  static Weight binomial(const Rational& alpha) {
    Weight w;
    w.kind = WeightKind::Binomial;
    w.alpha = alpha;
    return w;
  }
  static Weight callable(std::function<T(const T&)> f) {
    Weight w;
    w.kind = WeightKind::Callable;
    w.fn = std::move(f);
    return w;
  }

  bool is_power() const { return kind == WeightKind::MonomialPower; }

  T eval(const T& x) const {
    switch (kind) {
      case WeightKind::MonomialPower:
        return scalar_pow(x, exponent);
      case WeightKind::Exponential:
        return scalar_exp(ScalarTraits<T>::from_rational(rate) * x);
      case WeightKind::Binomial:
        return scalar_pow(T(1) - x, alpha);
      case WeightKind::Callable:
        return fn(x);
    }
    throw DomainError("unknown weight kind");
  }

  std::string describe() const {
    switch (kind) {
      case WeightKind::MonomialPower:
        return "monomial " + exact_string(exponent);
      case WeightKind::Exponential:
        return "exponential " + exact_string(rate);
      case WeightKind::Binomial:
        return "binomial " + exact_string(alpha);
      case WeightKind::Callable:
        return "callable";
    }
    return "?";
  }
};

template <class T>
struct MeasureSpec {
  Rational lo{0}, hi{1};
  bool lebesgue = true;
  std::function<T(const T&)> density;  // used when !lebesgue

  static MeasureSpec interval(const Rational& lo, const Rational& hi) {
    if (!(lo < hi)) throw DomainError("support interval needs lo < hi");
    MeasureSpec m;
    m.lo = lo;
    m.hi = hi;
    return m;
  }
};

// Measure + two weight systems + two compositions: the full input of the
// pipeline.
template <class T>
struct ProblemSetup {
  MeasureSpec<T> measure;
  std::vector<Weight<T>> weights1, weights2;
  Composition comp1, comp2;

  ProblemSetup(MeasureSpec<T> m, std::vector<Weight<T>> w1, std::vector<Weight<T>> w2,
               Composition c1, Composition c2)
      : measure(std::move(m)),
        weights1(std::move(w1)),
        weights2(std::move(w2)),
        comp1(std::move(c1)),
        comp2(std::move(c2)) {
    if (static_cast<int>(weights1.size()) != comp1.family_count() ||
        static_cast<int>(weights2.size()) != comp2.family_count())
      throw DomainError("weight count must match composition family count");
    check_distinct_rates(weights1);
    check_distinct_rates(weights2);
  }

  const std::vector<Weight<T>>& weights(int side) const {
    return side == 1 ? weights1 : weights2;
  }
  const Composition& comp(int side) const { return side == 1 ? comp1 : comp2; }

private:
  static void check_distinct_rates(const std::vector<Weight<T>>& ws) {
    for (std::size_t i = 0; i < ws.size(); ++i)
      for (std::size_t j = i + 1; j < ws.size(); ++j)
        if (ws[i].kind == WeightKind::Exponential && ws[j].kind == WeightKind::Exponential &&
            ws[i].rate == ws[j].rate)
          throw DomainError("exponential rates must be pairwise distinct within a system");
  }
};

// Evaluates weighted string entries and the moments
//   cross_moment(a, b, m) = \int x^m w_{1,a}(x) w_{2,b}(x) dmu(x).
// Pure powers against the Lebesgue density go through the closed form
// (exact on the rational backend); everything else is quadrature, which
// only the float backend provides.
template <class T>
class MomentEngine {
public:
  explicit MomentEngine(ProblemSetup<T> setup, QuadratureOptions opts = {})
      : setup_(std::move(setup)), opts_(opts) {}

  const ProblemSetup<T>& setup() const { return setup_; }
  const QuadratureOptions& options() const { return opts_; }

  // Only meaningful in tests: routes power moments through quadrature too.
  void set_force_quadrature(bool v) { force_quadrature_ = v; }

  T eval_weight(int side, int family, const T& x) const {
    return setup_.weights(side)[static_cast<std::size_t>(family - 1)].eval(x);
  }

  // xi_side^(l)(x) = w_{side,a(l)}(x) * x^(string exponent of l)
  T string_entry(int side, long l, const T& x) const {
    const Composition& n = setup_.comp(side);
    const int a = family_of(n, l);
    return eval_weight(side, a, x) * scalar_pow(x, Rational(string_exponent(n, l)));
  }

  // \int_lo^hi x^q dx, closed form; q is any rational exponent > -1.
  T power_integral(const Rational& q) const {
    if (q <= -1) throw DomainError("non-integrable power");
    const Rational q1 = q + 1;
    const T hi_pow = scalar_pow(ScalarTraits<T>::from_rational(setup_.measure.hi), q1);
    const T lo_pow = setup_.measure.lo == 0
                         ? T(0)
                         : scalar_pow(ScalarTraits<T>::from_rational(setup_.measure.lo), q1);
    return (hi_pow - lo_pow) / ScalarTraits<T>::from_rational(q1);
  }

  T cross_moment(int a, int b, long extra_power) {
    auto key = std::make_tuple(a, b, extra_power);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    T value = cross_moment_uncached(a, b, extra_power);
    cache_.emplace(key, value);
    return value;
  }

  T moment(long i, long j) {
    const int a = family_of(setup_.comp1, i);
    const int b = family_of(setup_.comp2, j);
    return cross_moment(a, b, string_exponent(setup_.comp1, i) + string_exponent(setup_.comp2, j));
  }

  // \int f dmu by adaptive quadrature (float backend only).
  T integrate(const std::function<T(const T&)>& f) {
    if constexpr (ScalarTraits<T>::is_exact) {
      throw ExactValueUnavailable("quadrature is not available on the rational backend");
    } else {
      auto g = setup_.measure.lebesgue
                   ? f
                   : std::function<T(const T&)>(
                         [this, &f](const T& x) { return f(x) * setup_.measure.density(x); });
      auto res = integrate_adaptive<T>(g, ScalarTraits<T>::from_rational(setup_.measure.lo),
                                       ScalarTraits<T>::from_rational(setup_.measure.hi), opts_);
      quadrature_nodes_ += res.nodes_used;
      return res.value;
    }
  }

  long quadrature_nodes() const { return quadrature_nodes_; }

private:
  T cross_moment_uncached(int a, int b, long extra_power) {
    const Weight<T>& w1 = setup_.weights1[static_cast<std::size_t>(a - 1)];
    const Weight<T>& w2 = setup_.weights2[static_cast<std::size_t>(b - 1)];
    if (w1.is_power() && w2.is_power() && setup_.measure.lebesgue && !force_quadrature_)
      return power_integral(w1.exponent + w2.exponent + extra_power);
    if constexpr (ScalarTraits<T>::is_exact)
      throw ExactValueUnavailable(
          "moment has no closed rational form; use the float backend");
    return integrate([&](const T& x) {
      return w1.eval(x) * w2.eval(x) * scalar_pow(x, Rational(extra_power));
    });
  }

  ProblemSetup<T> setup_;
  QuadratureOptions opts_;
  bool force_quadrature_ = false;
  long quadrature_nodes_ = 0;
  std::map<std::tuple<int, int, long>, T> cache_;
};

}  // namespace moprl

#endif

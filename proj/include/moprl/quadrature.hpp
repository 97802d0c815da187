#ifndef MOPRL_QUADRATURE_HPP
#define MOPRL_QUADRATURE_HPP

#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "moprl/errors.hpp"
#include "moprl/scalar.hpp"

namespace moprl {

struct QuadratureOptions {
  // Two successive panel refinements must agree to this absolute tolerance.
  double tolerance = 1e-30;
  long max_nodes = 1 << 16;
  int panel_order = 32;
  int max_depth = 200;
};

template <class T>
struct QuadratureResult {
  T value{};
  T error_estimate{};
  long nodes_used = 0;
};

namespace detail {

struct GaussRule {
  std::vector<BigFloat> nodes;    // on (-1, 1)
  std::vector<BigFloat> weights;
};

// Legendre nodes by Newton iteration at working precision, seeded from the
// usual cosine approximation.
inline GaussRule compute_gauss_rule(int m) {
  GaussRule rule;
  rule.nodes.resize(static_cast<std::size_t>(m));
  rule.weights.resize(static_cast<std::size_t>(m));
  const BigFloat eps = pow(BigFloat(2), -static_cast<long>(float_precision_bits()) - 6);
  for (int i = 0; i < (m + 1) / 2; ++i) {
    BigFloat x(std::cos(M_PI * (i + 0.75) / (m + 0.5)));
    BigFloat pm, dpm;
    for (int it = 0; it < 100; ++it) {
      BigFloat p0(1), p1 = x;
      for (int k = 2; k <= m; ++k) {
        BigFloat pk = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      pm = p1;
      dpm = m * (x * p1 - p0) / (x * x - 1);
      BigFloat dx = pm / dpm;
      x -= dx;
      if (abs_value(dx) < eps) break;
    }
    BigFloat w = 2 / ((1 - x * x) * dpm * dpm);
    rule.nodes[static_cast<std::size_t>(i)] = -x;
    rule.weights[static_cast<std::size_t>(i)] = w;
    rule.nodes[static_cast<std::size_t>(m - 1 - i)] = x;
    rule.weights[static_cast<std::size_t>(m - 1 - i)] = w;
  }
  return rule;
}

inline const GaussRule& gauss_rule(int order) {
  static std::map<std::pair<int, unsigned>, GaussRule> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto key = std::make_pair(order, float_precision_bits());
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, compute_gauss_rule(order)).first;
  return it->second;
}

}  // namespace detail

// Composite Gauss-Legendre quadrature with adaptive bisection: a panel is
// accepted when splitting it changes the estimate by at most its share of
// the tolerance. Bisection refines dyadically toward integrable endpoint
// singularities, which plain node doubling cannot resolve.
template <class T>
QuadratureResult<T> integrate_adaptive(const std::function<T(const T&)>& f, const T& lo,
                                       const T& hi, const QuadratureOptions& opts = {}) {
  static_assert(!ScalarTraits<T>::is_exact,
                "adaptive quadrature is only available on the float backend");
  const detail::GaussRule& rule = detail::gauss_rule(opts.panel_order);
  long nodes_used = 0;

  auto panel = [&](const T& a, const T& b) -> T {
    const T half = (b - a) / 2;
    const T mid = (a + b) / 2;
    T s(0);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
      s += rule.weights[i] * f(mid + half * rule.nodes[i]);
    nodes_used += static_cast<long>(rule.nodes.size());
    return s * half;
  };

  const T tol = T(opts.tolerance);
  T err_total(0);
  std::function<T(const T&, const T&, const T&, const T&, int)> refine =
      [&](const T& a, const T& b, const T& whole, const T& tol_here, int depth) -> T {
    const T mid = (a + b) / 2;
    const T left = panel(a, mid);
    const T right = panel(mid, b);
    const T delta = abs_value(left + right - whole);
    if (delta <= tol_here || depth >= opts.max_depth) {
      err_total += delta;
      return left + right;
    }
    if (nodes_used > opts.max_nodes)
      throw QuadratureError("quadrature budget exhausted before reaching tolerance",
                            ScalarTraits<T>::to_double(delta));
    const T tol_half = tol_here / 2;
    return refine(a, mid, left, tol_half, depth + 1) +
           refine(mid, b, right, tol_half, depth + 1);
  };

  QuadratureResult<T> res;
  const T whole = panel(lo, hi);
  res.value = refine(lo, hi, whole, tol, 0);
  res.error_estimate = err_total;
  res.nodes_used = nodes_used;
  return res;
}

}  // namespace moprl

#endif

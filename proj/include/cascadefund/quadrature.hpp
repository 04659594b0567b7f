#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace cascadefund {

struct QuadratureOptions {
  double abs_tol = 1e-10;
  std::size_t max_intervals = 1'000'000;
  int max_depth = 50;
};

namespace detail {

template <class F>
struct SimpsonState {
  const F& f;
  const QuadratureOptions& opts;
  std::size_t intervals = 0;
};

template <class F>
double simpson_recurse(SimpsonState<F>& st, double a, double b, double fa,
                       double fm, double fb, double whole, double tol,
                       int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = st.f(lm);
  const double frm = st.f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  ++st.intervals;
  if (depth >= st.opts.max_depth || st.intervals >= st.opts.max_intervals ||
      std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return simpson_recurse(st, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
         simpson_recurse(st, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

}  // namespace detail

// Adaptive Simpson quadrature of f over [a, b] to an absolute tolerance.
// The interval budget caps work on badly behaved integrands; the result is
// still returned when the cap is hit.
template <class F>
double adaptive_simpson(const F& f, double a, double b,
                        const QuadratureOptions& opts = {}) {
  if (!(a <= b)) {
    throw std::invalid_argument("adaptive_simpson: requires a <= b");
  }
  if (a == b) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  detail::SimpsonState<F> st{f, opts};
  return detail::simpson_recurse(st, a, b, fa, fm, fb, whole, opts.abs_tol, 0);
}

}  // namespace cascadefund

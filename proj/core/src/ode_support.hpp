#pragma once

#include <array>
#include <cmath>
#include <cstddef>

#include <boost/numeric/odeint.hpp>

namespace translators::detail {

template <std::size_t N>
using State = std::array<double, N>;

template <std::size_t N>
using DenseStepper = boost::numeric::odeint::dense_output_runge_kutta<
    boost::numeric::odeint::controlled_runge_kutta<boost::numeric::odeint::runge_kutta_dopri5<State<N>>>>;

/// Dormand-Prince 5(4) with dense output; dt never exceeds max_dt.
///
/// The max_dt clamp of this Boost release discards the sign of dt, so callers
/// always integrate forward in tau = dir (s - s0) with the right-hand side
/// multiplied by dir.
template <std::size_t N>
DenseStepper<N> make_stepper(double abs_tol, double rel_tol, double max_dt) {
  namespace odeint = boost::numeric::odeint;
  return odeint::make_dense_output(abs_tol, rel_tol, max_dt, odeint::runge_kutta_dopri5<State<N>>());
}

template <std::size_t N>
bool all_finite(const State<N>& y) {
  for (double v : y)
    if (!std::isfinite(v)) return false;
  return true;
}

/// Root of g on [a, b] given sign(g(a)) != sign(g(b)); bisection to |b - a| <= tol.
template <class G>
double bisect(G&& g, double a, double b, double tol) {
  double ga = g(a);
  for (int it = 0; it < 200 && std::abs(b - a) > tol; ++it) {
    const double m = 0.5 * (a + b);
    const double gm = g(m);
    if (gm == 0.0) return m;
    if ((gm > 0.0) == (ga > 0.0)) {
      a = m;
      ga = gm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace translators::detail

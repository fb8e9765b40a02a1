#ifndef PARITYEST_GOLDEN_SECTION_HPP
#define PARITYEST_GOLDEN_SECTION_HPP

#include <cmath>

namespace parityest {

template <typename T>
struct ScalarOptimum {
  T x;
  T value;
};

/// Golden-section search for a maximum of a unimodal f on [lo, hi]; stops when
/// the bracket is narrower than tol.
template <typename T, typename F>
ScalarOptimum<T> golden_section_maximize(F&& f, T lo, T hi, T tol, int max_iterations = 200) {
  const T inv_phi = (std::sqrt(T(5)) - T(1)) / T(2);
  T c = hi - inv_phi * (hi - lo);
  T d = lo + inv_phi * (hi - lo);
  T fc = f(c);
  T fd = f(d);
  for (int it = 0; it < max_iterations && (hi - lo) > tol; ++it) {
    if (fc >= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
  }
  return fc >= fd ? ScalarOptimum<T>{c, fc} : ScalarOptimum<T>{d, fd};
}

} // namespace parityest

#endif

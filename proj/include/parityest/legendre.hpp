#ifndef PARITYEST_LEGENDRE_HPP
#define PARITYEST_LEGENDRE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace parityest {

/// P_l(x) by Bonnet's recurrence (l+1) P_{l+1} = (2l+1) x P_l - l P_{l-1}.
template <typename T>
inline T legendre(int l, T x) {
  if (l <= 0) return T(1);
  T p_prev = T(1);
  T p = x;
  for (int k = 1; k < l; ++k) {
    const T next = (T(2 * k + 1) * x * p - T(k) * p_prev) / T(k + 1);
    p_prev = p;
    p = next;
  }
  return p;
}

/// P_0(x) .. P_lmax(x) in one pass.
template <typename T>
inline std::vector<T> legendre_sequence(int lmax, T x) {
  std::vector<T> out(static_cast<std::size_t>(lmax < 0 ? 0 : lmax + 1));
  if (out.empty()) return out;
  out[0] = T(1);
  if (lmax >= 1) out[1] = x;
  for (int k = 1; k < lmax; ++k) {
    out[k + 1] = (T(2 * k + 1) * x * out[k] - T(k) * out[k - 1]) / T(k + 1);
  }
  return out;
}

/**
 * Associated Legendre functions with the normalization
 *
 *   Q_l^m(x) = sqrt((l-m)! / (l+m)!) P_l^m(x),   0 <= m <= l <= lmax,
 *
 * so that Q_l^m(cos b) is, up to sign, the Wigner element d^l_{m0}(b).  For
 * every l the squares satisfy Q_l^0^2 + 2 sum_{m>0} Q_l^m^2 = 1.
 *
 * Filled column by column: the sectoral seed Q_m^m, then the stable
 * three-term recurrence in l.  Entries that underflow near |x| = 1 are zero.
 */
class NormalizedAssociatedLegendre {
public:
  NormalizedAssociatedLegendre(int lmax, double x) : lmax_(lmax), values_(size_for(lmax), 0.0) {
    const double s = std::sqrt(std::max(0.0, 1.0 - x * x));
    double sectoral = 1.0;
    for (int m = 0; m <= lmax; ++m) {
      if (m > 0) sectoral *= -std::sqrt((2.0 * m - 1.0) / (2.0 * m)) * s;
      at(m, m) = sectoral;
      if (m + 1 <= lmax) at(m + 1, m) = x * std::sqrt(2.0 * m + 1.0) * sectoral;
      for (int l = m + 2; l <= lmax; ++l) {
        const double a = (2.0 * l - 1.0) * x * at(l - 1, m);
        const double b = std::sqrt(double(l - 1) * (l - 1) - double(m) * m) * at(l - 2, m);
        at(l, m) = (a - b) / std::sqrt(double(l) * l - double(m) * m);
      }
    }
  }

  int lmax() const { return lmax_; }
  double operator()(int l, int m) const { return values_[index(l, m)]; }

private:
  static std::size_t size_for(int lmax) {
    const auto n = static_cast<std::size_t>(lmax + 1);
    return n * (n + 1) / 2;
  }
  static std::size_t index(int l, int m) {
    return static_cast<std::size_t>(l) * static_cast<std::size_t>(l + 1) / 2 + static_cast<std::size_t>(m);
  }
  double& at(int l, int m) { return values_[index(l, m)]; }

  int lmax_;
  std::vector<double> values_;
};

} // namespace parityest

#endif

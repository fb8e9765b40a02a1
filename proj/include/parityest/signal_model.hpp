#ifndef PARITYEST_SIGNAL_MODEL_HPP
#define PARITYEST_SIGNAL_MODEL_HPP

#include <parityest/errors.hpp>
#include <parityest/legendre.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace parityest {

/// Two-mode squeezed vacuum described by its mean photon number, plus the
/// cumulative-weight cutoff applied to the twin-Fock expansion.
struct TmsvSpec {
  double n_bar = 1.0;
  double tail_epsilon = 1e-12;
};

/// Geometric twin-Fock weights p_n = (1 - t) t^n for n = 0..n_max.
struct TmsvWeights {
  double n_bar = 0.0;
  double t = 0.0;
  int n_max = 0;
  std::vector<double> p;

  /// Probability mass of the discarded terms n > n_max, i.e. t^(n_max+1).
  double tail_mass() const { return std::pow(t, n_max + 1); }
};

namespace detail {

inline void require_n_bar(double n_bar) {
  if (!std::isfinite(n_bar) || n_bar <= 0.0) {
    throw InvalidParameter("n_bar must be finite and > 0, got " + std::to_string(n_bar));
  }
}

inline void require_eta(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw InvalidParameter("eta must lie in [0, 1], got " + std::to_string(eta));
  }
}

// Twin-Fock cutoffs beyond this make table construction (cubic in n_max)
// impractical; n_bar = 8 needs about 125.
inline constexpr int max_fock_cutoff = 2048;

} // namespace detail

inline double tmsv_ratio(double n_bar) {
  detail::require_n_bar(n_bar);
  return 1.0 / (1.0 + 2.0 / n_bar);
}

/// Weights up to the smallest n_max whose cumulative weight 1 - t^(n_max+1)
/// reaches 1 - tail_epsilon.
inline TmsvWeights tmsv_weights(const TmsvSpec& spec) {
  const double t = tmsv_ratio(spec.n_bar);
  if (!(spec.tail_epsilon > 0.0 && spec.tail_epsilon < 1.0)) {
    throw InvalidParameter("tail_epsilon must lie in (0, 1)");
  }
  TmsvWeights w{spec.n_bar, t, 0, {}};
  double tail = t; // t^(n+1)
  double pn = 1.0 - t;
  for (int n = 0;; ++n) {
    w.p.push_back(pn);
    if (tail <= spec.tail_epsilon) {
      w.n_max = n;
      break;
    }
    if (n >= detail::max_fock_cutoff) {
      throw InvalidParameter("n_bar too large: Fock cutoff exceeds " +
                             std::to_string(detail::max_fock_cutoff));
    }
    tail *= t;
    pn *= t;
  }
  return w;
}

/// The first term_count weights (n = 0..term_count-1) without renormalization,
/// i.e. a plain truncation of the infinite sum.
inline TmsvWeights tmsv_weights_truncated(double n_bar, int term_count) {
  const double t = tmsv_ratio(n_bar);
  if (term_count < 1 || term_count > detail::max_fock_cutoff) {
    throw InvalidParameter("term_count out of range: " + std::to_string(term_count));
  }
  TmsvWeights w{n_bar, t, term_count - 1, {}};
  double pn = 1.0 - t;
  for (int n = 0; n < term_count; ++n, pn *= t) w.p.push_back(pn);
  return w;
}

/// Legendre term counts used for the lossless simulations in the reference
/// study, keyed by mean photon number.  Empty for unlisted n_bar.
inline std::optional<int> reference_term_count(double n_bar) {
  struct Row {
    double n_bar;
    int terms;
  };
  static constexpr Row rows[] = {{1.0, 10}, {2.0, 10}, {3.0, 15}, {5.0, 20}, {8.0, 25}};
  for (const auto& r : rows) {
    if (n_bar == r.n_bar) return r.terms;
  }
  return std::nullopt;
}

/// <Pi>(delta) = 1 / sqrt(1 + n(n+2) sin^2 delta) for a TMSV input.
inline double parity_closed_form(double n_bar, double delta) {
  detail::require_n_bar(n_bar);
  const double s = std::sin(delta);
  return 1.0 / std::sqrt(1.0 + n_bar * (n_bar + 2.0) * s * s);
}

/// Parity expectation for twin-Fock input |n,n>:
/// (-1)^n P_n(cos(2(delta + pi/2))) = (-1)^n P_n(-cos 2 delta).
inline double parity_fock(int n, double delta) {
  if (n < 0) throw InvalidParameter("Fock index must be >= 0");
  const double p = legendre(n, -std::cos(2.0 * delta));
  return (n % 2 == 0) ? p : -p;
}

/// Photon-count distribution at the measured port for |n,n> at phase
/// difference delta.  probs[k] for k = 0..2n.
struct PortDistribution {
  int n = 0;
  double delta = 0.0;
  std::vector<double> probs;

  double parity_moment() const {
    double acc = 0.0;
    for (std::size_t k = 0; k < probs.size(); ++k) acc += (k % 2 == 0) ? probs[k] : -probs[k];
    return acc;
  }
};

namespace detail {

// The interferometer rotates the twin-Fock state (angular momentum j = n,
// m = 0) by b = delta + pi/2; P(k = n +- m) = d^n_{m0}(b)^2.  The pi/2 offset
// makes delta = 0 the balanced, fully bunched operating point.
inline double rotation_argument(double delta) { return -std::sin(delta); }

inline PortDistribution port_distribution_from(const NormalizedAssociatedLegendre& q, int n,
                                               double delta) {
  PortDistribution d{n, delta, std::vector<double>(static_cast<std::size_t>(2 * n + 1), 0.0)};
  for (int m = 0; m <= n; ++m) {
    const double v = q(n, m);
    d.probs[static_cast<std::size_t>(n + m)] = v * v;
    d.probs[static_cast<std::size_t>(n - m)] = v * v;
  }
  return d;
}

} // namespace detail

inline PortDistribution port_distribution(int n, double delta) {
  if (n < 0) throw InvalidParameter("Fock index must be >= 0");
  const NormalizedAssociatedLegendre q(n, detail::rotation_argument(delta));
  return detail::port_distribution_from(q, n, delta);
}

/// Probability that binomial thinning with efficiency eta leaves an even count
/// out of s photons, via (1 + (1 - 2 eta)^s) / 2.
inline double even_survivor_probability(int s, double eta) {
  return 0.5 * (1.0 + std::pow(1.0 - 2.0 * eta, s));
}

/// Even-minus-odd detection probability G(delta) after binomial thinning:
/// sum_n p_n sum_k P(k|n,delta) (1 - 2 eta)^k.
inline double lossy_signal(const TmsvWeights& w, double eta, double delta) {
  detail::require_eta(eta);
  const int n_max = w.n_max;
  const NormalizedAssociatedLegendre q(n_max, detail::rotation_argument(delta));
  const double r = 1.0 - 2.0 * eta;
  std::vector<double> rpow(static_cast<std::size_t>(2 * n_max + 1));
  rpow[0] = 1.0;
  for (std::size_t k = 1; k < rpow.size(); ++k) rpow[k] = rpow[k - 1] * r;

  double g = 0.0;
  for (int n = 0; n <= n_max; ++n) {
    const double q0 = q(n, 0);
    double moment = q0 * q0 * rpow[static_cast<std::size_t>(n)];
    for (int m = 1; m <= n; ++m) {
      const double v = q(n, m);
      moment += v * v * (rpow[static_cast<std::size_t>(n - m)] + rpow[static_cast<std::size_t>(n + m)]);
    }
    g += w.p[static_cast<std::size_t>(n)] * moment;
  }
  return g;
}

inline double lossy_signal(const TmsvSpec& spec, double eta, double delta) {
  return lossy_signal(tmsv_weights(spec), eta, delta);
}

/// How the twin-Fock sum behind a table was truncated.
struct TableConstruction {
  double tail_epsilon = 1e-12; // used when term_count is empty
  std::optional<int> term_count; // fixed Legendre term count
  double coeff_epsilon = 1e-12;
  int grid_size = 0; // 0 = automatic

  bool operator==(const TableConstruction&) const = default;
};

/**
 * Cosine-series representation of the detection signal
 *
 *   G(delta) = sum_{j=-xL}^{xL} c_|j| e^{2 i j delta} = c_0 + 2 sum_{j>=1} c_j cos(2 j delta),
 *
 * with P_even = (1 + G) / 2.  Immutable after construction.
 */
class LikelihoodTable {
public:
  /// Wraps precomputed coefficients; no physics checks.
  static LikelihoodTable from_coefficients(double n_bar, double eta, int n_max,
                                           TableConstruction construction,
                                           std::vector<double> coefficients) {
    if (coefficients.empty()) throw ConstructionError("likelihood table needs c_0");
    LikelihoodTable t;
    t.n_bar_ = n_bar;
    t.eta_ = eta;
    t.n_max_ = n_max;
    t.construction_ = construction;
    t.c_ = std::move(coefficients);
    return t;
  }

  double n_bar() const { return n_bar_; }
  double eta() const { return eta_; }
  int n_max() const { return n_max_; }
  /// Highest retained harmonic x_L.
  int max_harmonic() const { return static_cast<int>(c_.size()) - 1; }
  std::span<const double> coefficients() const { return c_; }
  double coefficient(int j) const {
    const int a = j < 0 ? -j : j;
    return a < static_cast<int>(c_.size()) ? c_[static_cast<std::size_t>(a)] : 0.0;
  }
  const TableConstruction& construction() const { return construction_; }

  /// G(delta) by Clenshaw summation of the Chebyshev series in cos 2 delta.
  double signal(double delta) const {
    const double y = std::cos(2.0 * delta);
    double b1 = 0.0;
    double b2 = 0.0;
    for (std::size_t j = c_.size() - 1; j >= 1; --j) {
      const double b0 = 2.0 * c_[j] + 2.0 * y * b1 - b2;
      b2 = b1;
      b1 = b0;
    }
    return c_[0] + y * b1 - b2;
  }

  bool operator==(const LikelihoodTable&) const = default;

private:
  LikelihoodTable() = default;

  double n_bar_ = 0.0;
  double eta_ = 1.0;
  int n_max_ = 0;
  TableConstruction construction_{};
  std::vector<double> c_;
};

namespace detail {

inline int default_grid_size(int n_max) {
  int n = 64;
  while (n < 4 * std::max(n_max, 1)) n *= 2;
  return n;
}

} // namespace detail

/// Samples G on a uniform grid over one period and extracts c_j by discrete
/// cosine analysis.  With the tail_epsilon cutoff the retained weights are
/// renormalized.  Harmonics beyond n_max are identically zero, so any grid
/// of at least 2 n_max + 1 points is alias-free; we require 4 n_max.
inline LikelihoodTable build_likelihood_table(double n_bar, double eta,
                                              const TableConstruction& construction = {}) {
  detail::require_n_bar(n_bar);
  detail::require_eta(eta);
  if (!(construction.coeff_epsilon >= 0.0)) throw InvalidParameter("coeff_epsilon must be >= 0");
  TmsvWeights w = construction.term_count ? tmsv_weights_truncated(n_bar, *construction.term_count)
                                          : tmsv_weights({n_bar, construction.tail_epsilon});
  if (!construction.term_count) {
    // Condition on n <= n_max so that P_even + P_odd = 1 exactly in the
    // constant term; a fixed term count keeps the raw truncated sum.
    double mass = 0.0;
    for (double p : w.p) mass += p;
    for (double& p : w.p) p /= mass;
  }

  const int grid = construction.grid_size > 0 ? construction.grid_size : detail::default_grid_size(w.n_max);
  if ((grid & (grid - 1)) != 0) {
    throw ConstructionError("grid size must be a power of two, got " + std::to_string(grid));
  }
  if (grid < 4 * std::max(w.n_max, 1)) {
    throw ConstructionError("grid of " + std::to_string(grid) + " points cannot resolve harmonic " +
                            std::to_string(w.n_max));
  }

  std::vector<double> samples(static_cast<std::size_t>(grid));
  for (int k = 0; k < grid; ++k) {
    samples[static_cast<std::size_t>(k)] = lossy_signal(w, eta, std::numbers::pi * k / grid);
  }

  std::vector<double> c(static_cast<std::size_t>(w.n_max + 1), 0.0);
  for (int j = 0; j <= w.n_max; ++j) {
    double acc = 0.0;
    for (int k = 0; k < grid; ++k) {
      // cos(2 j delta_k) with delta_k = pi k / grid; reduce the index exactly.
      const long long phase = (2LL * j * k) % (2LL * grid);
      acc += samples[static_cast<std::size_t>(k)] * std::cos(std::numbers::pi * double(phase) / grid);
    }
    c[static_cast<std::size_t>(j)] = acc / grid;
  }
  while (c.size() > 1 && std::abs(c.back()) < construction.coeff_epsilon) c.pop_back();

  return LikelihoodTable::from_coefficients(n_bar, eta, w.n_max, construction, std::move(c));
}

/// Table with the reference study's fixed Legendre term count.
inline LikelihoodTable build_reference_table(double n_bar, double eta, int term_count,
                                             double coeff_epsilon = 1e-12) {
  TableConstruction tc;
  tc.term_count = term_count;
  tc.coeff_epsilon = coeff_epsilon;
  return build_likelihood_table(n_bar, eta, tc);
}

/// P_even = (1 + G(theta - phi)) / 2, clamped against truncation excursions.
inline double even_probability(const LikelihoodTable& table, double phi, double theta) {
  const double pe = 0.5 * (1.0 + table.signal(theta - phi));
  return std::clamp(pe, 0.0, 1.0);
}

inline double odd_probability(const LikelihoodTable& table, double phi, double theta) {
  return 1.0 - even_probability(table, phi, theta);
}

/// Two-outcome Fisher information of lossless parity detection.
inline double fisher_information(double n_bar, double delta) {
  detail::require_n_bar(n_bar);
  const double k = n_bar * (n_bar + 2.0);
  const double c = std::cos(delta);
  const double s = std::sin(delta);
  const double den = 1.0 + k * s * s;
  return c * c * k / (den * den);
}

struct ReferenceLimits {
  double heisenberg;
  double cramer_rao;
  double shot_noise;
};

/// Heisenberg 1/(M n^2), Cramer-Rao 1/(M n(n+2)) and shot-noise 1/(M n).
inline ReferenceLimits reference_limits(double n_bar, int records) {
  detail::require_n_bar(n_bar);
  if (records < 1) throw InvalidParameter("M must be >= 1");
  const double m = records;
  return {1.0 / (m * n_bar * n_bar), 1.0 / (m * n_bar * (n_bar + 2.0)), 1.0 / (m * n_bar)};
}

} // namespace parityest

#endif

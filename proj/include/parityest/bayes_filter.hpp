#ifndef PARITYEST_BAYES_FILTER_HPP
#define PARITYEST_BAYES_FILTER_HPP

#include <parityest/errors.hpp>
#include <parityest/signal_model.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace parityest {

using cplx = std::complex<double>;

enum class Outcome { even, odd };

/**
 * Phase posterior on the period-pi circle as a truncated Fourier series
 *
 *   P(phi) = (1/pi) sum_{j=-x}^{x} a_j e^{2 i j phi},   phi in [0, pi),
 *
 * with a_0 = 1 (unit mass) and a_{-j} = conj(a_j).  Only a_0..a_x are stored.
 */
class FourierPosterior {
public:
  FourierPosterior() : a_{cplx{1.0, 0.0}} {}

  /// From a_1..a_x; a_0 is fixed to 1.
  static FourierPosterior from_coefficients(std::span<const cplx> positive) {
    FourierPosterior p;
    p.a_.insert(p.a_.end(), positive.begin(), positive.end());
    return p;
  }

  int order() const { return static_cast<int>(a_.size()) - 1; }

  /// a_j for any j, using conjugate symmetry and zero beyond the order.
  cplx coefficient(int j) const {
    const int k = j < 0 ? -j : j;
    if (k >= static_cast<int>(a_.size())) return {};
    const cplx v = a_[static_cast<std::size_t>(k)];
    return j < 0 ? std::conj(v) : v;
  }

  /// a_0..a_x.
  std::span<const cplx> coefficients() const { return a_; }

  double density(double phi) const {
    double acc = 0.0;
    const cplx step = std::polar(1.0, 2.0 * phi);
    cplx z = step;
    for (std::size_t j = 1; j < a_.size(); ++j, z *= step) acc += (a_[j] * z).real();
    return (1.0 + 2.0 * acc) / std::numbers::pi;
  }

  /// Posterior of phi + shift: a_j -> a_j e^{-2 i j shift}.
  FourierPosterior shifted(double shift) const {
    FourierPosterior p = *this;
    for (std::size_t j = 1; j < p.a_.size(); ++j) p.a_[j] *= std::polar(1.0, -2.0 * double(j) * shift);
    return p;
  }

  bool operator==(const FourierPosterior&) const = default;

private:
  friend class PosteriorBuilder;
  std::vector<cplx> a_;
};

/// Bounds on posterior growth.
struct PosteriorLimits {
  /// Hard cap on the posterior order.
  int max_order = 4096;
  /// Trailing coefficients with |a_j| below this are dropped after each update.
  double trim_floor = 1e-13;
  /// Energy fraction beyond max_order that may be discarded silently.
  double tail_energy_tolerance = 1e-14;

  bool operator==(const PosteriorLimits&) const = default;
};

/// Internal: owns coefficient storage while an update is assembled.
class PosteriorBuilder {
public:
  /// Outcome probabilities at or below this are rounding residue of an
  /// impossible outcome.
  static constexpr double min_outcome_probability = 1e-14;

  static FourierPosterior finish(std::vector<cplx> raw, const PosteriorLimits& limits) {
    const double mass = raw[0].real();
    if (!(mass > min_outcome_probability) || !std::isfinite(mass)) {
      throw DegenerateUpdate("posterior mass " + std::to_string(mass) + " after update");
    }
    const double inv = 1.0 / mass;
    for (auto& v : raw) v *= inv;
    raw[0] = cplx{1.0, 0.0};

    std::size_t keep = raw.size();
    while (keep > 1 && std::abs(raw[keep - 1]) < limits.trim_floor) --keep;
    raw.resize(keep);

    const auto cap = static_cast<std::size_t>(limits.max_order) + 1;
    if (raw.size() > cap) {
      double total = 1.0;
      double dropped = 0.0;
      for (std::size_t j = 1; j < raw.size(); ++j) {
        const double e = 2.0 * std::norm(raw[j]);
        total += e;
        if (j >= cap) dropped += e;
      }
      if (dropped > limits.tail_energy_tolerance * total) {
        throw CapacityError("posterior order " + std::to_string(raw.size() - 1) + " exceeds cap " +
                            std::to_string(limits.max_order) + " with tail energy fraction " +
                            std::to_string(dropped / total));
      }
      raw.resize(cap);
    }
    FourierPosterior p;
    p.a_ = std::move(raw);
    return p;
  }
};

inline FourierPosterior flat_prior() { return FourierPosterior{}; }

/**
 * Coefficients of the detection likelihood P(mu | phi, theta) = (1 +- G(theta - phi)) / 2
 * as a series in e^{2 i h phi}:  l_0 = (1 +- c_0)/2, l_h = +-(1/2) c_|h| e^{-2 i h theta}.
 * Returned for h = 0..x_L; l_{-h} = conj(l_h).
 */
inline std::vector<cplx> likelihood_harmonics(const LikelihoodTable& table, Outcome mu, double theta) {
  const double sign = mu == Outcome::even ? 1.0 : -1.0;
  const auto c = table.coefficients();
  std::vector<cplx> l(c.size());
  l[0] = 0.5 * (1.0 + sign * c[0]);
  for (std::size_t h = 1; h < c.size(); ++h) {
    l[h] = 0.5 * sign * c[h] * std::polar(1.0, -2.0 * double(h) * theta);
  }
  return l;
}

/// Bayes update: multiply by the likelihood (a coefficient convolution) and
/// renormalize so a_0 = 1.
inline FourierPosterior update(const FourierPosterior& post, Outcome mu, double theta,
                               const LikelihoodTable& table, const PosteriorLimits& limits = {}) {
  const int x = post.order();
  const int xl = table.max_harmonic();
  const auto lpos = likelihood_harmonics(table, mu, theta);

  // Two-sided views indexed from -x and -xl.
  std::vector<cplx> a(static_cast<std::size_t>(2 * x + 1));
  for (int j = -x; j <= x; ++j) a[static_cast<std::size_t>(j + x)] = post.coefficient(j);
  std::vector<cplx> l(static_cast<std::size_t>(2 * xl + 1));
  for (int h = 0; h <= xl; ++h) {
    l[static_cast<std::size_t>(xl + h)] = lpos[static_cast<std::size_t>(h)];
    l[static_cast<std::size_t>(xl - h)] = std::conj(lpos[static_cast<std::size_t>(h)]);
  }

  const int nx = x + xl;
  std::vector<cplx> b(static_cast<std::size_t>(nx + 1));
  for (int k = 0; k <= nx; ++k) {
    const int hlo = std::max(-xl, k - x);
    const int hhi = std::min(xl, k + x);
    cplx acc{};
    for (int h = hlo; h <= hhi; ++h) {
      acc += l[static_cast<std::size_t>(h + xl)] * a[static_cast<std::size_t>(k - h + x)];
    }
    b[static_cast<std::size_t>(k)] = acc;
  }
  return PosteriorBuilder::finish(std::move(b), limits);
}

/// |<e^{2 i phi}>| = |a_1|.
inline double sharpness(const FourierPosterior& post) { return std::abs(post.coefficient(1)); }

namespace detail {
inline constexpr double min_estimable_sharpness = 1e-15;

/// Map onto (-pi/2, pi/2].
inline double wrap_half_period(double v) {
  constexpr double pi = std::numbers::pi;
  double r = std::fmod(v + pi / 2, pi);
  if (r <= 0.0) r += pi;
  return r - pi / 2;
}
} // namespace detail

/// phi_hat = arg(<e^{2 i phi}>) / 2 = -arg(a_1) / 2 in (-pi/2, pi/2].
inline double estimate(const FourierPosterior& post) {
  const cplx mean_exp = post.coefficient(-1); // <e^{2 i phi}> = a_{-1}
  if (!(std::abs(mean_exp) > detail::min_estimable_sharpness)) {
    throw UndefinedSignal("posterior has zero sharpness; no phase estimate");
  }
  return detail::wrap_half_period(0.5 * std::arg(mean_exp));
}

/// (estimate - true_phi) wrapped into (-pi/2, pi/2].
inline double wrapped_error(double estimate_value, double true_phi) {
  return detail::wrap_half_period(estimate_value - true_phi);
}

/// Density on the uniform grid phi_i = -pi/2 + pi (i+1)/n, i = 0..n-1.
inline std::vector<std::pair<double, double>> density_curve(const FourierPosterior& post, int grid_size) {
  if (grid_size < 2 * post.order() + 1) {
    throw InvalidParameter("density grid of " + std::to_string(grid_size) +
                           " points is below 2x+1 = " + std::to_string(2 * post.order() + 1));
  }
  std::vector<std::pair<double, double>> out;
  out.reserve(static_cast<std::size_t>(grid_size));
  for (int i = 0; i < grid_size; ++i) {
    const double phi = -std::numbers::pi / 2 + std::numbers::pi * (i + 1) / grid_size;
    out.emplace_back(phi, post.density(phi));
  }
  return out;
}

/// Posterior probability of lo < phi < hi (an interval shorter than pi).
inline double interval_mass(const FourierPosterior& post, double lo, double hi) {
  double acc = (hi - lo) / std::numbers::pi;
  const auto a = post.coefficients();
  for (std::size_t j = 1; j < a.size(); ++j) {
    const double w = 2.0 * double(j);
    const cplx diff = std::polar(1.0, w * hi) - std::polar(1.0, w * lo);
    acc += (2.0 / std::numbers::pi) * (a[j] * diff / cplx{0.0, w}).real();
  }
  return acc;
}

/**
 * Posterior after M detections at a fixed control phase, ell of them even:
 * proportional to P_e^ell P_o^(M-ell).  Outcomes are interleaved so every
 * intermediate posterior has the shape of the final one.
 */
inline FourierPosterior static_posterior(int detections, int ell, double theta, const LikelihoodTable& table,
                                         const PosteriorLimits& limits = {}) {
  if (detections < 0 || ell < 0 || ell > detections) {
    throw InvalidParameter("need 0 <= ell <= M, got ell = " + std::to_string(ell) +
                           ", M = " + std::to_string(detections));
  }
  FourierPosterior post = flat_prior();
  long long evens_done = 0;
  for (int m = 1; m <= detections; ++m) {
    const long long evens_due = static_cast<long long>(ell) * m / detections;
    const Outcome mu = evens_due > evens_done ? Outcome::even : Outcome::odd;
    if (mu == Outcome::even) ++evens_done;
    post = update(post, mu, theta, table, limits);
  }
  return post;
}

} // namespace parityest

#endif

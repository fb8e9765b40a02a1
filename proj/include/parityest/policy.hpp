#ifndef PARITYEST_POLICY_HPP
#define PARITYEST_POLICY_HPP

#include <parityest/bayes_filter.hpp>
#include <parityest/errors.hpp>
#include <parityest/golden_section.hpp>
#include <parityest/random.hpp>
#include <parityest/signal_model.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

namespace parityest {

/// Pick the control phase that maximizes the expected sharpness after the
/// next detection.  grid_points = 0 selects max(256, 8 (x_L + 2)).
struct AdaptivePolicy {
  int grid_points = 0;
  double refine_tolerance = 1e-6;
  bool operator==(const AdaptivePolicy&) const = default;
};

/// Hold the control phase at theta0 for every detection.
struct StaticPolicy {
  double theta0 = 0.0;
  bool operator==(const StaticPolicy&) const = default;
};

using ControlPolicy = std::variant<AdaptivePolicy, StaticPolicy>;

/// Smallest coarse grid that samples every oscillation of the objective, a
/// trigonometric expression of harmonic order at most x_L + 2.
inline int required_grid_points(const LikelihoodTable& table) { return 8 * (table.max_harmonic() + 2); }

inline int effective_grid_points(const AdaptivePolicy& p, const LikelihoodTable& table) {
  const int need = required_grid_points(table);
  if (p.grid_points == 0) return std::max(256, need);
  if (p.grid_points < need) {
    throw InvalidParameter("adaptive grid of " + std::to_string(p.grid_points) + " points is below " +
                           std::to_string(need) + " = 8 (x_L + 2)");
  }
  return p.grid_points;
}

/// First control phase: uniform on [0, pi) for the adaptive rule, so the
/// scheme is covariant; theta0 for a static policy.
inline double initial_phase(const ControlPolicy& policy, Engine& rng) {
  if (const auto* s = std::get_if<StaticPolicy>(&policy)) return s->theta0;
  return std::numbers::pi * uniform01(rng);
}

/**
 * Expected sharpness after one more detection at control phase theta,
 *
 *   s_av(theta) = sum_mu |b^mu_{-1}(theta)|,
 *
 * where b^mu is the unnormalized posterior after outcome mu; its harmonic -1
 * carries the outcome probability times <e^{2 i phi}>.  Writing
 * S(theta) = sum_h c_|h| e^{-2 i h theta} a_{-1-h}, the two branches are
 * (a_{-1} +- S) / 2.  Only the posterior window a_{-1-xL}..a_{-1+xL} enters.
 */
class SharpnessObjective {
public:
  SharpnessObjective(const FourierPosterior& post, const LikelihoodTable& table)
      : xl_(table.max_harmonic()), centre_(post.coefficient(-1)) {
    // w[i] = c_|h| a_{-1-h} for h = i - xl, i = 0..2 xl.
    weights_.resize(static_cast<std::size_t>(2 * xl_ + 1));
    for (int h = -xl_; h <= xl_; ++h) {
      weights_[static_cast<std::size_t>(h + xl_)] = table.coefficient(h) * post.coefficient(-1 - h);
    }
  }

  double operator()(double theta) const {
    // Horner in z = e^{-2 i theta}: S = z^{-xl} sum_i w[i] z^i.
    const cplx z = std::polar(1.0, -2.0 * theta);
    cplx acc{};
    for (auto it = weights_.rbegin(); it != weights_.rend(); ++it) acc = acc * z + *it;
    const cplx s = acc * std::polar(1.0, 2.0 * double(xl_) * theta);
    return 0.5 * (std::abs(centre_ + s) + std::abs(centre_ - s));
  }

private:
  int xl_;
  cplx centre_;
  std::vector<cplx> weights_;
};

inline double predicted_average_sharpness(const FourierPosterior& post, const LikelihoodTable& table,
                                          double theta) {
  return SharpnessObjective(post, table)(theta);
}

namespace detail {
inline double wrap_period(double v) {
  constexpr double pi = std::numbers::pi;
  double r = std::fmod(v, pi);
  if (r < 0.0) r += pi;
  return r >= pi ? 0.0 : r;
}
} // namespace detail

/// Relative gap below which two objective values count as tied.
inline constexpr double tie_tolerance = 1e-12;

/// Control phase for the next detection, in [0, pi) for the adaptive rule.
/// Coarse grid scan (lowest theta wins ties), then golden-section refinement
/// inside the neighbouring grid cells; the refined point is kept only if it
/// beats the grid maximum by more than a tie.
inline double choose_phase(const FourierPosterior& post, const LikelihoodTable& table,
                           const ControlPolicy& policy) {
  if (const auto* s = std::get_if<StaticPolicy>(&policy)) return s->theta0;
  const auto& adaptive = std::get<AdaptivePolicy>(policy);
  const int n = effective_grid_points(adaptive, table);
  const SharpnessObjective objective(post, table);
  auto beats = [](double v, double best) { return v > best + tie_tolerance * std::abs(best); };

  const double step = std::numbers::pi / n;
  int best = 0;
  double best_value = objective(0.0);
  for (int i = 1; i < n; ++i) {
    const double v = objective(step * i);
    if (beats(v, best_value)) {
      best_value = v;
      best = i;
    }
  }
  const double centre = step * best;
  const auto refined =
      golden_section_maximize(objective, centre - step, centre + step, adaptive.refine_tolerance);
  if (beats(refined.value, best_value)) return detail::wrap_period(refined.x);
  return centre;
}

} // namespace parityest

#endif

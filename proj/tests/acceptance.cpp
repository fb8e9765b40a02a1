// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance [--criterion N]...   (default: all)
//
// Exit status is 0 when every selected criterion passes.

#include <parityest/montecarlo.hpp>
#include <parityest/verification.hpp>

#include <fmt/core.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

using namespace parityest;

namespace {

constexpr double pi = std::numbers::pi;

struct Verdict {
  bool passed;
  std::string detail;
};

struct Criterion {
  int id;
  const char* title;
  double time_budget_s; // 0 = no budget
  std::function<Verdict()> run;
};

// --- tolerances --------------------------------------------------------------

constexpr double oracle_tolerance = 1e-8;
constexpr double closed_form_tolerance = 1e-8;
constexpr double term_count_tolerance = 1e-4;
constexpr double fisher_relative_tolerance = 1e-6;
constexpr double fisher_peak_tolerance = 1e-12;
constexpr double reference_mse = 3.81e-4;
constexpr double reference_mse_band = 0.15;
constexpr double hl_sigma = 3.0;
constexpr double crb_excess = 1.10;
constexpr double crb_sigma = 3.0;
constexpr double loss_ratio_floor = 8.0;
constexpr double sign_mass_floor = 0.90;
constexpr double sign_record_fraction = 0.95;
constexpr std::uint64_t seed = 20240601;

// --- 1 ---------------------------------------------------------------------

Verdict oracle_equivalence() {
  const auto r = check_oracle_equivalence();
  return {r.max_deviation <= oracle_tolerance,
          fmt::format("max excess over tail bound {:.3g} (tol {:.0e})", r.max_deviation, oracle_tolerance)};
}

// --- 2 ---------------------------------------------------------------------

double max_truncation_error(double n_bar, const TmsvWeights& w) {
  double worst = 0.0;
  for (int i = 0; i < 1024; ++i) {
    const double delta = pi * i / 1024;
    double g = 0.0;
    for (int n = 0; n <= w.n_max; ++n) g += w.p[static_cast<std::size_t>(n)] * parity_fock(n, delta);
    worst = std::max(worst, std::abs(g - parity_closed_form(n_bar, delta)));
  }
  return worst;
}

Verdict closed_form_consistency() {
  bool ok = true;
  std::string detail;
  double worst_eps = 0.0;
  for (double n_bar : {1.0, 2.0, 3.0, 5.0, 8.0}) {
    worst_eps = std::max(worst_eps, max_truncation_error(n_bar, tmsv_weights({n_bar, 1e-12})));
  }
  ok = ok && worst_eps <= closed_form_tolerance;
  detail += fmt::format("tail_eps=1e-12: {:.2g} (tol {:.0e}); fixed term counts:", worst_eps, closed_form_tolerance);
  for (double n_bar : {1.0, 2.0, 3.0, 5.0, 8.0}) {
    const int terms = *reference_term_count(n_bar);
    const double dev = max_truncation_error(n_bar, tmsv_weights_truncated(n_bar, terms));
    const bool pass = dev <= term_count_tolerance;
    ok = ok && pass;
    detail += fmt::format(" n={}/{} terms {:.2g}{}", n_bar, terms, dev, pass ? "" : "!");
  }
  detail += fmt::format(" (tol {:.0e})", term_count_tolerance);
  return {ok, detail};
}

// --- 3 ---------------------------------------------------------------------

Verdict fisher_identities() {
  double worst_rel = 0.0;
  double worst_peak = 0.0;
  for (double n_bar : {0.5, 1.0, 2.0, 3.0, 5.0, 8.0}) {
    worst_peak = std::max(worst_peak, std::abs(fisher_information(n_bar, 0.0) - n_bar * (n_bar + 2.0)));
    const auto table = build_likelihood_table(n_bar, 1.0);
    auto pe = [&](double x) { return even_probability(table, 0.0, x); };
    const double h = 1e-3;
    for (int i = 1; i < 64; ++i) {
      const double d = 0.05 + (pi / 2 - 0.1) * i / 64;
      const double dp = (-pe(d + 2 * h) + 8 * pe(d + h) - 8 * pe(d - h) + pe(d - 2 * h)) / (12 * h);
      const double p = pe(d);
      const double numeric = dp * dp / (p * (1.0 - p));
      const double exact = fisher_information(n_bar, d);
      worst_rel = std::max(worst_rel, std::abs(numeric - exact) / exact);
    }
  }
  return {worst_rel <= fisher_relative_tolerance && worst_peak <= fisher_peak_tolerance,
          fmt::format("finite-difference rel dev {:.2g} (tol {:.0e}); peak dev {:.2g} (tol {:.0e})", worst_rel,
                      fisher_relative_tolerance, worst_peak, fisher_peak_tolerance)};
}

// --- 4-7 -------------------------------------------------------------------

TrialConfig adaptive(double n_bar, double eta, int detections, double phi = 0.5) {
  TrialConfig c;
  c.n_bar = n_bar;
  c.eta = eta;
  c.detections = detections;
  c.phase = FixedPhase{phi};
  c.master_seed = seed;
  return c;
}

Verdict reference_mse_check() {
  const auto s = run_ensemble(adaptive(3.0, 1.0, 256), 2000);
  const double rel = s.mse / reference_mse - 1.0;
  return {std::abs(rel) <= reference_mse_band,
          fmt::format("MSE {:.4g} +- {:.2g} vs {:.3g} ({:+.1f}%, band +-{:.0f}%)", s.mse, s.mse_se, reference_mse,
                      100 * rel, 100 * reference_mse_band)};
}

Verdict heisenberg_check() {
  const auto s = run_ensemble(adaptive(1.0, 1.0, 128), 2000);
  const double margin = (1.0 - s.hl_ratio) / s.hl_ratio_se();
  return {margin > hl_sigma, fmt::format("hl_ratio {:.4f} +- {:.4f}, {:.1f} SE below 1 (need > {:.0f})", s.hl_ratio,
                                         s.hl_ratio_se(), margin, hl_sigma)};
}

Verdict cramer_rao_check() {
  const auto s = run_ensemble(adaptive(1.0, 1.0, 3096), 500);
  const double bound = crb_excess + crb_sigma * s.crb_ratio_se();
  return {s.crb_ratio <= bound,
          fmt::format("crb_ratio {:.4f} +- {:.4f} (limit {:.4f})", s.crb_ratio, s.crb_ratio_se(), bound)};
}

Verdict loss_check() {
  const auto lossless = run_ensemble(adaptive(3.0, 1.0, 1024), 1000);
  const auto lossy = run_ensemble(adaptive(3.0, 0.9, 1024), 1000);
  const double ratio = lossy.mse / lossless.mse;
  return {ratio >= loss_ratio_floor, fmt::format("MSE eta=0.9 {:.3g} / eta=1 {:.3g} = {:.2f} (need >= {:.0f})",
                                                 lossy.mse, lossless.mse, ratio, loss_ratio_floor)};
}

// --- 8 ---------------------------------------------------------------------

Verdict ambiguity_contrast() {
  TrialConfig stat = adaptive(3.0, 1.0, 512, 0.15);
  stat.policy = StaticPolicy{0.0};
  const auto table = build_table(stat);
  double max_imag = 0.0;
  auto track = [&](const FourierPosterior& post) {
    for (auto a : post.coefficients()) max_imag = std::max(max_imag, std::abs(a.imag()));
  };
  for (long long i = 0; i < 20; ++i) track(simulate_record(stat, table, i).posterior);
  for (int ell : {400, 466, 500}) track(static_posterior(512, ell, 0.0, table));

  const TrialConfig adapt = adaptive(3.0, 1.0, 512, 0.15);
  constexpr int records = 200;
  int resolved = 0;
  double lowest = 1.0;
  for (long long i = 0; i < records; ++i) {
    const double mass = interval_mass(simulate_record(adapt, table, i).posterior, 0.0, pi / 2);
    lowest = std::min(lowest, mass);
    resolved += mass >= sign_mass_floor;
  }
  const double fraction = double(resolved) / records;
  return {max_imag == 0.0 && fraction >= sign_record_fraction,
          fmt::format("static max |Im a_j| = {:.2g}; adaptive records with >= {:.0f}% true-sign mass: {}/{} "
                      "(need {:.0f}%), lowest {:.3f}",
                      max_imag, 100 * sign_mass_floor, resolved, records, 100 * sign_record_fraction, lowest)};
}

// --- 9 ---------------------------------------------------------------------

Verdict invariant_suites() {
  std::vector<std::string> failed;
  auto expect = [&](bool cond, const char* name) {
    if (!cond) failed.emplace_back(name);
  };

  // Posterior normalization, reality, negativity bound.
  {
    const auto table = build_likelihood_table(3.0, 1.0);
    TrialConfig c = adaptive(3.0, 1.0, 128);
    double worst_norm = 0.0, worst_neg = 0.0, worst_mod = 0.0;
    for (long long i = 0; i < 10; ++i) {
      const auto post = simulate_record(c, table, i).posterior;
      double integral = 0.0;
      for (int k = 0; k < 512; ++k) {
        const double d = post.density(pi * k / 512);
        integral += d * pi / 512;
        worst_neg = std::min(worst_neg, d);
      }
      worst_norm = std::max(worst_norm, std::abs(integral - 1.0));
      for (auto a : post.coefficients()) worst_mod = std::max(worst_mod, std::abs(a) - 1.0);
    }
    expect(worst_norm <= 1e-6, "normalization");
    expect(worst_neg >= -1e-6, "negativity");
    expect(worst_mod <= 1e-9, "coefficient modulus");
    const auto stat = static_posterior(256, 200, 0.8, table).shifted(-0.8);
    double imag = 0.0;
    for (auto a : stat.coefficients()) imag = std::max(imag, std::abs(a.imag()));
    expect(imag <= 1e-12, "static mirror symmetry");
  }

  expect(check_thinning_identity().passed, "thinning identity");
  expect(check_port_distributions().passed, "port-distribution parity");

  // Argmax correctness and covariance.
  {
    const auto table = build_likelihood_table(3.0, 1.0);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto random_posterior = [&] {
      std::vector<cplx> a;
      for (int j = 1; j <= 60; ++j) a.push_back(std::exp(-j / 6.0) * u(rng) * std::polar(1.0, 2 * pi * u(rng)));
      return FourierPosterior::from_coefficients(a);
    };
    auto dist = [](double a, double b) {
      const double d = std::fmod(std::abs(a - b), pi);
      return std::min(d, pi - d);
    };
    const AdaptivePolicy policy{};
    constexpr int dense = 16384;
    const double tol = 2.0 * std::max(policy.refine_tolerance, pi / dense);
    int misses = 0, drifts = 0;
    for (int k = 0; k < 100; ++k) {
      const auto post = random_posterior();
      const SharpnessObjective f(post, table);
      double best = 0.0, best_value = f(0.0);
      for (int i = 1; i < dense; ++i) {
        const double v = f(pi * i / dense);
        if (v > best_value) best_value = v, best = pi * i / dense;
      }
      const double chosen = choose_phase(post, table, policy);
      misses += dist(chosen, best) > tol;
      if (k < 20) drifts += dist(choose_phase(post.shifted(0.37), table, policy), chosen + 0.37) > 2 * policy.refine_tolerance;
    }
    expect(misses == 0, "argmax correctness");
    expect(drifts == 0, "covariance");
  }

  // Determinism across worker counts.
  {
    TrialConfig c = adaptive(2.0, 0.95, 32);
    const auto table = build_table(c);
    expect(record_errors(c, table, 0, 16, {1}) == record_errors(c, table, 0, 16, {4}), "worker-count determinism");
  }

  std::string detail = failed.empty() ? "all invariant families hold" : "failed:";
  for (const auto& f : failed) detail += " " + f;
  return {failed.empty(), detail};
}

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all{
      {1, "oracle equivalence", 10.0, oracle_equivalence},
      {2, "closed-form consistency", 5.0, closed_form_consistency},
      {3, "Fisher/CRB identities", 5.0, fisher_identities},
      {4, "reference MSE at n=3, M=256", 0.0, reference_mse_check},
      {5, "Heisenberg limit beaten at n=1, M=128", 0.0, heisenberg_check},
      {6, "Cramer-Rao approach at n=1, M=3096", 0.0, cramer_rao_check},
      {7, "loss degradation at n=3, M=1024", 0.0, loss_check},
      {8, "sign-ambiguity contrast", 0.0, ambiguity_contrast},
      {9, "invariant suites", 60.0, invariant_suites},
  };
  return all;
}

} // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      selected.push_back(std::atoi(argv[++i]));
    } else {
      fmt::print(stderr, "usage: acceptance [--criterion N]...\n");
      return 2;
    }
  }
  bool all_passed = true;
  for (const auto& c : criteria()) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_budget_s > 0.0 && secs > c.time_budget_s) {
      v.passed = false;
      v.detail += fmt::format("; over time budget {:.0f} s", c.time_budget_s);
    }
    fmt::print("{} criterion {}: {} -- {} [{:.1f} s]\n", v.passed ? "PASS" : "FAIL", c.id, c.title, v.detail, secs);
    std::fflush(stdout);
    all_passed = all_passed && v.passed;
  }
  return all_passed ? 0 : 1;
}

#ifndef PARITYEST_VERIFICATION_HPP
#define PARITYEST_VERIFICATION_HPP

// Self-checks of the signal model against the brute-force Fock oracle and the
// closed forms.  Shared by the CLI `verify` command and the test suites.

#include <parityest/fock_oracle.hpp>
#include <parityest/signal_model.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

namespace parityest {

struct CheckResult {
  std::string name;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

/// Supplies the likelihood table used for (n_bar, eta); replaceable so a
/// corrupted table can be injected.
using TableFactory = std::function<LikelihoodTable(double n_bar, double eta)>;

inline LikelihoodTable default_table(double n_bar, double eta) { return build_likelihood_table(n_bar, eta); }

/// Port distributions vs the Fock-space simulation, n <= 12 on a 16-point grid.
inline CheckResult check_port_distributions() {
  CheckResult r{"port distribution vs Fock-space MZI (n<=12)", 0.0, 1e-10, false};
  for (int n = 0; n <= oracle::max_twin_photons; ++n) {
    for (int i = 0; i < 16; ++i) {
      const double delta = std::numbers::pi * i / 16;
      const auto model = port_distribution(n, delta);
      const auto brute = oracle::simulate_mzi(n, delta);
      for (std::size_t k = 0; k < model.probs.size(); ++k) {
        r.max_deviation = std::max(r.max_deviation, std::abs(model.probs[k] - brute.probs[k]));
      }
      r.max_deviation = std::max(r.max_deviation, std::abs(model.parity_moment() - parity_fock(n, delta)));
    }
  }
  r.passed = r.max_deviation <= r.tolerance;
  return r;
}

/// Thinning identity sum_{t even} C(s,t) eta^t (1-eta)^(s-t) = (1 + (1-2eta)^s)/2.
inline CheckResult check_thinning_identity() {
  CheckResult r{"binomial thinning parity identity (s<=30)", 0.0, 1e-12, false};
  for (double eta : {0.0, 0.25, 0.5, 0.9, 1.0}) {
    for (int s = 0; s <= 30; ++s) {
      double even = 0.0;
      for (int t = 0; t <= s; t += 2) {
        even += oracle::detail::binomial(s, t) * std::pow(eta, t) * std::pow(1.0 - eta, s - t);
      }
      r.max_deviation = std::max(r.max_deviation, std::abs(even - even_survivor_probability(s, eta)));
    }
  }
  r.passed = r.max_deviation <= r.tolerance;
  return r;
}

/// sum_n p_n <Pi>_n vs the closed form at tail_epsilon = 1e-12.
inline CheckResult check_legendre_sum() {
  CheckResult r{"weighted Legendre sum vs closed-form parity", 0.0, 1e-8, false};
  for (double n_bar : {1.0, 2.0, 3.0, 5.0, 8.0}) {
    const auto w = tmsv_weights({n_bar, 1e-12});
    for (int i = 0; i < 256; ++i) {
      const double delta = std::numbers::pi * i / 256;
      double g = 0.0;
      for (int n = 0; n <= w.n_max; ++n) g += w.p[static_cast<std::size_t>(n)] * parity_fock(n, delta);
      r.max_deviation = std::max(r.max_deviation, std::abs(g - parity_closed_form(n_bar, delta)));
    }
  }
  r.passed = r.max_deviation <= r.tolerance;
  return r;
}

/// Table even-probabilities vs full oracle enumeration; the deviation reported
/// is the excess over the oracle's tail bound.
inline CheckResult check_oracle_equivalence(const TableFactory& tables = default_table) {
  CheckResult r{"table P_even vs oracle enumeration (excess over tail bound)", -1.0, 1e-8, false};
  for (double n_bar : {1.0, 3.0}) {
    for (double eta : {1.0, 0.9}) {
      const auto table = tables(n_bar, eta);
      for (int i = 0; i < 32; ++i) {
        const double delta = std::numbers::pi * i / 32;
        const auto brute = oracle::oracle_even_probability({n_bar}, eta, delta);
        const double model = even_probability(table, 0.0, delta);
        r.max_deviation = std::max(r.max_deviation, std::abs(model - brute.even_probability) - brute.tail_bound);
      }
    }
  }
  r.passed = r.max_deviation <= r.tolerance;
  return r;
}

inline std::vector<CheckResult> run_verification(const TableFactory& tables = default_table) {
  return {check_port_distributions(), check_thinning_identity(), check_legendre_sum(),
          check_oracle_equivalence(tables)};
}

} // namespace parityest

#endif

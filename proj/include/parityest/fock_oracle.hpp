#ifndef PARITYEST_FOCK_ORACLE_HPP
#define PARITYEST_FOCK_ORACLE_HPP

// Brute-force two-mode Fock-space interferometer.  Independent of the
// Legendre/Wigner machinery in signal_model; used only to certify it.

#include <parityest/errors.hpp>
#include <parityest/signal_model.hpp>

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

namespace parityest::oracle {

using cplx = std::complex<double>;

inline constexpr int max_twin_photons = 12;

/// Pure state in the fixed-total-photon sector, basis |k, n_total - k>.
struct FockStateVector {
  int n_total = 0;
  std::vector<cplx> amplitudes;

  double norm() const {
    double acc = 0.0;
    for (const auto& a : amplitudes) acc += std::norm(a);
    return std::sqrt(acc);
  }
};

/// Square matrix over the n_total + 1 basis states, row-major.
struct SectorOperator {
  int n_total = 0;
  std::vector<cplx> m;

  cplx operator()(int row, int col) const { return m[static_cast<std::size_t>(row * (n_total + 1) + col)]; }
};

namespace detail {

inline double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  return factorial(n) / (factorial(k) * factorial(n - k));
}

inline cplx ipow(cplx z, int e) {
  cplx r{1.0, 0.0};
  for (int i = 0; i < e; ++i) r *= z;
  return r;
}

} // namespace detail

/**
 * Lift a single-photon 2x2 mode transformation u (a^dag -> u00 a^dag + u10 b^dag,
 * b^dag -> u01 a^dag + u11 b^dag) to the n_total-photon sector by expanding
 * (a^dag)^k (b^dag)^(N-k) / sqrt(k! (N-k)!) term by term.
 */
inline SectorOperator lift(cplx u00, cplx u01, cplx u10, cplx u11, int n_total) {
  const int dim = n_total + 1;
  SectorOperator op{n_total, std::vector<cplx>(static_cast<std::size_t>(dim * dim))};
  for (int k = 0; k <= n_total; ++k) {
    const int rest = n_total - k;
    for (int i = 0; i <= k; ++i) {
      const cplx from_a = detail::binomial(k, i) * detail::ipow(u00, i) * detail::ipow(u10, k - i);
      for (int l = 0; l <= rest; ++l) {
        const cplx from_b = detail::binomial(rest, l) * detail::ipow(u01, l) * detail::ipow(u11, rest - l);
        const int p = i + l;
        const double scale = std::sqrt(detail::factorial(p) * detail::factorial(n_total - p) /
                                       (detail::factorial(k) * detail::factorial(rest)));
        op.m[static_cast<std::size_t>(p * dim + k)] += scale * from_a * from_b;
      }
    }
  }
  return op;
}

inline FockStateVector apply(const SectorOperator& op, const FockStateVector& in) {
  const int dim = in.n_total + 1;
  FockStateVector out{in.n_total, std::vector<cplx>(static_cast<std::size_t>(dim))};
  for (int r = 0; r < dim; ++r) {
    cplx acc{};
    for (int c = 0; c < dim; ++c) acc += op(r, c) * in.amplitudes[static_cast<std::size_t>(c)];
    out.amplitudes[static_cast<std::size_t>(r)] = acc;
  }
  return out;
}

/// Symmetric unit-determinant 50:50 beam splitter (1/sqrt2) [[1, i], [i, 1]].
inline SectorOperator beam_splitter(int n_total) {
  const double h = 1.0 / std::sqrt(2.0);
  return lift({h, 0.0}, {0.0, h}, {0.0, h}, {h, 0.0}, n_total);
}

/// Relative phase phi split symmetrically, diag(e^{i phi/2}, e^{-i phi/2}).
inline SectorOperator phase_shift(double phi, int n_total) {
  return lift(std::polar(1.0, phi / 2), {}, {}, std::polar(1.0, -phi / 2), n_total);
}

/// States after each element of the interferometer: input, BS, phase, BS.
/// The internal phase is delta + pi/2, the offset that makes delta = 0 the
/// balanced operating point.
inline std::vector<FockStateVector> mzi_trajectory(int n, double delta) {
  if (n < 0) throw InvalidParameter("Fock index must be >= 0");
  if (n > max_twin_photons) {
    throw OracleScaleError("oracle supports n <= " + std::to_string(max_twin_photons) + ", got " +
                           std::to_string(n));
  }
  const int total = 2 * n;
  FockStateVector psi{total, std::vector<cplx>(static_cast<std::size_t>(total + 1))};
  psi.amplitudes[static_cast<std::size_t>(n)] = 1.0;

  const SectorOperator bs = beam_splitter(total);
  std::vector<FockStateVector> steps{psi};
  steps.push_back(apply(bs, steps.back()));
  steps.push_back(apply(phase_shift(delta + std::numbers::pi / 2, total), steps.back()));
  steps.push_back(apply(bs, steps.back()));
  return steps;
}

/// Marginal photon count at the first output port.
inline PortDistribution simulate_mzi(int n, double delta) {
  const auto steps = mzi_trajectory(n, delta);
  PortDistribution d{n, delta, {}};
  for (const auto& a : steps.back().amplitudes) d.probs.push_back(std::norm(a));
  return d;
}

/// Binomial loss: probability of detecting t photons, summed over present counts s.
inline std::vector<double> thin(const PortDistribution& dist, double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw InvalidParameter("eta must lie in [0, 1]");
  std::vector<double> out(dist.probs.size(), 0.0);
  for (std::size_t s = 0; s < dist.probs.size(); ++s) {
    const int si = static_cast<int>(s);
    for (int t = 0; t <= si; ++t) {
      out[static_cast<std::size_t>(t)] +=
          dist.probs[s] * detail::binomial(si, t) * std::pow(eta, t) * std::pow(1.0 - eta, si - t);
    }
  }
  return out;
}

struct OracleResult {
  double even_probability = 0.0;
  /// Weight of the twin-Fock terms n > n_cap that were not enumerated.
  double tail_bound = 0.0;
};

/// Full enumeration of P_even over twin-Fock terms n <= n_cap.
inline OracleResult oracle_even_probability(const TmsvSpec& spec, double eta, double delta,
                                            int n_cap = max_twin_photons) {
  const double t = tmsv_ratio(spec.n_bar);
  OracleResult r;
  double pn = 1.0 - t;
  for (int n = 0; n <= n_cap; ++n, pn *= t) {
    const auto detected = thin(simulate_mzi(n, delta), eta);
    double even = 0.0;
    for (std::size_t k = 0; k < detected.size(); k += 2) even += detected[k];
    r.even_probability += pn * even;
  }
  r.tail_bound = std::pow(t, n_cap + 1);
  return r;
}

} // namespace parityest::oracle

#endif

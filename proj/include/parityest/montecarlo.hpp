#ifndef PARITYEST_MONTECARLO_HPP
#define PARITYEST_MONTECARLO_HPP

#include <parityest/bayes_filter.hpp>
#include <parityest/errors.hpp>
#include <parityest/policy.hpp>
#include <parityest/random.hpp>
#include <parityest/signal_model.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <variant>
#include <vector>

namespace parityest {

struct FixedPhase {
  double phi = 0.5;
  bool operator==(const FixedPhase&) const = default;
};

/// True phase drawn uniformly on (-pi/2, pi/2] per record.
struct UniformPhase {
  bool operator==(const UniformPhase&) const = default;
};

using PhaseMode = std::variant<FixedPhase, UniformPhase>;

struct TrialConfig {
  double n_bar = 3.0;
  double eta = 1.0;
  int detections = 256; // M
  ControlPolicy policy = AdaptivePolicy{};
  PhaseMode phase = FixedPhase{};
  std::uint64_t master_seed = 1;
  TableConstruction table{};
  PosteriorLimits limits{};

  bool operator==(const TrialConfig&) const = default;

  void validate() const {
    detail::require_n_bar(n_bar);
    detail::require_eta(eta);
    if (detections < 1) throw InvalidParameter("M must be >= 1");
    if (const auto* f = std::get_if<FixedPhase>(&phase)) {
      if (!(f->phi > -std::numbers::pi / 2 && f->phi <= std::numbers::pi / 2)) {
        throw InvalidParameter("fixed phase must lie in (-pi/2, pi/2]");
      }
    }
  }
};

inline LikelihoodTable build_table(const TrialConfig& config) {
  return build_likelihood_table(config.n_bar, config.eta, config.table);
}

struct TrialRecord {
  std::vector<double> thetas;
  std::vector<Outcome> outcomes;
  int ell = 0;
  double true_phi = 0.0;
  double estimate = 0.0;
  double error = 0.0;

  bool operator==(const TrialRecord&) const = default;
};

struct RecordRun {
  TrialRecord record;
  FourierPosterior posterior;
};

namespace detail {

template <typename E>
[[noreturn]] inline void rethrow_with_record(const E& e, long long index) {
  throw E("record " + std::to_string(index) + ": " + e.what());
}

} // namespace detail

/// One measurement record with its final posterior.  Deterministic in
/// (config, table, record_index).
inline RecordRun simulate_record(const TrialConfig& config, const LikelihoodTable& table,
                                 long long record_index) {
  Engine rng = make_engine(config.master_seed, static_cast<std::uint64_t>(record_index));
  RecordRun run;
  TrialRecord& rec = run.record;
  if (const auto* f = std::get_if<FixedPhase>(&config.phase)) {
    rec.true_phi = f->phi;
  } else {
    rec.true_phi = std::numbers::pi / 2 - std::numbers::pi * uniform01(rng);
  }
  rec.thetas.reserve(static_cast<std::size_t>(config.detections));
  rec.outcomes.reserve(static_cast<std::size_t>(config.detections));

  try {
    FourierPosterior post = flat_prior();
    for (int m = 1; m <= config.detections; ++m) {
      const double theta = m == 1 ? initial_phase(config.policy, rng) : choose_phase(post, table, config.policy);
      const double pe = even_probability(table, rec.true_phi, theta);
      const Outcome mu = uniform01(rng) < pe ? Outcome::even : Outcome::odd;
      if (mu == Outcome::even) ++rec.ell;
      rec.thetas.push_back(theta);
      rec.outcomes.push_back(mu);
      post = update(post, mu, theta, table, config.limits);
    }
    rec.estimate = estimate(post);
    rec.error = wrapped_error(rec.estimate, rec.true_phi);
    run.posterior = std::move(post);
  } catch (const DegenerateUpdate& e) {
    detail::rethrow_with_record(e, record_index);
  } catch (const CapacityError& e) {
    detail::rethrow_with_record(e, record_index);
  } catch (const UndefinedSignal& e) {
    detail::rethrow_with_record(e, record_index);
  }
  return run;
}

inline TrialRecord run_record(const TrialConfig& config, const LikelihoodTable& table, long long record_index) {
  return simulate_record(config, table, record_index).record;
}

inline TrialRecord run_record(const TrialConfig& config, long long record_index) {
  config.validate();
  return run_record(config, build_table(config), record_index);
}

struct EnsembleStats {
  long long records = 0; // J
  double mse = 0.0;
  double mse_se = 0.0;
  double bias = 0.0;
  double hl_ratio = 0.0;
  double crb_ratio = 0.0;

  /// Standard errors of the two ratios (same relative error as the MSE).
  double hl_ratio_se() const { return mse > 0.0 ? hl_ratio * mse_se / mse : 0.0; }
  double crb_ratio_se() const { return mse > 0.0 ? crb_ratio * mse_se / mse : 0.0; }
};

/// MSE, its standard error (sample sd of the squared errors over sqrt J), the
/// mean error, and the ratios MSE * M n^2 and MSE * M n (n + 2).
inline EnsembleStats summarize(std::span<const double> errors, double n_bar, int detections) {
  EnsembleStats s;
  s.records = static_cast<long long>(errors.size());
  if (errors.empty()) return s;
  const double j = static_cast<double>(errors.size());
  double sum = 0.0;
  double sum_sq = 0.0;
  for (double e : errors) {
    sum += e;
    sum_sq += e * e;
  }
  s.bias = sum / j;
  s.mse = sum_sq / j;
  if (errors.size() >= 2) {
    double var = 0.0;
    for (double e : errors) {
      const double d = e * e - s.mse;
      var += d * d;
    }
    var /= (j - 1.0);
    s.mse_se = std::sqrt(var / j);
  }
  const auto limits = reference_limits(n_bar, detections);
  s.hl_ratio = s.mse / limits.heisenberg;
  s.crb_ratio = s.mse / limits.cramer_rao;
  return s;
}

/// Target precision ran out of records; carries the statistics so far.
class PartialResult : public Error {
public:
  PartialResult(const std::string& what, EnsembleStats stats) : Error(what), stats_(stats) {}
  const EnsembleStats& stats() const { return stats_; }

private:
  EnsembleStats stats_;
};

struct ExecutionOptions {
  /// 0 = std::thread::hardware_concurrency().
  unsigned workers = 0;
};

inline unsigned resolve_workers(unsigned requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

/**
 * Wrapped errors of records first..first+count-1, in index order.  Records are
 * handed out to workers dynamically; since each record seeds itself from its
 * index, the result does not depend on the worker count.  If several records
 * fail, the error of the lowest index is rethrown.
 */
inline std::vector<double> record_errors(const TrialConfig& config, const LikelihoodTable& table,
                                         long long first, long long count, const ExecutionOptions& opts = {}) {
  std::vector<double> errors(static_cast<std::size_t>(std::max(0LL, count)));
  std::atomic<long long> next{0};
  std::mutex failure_mutex;
  long long failed_index = std::numeric_limits<long long>::max();
  std::exception_ptr failure;

  auto work = [&] {
    for (long long i = next++; i < count; i = next++) {
      try {
        errors[static_cast<std::size_t>(i)] = run_record(config, table, first + i).error;
      } catch (...) {
        const std::lock_guard lock(failure_mutex);
        if (first + i < failed_index) {
          failed_index = first + i;
          failure = std::current_exception();
        }
      }
    }
  };

  const unsigned workers = std::min<unsigned>(resolve_workers(opts.workers),
                                              static_cast<unsigned>(std::max(1LL, count)));
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return errors;
}

/// Fixed-size ensemble of J records (indices 0..J-1).
inline EnsembleStats run_ensemble(const TrialConfig& config, long long records, const ExecutionOptions& opts = {}) {
  config.validate();
  if (records < 2) throw InvalidParameter("ensemble needs J >= 2");
  const LikelihoodTable table = build_table(config);
  const auto errors = record_errors(config, table, 0, records, opts);
  return summarize(errors, config.n_bar, config.detections);
}

struct PrecisionTarget {
  double relative_se = 0.03;
  long long record_cap = 1'000'000;
  long long first_batch = 256;
};

namespace detail {

/// Precision loop over an arbitrary error source: next(first, count) returns
/// the errors of records first..first+count-1.
template <typename NextBatch>
EnsembleStats grow_to_precision(NextBatch&& next, const PrecisionTarget& target, double n_bar, int detections) {
  if (!(target.relative_se > 0.0 && target.relative_se < 1.0)) {
    throw InvalidParameter("target precision must lie in (0, 1)");
  }
  if (target.record_cap < 2) throw InvalidParameter("record cap must be >= 2");
  std::vector<double> errors;
  long long batch = std::clamp(target.first_batch, 2LL, target.record_cap);
  EnsembleStats stats;
  for (;;) {
    const std::vector<double> more = next(static_cast<long long>(errors.size()), batch);
    errors.insert(errors.end(), more.begin(), more.end());
    stats = summarize(errors, n_bar, detections);
    const double rel = stats.mse > 0.0 ? stats.mse_se / stats.mse : 0.0;
    if (rel <= target.relative_se) return stats;
    const auto have = static_cast<long long>(errors.size());
    if (have >= target.record_cap) {
      throw PartialResult("record cap " + std::to_string(target.record_cap) + " reached at relative SE " +
                              std::to_string(rel),
                          stats);
    }
    const double ratio = rel / target.relative_se;
    const auto needed = static_cast<long long>(std::ceil(1.1 * double(have) * ratio * ratio)) - have;
    batch = std::clamp(needed, std::min(target.first_batch, target.record_cap - have), target.record_cap - have);
  }
}

} // namespace detail

/// Adds records in batches until mse_se / mse <= target.  Batch sizes depend
/// only on the statistics so far, so the record count is reproducible.
inline EnsembleStats run_ensemble_to_precision(const TrialConfig& config, const PrecisionTarget& target,
                                               const ExecutionOptions& opts = {}) {
  config.validate();
  const LikelihoodTable table = build_table(config);
  return detail::grow_to_precision(
      [&](long long first, long long count) { return record_errors(config, table, first, count, opts); }, target,
      config.n_bar, config.detections);
}

using RecordPolicy = std::variant<long long, PrecisionTarget>;

struct SweepPoint {
  TrialConfig config;
  std::optional<EnsembleStats> stats;
  std::string error;
};

/// One ensemble per configuration.  Failures are recorded per point and the
/// sweep continues; a precision shortfall keeps its partial statistics.
inline std::vector<SweepPoint> sweep(std::span<const TrialConfig> configs, const RecordPolicy& records,
                                     const ExecutionOptions& opts = {},
                                     const std::function<void(const SweepPoint&)>& on_point = {}) {
  std::vector<SweepPoint> out;
  out.reserve(configs.size());
  for (const auto& config : configs) {
    SweepPoint point{config, std::nullopt, {}};
    try {
      if (const auto* j = std::get_if<long long>(&records)) {
        point.stats = run_ensemble(config, *j, opts);
      } else {
        point.stats = run_ensemble_to_precision(config, std::get<PrecisionTarget>(records), opts);
      }
    } catch (const PartialResult& e) {
      point.stats = e.stats();
      point.error = e.what();
    } catch (const Error& e) {
      point.error = e.what();
    }
    if (on_point) on_point(point);
    out.push_back(std::move(point));
  }
  return out;
}

} // namespace parityest

#endif

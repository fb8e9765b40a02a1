#ifndef PARITYEST_CLI_HPP
#define PARITYEST_CLI_HPP

// Command-line front end: subcommands signal, fisher, posterior, sweep,
// verify and replay.  Tabular output is CSV with 17 significant digits; every
// file written with --out gets a <out>.manifest.json next to it that replays
// the run bit-identically.

#include <parityest/bayes_filter.hpp>
#include <parityest/montecarlo.hpp>
#include <parityest/policy.hpp>
#include <parityest/serialization.hpp>
#include <parityest/signal_model.hpp>
#include <parityest/verification.hpp>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#ifndef PARITYEST_VERSION
#define PARITYEST_VERSION "0.1.0"
#endif

namespace parityest::cli {

enum ExitCode : int { ok = 0, usage = 1, numerical = 2, verification = 3 };

class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Fully resolved command configuration; everything a replay needs.
struct RunOptions {
  std::string command;
  double n_bar = 3.0;
  double eta = 1.0;
  double phi = 0.5;
  bool uniform_phase = false;
  double theta0 = 0.0;
  int detections = 256;
  std::optional<long long> records;
  std::optional<double> precision;
  long long record_cap = 1'000'000;
  std::uint64_t seed = 1;
  std::string policy = "adaptive";
  int grid = 1024;
  int policy_grid = 0;
  double refine_tol = 1e-6;
  double tail_eps = 1e-12;
  std::optional<int> table_terms;
  std::string preset;
  std::string out;
  unsigned workers = 0;
  bool inject_fault = false;
  json sweep_spec; // resolved sweep specification (sweep only)

  bool operator==(const RunOptions&) const = default;
};

template <typename T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <typename T>
std::optional<T> optional_from(const json& j) {
  return j.is_null() ? std::nullopt : std::optional<T>(j.get<T>());
}

inline void to_json(json& j, const RunOptions& o) {
  j = json{{"command", o.command},
           {"n_bar", o.n_bar},
           {"eta", o.eta},
           {"phi", o.phi},
           {"uniform_phase", o.uniform_phase},
           {"theta0", o.theta0},
           {"M", o.detections},
           {"J", optional_json(o.records)},
           {"precision", optional_json(o.precision)},
           {"record_cap", o.record_cap},
           {"seed", o.seed},
           {"policy", o.policy},
           {"grid", o.grid},
           {"policy_grid", o.policy_grid},
           {"refine_tol", o.refine_tol},
           {"tail_eps", o.tail_eps},
           {"table_terms", optional_json(o.table_terms)},
           {"preset", o.preset},
           {"out", o.out},
           {"workers", o.workers},
           {"inject_fault", o.inject_fault},
           {"sweep_spec", o.sweep_spec}};
}

inline void from_json(const json& j, RunOptions& o) {
  o.command = j.at("command").get<std::string>();
  o.n_bar = j.at("n_bar").get<double>();
  o.eta = j.at("eta").get<double>();
  o.phi = j.at("phi").get<double>();
  o.uniform_phase = j.at("uniform_phase").get<bool>();
  o.theta0 = j.at("theta0").get<double>();
  o.detections = j.at("M").get<int>();
  o.records = optional_from<long long>(j.at("J"));
  o.precision = optional_from<double>(j.at("precision"));
  o.record_cap = j.at("record_cap").get<long long>();
  o.seed = j.at("seed").get<std::uint64_t>();
  o.policy = j.at("policy").get<std::string>();
  o.grid = j.at("grid").get<int>();
  o.policy_grid = j.at("policy_grid").get<int>();
  o.refine_tol = j.at("refine_tol").get<double>();
  o.tail_eps = j.at("tail_eps").get<double>();
  o.table_terms = optional_from<int>(j.at("table_terms"));
  o.preset = j.at("preset").get<std::string>();
  o.out = j.at("out").get<std::string>();
  o.workers = j.at("workers").get<unsigned>();
  o.inject_fault = j.at("inject_fault").get<bool>();
  o.sweep_spec = j.at("sweep_spec");
}

struct RunManifest {
  std::string command;
  RunOptions options;
  std::uint64_t master_seed = 0;
  json table; // construction parameters of every table used
  std::string timestamp;
  std::string version = PARITYEST_VERSION;
  json results;

  bool operator==(const RunManifest&) const = default;
};

inline void to_json(json& j, const RunManifest& m) {
  j = json{{"command", m.command},     {"options", m.options}, {"master_seed", m.master_seed},
           {"table", m.table},         {"timestamp", m.timestamp}, {"version", m.version},
           {"results", m.results}};
}

inline void from_json(const json& j, RunManifest& m) {
  m.command = j.at("command").get<std::string>();
  m.options = j.at("options").get<RunOptions>();
  m.master_seed = j.at("master_seed").get<std::uint64_t>();
  m.table = j.at("table");
  m.timestamp = j.at("timestamp").get<std::string>();
  m.version = j.at("version").get<std::string>();
  m.results = j.at("results");
}

inline std::string num(double v) { return fmt::format("{:.17g}", v); }

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

inline TableConstruction table_construction(const RunOptions& o) {
  TableConstruction tc;
  tc.tail_epsilon = o.tail_eps;
  tc.term_count = o.table_terms;
  return tc;
}

inline ControlPolicy control_policy(const RunOptions& o) {
  if (o.policy == "static") return StaticPolicy{o.theta0};
  if (o.policy == "adaptive") return AdaptivePolicy{o.policy_grid, o.refine_tol};
  throw UsageError("--policy must be adaptive or static, got '" + o.policy + "'");
}

inline TrialConfig trial_config(const RunOptions& o) {
  TrialConfig c;
  c.n_bar = o.n_bar;
  c.eta = o.eta;
  c.detections = o.detections;
  c.policy = control_policy(o);
  c.phase = o.uniform_phase ? PhaseMode{UniformPhase{}} : PhaseMode{FixedPhase{o.phi}};
  c.master_seed = o.seed;
  c.table = table_construction(o);
  return c;
}

inline json table_summary(const LikelihoodTable& t) {
  return json{{"n_bar", t.n_bar()},
              {"eta", t.eta()},
              {"n_max", t.n_max()},
              {"max_harmonic", t.max_harmonic()},
              {"construction", t.construction()}};
}

/// Where the primary CSV goes: a file (with manifest) or the given stream.
class Output {
public:
  Output(const RunOptions& o, std::ostream& fallback) : path_(o.out) {
    if (!path_.empty()) {
      file_.open(path_, std::ios::binary | std::ios::trunc);
      if (!file_) throw UsageError("cannot open output file '" + path_ + "'");
    }
    stream_ = path_.empty() ? &fallback : &file_;
  }
  std::ostream& csv() { return *stream_; }
  const std::string& path() const { return path_; }

  void write_manifest(const RunManifest& m) const {
    if (path_.empty()) return;
    std::ofstream mf(path_ + ".manifest.json", std::ios::trunc);
    mf << json(m).dump(2) << '\n';
  }

private:
  std::string path_;
  std::ofstream file_;
  std::ostream* stream_ = nullptr;
};

inline RunManifest manifest_for(const RunOptions& o) {
  RunManifest m;
  m.command = o.command;
  m.options = o;
  m.master_seed = o.seed;
  m.timestamp = utc_timestamp();
  return m;
}

// --- signal ----------------------------------------------------------------

inline int cmd_signal(const RunOptions& o, std::ostream& out, std::ostream&) {
  if (o.grid < 2) throw UsageError("--grid must be >= 2");
  const auto table = build_likelihood_table(o.n_bar, o.eta, table_construction(o));
  Output dst(o, out);
  dst.csv() << "delta,parity_or_G,P_even\n";
  for (int i = 0; i < o.grid; ++i) {
    const double delta = -std::numbers::pi / 2 + std::numbers::pi * i / (o.grid - 1);
    dst.csv() << num(delta) << ',' << num(table.signal(delta)) << ',' << num(even_probability(table, 0.0, delta))
              << '\n';
  }
  RunManifest m = manifest_for(o);
  m.table = table_summary(table);
  dst.write_manifest(m);
  return ok;
}

// --- fisher ----------------------------------------------------------------

inline int cmd_fisher(const RunOptions& o, std::ostream& out, std::ostream& err) {
  if (o.grid < 2) throw UsageError("--grid must be >= 2");
  const auto limits = reference_limits(o.n_bar, o.detections);
  Output dst(o, out);
  dst.csv() << "delta,fisher\n";
  for (int i = 0; i < o.grid; ++i) {
    const double delta = -std::numbers::pi / 2 + std::numbers::pi * i / (o.grid - 1);
    dst.csv() << num(delta) << ',' << num(fisher_information(o.n_bar, delta)) << '\n';
  }
  err << "CRB=" << num(limits.cramer_rao) << " HL=" << num(limits.heisenberg) << " SNL=" << num(limits.shot_noise)
      << " (M=" << o.detections << ")\n";
  RunManifest m = manifest_for(o);
  m.results = json{{"CRB", limits.cramer_rao}, {"HL", limits.heisenberg}, {"SNL", limits.shot_noise}};
  dst.write_manifest(m);
  return ok;
}

// --- posterior -------------------------------------------------------------

inline int cmd_posterior(const RunOptions& o, std::ostream& out, std::ostream& err) {
  if (o.detections < 0) throw UsageError("--M must be >= 0");
  TrialConfig config = trial_config(o);
  const auto table = build_table(config);

  FourierPosterior post = flat_prior();
  std::optional<TrialRecord> record;
  if (o.detections > 0) {
    config.validate();
    auto run = simulate_record(config, table, 0);
    post = std::move(run.posterior);
    record = std::move(run.record);
  }

  const int grid = std::max(o.grid, 2 * post.order() + 1);
  if (grid != o.grid) err << "note: density grid raised to " << grid << " points for posterior order " << post.order() << '\n';
  Output dst(o, out);
  dst.csv() << "phi,density\n";
  for (const auto& [phi, density] : density_curve(post, grid)) dst.csv() << num(phi) << ',' << num(density) << '\n';

  RunManifest m = manifest_for(o);
  m.table = table_summary(table);
  m.results = json{{"posterior_order", post.order()}, {"sharpness", sharpness(post)}};
  if (record) {
    m.results["ell"] = record->ell;
    m.results["true_phi"] = record->true_phi;
    m.results["estimate"] = record->estimate;
    m.results["error"] = record->error;
    m.results["positive_side_mass"] = interval_mass(post, 0.0, std::numbers::pi / 2);
    err << "ell=" << record->ell << " estimate=" << num(record->estimate) << '\n';
    if (!dst.path().empty()) {
      std::ofstream rec(dst.path() + ".record.csv", std::ios::binary | std::ios::trunc);
      rec << "m,theta,outcome\n";
      for (std::size_t i = 0; i < record->thetas.size(); ++i) {
        rec << (i + 1) << ',' << num(record->thetas[i]) << ','
            << (record->outcomes[i] == Outcome::even ? "even" : "odd") << '\n';
      }
    }
  }
  dst.write_manifest(m);
  return ok;
}

// --- sweep -----------------------------------------------------------------

inline std::vector<double> number_list(const json& j, const char* key) {
  const auto& v = j.at(key);
  if (v.is_number()) return {v.get<double>()};
  if (!v.is_array()) throw UsageError(std::string("sweep spec: '") + key + "' must be a number or a list");
  return v.get<std::vector<double>>();
}

/// Fill in the sweep specification from a spec file or preset plus flag
/// defaults; the result is self-contained.
inline json resolve_sweep_spec(const RunOptions& o, const json& given) {
  json spec = given.is_null() ? json::object() : given;
  if (!spec.is_object()) throw UsageError("sweep spec must be a JSON object");
  auto def = [&](const char* key, const json& value) {
    if (!spec.contains(key)) spec[key] = value;
  };
  def("n_bar", json::array({o.n_bar}));
  def("eta", json::array({o.eta}));
  def("M", json::array({o.detections}));
  if (!spec.contains("J") && !spec.contains("precision")) {
    if (o.records) spec["J"] = *o.records;
    else spec["precision"] = o.precision.value_or(0.03);
  }
  def("record_cap", o.record_cap);
  def("master_seed", o.seed);
  def("policy", json(control_policy(o)));
  def("phase", o.uniform_phase ? json(PhaseMode{UniformPhase{}}) : json(PhaseMode{FixedPhase{o.phi}}));
  def("table", json(table_construction(o)));
  def("limits", json(PosteriorLimits{}));
  return spec;
}

inline std::vector<TrialConfig> expand_sweep(const json& spec) {
  const auto n_bars = number_list(spec, "n_bar");
  const auto etas = number_list(spec, "eta");
  const auto ms = number_list(spec, "M");
  if (n_bars.empty() || etas.empty() || ms.empty()) throw UsageError("sweep spec: n_bar, eta and M lists must be non-empty");
  TrialConfig base;
  base.policy = policy_from_json(spec.at("policy"));
  base.phase = phase_from_json(spec.at("phase"));
  base.master_seed = spec.at("master_seed").get<std::uint64_t>();
  base.table = spec.at("table").get<TableConstruction>();
  base.limits = spec.at("limits").get<PosteriorLimits>();
  std::vector<TrialConfig> configs;
  for (double n_bar : n_bars) {
    for (double eta : etas) {
      for (double m : ms) {
        TrialConfig c = base;
        c.n_bar = n_bar;
        c.eta = eta;
        c.detections = static_cast<int>(m);
        if (double(c.detections) != m || c.detections < 1) throw UsageError("sweep spec: M values must be positive integers");
        configs.push_back(c);
      }
    }
  }
  return configs;
}

inline RecordPolicy record_policy(const json& spec) {
  if (spec.contains("J")) {
    const auto j = spec.at("J").get<long long>();
    if (j < 2) throw UsageError("sweep spec: J must be >= 2");
    return j;
  }
  PrecisionTarget t;
  t.relative_se = spec.at("precision").get<double>();
  t.record_cap = spec.at("record_cap").get<long long>();
  if (!(t.relative_se > 0.0 && t.relative_se < 1.0)) throw UsageError("sweep spec: precision must lie in (0, 1)");
  return t;
}

inline int cmd_sweep(const RunOptions& o, std::ostream& out, std::ostream& err) {
  const auto configs = expand_sweep(o.sweep_spec);
  const auto policy = record_policy(o.sweep_spec);
  Output dst(o, out);
  dst.csv() << "n_bar,eta,M,J,mse,mse_se,bias,hl_ratio,crb_ratio,error\n";
  json tables = json::array();
  auto on_point = [&](const SweepPoint& p) {
    const auto& c = p.config;
    dst.csv() << num(c.n_bar) << ',' << num(c.eta) << ',' << c.detections << ',';
    if (p.stats) {
      const auto& s = *p.stats;
      dst.csv() << s.records << ',' << num(s.mse) << ',' << num(s.mse_se) << ',' << num(s.bias) << ','
                << num(s.hl_ratio) << ',' << num(s.crb_ratio);
    } else {
      dst.csv() << ",,,,,";
    }
    dst.csv() << ',' << csv_field(p.error) << '\n';
    dst.csv().flush();
    err << "point n_bar=" << c.n_bar << " eta=" << c.eta << " M=" << c.detections;
    if (p.stats) err << " J=" << p.stats->records << " hl_ratio=" << p.stats->hl_ratio << " crb_ratio=" << p.stats->crb_ratio;
    if (!p.error.empty()) err << " error: " << p.error;
    err << '\n';
    tables.push_back(json{{"n_bar", c.n_bar}, {"eta", c.eta}, {"construction", c.table}});
  };
  const auto points = sweep(configs, policy, ExecutionOptions{o.workers}, on_point);
  RunManifest m = manifest_for(o);
  m.table = tables;
  json results = json::array();
  for (const auto& p : points) {
    json r{{"n_bar", p.config.n_bar}, {"eta", p.config.eta}, {"M", p.config.detections}, {"error", p.error}};
    if (p.stats) r["stats"] = *p.stats;
    results.push_back(r);
  }
  m.results = results;
  dst.write_manifest(m);
  return ok;
}

// --- verify ----------------------------------------------------------------

inline int cmd_verify(const RunOptions& o, std::ostream& out, std::ostream&) {
  TableFactory tables = default_table;
  if (o.inject_fault) {
    // Test hook: perturb the first harmonic of every table.
    tables = [](double n_bar, double eta) {
      const auto t = build_likelihood_table(n_bar, eta);
      auto c = std::vector<double>(t.coefficients().begin(), t.coefficients().end());
      if (c.size() > 1) c[1] += 1e-3;
      else c.push_back(1e-3);
      return LikelihoodTable::from_coefficients(t.n_bar(), t.eta(), t.n_max(), t.construction(), std::move(c));
    };
  }
  const auto checks = run_verification(tables);
  bool all = true;
  for (const auto& c : checks) {
    out << (c.passed ? "PASS" : "FAIL") << "  " << c.name << "  max_dev=" << num(c.max_deviation)
        << "  tol=" << num(c.tolerance) << '\n';
    all = all && c.passed;
  }
  out << (all ? "all checks passed" : "verification FAILED") << '\n';
  return all ? ok : verification;
}

// --- presets & dispatch ----------------------------------------------------

inline const std::vector<double>& figure_record_lengths() {
  static const std::vector<double> m{64, 128, 256, 512, 1024, 2048, 3096};
  return m;
}

/// Parameter grids of the published figures.  Returns the command the preset
/// belongs to.
inline std::string apply_preset(const std::string& preset, RunOptions& o, json& spec,
                                const std::function<bool(const char*)>& given) {
  auto set = [&](const char* flag, auto& field, auto value) {
    if (!given(flag)) field = value;
  };
  if (preset == "fig2" || preset == "fig3") {
    set("--nbar", o.n_bar, 3.0);
    set("--phi", o.phi, 0.15);
    set("--M", o.detections, 512);
    set("--theta0", o.theta0, 0.0);
    set("--policy", o.policy, std::string(preset == "fig2" ? "static" : "adaptive"));
    return "posterior";
  }
  if (preset == "fig4" || preset == "fig5") {
    spec = json{{"n_bar", {1, 2, 3, 5, 8}}, {"eta", {1.0}}, {"M", figure_record_lengths()}};
  } else if (preset == "fig6" || preset == "fig7") {
    spec = json{{"n_bar", {preset == "fig6" ? 1.0 : 3.0}}, {"eta", {1.0, 0.99, 0.95, 0.90}}, {"M", figure_record_lengths()}};
  } else {
    throw UsageError("unknown preset '" + preset + "'");
  }
  if (!given("--J") && !given("--precision")) spec["precision"] = 0.03;
  return "sweep";
}

inline int dispatch(const RunOptions& o, std::ostream& out, std::ostream& err) {
  if (o.command == "signal") return cmd_signal(o, out, err);
  if (o.command == "fisher") return cmd_fisher(o, out, err);
  if (o.command == "posterior") return cmd_posterior(o, out, err);
  if (o.command == "sweep") return cmd_sweep(o, out, err);
  if (o.command == "verify") return cmd_verify(o, out, err);
  throw UsageError("unknown command '" + o.command + "'");
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError("cannot parse '" + path + "': " + e.what());
  }
}

/// Entry point; returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Adaptive parity-detection phase estimation with two-mode squeezed vacuum"};
  app.require_subcommand(1);
  RunOptions o;
  std::string spec_file;
  std::string manifest_file;
  std::string replay_out;
  bool replay_out_given = false;

  auto physics = [&](CLI::App* sub) {
    sub->add_option("--nbar", o.n_bar, "mean photon number")->capture_default_str();
    sub->add_option("--eta", o.eta, "detection efficiency in [0,1]")->capture_default_str();
    sub->add_option("--tail-eps", o.tail_eps, "cumulative-weight cutoff of the twin-Fock sum")->capture_default_str();
    sub->add_option("--table-terms", o.table_terms, "fixed Legendre term count (overrides --tail-eps)");
    sub->add_option("--grid", o.grid, "points of the output curve")->capture_default_str();
    sub->add_option("--out", o.out, "output CSV path (a manifest is written next to it)");
  };
  auto simulation = [&](CLI::App* sub) {
    sub->add_option("--phi", o.phi, "true phase in (-pi/2, pi/2]")->capture_default_str();
    sub->add_flag("--uniform-phase", o.uniform_phase, "draw the true phase uniformly per record");
    sub->add_option("--theta0", o.theta0, "control phase of the static policy")->capture_default_str();
    sub->add_option("--seed", o.seed, "master seed")->capture_default_str();
    sub->add_option("--policy", o.policy, "adaptive or static")->check(CLI::IsMember({"adaptive", "static"}))->capture_default_str();
    sub->add_option("--policy-grid", o.policy_grid, "coarse grid of the adaptive rule (0 = automatic)")->capture_default_str();
    sub->add_option("--refine-tol", o.refine_tol, "golden-section tolerance in rad")->capture_default_str();
    sub->add_option("--workers", o.workers, "worker threads (0 = all cores)")->capture_default_str();
  };

  auto* signal = app.add_subcommand("signal", "parity signal and P_even over delta");
  physics(signal);
  auto* fisher = app.add_subcommand("fisher", "Fisher information and reference limits");
  physics(fisher);
  fisher->add_option("--M", o.detections, "detections for the reference limits")->capture_default_str();
  auto* posterior = app.add_subcommand("posterior", "simulate one record and dump its posterior");
  physics(posterior);
  simulation(posterior);
  posterior->add_option("--M", o.detections, "detections per record")->capture_default_str();
  posterior->add_option("--preset", o.preset, "fig2 (static) or fig3 (adaptive)");
  auto* sweep_cmd = app.add_subcommand("sweep", "MSE ensembles over a grid of (n_bar, eta, M)");
  physics(sweep_cmd);
  simulation(sweep_cmd);
  sweep_cmd->add_option("--M", o.detections, "detections per record")->capture_default_str();
  sweep_cmd->add_option("--J", o.records, "records per point");
  sweep_cmd->add_option("--precision", o.precision, "target relative standard error of the MSE");
  sweep_cmd->add_option("--record-cap", o.record_cap, "record cap in precision mode")->capture_default_str();
  sweep_cmd->add_option("--spec", spec_file, "JSON sweep specification");
  sweep_cmd->add_option("--preset", o.preset, "fig4 | fig5 | fig6 | fig7");
  auto* verify = app.add_subcommand("verify", "check the signal model against the Fock-space oracle");
  verify->add_flag("--inject-fault", o.inject_fault, "corrupt the likelihood tables (test hook)");
  auto* replay = app.add_subcommand("replay", "re-run the command recorded in a manifest");
  replay->add_option("--manifest", manifest_file, "manifest JSON")->required();
  auto* replay_out_opt = replay->add_option("--out", replay_out, "output path (default: the recorded one)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : usage;
  }

  try {
    if (replay->parsed()) {
      const auto m = read_json_file(manifest_file).get<RunManifest>();
      RunOptions replayed = m.options;
      replay_out_given = replay_out_opt->count() > 0;
      if (replay_out_given) replayed.out = replay_out;
      return dispatch(replayed, out, err);
    }
    CLI::App* active = app.get_subcommands().front();
    o.command = active->get_name();
    auto given = [&](const char* flag) {
      const auto* opt = active->get_option_no_throw(flag);
      return opt != nullptr && opt->count() > 0;
    };
    json spec;
    if (!o.preset.empty()) {
      const auto target = apply_preset(o.preset, o, spec, given);
      if (target != o.command) throw UsageError("preset " + o.preset + " belongs to the " + target + " command");
    }
    if (o.command == "sweep") {
      if (!spec_file.empty()) {
        if (!o.preset.empty()) throw UsageError("--spec and --preset are mutually exclusive");
        spec = read_json_file(spec_file);
      }
      if (given("--J") && given("--precision")) throw UsageError("--J and --precision are mutually exclusive");
      o.sweep_spec = resolve_sweep_spec(o, spec);
      expand_sweep(o.sweep_spec); // validate before running anything
      record_policy(o.sweep_spec);
    }
    return dispatch(o, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return usage;
  } catch (const InvalidParameter& e) {
    err << "invalid parameter: " << e.what() << '\n';
    return usage;
  } catch (const json::exception& e) {
    err << "usage error: " << e.what() << '\n';
    return usage;
  } catch (const Error& e) {
    err << "numerical failure: " << e.what() << '\n';
    return numerical;
  }
}

} // namespace parityest::cli

#endif

#ifndef PARITYEST_SERIALIZATION_HPP
#define PARITYEST_SERIALIZATION_HPP

// JSON mappings for configurations, tables and statistics (nlohmann/json).

#include <parityest/montecarlo.hpp>
#include <parityest/policy.hpp>
#include <parityest/signal_model.hpp>

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace parityest {

using json = nlohmann::json;

inline void to_json(json& j, const TableConstruction& t) {
  j = json{{"tail_epsilon", t.tail_epsilon},
           {"term_count", t.term_count ? json(*t.term_count) : json(nullptr)},
           {"coeff_epsilon", t.coeff_epsilon},
           {"grid_size", t.grid_size}};
}

inline void from_json(const json& j, TableConstruction& t) {
  t.tail_epsilon = j.at("tail_epsilon").get<double>();
  const auto& tc = j.at("term_count");
  t.term_count = tc.is_null() ? std::nullopt : std::optional<int>(tc.get<int>());
  t.coeff_epsilon = j.at("coeff_epsilon").get<double>();
  t.grid_size = j.at("grid_size").get<int>();
}

inline void to_json(json& j, const LikelihoodTable& t) {
  const auto c = t.coefficients();
  j = json{{"n_bar", t.n_bar()},
           {"eta", t.eta()},
           {"n_max", t.n_max()},
           {"max_harmonic", t.max_harmonic()},
           {"construction", t.construction()},
           {"coefficients", std::vector<double>(c.begin(), c.end())}};
}

inline LikelihoodTable table_from_json(const json& j) {
  return LikelihoodTable::from_coefficients(j.at("n_bar").get<double>(), j.at("eta").get<double>(),
                                            j.at("n_max").get<int>(), j.at("construction").get<TableConstruction>(),
                                            j.at("coefficients").get<std::vector<double>>());
}

inline void to_json(json& j, const PosteriorLimits& l) {
  j = json{{"max_order", l.max_order},
           {"trim_floor", l.trim_floor},
           {"tail_energy_tolerance", l.tail_energy_tolerance}};
}

inline void from_json(const json& j, PosteriorLimits& l) {
  l.max_order = j.at("max_order").get<int>();
  l.trim_floor = j.at("trim_floor").get<double>();
  l.tail_energy_tolerance = j.at("tail_energy_tolerance").get<double>();
}

inline void to_json(json& j, const ControlPolicy& p) {
  if (const auto* a = std::get_if<AdaptivePolicy>(&p)) {
    j = json{{"kind", "adaptive"}, {"grid_points", a->grid_points}, {"refine_tolerance", a->refine_tolerance}};
  } else {
    j = json{{"kind", "static"}, {"theta0", std::get<StaticPolicy>(p).theta0}};
  }
}

inline ControlPolicy policy_from_json(const json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "adaptive") {
    return AdaptivePolicy{j.at("grid_points").get<int>(), j.at("refine_tolerance").get<double>()};
  }
  if (kind == "static") return StaticPolicy{j.at("theta0").get<double>()};
  throw InvalidParameter("unknown policy kind '" + kind + "'");
}

inline void to_json(json& j, const PhaseMode& p) {
  if (const auto* f = std::get_if<FixedPhase>(&p)) {
    j = json{{"kind", "fixed"}, {"phi", f->phi}};
  } else {
    j = json{{"kind", "uniform"}};
  }
}

inline PhaseMode phase_from_json(const json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "fixed") return FixedPhase{j.at("phi").get<double>()};
  if (kind == "uniform") return UniformPhase{};
  throw InvalidParameter("unknown phase mode '" + kind + "'");
}

inline void to_json(json& j, const TrialConfig& c) {
  j = json{{"n_bar", c.n_bar},         {"eta", c.eta},       {"M", c.detections},
           {"policy", c.policy},       {"phase", c.phase},   {"master_seed", c.master_seed},
           {"table", c.table},         {"limits", c.limits}};
}

inline void from_json(const json& j, TrialConfig& c) {
  c.n_bar = j.at("n_bar").get<double>();
  c.eta = j.at("eta").get<double>();
  c.detections = j.at("M").get<int>();
  c.policy = policy_from_json(j.at("policy"));
  c.phase = phase_from_json(j.at("phase"));
  c.master_seed = j.at("master_seed").get<std::uint64_t>();
  c.table = j.at("table").get<TableConstruction>();
  c.limits = j.at("limits").get<PosteriorLimits>();
}

inline void to_json(json& j, const EnsembleStats& s) {
  j = json{{"J", s.records},         {"mse", s.mse},           {"mse_se", s.mse_se},
           {"bias", s.bias},         {"hl_ratio", s.hl_ratio}, {"crb_ratio", s.crb_ratio}};
}

} // namespace parityest

#endif

#pragma once

// JSON forms of the report types. Every emitted document carries a top-level
// "schema_version". Non-finite numbers are written as the strings "inf",
// "-inf" and "nan" so they survive a round trip.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <system_error>
#include <unistd.h>

#include <json.hpp>

#include "photonsteer/mc_sim.hpp"
#include "photonsteer/photon_state.hpp"
#include "photonsteer/steering_eval.hpp"

// SettingCount has no default state, so it needs a value-returning serializer.
template <>
struct nlohmann::adl_serializer<photonsteer::SettingCount> {
  static void to_json(nlohmann::json& j, const photonsteer::SettingCount& n) {
    j = n.is_infinite() ? nlohmann::json("inf") : nlohmann::json(n.value());
  }
  static photonsteer::SettingCount from_json(const nlohmann::json& j) {
    if (j.is_string() && j.get<std::string>() == "inf") return photonsteer::SettingCount::infinite();
    if (!j.is_number_integer()) throw std::invalid_argument("n_settings must be a positive integer or \"inf\"");
    return photonsteer::SettingCount(j.get<int>());
  }
};

namespace photonsteer {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

inline json number_to_json(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

inline double number_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw std::invalid_argument("expected a number, got " + j.dump());
}

/// %.17g formatting for CSV cells; "nan"/"inf" for non-finite values.
inline std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// ---------------------------------------------------------------------------
// Enumerations

NLOHMANN_JSON_SERIALIZE_ENUM(Verdict, {{Verdict::not_violated, "not_violated"}, {Verdict::violated, "violated"}})

inline Strategy strategy_from_string(const std::string& s) {
  if (s == "honest_quantum") return Strategy::honest_quantum;
  if (s == "lhs_two_ring") return Strategy::lhs_two_ring;
  if (s == "lhs_equatorial") return Strategy::lhs_equatorial;
  throw std::invalid_argument("unknown strategy '" + s + "' (expected honest_quantum, lhs_two_ring or lhs_equatorial)");
}

inline AliceRule alice_rule_from_string(const std::string& s) {
  if (s == "negative_sign") return AliceRule::negative_sign;
  if (s == "kernel_sign") return AliceRule::kernel_sign;
  throw std::invalid_argument("unknown alice_rule '" + s + "' (expected negative_sign or kernel_sign)");
}

// ---------------------------------------------------------------------------
// Value types

inline void to_json(json& j, const ExperimentParams& p) {
  j = {{"eta", p.eta}, {"chi", p.chi}, {"eta_h", p.eta_h}, {"eta_p", p.eta_p}, {"n_settings", p.n_settings},
       {"label", p.label}};
}
inline void from_json(const json& j, ExperimentParams& p) {
  p.eta = j.at("eta").get<double>();
  p.chi = j.at("chi").get<double>();
  p.eta_h = j.at("eta_h").get<double>();
  p.eta_p = j.at("eta_p").get<double>();
  p.n_settings = j.at("n_settings").get<SettingCount>();
  p.label = j.value("label", std::string());
}

inline void to_json(json& j, const PhotodetectionOutcome& o) {
  j = {{"p_plus", o.p_plus},
       {"p_minus", o.p_minus},
       {"z_plus", o.z_plus},
       {"z_minus", o.z_minus},
       {"plus_degenerate", o.plus_degenerate},
       {"minus_degenerate", o.minus_degenerate}};
}
inline void from_json(const json& j, PhotodetectionOutcome& o) {
  o.p_plus = j.at("p_plus").get<double>();
  o.p_minus = j.at("p_minus").get<double>();
  o.z_plus = j.at("z_plus").get<double>();
  o.z_minus = j.at("z_minus").get<double>();
  o.plus_degenerate = j.at("plus_degenerate").get<bool>();
  o.minus_degenerate = j.at("minus_degenerate").get<bool>();
}

inline void to_json(json& j, const ConditionResult& c) { j = {{"lhs_value", c.lhs_value}, {"satisfied", c.satisfied}}; }
inline void from_json(const json& j, ConditionResult& c) {
  c.lhs_value = j.at("lhs_value").get<double>();
  c.satisfied = j.at("satisfied").get<bool>();
}

inline void to_json(json& j, const NecessaryResult& c) {
  j = {{"lhs_value", c.lhs_value},
       {"possible", c.possible},
       {"budget_value", c.budget_value},
       {"budget_possible", c.budget_possible}};
}
inline void from_json(const json& j, NecessaryResult& c) {
  c.lhs_value = j.at("lhs_value").get<double>();
  c.possible = j.at("possible").get<bool>();
  c.budget_value = j.at("budget_value").get<double>();
  c.budget_possible = j.at("budget_possible").get<bool>();
}

inline void to_json(json& j, const SteeringReport& r) {
  j = {{"n_settings", r.n},
       {"lhs", number_to_json(r.lhs)},
       {"rhs", number_to_json(r.rhs)},
       {"margin", number_to_json(r.margin)},
       {"verdict", r.verdict},
       {"rhs_infinite", number_to_json(r.rhs_infinite)},
       {"margin_infinite", number_to_json(r.margin_infinite)},
       {"z_statistics", r.z_statistics},
       {"sufficient", r.sufficient},
       {"necessary", r.necessary},
       {"shares_entanglement", r.shares_entanglement},
       {"note", r.note}};
}
inline void from_json(const json& j, SteeringReport& r) {
  r.n = j.at("n_settings").get<SettingCount>();
  r.lhs = number_from_json(j.at("lhs"));
  r.rhs = number_from_json(j.at("rhs"));
  r.margin = number_from_json(j.at("margin"));
  r.verdict = j.at("verdict").get<Verdict>();
  r.rhs_infinite = number_from_json(j.at("rhs_infinite"));
  r.margin_infinite = number_from_json(j.at("margin_infinite"));
  r.z_statistics = j.at("z_statistics").get<PhotodetectionOutcome>();
  r.sufficient = j.at("sufficient").get<ConditionResult>();
  r.necessary = j.at("necessary").get<NecessaryResult>();
  r.shares_entanglement = j.at("shares_entanglement").get<bool>();
  r.note = j.at("note").get<std::string>();
}

inline void to_json(json& j, const Estimate& e) {
  j = {{"value", number_to_json(e.value)},
       {"std_error", number_to_json(e.std_error)},
       {"analytic", number_to_json(e.analytic)},
       {"samples", e.samples},
       {"defined", e.defined}};
}
inline void from_json(const json& j, Estimate& e) {
  e.value = number_from_json(j.at("value"));
  e.std_error = number_from_json(j.at("std_error"));
  e.analytic = number_from_json(j.at("analytic"));
  e.samples = j.at("samples").get<std::int64_t>();
  e.defined = j.at("defined").get<bool>();
}

inline void to_json(json& j, const SettingEstimate& s) {
  j = {{"setting", s.setting}, {"theta", s.theta}, {"correlation", s.correlation}};
}
inline void from_json(const json& j, SettingEstimate& s) {
  s.setting = j.at("setting").get<int>();
  s.theta = j.at("theta").get<double>();
  s.correlation = j.at("correlation").get<Estimate>();
}

inline void to_json(json& j, const SimConfig& c) {
  j = {{"params", c.params},
       {"shots_per_setting", c.shots_per_setting},
       {"seed", c.seed},
       {"strategy", to_string(c.strategy)},
       {"alice_rule", to_string(c.alice_rule)},
       {"transcript", c.record_transcript},
       {"significance", c.significance},
       {"workers", c.workers}};
}
inline void from_json(const json& j, SimConfig& c) {
  c.params = j.at("params").get<ExperimentParams>();
  c.shots_per_setting = j.at("shots_per_setting").get<std::int64_t>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.strategy = strategy_from_string(j.at("strategy").get<std::string>());
  c.alice_rule = alice_rule_from_string(j.at("alice_rule").get<std::string>());
  c.record_transcript = j.at("transcript").get<bool>();
  c.significance = j.at("significance").get<double>();
  c.workers = j.at("workers").get<unsigned>();
}

/// The transcript is not part of the JSON form; it goes to CSV.
inline void to_json(json& j, const SimResult& r) {
  j = {{"config", r.config},     {"settings", r.settings}, {"p_plus", r.p_plus},
       {"z_plus", r.z_plus},     {"z_minus", r.z_minus},   {"lhs", r.lhs},
       {"rhs", r.rhs},           {"margin", r.margin},     {"empirical", r.empirical},
       {"verdict", r.verdict},   {"error_bars_infinite", r.error_bars_infinite}};
}
inline void from_json(const json& j, SimResult& r) {
  r.config = j.at("config").get<SimConfig>();
  r.settings = j.at("settings").get<std::vector<SettingEstimate>>();
  r.p_plus = j.at("p_plus").get<Estimate>();
  r.z_plus = j.at("z_plus").get<Estimate>();
  r.z_minus = j.at("z_minus").get<Estimate>();
  r.lhs = j.at("lhs").get<Estimate>();
  r.rhs = j.at("rhs").get<Estimate>();
  r.margin = j.at("margin").get<Estimate>();
  r.empirical = j.at("empirical").get<SteeringReport>();
  r.verdict = j.at("verdict").get<Verdict>();
  r.error_bars_infinite = j.at("error_bars_infinite").get<bool>();
  r.transcript.clear();
}

// ---------------------------------------------------------------------------
// Documents

template <class T>
json make_document(const std::string& kind, const T& payload) {
  json j = payload;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = kind;
  return j;
}

template <class T>
T read_document(const json& j, const std::string& kind) {
  if (j.value("schema_version", 0) != kSchemaVersion)
    throw std::invalid_argument("unsupported schema_version in '" + kind + "' document");
  if (j.value("kind", std::string()) != kind) throw std::invalid_argument("expected a '" + kind + "' document");
  return j.get<T>();
}

// ---------------------------------------------------------------------------
// Files

/// Write through a temporary sibling and rename into place.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  const auto tmp = std::filesystem::path(path.string() + ".tmp." + std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << content;
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw std::runtime_error("cannot write '" + path.string() + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw std::runtime_error("cannot write '" + path.string() + "': " + ec.message());
  }
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path.string() + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Transcript CSV: one row per shot. bob_axis is the equatorial angle in
/// radians or "z" for the sigma_z setting.
inline std::string transcript_csv(const SimResult& r) {
  const int n = r.config.params.n_settings.value();
  std::string out = "setting,alice,bob_axis,bob\n";
  std::vector<std::string> axis_label;
  for (const auto& s : r.settings) axis_label.push_back(format_number(s.theta));
  axis_label.emplace_back("z");
  for (const auto& shot : r.transcript) {
    out += std::to_string(shot.setting);
    out += ',';
    out += std::to_string(shot.alice);
    out += ',';
    out += shot.setting <= n ? axis_label[static_cast<std::size_t>(shot.setting)] : "?";
    out += ',';
    out += std::to_string(shot.bob);
    out += '\n';
  }
  return out;
}

}  // namespace photonsteer

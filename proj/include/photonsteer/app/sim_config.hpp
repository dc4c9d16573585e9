#pragma once

// Loading simulation configs and writing their results.
//
// A config names either a preset or explicit params, plus the run controls:
//
//   {"preset": "ideal", "seed": 7, "shots_per_setting": 100000,
//    "strategy": "honest_quantum", "transcript": false}

#include <filesystem>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "photonsteer/app/json_io.hpp"
#include "photonsteer/app/scenarios.hpp"
#include "photonsteer/mc_sim.hpp"

namespace photonsteer {

/// Malformed config: carries the location (line/column or field) in what().
struct config_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// 1-based line and column of a byte offset.
inline std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t offset) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

/// Parse JSON text, rethrowing syntax errors as config_error with line and column.
inline json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
    throw config_error(origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": invalid JSON (" +
                       e.what() + ")");
  }
}

namespace detail {

template <class T, class F>
T field(const json& j, const std::string& name, F&& convert) {
  try {
    return convert(j.at(name));
  } catch (const config_error&) {
    throw;
  } catch (const std::exception& e) {
    throw config_error("field '" + name + "': " + e.what());
  }
}

}  // namespace detail

inline SimConfig sim_config_from_json(const json& j) {
  if (!j.is_object()) throw config_error("config must be a JSON object");
  static const std::set<std::string> known{"preset", "params", "shots_per_setting", "seed",   "strategy",
                                           "alice_rule", "transcript", "significance", "workers", "n_settings"};
  for (const auto& [key, val] : j.items())
    if (!known.count(key)) throw config_error("field '" + key + "': unknown field");

  SimConfig c;
  const bool has_preset = j.contains("preset"), has_params = j.contains("params");
  if (has_preset == has_params) throw config_error("config needs exactly one of 'preset' or 'params'");
  if (has_preset) {
    const auto name = detail::field<std::string>(j, "preset", [](const json& v) { return v.get<std::string>(); });
    const ScenarioPreset* preset = find_scenario(name);
    if (!preset) throw config_error("field 'preset': unknown preset '" + name + "'");
    c.params = preset->params;
  } else {
    c.params = detail::field<ExperimentParams>(j, "params", [](const json& v) { return v.get<ExperimentParams>(); });
  }
  if (j.contains("n_settings"))
    c.params.n_settings = detail::field<SettingCount>(j, "n_settings", [](const json& v) { return v.get<SettingCount>(); });

  if (!j.contains("seed")) throw config_error("field 'seed': required");
  c.seed = detail::field<std::uint64_t>(j, "seed", [](const json& v) {
    if (!v.is_number_integer()) throw std::invalid_argument("must be a non-negative integer");
    return v.get<std::uint64_t>();
  });
  if (j.contains("shots_per_setting"))
    c.shots_per_setting = detail::field<std::int64_t>(j, "shots_per_setting", [](const json& v) {
      if (!v.is_number_integer()) throw std::invalid_argument("must be an integer");
      return v.get<std::int64_t>();
    });
  if (j.contains("strategy"))
    c.strategy = detail::field<Strategy>(j, "strategy",
                                         [](const json& v) { return strategy_from_string(v.get<std::string>()); });
  if (j.contains("alice_rule"))
    c.alice_rule = detail::field<AliceRule>(
        j, "alice_rule", [](const json& v) { return alice_rule_from_string(v.get<std::string>()); });
  if (j.contains("transcript"))
    c.record_transcript = detail::field<bool>(j, "transcript", [](const json& v) { return v.get<bool>(); });
  if (j.contains("significance"))
    c.significance = detail::field<double>(j, "significance", [](const json& v) { return v.get<double>(); });
  if (j.contains("workers"))
    c.workers = detail::field<unsigned>(j, "workers", [](const json& v) { return v.get<unsigned>(); });

  try {
    c.validate();
  } catch (const std::exception& e) {
    throw config_error(std::string("invalid config: ") + e.what());
  }
  return c;
}

inline SimConfig load_sim_config(const std::filesystem::path& path) {
  return sim_config_from_json(parse_json_text(read_file(path), path.string()));
}

/// Write sim_result.json (and transcript.csv when recorded) into dir.
inline std::vector<std::filesystem::path> write_sim_outputs(const SimResult& r, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create '" + dir.string() + "': " + ec.message());
  std::vector<std::filesystem::path> written{dir / "sim_result.json"};
  write_file_atomic(written.back(), make_document("sim_result", r).dump(2) + "\n");
  if (r.config.record_transcript) {
    written.push_back(dir / "transcript.csv");
    write_file_atomic(written.back(), transcript_csv(r));
  }
  return written;
}

}  // namespace photonsteer

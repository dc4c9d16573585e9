#pragma once

// Table of the n-setting equatorial bound and its approach to 2/pi.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "photonsteer/app/json_io.hpp"
#include "photonsteer/steering_bounds.hpp"

namespace photonsteer {

/// Largest n cross-checked against sign enumeration in the table.
inline constexpr int kTableBruteforceLimit = 16;
inline constexpr double kTableMatchTolerance = 1e-12;

struct BoundRow {
  SettingCount n{1};
  double value;
  double excess;  // value - 2/pi
  std::string check;  // match, mismatch, unverified, or asymptote

  friend bool operator==(const BoundRow&, const BoundRow&) = default;
};

inline std::vector<BoundRow> bound_table(int n_max) {
  if (n_max < 1) throw std::domain_error("fn-table: --max must be >= 1, got " + std::to_string(n_max));
  std::vector<BoundRow> rows;
  for (int n = 1; n <= n_max; ++n) {
    const double v = setting_bound(n).value;
    std::string check = "unverified";
    if (n <= kTableBruteforceLimit)
      check = std::abs(v - setting_bound_bruteforce(n)) <= kTableMatchTolerance ? "match" : "mismatch";
    rows.push_back({n, v, v - plane_bound(), check});
  }
  rows.push_back({SettingCount::infinite(), plane_bound(), 0.0, "asymptote"});
  return rows;
}

inline void to_json(json& j, const BoundRow& r) {
  j = {{"n", r.n}, {"f", r.value}, {"excess", r.excess}, {"check", r.check}};
}
inline void from_json(const json& j, BoundRow& r) {
  r.n = j.at("n").get<SettingCount>();
  r.value = j.at("f").get<double>();
  r.excess = j.at("excess").get<double>();
  r.check = j.at("check").get<std::string>();
}

}  // namespace photonsteer

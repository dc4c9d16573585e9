#pragma once

// Two-parameter grids of a steering quantity, with iso-contours traced by
// marching squares on the grid.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <future>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "photonsteer/app/json_io.hpp"
#include "photonsteer/photon_state.hpp"
#include "photonsteer/steering_eval.hpp"

namespace photonsteer {

inline const std::vector<std::string>& sweep_parameters() {
  static const std::vector<std::string> names{"eta", "chi", "eta_h", "eta_p"};
  return names;
}

inline const std::vector<std::string>& sweep_quantities() {
  static const std::vector<std::string> names{"sufficient_lhs", "necessary_lhs", "eta_threshold", "margin"};
  return names;
}

inline double& param_slot(ExperimentParams& p, const std::string& name) {
  if (name == "eta") return p.eta;
  if (name == "chi") return p.chi;
  if (name == "eta_h") return p.eta_h;
  if (name == "eta_p") return p.eta_p;
  throw std::invalid_argument("unknown sweep parameter '" + name + "' (expected eta, chi, eta_h or eta_p)");
}

struct SweepAxis {
  std::string param;
  double min{0.0};
  double max{1.0};
  int steps{2};

  /// Evenly spaced values with both endpoints hit exactly.
  std::vector<double> values() const {
    std::vector<double> v(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i) v[static_cast<std::size_t>(i)] = min + (max - min) * i / (steps - 1);
    v.back() = max;
    return v;
  }

  friend bool operator==(const SweepAxis&, const SweepAxis&) = default;
};

/// Default contour level per quantity: the experimental eta for thresholds,
/// the violation boundary otherwise.
inline std::vector<double> default_contour_levels(const std::string& quantity) {
  if (quantity == "eta_threshold") return {0.64};
  if (quantity == "margin") return {0.0};
  return {1.0};
}

struct SweepSpec {
  SweepAxis x;
  SweepAxis y;
  ExperimentParams fixed;
  std::string quantity{"eta_threshold"};
  std::vector<double> contour_levels{0.64};

  void validate() const {
    for (const SweepAxis* a : {&x, &y}) {
      ExperimentParams probe;
      param_slot(probe, a->param);
      if (a->steps < 2) throw std::invalid_argument("sweep axis '" + a->param + "': steps must be >= 2");
      if (!(a->min >= 0.0 && a->max <= 1.0 && a->min < a->max))
        throw std::invalid_argument("sweep axis '" + a->param + "': need 0 <= min < max <= 1");
    }
    if (x.param == y.param) throw std::invalid_argument("sweep axes must be distinct parameters, both are '" + x.param + "'");
    if (std::find(sweep_quantities().begin(), sweep_quantities().end(), quantity) == sweep_quantities().end())
      throw std::invalid_argument("unknown sweep quantity '" + quantity +
                                  "' (expected sufficient_lhs, necessary_lhs, eta_threshold or margin)");
    if (quantity == "eta_threshold" && (x.param == "eta" || y.param == "eta"))
      throw std::invalid_argument("eta_threshold solves for eta, so eta cannot be a sweep axis");
    fixed.validate();
  }

  friend bool operator==(const SweepSpec&, const SweepSpec&) = default;
};

struct SweepCell {
  double x;
  double y;
  double value;
  std::string flag;

  friend bool operator==(const SweepCell& a, const SweepCell& b) {
    auto same = [](double u, double v) { return u == v || (std::isnan(u) && std::isnan(v)); };
    return a.x == b.x && a.y == b.y && same(a.value, b.value) && a.flag == b.flag;
  }
};

struct ContourSegment {
  double level;
  double x1, y1, x2, y2;

  friend bool operator==(const ContourSegment&, const ContourSegment&) = default;
};

struct SweepResult {
  SweepSpec spec;
  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<SweepCell> cells;  // x-major: cells[i * ys.size() + j]
  std::vector<ContourSegment> contours;

  const SweepCell& at(std::size_t i, std::size_t j) const { return cells[i * ys.size() + j]; }

  friend bool operator==(const SweepResult&, const SweepResult&) = default;
};

/// One grid cell. Thresholds above 1 cannot be met by any physical eta and are
/// reported as NaN flagged "unreachable".
inline SweepCell evaluate_cell(const SweepSpec& spec, double xv, double yv) {
  ExperimentParams p = spec.fixed;
  param_slot(p, spec.x.param) = xv;
  param_slot(p, spec.y.param) = yv;
  SweepCell c{xv, yv, 0.0, ""};
  if (spec.quantity == "eta_threshold") {
    const double t = eta_threshold(p.chi, p.eta_h, p.eta_p, p.n_settings);
    if (t > 1.0) {
      c.value = std::numeric_limits<double>::quiet_NaN();
      c.flag = "unreachable";
    } else {
      c.value = t;
      c.flag = "ok";
    }
  } else if (spec.quantity == "sufficient_lhs") {
    const auto r = sufficient_condition(p);
    c.value = r.lhs_value;
    c.flag = r.satisfied ? "satisfied" : "not_satisfied";
  } else if (spec.quantity == "necessary_lhs") {
    const auto r = necessary_condition(p);
    c.value = r.lhs_value;
    c.flag = r.possible ? "satisfied" : "not_satisfied";
  } else {
    const auto r = evaluate_inequality(p);
    c.value = r.margin;
    c.flag = to_string(r.verdict);
  }
  return c;
}

/// Marching squares with linear interpolation along cell edges. Cells with a
/// NaN corner are skipped; saddles are resolved by the cell-centre average.
inline std::vector<ContourSegment> trace_contours(const std::vector<double>& xs, const std::vector<double>& ys,
                                                  const std::vector<double>& values, double level) {
  const std::size_t ny = ys.size();
  auto v = [&](std::size_t i, std::size_t j) { return values[i * ny + j]; };
  std::vector<ContourSegment> out;
  struct Pt {
    double x, y;
  };
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    for (std::size_t j = 0; j + 1 < ny; ++j) {
      // corners counter-clockwise from (x_i, y_j)
      const double cx[4] = {xs[i], xs[i + 1], xs[i + 1], xs[i]};
      const double cy[4] = {ys[j], ys[j], ys[j + 1], ys[j + 1]};
      const double cv[4] = {v(i, j), v(i + 1, j), v(i + 1, j + 1), v(i, j + 1)};
      if (std::any_of(cv, cv + 4, [](double d) { return std::isnan(d); })) continue;
      bool above[4];
      for (int k = 0; k < 4; ++k) above[k] = cv[k] >= level;

      Pt pts[4];
      bool crossed[4] = {false, false, false, false};
      for (int e = 0; e < 4; ++e) {
        const int a = e, b = (e + 1) % 4;
        if (above[a] == above[b]) continue;
        const double t = (level - cv[a]) / (cv[b] - cv[a]);
        pts[e] = {cx[a] + t * (cx[b] - cx[a]), cy[a] + t * (cy[b] - cy[a])};
        crossed[e] = true;
      }
      auto emit = [&](int e1, int e2) { out.push_back({level, pts[e1].x, pts[e1].y, pts[e2].x, pts[e2].y}); };
      const int count = crossed[0] + crossed[1] + crossed[2] + crossed[3];
      if (count == 2) {
        int first = -1, second = -1;
        for (int e = 0; e < 4; ++e) {
          if (!crossed[e]) continue;
          (first < 0 ? first : second) = e;
        }
        emit(first, second);
      } else if (count == 4) {
        const bool centre_above = 0.25 * (cv[0] + cv[1] + cv[2] + cv[3]) >= level;
        if (centre_above == above[0]) {
          // corners 0 and 2 connect through the centre; cut off corners 1 and 3
          emit(0, 1);
          emit(2, 3);
        } else {
          emit(3, 0);
          emit(1, 2);
        }
      }
    }
  }
  return out;
}

/// Evaluate every cell. Cells are independent, so the result does not depend
/// on the worker count.
inline SweepResult run_sweep(const SweepSpec& spec, unsigned workers = 1) {
  spec.validate();
  SweepResult r;
  r.spec = spec;
  r.xs = spec.x.values();
  r.ys = spec.y.values();
  const std::size_t ny = r.ys.size();
  const std::size_t total = r.xs.size() * ny;
  r.cells.resize(total);

  auto fill = [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) r.cells[k] = evaluate_cell(spec, r.xs[k / ny], r.ys[k % ny]);
  };
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(total)));
  if (workers == 1) {
    fill(0, total);
  } else {
    std::vector<std::future<void>> jobs;
    const std::size_t chunk = (total + workers - 1) / workers;
    for (std::size_t begin = 0; begin < total; begin += chunk)
      jobs.push_back(std::async(std::launch::async, fill, begin, std::min(total, begin + chunk)));
    for (auto& j : jobs) j.get();
  }

  std::vector<double> values(total);
  for (std::size_t k = 0; k < total; ++k) values[k] = r.cells[k].value;
  for (double level : spec.contour_levels) {
    auto segs = trace_contours(r.xs, r.ys, values, level);
    r.contours.insert(r.contours.end(), segs.begin(), segs.end());
  }
  return r;
}

// ---------------------------------------------------------------------------
// Serialization

inline void to_json(json& j, const SweepAxis& a) {
  j = {{"param", a.param}, {"min", a.min}, {"max", a.max}, {"steps", a.steps}};
}
inline void from_json(const json& j, SweepAxis& a) {
  a.param = j.at("param").get<std::string>();
  a.min = j.at("min").get<double>();
  a.max = j.at("max").get<double>();
  a.steps = j.at("steps").get<int>();
}

/// Fixed parameters may be partial; anything omitted keeps its default.
inline ExperimentParams partial_params(const json& j) {
  ExperimentParams p;
  if (!j.is_object()) throw std::invalid_argument("'fixed' must be an object");
  for (const auto& [key, val] : j.items()) {
    if (key == "n_settings")
      p.n_settings = val.get<SettingCount>();
    else if (key == "label")
      p.label = val.get<std::string>();
    else
      param_slot(p, key) = val.get<double>();
  }
  return p;
}

inline void to_json(json& j, const SweepSpec& s) {
  j = {{"axes", {s.x, s.y}}, {"fixed", s.fixed}, {"quantity", s.quantity}, {"contour_levels", s.contour_levels}};
}
inline void from_json(const json& j, SweepSpec& s) {
  const auto& axes = j.at("axes");
  if (!axes.is_array() || axes.size() != 2) throw std::invalid_argument("'axes' must list exactly two axes");
  s.x = axes[0].get<SweepAxis>();
  s.y = axes[1].get<SweepAxis>();
  s.fixed = j.contains("fixed") ? partial_params(j.at("fixed")) : ExperimentParams{};
  s.quantity = j.value("quantity", std::string("eta_threshold"));
  s.contour_levels = j.contains("contour_levels") ? j.at("contour_levels").get<std::vector<double>>()
                                                  : default_contour_levels(s.quantity);
}

inline void to_json(json& j, const SweepCell& c) {
  j = {{"x", c.x}, {"y", c.y}, {"value", number_to_json(c.value)}, {"flag", c.flag}};
}
inline void from_json(const json& j, SweepCell& c) {
  c.x = j.at("x").get<double>();
  c.y = j.at("y").get<double>();
  c.value = number_from_json(j.at("value"));
  c.flag = j.at("flag").get<std::string>();
}

inline void to_json(json& j, const ContourSegment& s) {
  j = {{"level", s.level}, {"x1", s.x1}, {"y1", s.y1}, {"x2", s.x2}, {"y2", s.y2}};
}
inline void from_json(const json& j, ContourSegment& s) {
  s.level = j.at("level").get<double>();
  s.x1 = j.at("x1").get<double>();
  s.y1 = j.at("y1").get<double>();
  s.x2 = j.at("x2").get<double>();
  s.y2 = j.at("y2").get<double>();
}

inline void to_json(json& j, const SweepResult& r) {
  j = {{"spec", r.spec}, {"xs", r.xs}, {"ys", r.ys}, {"cells", r.cells}, {"contours", r.contours}};
}
inline void from_json(const json& j, SweepResult& r) {
  r.spec = j.at("spec").get<SweepSpec>();
  r.xs = j.at("xs").get<std::vector<double>>();
  r.ys = j.at("ys").get<std::vector<double>>();
  r.cells = j.at("cells").get<std::vector<SweepCell>>();
  r.contours = j.at("contours").get<std::vector<ContourSegment>>();
}

/// Grid CSV: the two axis parameters by name, then value and flag.
inline std::string sweep_grid_csv(const SweepResult& r) {
  std::string out = r.spec.x.param + "," + r.spec.y.param + ",value,flag\n";
  for (const auto& c : r.cells)
    out += format_number(c.x) + "," + format_number(c.y) + "," + format_number(c.value) + "," + c.flag + "\n";
  return out;
}

inline std::string sweep_contours_csv(const SweepResult& r) {
  std::string out = "level,x1,y1,x2,y2\n";
  for (const auto& s : r.contours)
    out += format_number(s.level) + "," + format_number(s.x1) + "," + format_number(s.y1) + "," +
           format_number(s.x2) + "," + format_number(s.y2) + "\n";
  return out;
}

/// Write the grid to out. A ".json" path gets a single JSON document;
/// otherwise the grid CSV goes to out and the contours to a ".contours.csv"
/// sibling.
inline std::vector<std::filesystem::path> write_sweep(const SweepResult& r, const std::filesystem::path& out) {
  if (out.extension() == ".json") {
    write_file_atomic(out, make_document("sweep", r).dump(2) + "\n");
    return {out};
  }
  auto contour_path = out;
  contour_path.replace_extension(".contours.csv");
  write_file_atomic(out, sweep_grid_csv(r));
  write_file_atomic(contour_path, sweep_contours_csv(r));
  return {out, contour_path};
}

}  // namespace photonsteer

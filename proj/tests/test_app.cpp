#include <catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "photonsteer/app/cli.hpp"

using namespace photonsteer;
using Catch::Approx;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun cli(std::vector<std::string> args) {
  args.insert(args.begin(), "photonsteer");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("photonsteer_test_" + std::to_string(::getpid())) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_text(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

template <class T>
T round_trip(const T& x, const std::string& kind) {
  const std::string text = make_document(kind, x).dump();
  return read_document<T>(json::parse(text), kind);
}

SweepSpec even_split_spec(int steps) {
  SweepSpec s;
  s.x = {"eta_h", 0.0, 1.0, steps};
  s.y = {"eta_p", 0.0, 1.0, steps};
  s.fixed.chi = 0.5;
  s.fixed.n_settings = SettingCount::infinite();
  s.quantity = "eta_threshold";
  s.contour_levels = {0.64};
  return s;
}

}  // namespace

TEST_CASE("every preset reproduces its expected values", "[app]") {
  for (const auto& p : scenario_registry()) {
    const auto rep = evaluate_scenario(p);
    for (const auto& c : rep.checks) {
      INFO(p.name << " " << c.quantity << " expected " << c.expected << " got " << c.actual);
      CHECK(c.pass);
      CHECK_FALSE(c.source.empty());
    }
  }
  const auto sym = evaluate_scenario(*find_scenario("babichev-sym"));
  CHECK(sym.quantities.at("necessary_lhs") == Approx(0.87).margin(0.005));
  const auto rev = evaluate_scenario(*find_scenario("babichev-asym-reversed+pd"));
  CHECK(rev.quantities.at("necessary_lhs") == Approx(1.24).margin(0.005));
  CHECK(rev.quantities.at("sufficient_lhs") == Approx(1.01).margin(0.005));
  CHECK(evaluate_scenario(*find_scenario("improved-no-pd")).quantities.at("sufficient_lhs") ==
        Approx(1.10).margin(0.005));
  CHECK(find_scenario("no-such-preset") == nullptr);
}

TEST_CASE("JSON round trips", "[app]") {
  ExperimentParams p;
  p.eta = 0.64;
  p.chi = 0.08;
  p.eta_h = 0.86;
  p.eta_p = 0.3;
  p.n_settings = SettingCount::infinite();
  p.label = "x";
  CHECK(round_trip(p, "params") == p);

  const auto rep = evaluate_inequality(p);
  CHECK(round_trip(rep, "report") == rep);

  const auto scen = evaluate_scenario(*find_scenario("babichev-sym"));
  const auto scen2 = round_trip(scen, "scenario");
  CHECK(scen2.quantities == scen.quantities);
  CHECK(scen2.report == scen.report);
  CHECK(scen2.checks.size() == scen.checks.size());

  SimConfig cfg;
  cfg.params = *&find_scenario("babichev-sym+pd")->params;
  cfg.shots_per_setting = 1;
  cfg.seed = 18446744073709551615ull;
  cfg.strategy = Strategy::lhs_two_ring;
  const auto sim = run_experiment(cfg);
  REQUIRE(std::isinf(sim.margin.std_error));
  CHECK(round_trip(sim, "sim_result") == sim);

  cfg.shots_per_setting = 2000;
  cfg.strategy = Strategy::honest_quantum;
  const auto sim2 = run_experiment(cfg);
  CHECK(round_trip(sim2, "sim_result") == sim2);

  const auto sweep = run_sweep(even_split_spec(11));
  CHECK(round_trip(sweep, "sweep") == sweep);

  const auto rows = bound_table(20);
  const auto back = json::parse(json(rows).dump()).get<std::vector<BoundRow>>();
  CHECK(back == rows);

  CHECK_THROWS(read_document<ExperimentParams>(make_document("other", p), "params"));
}

TEST_CASE("sweep grid values and sentinels", "[app]") {
  const auto r = run_sweep(even_split_spec(51));
  REQUIRE(r.cells.size() == 51u * 51u);
  const auto& corner = r.at(50, 50);
  CHECK(corner.value == Approx(0.56010).margin(5e-6));
  const auto& mid = r.at(43, 15);
  CHECK(mid.x == Approx(0.86));
  CHECK(mid.y == Approx(0.3));
  CHECK(mid.value == Approx(0.75447).margin(5e-6));
  CHECK(std::isnan(r.at(0, 0).value));
  CHECK(r.at(0, 0).flag == "unreachable");
  for (const auto& c : r.cells) {
    const double t = 4.0 / (2.0 + std::numbers::pi * c.x + 2.0 * c.y);
    if (t > 1.0) {
      CHECK(c.flag == "unreachable");
    } else {
      CHECK(c.flag == "ok");
      CHECK(std::abs(c.value - t) <= 1e-12);
    }
  }
  REQUIRE_FALSE(r.contours.empty());
  for (const auto& s : r.contours) {
    CHECK(4.0 / (2.0 + std::numbers::pi * s.x1 + 2.0 * s.y1) == Approx(0.64).margin(2e-3));
    CHECK(4.0 / (2.0 + std::numbers::pi * s.x2 + 2.0 * s.y2) == Approx(0.64).margin(2e-3));
  }
}

TEST_CASE("sweep output is independent of worker count", "[app]") {
  auto spec = even_split_spec(23);
  spec.quantity = "margin";
  spec.fixed.eta = 0.7;
  spec.fixed.n_settings = 8;
  spec.contour_levels = {0.0};
  const auto serial = run_sweep(spec, 1);
  for (unsigned w : {2u, 3u, 7u}) CHECK(run_sweep(spec, w) == serial);
}

TEST_CASE("sweep spec validation", "[app]") {
  auto spec = even_split_spec(5);
  spec.y.param = "eta_h";
  CHECK_THROWS_AS(run_sweep(spec), std::invalid_argument);
  spec = even_split_spec(1);
  CHECK_THROWS_AS(run_sweep(spec), std::invalid_argument);
  spec = even_split_spec(5);
  spec.x.param = "eta";
  CHECK_THROWS_AS(run_sweep(spec), std::invalid_argument);
  spec = even_split_spec(5);
  spec.quantity = "volume";
  CHECK_THROWS_AS(run_sweep(spec), std::invalid_argument);
}

TEST_CASE("contour tracing on a plane", "[app]") {
  const std::vector<double> xs{0.0, 1.0, 2.0}, ys{0.0, 1.0};
  std::vector<double> v;
  for (double x : xs)
    for (double y : ys) v.push_back(x + 0.0 * y);
  const auto segs = trace_contours(xs, ys, v, 0.5);
  REQUIRE(segs.size() == 1);
  CHECK(segs[0].x1 == Approx(0.5));
  CHECK(segs[0].x2 == Approx(0.5));
}

TEST_CASE("bound table", "[app]") {
  const auto rows = bound_table(20);
  REQUIRE(rows.size() == 21);
  CHECK(rows[1].value == Approx(0.70711).margin(5e-6));
  CHECK(rows[2].value == Approx(0.66667).margin(5e-6));
  CHECK(rows[7].value == Approx(0.64073).margin(5e-6));
  for (int i = 0; i < 16; ++i) CHECK(rows[i].check == "match");
  CHECK(rows[16].check == "unverified");
  CHECK(rows.back().n.is_infinite());
  CHECK(rows.back().value == Approx(0.63662).margin(5e-6));
  CHECK_THROWS_AS(bound_table(0), std::domain_error);
}

TEST_CASE("cli scenario", "[cli]") {
  auto r = cli({"scenario", "babichev-sym"});
  CHECK(r.code == 0);
  CHECK(r.out.find("PASS necessary_lhs") != std::string::npos);

  r = cli({"scenario", "improved-no-pd", "--json"});
  CHECK(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j.at("schema_version") == kSchemaVersion);
  CHECK(j.at("quantities").at("sufficient_lhs").get<double>() == Approx(1.10).margin(0.005));

  r = cli({"--json", "scenario", "ideal"});
  CHECK(r.code == 0);
  CHECK(json::parse(r.out).at("kind") == "scenario");

  r = cli({"scenario", "nope"});
  CHECK(r.code == kExitError);
  CHECK(r.err.find("babichev-asym-reversed+pd") != std::string::npos);

  r = cli({"scenario", "--list"});
  CHECK(r.code == 0);
  CHECK(r.out.find("improved-pd") != std::string::npos);
}

TEST_CASE("cli fn-table and evaluate", "[cli]") {
  auto r = cli({"fn-table", "--max", "8"});
  CHECK(r.code == 0);
  CHECK(r.out.find("0.70711") != std::string::npos);
  CHECK(r.out.find("0.64073") != std::string::npos);
  CHECK(r.out.find("0.63662") != std::string::npos);

  r = cli({"fn-table", "--max", "18", "--json"});
  const auto rows = json::parse(r.out).at("rows");
  CHECK(rows.size() == 19);
  CHECK(rows.back().at("n") == "inf");

  CHECK(cli({"fn-table", "--max", "0"}).code == kExitError);

  r = cli({"evaluate", "--eta", "0.64", "--chi", "0.08", "--eta-h", "0.86", "--eta-p", "0.3", "--json"});
  CHECK(r.code == 0);
  CHECK(json::parse(r.out).at("report").at("verdict") == "violated");
  CHECK(cli({"evaluate", "--eta", "1.5"}).code == kExitError);
  CHECK(cli({"bogus"}).code == kExitUsage);
}

TEST_CASE("cli sweep", "[cli]") {
  const auto dir = scratch("sweep");
  write_text(dir / "spec.json", json(even_split_spec(21)).dump());
  auto r = cli({"sweep", "--spec", (dir / "spec.json").string(), "--out", (dir / "grid.csv").string()});
  REQUIRE(r.code == 0);
  std::ifstream grid(dir / "grid.csv");
  std::string header;
  std::getline(grid, header);
  CHECK(header == "eta_h,eta_p,value,flag");
  CHECK(fs::exists(dir / "grid.contours.csv"));

  r = cli({"sweep", "--spec", (dir / "spec.json").string(), "--out", (dir / "grid.json").string(), "--workers", "3"});
  REQUIRE(r.code == 0);
  const auto doc = read_document<SweepResult>(json::parse(read_file(dir / "grid.json")), "sweep");
  CHECK(doc == run_sweep(even_split_spec(21)));

  r = cli({"sweep", "--spec", (dir / "spec.json").string(), "--out", (dir / "missing" / "grid.csv").string()});
  CHECK(r.code == kExitError);
  CHECK(r.err.find((dir / "missing" / "grid.csv").string()) != std::string::npos);

  write_text(dir / "bad.json", R"({"axes": [{"param": "eta_h", "min": 0, "max": 1, "steps": 3}]})");
  r = cli({"sweep", "--spec", (dir / "bad.json").string(), "--out", (dir / "x.csv").string()});
  CHECK(r.code == kExitError);
}

TEST_CASE("cli simulate", "[cli]") {
  const auto dir = scratch("simulate");
  write_text(dir / "ideal.json", R"({"preset": "ideal", "seed": 11, "shots_per_setting": 40000})");
  auto r = cli({"simulate", "--config", (dir / "ideal.json").string(), "--out", (dir / "ideal").string()});
  REQUIRE(r.code == 0);
  const auto res = read_document<SimResult>(json::parse(read_file(dir / "ideal" / "sim_result.json")), "sim_result");
  CHECK(std::abs(res.lhs.value - std::sqrt(2.0 / std::numbers::pi)) < 4.0 * res.lhs.std_error);
  CHECK_FALSE(fs::exists(dir / "ideal" / "transcript.csv"));

  write_text(dir / "cheat.json", R"({"params": {"eta": 0.64, "chi": 0.5, "eta_h": 0.86, "eta_p": 0.3, "n_settings": 8},
    "seed": 3, "shots_per_setting": 2000, "strategy": "lhs_two_ring", "transcript": true})");
  r = cli({"simulate", "--config", (dir / "cheat.json").string(), "--out", (dir / "cheat").string(), "--json"});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out).at("verdict") == "not_violated");
  std::ifstream tr(dir / "cheat" / "transcript.csv");
  std::string line;
  std::size_t lines = 0;
  std::getline(tr, line);
  CHECK(line == "setting,alice,bob_axis,bob");
  while (std::getline(tr, line)) ++lines;
  CHECK(lines == 2000u * 9u);

  write_text(dir / "noseed.json", R"({"preset": "ideal", "shots_per_setting": 10})");
  r = cli({"simulate", "--config", (dir / "noseed.json").string(), "--out", (dir / "noseed").string()});
  CHECK(r.code == kExitError);
  CHECK(r.err.find("seed") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "noseed"));

  write_text(dir / "broken.json", "{\n  \"preset\": \"ideal\",\n  \"seed\": 4,\n}\n");
  r = cli({"simulate", "--config", (dir / "broken.json").string(), "--out", (dir / "broken").string()});
  CHECK(r.code == kExitError);
  CHECK(r.err.find("broken.json:4:") != std::string::npos);

  write_text(dir / "badfield.json", R"({"preset": "ideal", "seed": 4, "strategy": "psychic"})");
  r = cli({"simulate", "--config", (dir / "badfield.json").string(), "--out", (dir / "badfield").string()});
  CHECK(r.code == kExitError);
  CHECK(r.err.find("field 'strategy'") != std::string::npos);
}

TEST_CASE("sample inputs load", "[app]") {
  const fs::path samples = PHOTONSTEER_SAMPLES_DIR;
  CHECK_NOTHROW(load_sim_config(samples / "sim_ideal.json"));
  CHECK_NOTHROW(load_sim_config(samples / "sim_two_ring.json"));
  CHECK_NOTHROW(json::parse(read_file(samples / "sweep_even_split.json")).get<SweepSpec>().validate());
}

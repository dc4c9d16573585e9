#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "photonsteer/steering_bounds.hpp"

using namespace photonsteer;
using Catch::Approx;

TEST_CASE("continuum bound", "[bounds]") {
  CHECK(plane_bound() == Approx(0.63662).margin(5e-6));
  CHECK(setting_bound(SettingCount::infinite()).value == plane_bound());
  CHECK(setting_bound(2000).value == Approx(plane_bound()).margin(1e-6));
  // (1/pi) times the integral of sigma_theta over a half circle has top eigenvalue 2/pi
  const double x = oracle::integrate([](double t) { return std::cos(t); }, -std::numbers::pi / 2, std::numbers::pi / 2);
  CHECK(x / std::numbers::pi == Approx(plane_bound()).margin(1e-14));
}

TEST_CASE("setting_bound closed form", "[bounds]") {
  CHECK(setting_bound(1).value == Approx(1.0));
  CHECK(setting_bound(2).value == Approx(1.0 / std::sqrt(2.0)).margin(1e-15));
  CHECK(setting_bound(3).value == Approx(2.0 / 3.0).margin(1e-15));
  CHECK(setting_bound(4).value == Approx(0.6533).margin(5e-5));
  CHECK(setting_bound(5).value == Approx(0.6472).margin(5e-5));
  CHECK(setting_bound(8).value == Approx(0.64073).margin(5e-6));
  CHECK_THROWS_AS(setting_bound(0), std::domain_error);
  for (int n = 1; n < 200; ++n) CHECK(setting_bound(n + 1).value < setting_bound(n).value);
}

TEST_CASE("setting_bound agrees with sign enumeration", "[bounds]") {
  for (int n = 1; n <= 16; ++n) {
    INFO("n = " << n);
    CHECK(setting_bound_bruteforce(n) == Approx(setting_bound(n).value).margin(1e-12));
    if (n <= 12) CHECK(oracle::setting_bound_enumerated(n) == Approx(setting_bound(n).value).margin(1e-12));
  }
  CHECK_THROWS_AS(setting_bound_bruteforce(kMaxBruteforceSettings + 1), resource_error);
}

TEST_CASE("equatorial ensembles attain f(n)", "[bounds]") {
  CHECK(equatorial_lhs_correlation(SettingCount::infinite()) == plane_bound());
  CHECK(equatorial_lhs_correlation(2) == Approx(1.0 / std::sqrt(2.0)).margin(1e-14));
  CHECK(equatorial_ensemble(2).size() == 4);
  CHECK(equatorial_lhs_correlation(5) == Approx(0.64721).margin(5e-6));
  CHECK(equatorial_ensemble(5).size() == 10);
  for (int n = 1; n <= 32; ++n) CHECK(equatorial_lhs_correlation(n) == Approx(setting_bound(n).value).margin(1e-12));
}

TEST_CASE("response rule breaks ties toward +1", "[bounds]") {
  const LhsMember orthogonal{{0.0, 1.0, 0.0}, 1.0, 1};
  CHECK(LhsEnsemble::respond(orthogonal, 0.0) == 1);
  const LhsMember behind{{-1.0, 0.0, 0.0}, 1.0, 1};
  CHECK(LhsEnsemble::respond(behind, 0.0) == -1);
}

TEST_CASE("LhsEnsemble validation", "[bounds]") {
  CHECK_THROWS_AS(LhsEnsemble({{{1, 0, 0}, 0.5, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(LhsEnsemble({{{0.5, 0, 0}, 1.0, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(LhsEnsemble({{{1, 0, 0}, 1.0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(LhsEnsemble({{{1, 0, 0}, -0.5, 1}, {{1, 0, 0}, 1.5, 1}}), std::invalid_argument);
}

TEST_CASE("two-ring value", "[bounds]") {
  PhotodetectionOutcome pole;
  pole.p_plus = 0.3;
  pole.p_minus = 0.7;
  pole.z_plus = -1.0;
  pole.z_minus = 0.0;
  CHECK(two_ring_lhs_value(4, pole) == Approx(0.7 * setting_bound(4).value));

  PhotodetectionOutcome flat;
  flat.p_plus = 1.0;
  flat.p_minus = 0.0;
  CHECK(two_ring_lhs_value(SettingCount::infinite(), flat) == plane_bound());

  const auto pd = photodetect(make_state(0.64, 0.5), 0.3);
  const double expected = setting_bound(8).value * 0.904 * std::sqrt(1.0 - pd.z_minus * pd.z_minus);
  CHECK(two_ring_lhs_value(8, pd) == Approx(expected).margin(1e-15));
  CHECK(two_ring_lhs_value(8, pd) == Approx(0.5539692977692446).margin(1e-12));
  CHECK(ensemble_equatorial_correlation(two_ring_ensemble(8, pd), 8) == Approx(two_ring_lhs_value(8, pd)).margin(1e-12));
}

TEST_CASE("plane functional never exceeds its ceiling", "[bounds]") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::bernoulli_distribution coin;
  for (int k = 0; k < 2000; ++k) {
    BlochVector v{u(rng), u(rng), u(rng)};
    if (v.norm() > 1.0) v = {v.x / v.norm(), v.y / v.norm(), v.z / v.norm()};
    std::vector<int> signs(64);
    for (auto& s : signs) s = coin(rng) ? 1 : -1;
    CHECK(plane_functional(v, signs) <= plane_functional_ceiling(v) + 1e-12);
  }
  // sign of <sigma_theta> on a fine grid approaches the ceiling from below
  const BlochVector v{0.6, 0.0, 0.8};
  std::vector<int> best(4096);
  for (std::size_t k = 0; k < best.size(); ++k) {
    const double mid = -std::numbers::pi / 2 + (k + 0.5) * std::numbers::pi / best.size();
    best[k] = std::cos(mid) * v.x >= 0 ? 1 : -1;
  }
  CHECK(plane_functional(v, best) == Approx(plane_functional_ceiling(v)).margin(1e-12));
}

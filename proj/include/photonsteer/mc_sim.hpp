#pragma once

// Seeded finite-shot simulation of the steering test.
//
// Settings 0..n-1 are the equatorial axes theta_i = i pi / n; setting n is
// sigma_z. Every setting draws from its own mt19937_64 stream seeded with
// seed_seq{seed_lo, seed_hi, setting}, so results do not depend on the order
// or thread in which settings run. All tallies are integer counts.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <future>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "photonsteer/linalg.hpp"
#include "photonsteer/measurement.hpp"
#include "photonsteer/photon_state.hpp"
#include "photonsteer/steering_bounds.hpp"
#include "photonsteer/steering_eval.hpp"

namespace photonsteer {

using Rng = std::mt19937_64;

inline Rng stream_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

enum class Strategy { honest_quantum, lhs_two_ring, lhs_equatorial };
enum class AliceRule { negative_sign, kernel_sign };

inline const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::honest_quantum: return "honest_quantum";
    case Strategy::lhs_two_ring: return "lhs_two_ring";
    case Strategy::lhs_equatorial: return "lhs_equatorial";
  }
  return "?";
}

inline const char* to_string(AliceRule r) {
  return r == AliceRule::negative_sign ? "negative_sign" : "kernel_sign";
}

struct SimConfig {
  ExperimentParams params;
  std::int64_t shots_per_setting{100000};
  std::uint64_t seed{0};
  Strategy strategy{Strategy::honest_quantum};
  AliceRule alice_rule{AliceRule::negative_sign};
  bool record_transcript{false};
  // A violation is declared only when margin > significance * standard error.
  double significance{3.0};
  unsigned workers{1};

  void validate() const {
    params.validate();
    if (params.n_settings.is_infinite()) throw std::domain_error("simulation needs a finite number of settings");
    if (shots_per_setting < 1) throw std::domain_error("shots_per_setting must be >= 1");
    if (!(significance >= 0.0)) throw std::domain_error("significance must be >= 0");
  }

  friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

struct Estimate {
  double value{0.0};
  double std_error{std::numeric_limits<double>::infinity()};
  double analytic{0.0};
  std::int64_t samples{0};
  bool defined{false};

  /// |value - analytic| <= k standard errors.
  bool consistent(double k) const { return !defined || std::abs(value - analytic) <= k * std_error; }

  friend bool operator==(const Estimate&, const Estimate&) = default;
};

struct SettingEstimate {
  int setting{0};
  double theta{0.0};
  Estimate correlation;

  friend bool operator==(const SettingEstimate&, const SettingEstimate&) = default;
};

struct ShotRecord {
  int setting;
  int alice;
  int bob;

  friend bool operator==(const ShotRecord&, const ShotRecord&) = default;
};

struct SimResult {
  SimConfig config;
  std::vector<SettingEstimate> settings;
  Estimate p_plus, z_plus, z_minus;
  Estimate lhs, rhs, margin;
  SteeringReport empirical;
  Verdict verdict{Verdict::not_violated};
  bool error_bars_infinite{false};
  std::vector<ShotRecord> transcript;

  friend bool operator==(const SimResult&, const SimResult&) = default;
};

// ---------------------------------------------------------------------------
// Shot-level sampling

struct HomodyneSample {
  double r;
  Mat2 bob_state;
};

/// Draw r from w0 G(r) + w1 r^2 G(r) and return Bob's normalized conditioned
/// state. The r^2 G component is a Maxwell magnitude (norm of three standard
/// normals) with a uniform sign.
template <class URBG>
HomodyneSample sample_homodyne_outcome(const SplitPhotonState& w, double theta, URBG& rng) {
  const HomodyneMixture mix = homodyne_marginal_density(w, theta);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uniform;
  for (;;) {
    double r;
    if (uniform(rng) < mix.w1) {
      const double a = normal(rng), b = normal(rng), c = normal(rng);
      r = std::sqrt(a * a + b * b + c * c);
      if (uniform(rng) < 0.5) r = -r;
    } else {
      r = normal(rng);
    }
    const Mat2 unnormalized = apply_effect_A_unchecked(w.matrix(), homodyne_effect(theta, r));
    const double density = trace(unnormalized).real();
    if (density > 0.0) return {r, (1.0 / density) * unnormalized};
  }
}

/// +1 with probability (1 + <observable>)/2; the observable has eigenvalues +-1.
template <class URBG>
int sample_bob_outcome(const Mat2& bob_state, const Mat2& observable, URBG& rng) {
  const double p_up = std::clamp(0.5 * (1.0 + expectation(bob_state, observable)), 0.0, 1.0);
  std::uniform_real_distribution<double> uniform;
  return uniform(rng) < p_up ? 1 : -1;
}

namespace detail {

struct SettingTally {
  std::int64_t shots{0};
  std::int64_t product_sum{0};  // equatorial: sum of a*b
  std::int64_t plus_count{0}, plus_sum{0};  // z: sum of b given a = +1
  std::int64_t minus_count{0}, minus_sum{0};
  std::vector<ShotRecord> transcript;
};

inline double mean_std_error(double mean, std::int64_t n) {
  if (n <= 1) return std::numeric_limits<double>::infinity();
  return std::sqrt(std::max(0.0, 1.0 - mean * mean) / static_cast<double>(n - 1));
}

inline Estimate pm1_mean(std::int64_t sum, std::int64_t n, double analytic) {
  Estimate e;
  e.samples = n;
  e.analytic = analytic;
  e.defined = n > 0;
  if (n > 0) {
    e.value = static_cast<double>(sum) / static_cast<double>(n);
    e.std_error = mean_std_error(e.value, n);
  }
  return e;
}

inline Estimate proportion(std::int64_t hits, std::int64_t n, double analytic) {
  Estimate e;
  e.samples = n;
  e.analytic = analytic;
  e.defined = n > 0;
  if (n > 0) {
    e.value = static_cast<double>(hits) / static_cast<double>(n);
    e.std_error = n > 1 ? std::sqrt(e.value * (1.0 - e.value) / static_cast<double>(n - 1))
                        : std::numeric_limits<double>::infinity();
  }
  return e;
}

struct Model {
  int n{1};
  std::vector<double> angles;
  // honest
  SplitPhotonState lossy = apply_alice_loss(make_state(1.0, 0.5), 1.0);
  Mat2 click_state, no_click_state;
  double p_click{0.0};
  // cheating
  std::vector<LhsMember> members;
  std::vector<double> weights;
  // analytic targets
  std::vector<double> analytic_correlation;
  PhotodetectionOutcome analytic_pd;
  double analytic_lhs{0.0}, analytic_rhs{0.0};
};

inline Model build_model(const SimConfig& cfg) {
  const ExperimentParams& p = cfg.params;
  Model m;
  m.n = p.n_settings.value();
  m.angles = setting_angles(m.n);
  const SplitPhotonState ideal = make_state(p.eta, p.chi);
  const PhotodetectionOutcome pd = photodetect(ideal, p.eta_p);

  if (cfg.strategy == Strategy::honest_quantum) {
    m.lossy = apply_alice_loss(ideal, p.eta_h);
    Mat2 click;
    click(1, 1) = p.eta_p;
    const Mat2 plus = apply_effect_A(ideal.matrix(), click);
    const Mat2 minus = apply_effect_A(ideal.matrix(), Mat2::identity() - click);
    m.p_click = pd.p_plus;
    if (!pd.plus_degenerate) m.click_state = (1.0 / pd.p_plus) * plus;
    if (!pd.minus_degenerate) m.no_click_state = (1.0 / pd.p_minus) * minus;
    const double c = quantum_correlation(p.eta, p.eta_h, p.chi);
    m.analytic_correlation.assign(static_cast<std::size_t>(m.n), c);
    m.analytic_pd = pd;
    m.analytic_lhs = c;
    m.analytic_rhs = nonlinear_rhs(p.n_settings, pd);
  } else {
    const LhsEnsemble ensemble =
        cfg.strategy == Strategy::lhs_two_ring ? two_ring_ensemble(m.n, pd) : equatorial_ensemble(m.n);
    m.members = ensemble.members();
    for (const auto& mem : m.members) m.weights.push_back(mem.weight);
    for (double theta : m.angles) {
      double c = 0.0;
      for (const auto& mem : m.members)
        c += mem.weight * LhsEnsemble::respond(mem, theta) * LhsEnsemble::equatorial_expectation(mem.state, theta);
      m.analytic_correlation.push_back(c);
    }
    const SteeringReport exact = ensemble_report(ensemble, m.n);
    m.analytic_pd = exact.z_statistics;
    m.analytic_lhs = exact.lhs;
    m.analytic_rhs = exact.rhs;
  }
  return m;
}

inline SettingTally run_setting(const SimConfig& cfg, const Model& m, int setting) {
  SettingTally t;
  Rng rng = stream_rng(cfg.seed, static_cast<std::uint64_t>(setting));
  std::uniform_real_distribution<double> uniform;
  const bool z_setting = setting == m.n;
  const double theta = z_setting ? 0.0 : m.angles[static_cast<std::size_t>(setting)];
  const Mat2 observable = z_setting ? pauli_z() : pauli_theta(theta);
  if (cfg.record_transcript) t.transcript.reserve(static_cast<std::size_t>(cfg.shots_per_setting));

  ReportRule rule = negative_sign;
  if (cfg.strategy == Strategy::honest_quantum && cfg.alice_rule == AliceRule::kernel_sign && !z_setting)
    rule = optimal_sign_strategy(correlation_kernel(m.lossy, theta));

  std::discrete_distribution<std::size_t> pick(m.weights.begin(), m.weights.end());

  for (std::int64_t shot = 0; shot < cfg.shots_per_setting; ++shot) {
    int a, b;
    if (cfg.strategy == Strategy::honest_quantum) {
      if (z_setting) {
        a = uniform(rng) < m.p_click ? 1 : -1;
        b = sample_bob_outcome(a > 0 ? m.click_state : m.no_click_state, observable, rng);
      } else {
        const HomodyneSample s = sample_homodyne_outcome(m.lossy, theta, rng);
        a = rule(s.r);
        b = sample_bob_outcome(s.bob_state, observable, rng);
      }
    } else {
      const LhsMember& mem = m.members[pick(rng)];
      a = z_setting ? mem.z_report : LhsEnsemble::respond(mem, theta);
      b = sample_bob_outcome(density_from_bloch(mem.state), observable, rng);
    }
    ++t.shots;
    if (z_setting) {
      if (a > 0) {
        ++t.plus_count;
        t.plus_sum += b;
      } else {
        ++t.minus_count;
        t.minus_sum += b;
      }
    } else {
      t.product_sum += a * b;
    }
    if (cfg.record_transcript) t.transcript.push_back({setting, a, b});
  }
  return t;
}

}  // namespace detail

inline SimResult run_experiment(const SimConfig& cfg) {
  cfg.validate();
  const detail::Model model = detail::build_model(cfg);
  const int n = model.n;

  std::vector<detail::SettingTally> tallies(static_cast<std::size_t>(n + 1));
  if (cfg.workers <= 1) {
    for (int s = 0; s <= n; ++s) tallies[static_cast<std::size_t>(s)] = detail::run_setting(cfg, model, s);
  } else {
    for (int start = 0; start <= n; start += static_cast<int>(cfg.workers)) {
      std::vector<std::future<detail::SettingTally>> jobs;
      for (int s = start; s <= n && s < start + static_cast<int>(cfg.workers); ++s)
        jobs.push_back(std::async(std::launch::async, [&cfg, &model, s] { return detail::run_setting(cfg, model, s); }));
      for (int k = 0; k < static_cast<int>(jobs.size()); ++k) tallies[static_cast<std::size_t>(start + k)] = jobs[k].get();
    }
  }

  SimResult out;
  out.config = cfg;
  double lhs_sum = 0.0, lhs_var = 0.0;
  for (int s = 0; s < n; ++s) {
    const auto& t = tallies[static_cast<std::size_t>(s)];
    SettingEstimate se;
    se.setting = s;
    se.theta = model.angles[static_cast<std::size_t>(s)];
    se.correlation = detail::pm1_mean(t.product_sum, t.shots, model.analytic_correlation[static_cast<std::size_t>(s)]);
    lhs_sum += se.correlation.value;
    lhs_var += se.correlation.std_error * se.correlation.std_error;
    out.settings.push_back(se);
  }
  out.lhs.value = lhs_sum / n;
  out.lhs.std_error = std::sqrt(lhs_var) / n;
  out.lhs.analytic = model.analytic_lhs;
  out.lhs.samples = cfg.shots_per_setting * n;
  out.lhs.defined = true;

  const auto& zt = tallies[static_cast<std::size_t>(n)];
  out.p_plus = detail::proportion(zt.plus_count, zt.shots, model.analytic_pd.p_plus);
  out.z_plus = detail::pm1_mean(zt.plus_sum, zt.plus_count, model.analytic_pd.z_plus);
  out.z_minus = detail::pm1_mean(zt.minus_sum, zt.minus_count, model.analytic_pd.z_minus);

  PhotodetectionOutcome pd_hat;
  pd_hat.p_plus = out.p_plus.value;
  pd_hat.p_minus = 1.0 - out.p_plus.value;
  pd_hat.z_plus = out.z_plus.value;
  pd_hat.z_minus = out.z_minus.value;
  pd_hat.plus_degenerate = !out.z_plus.defined;
  pd_hat.minus_degenerate = !out.z_minus.defined;

  // Delta-method error on f(n) [p sqrt(1-z+^2) + (1-p) sqrt(1-z-^2)].
  const double f = setting_bound(cfg.params.n_settings).value;
  auto radius = [](double z) { return std::sqrt(std::max(0.0, 1.0 - z * z)); };
  double rhs_var = 0.0;
  const double dp = f * (radius(pd_hat.z_plus) - radius(pd_hat.z_minus));
  rhs_var += dp * dp * out.p_plus.std_error * out.p_plus.std_error;
  for (const auto& [est, weight] : {std::pair{out.z_plus, pd_hat.p_plus}, std::pair{out.z_minus, pd_hat.p_minus}}) {
    if (!est.defined || weight == 0.0) continue;
    if (!std::isfinite(est.std_error)) {
      rhs_var = std::numeric_limits<double>::infinity();
      continue;
    }
    const double rad = radius(est.value);
    if (rad > 0.0) {
      const double dz = f * weight * std::abs(est.value) / rad;
      rhs_var += dz * dz * est.std_error * est.std_error;
    }
  }
  if (!std::isfinite(out.p_plus.std_error)) rhs_var = std::numeric_limits<double>::infinity();

  out.empirical = assemble_report(cfg.params.n_settings, out.lhs.value, pd_hat);
  out.empirical.note = std::string("empirical estimate, strategy ") + to_string(cfg.strategy);

  out.rhs.value = out.empirical.rhs;
  out.rhs.std_error = std::sqrt(rhs_var);
  out.rhs.analytic = model.analytic_rhs;
  out.rhs.samples = zt.shots;
  out.rhs.defined = true;

  out.margin.value = out.empirical.margin;
  out.margin.std_error = std::hypot(out.lhs.std_error, out.rhs.std_error);
  out.margin.analytic = model.analytic_lhs - model.analytic_rhs;
  out.margin.samples = out.lhs.samples + out.rhs.samples;
  out.margin.defined = true;

  out.error_bars_infinite = !std::isfinite(out.margin.std_error);
  out.verdict = (!out.error_bars_infinite && out.margin.value > cfg.significance * out.margin.std_error)
                    ? Verdict::violated
                    : Verdict::not_violated;

  if (cfg.record_transcript)
    for (auto& t : tallies) out.transcript.insert(out.transcript.end(), t.transcript.begin(), t.transcript.end());
  return out;
}

}  // namespace photonsteer

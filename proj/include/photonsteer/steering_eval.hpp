#pragma once

// Quantum side of the steering inequalities and the parameter-space verdicts.

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>

#include "photonsteer/measurement.hpp"
#include "photonsteer/photon_state.hpp"
#include "photonsteer/quadrature.hpp"
#include "photonsteer/steering_bounds.hpp"

namespace photonsteer {

/// Alice's dichotomic report as a function of her homodyne outcome r.
using ReportRule = std::function<int(double)>;

inline int negative_sign(double r) { return r > 0.0 ? -1 : 1; }

/// Homodyne correlation sqrt(2/pi) * eta * sqrt(eta_h) * 2 sqrt(chi (1 - chi)),
/// attained by reporting a(r) = -sign(r) at LO phase theta; the chi factor is 1
/// at an even split.
inline double quantum_correlation(double eta, double eta_h, double chi = 0.5) {
  require_probability(eta, "eta");
  require_probability(eta_h, "eta_h");
  require_probability(chi, "chi");
  return std::sqrt(2.0 / std::numbers::pi) * eta * std::sqrt(eta_h) * 2.0 * std::sqrt(chi * (1.0 - chi));
}

/// r -> Tr[rho_B^theta(r) sigma_theta], the density-weighted correlation kernel.
inline std::function<double(double)> correlation_kernel(const SplitPhotonState& w, double theta = 0.0) {
  require_loss_applied(w, "correlation_kernel");
  const Mat2 axis = pauli_theta(theta);
  return [w, theta, axis](double r) {
    return expectation(conditioned_state_homodyne(w, theta, r).unnormalized, axis);
  };
}

/// Integral over r of a(r) Tr[rho_B^theta(r) sigma_theta] by quadrature.
inline double homodyne_correlation(const SplitPhotonState& w, double theta, const ReportRule& rule) {
  const auto kernel = correlation_kernel(w, theta);
  return integrate_real_line([&](double r) { return rule(r) * kernel(r); });
}

/// Pointwise maximizer of the integral of a(r) k(r) over dichotomic a:
/// a(r) = sign k(r), with +1 where the kernel vanishes.
inline ReportRule optimal_sign_strategy(std::function<double(double)> kernel) {
  return [k = std::move(kernel)](double r) { return k(r) >= 0.0 ? 1 : -1; };
}

/// f(n) [p_+ sqrt(1 - z_+^2) + p_- sqrt(1 - z_-^2)]: right-hand side of the
/// nonlinear n-setting inequality.
inline double nonlinear_rhs(SettingCount n, const PhotodetectionOutcome& pd) {
  return setting_bound(n).value * ring_radius_term(pd);
}

// ---------------------------------------------------------------------------
// Parameter-space conditions

struct ConditionResult {
  double lhs_value{0.0};
  bool satisfied{false};

  friend bool operator==(const ConditionResult&, const ConditionResult&) = default;
};

/// eta [chi + (1 - chi)(eta_p + (2/pi) eta_h / f(n)^2)] > 1 guarantees that the
/// n-setting nonlinear inequality is violated.
inline ConditionResult sufficient_condition(const ExperimentParams& p) {
  p.validate();
  const double f = setting_bound(p.n_settings).value;
  const double value =
      p.eta * (p.chi + (1.0 - p.chi) * (p.eta_p + (2.0 / std::numbers::pi) * p.eta_h / (f * f)));
  return {value, value > 1.0};
}

struct NecessaryResult {
  double lhs_value{0.0};
  bool possible{false};
  // Weaker budget check on Alice's own share of the light: eta_p + 2 eta_h > 1.
  double budget_value{0.0};
  bool budget_possible{false};

  friend bool operator==(const NecessaryResult&, const NecessaryResult&) = default;
};

/// eta [chi + (1 - chi)(eta_p + 2 eta_h)] > 1 is required for any steering
/// demonstration with these detectors, whatever inequality is tested.
inline NecessaryResult necessary_condition(const ExperimentParams& p) {
  p.validate();
  NecessaryResult out;
  out.lhs_value = p.eta * (p.chi + (1.0 - p.chi) * (p.eta_p + 2.0 * p.eta_h));
  out.possible = out.lhs_value > 1.0;
  out.budget_value = p.eta_p + 2.0 * p.eta_h;
  out.budget_possible = out.budget_value > 1.0;
  return out;
}

/// Minimum eta satisfying the sufficient condition; +inf if none does.
inline double eta_threshold(double chi, double eta_h, double eta_p, SettingCount n) {
  require_probability(chi, "chi");
  require_probability(eta_h, "eta_h");
  require_probability(eta_p, "eta_p");
  const double f = setting_bound(n).value;
  const double bracket = chi + (1.0 - chi) * (eta_p + (2.0 / std::numbers::pi) * eta_h / (f * f));
  if (bracket <= 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / bracket;
}

/// Even split, continuum of settings: eta > 4 / (2 + pi eta_h + 2 eta_p).
inline double even_split_threshold(double eta_h, double eta_p) {
  require_probability(eta_h, "eta_h");
  require_probability(eta_p, "eta_p");
  return 4.0 / (2.0 + std::numbers::pi * eta_h + 2.0 * eta_p);
}

// ---------------------------------------------------------------------------
// Inequality evaluation

enum class Verdict { not_violated, violated };

inline const char* to_string(Verdict v) { return v == Verdict::violated ? "violated" : "not_violated"; }

struct SteeringReport {
  SettingCount n{8};
  double lhs{0.0};  // (1/n) sum_i <A_i sigma_theta_i>
  double rhs{0.0};  // f(n) [p_+ sqrt(1-z_+^2) + p_- sqrt(1-z_-^2)]
  double margin{0.0};
  Verdict verdict{Verdict::not_violated};
  // Same inequality in the continuum-of-settings limit.
  double rhs_infinite{0.0};
  double margin_infinite{0.0};
  PhotodetectionOutcome z_statistics;
  ConditionResult sufficient;
  NecessaryResult necessary;
  bool shares_entanglement{true};
  std::string note;

  friend bool operator==(const SteeringReport&, const SteeringReport&) = default;
};

inline SteeringReport assemble_report(SettingCount n, double lhs, const PhotodetectionOutcome& pd) {
  SteeringReport r;
  r.n = n;
  r.lhs = lhs;
  r.z_statistics = pd;
  r.rhs = nonlinear_rhs(n, pd);
  r.margin = lhs - r.rhs;
  r.verdict = r.margin > 0.0 ? Verdict::violated : Verdict::not_violated;
  r.rhs_infinite = nonlinear_rhs(SettingCount::infinite(), pd);
  r.margin_infinite = lhs - r.rhs_infinite;
  return r;
}

/// Predicted quantum LHS against the n-setting nonlinear bound, with Alice
/// using homodyne detection on equatorial settings and photon counting on sigma_z.
inline SteeringReport evaluate_inequality(const ExperimentParams& p) {
  p.validate();
  const SplitPhotonState ideal = make_state(p.eta, p.chi);
  const PhotodetectionOutcome pd = photodetect(ideal, p.eta_p);
  SteeringReport r = assemble_report(p.n_settings, quantum_correlation(p.eta, p.eta_h, p.chi), pd);
  r.sufficient = sufficient_condition(p);
  r.necessary = necessary_condition(p);
  if (ideal.is_product_split()) {
    r.shares_entanglement = false;
    r.verdict = Verdict::not_violated;
    r.note = "chi is 0 or 1: the photon is not shared, so no entanglement is available";
  }
  return r;
}

/// Exact statistics an LHS ensemble produces, checked against its own bound.
inline SteeringReport ensemble_report(const LhsEnsemble& ensemble, int n) {
  Mat2 plus, minus;
  for (const auto& m : ensemble.members()) {
    const Mat2 rho = m.weight * density_from_bloch(m.state);
    (m.z_report > 0 ? plus : minus) += rho;
  }
  const PhotodetectionOutcome pd = outcome_from_branches(plus, minus);
  return assemble_report(n, ensemble_equatorial_correlation(ensemble, n), pd);
}

}  // namespace photonsteer

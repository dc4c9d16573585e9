#pragma once

// Alice's measurements: strong-LO homodyne detection and inefficient photon
// counting, and the states they prepare on Bob's side.

#include <cmath>
#include <numbers>

#include "photonsteer/errors.hpp"
#include "photonsteer/linalg.hpp"
#include "photonsteer/photon_state.hpp"

namespace photonsteer {

/// Standard normal density.
inline double gaussian_density(double r) {
  return std::exp(-0.5 * r * r) / std::sqrt(2.0 * std::numbers::pi);
}

/// Homodyne POVM element at LO phase theta and outcome r, for at most one photon:
/// G(r) (|0><0| + r sigma_theta + r^2 |1><1|).
inline Mat2 homodyne_effect(double theta, double r) {
  const double g = gaussian_density(r);
  Mat2 f = r * pauli_theta(theta);
  f(0, 0) = 1.0;
  f(1, 1) = r * r;
  return g * f;
}

struct ConditionedState {
  Mat2 unnormalized;  // Tr_A[F(r) W]
  double density{0.0};  // its trace: Alice's outcome density at r

  Mat2 normalized() const { return (1.0 / density) * unnormalized; }
};

inline void require_loss_applied(const SplitPhotonState& w, const char* who) {
  if (!w.loss_applied())
    throw state_error(std::string(who) + ": homodyne path needs the state with Alice's loss applied");
}

inline ConditionedState conditioned_state_homodyne(const SplitPhotonState& w, double theta, double r) {
  require_loss_applied(w, "conditioned_state_homodyne");
  ConditionedState out;
  out.unnormalized = apply_effect_A(w.matrix(), homodyne_effect(theta, r));
  out.density = trace(out.unnormalized).real();
  return out;
}

/// Alice's homodyne outcome density is w0 G(r) + w1 r^2 G(r), with w1 her
/// one-photon population. Independent of the LO phase for this state family.
struct HomodyneMixture {
  double w0{1.0};
  double w1{0.0};

  double density(double r) const { return (w0 + w1 * r * r) * gaussian_density(r); }
};

inline HomodyneMixture homodyne_marginal_density(const SplitPhotonState& w, double /*theta*/) {
  require_loss_applied(w, "homodyne_marginal_density");
  const Mat2 alice = partial_trace_B(w.matrix());
  const double w1 = alice(1, 1).real();
  return {1.0 - w1, w1};
}

// ---------------------------------------------------------------------------
// Photodetection

/// Click statistics and Bob's conditional <sigma_z> per outcome.
/// An outcome with zero probability has an undefined conditional state; it
/// is flagged and its z is set to 0.
struct PhotodetectionOutcome {
  double p_plus{0.0};
  double p_minus{1.0};
  double z_plus{0.0};
  double z_minus{0.0};
  bool plus_degenerate{false};
  bool minus_degenerate{false};

  friend bool operator==(const PhotodetectionOutcome&, const PhotodetectionOutcome&) = default;
};

inline constexpr double kDegenerateProbability = 1e-15;

inline PhotodetectionOutcome outcome_from_branches(const Mat2& plus, const Mat2& minus) {
  PhotodetectionOutcome o;
  o.p_plus = trace(plus).real();
  o.p_minus = trace(minus).real();
  o.plus_degenerate = o.p_plus <= kDegenerateProbability;
  o.minus_degenerate = o.p_minus <= kDegenerateProbability;
  o.z_plus = o.plus_degenerate ? 0.0 : expectation(plus, pauli_z()) / o.p_plus;
  o.z_minus = o.minus_degenerate ? 0.0 : expectation(minus, pauli_z()) / o.p_minus;
  return o;
}

/// Click (+) / no click (-) with effects F+ = eta_p |1><1|, F- = 1 - F+.
/// Acts on the loss-free state; detector inefficiency lives in the effect.
inline PhotodetectionOutcome photodetect(const SplitPhotonState& w, double eta_p) {
  require_probability(eta_p, "eta_p");
  if (w.loss_applied())
    throw state_error("photodetect: photodetection acts on the state without homodyne loss");
  Mat2 click;
  click(1, 1) = eta_p;
  const Mat2 no_click = Mat2::identity() - click;
  return outcome_from_branches(apply_effect_A(w.matrix(), click), apply_effect_A(w.matrix(), no_click));
}

/// Alice always announces +1 on the z setting: one branch holding Bob's
/// unconditioned state.
inline PhotodetectionOutcome trivial_z_outcome(const SplitPhotonState& w) {
  return outcome_from_branches(partial_trace_A(w.matrix()), Mat2{});
}

}  // namespace photonsteer

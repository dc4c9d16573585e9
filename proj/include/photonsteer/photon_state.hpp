#pragma once

// The split-single-photon state family and Alice-side loss.
//
// A photon prepared with efficiency eta hits a beam splitter that sends it to
// Bob with probability chi:
//
//   W = (1 - eta)|00><00| + eta |psi><psi|,  |psi> = sqrt(chi)|0,1> - sqrt(1-chi)|1,0>
//
// The relative minus sign is load-bearing: Alice's optimal homodyne report
// a(r) = -sign(r) depends on it.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

#include "photonsteer/errors.hpp"
#include "photonsteer/linalg.hpp"

namespace photonsteer {

/// Number of equatorial measurement settings, or the continuum limit.
class SettingCount {
 public:
  constexpr SettingCount(int n) : n_(n) {}  // NOLINT(google-explicit-constructor)
  static constexpr SettingCount infinite() { return SettingCount(); }

  constexpr bool is_infinite() const { return !n_.has_value(); }
  int value() const {
    if (!n_) throw std::logic_error("SettingCount: infinite count has no integer value");
    return *n_;
  }
  std::string to_string() const { return n_ ? std::to_string(*n_) : std::string("inf"); }

  friend constexpr bool operator==(const SettingCount&, const SettingCount&) = default;

 private:
  constexpr SettingCount() = default;
  std::optional<int> n_;
};

struct ExperimentParams {
  double eta{1.0};    // single-photon preparation efficiency
  double chi{0.5};    // fraction of the photon sent to Bob
  double eta_h{1.0};  // Alice's homodyne efficiency
  double eta_p{0.0};  // Alice's photodetector efficiency
  SettingCount n_settings{8};
  std::string label;

  void validate() const {
    require_probability(eta, "eta");
    require_probability(chi, "chi");
    require_probability(eta_h, "eta_h");
    require_probability(eta_p, "eta_p");
    if (!n_settings.is_infinite() && n_settings.value() < 1)
      throw std::domain_error("n_settings must be >= 1");
  }

  friend bool operator==(const ExperimentParams&, const ExperimentParams&) = default;
};

class SplitPhotonState {
 public:
  double eta() const { return eta_; }
  double chi() const { return chi_; }
  /// Homodyne efficiency folded in by apply_alice_loss; 1 before loss.
  double eta_h() const { return eta_h_; }
  bool loss_applied() const { return loss_applied_; }
  const Mat4& matrix() const { return w_; }

  /// chi in {0, 1}: the photon goes wholly to one side and nothing is shared.
  bool is_product_split() const { return chi_ <= 0.0 || chi_ >= 1.0; }

 private:
  SplitPhotonState(double eta, double chi, double eta_h, bool loss, const Mat4& w)
      : eta_(eta), chi_(chi), eta_h_(eta_h), loss_applied_(loss), w_(w) {}

  friend SplitPhotonState make_state(double eta, double chi);
  friend SplitPhotonState apply_alice_loss(const SplitPhotonState& w, double eta_h);

  double eta_;
  double chi_;
  double eta_h_;
  bool loss_applied_;
  Mat4 w_;
};

inline SplitPhotonState make_state(double eta, double chi) {
  require_probability(eta, "eta");
  require_probability(chi, "chi");

  const std::size_t i00 = pair_index(0, 0), i01 = pair_index(0, 1), i10 = pair_index(1, 0);
  const double to_bob = std::sqrt(chi);
  const double to_alice = -std::sqrt(1.0 - chi);

  Mat4 w;
  w(i00, i00) = 1.0 - eta;
  w(i01, i01) = eta * chi;
  w(i10, i10) = eta * (1.0 - chi);
  w(i01, i10) = eta * to_bob * to_alice;
  w(i10, i01) = eta * to_alice * to_bob;
  return SplitPhotonState(eta, chi, 1.0, false, w);
}

/// Alice's mode passes a beam splitter of transmission eta_h before detection.
inline SplitPhotonState apply_alice_loss(const SplitPhotonState& state, double eta_h) {
  require_probability(eta_h, "eta_h");
  if (state.loss_applied()) throw state_error("apply_alice_loss: loss already applied to this state");

  // Kraus pair on Alice's mode: lose = sqrt(1-eta_h)|0><1|, keep = |0><0| + sqrt(eta_h)|1><1|.
  Mat2 lose;
  lose(0, 1) = std::sqrt(1.0 - eta_h);
  Mat2 keep;
  keep(0, 0) = 1.0;
  keep(1, 1) = std::sqrt(eta_h);

  const Mat4 k_lose = kron(lose, Mat2::identity());
  const Mat4 k_keep = kron(keep, Mat2::identity());
  const Mat4& w = state.matrix();
  const Mat4 out = symmetrize(k_lose * w * adjoint(k_lose) + k_keep * w * adjoint(k_keep));
  return SplitPhotonState(state.eta(), state.chi(), eta_h, true, out);
}

/// Concurrence 2 * eta * sqrt(chi (1 - chi)), reduced by sqrt(eta_h) once loss
/// is applied (the state keeps its X form, so C = 2|<01|W|10>|).
inline double concurrence(const SplitPhotonState& state) {
  const double base = 2.0 * state.eta() * std::sqrt(state.chi() * (1.0 - state.chi()));
  return state.loss_applied() ? std::sqrt(state.eta_h()) * base : base;
}

/// eta above which the transverse (xx, yy) correlations alone violate CHSH:
/// 1 / (2 sqrt(2 chi (1 - chi))). This branch decides near an even split.
inline double chsh_threshold_transverse(double chi) {
  require_probability(chi, "chi");
  if (chi <= 0.0 || chi >= 1.0) return std::numeric_limits<double>::infinity();
  return 1.0 / (2.0 * std::sqrt(2.0 * chi * (1.0 - chi)));
}

/// eta above which one transverse correlation plus the zz correlation
/// (1 - 2 eta) violate CHSH: 1 / (1 + chi (1 - chi)). This branch decides once
/// chi (1 - chi) < 3 - 2 sqrt(2), i.e. for strongly uneven splits.
inline double chsh_threshold_longitudinal(double chi) {
  require_probability(chi, "chi");
  if (chi <= 0.0 || chi >= 1.0) return std::numeric_limits<double>::infinity();
  return 1.0 / (1.0 + chi * (1.0 - chi));
}

/// Minimum eta for which some CHSH inequality can be violated (the Horodecki
/// M(rho) = 1 crossing); +inf when chi is 0 or 1. Values >= 1 mean no
/// physical eta suffices.
inline double chsh_threshold(double chi) {
  return std::min(chsh_threshold_transverse(chi), chsh_threshold_longitudinal(chi));
}

inline bool chsh_possible(double eta, double chi) {
  require_probability(eta, "eta");
  return eta > chsh_threshold(chi);
}

}  // namespace photonsteer

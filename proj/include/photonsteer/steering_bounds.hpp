#pragma once

// Local-hidden-state side of the steering inequalities: the equatorial bounds
// for n settings and the continuum, plus explicit LHS ensembles that attain them.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "photonsteer/errors.hpp"
#include "photonsteer/linalg.hpp"
#include "photonsteer/measurement.hpp"
#include "photonsteer/photon_state.hpp"

namespace photonsteer {

inline constexpr int kMaxBruteforceSettings = 20;

/// Bound for a continuum of equatorial settings: 2/pi.
constexpr double plane_bound() { return 2.0 / std::numbers::pi; }

struct BoundValue {
  SettingCount n;
  double value;
};

/// Largest eigenvalue of (1/n) sum_i alpha_i sigma_{theta_i}, maximized over
/// signs, for n settings spaced by pi/n. Closed form; 2/pi at the infinite marker.
inline BoundValue setting_bound(SettingCount n) {
  if (n.is_infinite()) return {n, plane_bound()};
  const int k = n.value();
  if (k < 1) throw std::domain_error("setting_bound: n must be >= 1, got " + std::to_string(k));
  const double nd = static_cast<double>(k);
  double sum = 0.0;
  for (int j = 1; j <= k / 2; ++j) sum += std::sin((2.0 * j - 1.0) * std::numbers::pi / (2.0 * nd));
  // |sin(n pi / 2)| is 1 for odd n and 0 for even n.
  const double odd_term = (k % 2 == 1) ? 1.0 : 0.0;
  return {n, (odd_term + 2.0 * sum) / nd};
}

/// Measurement angles theta_i = i pi / n, i = 0..n-1.
inline std::vector<double> setting_angles(int n) {
  if (n < 1) throw std::domain_error("setting_angles: n must be >= 1");
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = i * std::numbers::pi / n;
  return out;
}

/// Exhaustive maximum of lambda_max over all 2^n sign patterns. Reference
/// route for setting_bound. The first sign is pinned to +1: S is traceless, so
/// -S has the same largest eigenvalue.
inline double setting_bound_bruteforce(int n) {
  if (n < 1) throw std::domain_error("setting_bound_bruteforce: n must be >= 1");
  if (n > kMaxBruteforceSettings)
    throw resource_error("setting_bound_bruteforce: n = " + std::to_string(n) + " exceeds the enumeration limit of " +
                         std::to_string(kMaxBruteforceSettings));
  std::vector<Mat2> axes;
  for (double t : setting_angles(n)) axes.push_back((1.0 / n) * pauli_theta(t));

  const std::uint32_t patterns = 1u << (n - 1);
  double best = 0.0;
  for (std::uint32_t mask = 0; mask < patterns; ++mask) {
    Mat2 s = axes[0];
    for (int i = 1; i < n; ++i) {
      if (mask & (1u << (i - 1)))
        s -= axes[static_cast<std::size_t>(i)];
      else
        s += axes[static_cast<std::size_t>(i)];
    }
    best = std::max(best, eig_max_hermitian2(s));
  }
  return best;
}

// ---------------------------------------------------------------------------
// LHS ensembles

struct LhsMember {
  BlochVector state;  // pure: unit length
  double weight;
  int z_report;  // Alice's announcement when Bob measures sigma_z
};

/// Ensemble of pure states for Bob with Alice's response rules. For an
/// equatorial axis theta Alice reports the sign of <sigma_theta> in the state
/// she sent; an exactly orthogonal state is reported as +1.
class LhsEnsemble {
 public:
  explicit LhsEnsemble(std::vector<LhsMember> members) : members_(std::move(members)) {
    double total = 0.0;
    for (const auto& m : members_) {
      if (m.weight < 0.0) throw std::invalid_argument("LhsEnsemble: negative weight");
      if (std::abs(m.state.norm() - 1.0) > 1e-12) throw std::invalid_argument("LhsEnsemble: member state is not pure");
      if (m.z_report != 1 && m.z_report != -1) throw std::invalid_argument("LhsEnsemble: z report must be +1 or -1");
      total += m.weight;
    }
    if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("LhsEnsemble: weights must sum to 1");
  }

  const std::vector<LhsMember>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }

  static double equatorial_expectation(const BlochVector& v, double theta) {
    return std::cos(theta) * v.x + std::sin(theta) * v.y;
  }
  static int respond(const LhsMember& m, double theta) {
    return equatorial_expectation(m.state, theta) >= 0.0 ? 1 : -1;
  }

 private:
  std::vector<LhsMember> members_;
};

/// Ring placement that attains the bound: states on the measurement axes for
/// odd n, midway between them for even n. 2n states, spacing pi/n.
inline std::vector<double> ring_angles(int n) {
  if (n < 1) throw std::domain_error("ring_angles: n must be >= 1");
  const double offset = (n % 2 == 0) ? 0.5 : 0.0;
  std::vector<double> out(2 * static_cast<std::size_t>(n));
  for (int j = 0; j < 2 * n; ++j) out[static_cast<std::size_t>(j)] = (j + offset) * std::numbers::pi / n;
  return out;
}

inline void append_ring(std::vector<LhsMember>& out, std::span<const double> angles, double z, double ring_weight,
                        int z_report) {
  const double radius = std::sqrt(std::max(0.0, 1.0 - z * z));
  const double w = ring_weight / static_cast<double>(angles.size());
  for (double phi : angles) {
    BlochVector v{radius * std::cos(phi), radius * std::sin(phi), z};
    // keep exactly unit length after rounding
    const double norm = v.norm();
    v = {v.x / norm, v.y / norm, v.z / norm};
    out.push_back({v, w, z_report});
  }
}

/// Equatorial ring of 2n states; Alice always announces +1 on sigma_z.
inline LhsEnsemble equatorial_ensemble(int n) {
  std::vector<LhsMember> members;
  const auto angles = ring_angles(n);
  append_ring(members, angles, 0.0, 1.0, 1);
  return LhsEnsemble(std::move(members));
}

/// Two latitude rings at z_+ and z_- weighted p_+ and p_-; Alice announces the
/// ring label on sigma_z, reproducing the photodetection statistics exactly.
inline LhsEnsemble two_ring_ensemble(int n, const PhotodetectionOutcome& pd) {
  std::vector<LhsMember> members;
  const auto angles = ring_angles(n);
  append_ring(members, angles, pd.z_plus, pd.p_plus, 1);
  append_ring(members, angles, pd.z_minus, pd.p_minus, -1);
  return LhsEnsemble(std::move(members));
}

/// (1/n) sum_i <A_i sigma_{theta_i}> produced by the ensemble under its rule.
inline double ensemble_equatorial_correlation(const LhsEnsemble& ensemble, int n) {
  const auto angles = setting_angles(n);
  double total = 0.0;
  for (double theta : angles) {
    double c = 0.0;
    for (const auto& m : ensemble.members())
      c += m.weight * LhsEnsemble::respond(m, theta) * LhsEnsemble::equatorial_expectation(m.state, theta);
    total += c;
  }
  return total / n;
}

/// Correlation the equatorial ensemble simulates; the continuum ring is
/// evaluated analytically.
inline double equatorial_lhs_correlation(SettingCount n) {
  if (n.is_infinite()) return plane_bound();
  return ensemble_equatorial_correlation(equatorial_ensemble(n.value()), n.value());
}

/// p_+ sqrt(1 - z_+^2) + p_- sqrt(1 - z_-^2): the ring-radius weight that
/// scales every equatorial bound once sigma_z statistics are fixed.
inline double ring_radius_term(const PhotodetectionOutcome& pd) {
  auto radius = [](double z) { return std::sqrt(std::max(0.0, 1.0 - z * z)); };
  return pd.p_plus * radius(pd.z_plus) + pd.p_minus * radius(pd.z_minus);
}

/// Correlation the optimal two-ring LHS model attains.
inline double two_ring_lhs_value(SettingCount n, const PhotodetectionOutcome& pd) {
  return setting_bound(n).value * ring_radius_term(pd);
}

// ---------------------------------------------------------------------------
// Continuous-angle functional with a piecewise-constant report

/// (1/pi) * integral over [-pi/2, pi/2] of a(theta) <sigma_theta>, where a is
/// constant on each of signs.size() equal cells. Each cell integral is exact.
inline double plane_functional(const BlochVector& v, std::span<const int> signs) {
  if (signs.empty()) throw std::invalid_argument("plane_functional: need at least one cell");
  const double width = std::numbers::pi / static_cast<double>(signs.size());
  double total = 0.0;
  for (std::size_t k = 0; k < signs.size(); ++k) {
    const double t0 = -0.5 * std::numbers::pi + width * static_cast<double>(k);
    const double t1 = t0 + width;
    const double cell = v.x * (std::sin(t1) - std::sin(t0)) - v.y * (std::cos(t1) - std::cos(t0));
    total += signs[k] * cell;
  }
  return total / std::numbers::pi;
}

/// (2/pi) sqrt(1 - <sigma_z>^2): the sigma_z-dependent ceiling of plane_functional.
inline double plane_functional_ceiling(const BlochVector& v) {
  return plane_bound() * std::sqrt(std::max(0.0, 1.0 - v.z * v.z));
}

}  // namespace photonsteer

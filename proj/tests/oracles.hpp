#pragma once

// Independent reference computations for the tests. Everything here is built
// from scratch on Eigen and Boost quadrature and shares no code with the
// library under test.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace oracle {

using cd = std::complex<double>;
using M2 = Eigen::Matrix2cd;
using M4 = Eigen::Matrix4cd;

inline M2 sx() {
  M2 m;
  m << 0, 1, 1, 0;
  return m;
}
inline M2 sy() {
  M2 m;
  m << 0, cd(0, -1), cd(0, 1), 0;
  return m;
}
inline M2 sz() {
  M2 m;
  m << 1, 0, 0, -1;
  return m;
}
/// Equatorial axis in the photon-number basis, where |1> is "up": the
/// off-diagonal <0|s|1> carries e^{+it}.
inline M2 s_theta(double t) {
  M2 m;
  m << 0, std::polar(1.0, t), std::polar(1.0, -t), 0;
  return m;
}

inline M4 kron(const M2& a, const M2& b) {
  M4 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

/// (1-eta)|00><00| + eta |psi><psi|, psi = sqrt(chi)|01> - sqrt(1-chi)|10>,
/// basis index 2a + b with Alice first.
inline M4 split_photon(double eta, double chi) {
  Eigen::Vector4cd vac = Eigen::Vector4cd::Zero();
  vac(0) = 1.0;
  Eigen::Vector4cd psi = Eigen::Vector4cd::Zero();
  psi(1) = std::sqrt(chi);
  psi(2) = -std::sqrt(1.0 - chi);
  return (1.0 - eta) * vac * vac.adjoint() + eta * psi * psi.adjoint();
}

/// Amplitude damping with transmission t on Alice's mode.
inline M4 damp_alice(const M4& w, double t) {
  M2 k0, k1;
  k0 << 1, 0, 0, std::sqrt(t);
  k1 << 0, std::sqrt(1.0 - t), 0, 0;
  const M4 a = kron(k0, M2::Identity()), b = kron(k1, M2::Identity());
  return a * w * a.adjoint() + b * w * b.adjoint();
}

/// Tr_A[(F (x) 1) W] by explicit summation.
inline M2 bob_given_effect(const M4& w, const M2& f) {
  const M4 fw = kron(f, M2::Identity()) * w;
  M2 out = M2::Zero();
  for (int a = 0; a < 2; ++a) out += fw.block<2, 2>(2 * a, 2 * a);
  return out;
}

inline M2 alice_reduced(const M4& w) {
  M2 out;
  for (int a = 0; a < 2; ++a)
    for (int ap = 0; ap < 2; ++ap) out(a, ap) = w(2 * a, 2 * ap) + w(2 * a + 1, 2 * ap + 1);
  return out;
}

inline double normal_pdf(double r) { return std::exp(-0.5 * r * r) / std::sqrt(2.0 * std::numbers::pi); }

/// Homodyne effect for the {vacuum, one photon} subspace from the overlaps of
/// the quadrature eigenstate with the Fock states, psi0 = G^(1/2) and
/// psi1 = r G^(1/2) e^{i theta}: F = |phi><phi| with phi = (psi0, psi1)^*.
inline M2 homodyne_effect(double theta, double r) {
  const double g = normal_pdf(r);
  Eigen::Vector2cd phi;
  phi << std::sqrt(g), r * std::sqrt(g) * std::polar(1.0, -theta);
  return phi * phi.adjoint();
}

// ---------------------------------------------------------------------------
// Quadrature

inline double integrate(const std::function<double(double)>& f, double a, double b) {
  double err = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-14, &err);
}

/// Integral over the real line, split at the origin where sign rules jump.
inline double integrate_line(const std::function<double(double)>& f) {
  const double inf = std::numeric_limits<double>::infinity();
  return integrate(f, -inf, 0.0) + integrate(f, 0.0, inf);
}

/// Integral of a(r) Tr[rho_B(r) sigma_theta] for the lossy state.
inline double homodyne_correlation(double eta, double chi, double eta_h, double theta,
                                   const std::function<int(double)>& rule) {
  const M4 w = damp_alice(split_photon(eta, chi), eta_h);
  const M2 axis = s_theta(theta);
  return integrate_line(
      [&](double r) { return rule(r) * (bob_given_effect(w, homodyne_effect(theta, r)) * axis).trace().real(); });
}

// ---------------------------------------------------------------------------
// Entanglement

/// Square root of a density matrix; eigenvalues at roundoff level are treated as zero.
inline M4 psd_sqrt(const M4& rho) {
  Eigen::SelfAdjointEigenSolver<M4> es(rho);
  Eigen::Vector4d d = es.eigenvalues();
  for (int i = 0; i < 4; ++i) d(i) = d(i) < 1e-14 ? 0.0 : std::sqrt(d(i));
  return es.eigenvectors() * d.cast<cd>().asDiagonal() * es.eigenvectors().adjoint();
}

/// Wootters concurrence. The lambdas are the singular values of
/// sqrt(rho) sqrt(rho~), which avoids square roots of roundoff-level eigenvalues.
inline double wootters_concurrence(const M4& rho) {
  const M4 yy = kron(sy(), sy());
  const M4 s = psd_sqrt(rho);
  const M4 s_flipped = yy * s.conjugate() * yy;
  Eigen::JacobiSVD<M4> svd(s * s_flipped);
  const auto& lam = svd.singularValues();  // descending
  return std::max(0.0, lam(0) - lam(1) - lam(2) - lam(3));
}

/// Horodecki M(rho): sum of the two largest eigenvalues of T^T T, with
/// T_ij = Tr[rho sigma_i (x) sigma_j]. CHSH can be violated iff M > 1.
inline double horodecki_m(const M4& rho) {
  const M2 s[3] = {sx(), sy(), sz()};
  Eigen::Matrix3d t;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) t(i, j) = (rho * kron(s[i], s[j])).trace().real();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(t.transpose() * t);
  const auto& ev = es.eigenvalues();  // ascending
  return ev(1) + ev(2);
}

/// Smallest eta in [0,1] with M > 1, by bisection; +inf when even eta = 1 fails.
inline double chsh_threshold_bisect(double chi) {
  auto m = [chi](double eta) { return horodecki_m(split_photon(eta, chi)); };
  if (m(1.0) <= 1.0) return std::numeric_limits<double>::infinity();
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    (m(mid) > 1.0 ? hi : lo) = mid;
  }
  return hi;
}

// ---------------------------------------------------------------------------
// Equatorial bound

/// Exhaustive sign search over all 2^n patterns with a general Hermitian eigensolver.
inline double setting_bound_enumerated(int n) {
  double best = 0.0;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    M2 s = M2::Zero();
    for (int i = 0; i < n; ++i) s += ((mask >> i) & 1u ? -1.0 : 1.0) * s_theta(i * std::numbers::pi / n);
    Eigen::SelfAdjointEigenSolver<M2> es(s / static_cast<double>(n));
    best = std::max(best, es.eigenvalues()(1));
  }
  return best;
}

}  // namespace oracle

#pragma once

// Small fixed-size complex matrices for one and two qubits.
//
// Two-qubit operators act on Alice (x) Bob. The basis ket |a,b> (a = Alice's
// photon number, b = Bob's) sits at index 2*a + b.
//
// Pauli conventions follow the photon-number picture: sigma_z = |1><1| - |0><0|,
// sigma_x = |0><1| + |1><0|, and sigma_y is fixed by sigma_x sigma_y = i sigma_z.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <utility>

#include "photonsteer/errors.hpp"

namespace photonsteer {

using cplx = std::complex<double>;

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kEffectTol = 1e-10;

template <std::size_t N>
struct Matrix {
  std::array<cplx, N * N> m{};

  constexpr cplx& operator()(std::size_t r, std::size_t c) { return m[r * N + c]; }
  constexpr const cplx& operator()(std::size_t r, std::size_t c) const { return m[r * N + c]; }

  static constexpr std::size_t dim() { return N; }

  static constexpr Matrix identity() {
    Matrix out;
    for (std::size_t i = 0; i < N; ++i) out(i, i) = 1.0;
    return out;
  }

  // |i><j|
  static constexpr Matrix unit(std::size_t i, std::size_t j) {
    Matrix out;
    out(i, j) = 1.0;
    return out;
  }

  Matrix& operator+=(const Matrix& o) {
    for (std::size_t i = 0; i < N * N; ++i) m[i] += o.m[i];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    for (std::size_t i = 0; i < N * N; ++i) m[i] -= o.m[i];
    return *this;
  }
  Matrix& operator*=(cplx s) {
    for (auto& x : m) x *= s;
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, cplx s) { return a *= s; }
  friend Matrix operator*(cplx s, Matrix a) { return a *= s; }
  friend Matrix operator*(double s, Matrix a) { return a *= cplx(s); }
  friend Matrix operator*(Matrix a, double s) { return a *= cplx(s); }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    Matrix out;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t k = 0; k < N; ++k) {
        const cplx aik = a(i, k);
        if (aik == cplx{}) continue;
        for (std::size_t j = 0; j < N; ++j) out(i, j) += aik * b(k, j);
      }
    return out;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;
};

using Mat2 = Matrix<2>;
using Mat4 = Matrix<4>;

constexpr std::size_t pair_index(std::size_t alice, std::size_t bob) { return 2 * alice + bob; }

template <std::size_t N>
Matrix<N> adjoint(const Matrix<N>& a) {
  Matrix<N> out;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) out(i, j) = std::conj(a(j, i));
  return out;
}

template <std::size_t N>
cplx trace(const Matrix<N>& a) {
  cplx t{};
  for (std::size_t i = 0; i < N; ++i) t += a(i, i);
  return t;
}

template <std::size_t N>
double max_abs_diff(const Matrix<N>& a, const Matrix<N>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < N * N; ++i) d = std::max(d, std::abs(a.m[i] - b.m[i]));
  return d;
}

template <std::size_t N>
bool is_hermitian(const Matrix<N>& a, double tol = kHermitianTol) {
  return max_abs_diff(a, adjoint(a)) <= tol;
}

// Hermitian part (A + A^dagger)/2; removes accumulated round-off asymmetry.
template <std::size_t N>
Matrix<N> symmetrize(const Matrix<N>& a) {
  return 0.5 * (a + adjoint(a));
}

// Re Tr[rho * op]
template <std::size_t N>
double expectation(const Matrix<N>& rho, const Matrix<N>& op) {
  cplx t{};
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t k = 0; k < N; ++k) t += rho(i, k) * op(k, i);
  return t.real();
}

inline Mat4 kron(const Mat2& a, const Mat2& b) {
  Mat4 out;
  for (std::size_t a1 = 0; a1 < 2; ++a1)
    for (std::size_t b1 = 0; b1 < 2; ++b1)
      for (std::size_t a2 = 0; a2 < 2; ++a2)
        for (std::size_t b2 = 0; b2 < 2; ++b2)
          out(pair_index(a1, b1), pair_index(a2, b2)) = a(a1, a2) * b(b1, b2);
  return out;
}

// ---------------------------------------------------------------------------
// Pauli operators

inline Mat2 pauli_x() {
  Mat2 s;
  s(0, 1) = 1.0;
  s(1, 0) = 1.0;
  return s;
}

inline Mat2 pauli_y() {
  Mat2 s;
  s(0, 1) = cplx(0.0, 1.0);
  s(1, 0) = cplx(0.0, -1.0);
  return s;
}

inline Mat2 pauli_z() {
  Mat2 s;
  s(0, 0) = -1.0;
  s(1, 1) = 1.0;
  return s;
}

/// Equatorial observable cos(theta) sigma_x + sin(theta) sigma_y.
inline Mat2 pauli_theta(double theta) {
  const cplx phase = std::polar(1.0, theta);
  Mat2 s;
  s(0, 1) = phase;
  s(1, 0) = std::conj(phase);
  return s;
}

// ---------------------------------------------------------------------------
// Bloch representation

struct BlochVector {
  double x{0.0}, y{0.0}, z{0.0};

  double norm() const { return std::sqrt(x * x + y * y + z * z); }
  double equatorial_radius() const { return std::hypot(x, y); }
  friend bool operator==(const BlochVector&, const BlochVector&) = default;
};

inline BlochVector bloch_vector(const Mat2& rho) {
  return {expectation(rho, pauli_x()), expectation(rho, pauli_y()), expectation(rho, pauli_z())};
}

inline Mat2 density_from_bloch(const BlochVector& v) {
  Mat2 rho = Mat2::identity() + v.x * pauli_x() + v.y * pauli_y() + v.z * pauli_z();
  return 0.5 * rho;
}

// ---------------------------------------------------------------------------
// 2x2 Hermitian spectra (closed form)

/// Ascending eigenvalues of a Hermitian 2x2 matrix. No Hermiticity check.
inline std::pair<double, double> eigenvalues_hermitian2_unchecked(const Mat2& h) {
  const double a = h(0, 0).real();
  const double d = h(1, 1).real();
  const double mean = 0.5 * (a + d);
  const double half_gap = std::hypot(0.5 * (a - d), std::abs(h(0, 1)));
  return {mean - half_gap, mean + half_gap};
}

inline std::pair<double, double> eigenvalues_hermitian2(const Mat2& h) {
  if (!is_hermitian(h)) throw invalid_operator("eigenvalues_hermitian2: operator is not Hermitian");
  return eigenvalues_hermitian2_unchecked(h);
}

inline double eig_max_hermitian2(const Mat2& h) { return eigenvalues_hermitian2(h).second; }

// ---------------------------------------------------------------------------
// Reduced operators

/// Tr_A W, Bob's reduced operator.
inline Mat2 partial_trace_A(const Mat4& w) {
  Mat2 out;
  for (std::size_t b = 0; b < 2; ++b)
    for (std::size_t bp = 0; bp < 2; ++bp)
      for (std::size_t a = 0; a < 2; ++a) out(b, bp) += w(pair_index(a, b), pair_index(a, bp));
  return out;
}

/// Tr_B W, Alice's reduced operator.
inline Mat2 partial_trace_B(const Mat4& w) {
  Mat2 out;
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t ap = 0; ap < 2; ++ap)
      for (std::size_t b = 0; b < 2; ++b) out(a, ap) += w(pair_index(a, b), pair_index(ap, b));
  return out;
}

/// Tr_A[(F (x) 1) W] without validating F. Hot path for sampling.
inline Mat2 apply_effect_A_unchecked(const Mat4& w, const Mat2& effect) {
  Mat2 out;
  for (std::size_t b = 0; b < 2; ++b)
    for (std::size_t bp = 0; bp < 2; ++bp) {
      cplx acc{};
      for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t ap = 0; ap < 2; ++ap) acc += effect(a, ap) * w(pair_index(ap, b), pair_index(a, bp));
      out(b, bp) = acc;
    }
  return out;
}

/// Bob's unnormalized state after Alice's outcome with effect F: Tr_A[(F (x) 1) W].
inline Mat2 apply_effect_A(const Mat4& w, const Mat2& effect) {
  if (!is_hermitian(effect)) throw invalid_effect("apply_effect_A: effect is not Hermitian");
  if (eigenvalues_hermitian2_unchecked(effect).first < -kEffectTol)
    throw invalid_effect("apply_effect_A: effect has a negative eigenvalue");
  return apply_effect_A_unchecked(w, effect);
}

}  // namespace photonsteer

#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <type_traits>
#include <vector>

namespace photonsteer {

// Homodyne integrands are Gaussian-weighted polynomials of degree <= 4;
// mass beyond |r| = 8 is below 1e-11.
inline constexpr double kQuadratureCutoff = 8.0;
inline constexpr std::size_t kQuadratureNodes = 201;

/// Gauss-Legendre rule on [-1, 1], nodes from Newton iteration on P_n.
class GaussLegendre {
 public:
  explicit GaussLegendre(std::size_t n) : nodes_(n), weights_(n) {
    if (n == 0) throw std::invalid_argument("GaussLegendre: need at least one node");
    const std::size_t half = (n + 1) / 2;
    for (std::size_t i = 0; i < half; ++i) {
      double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0, p1 = x;
        for (std::size_t k = 2; k <= n; ++k) {
          const double kd = static_cast<double>(k);
          const double p2 = ((2.0 * kd - 1.0) * x * p1 - (kd - 1.0) * p0) / kd;
          p0 = p1;
          p1 = p2;
        }
        dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      const double w = 2.0 / ((1.0 - x * x) * dp * dp);
      nodes_[i] = -x;
      nodes_[n - 1 - i] = x;
      weights_[i] = w;
      weights_[n - 1 - i] = w;
    }
    if (n % 2 == 1) nodes_[n / 2] = 0.0;
  }

  std::size_t size() const { return nodes_.size(); }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }

  /// Integral of f over [a, b]. The result type is whatever f returns; it
  /// must support `+=` and scaling by double.
  template <class F>
  auto integrate(F&& f, double a, double b) const {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (b + a);
    using R = std::decay_t<decltype(f(mid))>;
    R sum{};
    for (std::size_t i = 0; i < nodes_.size(); ++i) sum += (weights_[i] * half) * f(mid + half * nodes_[i]);
    return sum;
  }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

inline const GaussLegendre& default_rule() {
  static const GaussLegendre rule(kQuadratureNodes);
  return rule;
}

/// Integral over [-cutoff, cutoff] split at r = 0, so integrands with a jump
/// at the origin (sign-binned reports) stay exact to rule precision.
template <class F>
auto integrate_real_line(F&& f, const GaussLegendre& rule = default_rule()) {
  auto left = rule.integrate(f, -kQuadratureCutoff, 0.0);
  left += rule.integrate(f, 0.0, kQuadratureCutoff);
  return left;
}

}  // namespace photonsteer

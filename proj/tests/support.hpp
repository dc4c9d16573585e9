#pragma once

// Bridges between library matrices and the Eigen-based oracles.

#include <Eigen/Dense>

#include "photonsteer/linalg.hpp"

namespace testsupport {

template <std::size_t N>
Eigen::Matrix<std::complex<double>, N, N> to_eigen(const photonsteer::Matrix<N>& m) {
  Eigen::Matrix<std::complex<double>, N, N> out;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) out(i, j) = m(i, j);
  return out;
}

template <class E>
double max_diff(const E& a, const E& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace testsupport

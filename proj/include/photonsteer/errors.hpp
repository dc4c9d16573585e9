#pragma once

#include <stdexcept>
#include <string>

namespace photonsteer {

// Operator failed a structural check (e.g. not Hermitian).
struct invalid_operator : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// POVM element with a negative eigenvalue.
struct invalid_effect : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Operation applied to a state in the wrong stage (e.g. loss applied twice).
struct state_error : std::logic_error {
  using std::logic_error::logic_error;
};

// Request would exceed a fixed computational budget.
struct resource_error : std::length_error {
  using std::length_error::length_error;
};

inline void require_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::domain_error(std::string(name) + " must lie in [0,1], got " + std::to_string(p));
}

}  // namespace photonsteer

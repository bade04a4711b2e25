#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace varcheck {

using Vector = Eigen::VectorXd;

/// Slope matrix z: nu x n, entry (alpha, i) = d x^alpha / d t^i.
using SlopeMatrix = Eigen::MatrixXd;

/// Momenta q: stored with the same (alpha, i) layout as SlopeMatrix,
/// q(alpha, i) = q^i_alpha.
using Momenta = Eigen::MatrixXd;

/// Flat index for the (alpha, i) pair; fixes the ordering used by every
/// flattened Hessian and biquadratic tensor in the library.
inline int flat_index(int alpha, int i, int n) { return alpha * n + i; }

/// Invalid arguments, parameters, domains, arities.  CLI exit code 2.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Non-finite values, solver failures, unusable numerics.  CLI exit code 3.
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace varcheck

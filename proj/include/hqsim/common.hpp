#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace hqsim {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr Complex im{0.0, 1.0};

/// Thrown on contract violations of builder/operation arguments.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when an adaptive integration cannot meet its tolerance or
/// violates a physical invariant (norm, trace, positivity) en route.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double t_reached, long steps,
                   double last_step)
      : std::runtime_error(what),
        t_reached(t_reached),
        steps(steps),
        last_step(last_step) {}

  double t_reached = 0.0;
  long steps = 0;
  double last_step = 0.0;
};

/// Thrown by the steady-state solver when the Liouvillian null space is
/// not one-dimensional.
class SteadyStateError : public std::runtime_error {
 public:
  SteadyStateError(const std::string& what, int null_space_dim)
      : std::runtime_error(what), null_space_dim(null_space_dim) {}

  int null_space_dim = 0;
};

inline double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace hqsim

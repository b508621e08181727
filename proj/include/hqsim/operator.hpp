#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <utility>

#include <unsupported/Eigen/KroneckerProduct>

#include "hqsim/common.hpp"
#include "hqsim/space.hpp"

namespace hqsim {

/// Dense linear operator on a CompositeSpace.
class Operator {
 public:
  Operator() = default;

  Operator(CompositeSpace space, Matrix matrix,
           std::optional<bool> hermitian_hint = std::nullopt)
      : space_(std::move(space)), matrix_(std::move(matrix)) {
    if (matrix_.rows() != matrix_.cols() || matrix_.rows() != space_.dim())
      throw InvalidArgument("operator matrix does not match space dimension");
    if (hermitian_hint.value_or(false)) {
      const double scale = std::max(1.0, max_abs(matrix_));
      if (max_abs(matrix_ - matrix_.adjoint()) > 1e-12 * scale)
        throw InvalidArgument("operator marked hermitian is not hermitian");
    }
    hermitian_hint_ = hermitian_hint;
  }

  const CompositeSpace& space() const { return space_; }
  const Matrix& matrix() const { return matrix_; }
  long dim() const { return matrix_.rows(); }
  std::optional<bool> hermitian_hint() const { return hermitian_hint_; }

  bool is_hermitian(double tol = 1e-12) const {
    const double scale = std::max(1.0, max_abs(matrix_));
    return max_abs(matrix_ - matrix_.adjoint()) <= tol * scale;
  }

  Operator adjoint() const { return {space_, matrix_.adjoint()}; }

  Operator operator+(const Operator& rhs) const {
    require_same_space(rhs);
    return {space_, matrix_ + rhs.matrix_};
  }
  Operator operator-(const Operator& rhs) const {
    require_same_space(rhs);
    return {space_, matrix_ - rhs.matrix_};
  }
  Operator operator*(const Operator& rhs) const {
    require_same_space(rhs);
    return {space_, matrix_ * rhs.matrix_};
  }
  Operator operator-() const { return {space_, -matrix_}; }

  friend Operator operator*(Complex c, const Operator& op) {
    return {op.space_, c * op.matrix_};
  }
  friend Operator operator*(double c, const Operator& op) {
    return {op.space_, c * op.matrix_};
  }
  friend Operator operator*(const Operator& op, Complex c) { return c * op; }
  friend Operator operator*(const Operator& op, double c) { return c * op; }

  void require_same_space(const Operator& rhs) const {
    if (!(space_ == rhs.space_))
      throw InvalidArgument("operators act on different spaces");
  }

 private:
  CompositeSpace space_;
  Matrix matrix_;
  std::optional<bool> hermitian_hint_;
};

namespace detail {
inline CompositeSpace single_mode_space(const ModeSpec& m) {
  return CompositeSpace({m});
}
}  // namespace detail

/// Truncated annihilation operator: a[n-1, n] = sqrt(n).
inline Operator build_annihilation(int cutoff,
                                   const std::string& label = "mode") {
  if (cutoff < 2)
    throw InvalidArgument("annihilation cutoff must be >= 2, got " +
                          std::to_string(cutoff));
  Matrix a = Matrix::Zero(cutoff, cutoff);
  for (int n = 1; n < cutoff; ++n) a(n - 1, n) = std::sqrt(double(n));
  return {detail::single_mode_space(ModeSpec::boson(label, cutoff)),
          std::move(a)};
}

inline Operator build_creation(int cutoff, const std::string& label = "mode") {
  return build_annihilation(cutoff, label).adjoint();
}

inline Operator build_number(int cutoff, const std::string& label = "mode") {
  Matrix n = Matrix::Zero(cutoff, cutoff);
  for (int k = 0; k < cutoff; ++k) n(k, k) = double(k);
  return {detail::single_mode_space(ModeSpec::boson(label, cutoff)),
          std::move(n)};
}

inline Operator identity(const CompositeSpace& space) {
  return {space, Matrix::Identity(space.dim(), space.dim())};
}

// Two-level operators in the standard Pauli basis: |e> = index 0,
// |g> = index 1, sigma_z = |e><e| - |g><g| = diag(+1, -1).
inline constexpr int spin_excited = 0;
inline constexpr int spin_ground = 1;

inline Operator sigma_z(const std::string& label = "spin") {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return {detail::single_mode_space(ModeSpec::spin_half(label)), m};
}
inline Operator sigma_x(const std::string& label = "spin") {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return {detail::single_mode_space(ModeSpec::spin_half(label)), m};
}
inline Operator sigma_y(const std::string& label = "spin") {
  Matrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return {detail::single_mode_space(ModeSpec::spin_half(label)), m};
}
inline Operator sigma_plus(const std::string& label = "spin") {
  Matrix m = Matrix::Zero(2, 2);
  m(spin_excited, spin_ground) = 1;  // |e><g|
  return {detail::single_mode_space(ModeSpec::spin_half(label)), m};
}
inline Operator sigma_minus(const std::string& label = "spin") {
  Matrix m = Matrix::Zero(2, 2);
  m(spin_ground, spin_excited) = 1;  // |g><e|
  return {detail::single_mode_space(ModeSpec::spin_half(label)), m};
}

/// |j><k| on a single mode of dimension dim.
inline Operator transition(int dim, int j, int k,
                           const std::string& label = "mode") {
  if (j < 0 || j >= dim || k < 0 || k >= dim)
    throw InvalidArgument("transition indices out of range");
  Matrix m = Matrix::Zero(dim, dim);
  m(j, k) = 1;
  return {detail::single_mode_space(ModeSpec::multilevel(label, dim)), m};
}

/// Tensor-embeds a single-mode operator into `space`, acting on the mode
/// named `mode_label` and as identity elsewhere.
inline Operator embed(const Operator& op, const std::string& mode_label,
                      const CompositeSpace& space) {
  const std::size_t target = space.index_of(mode_label);
  if (op.space().mode_count() != 1)
    throw InvalidArgument("embed expects a single-mode operator");
  if (op.dim() != space.mode(target).dim)
    throw InvalidArgument("operator dimension " + std::to_string(op.dim()) +
                          " does not match mode '" + mode_label + "' (dim " +
                          std::to_string(space.mode(target).dim) + ")");
  Matrix result = Matrix::Identity(1, 1);
  for (std::size_t i = 0; i < space.mode_count(); ++i) {
    const Matrix& factor =
        (i == target) ? op.matrix()
                      : Matrix(Matrix::Identity(space.mode(i).dim,
                                                space.mode(i).dim));
    result = Eigen::kroneckerProduct(result, factor).eval();
  }
  return {space, std::move(result)};
}

/// Commutator [a, b].
inline Operator commutator(const Operator& a, const Operator& b) {
  return a * b - b * a;
}

}  // namespace hqsim

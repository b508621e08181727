#pragma once

#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "hqsim/common.hpp"
#include "hqsim/operator.hpp"
#include "hqsim/space.hpp"

namespace hqsim {

/// Normalized pure state on a CompositeSpace.
class StateVector {
 public:
  StateVector() = default;

  StateVector(CompositeSpace space, Vector amplitudes)
      : space_(std::move(space)), amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() != space_.dim())
      throw InvalidArgument("state vector does not match space dimension");
    if (std::abs(amplitudes_.norm() - 1.0) > 1e-10)
      throw InvalidArgument("state vector is not normalized");
  }

  /// Basis state with the given occupation per mode label.
  static StateVector basis(const CompositeSpace& space,
                           const std::map<std::string, int>& levels) {
    std::vector<int> idx(space.mode_count(), 0);
    for (const auto& [label, n] : levels) idx[space.index_of(label)] = n;
    Vector amp = Vector::Zero(space.dim());
    amp(space.basis_index(idx)) = 1.0;
    return {space, std::move(amp)};
  }

  const CompositeSpace& space() const { return space_; }
  const Vector& amplitudes() const { return amplitudes_; }
  long dim() const { return amplitudes_.size(); }

  Complex amplitude(const std::vector<int>& levels) const {
    return amplitudes_(space_.basis_index(levels));
  }

 private:
  CompositeSpace space_;
  Vector amplitudes_;
};

inline Complex inner(const StateVector& a, const StateVector& b) {
  if (!(a.space() == b.space()))
    throw InvalidArgument("states live on different spaces");
  return a.amplitudes().dot(b.amplitudes());
}

inline double fidelity(const StateVector& a, const StateVector& b) {
  const Complex c = inner(a, b);
  return std::norm(c);
}

/// Mixed state. Hermitian within 1e-10, unit trace within 1e-10 and
/// smallest eigenvalue >= -1e-8 (truncation tolerance), all checked on
/// construction.
class DensityMatrix {
 public:
  DensityMatrix() = default;

  DensityMatrix(CompositeSpace space, Matrix matrix)
      : space_(std::move(space)), matrix_(std::move(matrix)) {
    if (matrix_.rows() != matrix_.cols() || matrix_.rows() != space_.dim())
      throw InvalidArgument("density matrix does not match space dimension");
    const double scale = std::max(1.0, max_abs(matrix_));
    if (max_abs(matrix_ - matrix_.adjoint()) > 1e-10 * scale)
      throw InvalidArgument("density matrix is not hermitian");
    if (std::abs(matrix_.trace().real() - 1.0) > 1e-10 ||
        std::abs(matrix_.trace().imag()) > 1e-10)
      throw InvalidArgument("density matrix trace is not 1");
    Eigen::SelfAdjointEigenSolver<Matrix> es(matrix_,
                                             Eigen::EigenvaluesOnly);
    min_eigenvalue_ = es.eigenvalues().minCoeff();
    if (min_eigenvalue_ < -1e-8)
      throw InvalidArgument("density matrix has eigenvalue " +
                            std::to_string(min_eigenvalue_) +
                            " below truncation tolerance");
  }

  static DensityMatrix pure(const StateVector& psi) {
    return {psi.space(),
            Matrix(psi.amplitudes() * psi.amplitudes().adjoint())};
  }

  const CompositeSpace& space() const { return space_; }
  const Matrix& matrix() const { return matrix_; }
  long dim() const { return matrix_.rows(); }
  double min_eigenvalue() const { return min_eigenvalue_; }

  double purity() const { return (matrix_ * matrix_).trace().real(); }

  /// Partial trace keeping only the listed mode labels (in space order).
  DensityMatrix partial_trace_keep(
      const std::vector<std::string>& keep_labels) const;

 private:
  CompositeSpace space_;
  Matrix matrix_;
  double min_eigenvalue_ = 0.0;
};

/// Truncated Bose-Einstein state: populations proportional to
/// (nbar/(nbar+1))^n over the retained Fock levels.
inline Matrix thermal_populations(int cutoff, double nbar) {
  if (nbar < 0) throw InvalidArgument("thermal occupancy must be >= 0");
  Matrix rho = Matrix::Zero(cutoff, cutoff);
  if (nbar == 0.0) {
    rho(0, 0) = 1.0;
    return rho;
  }
  const double q = nbar / (nbar + 1.0);
  double norm = 0.0;
  for (int n = 0; n < cutoff; ++n) norm += std::pow(q, n);
  for (int n = 0; n < cutoff; ++n) rho(n, n) = std::pow(q, n) / norm;
  return rho;
}

inline DensityMatrix thermal_state(const CompositeSpace& space, double nbar) {
  if (space.mode_count() != 1)
    throw InvalidArgument("thermal_state expects a single-mode space");
  return {space, thermal_populations(space.mode(0).dim, nbar)};
}

/// Kronecker product of single-mode density matrices following the mode
/// order of `space`; `factors` maps label -> single-mode matrix.
inline DensityMatrix product_state(
    const CompositeSpace& space,
    const std::map<std::string, Matrix>& factors) {
  Matrix rho = Matrix::Identity(1, 1);
  for (std::size_t i = 0; i < space.mode_count(); ++i) {
    auto it = factors.find(space.mode(i).label);
    if (it == factors.end())
      throw InvalidArgument("product_state missing factor for mode '" +
                            space.mode(i).label + "'");
    rho = Eigen::kroneckerProduct(rho, it->second).eval();
  }
  return {space, std::move(rho)};
}

inline DensityMatrix DensityMatrix::partial_trace_keep(
    const std::vector<std::string>& keep_labels) const {
  std::vector<bool> keep(space_.mode_count(), false);
  std::vector<ModeSpec> kept_modes;
  for (std::size_t i = 0; i < space_.mode_count(); ++i) {
    for (const auto& l : keep_labels) {
      if (space_.mode(i).label == l) keep[i] = true;
    }
    if (keep[i]) kept_modes.push_back(space_.mode(i));
  }
  if (kept_modes.size() != keep_labels.size())
    throw InvalidArgument("partial trace keep-list has unknown labels");
  CompositeSpace out_space(kept_modes);

  // Split each flat index into (kept, traced) sub-indices.
  const long d = space_.dim();
  std::vector<long> kept_idx(d), traced_idx(d);
  for (long i = 0; i < d; ++i) {
    long ik = 0, it = 0;
    for (std::size_t m = 0; m < space_.mode_count(); ++m) {
      const int lvl = space_.level_of(i, m);
      if (keep[m])
        ik = ik * space_.mode(m).dim + lvl;
      else
        it = it * space_.mode(m).dim + lvl;
    }
    kept_idx[i] = ik;
    traced_idx[i] = it;
  }

  Matrix out = Matrix::Zero(out_space.dim(), out_space.dim());
  for (long i = 0; i < d; ++i)
    for (long j = 0; j < d; ++j)
      if (traced_idx[i] == traced_idx[j])
        out(kept_idx[i], kept_idx[j]) += matrix_(i, j);
  return {out_space, std::move(out)};
}

}  // namespace hqsim

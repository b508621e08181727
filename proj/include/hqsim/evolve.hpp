#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "hqsim/common.hpp"
#include "hqsim/integrator.hpp"
#include "hqsim/lindblad.hpp"
#include "hqsim/operator.hpp"
#include "hqsim/state.hpp"

namespace hqsim {

struct Observable {
  std::string label;
  Operator op;
};

struct EvolutionResult {
  std::vector<double> times;
  std::map<std::string, std::vector<Complex>> expectations;
  std::optional<std::vector<StateVector>> state_snapshots;
  std::optional<std::vector<DensityMatrix>> density_snapshots;

  /// Truncation sentinel: set when any boson mode's top Fock level holds
  /// population > 1e-4 at any output time.
  bool truncation_suspect = false;
  std::map<std::string, double> max_top_level_population;

  IntegratorStats stats;
};

struct EvolveOptions {
  IntegratorOptions integrator;
  std::vector<Observable> observables;
  bool store_snapshots = false;
};

inline Complex expectation(const Operator& op, const StateVector& psi) {
  if (!(op.space() == psi.space()))
    throw InvalidArgument("operator and state live on different spaces");
  return psi.amplitudes().dot(op.matrix() * psi.amplitudes());
}

inline Complex expectation(const Operator& op, const DensityMatrix& rho) {
  if (!(op.space() == rho.space()))
    throw InvalidArgument("operator and state live on different spaces");
  return (op.matrix() * rho.matrix()).trace();
}

namespace detail {

constexpr double top_level_tolerance = 1e-4;

/// Population of the highest Fock level of each boson mode.
inline std::map<std::string, double> top_level_populations(
    const CompositeSpace& space, const RealVector& diag_populations) {
  std::map<std::string, double> out;
  for (std::size_t m = 0; m < space.mode_count(); ++m) {
    if (space.mode(m).kind != ModeKind::boson) continue;
    const int top = space.mode(m).dim - 1;
    double pop = 0.0;
    for (long i = 0; i < space.dim(); ++i)
      if (space.level_of(i, m) == top) pop += diag_populations(i);
    out[space.mode(m).label] = pop;
  }
  return out;
}

inline void record_truncation(EvolutionResult& result,
                              const CompositeSpace& space,
                              const RealVector& diag_populations) {
  for (const auto& [label, pop] :
       top_level_populations(space, diag_populations)) {
    auto& mx = result.max_top_level_population[label];
    mx = std::max(mx, pop);
    if (pop > top_level_tolerance) result.truncation_suspect = true;
  }
}

}  // namespace detail

/// Unitary evolution i dpsi/dt = H psi (hbar = 1). The norm is checked to
/// stay within 1e-8 of unity at every output time.
inline EvolutionResult evolve_schrodinger(const Operator& hamiltonian,
                                          const StateVector& psi0,
                                          const std::vector<double>& times,
                                          const EvolveOptions& options = {}) {
  if (!hamiltonian.is_hermitian(1e-10))
    throw InvalidArgument("evolve_schrodinger requires a hermitian H");
  if (!(hamiltonian.space() == psi0.space()))
    throw InvalidArgument("Hamiltonian and state spaces differ");

  const Matrix& H = hamiltonian.matrix();
  EvolutionResult result;
  result.times = times;
  for (const auto& obs : options.observables) {
    if (!(obs.op.space() == psi0.space()))
      throw InvalidArgument("observable space differs from state space");
    result.expectations[obs.label].resize(times.size());
  }
  if (options.store_snapshots)
    result.state_snapshots.emplace(times.size(), StateVector());

  auto rhs = [&](double, const Vector& y, Vector& dy) {
    dy.noalias() = Complex(0, -1) * (H * y);
  };

  result.stats = integrate_adaptive(
      rhs, psi0.amplitudes(), times, options.integrator,
      [&](std::size_t i, const Vector& y) {
        const double norm = y.norm();
        if (std::abs(norm - 1.0) > 1e-8)
          throw IntegrationError(
              "norm drifted to " + std::to_string(norm) + " at t=" +
                  std::to_string(result.times[i]) +
                  "; tighten tolerances or shorten the horizon",
              result.times[i], 0, 0.0);
        for (const auto& obs : options.observables)
          result.expectations[obs.label][i] = y.dot(obs.op.matrix() * y);
        detail::record_truncation(result, psi0.space(),
                                  RealVector(y.cwiseAbs2()));
        if (options.store_snapshots)
          (*result.state_snapshots)[i] = StateVector(psi0.space(), y / norm);
      });
  return result;
}

namespace detail {

inline void lindblad_rhs(const Matrix& H,
                         const std::vector<std::pair<Matrix, Matrix>>& ops,
                         const Matrix& rho, Matrix& drho, Matrix& scratch) {
  // drho = -i[H, rho] + sum_k (L rho L^+ - 1/2 {L^+L, rho}), rates folded in.
  scratch.noalias() = H * rho;
  drho = Complex(0, -1) * scratch;
  scratch.noalias() = rho * H;
  drho += Complex(0, 1) * scratch;
  for (const auto& [L, LdL] : ops) {
    scratch.noalias() = L * rho;
    drho.noalias() += scratch * L.adjoint();
    scratch.noalias() = LdL * rho;
    drho -= 0.5 * scratch;
    scratch.noalias() = rho * LdL;
    drho -= 0.5 * scratch;
  }
}

}  // namespace detail

/// Master-equation evolution. Trace is checked within 1e-8 and the
/// smallest eigenvalue must stay above -1e-6 at every output time.
inline EvolutionResult evolve_lindblad(const LindbladModel& model,
                                       const DensityMatrix& rho0,
                                       const std::vector<double>& times,
                                       const EvolveOptions& options = {}) {
  if (!(model.space() == rho0.space()))
    throw InvalidArgument("model and state spaces differ");

  const long d = model.space().dim();
  const Matrix& H = model.hamiltonian().matrix();

  // Pre-scale collapse operators by sqrt(rate); cache L^+L.
  std::vector<std::pair<Matrix, Matrix>> ops;
  for (const auto& c : model.collapses()) {
    if (c.rate == 0.0) continue;
    Matrix L = std::sqrt(c.rate) * c.op.matrix();
    Matrix LdL = L.adjoint() * L;
    ops.emplace_back(std::move(L), std::move(LdL));
  }

  EvolutionResult result;
  result.times = times;
  for (const auto& obs : options.observables) {
    if (!(obs.op.space() == rho0.space()))
      throw InvalidArgument("observable space differs from state space");
    result.expectations[obs.label].resize(times.size());
  }
  if (options.store_snapshots)
    result.density_snapshots.emplace(times.size(), DensityMatrix());

  Matrix rho_buf(d, d), drho_buf(d, d), scratch(d, d);
  auto rhs = [&](double, const Vector& y, Vector& dy) {
    rho_buf = Eigen::Map<const Matrix>(y.data(), d, d);
    detail::lindblad_rhs(H, ops, rho_buf, drho_buf, scratch);
    dy = Eigen::Map<const Vector>(drho_buf.data(), d * d);
  };

  Vector y0 = Eigen::Map<const Vector>(rho0.matrix().data(), d * d);

  result.stats = integrate_adaptive(
      rhs, y0, times, options.integrator,
      [&](std::size_t i, const Vector& y) {
        Eigen::Map<const Matrix> rho(y.data(), d, d);
        const double tr_err = std::abs(rho.trace() - Complex(1.0, 0.0));
        if (tr_err > 1e-8)
          throw IntegrationError("trace drifted by " + std::to_string(tr_err) +
                                     " at t=" + std::to_string(result.times[i]),
                                 result.times[i], 0, 0.0);
        Eigen::SelfAdjointEigenSolver<Matrix> es(
            Matrix(0.5 * (rho + rho.adjoint())), Eigen::EigenvaluesOnly);
        const double min_eig = es.eigenvalues().minCoeff();
        if (min_eig < -1e-6)
          throw IntegrationError(
              "positivity violated (min eigenvalue " +
                  std::to_string(min_eig) + ") at t=" +
                  std::to_string(result.times[i]) +
                  "; likely truncation or tolerance problem",
              result.times[i], 0, 0.0);
        for (const auto& obs : options.observables)
          result.expectations[obs.label][i] =
              (obs.op.matrix() * rho).trace();
        detail::record_truncation(result, rho0.space(),
                                  RealVector(rho.diagonal().real()));
        if (options.store_snapshots)
          (*result.density_snapshots)[i] = DensityMatrix(
              rho0.space(), Matrix(0.5 * (rho + rho.adjoint()) /
                                   rho.trace().real()));
      });
  return result;
}

/// Column-stacked Liouvillian superoperator: d vec(rho)/dt = L vec(rho).
inline Matrix liouvillian_matrix(const LindbladModel& model) {
  const long d = model.space().dim();
  const Matrix& H = model.hamiltonian().matrix();
  const Matrix id = Matrix::Identity(d, d);
  Matrix L = Complex(0, -1) * (Eigen::kroneckerProduct(id, H).eval() -
                               Eigen::kroneckerProduct(H.transpose(), id).eval());
  for (const auto& c : model.collapses()) {
    if (c.rate == 0.0) continue;
    const Matrix& A = c.op.matrix();
    Matrix AdA = A.adjoint() * A;
    L += c.rate *
         (Eigen::kroneckerProduct(A.conjugate(), A).eval() -
          0.5 * Eigen::kroneckerProduct(id, AdA).eval() -
          0.5 * Eigen::kroneckerProduct(AdA.transpose(), id).eval());
  }
  return L;
}

struct SteadyStateOptions {
  long dimension_cap = 4096;
  double residual_tol = 1e-10;
};

/// Unique null vector of the Liouvillian, normalized to a density matrix.
/// Throws SteadyStateError with the null-space dimension when degenerate.
inline DensityMatrix steady_state(const LindbladModel& model,
                                  const SteadyStateOptions& options = {}) {
  const long d = model.space().dim();
  if (d > options.dimension_cap)
    throw InvalidArgument("steady_state dimension " + std::to_string(d) +
                          " exceeds cap " +
                          std::to_string(options.dimension_cap));

  Matrix L = liouvillian_matrix(model);
  const double scale = std::max(1.0, max_abs(L));

  auto residual = [&](const Vector& v) {
    return (L * v).cwiseAbs().maxCoeff();
  };
  auto trace_of = [&](const Vector& v) {
    Complex tr = 0.0;
    for (long j = 0; j < d; ++j) tr += v(j * d + j);
    return tr;
  };

  // Inject the trace constraint into the singular system L x = 0. When
  // the null space is one-dimensional the rank-1 update makes the system
  // nonsingular; a collapsed LU pivot exposes a degenerate null space,
  // which is then diagnosed with the (slow) full-pivot kernel.
  Matrix A = L;
  for (long j = 0; j < d; ++j) A(0, j * d + j) += scale;
  Vector b = Vector::Zero(d * d);
  b(0) = scale;

  Eigen::PartialPivLU<Matrix> lu(A);
  const auto pivots = lu.matrixLU().diagonal().cwiseAbs();
  const double pivot_ratio = pivots.minCoeff() / pivots.maxCoeff();

  Vector x1 = lu.solve(b);
  bool x1_ok = x1.allFinite() && std::abs(trace_of(x1)) > 1e-12;
  if (x1_ok) {
    x1 /= trace_of(x1);
    x1_ok = residual(x1) <= options.residual_tol * scale;
  }

  if (pivot_ratio < 1e-12 || !x1_ok) {
    Eigen::FullPivLU<Matrix> flu(L);
    flu.setThreshold(1e-10);
    const int null_dim = int(flu.dimensionOfKernel());
    if (null_dim > 1)
      throw SteadyStateError(
          "Liouvillian null space has dimension " + std::to_string(null_dim) +
              "; steady state is not unique",
          null_dim);
    if (null_dim == 0) {
      if (!x1_ok)
        throw SteadyStateError("no steady state found within tolerance", 0);
    } else {
      Vector k = flu.kernel().col(0);
      const Complex tr = trace_of(k);
      if (std::abs(tr) < 1e-12)
        throw SteadyStateError("steady-state candidate is traceless", 1);
      x1 = k / tr;
      if (residual(x1) > options.residual_tol * scale)
        throw SteadyStateError("steady-state residual too large", 1);
    }
  }

  Eigen::Map<const Matrix> xm(x1.data(), d, d);
  Matrix rho = 0.5 * (Matrix(xm) + Matrix(xm).adjoint());
  rho /= rho.trace().real();
  return {model.space(), std::move(rho)};
}

}  // namespace hqsim

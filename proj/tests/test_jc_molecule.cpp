#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Eigenvalues>

#include "hqsim/jc_molecule.hpp"

using namespace hqsim;
using namespace hqsim::jc;

namespace {

std::vector<double> linspace(double t0, double t1, int n) {
  std::vector<double> ts(n);
  for (int i = 0; i < n; ++i) ts[i] = t0 + (t1 - t0) * i / double(n - 1);
  return ts;
}

/// Least-squares Rabi frequency from |<psi0|psi(t)>| = |cos(w t)| samples
/// within the first quarter period.
double fit_rabi_frequency(const std::vector<double>& times,
                          const std::vector<double>& overlap) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (overlap[i] < 0.2) break;  // stay on the monotone branch
    const double theta = std::acos(std::min(1.0, overlap[i]));
    num += theta * times[i];
    den += times[i] * times[i];
  }
  return num / den;
}

}  // namespace

TEST_CASE("rotor transition frequencies") {
  auto t0 = rotor_transition({.rotational_constant = 1.0, .lower_level = 0});
  CHECK(t0.transition == 2.0);
  CHECK(t0.e_rot == 1.0);

  auto t1 = rotor_transition({.rotational_constant = 1.0, .lower_level = 1});
  CHECK(t1.transition == 4.0);

  for (int n = 0; n <= 10; ++n) {
    auto a = rotor_transition({.rotational_constant = 0.7, .lower_level = n});
    auto b =
        rotor_transition({.rotational_constant = 0.7, .lower_level = n + 1});
    CHECK(std::abs((b.transition - a.transition) - 2.0 * 0.7) < 1e-12);
    CHECK(std::abs(a.anharmonicity - 1.4) < 1e-12);
  }

  CHECK_THROWS_AS(rotor_transition({.rotational_constant = -1.0}),
                  InvalidArgument);
}

TEST_CASE("resonant JC oscillates at sin^2(t) with period pi") {
  auto model = build_jc(
      {.omega_c = 2.0, .e_rot = 1.0, .g = 1.0, .kappa = 0.0, .cutoff = 3});
  auto psi0 = StateVector::basis(
      model.space(), {{rotor_label, spin_excited}, {cavity_label, 0}});
  auto times = linspace(0, pi, 101);
  auto res = evolve_schrodinger(model.hamiltonian(), psi0, times,
                                {.store_snapshots = true});
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double p_g1 =
        std::norm((*res.state_snapshots)[i].amplitude({spin_ground, 1}));
    CHECK(std::abs(p_g1 - std::pow(std::sin(times[i]), 2)) < 1e-7);
  }
  // full transfer at t = pi/2
  const double p_mid =
      std::norm((*res.state_snapshots)[50].amplitude({spin_ground, 1}));
  CHECK(std::abs(p_mid - 1.0) < 1e-8);
}

TEST_CASE("excitation number is conserved at kappa = 0") {
  auto model = build_jc(
      {.omega_c = 3.0, .e_rot = 1.5, .g = 0.8, .kappa = 0.0, .cutoff = 4});
  const auto& space = model.space();
  auto c = embed(build_annihilation(4, cavity_label), cavity_label, space);
  auto sp = embed(sigma_plus(rotor_label), rotor_label, space);
  auto sm = embed(sigma_minus(rotor_label), rotor_label, space);
  Operator n_exc = c.adjoint() * c + sp * sm;

  CHECK(max_abs(commutator(model.hamiltonian(), n_exc).matrix()) < 1e-12);

  auto psi0 = StateVector::basis(
      space, {{rotor_label, spin_excited}, {cavity_label, 0}});
  auto res = evolve_schrodinger(model.hamiltonian(), psi0,
                                linspace(0, 5.0, 51),
                                {.observables = {{"n_exc", n_exc}}});
  double mean = 0, var = 0;
  for (auto v : res.expectations.at("n_exc")) mean += v.real();
  mean /= double(res.times.size());
  for (auto v : res.expectations.at("n_exc"))
    var += std::pow(v.real() - mean, 2);
  var /= double(res.times.size());
  CHECK(var < 1e-10);
}

TEST_CASE("quality factor bookkeeping is exact") {
  const double omega_c = 2 * pi * 1e10;  // 2pi * 10 GHz
  const double kappa = 2 * pi * 1e4;     // 2pi * 10 kHz
  CHECK(quality_factor(omega_c, kappa) == 1e6);
}

TEST_CASE("detuned JC max transfer matches the 2x2 oracle") {
  // Two-level subspace {|e,0>, |g,1>} with detuning delta = 2 E_rot - omega_c:
  // max transfer = g^2 / (g^2 + delta^2/4).
  const double g = 0.5, delta = 10 * g;
  const double omega_c = 2.0;
  const double e_rot = (omega_c + delta) / 2.0;
  auto model = build_jc(
      {.omega_c = omega_c, .e_rot = e_rot, .g = g, .kappa = 0.0, .cutoff = 2});

  const double expect_max = g * g / (g * g + delta * delta / 4.0);
  const double rabi = std::sqrt(g * g + delta * delta / 4.0);
  // sample around the first peak t = pi / (2 rabi)
  auto psi0 = StateVector::basis(
      model.space(), {{rotor_label, spin_excited}, {cavity_label, 0}});
  auto times = linspace(0, pi / rabi, 401);
  auto res = evolve_schrodinger(model.hamiltonian(), psi0, times,
                                {.store_snapshots = true});
  double max_p = 0;
  for (const auto& s : *res.state_snapshots)
    max_p = std::max(max_p, std::norm(s.amplitude({spin_ground, 1})));
  CHECK(std::abs(max_p - expect_max) < 1e-6);
}

TEST_CASE("tavis-cummings with one spin reduces to the JC model") {
  auto tc = build_tavis_cummings(1, 0.8, 2.0, 1.0, 3);
  auto jc_model = build_jc(
      {.omega_c = 2.0, .e_rot = 1.0, .g = 0.8, .kappa = 0.0, .cutoff = 3});
  CHECK(max_abs(tc.hamiltonian().matrix() - jc_model.hamiltonian().matrix()) <
        1e-14);
}

TEST_CASE("tavis-cummings spin cap") {
  CHECK_THROWS_AS(build_tavis_cummings(9, 1.0, 2.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(build_tavis_cummings(0, 1.0, 2.0, 1.0), InvalidArgument);
}

namespace {

/// Eigenvalue splitting of the bright doublet in the single-excitation
/// sector, by brute-force projection and diagonalization.
double bright_splitting_oracle(const LindbladModel& model, int n_spins) {
  const auto& space = model.space();
  std::vector<long> sector;
  // |1 photon, all ground>
  {
    std::vector<int> levels(space.mode_count(), spin_ground);
    levels.back() = 1;
    sector.push_back(space.basis_index(levels));
  }
  for (int i = 0; i < n_spins; ++i) {
    std::vector<int> levels(space.mode_count(), spin_ground);
    levels.back() = 0;
    levels[i] = spin_excited;
    sector.push_back(space.basis_index(levels));
  }
  Matrix h(sector.size(), sector.size());
  for (std::size_t r = 0; r < sector.size(); ++r)
    for (std::size_t c = 0; c < sector.size(); ++c)
      h(r, c) = model.hamiltonian().matrix()(sector[r], sector[c]);
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  RealVector ev = es.eigenvalues();
  return ev.maxCoeff() - ev.minCoeff();
}

}  // namespace

TEST_CASE("collective enhancement: splitting and fitted Rabi equal g sqrt(N)") {
  const double g = 1.0, omega_c = 10.0, e_rot = omega_c / 2.0;
  for (int n = 2; n <= 6; ++n) {
    auto model = build_tavis_cummings(n, g, omega_c, e_rot, 2);

    const double splitting = bright_splitting_oracle(model, n);
    CHECK(std::abs(splitting - 2.0 * g * std::sqrt(double(n))) < 1e-10);

    // fitted vacuum Rabi frequency from the time trace
    std::vector<int> levels(model.space().mode_count(), spin_ground);
    levels.back() = 1;
    Vector amp = Vector::Zero(model.space().dim());
    amp(model.space().basis_index(levels)) = 1.0;
    StateVector psi0(model.space(), amp);

    const double guess = g * std::sqrt(double(n));
    auto times = linspace(0, 0.45 * pi / guess, 40);
    EvolveOptions opt;
    opt.integrator.rel_tol = 1e-11;
    opt.integrator.abs_tol = 1e-13;
    opt.store_snapshots = true;
    auto res = evolve_schrodinger(model.hamiltonian(), psi0, times, opt);

    std::vector<double> overlap(times.size());
    for (std::size_t i = 0; i < times.size(); ++i)
      overlap[i] = std::abs(inner(psi0, (*res.state_snapshots)[i]));
    const double fitted = fit_rabi_frequency(times, overlap);
    CHECK(std::abs(fitted - guess) / guess < 1e-6);
  }
}

TEST_CASE("bosonized ensemble swaps at the collective rate") {
  const double n_mol = 1e4, g = 0.01;
  const double g_coll = g * std::sqrt(n_mol);  // = 1
  auto model = build_bosonized_ensemble(n_mol, g, 2.0, 1.0, 3, 3);
  auto psi0 = StateVector::basis(model.space(),
                                 {{"ens", 1}, {cavity_label, 0}});
  // |1,0> -> |0,1> full swap at t = pi / (2 g_coll)
  auto res = evolve_schrodinger(model.hamiltonian(), psi0,
                                {0.0, pi / (2 * g_coll)},
                                {.store_snapshots = true});
  const double p_swap =
      std::norm((*res.state_snapshots)[1].amplitude({0, 1}));
  CHECK(std::abs(p_swap - 1.0) < 1e-8);
}

TEST_CASE("sideband cooling: red detuning cools below n_init") {
  CoolingSpec spec{.nu_t = 1.0,
                   .eta = 0.6,
                   .kappa = 0.4,
                   .detuning = -1.0,
                   .n_init = 2.0,
                   .cutoff_motion = 6,
                   .cutoff_cavity = 4};
  auto model = build_sideband_cooling(spec);
  auto rho = steady_state(model);
  auto n_mot = embed(build_number(spec.cutoff_motion, motion_label),
                     motion_label, model.space());
  const double n_ss = expectation(n_mot, rho).real();
  CHECK(n_ss < spec.n_init);
  CHECK(n_ss < 0.1);  // deep in the resolved-sideband regime
}

TEST_CASE("sideband cooling: steady occupancy scales as (kappa/nu_t)^2") {
  CoolingSpec base{.nu_t = 1.0,
                   .eta = 0.6,
                   .kappa = 0.4,
                   .detuning = -1.0,
                   .n_init = 2.0,
                   .cutoff_motion = 6,
                   .cutoff_cavity = 4};
  auto occupancy = [&](double kappa) {
    CoolingSpec s = base;
    s.kappa = kappa;
    auto model = build_sideband_cooling(s);
    auto n_mot = embed(build_number(s.cutoff_motion, motion_label),
                       motion_label, model.space());
    return expectation(n_mot, steady_state(model)).real();
  };
  const double n_full = occupancy(base.kappa);
  const double n_quarter = occupancy(base.kappa / 4.0);
  const double ratio = n_full / n_quarter;
  // 4x kappa reduction -> ~16x occupancy reduction, within a factor 2
  CHECK(ratio > 8.0);
  CHECK(ratio < 32.0);
}

TEST_CASE("sideband cooling: zero drive leaves the motion untouched") {
  CoolingSpec spec{.nu_t = 1.0,
                   .eta = 0.0,
                   .kappa = 0.3,
                   .detuning = -1.0,
                   .n_init = 1.5,
                   .cutoff_motion = 5,
                   .cutoff_cavity = 3};
  auto model = build_sideband_cooling(spec);
  auto rho0 = cooling_initial_state(spec);
  auto n_mot = embed(build_number(spec.cutoff_motion, motion_label),
                     motion_label, model.space());
  auto res = evolve_lindblad(model, rho0, {0.0, 2.0, 5.0},
                             {.observables = {{"n", n_mot}}});
  for (auto v : res.expectations.at("n"))
    CHECK(std::abs(v.real() - expectation(n_mot, rho0).real()) < 1e-8);
}

TEST_CASE("sideband cooling steady state agrees with long-time evolution") {
  // Faster mediator so the transient dies quickly.
  CoolingSpec spec{.nu_t = 1.0,
                   .eta = 1.2,
                   .kappa = 0.35,
                   .detuning = -1.0,
                   .n_init = 0.0,
                   .cutoff_motion = 4,
                   .cutoff_cavity = 3,
                   .rotor_detuning = 20.0,
                   .rotor_cavity_coupling = 1.0};
  auto model = build_sideband_cooling(spec);
  auto rho_ss = steady_state(model);

  auto rho0 = cooling_initial_state(spec);
  std::vector<double> times;
  for (int i = 0; i <= 10; ++i) times.push_back(40.0 * i);
  auto res = evolve_lindblad(model, rho0, times, {.store_snapshots = true});
  const auto& rho_end = res.density_snapshots->back();
  CHECK(max_abs(rho_end.matrix() - rho_ss.matrix()) < 1e-6);
}

TEST_CASE("cooling monotonicity after the initial transient") {
  CoolingSpec spec{.nu_t = 1.0,
                   .eta = 1.2,
                   .kappa = 0.35,
                   .detuning = -1.0,
                   .n_init = 1.0,
                   .cutoff_motion = 5,
                   .cutoff_cavity = 3,
                   .rotor_detuning = 20.0,
                   .rotor_cavity_coupling = 1.0};
  auto model = build_sideband_cooling(spec);
  auto rho0 = cooling_initial_state(spec);
  auto n_mot = embed(build_number(spec.cutoff_motion, motion_label),
                     motion_label, model.space());
  // sample on a coarse grid aligned with the slow cooling envelope
  std::vector<double> times;
  for (int i = 0; i <= 20; ++i) times.push_back(10.0 * i);
  auto res = evolve_lindblad(model, rho0, times,
                             {.observables = {{"n", n_mot}}});
  const auto& trace = res.expectations.at("n");
  for (std::size_t i = 2; i < trace.size(); ++i)
    CHECK(trace[i].real() <= trace[i - 1].real() + 1e-3);
}

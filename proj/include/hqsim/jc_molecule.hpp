#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "hqsim/evolve.hpp"
#include "hqsim/lindblad.hpp"
#include "hqsim/operator.hpp"
#include "hqsim/space.hpp"

namespace hqsim::jc {

/// Rigid rotor restricted to the two-level subspace {|N>, |N+1>} of the
/// spectrum E_N = B N (N+1).
struct RotorSpec {
  double rotational_constant = 0.0;  // B, angular frequency
  int lower_level = 0;               // N of the lower state
};

struct RotorTransition {
  double e_rot = 0.0;       // (E_{N+1} - E_N) / 2
  double transition = 0.0;  // E_{N+1} - E_N = 2 B (N+1)
  double anharmonicity = 0.0;  // transition(N+1) - transition(N) = 2B
};

inline RotorTransition rotor_transition(const RotorSpec& spec) {
  if (spec.rotational_constant <= 0)
    throw InvalidArgument("rotational constant must be positive");
  if (spec.lower_level < 0)
    throw InvalidArgument("lower rotor level must be >= 0");
  const double b = spec.rotational_constant;
  const double n = double(spec.lower_level);
  RotorTransition out;
  out.transition = 2.0 * b * (n + 1.0);
  out.e_rot = out.transition / 2.0;
  out.anharmonicity = 2.0 * b;
  return out;
}

/// Stripline cavity + two-level rotor subspace.
/// H = omega_c c^+c + E_rot sigma_z + g (sigma_+ c + sigma_- c^+),
/// collapse sqrt(kappa) c. The transition energy is 2 E_rot.
struct JcSpec {
  double omega_c = 0.0;
  double e_rot = 0.0;
  double g = 0.0;
  double kappa = 0.0;
  int cutoff = 2;
};

inline constexpr const char* cavity_label = "cav";
inline constexpr const char* rotor_label = "rotor";

inline LindbladModel build_jc(const JcSpec& spec) {
  if (spec.cutoff < 2) throw InvalidArgument("cavity cutoff must be >= 2");
  if (spec.g < 0 || spec.kappa < 0)
    throw InvalidArgument("couplings and rates must be non-negative");
  CompositeSpace space({ModeSpec::spin_half(rotor_label),
                        ModeSpec::boson(cavity_label, spec.cutoff)});
  auto c = embed(build_annihilation(spec.cutoff, cavity_label), cavity_label,
                 space);
  auto sz = embed(sigma_z(rotor_label), rotor_label, space);
  auto sp = embed(sigma_plus(rotor_label), rotor_label, space);
  auto sm = embed(sigma_minus(rotor_label), rotor_label, space);

  Operator H = spec.omega_c * (c.adjoint() * c) + spec.e_rot * sz +
               spec.g * (sp * c + sm * c.adjoint());
  return LindbladModel(H, {{c, spec.kappa}});
}

inline double quality_factor(double omega_c, double kappa) {
  if (kappa <= 0) throw InvalidArgument("kappa must be positive for Q");
  return omega_c / kappa;
}

/// N identical two-level systems coupled to one cavity mode with equal g.
/// In the resonant single-excitation sector the bright-state splitting is
/// 2 g sqrt(N).
inline LindbladModel build_tavis_cummings(int n_spins, double g,
                                          double omega_c, double e_rot,
                                          int cutoff = 2,
                                          double kappa = 0.0) {
  if (n_spins < 1 || n_spins > 8)
    throw InvalidArgument("tavis-cummings supports 1..8 spins, got " +
                          std::to_string(n_spins));
  if (cutoff < 2) throw InvalidArgument("cavity cutoff must be >= 2");
  std::vector<ModeSpec> modes;
  for (int i = 1; i <= n_spins; ++i)
    modes.push_back(ModeSpec::spin_half("spin" + std::to_string(i)));
  modes.push_back(ModeSpec::boson(cavity_label, cutoff));
  CompositeSpace space(modes);

  auto c = embed(build_annihilation(cutoff, cavity_label), cavity_label,
                 space);
  Operator H = omega_c * (c.adjoint() * c);
  for (int i = 1; i <= n_spins; ++i) {
    const std::string label = "spin" + std::to_string(i);
    H = H + e_rot * embed(sigma_z(label), label, space) +
        g * (embed(sigma_plus(label), label, space) * c +
             embed(sigma_minus(label), label, space) * c.adjoint());
  }
  return LindbladModel(H, {{c, kappa}});
}

/// Bosonized large-N ensemble: the highly polarized collective excitation
/// is approximated by a harmonic oscillator at the transition frequency
/// 2 E_rot, coupled at the collectively enhanced rate g sqrt(N).
inline LindbladModel build_bosonized_ensemble(double n_molecules, double g,
                                              double omega_c, double e_rot,
                                              int cutoff_cav = 3,
                                              int cutoff_ens = 3,
                                              double kappa = 0.0) {
  if (n_molecules < 1) throw InvalidArgument("ensemble size must be >= 1");
  CompositeSpace space({ModeSpec::boson("ens", cutoff_ens),
                        ModeSpec::boson(cavity_label, cutoff_cav)});
  auto b = embed(build_annihilation(cutoff_ens, "ens"), "ens", space);
  auto c = embed(build_annihilation(cutoff_cav, cavity_label), cavity_label,
                 space);
  const double g_coll = g * std::sqrt(n_molecules);
  Operator H = omega_c * (c.adjoint() * c) +
               2.0 * e_rot * (b.adjoint() * b) +
               g_coll * (b.adjoint() * c + b * c.adjoint());
  return LindbladModel(H, {{c, kappa}});
}

/// Cavity-assisted sideband cooling of the trapped molecule's motion.
///
/// Reconstruction (the source gives no explicit cooling Hamiltonian): a
/// microwave drive with spatial gradient flips the rotor while displacing
/// the motion (coupling eta); the rotor is far detuned and acts as a
/// virtual Raman mediator into the cavity, whose decay kappa is the
/// entropy sink. In the frame rotating at the drive frequency,
///
///   H = nu_t b^+b + Dq sigma_+sigma_- + Dc c^+c
///       + eta (b + b^+)(sigma_+ + sigma_-) + g_rc (sigma_+ c + sigma_- c^+)
///
/// with Dc = -detuning and Dq = Dc + rotor_detuning. The two-photon
/// (drive + phonon -> cavity photon) resonance sits at detuning = -nu_t,
/// which is the red-sideband cooling condition; the resolved-sideband
/// steady occupancy scales as (kappa / 4 nu_t)^2.
struct CoolingSpec {
  double nu_t = 1.0;      // trap frequency
  double eta = 0.0;       // gradient drive coupling motion <-> rotor
  double kappa = 0.1;     // cavity decay
  double detuning = 0.0;  // drive-cavity detuning (red sideband: -nu_t)
  double n_init = 0.0;    // initial thermal occupancy of the motion
  int cutoff_motion = 6;
  int cutoff_cavity = 4;
  // 0 = auto: rotor_detuning 60 nu_t, rotor_cavity_coupling 0.35 nu_t.
  double rotor_detuning = 0.0;
  double rotor_cavity_coupling = 0.0;
};

inline constexpr const char* motion_label = "mot";

inline LindbladModel build_sideband_cooling(const CoolingSpec& spec) {
  if (spec.nu_t <= 0) throw InvalidArgument("trap frequency must be positive");
  if (spec.kappa <= 0) throw InvalidArgument("kappa must be positive");
  if (spec.n_init < 0) throw InvalidArgument("n_init must be >= 0");

  const double rotor_det =
      spec.rotor_detuning != 0 ? spec.rotor_detuning : 60.0 * spec.nu_t;
  const double g_rc = spec.rotor_cavity_coupling != 0
                          ? spec.rotor_cavity_coupling
                          : 0.35 * spec.nu_t;

  CompositeSpace space({ModeSpec::boson(motion_label, spec.cutoff_motion),
                        ModeSpec::spin_half(rotor_label),
                        ModeSpec::boson(cavity_label, spec.cutoff_cavity)});
  auto b = embed(build_annihilation(spec.cutoff_motion, motion_label),
                 motion_label, space);
  auto c = embed(build_annihilation(spec.cutoff_cavity, cavity_label),
                 cavity_label, space);
  auto sp = embed(sigma_plus(rotor_label), rotor_label, space);
  auto sm = embed(sigma_minus(rotor_label), rotor_label, space);

  const double delta_c = -spec.detuning;
  const double delta_q = delta_c + rotor_det;

  Operator H = spec.nu_t * (b.adjoint() * b) + delta_q * (sp * sm) +
               delta_c * (c.adjoint() * c) +
               spec.eta * ((b + b.adjoint()) * (sp + sm)) +
               g_rc * (sp * c + sm * c.adjoint());
  return LindbladModel(H, {{c, spec.kappa}});
}

/// Initial state for cooling runs: truncated thermal motion, rotor ground,
/// cavity vacuum.
inline DensityMatrix cooling_initial_state(const CoolingSpec& spec) {
  auto model = build_sideband_cooling(spec);
  const auto& space = model.space();
  Matrix ground = Matrix::Zero(2, 2);
  ground(spin_ground, spin_ground) = 1.0;
  Matrix vac = Matrix::Zero(spec.cutoff_cavity, spec.cutoff_cavity);
  vac(0, 0) = 1.0;
  return product_state(
      space, {{motion_label, thermal_populations(spec.cutoff_motion,
                                                 spec.n_init)},
              {rotor_label, ground},
              {cavity_label, vac}});
}

}  // namespace hqsim::jc

// Copyright (c) 2026 The fluxqp Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef FLUXQP_CONSTANTS_HPP
#define FLUXQP_CONSTANTS_HPP

#include <cmath>

namespace fluxqp::constants {

// 2018 CODATA / SI exact values.
inline constexpr double pi = 3.14159265358979323846;
inline constexpr double planck_h = 6.62607015e-34;        // J s (exact)
inline constexpr double hbar = planck_h / (2.0 * pi);     // J s
inline constexpr double elementary_charge = 1.602176634e-19;  // C (exact)
inline constexpr double boltzmann_k = 1.380649e-23;       // J/K (exact)
inline constexpr double flux_quantum = planck_h / (2.0 * elementary_charge);  // Wb
inline constexpr double reduced_flux_quantum = flux_quantum / (2.0 * pi);     // Wb

// Frequency <-> energy conversions. All library energies are stored in GHz
// (i.e., E/h with h factored out), so these appear only at physical
// boundaries such as thermal factors and zero-point current amplitudes.
inline constexpr double ghz_to_joule(double f_ghz) { return f_ghz * 1e9 * planck_h; }
inline constexpr double joule_to_ghz(double e_j) { return e_j / (1e9 * planck_h); }

// Thermal energy expressed as a frequency, k_B T / h in GHz.
inline constexpr double thermal_ghz(double temperature_k) {
  return boltzmann_k * temperature_k / (1e9 * planck_h);
}

// Inductive energy of a linear inductor, E_L = (Phi_0 / 2 pi)^2 / (2 L),
// returned as a frequency E_L / h in GHz; L is given in nanohenry.
inline double inductive_energy_ghz(double l_nh) {
  const double l = l_nh * 1e-9;
  return reduced_flux_quantum * reduced_flux_quantum / (2.0 * l) / (1e9 * planck_h);
}

// Zero-point current fluctuation of an LC resonator with angular frequency
// omega = 2 pi f and inductance L: I_zpf = sqrt(hbar omega / (2 L)), in nA.
inline double zero_point_current_na(double f_ghz, double l_nh) {
  const double omega = 2.0 * pi * f_ghz * 1e9;
  const double l = l_nh * 1e-9;
  return std::sqrt(hbar * omega / (2.0 * l)) * 1e9;
}

}  // namespace fluxqp::constants

#endif  // FLUXQP_CONSTANTS_HPP

// Copyright (c) 2026 The fluxqp Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Phenomenological quantum Rabi model of the qubit-resonator system:
// H = (eps sigma_z + Delta sigma_x)/2 + omega_r (a^dag a + 1/2)
//     + g sigma_z (a + a^dag),
// all parameters as frequencies (GHz). In the ultrastrong regime
// (g/omega_r ~ 0.5 here) no rotating-wave approximation is made; the model
// is diagonalized exactly in a truncated Fock space.

#ifndef FLUXQP_RABI_HPP
#define FLUXQP_RABI_HPP

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace fluxqp::rabi {

struct RabiParams {
  double epsilon_ghz = 0.0;   // flux-bias energy eps/2pi
  double delta_ghz = 0.863;   // qubit gap Delta/2pi
  double omega_r_ghz = 4.462; // resonator frequency omega_r/2pi
  double g_ghz = 2.225;       // coupling g/2pi
  int n_fock = 16;            // initial Fock cutoff (auto-doubled to converge)

  void validate() const;  // throws ConfigError on invalid values
};

struct RabiSolution {
  Eigen::VectorXd energies_ghz;  // all 2*n_fock_used levels, ascending
  Eigen::MatrixXd states;        // columns, |spin> x |n> basis (spin slowest)
  int n_fock_used = 0;           // cutoff at which convergence was declared
};

// Dense Rabi Hamiltonian at a fixed Fock cutoff (real symmetric).
Eigen::MatrixXd assemble_rabi_hamiltonian(const RabiParams& params, int n_fock);

// Diagonalize with automatic Fock-cutoff doubling until the lowest four
// levels move by less than tol_ghz (default 1 kHz). Throws ConvergenceError
// if the cutoff cap is exceeded.
RabiSolution rabi_eigs(const RabiParams& params, double tol_ghz = 1e-6,
                       int n_fock_cap = 1024);

struct BranchCurve {
  std::string id;                  // e.g. "w10", "w20", "w31"
  std::vector<double> epsilon_ghz; // strictly increasing
  std::vector<double> freq_ghz;
};

// Transition branches w_ij(eps) over an epsilon grid. Levels are followed by
// adiabatic continuation (maximum-overlap assignment between neighboring
// grid points), not by sorted order, so branches stay smooth through avoided
// crossings. Default pairs (0,1), (0,2), (1,3) give w10, w20, w31.
std::vector<BranchCurve> rabi_branches(
    const RabiParams& params, const std::vector<double>& epsilon_grid,
    const std::vector<std::pair<int, int>>& pairs = {{0, 1}, {0, 2}, {1, 3}});

// Two branch families sharing (omega_r, g) but differing in Delta: the two
// charge-parity states of the device seen in single-tone spectra. The split
// channel is |w20_first - w20_second| on the shared epsilon grid.
struct TwoDeltaSpectrum {
  std::vector<BranchCurve> first;   // branches at params.delta_ghz
  std::vector<BranchCurve> second;  // branches at delta_second_ghz
  std::vector<double> epsilon_ghz;
  std::vector<double> split_w20_ghz;
};
TwoDeltaSpectrum two_delta_spectrum(const RabiParams& params,
                                    double delta_second_ghz,
                                    const std::vector<double>& epsilon_grid);

}  // namespace fluxqp::rabi

#endif  // FLUXQP_RABI_HPP

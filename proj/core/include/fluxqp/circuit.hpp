// Copyright (c) 2026 The fluxqp Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Circuit model of a four-junction flux qubit galvanically coupled to an LC
// resonator. The ring has junction-area ratios beta, u, v=1, alpha on edges
// (4-1), (1-2), (2-3), (3-4); node 4 is the phase reference. Node 1 carries
// the inductive shunt of the resonator and is treated in a truncated
// harmonic basis; nodes 2 and 3 are superconducting islands treated in the
// Cooper-pair charge basis. All energies are stored as frequencies (GHz,
// i.e. E/h), charges in units of e, and flux as the reduced bias
// phi = Phi_ext/Phi_0 (so phi = 0.5 is the half-flux sweet spot).

#ifndef FLUXQP_CIRCUIT_HPP
#define FLUXQP_CIRCUIT_HPP

#include <array>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace fluxqp::circuit {

struct CircuitParams {
  double e_j_ghz = 124.0;  // Josephson energy of the reference (v) junction
  double e_c_ghz = 4.02;   // single-electron charging energy e^2/2C_J
  double alpha = 0.76;     // alpha-junction area ratio (edge 3-4)
  double beta = 2.02;      // beta-junction area ratio (edge 4-1)
  double u = 0.90;         // u-junction area ratio (edge 1-2)
  std::array<double, 3> eta = {0.12, 0.12, 0.12};  // gate-capacitance ratios C_gi/C_J
  double omega_r_ghz = 4.68;  // bare resonator frequency omega_r/2pi
  double l_r_nh = 6.84;       // resonator inductance
  double temperature_k = 0.05;  // bath temperature for quasiparticle rates
  // Per-island superconducting gaps (as frequencies, GHz). Only differences
  // enter tunneling energetics. Defaults give islands 2 and 3 a 1 GHz
  // difference with gap(3) > gap(2).
  std::array<double, 4> delta_sp_ghz = {50.0, 49.0, 50.0, 49.0};

  // Inductive energy of the shunt, (Phi_0/2pi)^2 / (2 L_r), as GHz.
  double e_lr_ghz() const;
  // Zero-point fluctuation current of the resonator, sqrt(hbar omega_r / 2 L_r), nA.
  double i_zpf_na() const;
  // Derived resonator capacitance 1/(omega_r^2 L_r), F.
  double c_r_farad() const;
  // Qubit-resonator coupling energy per unit node-1 phase,
  // I_zpf * (Phi_0/2pi) / h, in GHz.
  double coupling_ghz_per_phase() const;

  // Throws ConfigError on unphysical values (E_J < 0, E_c <= 0, eta < 0,
  // omega_r <= 0, L_r <= 0, T <= 0, negative gaps).
  void validate() const;
};

// Gate/offset charges of the four islands in units of e. Node 4 is the
// reference reservoir: q_e[3] is carried for parity bookkeeping but does not
// enter the Hamiltonian.
struct ChargeConfig {
  std::array<double, 4> q_e = {0.0, 0.0, 0.0, 0.0};

  // Returns a copy with one extra electron charge on the given island (1-4),
  // i.e. the parity partner of this configuration.
  ChargeConfig parity_shift(int island) const;
};

struct FluxBias {
  double phi = 0.5;  // Phi_ext / Phi_0
};

// Truncation parameters of the hierarchical diagonalization.
struct BasisSpec {
  int n_charge = 5;        // islands keep charge states -n..n (2n+1 per node)
  int n_harm = 12;         // harmonic-basis size for node 1
  int n_fock = 8;          // resonator Fock cutoff
  int n_levels_kept = 16;  // qubit levels retained when coupling to the resonator

  int charge_dim() const { return 2 * n_charge + 1; }
  int qubit_dim() const { return n_harm * charge_dim() * charge_dim(); }
  int total_dim() const { return n_levels_kept * n_fock; }
  void validate(int dimension_cap = 200000) const;  // throws ConfigError
};

struct QubitSolution {
  Eigen::VectorXd energies_ghz;  // ascending
  Eigen::MatrixXcd states;       // columns; qubit product basis
  BasisSpec basis;
};

struct TotalSolution {
  Eigen::VectorXd energies_ghz;  // ascending, all n_levels_kept * n_fock levels
  Eigen::MatrixXcd states;       // columns; (kept qubit level) x (Fock) basis
  QubitSolution qubit;           // the underlying qubit solution
};

// Normalized node-capacitance matrix M (dimensionless, units of C_J):
// M_kk = sum of junction + gate capacitance ratios attached to node k,
// M_kl = -(junction ratio between nodes k and l). Throws ConfigError if the
// result is not positive definite.
Eigen::Matrix3d build_mass_matrix(const CircuitParams& params);

// True when the qubit Hamiltonian is purely real in the chosen basis, i.e.
// when sin(2 pi phi) = 0 (integer and half-integer flux). The solver takes a
// faster real-symmetric path there.
bool has_real_representation(const FluxBias& phi);

// Qubit Hamiltonian (charging + inductive + four junction cosines) on the
// (node1 harmonic) x (node2 charge) x (node3 charge) product basis, GHz.
// Island charge offsets on the compact nodes are folded into [-0.5, 0.5)
// Cooper pairs (exact 2e relabeling); the node-1 offset is removed by a
// gauge transformation and does not affect the spectrum.
Eigen::MatrixXcd assemble_qubit_hamiltonian(const CircuitParams& params,
                                            const ChargeConfig& q_g,
                                            const FluxBias& phi,
                                            const BasisSpec& basis);
// Real-symmetric form; requires has_real_representation(phi).
Eigen::MatrixXd assemble_qubit_hamiltonian_real(const CircuitParams& params,
                                                const ChargeConfig& q_g,
                                                const FluxBias& phi,
                                                const BasisSpec& basis);

// Lowest n_levels eigenpairs of the qubit Hamiltonian.
QubitSolution solve_qubit(const CircuitParams& params, const ChargeConfig& q_g,
                          const FluxBias& phi, const BasisSpec& basis,
                          int n_levels);

// Total Hamiltonian: lowest n_levels_kept qubit eigenstates tensored with
// n_fock resonator states; resonator term omega_r (a^dag a + 1/2); coupling
// -I_zpf (Phi_0/2pi) phi_1 (a + a^dag) projected into the kept levels.
// coupling_scale multiplies the coupling term (0 gives the uncoupled
// product spectrum exactly; 1 is physical).
Eigen::MatrixXcd assemble_total_hamiltonian(const CircuitParams& params,
                                            const ChargeConfig& q_g,
                                            const FluxBias& phi,
                                            const BasisSpec& basis,
                                            double coupling_scale = 1.0);
TotalSolution solve_total(const CircuitParams& params, const ChargeConfig& q_g,
                          const FluxBias& phi, const BasisSpec& basis,
                          double coupling_scale = 1.0);

// Transition frequencies w_ij = E_j - E_i (GHz) for index pairs (i, j),
// j >= i. Throws std::out_of_range on bad indices.
std::vector<double> transition_frequencies(
    const Eigen::VectorXd& energies_ghz,
    const std::vector<std::pair<int, int>>& pairs);

// Qubit gap Delta/2pi: splitting of the two lowest qubit levels at the
// half-flux sweet spot.
double qubit_gap(const CircuitParams& params, const ChargeConfig& q_g,
                 const BasisSpec& basis);

// Ground-state energy of the qubit Hamiltonian for the six canonical parity
// configurations, referenced to the (0,0,0,0) ground energy.
struct GroundEnergyEntry {
  std::string label;     // e.g. "(0,e,0,0)"
  ChargeConfig config;
  double energy_ghz;     // ground energy relative to the neutral config
};
std::vector<GroundEnergyEntry> ground_energy_table(const CircuitParams& params,
                                                   const BasisSpec& basis);

// Gap shift dDelta_island(alpha, u) = Delta(+e on island) - Delta(neutral)
// over a grid of junction ratios. Rows follow alphas, columns follow us.
// island must be 2 or 3.
Eigen::MatrixXd split_map_vs_junctions(const CircuitParams& params,
                                       const std::vector<double>& alphas,
                                       const std::vector<double>& us,
                                       int island, const BasisSpec& basis);

// Cooper-pair box reference model H = 4 E_c (n - n_g)^2 - (E_J/2) sum |n+1><n| + h.c.
// n_g in Cooper-pair units (period 1). Returns the lowest three levels (GHz).
Eigen::Vector3d cpb_reference(double e_j_ghz, double e_c_ghz, double n_g,
                              int n_cutoff);

// Flux-to-bias-energy map of the two-level reduction: eps(phi) =
// sign(phi - 0.5) * sqrt(w10(phi)^2 - Delta^2), zero at the sweet spot.
// within_linear_regime flags |phi - 0.5| <= 0.02 where the linear form
// eps = 2 I_p Phi_0 (phi - 0.5)/h holds well.
struct EpsilonResult {
  double epsilon_ghz;
  bool within_linear_regime;
};
EpsilonResult epsilon_from_flux(const CircuitParams& params, const FluxBias& phi,
                                const BasisSpec& basis);

// Persistent current I_p (nA) from the finite-difference flux slope of the
// two-level energy far from the sweet spot: I_p = (d eps/d phi) h / (2 Phi_0).
double persistent_current_na(const CircuitParams& params, const BasisSpec& basis);

// Convergence probe: recompute w10 and w20 of the total Hamiltonian with
// every cutoff incremented by one and report the shifts. The verdict gates
// on the w20 shift (the observable all analyses depend on); both shifts are
// reported.
struct ConvergenceReport {
  double w10_ghz = 0.0;
  double w20_ghz = 0.0;
  double w10_refined_ghz = 0.0;
  double w20_refined_ghz = 0.0;
  double w10_shift_ghz = 0.0;
  double w20_shift_ghz = 0.0;
  double tolerance_ghz = 0.0;
  bool converged = false;
};
ConvergenceReport convergence_check(const CircuitParams& params,
                                    const ChargeConfig& q_g, const FluxBias& phi,
                                    const BasisSpec& basis,
                                    double tolerance_ghz = 5e-5);

}  // namespace fluxqp::circuit

#endif  // FLUXQP_CIRCUIT_HPP

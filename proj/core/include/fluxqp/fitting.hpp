// Copyright (c) 2026 The fluxqp Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Nonlinear least squares on the forward models: a bounded multi-start
// Levenberg-Marquardt core with finite-difference Jacobians, the two-stage
// Rabi fit (upper-parity branches, then the second parity's qubit gap), and
// the circuit fit against two-parity transition data with soft spectrum
// constraints.

#ifndef FLUXQP_FITTING_HPP
#define FLUXQP_FITTING_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fluxqp/circuit.hpp"
#include "fluxqp/rabi.hpp"

namespace fluxqp::fitting {

using ResidualFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct LmOptions {
  int max_iterations = 200;
  double lambda_init = 1e-3;
  double lambda_up = 5.0;
  double lambda_down = 0.3;
  double ftol = 1e-12;  // relative cost decrease
  double xtol = 1e-10;  // relative step size
  int multi_start = 1;
  double start_spread = 0.05;  // relative perturbation of extra starts
  std::uint64_t seed = 12345;
};

struct FitResult {
  Eigen::VectorXd parameters;
  double final_cost = 0.0;     // 0.5 * sum of squared residuals
  double residual_rms = 0.0;
  bool converged = false;
  int iterations = 0;
  int best_start = 0;
  Eigen::MatrixXd covariance;  // scaled inverse Gauss-Newton Hessian
};

// Levenberg-Marquardt with box bounds (trial steps are projected onto the
// bounds) and forward-difference Jacobians. Accepted iterations decrease the
// cost monotonically. multi_start > 1 restarts from perturbed initial
// points; the best final cost wins, ties keep the lowest start index.
FitResult lm_fit(const ResidualFn& residuals, const Eigen::VectorXd& x0,
                 const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                 const LmOptions& options = {});

// --- Rabi model fit --------------------------------------------------------

// Branch observations: branch is one of "w10", "w20_upper", "w20_lower",
// "w31" ("w20" and "w20_second" are accepted as synonyms of the upper and
// lower split branch); bias is the detuning axis (epsilon when the bias map
// is identity).
struct RabiFitData {
  std::vector<std::string> branch;
  std::vector<double> bias;
  std::vector<double> freq_ghz;
  std::vector<double> weight;  // empty selects unit weights
};

struct RabiFitOptions {
  bool fit_bias_map = false;  // epsilon = scale * bias + offset
  LmOptions lm;
};

struct RabiFitResult {
  rabi::RabiParams params;     // delta is the upper-parity qubit gap
  double delta_second_ghz = 0.0;  // lower-parity qubit gap
  double bias_scale = 1.0;
  double bias_offset = 0.0;
  FitResult stage1;            // (delta, g, omega_r [, bias map])
  FitResult stage2;            // delta_second on w20_lower
};

// Stage 1 fits (delta, g, omega_r) [plus the bias map if enabled] on the w10,
// w20_upper and w31 branches; stage 2 fits only the second qubit gap on
// w20_lower with everything else frozen. Without w20_lower data the second
// gap equals the first.
RabiFitResult fit_rabi_two_delta(const RabiFitData& data,
                                 const rabi::RabiParams& init,
                                 double delta_second_init,
                                 const RabiFitOptions& options = {});

// --- Circuit model fit -----------------------------------------------------

struct CircuitFitData {
  std::vector<double> phi;       // flux bias per point
  std::vector<int> parity;       // 0: offset q_g2, 1: offset q_g2 + 1e
  std::vector<double> freq_ghz;  // observed 0 -> 2 transition
  std::vector<double> weight;    // empty selects unit weights
};

// Soft constraints appended as plain residuals (GHz), so a 1 MHz violation
// costs the same as a 1 MHz data residual at unit weight.
struct CircuitConstraint {
  bool enabled = false;
  double phi_probe = 0.5;
  double f_mid_target_ghz = 0.0;   // mean of the two parity branches
  double split_target_ghz = 0.0;   // |difference| of the two parity branches
  double weight_mid = 1.0;
  double weight_split = 1.0;
};

struct CircuitFitOptions {
  // Any subset of {"e_j_ghz","e_c_ghz","omega_r_ghz","l_r_nh","alpha",
  // "beta","u","eta","q_g2"}; "eta" varies all three node loadings together.
  std::vector<std::string> free_parameters = {
      "e_j_ghz", "e_c_ghz", "omega_r_ghz", "l_r_nh", "alpha",
      "beta",    "u",       "eta",         "q_g2"};
  circuit::BasisSpec basis;
  CircuitConstraint constraint;
  LmOptions lm;
};

struct CircuitFitResult {
  circuit::CircuitParams params;
  double q_g2_e = 0.0;
  FitResult fit;
};

// Fit the circuit parameters to two-parity transition data; each model
// evaluation solves the coupled system at every unique (parity, flux)
// pair. Bounds keep junction ratios and energies positive.
CircuitFitResult fit_circuit_two_parity(const CircuitFitData& data,
                                        const circuit::CircuitParams& init,
                                        double q_g2_init,
                                        const CircuitFitOptions& options);

}  // namespace fluxqp::fitting

#endif  // FLUXQP_FITTING_HPP

// Copyright (c) 2026 The fluxqp Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Reference diagonalization of the quantum Rabi Hamiltonian, written
// independently of the library: explicit Kronecker products in the
// qubit (x) oscillator ordering at a fixed large Fock cutoff, solved with
// Eigen's dense symmetric eigensolver. Used as an oracle in the tests.

#ifndef FLUXQP_TESTS_RABI_ORACLE_HPP
#define FLUXQP_TESTS_RABI_ORACLE_HPP

#include <cmath>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

namespace fluxqp::testutil {

inline Eigen::VectorXd rabi_oracle_energies(double eps_ghz, double delta_ghz,
                                            double omega_r_ghz, double g_ghz,
                                            int n_fock = 256) {
  Eigen::Matrix2d sz;
  sz << 1.0, 0.0, 0.0, -1.0;
  Eigen::Matrix2d sx;
  sx << 0.0, 1.0, 1.0, 0.0;
  const Eigen::Matrix2d qubit = 0.5 * (eps_ghz * sz + delta_ghz * sx);

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_fock, n_fock);
  for (int n = 1; n < n_fock; ++n) a(n - 1, n) = std::sqrt(double(n));
  const Eigen::MatrixXd x = a + a.transpose();
  Eigen::MatrixXd number = Eigen::MatrixXd::Zero(n_fock, n_fock);
  for (int n = 0; n < n_fock; ++n) number(n, n) = n + 0.5;

  const Eigen::MatrixXd i_osc = Eigen::MatrixXd::Identity(n_fock, n_fock);
  const Eigen::Matrix2d i_qubit = Eigen::Matrix2d::Identity();
  const Eigen::MatrixXd h =
      Eigen::kroneckerProduct(qubit, i_osc).eval() +
      Eigen::kroneckerProduct(i_qubit, (omega_r_ghz * number).eval()).eval() +
      Eigen::kroneckerProduct((g_ghz * sz).eval(), x).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h,
                                                        Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

}  // namespace fluxqp::testutil

#endif  // FLUXQP_TESTS_RABI_ORACLE_HPP

// Copyright (c) 2026 The fluxqp Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef FLUXQP_LINALG_HPP
#define FLUXQP_LINALG_HPP

#include <Eigen/Dense>

namespace fluxqp::linalg {

struct SymEigs {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // column i pairs with values[i]
};

struct HermEigs {
  Eigen::VectorXd values;    // ascending
  Eigen::MatrixXcd vectors;  // column i pairs with values[i]
};

// Lowest-k eigenpairs of a real symmetric / complex Hermitian matrix.
// Backed by LAPACK's RRR solvers (dsyevr/zheevr) when available, otherwise
// by Eigen's SelfAdjointEigenSolver. Eigenvector phases are normalized so
// the largest-magnitude component of each vector is real and positive,
// making results reproducible across backends.
SymEigs sym_eigs_lowest(const Eigen::MatrixXd& a, int k);
HermEigs herm_eigs_lowest(const Eigen::MatrixXcd& a, int k);

// All eigenvalues (no vectors), ascending.
Eigen::VectorXd sym_eigenvalues(const Eigen::MatrixXd& a);

// Largest deviation from Hermiticity, max_ij |A_ij - conj(A_ji)|.
double hermiticity_error(const Eigen::MatrixXcd& a);
double symmetry_error(const Eigen::MatrixXd& a);

}  // namespace fluxqp::linalg

#endif  // FLUXQP_LINALG_HPP

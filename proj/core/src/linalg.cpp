// Copyright (c) 2026 The fluxqp Authors.
// SPDX-License-Identifier: Apache-2.0

#include "fluxqp/linalg.hpp"

#include <algorithm>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "fluxqp/errors.hpp"

#if FLUXQP_HAVE_LAPACKE
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>
#endif

namespace fluxqp::linalg {

namespace {

// Rotate each column's phase so its largest-magnitude entry is real and
// positive. LAPACK and Eigen return eigenvectors with arbitrary sign/phase;
// this pins a unique representative.
void normalize_phases(Eigen::MatrixXd& v) {
  for (Eigen::Index j = 0; j < v.cols(); ++j) {
    Eigen::Index imax = 0;
    v.col(j).cwiseAbs().maxCoeff(&imax);
    if (v(imax, j) < 0.0) v.col(j) = -v.col(j);
  }
}

void normalize_phases(Eigen::MatrixXcd& v) {
  for (Eigen::Index j = 0; j < v.cols(); ++j) {
    Eigen::Index imax = 0;
    v.col(j).cwiseAbs().maxCoeff(&imax);
    const std::complex<double> z = v(imax, j);
    const double mag = std::abs(z);
    if (mag > 0.0) v.col(j) *= std::conj(z) / mag;
  }
}

void check_square(Eigen::Index rows, Eigen::Index cols, int k) {
  if (rows != cols) throw std::invalid_argument("eigensolver: matrix must be square");
  if (k < 1 || k > rows) {
    throw std::invalid_argument("eigensolver: requested " + std::to_string(k) +
                                " eigenpairs of a " + std::to_string(rows) +
                                "-dimensional matrix");
  }
}

}  // namespace

SymEigs sym_eigs_lowest(const Eigen::MatrixXd& a, int k) {
  check_square(a.rows(), a.cols(), k);
  const int n = static_cast<int>(a.rows());
  SymEigs out;
#if FLUXQP_HAVE_LAPACKE
  Eigen::MatrixXd work = a;  // dsyevr destroys its input
  out.values.resize(k);
  out.vectors.resize(n, k);
  std::vector<lapack_int> isuppz(2 * std::max(1, k));
  lapack_int m = 0;
  const double abstol = 2.0 * LAPACKE_dlamch('S');
  const lapack_int info = LAPACKE_dsyevr(
      LAPACK_COL_MAJOR, 'V', 'I', 'U', n, work.data(), n, 0.0, 0.0, 1, k,
      abstol, &m, out.values.data(), out.vectors.data(), n, isuppz.data());
  if (info != 0 || m != k) {
    throw ConvergenceError("dsyevr failed (info=" + std::to_string(info) + ")");
  }
#else
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  if (es.info() != Eigen::Success) throw ConvergenceError("symmetric eigensolver failed");
  out.values = es.eigenvalues().head(k);
  out.vectors = es.eigenvectors().leftCols(k);
#endif
  normalize_phases(out.vectors);
  return out;
}

HermEigs herm_eigs_lowest(const Eigen::MatrixXcd& a, int k) {
  check_square(a.rows(), a.cols(), k);
  const int n = static_cast<int>(a.rows());
  HermEigs out;
#if FLUXQP_HAVE_LAPACKE
  Eigen::MatrixXcd work = a;  // zheevr destroys its input
  out.values.resize(k);
  out.vectors.resize(n, k);
  std::vector<lapack_int> isuppz(2 * std::max(1, k));
  lapack_int m = 0;
  const double abstol = 2.0 * LAPACKE_dlamch('S');
  const lapack_int info = LAPACKE_zheevr(
      LAPACK_COL_MAJOR, 'V', 'I', 'U', n, work.data(), n, 0.0, 0.0, 1, k,
      abstol, &m, out.values.data(), out.vectors.data(), n, isuppz.data());
  if (info != 0 || m != k) {
    throw ConvergenceError("zheevr failed (info=" + std::to_string(info) + ")");
  }
#else
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a);
  if (es.info() != Eigen::Success) throw ConvergenceError("Hermitian eigensolver failed");
  out.values = es.eigenvalues().head(k);
  out.vectors = es.eigenvectors().leftCols(k);
#endif
  normalize_phases(out.vectors);
  return out;
}

Eigen::VectorXd sym_eigenvalues(const Eigen::MatrixXd& a) {
  check_square(a.rows(), a.cols(), 1);
#if FLUXQP_HAVE_LAPACKE
  Eigen::MatrixXd work = a;
  Eigen::VectorXd w(a.rows());
  const lapack_int info =
      LAPACKE_dsyev(LAPACK_COL_MAJOR, 'N', 'U', static_cast<int>(a.rows()),
                    work.data(), static_cast<int>(a.rows()), w.data());
  if (info != 0) throw ConvergenceError("dsyev failed (info=" + std::to_string(info) + ")");
  return w;
#else
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw ConvergenceError("symmetric eigensolver failed");
  return es.eigenvalues();
#endif
}

double hermiticity_error(const Eigen::MatrixXcd& a) {
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

double symmetry_error(const Eigen::MatrixXd& a) {
  return (a - a.transpose()).cwiseAbs().maxCoeff();
}

}  // namespace fluxqp::linalg

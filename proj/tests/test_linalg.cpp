// Copyright (c) 2026 The fluxqp Authors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "fluxqp/linalg.hpp"
#include "fluxqp/rng.hpp"

using fluxqp::linalg::herm_eigs_lowest;
using fluxqp::linalg::hermiticity_error;
using fluxqp::linalg::sym_eigenvalues;
using fluxqp::linalg::sym_eigs_lowest;
using fluxqp::linalg::symmetry_error;

TEST_SUITE("linalg") {

TEST_CASE("tridiagonal spectrum matches the closed form") {
  // Eigenvalues of the 3x3 discrete Laplacian are 2 - sqrt(2), 2, 2 + sqrt(2).
  Eigen::MatrixXd a(3, 3);
  a << 2, -1, 0, -1, 2, -1, 0, -1, 2;
  const auto es = sym_eigs_lowest(a, 3);
  CHECK(es.values(0) == doctest::Approx(2.0 - std::sqrt(2.0)).epsilon(1e-12));
  CHECK(es.values(1) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(es.values(2) == doctest::Approx(2.0 + std::sqrt(2.0)).epsilon(1e-12));
  for (int i = 0; i < 3; ++i) {
    CHECK((a * es.vectors.col(i) - es.values(i) * es.vectors.col(i)).norm() <
          1e-10);
  }
}

TEST_CASE("hermitian 2x2 with known eigenvalues") {
  Eigen::MatrixXcd a(2, 2);
  const std::complex<double> i(0.0, 1.0);
  a << 1.0, i, -i, 1.0;  // eigenvalues 0 and 2
  const auto es = herm_eigs_lowest(a, 2);
  CHECK(es.values(0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(es.values(1) == doctest::Approx(2.0).epsilon(1e-12));
  for (int k = 0; k < 2; ++k) {
    CHECK((a * es.vectors.col(k) - es.values(k) * es.vectors.col(k)).norm() <
          1e-10);
  }
}

TEST_CASE("lowest-k subset agrees with the full spectrum") {
  fluxqp::Rng rng(31);
  Eigen::MatrixXd m(20, 20);
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 20; ++j) m(i, j) = rng.normal();
  const Eigen::MatrixXd a = 0.5 * (m + m.transpose());
  const Eigen::VectorXd all = sym_eigenvalues(a);
  const auto low = sym_eigs_lowest(a, 5);
  for (int i = 0; i < 5; ++i) {
    CHECK(low.values(i) == doctest::Approx(all(i)).epsilon(1e-12));
  }
  for (int i = 1; i < 20; ++i) CHECK(all(i) >= all(i - 1));
  // Orthonormality and residuals of the subset solve.
  CHECK((low.vectors.transpose() * low.vectors -
         Eigen::MatrixXd::Identity(5, 5))
            .norm() < 1e-10);
  for (int i = 0; i < 5; ++i) {
    CHECK((a * low.vectors.col(i) - low.values(i) * low.vectors.col(i)).norm() <
          1e-9);
  }
}

TEST_CASE("eigenvector phases are pinned for reproducibility") {
  fluxqp::Rng rng(47);
  Eigen::MatrixXcd m(8, 8);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j)
      m(i, j) = std::complex<double>(rng.normal(), rng.normal());
  const Eigen::MatrixXcd a = 0.5 * (m + m.adjoint());
  const auto es = herm_eigs_lowest(a, 8);
  for (int k = 0; k < 8; ++k) {
    Eigen::Index imax = 0;
    es.vectors.col(k).cwiseAbs().maxCoeff(&imax);
    const std::complex<double> top = es.vectors(imax, k);
    CHECK(top.real() > 0.0);
    CHECK(std::abs(top.imag()) < 1e-10 * std::abs(top));
  }
}

TEST_CASE("hermiticity and symmetry error measures") {
  Eigen::MatrixXcd a(2, 2);
  a << 1.0, std::complex<double>(0, 1), std::complex<double>(0, -1), 2.0;
  CHECK(hermiticity_error(a) == doctest::Approx(0.0));
  a(0, 1) += 1e-3;
  CHECK(hermiticity_error(a) == doctest::Approx(1e-3).epsilon(1e-9));

  Eigen::MatrixXd s(2, 2);
  s << 1, 2, 2, 1;
  CHECK(symmetry_error(s) == doctest::Approx(0.0));
  s(1, 0) = 2.5;
  CHECK(symmetry_error(s) == doctest::Approx(0.5).epsilon(1e-12));
}

}  // TEST_SUITE

// Copyright (c) 2026 The fluxqp Authors.
// SPDX-License-Identifier: Apache-2.0

#include "fluxqp/rabi.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fluxqp/errors.hpp"
#include "fluxqp/linalg.hpp"

namespace fluxqp::rabi {

namespace {

// Greedy maximum-overlap assignment of current eigenvectors to the branches
// tracked at the previous grid point. Branches are matched in order of their
// best overlap so crossings cannot steal an already-claimed level.
std::vector<int> assign_by_overlap(const Eigen::MatrixXd& prev,
                                   const Eigen::MatrixXd& curr) {
  const int n_tracked = static_cast<int>(prev.cols());
  const int n_avail = static_cast<int>(curr.cols());
  const Eigen::MatrixXd overlap = (prev.transpose() * curr).cwiseAbs();

  std::vector<int> assignment(n_tracked, -1);
  std::vector<bool> branch_done(n_tracked, false), level_used(n_avail, false);
  for (int step = 0; step < n_tracked; ++step) {
    int best_b = -1, best_l = -1;
    double best = -1.0;
    for (int b = 0; b < n_tracked; ++b) {
      if (branch_done[b]) continue;
      for (int l = 0; l < n_avail; ++l) {
        if (level_used[l]) continue;
        if (overlap(b, l) > best) {
          best = overlap(b, l);
          best_b = b;
          best_l = l;
        }
      }
    }
    assignment[best_b] = best_l;
    branch_done[best_b] = true;
    level_used[best_l] = true;
  }
  return assignment;
}

}  // namespace

void RabiParams::validate() const {
  const auto fail = [](const std::string& msg) { throw ConfigError("rabi params: " + msg); };
  if (!(delta_ghz > 0.0)) fail("delta_ghz must be > 0");
  if (!(omega_r_ghz > 0.0)) fail("omega_r_ghz must be > 0");
  if (!(g_ghz >= 0.0)) fail("g_ghz must be >= 0");
  if (n_fock < 4) fail("n_fock must be >= 4");
}

Eigen::MatrixXd assemble_rabi_hamiltonian(const RabiParams& params, int n_fock) {
  const int dim = 2 * n_fock;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (int s = 0; s < 2; ++s) {
    const double sz = (s == 0) ? 1.0 : -1.0;
    const int off = s * n_fock;
    for (int n = 0; n < n_fock; ++n) {
      h(off + n, off + n) =
          0.5 * params.epsilon_ghz * sz + params.omega_r_ghz * (n + 0.5);
      // sigma_x couples the spin blocks diagonally in n.
      h(off + n, (1 - s) * n_fock + n) = 0.5 * params.delta_ghz;
      // g sigma_z (a + a^dag) within each spin block.
      if (n + 1 < n_fock) {
        const double x = params.g_ghz * sz * std::sqrt(n + 1.0);
        h(off + n + 1, off + n) += x;
        h(off + n, off + n + 1) += x;
      }
    }
  }
  return h;
}

RabiSolution rabi_eigs(const RabiParams& params, double tol_ghz, int n_fock_cap) {
  params.validate();
  int nf = std::max(4, params.n_fock);
  Eigen::VectorXd coarse =
      linalg::sym_eigenvalues(assemble_rabi_hamiltonian(params, nf)).head(4);
  while (true) {
    const int nf_fine = 2 * nf;
    if (nf_fine > n_fock_cap) {
      throw ConvergenceError("rabi_eigs: Fock cutoff cap " +
                             std::to_string(n_fock_cap) +
                             " exceeded before convergence");
    }
    const Eigen::MatrixXd h = assemble_rabi_hamiltonian(params, nf_fine);
    linalg::SymEigs es = linalg::sym_eigs_lowest(h, 2 * nf_fine);
    const Eigen::VectorXd fine = es.values.head(4);
    if ((fine - coarse).cwiseAbs().maxCoeff() < tol_ghz) {
      RabiSolution sol;
      sol.energies_ghz = std::move(es.values);
      sol.states = std::move(es.vectors);
      sol.n_fock_used = nf_fine;
      return sol;
    }
    coarse = fine;
    nf = nf_fine;
  }
}

std::vector<BranchCurve> rabi_branches(
    const RabiParams& params, const std::vector<double>& epsilon_grid,
    const std::vector<std::pair<int, int>>& pairs) {
  if (epsilon_grid.empty()) return {};
  for (std::size_t k = 1; k < epsilon_grid.size(); ++k) {
    if (!(epsilon_grid[k] > epsilon_grid[k - 1])) {
      throw std::invalid_argument("rabi_branches: epsilon grid must be strictly increasing");
    }
  }
  int max_level = 0;
  for (const auto& [i, j] : pairs) {
    if (i < 0 || j < 0) throw std::out_of_range("rabi_branches: negative level index");
    max_level = std::max({max_level, i, j});
  }

  // Converge the cutoff at the extremes and center of the grid, then use one
  // fixed basis across the sweep so neighboring eigenvectors live in the
  // same space for the overlap assignment.
  int nf = 0;
  for (double eps : {epsilon_grid.front(), epsilon_grid.back(),
                     epsilon_grid[epsilon_grid.size() / 2]}) {
    RabiParams probe = params;
    probe.epsilon_ghz = eps;
    nf = std::max(nf, rabi_eigs(probe).n_fock_used);
  }
  const int n_tracked = std::min(2 * nf, max_level + 4);

  std::vector<BranchCurve> curves(pairs.size());
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    curves[p].id = "w" + std::to_string(pairs[p].second) + std::to_string(pairs[p].first);
  }

  Eigen::MatrixXd prev_states;             // tracked columns at previous point
  std::vector<double> tracked(n_tracked);  // energies by branch index
  for (double eps : epsilon_grid) {
    RabiParams pt = params;
    pt.epsilon_ghz = eps;
    const Eigen::MatrixXd h = assemble_rabi_hamiltonian(pt, nf);
    linalg::SymEigs es = linalg::sym_eigs_lowest(h, 2 * nf);

    Eigen::MatrixXd tracked_states(es.vectors.rows(), n_tracked);
    if (prev_states.size() == 0) {
      // First point: branch b is the b-th level in ascending order.
      for (int b = 0; b < n_tracked; ++b) {
        tracked[b] = es.values(b);
        tracked_states.col(b) = es.vectors.col(b);
      }
    } else {
      const std::vector<int> match = assign_by_overlap(prev_states, es.vectors);
      for (int b = 0; b < n_tracked; ++b) {
        tracked[b] = es.values(match[b]);
        tracked_states.col(b) = es.vectors.col(match[b]);
      }
    }
    prev_states = std::move(tracked_states);

    for (std::size_t p = 0; p < pairs.size(); ++p) {
      const auto& [i, j] = pairs[p];
      if (j >= n_tracked) throw std::out_of_range("rabi_branches: level index beyond tracked window");
      curves[p].epsilon_ghz.push_back(eps);
      curves[p].freq_ghz.push_back(tracked[j] - tracked[i]);
    }
  }
  return curves;
}

TwoDeltaSpectrum two_delta_spectrum(const RabiParams& params,
                                    double delta_second_ghz,
                                    const std::vector<double>& epsilon_grid) {
  if (!(delta_second_ghz > 0.0)) {
    throw ConfigError("two_delta_spectrum: delta_second_ghz must be > 0");
  }
  TwoDeltaSpectrum out;
  out.first = rabi_branches(params, epsilon_grid);
  RabiParams second = params;
  second.delta_ghz = delta_second_ghz;
  out.second = rabi_branches(second, epsilon_grid);
  out.epsilon_ghz = epsilon_grid;

  // w20 is the second default branch.
  const auto& w20_a = out.first[1].freq_ghz;
  const auto& w20_b = out.second[1].freq_ghz;
  out.split_w20_ghz.resize(epsilon_grid.size());
  for (std::size_t k = 0; k < epsilon_grid.size(); ++k) {
    out.split_w20_ghz[k] = std::abs(w20_a[k] - w20_b[k]);
  }
  return out;
}

}  // namespace fluxqp::rabi

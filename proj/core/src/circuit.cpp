// Copyright (c) 2026 The fluxqp Authors.
// SPDX-License-Identifier: Apache-2.0

#include "fluxqp/circuit.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <type_traits>
#include <utility>

#include <unsupported/Eigen/KroneckerProduct>

#include "fluxqp/constants.hpp"
#include "fluxqp/errors.hpp"
#include "fluxqp/linalg.hpp"

namespace fluxqp::circuit {

namespace {

namespace cn = fluxqp::constants;
using Eigen::Matrix3d;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using cplx = std::complex<double>;

// Fold a Cooper-pair offset into [-0.5, 0.5). Island offsets enter only
// modulo one Cooper pair (2e), so folding is an exact relabeling of the
// charge basis; it keeps the truncated window centered on the occupied
// states and makes 2e periodicity hold to rounding.
double fold_cp(double g) { return g - std::floor(g + 0.5); }

cplx ipow(Eigen::Index k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

// Phase convention for the node-1 harmonic basis: |n> -> i^n |n>. Under this
// rotation the charge operator and the e^{±i phi} shift operators become
// real matrices, so the qubit Hamiltonian is real symmetric whenever the
// flux phase factor is real (sin(2 pi phi) = 0).
MatrixXcd rotate_node1(const MatrixXcd& o) {
  MatrixXcd r(o.rows(), o.cols());
  for (Eigen::Index n = 0; n < o.cols(); ++n)
    for (Eigen::Index m = 0; m < o.rows(); ++m) r(m, n) = ipow(n - m) * o(m, n);
  return r;
}

MatrixXd real_checked(const MatrixXcd& o) {
  const double scale = 1.0 + o.real().cwiseAbs().maxCoeff();
  if (o.imag().cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw std::logic_error("node-1 operator expected to be real in rotated basis");
  }
  return o.real();
}

// Node-1 operators in the rotated harmonic basis. The oscillator is seeded
// by the diagonal charging energy A = 4 E_c (M^-1)_11 and the quadratic
// potential coefficient B = E_Lr + beta E_J / 2 (inductive term plus the
// curvature of the beta-junction cosine), giving length l = (A/B)^(1/4)
// with phi_1 = l (a + a^dag)/sqrt(2).
struct Node1Ops {
  MatrixXd q;              // charge operator (real symmetric)
  MatrixXd q_sq;           // q^2
  MatrixXd phi_sq;         // phi^2 (real symmetric)
  MatrixXd cos_phi;        // cos(phi) (real symmetric)
  MatrixXd shift_down;     // e^{-i phi} (real, non-symmetric)
  MatrixXcd phi;           // phi itself (purely imaginary entries)
};

Node1Ops make_node1_ops(double a_coef, double b_coef, int n_harm) {
  const double ell = std::pow(a_coef / b_coef, 0.25);
  MatrixXd raise = MatrixXd::Zero(n_harm, n_harm);
  for (int n = 0; n + 1 < n_harm; ++n) raise(n + 1, n) = std::sqrt(n + 1.0);

  const MatrixXd phi_u = (ell / std::sqrt(2.0)) * (raise + raise.transpose());
  MatrixXcd q_u = MatrixXcd::Zero(n_harm, n_harm);
  q_u.imag() = (raise - raise.transpose()) / (std::sqrt(2.0) * ell);

  // Trig operators as matrix functions of phi in its eigenbasis.
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(phi_u);
  const MatrixXd& v = es.eigenvectors();
  const VectorXd lam = es.eigenvalues();
  const MatrixXd cos_u =
      v * lam.array().cos().matrix().asDiagonal() * v.transpose();
  const MatrixXd sin_u =
      v * lam.array().sin().matrix().asDiagonal() * v.transpose();
  const MatrixXcd shift_u = cos_u.cast<cplx>() - cplx(0.0, 1.0) * sin_u.cast<cplx>();

  Node1Ops ops;
  ops.q = real_checked(rotate_node1(q_u));
  ops.q_sq = ops.q * ops.q;
  ops.phi_sq = real_checked(rotate_node1((phi_u * phi_u).cast<cplx>()));
  ops.cos_phi = real_checked(rotate_node1(cos_u.cast<cplx>()));
  ops.shift_down = real_checked(rotate_node1(shift_u));
  ops.phi = rotate_node1(phi_u.cast<cplx>());
  return ops;
}

// Island charge-basis operators: diagonal charge (Cooper pairs, with folded
// offset) and the e^{i phi} shift operator S+ with <n+1|S+|n> = 1.
VectorXd island_charge(int n_charge, double offset_cp) {
  const int dim = 2 * n_charge + 1;
  VectorXd n(dim);
  for (int k = 0; k < dim; ++k) n(k) = (k - n_charge) + offset_cp;
  return n;
}

MatrixXd island_raise(int n_charge) {
  const int dim = 2 * n_charge + 1;
  MatrixXd s = MatrixXd::Zero(dim, dim);
  for (int k = 0; k + 1 < dim; ++k) s(k + 1, k) = 1.0;
  return s;
}

// True when 2*phi is an integer, so the alpha-junction phase factor
// e^{i 2 pi phi} is exactly +-1 and the assembled Hamiltonian is real.
bool flux_phase_is_real(double phi) {
  return std::abs(2.0 * phi - std::round(2.0 * phi)) < 1e-12;
}

// Shared assembly of the qubit Hamiltonian on the
// (node1 harmonic) x (node2 charge) x (node3 charge) product space, for
// real (sweet-spot) and complex (generic flux) scalar types.
template <typename Mat>
Mat assemble_impl(const CircuitParams& params, const ChargeConfig& q_g,
                  const FluxBias& phi, const BasisSpec& basis) {
  params.validate();
  basis.validate();

  const Matrix3d mass = build_mass_matrix(params);
  const Matrix3d minv = mass.inverse();
  const double ej = params.e_j_ghz;
  const double ec = params.e_c_ghz;
  const double e_lr = params.e_lr_ghz();

  const int nh = basis.n_harm;
  const int nq = basis.charge_dim();
  const Node1Ops n1 = make_node1_ops(4.0 * ec * minv(0, 0),
                                     e_lr + params.beta * ej / 2.0, nh);

  // Offsets in Cooper-pair units, folded to [-0.5, 0.5). The node-1 offset
  // is removed exactly by the gauge transformation e^{i g1 phi_1} (node 1 is
  // non-compact), and q_g4 never enters (node 4 is the reference).
  const double g2 = fold_cp(q_g.q_e[1] / 2.0);
  const double g3 = fold_cp(q_g.q_e[2] / 2.0);

  const MatrixXd n2 = island_charge(basis.n_charge, g2).asDiagonal();
  const MatrixXd n3 = island_charge(basis.n_charge, g3).asDiagonal();
  const MatrixXd sp = island_raise(basis.n_charge);
  const MatrixXd sm = sp.transpose();
  const MatrixXd iq = MatrixXd::Identity(nq, nq);
  const MatrixXd ih = MatrixXd::Identity(nh, nh);

  using Eigen::kroneckerProduct;
  const auto inner = [](const MatrixXd& b, const MatrixXd& c) {
    return kroneckerProduct(b, c).eval();
  };

  Mat h = Mat::Zero(basis.qubit_dim(), basis.qubit_dim());
  const auto add = [&h](double coeff, const MatrixXd& a, const MatrixXd& bc) {
    const MatrixXd term = kroneckerProduct(a, bc);
    if constexpr (std::is_same_v<Mat, MatrixXd>) {
      h += coeff * term;
    } else {
      h += coeff * term.cast<cplx>();
    }
  };

  // Charging term 4 E_c q'^T M^-1 q' (q' includes the folded offsets).
  const MatrixXd iqq = inner(iq, iq);
  add(4.0 * ec * minv(0, 0), n1.q_sq, iqq);
  add(4.0 * ec * minv(1, 1), ih, inner(n2 * n2, iq));
  add(4.0 * ec * minv(2, 2), ih, inner(iq, n3 * n3));
  add(8.0 * ec * minv(0, 1), n1.q, inner(n2, iq));
  add(8.0 * ec * minv(0, 2), n1.q, inner(iq, n3));
  add(8.0 * ec * minv(1, 2), ih, inner(n2, n3));

  // Inductive term E_Lr phi_1^2.
  add(e_lr, n1.phi_sq, iqq);

  // Josephson potential: -E_J [ beta cos(phi_1) + u cos(phi_2 - phi_1)
  //                             + cos(phi_3 - phi_2) + alpha cos(phi_ext - phi_3) ].
  add(-ej * params.beta, n1.cos_phi, iqq);
  add(-ej * params.u / 2.0, n1.shift_down, inner(sp, iq));
  add(-ej * params.u / 2.0, n1.shift_down.transpose(), inner(sm, iq));
  add(-ej / 2.0, ih, inner(sm, sp));
  add(-ej / 2.0, ih, inner(sp, sm));

  if constexpr (std::is_same_v<Mat, MatrixXd>) {
    if (!flux_phase_is_real(phi.phi)) {
      throw std::logic_error("real assembly requires sin(2 pi phi) = 0");
    }
    // e^{i theta} = +-1 exactly at integer and half-integer flux.
    const double phase = (std::llround(2.0 * phi.phi) % 2 == 0) ? 1.0 : -1.0;
    const MatrixXd s_both = sm + sp;
    add(-ej * params.alpha * phase / 2.0, ih, inner(iq, s_both));
  } else {
    const double theta = 2.0 * cn::pi * phi.phi;
    const cplx phase(std::cos(theta), std::sin(theta));
    const MatrixXd t_lower = kroneckerProduct(ih, inner(iq, sm));
    const MatrixXd t_raise = kroneckerProduct(ih, inner(iq, sp));
    h += (-ej * params.alpha / 2.0) *
         (phase * t_lower.cast<cplx>() + std::conj(phase) * t_raise.cast<cplx>());
  }
  return h;
}

// Coupling matrix elements <psi_i| phi_1 |psi_j> between kept qubit states,
// evaluated without forming phi_1 x I x I: each state is reshaped to a
// (nq^2 x nh) matrix (node-1 index slowest in the product basis) and phi_1
// applied by a small right-multiplication.
MatrixXcd phi1_matrix_elements(const QubitSolution& qs, const MatrixXcd& phi1) {
  const int nh = qs.basis.n_harm;
  const int nq2 = qs.basis.charge_dim() * qs.basis.charge_dim();
  const int nk = static_cast<int>(qs.states.cols());
  std::vector<MatrixXcd> reshaped(nk);
  for (int j = 0; j < nk; ++j) {
    reshaped[j] = Eigen::Map<const MatrixXcd>(qs.states.col(j).data(), nq2, nh);
  }
  MatrixXcd p(nk, nk);
  for (int j = 0; j < nk; ++j) {
    const MatrixXcd rj = reshaped[j] * phi1.transpose();
    for (int i = 0; i < nk; ++i) {
      p(i, j) = (reshaped[i].conjugate().cwiseProduct(rj)).sum();
    }
  }
  // Clean up rounding: the operator is Hermitian by construction.
  return 0.5 * (p + p.adjoint());
}

struct TotalAssembly {
  MatrixXcd h;
  QubitSolution qubit;
};

TotalAssembly make_total(const CircuitParams& params, const ChargeConfig& q_g,
                         const FluxBias& phi, const BasisSpec& basis,
                         double coupling_scale) {
  QubitSolution qs = solve_qubit(params, q_g, phi, basis, basis.n_levels_kept);

  const Matrix3d minv = build_mass_matrix(params).inverse();
  const Node1Ops n1 = make_node1_ops(
      4.0 * params.e_c_ghz * minv(0, 0),
      params.e_lr_ghz() + params.beta * params.e_j_ghz / 2.0, basis.n_harm);
  const MatrixXcd p = phi1_matrix_elements(qs, n1.phi);

  const int nk = basis.n_levels_kept;
  const int nf = basis.n_fock;
  MatrixXd x_r = MatrixXd::Zero(nf, nf);  // a + a^dag
  VectorXd n_r(nf);
  for (int n = 0; n < nf; ++n) n_r(n) = n + 0.5;
  for (int n = 0; n + 1 < nf; ++n) {
    x_r(n + 1, n) = std::sqrt(n + 1.0);
    x_r(n, n + 1) = std::sqrt(n + 1.0);
  }

  using Eigen::kroneckerProduct;
  MatrixXcd h = MatrixXcd::Zero(nk * nf, nk * nf);
  h += kroneckerProduct(MatrixXd(qs.energies_ghz.asDiagonal()),
                        MatrixXd::Identity(nf, nf))
           .eval()
           .cast<cplx>();
  h += kroneckerProduct(MatrixXd::Identity(nk, nk),
                        MatrixXd(params.omega_r_ghz * n_r.asDiagonal()))
           .eval()
           .cast<cplx>();
  const double g_phi = params.coupling_ghz_per_phase();
  h -= (coupling_scale * g_phi) *
       kroneckerProduct(p, x_r.cast<cplx>()).eval();
  return {std::move(h), std::move(qs)};
}

BasisSpec incremented(const BasisSpec& b) {
  BasisSpec r = b;
  ++r.n_charge;
  ++r.n_harm;
  ++r.n_fock;
  ++r.n_levels_kept;
  return r;
}

}  // namespace

double CircuitParams::e_lr_ghz() const {
  return cn::inductive_energy_ghz(l_r_nh);
}

double CircuitParams::i_zpf_na() const {
  return cn::zero_point_current_na(omega_r_ghz, l_r_nh);
}

double CircuitParams::c_r_farad() const {
  const double omega = 2.0 * cn::pi * omega_r_ghz * 1e9;
  return 1.0 / (omega * omega * l_r_nh * 1e-9);
}

double CircuitParams::coupling_ghz_per_phase() const {
  return i_zpf_na() * 1e-9 * cn::reduced_flux_quantum / (1e9 * cn::planck_h);
}

void CircuitParams::validate() const {
  const auto fail = [](const std::string& msg) { throw ConfigError("circuit params: " + msg); };
  if (!(e_j_ghz >= 0.0)) fail("e_j_ghz must be >= 0");
  if (!(e_c_ghz > 0.0)) fail("e_c_ghz must be > 0");
  if (!(alpha >= 0.0) || !(beta >= 0.0) || !(u >= 0.0)) fail("junction ratios must be >= 0");
  for (double e : eta)
    if (!(e >= 0.0)) fail("eta entries must be >= 0");
  if (!(omega_r_ghz > 0.0)) fail("omega_r_ghz must be > 0");
  if (!(l_r_nh > 0.0)) fail("l_r_nh must be > 0");
  if (!(temperature_k > 0.0)) fail("temperature_k must be > 0");
  for (double d : delta_sp_ghz)
    if (!(d >= 0.0)) fail("delta_sp_ghz entries must be >= 0");
}

ChargeConfig ChargeConfig::parity_shift(int island) const {
  if (island < 1 || island > 4) {
    throw std::out_of_range("parity_shift: island index must be 1..4");
  }
  ChargeConfig shifted = *this;
  shifted.q_e[island - 1] += 1.0;
  return shifted;
}

void BasisSpec::validate(int dimension_cap) const {
  const auto fail = [](const std::string& msg) { throw ConfigError("basis spec: " + msg); };
  if (n_charge < 1 || n_harm < 1 || n_fock < 1 || n_levels_kept < 1) {
    fail("all cutoffs must be >= 1");
  }
  if (n_levels_kept > qubit_dim()) fail("n_levels_kept exceeds qubit dimension");
  if (qubit_dim() > dimension_cap) {
    fail("qubit dimension " + std::to_string(qubit_dim()) + " exceeds cap " +
         std::to_string(dimension_cap));
  }
}

Eigen::Matrix3d build_mass_matrix(const CircuitParams& params) {
  params.validate();
  const double a = params.alpha, b = params.beta, u = params.u;
  Matrix3d m;
  // Node capacitances over C_J: junction ratios beta,u on node 1; u,v=1 on
  // node 2; v=1,alpha on node 3; plus the gate capacitances eta_i. Edges to
  // the reference node 4 contribute only to the diagonal.
  m << b + u + params.eta[0], -u, 0.0,
       -u, u + 1.0 + params.eta[1], -1.0,
       0.0, -1.0, 1.0 + a + params.eta[2];
  const Eigen::LLT<Matrix3d> llt(m);
  if (llt.info() != Eigen::Success) {
    throw ConfigError("mass matrix is not positive definite for these parameters");
  }
  return m;
}

bool has_real_representation(const FluxBias& phi) { return flux_phase_is_real(phi.phi); }

Eigen::MatrixXcd assemble_qubit_hamiltonian(const CircuitParams& params,
                                            const ChargeConfig& q_g,
                                            const FluxBias& phi,
                                            const BasisSpec& basis) {
  return assemble_impl<MatrixXcd>(params, q_g, phi, basis);
}

Eigen::MatrixXd assemble_qubit_hamiltonian_real(const CircuitParams& params,
                                                const ChargeConfig& q_g,
                                                const FluxBias& phi,
                                                const BasisSpec& basis) {
  if (!has_real_representation(phi)) {
    throw ConfigError("real qubit Hamiltonian requires integer or half-integer flux");
  }
  return assemble_impl<MatrixXd>(params, q_g, phi, basis);
}

QubitSolution solve_qubit(const CircuitParams& params, const ChargeConfig& q_g,
                          const FluxBias& phi, const BasisSpec& basis,
                          int n_levels) {
  if (n_levels < 1 || n_levels > basis.qubit_dim()) {
    throw std::out_of_range("solve_qubit: n_levels out of range");
  }
  QubitSolution sol;
  sol.basis = basis;
  if (has_real_representation(phi)) {
    const MatrixXd h = assemble_qubit_hamiltonian_real(params, q_g, phi, basis);
    linalg::SymEigs es = linalg::sym_eigs_lowest(h, n_levels);
    sol.energies_ghz = std::move(es.values);
    sol.states = es.vectors.cast<cplx>();
  } else {
    const MatrixXcd h = assemble_qubit_hamiltonian(params, q_g, phi, basis);
    linalg::HermEigs es = linalg::herm_eigs_lowest(h, n_levels);
    sol.energies_ghz = std::move(es.values);
    sol.states = std::move(es.vectors);
  }
  return sol;
}

Eigen::MatrixXcd assemble_total_hamiltonian(const CircuitParams& params,
                                            const ChargeConfig& q_g,
                                            const FluxBias& phi,
                                            const BasisSpec& basis,
                                            double coupling_scale) {
  return make_total(params, q_g, phi, basis, coupling_scale).h;
}

TotalSolution solve_total(const CircuitParams& params, const ChargeConfig& q_g,
                          const FluxBias& phi, const BasisSpec& basis,
                          double coupling_scale) {
  TotalAssembly ta = make_total(params, q_g, phi, basis, coupling_scale);
  linalg::HermEigs es =
      linalg::herm_eigs_lowest(ta.h, static_cast<int>(ta.h.rows()));
  TotalSolution sol;
  sol.energies_ghz = std::move(es.values);
  sol.states = std::move(es.vectors);
  sol.qubit = std::move(ta.qubit);
  return sol;
}

std::vector<double> transition_frequencies(
    const Eigen::VectorXd& energies_ghz,
    const std::vector<std::pair<int, int>>& pairs) {
  std::vector<double> out;
  out.reserve(pairs.size());
  for (const auto& [i, j] : pairs) {
    if (i < 0 || j < i || j >= energies_ghz.size()) {
      throw std::out_of_range("transition_frequencies: level index out of range");
    }
    out.push_back(energies_ghz(j) - energies_ghz(i));
  }
  return out;
}

double qubit_gap(const CircuitParams& params, const ChargeConfig& q_g,
                 const BasisSpec& basis) {
  const QubitSolution qs = solve_qubit(params, q_g, FluxBias{0.5}, basis, 2);
  return qs.energies_ghz(1) - qs.energies_ghz(0);
}

std::vector<GroundEnergyEntry> ground_energy_table(const CircuitParams& params,
                                                   const BasisSpec& basis) {
  const std::vector<std::pair<std::string, std::array<double, 4>>> configs = {
      {"(0,0,0,0)", {0, 0, 0, 0}}, {"(e,0,0,0)", {1, 0, 0, 0}},
      {"(0,e,0,0)", {0, 1, 0, 0}}, {"(0,0,e,0)", {0, 0, 1, 0}},
      {"(0,0,0,e)", {0, 0, 0, 1}}, {"(0,e,e,0)", {0, 1, 1, 0}}};
  std::vector<GroundEnergyEntry> table;
  table.reserve(configs.size());
  double reference = 0.0;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    ChargeConfig cfg;
    cfg.q_e = configs[i].second;
    const QubitSolution qs = solve_qubit(params, cfg, FluxBias{0.5}, basis, 1);
    const double e0 = qs.energies_ghz(0);
    if (i == 0) reference = e0;
    table.push_back({configs[i].first, cfg, e0 - reference});
  }
  return table;
}

Eigen::MatrixXd split_map_vs_junctions(const CircuitParams& params,
                                       const std::vector<double>& alphas,
                                       const std::vector<double>& us,
                                       int island, const BasisSpec& basis) {
  if (island != 2 && island != 3) {
    throw std::out_of_range("split_map_vs_junctions: island must be 2 or 3");
  }
  MatrixXd map(static_cast<Eigen::Index>(alphas.size()),
               static_cast<Eigen::Index>(us.size()));
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    for (std::size_t j = 0; j < us.size(); ++j) {
      CircuitParams p = params;
      p.alpha = alphas[i];
      p.u = us[j];
      const ChargeConfig neutral;
      const double base = qubit_gap(p, neutral, basis);
      const double shifted = qubit_gap(p, neutral.parity_shift(island), basis);
      map(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          shifted - base;
    }
  }
  return map;
}

Eigen::Vector3d cpb_reference(double e_j_ghz, double e_c_ghz, double n_g,
                              int n_cutoff) {
  if (n_cutoff < 5) throw ConfigError("cpb_reference: n_cutoff must be >= 5");
  const int dim = 2 * n_cutoff + 1;
  MatrixXd h = MatrixXd::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) {
    const double n = (k - n_cutoff) - n_g;
    h(k, k) = 4.0 * e_c_ghz * n * n;
    if (k + 1 < dim) {
      h(k + 1, k) = -e_j_ghz / 2.0;
      h(k, k + 1) = -e_j_ghz / 2.0;
    }
  }
  const VectorXd w = linalg::sym_eigenvalues(h);
  return Eigen::Vector3d(w(0), w(1), w(2));
}

EpsilonResult epsilon_from_flux(const CircuitParams& params, const FluxBias& phi,
                                const BasisSpec& basis) {
  const ChargeConfig neutral;
  const double delta = qubit_gap(params, neutral, basis);
  const QubitSolution qs = solve_qubit(params, neutral, phi, basis, 2);
  const double w10 = qs.energies_ghz(1) - qs.energies_ghz(0);
  const double eps2 = w10 * w10 - delta * delta;
  const double eps = (eps2 > 0.0 ? std::sqrt(eps2) : 0.0);
  EpsilonResult r;
  r.epsilon_ghz = (phi.phi >= 0.5 ? eps : -eps);
  r.within_linear_regime = std::abs(phi.phi - 0.5) <= 0.02;
  return r;
}

double persistent_current_na(const CircuitParams& params, const BasisSpec& basis) {
  // Finite-difference slope of eps(phi) where it is linear (eps >> Delta).
  const double phi_a = 0.508, phi_b = 0.510;
  const double eps_a = epsilon_from_flux(params, FluxBias{phi_a}, basis).epsilon_ghz;
  const double eps_b = epsilon_from_flux(params, FluxBias{phi_b}, basis).epsilon_ghz;
  const double slope_ghz = (eps_b - eps_a) / (phi_b - phi_a);
  // eps = 2 I_p Phi_0 (phi - 0.5) / h  =>  I_p = (d eps/d phi) h / (2 Phi_0).
  return slope_ghz * 1e9 * cn::planck_h / (2.0 * cn::flux_quantum) * 1e9;
}

ConvergenceReport convergence_check(const CircuitParams& params,
                                    const ChargeConfig& q_g, const FluxBias& phi,
                                    const BasisSpec& basis,
                                    double tolerance_ghz) {
  ConvergenceReport rep;
  rep.tolerance_ghz = tolerance_ghz;
  const TotalSolution base = solve_total(params, q_g, phi, basis);
  const TotalSolution fine = solve_total(params, q_g, phi, incremented(basis));
  rep.w10_ghz = base.energies_ghz(1) - base.energies_ghz(0);
  rep.w20_ghz = base.energies_ghz(2) - base.energies_ghz(0);
  rep.w10_refined_ghz = fine.energies_ghz(1) - fine.energies_ghz(0);
  rep.w20_refined_ghz = fine.energies_ghz(2) - fine.energies_ghz(0);
  rep.w10_shift_ghz = std::abs(rep.w10_refined_ghz - rep.w10_ghz);
  rep.w20_shift_ghz = std::abs(rep.w20_refined_ghz - rep.w20_ghz);
  rep.converged = rep.w20_shift_ghz < tolerance_ghz;
  return rep;
}

}  // namespace fluxqp::circuit

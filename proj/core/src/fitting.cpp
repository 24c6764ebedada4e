// Copyright (c) 2026 The fluxqp Authors.
// SPDX-License-Identifier: Apache-2.0

#include "fluxqp/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <utility>

#include "fluxqp/errors.hpp"
#include "fluxqp/rng.hpp"

namespace fluxqp::fitting {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

VectorXd clamp_to_box(const VectorXd& x, const VectorXd& lo, const VectorXd& hi) {
  return x.cwiseMax(lo).cwiseMin(hi);
}

// Forward differences with steps kept inside the box.
MatrixXd forward_jacobian(const ResidualFn& fn, const VectorXd& x,
                          const VectorXd& r0, const VectorXd& lo,
                          const VectorXd& hi) {
  const auto n = x.size();
  MatrixXd jac(r0.size(), n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double h = std::max(1e-7, 1e-6 * std::abs(x(i)));
    if (x(i) + h > hi(i)) h = -h;
    VectorXd xs = x;
    xs(i) = std::clamp(x(i) + h, lo(i), hi(i));
    const double actual = xs(i) - x(i);
    if (actual == 0.0) {
      jac.col(i).setZero();
      continue;
    }
    jac.col(i) = (fn(xs) - r0) / actual;
  }
  return jac;
}

FitResult lm_single(const ResidualFn& fn, const VectorXd& x0,
                    const VectorXd& lo, const VectorXd& hi,
                    const LmOptions& opt) {
  VectorXd x = clamp_to_box(x0, lo, hi);
  VectorXd r = fn(x);
  double cost = 0.5 * r.squaredNorm();
  double lambda = opt.lambda_init;
  FitResult result;
  result.converged = false;
  int iter = 0;
  for (; iter < opt.max_iterations; ++iter) {
    const MatrixXd jac = forward_jacobian(fn, x, r, lo, hi);
    const VectorXd grad = jac.transpose() * r;
    const MatrixXd hess = jac.transpose() * jac;
    const VectorXd diag = hess.diagonal().cwiseMax(1e-12);
    bool accepted = false;
    for (int attempt = 0; attempt < 50; ++attempt) {
      MatrixXd m = hess;
      m.diagonal() += lambda * diag;
      const VectorXd dx = m.ldlt().solve(-grad);
      const VectorXd x_new = clamp_to_box(x + dx, lo, hi);
      const VectorXd r_new = fn(x_new);
      const double cost_new = 0.5 * r_new.squaredNorm();
      if (cost_new <= cost) {
        const VectorXd step = x_new - x;
        bool small_step = true;
        for (Eigen::Index i = 0; i < x.size(); ++i) {
          if (std::abs(step(i)) > opt.xtol * (std::abs(x(i)) + opt.xtol)) {
            small_step = false;
            break;
          }
        }
        const double rel_drop =
            (cost - cost_new) / std::max(cost, 1e-300);
        x = x_new;
        r = r_new;
        cost = cost_new;
        lambda = std::max(lambda * opt.lambda_down, 1e-12);
        accepted = true;
        if (small_step || rel_drop < opt.ftol) result.converged = true;
        break;
      }
      lambda *= opt.lambda_up;
      if (lambda > 1e14) break;
    }
    if (!accepted || result.converged) {
      ++iter;  // this iteration ran; the for-increment is skipped by break
      break;
    }
  }
  result.parameters = x;
  result.final_cost = cost;
  result.iterations = iter;
  const auto m = static_cast<double>(r.size());
  result.residual_rms = std::sqrt(2.0 * cost / std::max(m, 1.0));
  const MatrixXd jac = forward_jacobian(fn, x, r, lo, hi);
  const MatrixXd hess = jac.transpose() * jac;
  const double dof = std::max(m - static_cast<double>(x.size()), 1.0);
  const double sigma2 = 2.0 * cost / dof;
  result.covariance =
      sigma2 * hess.completeOrthogonalDecomposition().pseudoInverse();
  return result;
}

}  // namespace

FitResult lm_fit(const ResidualFn& residuals, const Eigen::VectorXd& x0,
                 const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                 const LmOptions& options) {
  if (x0.size() == 0) throw ConfigError("lm_fit: empty parameter vector");
  if (lower.size() != x0.size() || upper.size() != x0.size()) {
    throw ConfigError("lm_fit: bound size mismatch");
  }
  for (Eigen::Index i = 0; i < x0.size(); ++i) {
    if (!(lower(i) <= upper(i))) throw ConfigError("lm_fit: lower > upper bound");
  }
  if (options.multi_start < 1) throw ConfigError("lm_fit: multi_start must be >= 1");

  Rng rng(options.seed);
  FitResult best;
  bool have_best = false;
  for (int s = 0; s < options.multi_start; ++s) {
    VectorXd start = x0;
    if (s > 0) {
      for (Eigen::Index i = 0; i < start.size(); ++i) {
        const double g = rng.normal();
        if (std::abs(start(i)) > 1e-12) {
          start(i) *= 1.0 + options.start_spread * g;
        } else {
          start(i) += options.start_spread * g;
        }
      }
    }
    FitResult candidate = lm_single(residuals, start, lower, upper, options);
    candidate.best_start = s;
    if (!have_best || candidate.final_cost < best.final_cost) {
      best = std::move(candidate);
      have_best = true;
    }
  }
  return best;
}

namespace {

struct BranchIndex {
  std::vector<std::size_t> w10, w20_upper, w20_lower, w31;
};

BranchIndex classify_branches(const RabiFitData& data) {
  const std::size_t n = data.branch.size();
  if (data.bias.size() != n || data.freq_ghz.size() != n ||
      (!data.weight.empty() && data.weight.size() != n)) {
    throw ConfigError("fit_rabi_two_delta: data column size mismatch");
  }
  BranchIndex idx;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string& b = data.branch[i];
    if (b == "w10") {
      idx.w10.push_back(i);
    } else if (b == "w20_upper" || b == "w20") {
      idx.w20_upper.push_back(i);
    } else if (b == "w20_lower" || b == "w20_second") {
      idx.w20_lower.push_back(i);
    } else if (b == "w31") {
      idx.w31.push_back(i);
    } else {
      throw ConfigError("fit_rabi_two_delta: unknown branch label " + b);
    }
  }
  return idx;
}

// Model frequencies on a shared, strictly increasing epsilon grid; values
// are read back per data point through the grid index.
struct GridModel {
  std::vector<double> unique_bias;            // ascending
  std::vector<std::size_t> point_to_grid;     // data row -> grid index
};

GridModel build_grid(const RabiFitData& data,
                     const std::vector<std::size_t>& rows) {
  GridModel gm;
  std::set<double> uniq;
  for (std::size_t r : rows) uniq.insert(data.bias[r]);
  gm.unique_bias.assign(uniq.begin(), uniq.end());
  gm.point_to_grid.resize(data.bias.size(), 0);
  for (std::size_t r : rows) {
    const auto it = std::lower_bound(gm.unique_bias.begin(),
                                     gm.unique_bias.end(), data.bias[r]);
    gm.point_to_grid[r] =
        static_cast<std::size_t>(it - gm.unique_bias.begin());
  }
  return gm;
}

double weight_of(const RabiFitData& data, std::size_t i) {
  return data.weight.empty() ? 1.0 : data.weight[i];
}

}  // namespace

RabiFitResult fit_rabi_two_delta(const RabiFitData& data,
                                 const rabi::RabiParams& init,
                                 double delta_second_init,
                                 const RabiFitOptions& options) {
  const BranchIndex idx = classify_branches(data);
  std::vector<std::size_t> stage1_rows;
  for (const auto* v : {&idx.w10, &idx.w20_upper, &idx.w31}) {
    stage1_rows.insert(stage1_rows.end(), v->begin(), v->end());
  }
  const std::size_t n_params = options.fit_bias_map ? 5 : 3;
  if (stage1_rows.size() < n_params) {
    throw ConfigError("fit_rabi_two_delta: not enough stage-1 data points");
  }
  const GridModel grid1 = build_grid(data, stage1_rows);

  auto eval_branches = [&data](const rabi::RabiParams& p,
                               const GridModel& gm, double scale,
                               double offset,
                               const std::vector<std::pair<int, int>>& pairs) {
    std::vector<double> eps(gm.unique_bias.size());
    for (std::size_t k = 0; k < eps.size(); ++k) {
      eps[k] = scale * gm.unique_bias[k] + offset;
    }
    return rabi::rabi_branches(p, eps, pairs);
  };

  auto stage1_residuals = [&](const VectorXd& x) {
    rabi::RabiParams p = init;
    p.delta_ghz = x(0);
    p.g_ghz = x(1);
    p.omega_r_ghz = x(2);
    const double scale = options.fit_bias_map ? x(3) : 1.0;
    const double offset = options.fit_bias_map ? x(4) : 0.0;
    const auto curves =
        eval_branches(p, grid1, scale, offset, {{0, 1}, {0, 2}, {1, 3}});
    VectorXd r(static_cast<Eigen::Index>(stage1_rows.size()));
    Eigen::Index k = 0;
    auto fill = [&](const std::vector<std::size_t>& rows,
                    const rabi::BranchCurve& curve) {
      for (std::size_t row : rows) {
        const double model = curve.freq_ghz[grid1.point_to_grid[row]];
        r(k++) = (model - data.freq_ghz[row]) * std::sqrt(weight_of(data, row));
      }
    };
    fill(idx.w10, curves[0]);
    fill(idx.w20_upper, curves[1]);
    fill(idx.w31, curves[2]);
    return r;
  };

  VectorXd x0(static_cast<Eigen::Index>(n_params));
  VectorXd lo(x0.size()), hi(x0.size());
  x0(0) = init.delta_ghz;
  lo(0) = 1e-4;
  hi(0) = 50.0;
  x0(1) = init.g_ghz;
  lo(1) = 0.0;
  hi(1) = 50.0;
  x0(2) = init.omega_r_ghz;
  lo(2) = 1e-2;
  hi(2) = 50.0;
  if (options.fit_bias_map) {
    x0(3) = 1.0;
    lo(3) = 0.1;
    hi(3) = 10.0;
    x0(4) = 0.0;
    lo(4) = -10.0;
    hi(4) = 10.0;
  }

  RabiFitResult result;
  result.stage1 = lm_fit(stage1_residuals, x0, lo, hi, options.lm);
  result.params = init;
  result.params.delta_ghz = result.stage1.parameters(0);
  result.params.g_ghz = result.stage1.parameters(1);
  result.params.omega_r_ghz = result.stage1.parameters(2);
  result.bias_scale =
      options.fit_bias_map ? result.stage1.parameters(3) : 1.0;
  result.bias_offset =
      options.fit_bias_map ? result.stage1.parameters(4) : 0.0;

  if (idx.w20_lower.empty()) {
    result.delta_second_ghz = result.params.delta_ghz;
    result.stage2.parameters = VectorXd::Constant(1, result.delta_second_ghz);
    result.stage2.converged = true;
    return result;
  }

  const GridModel grid2 = build_grid(data, idx.w20_lower);
  auto stage2_residuals = [&](const VectorXd& x) {
    rabi::RabiParams p = result.params;
    p.delta_ghz = x(0);
    const auto curves = eval_branches(p, grid2, result.bias_scale,
                                      result.bias_offset, {{0, 2}});
    VectorXd r(static_cast<Eigen::Index>(idx.w20_lower.size()));
    Eigen::Index k = 0;
    for (std::size_t row : idx.w20_lower) {
      const double model = curves[0].freq_ghz[grid2.point_to_grid[row]];
      r(k++) = (model - data.freq_ghz[row]) * std::sqrt(weight_of(data, row));
    }
    return r;
  };
  result.stage2 = lm_fit(stage2_residuals,
                         VectorXd::Constant(1, delta_second_init),
                         VectorXd::Constant(1, 1e-4),
                         VectorXd::Constant(1, 50.0), options.lm);
  result.delta_second_ghz = result.stage2.parameters(0);
  return result;
}

namespace {

struct CircuitParamSlot {
  std::string name;
  double init = 0.0, lo = 0.0, hi = 0.0;
};

CircuitParamSlot circuit_slot(const std::string& name,
                              const circuit::CircuitParams& p, double q_g2) {
  if (name == "e_j_ghz") return {name, p.e_j_ghz, 1.0, 1000.0};
  if (name == "e_c_ghz") return {name, p.e_c_ghz, 0.1, 100.0};
  if (name == "omega_r_ghz") return {name, p.omega_r_ghz, 0.5, 50.0};
  if (name == "l_r_nh") return {name, p.l_r_nh, 0.5, 100.0};
  if (name == "alpha") return {name, p.alpha, 0.05, 5.0};
  if (name == "beta") return {name, p.beta, 0.05, 10.0};
  if (name == "u") return {name, p.u, 0.05, 5.0};
  if (name == "eta") return {name, p.eta[0], 0.0, 1.0};
  if (name == "q_g2") return {name, q_g2, -0.5, 0.5};
  throw ConfigError("fit_circuit_two_parity: unknown parameter " + name);
}

void apply_circuit_param(circuit::CircuitParams& p, double& q_g2,
                         const std::string& name, double value) {
  if (name == "e_j_ghz") {
    p.e_j_ghz = value;
  } else if (name == "e_c_ghz") {
    p.e_c_ghz = value;
  } else if (name == "omega_r_ghz") {
    p.omega_r_ghz = value;
  } else if (name == "l_r_nh") {
    p.l_r_nh = value;
  } else if (name == "alpha") {
    p.alpha = value;
  } else if (name == "beta") {
    p.beta = value;
  } else if (name == "u") {
    p.u = value;
  } else if (name == "eta") {
    p.eta = {value, value, value};
  } else if (name == "q_g2") {
    q_g2 = value;
  }
}

}  // namespace

CircuitFitResult fit_circuit_two_parity(const CircuitFitData& data,
                                        const circuit::CircuitParams& init,
                                        double q_g2_init,
                                        const CircuitFitOptions& options) {
  const std::size_t n = data.phi.size();
  if (data.parity.size() != n || data.freq_ghz.size() != n ||
      (!data.weight.empty() && data.weight.size() != n)) {
    throw ConfigError("fit_circuit_two_parity: data column size mismatch");
  }
  if (options.free_parameters.empty()) {
    throw ConfigError("fit_circuit_two_parity: no free parameters");
  }
  for (int parity : data.parity) {
    if (parity != 0 && parity != 1) {
      throw ConfigError("fit_circuit_two_parity: parity must be 0 or 1");
    }
  }
  std::vector<CircuitParamSlot> slots;
  slots.reserve(options.free_parameters.size());
  for (const auto& name : options.free_parameters) {
    slots.push_back(circuit_slot(name, init, q_g2_init));
  }

  // Unique (parity, flux) points solved once per model evaluation.
  std::map<std::pair<int, double>, double> unique_points;
  for (std::size_t i = 0; i < n; ++i) {
    unique_points[{data.parity[i], data.phi[i]}] = 0.0;
  }

  auto make_params = [&](const VectorXd& x, circuit::CircuitParams& p,
                         double& q_g2) {
    p = init;
    q_g2 = q_g2_init;
    for (std::size_t k = 0; k < slots.size(); ++k) {
      apply_circuit_param(p, q_g2, slots[k].name,
                          x(static_cast<Eigen::Index>(k)));
    }
  };

  auto w20_at = [&](const circuit::CircuitParams& p, double q_g2, int parity,
                    double phi) {
    circuit::ChargeConfig cfg;
    cfg.q_e = {0.0, q_g2 + static_cast<double>(parity), 0.0, 0.0};
    const auto sol =
        circuit::solve_total(p, cfg, circuit::FluxBias{phi}, options.basis);
    return sol.energies_ghz(2) - sol.energies_ghz(0);
  };

  const int n_constraint = options.constraint.enabled ? 2 : 0;
  auto residual_fn = [&](const VectorXd& x) {
    circuit::CircuitParams p;
    double q_g2 = 0.0;
    make_params(x, p, q_g2);
    auto points = unique_points;
    for (auto& kv : points) {
      kv.second = w20_at(p, q_g2, kv.first.first, kv.first.second);
    }
    VectorXd r(static_cast<Eigen::Index>(n) + n_constraint);
    for (std::size_t i = 0; i < n; ++i) {
      const double model = points.at({data.parity[i], data.phi[i]});
      const double w = data.weight.empty() ? 1.0 : data.weight[i];
      r(static_cast<Eigen::Index>(i)) =
          (model - data.freq_ghz[i]) * std::sqrt(w);
    }
    if (options.constraint.enabled) {
      const auto& c = options.constraint;
      const double f_even = w20_at(p, q_g2, 0, c.phi_probe);
      const double f_odd = w20_at(p, q_g2, 1, c.phi_probe);
      const double mid = 0.5 * (f_even + f_odd);
      const double split = std::abs(f_even - f_odd);
      r(static_cast<Eigen::Index>(n)) =
          c.weight_mid * (mid - c.f_mid_target_ghz);
      r(static_cast<Eigen::Index>(n) + 1) =
          c.weight_split * (split - c.split_target_ghz);
    }
    return r;
  };

  VectorXd x0(static_cast<Eigen::Index>(slots.size()));
  VectorXd lo(x0.size()), hi(x0.size());
  for (std::size_t k = 0; k < slots.size(); ++k) {
    x0(static_cast<Eigen::Index>(k)) = slots[k].init;
    lo(static_cast<Eigen::Index>(k)) = slots[k].lo;
    hi(static_cast<Eigen::Index>(k)) = slots[k].hi;
  }

  CircuitFitResult result;
  result.fit = lm_fit(residual_fn, x0, lo, hi, options.lm);
  make_params(result.fit.parameters, result.params, result.q_g2_e);
  return result;
}

}  // namespace fluxqp::fitting

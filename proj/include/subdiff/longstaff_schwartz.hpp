#pragma once

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "subdiff/contracts.hpp"
#include "subdiff/errors.hpp"
#include "subdiff/subordinator.hpp"

namespace subdiff {

// ---------------------------------------------------------------------------
// Regression basis: the first three (modified) Laguerre polynomials
//
//   L0 = 1,  L1 = 1 - x,  L2 = (2 - 4x - x^2) / 2,
//
// applied to the raw asset value.  Sizes above 3 are not offered.
// ---------------------------------------------------------------------------
inline std::vector<double> laguerre_basis(double x, int size = 3) {
  if (size < 1 || size > 3)
    throw ConfigError("laguerre_basis: supported basis sizes are 1..3, got " +
                      std::to_string(size));
  std::vector<double> phi(static_cast<std::size_t>(size));
  phi[0] = 1.0;
  if (size > 1) phi[1] = 1.0 - x;
  if (size > 2) phi[2] = 0.5 * (2.0 - 4.0 * x - x * x);
  return phi;
}

// ---------------------------------------------------------------------------
// Least-squares fit of continuation values on basis(state), solved by a
// rank-revealing orthogonal factorization (never normal equations).  Raises
// RegressionError when the system is underdetermined or rank-deficient; the
// pricing loop degrades gracefully in that case.
// ---------------------------------------------------------------------------
inline std::vector<double> regress_continuation(const std::vector<double>& states,
                                                const std::vector<double>& targets, int size) {
  if (states.size() != targets.size())
    throw DomainError("regress_continuation: states/targets size mismatch");
  if (size < 1 || size > 3)
    throw ConfigError("regress_continuation: supported basis sizes are 1..3");
  const std::size_t rows = states.size();
  if (rows < static_cast<std::size_t>(size))
    throw RegressionError("regress_continuation: underdetermined system (" +
                          std::to_string(rows) + " samples, " + std::to_string(size) +
                          " basis functions)");

  Eigen::MatrixXd design(static_cast<Eigen::Index>(rows), size);
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(rows));
  for (std::size_t i = 0; i < rows; ++i) {
    const std::vector<double> phi = laguerre_basis(states[i], size);
    for (int j = 0; j < size; ++j) design(static_cast<Eigen::Index>(i), j) = phi[static_cast<std::size_t>(j)];
    rhs(static_cast<Eigen::Index>(i)) = targets[i];
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < size)
    throw RegressionError("regress_continuation: design matrix is rank-deficient (rank " +
                          std::to_string(qr.rank()) + " of " + std::to_string(size) + ")");
  const Eigen::VectorXd beta = qr.solve(rhs);
  return std::vector<double>(beta.data(), beta.data() + size);
}

// ---------------------------------------------------------------------------
// Longstaff-Schwartz pricing of a plain American put on subdiffusive GBM.
// ---------------------------------------------------------------------------
struct LsConfig {
  int paths = 10000;    // M
  int steps = 50;       // m, exercise dates
  int basis_size = 3;   // regression basis size, at most 3
  std::uint64_t seed = 0;
  std::optional<double> drift; // operational drift override; default r - sigma^2/2
  int workers = 1;

  void validate() const {
    if (paths < 100)
      throw ConfigError("LsConfig: paths must be >= 100, got " + std::to_string(paths));
    if (steps < 2)
      throw ConfigError("LsConfig: steps must be >= 2, got " + std::to_string(steps));
    if (basis_size < 1 || basis_size > 3)
      throw ConfigError("LsConfig: basis_size must be 1..3, got " + std::to_string(basis_size));
  }
};

struct LsResult {
  double price = 0.0;
  double std_error = 0.0;
  std::vector<double> exercise_times; // per path: time of the last exercise reset (T if none)
  double runtime_seconds = 0.0;
};

inline LsResult ls_price_american_put(const MarketParams& market, const OptionSpec& option,
                                      const LsConfig& config) {
  const auto t_start = std::chrono::steady_clock::now();
  market.validate();
  option.validate();
  config.validate();
  if (option.style != ExerciseStyle::american || option.kind != OptionKind::put ||
      option.barrier != BarrierKind::none)
    throw ConfigError("ls_price_american_put: only plain American puts are supported");

  const int m = config.steps;
  const int M = config.paths;
  const int l = config.basis_size;
  const double strike = option.strike;
  const double dt = option.maturity / m;
  const double step_disc = std::exp(-market.r * dt);

  const PathEnsemble ens = subdiffusive_gbm_paths(market, option.maturity, m, M, config.seed,
                                                  config.drift, config.workers);

  std::vector<double> cash(static_cast<std::size_t>(M));
  std::vector<double> tau(static_cast<std::size_t>(M), option.maturity);
  for (int k = 0; k < M; ++k)
    cash[static_cast<std::size_t>(k)] = std::max(strike - ens.value(k, m), 0.0);

  std::vector<int> itm;
  std::vector<double> states, targets, cont;
  for (int i = m - 1; i >= 1; --i) {
    // Everything alive accrues one step of discounting, exercised or not.
    for (double& v : cash) v *= step_disc;

    itm.clear();
    states.clear();
    targets.clear();
    for (int k = 0; k < M; ++k) {
      const double z = ens.value(k, i);
      if (strike - z > 0.0) {
        itm.push_back(k);
        states.push_back(z);
        targets.push_back(cash[static_cast<std::size_t>(k)]);
      }
    }
    if (itm.empty()) continue;

    cont.assign(itm.size(), 0.0);
    bool fitted = false;
    if (itm.size() >= static_cast<std::size_t>(l)) {
      try {
        const std::vector<double> beta = regress_continuation(states, targets, l);
        for (std::size_t idx = 0; idx < itm.size(); ++idx) {
          const std::vector<double> phi = laguerre_basis(states[idx], l);
          double c = 0.0;
          for (int j = 0; j < l; ++j) c += beta[static_cast<std::size_t>(j)] * phi[static_cast<std::size_t>(j)];
          cont[idx] = c;
        }
        fitted = true;
      } catch (const RegressionError&) {
        fitted = false;
      }
    }
    if (!fitted) {
      // Degraded step: compare against each path's own realized value, i.e.
      // never overrides the hold decision with a cross-sectional estimate.
      for (std::size_t idx = 0; idx < itm.size(); ++idx)
        cont[idx] = targets[idx];
    }

    const double t_i = ens.times[static_cast<std::size_t>(i)];
    for (std::size_t idx = 0; idx < itm.size(); ++idx) {
      const int k = itm[idx];
      const double payoff = strike - states[idx];
      if (payoff > cont[idx]) {
        cash[static_cast<std::size_t>(k)] = payoff;
        tau[static_cast<std::size_t>(k)] = t_i;
      }
    }
  }

  // Final step of discounting down to time zero, then ensemble statistics.
  double mean = 0.0;
  for (double& v : cash) {
    v *= step_disc;
    mean += v;
  }
  mean /= M;
  double ssq = 0.0;
  for (double v : cash) ssq += (v - mean) * (v - mean);
  const double sd = M > 1 ? std::sqrt(ssq / (M - 1)) : 0.0;

  LsResult res;
  res.price = mean;
  res.std_error = sd / std::sqrt(static_cast<double>(M));
  res.exercise_times = std::move(tau);
  res.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return res;
}

} // namespace subdiff

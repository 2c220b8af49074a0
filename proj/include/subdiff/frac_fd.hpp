#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "subdiff/contracts.hpp"
#include "subdiff/errors.hpp"
#include "subdiff/grid.hpp"
#include "subdiff/tridiagonal.hpp"

namespace subdiff {

// ---------------------------------------------------------------------------
// Memory weights of the L1 discretization of the Caputo derivative:
//
//   b_j = (j+1)^{1-alpha} - j^{1-alpha},   d = Gamma(2-alpha) * dt^alpha.
//
// b_0 = 1 by the convention 0^{1-alpha} := 0 (the alpha -> 1 limit).  For
// alpha = 1 the weights collapse to b = [1, 0, 0, ...] and d = dt, which is
// the classical (memoryless) scheme.
// ---------------------------------------------------------------------------
struct FracWeights {
  std::vector<double> b; // b_0 .. b_steps
  double d = 0.0;        // Gamma(2-alpha) * dt^alpha
};

inline void require_alpha(double alpha, const char* where) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw DomainError(std::string(where) + ": alpha must lie in (0,1], got " +
                      std::to_string(alpha));
}

inline FracWeights memory_weights(double alpha, int steps, double dt) {
  require_alpha(alpha, "memory_weights");
  if (steps < 1)
    throw DomainError("memory_weights: steps must be >= 1");
  if (!(dt > 0.0))
    throw DomainError("memory_weights: dt must be > 0");
  FracWeights w;
  w.b.assign(static_cast<std::size_t>(steps) + 1, 0.0);
  w.b[0] = 1.0;
  if (alpha < 1.0) {
    const double e = 1.0 - alpha;
    for (int j = 1; j <= steps; ++j)
      w.b[static_cast<std::size_t>(j)] =
          std::pow(j + 1.0, e) - std::pow(static_cast<double>(j), e);
  }
  w.d = std::tgamma(2.0 - alpha) * std::pow(dt, alpha);
  return w;
}

// Weighting parameter that keeps the scheme stable at the largest possible
// explicit share: theta = (2 - 2^{1-alpha}) / (3 - 2^{1-alpha}), in [0, 1/2].
inline double theta_optimal(double alpha) {
  require_alpha(alpha, "theta_optimal");
  const double g = std::exp2(1.0 - alpha);
  return (2.0 - g) / (3.0 - g);
}

// ---------------------------------------------------------------------------
// Scheme operators on the n-1 interior nodes.  With
//
//   a = sigma^2/2,  b = r - sigma^2/2,  c = r,
//   p = a*d/dx^2,   q = b*d/(2*dx),
//
// A has diagonal 1 + 2p + c*d, subdiagonal -(p-q), superdiagonal -(p+q);
// B = I - A; and C = theta*I + (1-theta)*A is the matrix factored each step.
// couple_lower/couple_upper are the weights with which the boundary values
// u_0 and u_n enter the first and last interior rows (the G vector).
// ---------------------------------------------------------------------------
struct OperatorSet {
  TridiagonalOperator A;
  TridiagonalOperator B;
  TridiagonalOperator C;
  double couple_lower = 0.0; // p - q
  double couple_upper = 0.0; // p + q
  double d = 0.0;
  bool diagonally_dominant = true; // p >= |q|; a warning flag, not an error
};

inline OperatorSet assemble_operators(const MarketParams& market, const GridSpec& grid,
                                      double theta) {
  market.validate();
  grid.validate();
  SchemeParams{theta}.validate();

  const double a = 0.5 * market.sigma * market.sigma;
  const double b = market.r - a;
  const double c = market.r;
  const double d = std::tgamma(2.0 - market.alpha) * std::pow(grid.dt(), market.alpha);
  const double dx = grid.dx();
  const double p = a * d / (dx * dx);
  const double q = b * d / (2.0 * dx);
  const std::size_t m = static_cast<std::size_t>(grid.n) - 1;

  OperatorSet ops;
  ops.d = d;
  ops.couple_lower = p - q;
  ops.couple_upper = p + q;
  ops.diagonally_dominant = p >= std::fabs(q);

  ops.A.diag.assign(m, 1.0 + 2.0 * p + c * d);
  ops.A.sub.assign(m - 1, -(p - q));
  ops.A.super.assign(m - 1, -(p + q));

  ops.B.diag.assign(m, -(2.0 * p + c * d));
  ops.B.sub.assign(m - 1, p - q);
  ops.B.super.assign(m - 1, p + q);

  ops.C.diag.assign(m, theta + (1.0 - theta) * (1.0 + 2.0 * p + c * d));
  ops.C.sub.assign(m - 1, -(1.0 - theta) * (p - q));
  ops.C.super.assign(m - 1, -(1.0 - theta) * (p + q));
  return ops;
}

// ---------------------------------------------------------------------------
// Initial and boundary conditions.
//
// After the time reversal u(x,t) = v(e^x, T-t) the payoff becomes the initial
// row, and the boundary rows follow the contract catalogue:
//
//   call, upper edge:  e^{x_max} - K e^{-r(T-t_l)}  (barrier-free)
//                      0                            (up/double knock-out)
//   call, lower edge:  0 in all variants
//   put,  lower edge:  K (barrier-free), 0 (down/double knock-out)
//   put,  upper edge:  0 in all variants
//
// Knock-in contracts are rejected here: they are priced through parity.
// ---------------------------------------------------------------------------
struct BoundaryValues {
  double lower = 0.0;
  double upper = 0.0;
};

struct ConditionSet {
  std::vector<double> initial; // size n+1, payoff at the grid nodes
  std::vector<double> lower;   // size N+1, boundary value at x_min per time row
  std::vector<double> upper;   // size N+1, boundary value at x_max per time row

  BoundaryValues boundary_at(int l) const {
    return {lower[static_cast<std::size_t>(l)], upper[static_cast<std::size_t>(l)]};
  }
};

inline ConditionSet assemble_conditions(const OptionSpec& option, const MarketParams& market,
                                        const GridSpec& grid) {
  option.validate();
  market.validate();
  grid.validate();
  if (option.is_knock_in())
    throw ConfigError("assemble_conditions: knock-in contracts are priced via "
                      "in-out parity; discretize the knock-out leg instead");

  const double bound_tol = 1e-9;
  if (option.has_lower_barrier() &&
      std::fabs(grid.x_min - std::log(option.lower_barrier)) > bound_tol)
    throw ConfigError("assemble_conditions: grid x_min must equal ln(H-) for a "
                      "lower barrier (use make_grid)");
  if (option.has_upper_barrier() &&
      std::fabs(grid.x_max - std::log(option.upper_barrier)) > bound_tol)
    throw ConfigError("assemble_conditions: grid x_max must equal ln(H+) for an "
                      "upper barrier (use make_grid)");

  ConditionSet cond;
  cond.initial.resize(static_cast<std::size_t>(grid.n) + 1);
  for (int i = 0; i <= grid.n; ++i)
    cond.initial[static_cast<std::size_t>(i)] = intrinsic_payoff(option, std::exp(grid.x(i)));

  cond.lower.resize(static_cast<std::size_t>(grid.N) + 1);
  cond.upper.resize(static_cast<std::size_t>(grid.N) + 1);
  const double K = option.strike;
  const double T = option.maturity;
  for (int l = 0; l <= grid.N; ++l) {
    double lo = 0.0;
    double up = 0.0;
    if (option.kind == OptionKind::call) {
      up = option.has_upper_barrier()
               ? 0.0
               : std::exp(grid.x_max) - K * std::exp(-market.r * (T - grid.t(l)));
    } else {
      lo = option.has_lower_barrier() ? 0.0 : K;
    }
    cond.lower[static_cast<std::size_t>(l)] = lo;
    cond.upper[static_cast<std::size_t>(l)] = up;
  }
  return cond;
}

// ---------------------------------------------------------------------------
// Discrete solution on the full grid, one row per time level.
// ---------------------------------------------------------------------------
struct SolutionSurface {
  GridSpec grid;
  MarketParams market;
  OptionSpec option;
  double theta = 0.0;
  std::vector<double> values; // (N+1) x (n+1), row-major in time

  std::size_t row_stride() const { return static_cast<std::size_t>(grid.n) + 1; }
  double value(int l, int i) const {
    return values[static_cast<std::size_t>(l) * row_stride() + static_cast<std::size_t>(i)];
  }
  double& at(int l, int i) {
    return values[static_cast<std::size_t>(l) * row_stride() + static_cast<std::size_t>(i)];
  }
};

// ---------------------------------------------------------------------------
// The weighted scheme.  Row k+1 solves
//
//   C u^{k+1} = sum_{j=0}^{k-1} (b_j - b_{j+1}) u^{k-j} + b_k u^0
//             + (1-theta) G^{k+1} + theta G^k + theta B u^k
//
// with C = theta I + (1-theta) A.  The memory convolution is evaluated
// directly at O(N^2) cost; alpha = 1 short-circuits it (the history term
// collapses to u^k).  With `project` set, each solved row is projected onto
// the obstacle u^0 (American early exercise); projected values are what the
// history convolution sees afterwards.
// ---------------------------------------------------------------------------
inline SolutionSurface solve_scheme(const MarketParams& market, const OptionSpec& option,
                                    const GridSpec& grid, double theta,
                                    const ConditionSet& cond, bool project) {
  market.validate();
  option.validate();
  grid.validate();
  SchemeParams{theta}.validate();

  const int n = grid.n;
  const int N = grid.N;
  const std::size_t m = static_cast<std::size_t>(n) - 1;
  const std::size_t stride = static_cast<std::size_t>(n) + 1;

  const OperatorSet ops = assemble_operators(market, grid, theta);
  const bool classical = market.alpha == 1.0;

  FracWeights w;
  std::vector<double> wdiff; // b_j - b_{j+1}
  if (!classical) {
    w = memory_weights(market.alpha, N, grid.dt());
    wdiff.resize(static_cast<std::size_t>(N));
    for (int j = 0; j < N; ++j)
      wdiff[static_cast<std::size_t>(j)] =
          w.b[static_cast<std::size_t>(j)] - w.b[static_cast<std::size_t>(j) + 1];
  }

  SolutionSurface s;
  s.grid = grid;
  s.market = market;
  s.option = option;
  s.theta = theta;
  s.values.assign(static_cast<std::size_t>(N + 1) * stride, 0.0);

  // Row 0 carries the initial condition at every node.  The l = 0 boundary
  // *formula* still enters the scheme through G^0 below; at the two corner
  // nodes the formulas may differ by truncation-level amounts.
  std::copy(cond.initial.begin(), cond.initial.end(), s.values.begin());

  const double* u0 = s.values.data() + 1; // interior obstacle / initial row

  std::vector<double> rhs(m);
  auto add_boundary = [&](int l, double weight) {
    if (weight == 0.0) return;
    rhs[0] += weight * ops.couple_lower * cond.lower[static_cast<std::size_t>(l)];
    rhs[m - 1] += weight * ops.couple_upper * cond.upper[static_cast<std::size_t>(l)];
  };

  for (int k = 0; k < N; ++k) {
    const double* uk = s.values.data() + static_cast<std::size_t>(k) * stride + 1;

    if (classical) {
      std::copy(uk, uk + m, rhs.begin());
    } else {
      const double bk = w.b[static_cast<std::size_t>(k)];
      for (std::size_t i = 0; i < m; ++i) rhs[i] = bk * u0[i];
      for (int j = 0; j < k; ++j) {
        const double wj = wdiff[static_cast<std::size_t>(j)];
        const double* ur = s.values.data() + static_cast<std::size_t>(k - j) * stride + 1;
        for (std::size_t i = 0; i < m; ++i) rhs[i] += wj * ur[i];
      }
    }

    add_boundary(k + 1, 1.0 - theta);
    add_boundary(k, theta);

    if (theta != 0.0) {
      for (std::size_t i = 0; i < m; ++i) {
        double bu = ops.B.diag[i] * uk[i];
        if (i > 0) bu += ops.B.sub[i - 1] * uk[i - 1];
        if (i + 1 < m) bu += ops.B.super[i] * uk[i + 1];
        rhs[i] += theta * bu;
      }
    }

    std::vector<double> sol = tridiagonal_solve(ops.C, rhs);
    if (project)
      for (std::size_t i = 0; i < m; ++i) sol[i] = std::max(sol[i], u0[i]);

    double* out = s.values.data() + static_cast<std::size_t>(k + 1) * stride;
    out[0] = cond.lower[static_cast<std::size_t>(k + 1)];
    std::copy(sol.begin(), sol.end(), out + 1);
    out[static_cast<std::size_t>(n)] = cond.upper[static_cast<std::size_t>(k + 1)];
  }
  return s;
}

// European-style solve: no early-exercise projection.  Accepts plain and
// knock-out contracts; knock-ins are rejected by the condition assembler.
inline SolutionSurface solve_european(const MarketParams& market, const OptionSpec& option,
                                      const GridSpec& grid, double theta) {
  const ConditionSet cond = assemble_conditions(option, market, grid);
  return solve_scheme(market, option, grid, theta, cond, /*project=*/false);
}

// American solve.  Puts run the projected scheme; calls delegate to the
// European solver (with zero dividends and r >= 0 the early-exercise
// constraint never binds for a call).
inline SolutionSurface solve_american_put(const MarketParams& market, const OptionSpec& option,
                                          const GridSpec& grid, double theta) {
  if (option.style != ExerciseStyle::american)
    throw ConfigError("solve_american_put: option style must be american");
  if (option.kind == OptionKind::call)
    return solve_european(market, option, grid, theta);
  const ConditionSet cond = assemble_conditions(option, market, grid);
  return solve_scheme(market, option, grid, theta, cond, /*project=*/true);
}

// ---------------------------------------------------------------------------
// Price read-out at spot z0 from the final row (calendar time zero after the
// time reversal), linear interpolation in x = ln z.  Outside the grid a
// knock-out contract is void (price 0); a barrier-free contract clamps to
// the nearest edge.
// ---------------------------------------------------------------------------
inline double price_at(const SolutionSurface& s, double z0) {
  if (!(z0 > 0.0))
    throw DomainError("price_at: z0 must be > 0, got " + std::to_string(z0));
  const GridSpec& g = s.grid;
  const double x = std::log(z0);
  if (x < g.x_min || x > g.x_max) {
    if (s.option.is_knock_out()) return 0.0;
    return s.value(g.N, x < g.x_min ? 0 : g.n);
  }
  const double pos = (x - g.x_min) / g.dx();
  int i = static_cast<int>(std::floor(pos));
  if (i >= g.n) i = g.n - 1;
  if (i < 0) i = 0;
  const double frac = pos - i;
  return (1.0 - frac) * s.value(g.N, i) + frac * s.value(g.N, i + 1);
}

// ---------------------------------------------------------------------------
// One-call pricing front door.
//
// Knock-outs and plain contracts are discretized directly on their natural
// bounds (barrier bounds pinned to ln H).  Knock-ins price both legs and
// apply parity, the vanilla leg on the plain default bounds.
// ---------------------------------------------------------------------------
inline double price_option_fd(const MarketParams& market, const OptionSpec& option,
                              int n, int N, double theta,
                              double x_min = kDefaultXMin, double x_max = kDefaultXMax) {
  market.validate();
  option.validate();

  if (option.is_knock_in()) {
    const double ko = price_option_fd(market, option.knock_out_leg(), n, N, theta, x_min, x_max);
    const double van = price_option_fd(market, option.vanilla_leg(), n, N, theta, x_min, x_max);
    return in_out_parity(van, ko);
  }

  const GridSpec grid = make_grid(option, n, N, x_min, x_max);
  const SolutionSurface s =
      (option.style == ExerciseStyle::american && option.kind == OptionKind::put)
          ? solve_american_put(market, option, grid, theta)
          : solve_european(market, option, grid, theta);
  return price_at(s, market.z0);
}

} // namespace subdiff

#pragma once

#include <cmath>
#include <string>

#include "subdiff/contracts.hpp"
#include "subdiff/errors.hpp"

namespace subdiff {

// ---------------------------------------------------------------------------
// Uniform log-price/time grid.
//
// Space nodes x_i = x_min + i*dx, i = 0..n; time nodes t_l = l*dt, l = 0..N,
// with dt = maturity / N.  For barrier contracts the relevant bound must
// coincide with ln(H) so the barrier sits exactly on a grid boundary.
// ---------------------------------------------------------------------------
struct GridSpec {
  int n = 0;             // space intervals (n+1 nodes)
  int N = 0;             // time steps (N+1 rows)
  double x_min = 0.0;    // lower log-price bound
  double x_max = 0.0;    // upper log-price bound
  double maturity = 0.0; // T, used to derive dt

  double dx() const { return (x_max - x_min) / n; }
  double dt() const { return maturity / N; }
  double x(int i) const { return x_min + i * dx(); }
  double t(int l) const { return l * dt(); }

  void validate() const {
    if (n < 2) throw DomainError("GridSpec: n must be >= 2, got " + std::to_string(n));
    if (N < 1) throw DomainError("GridSpec: N must be >= 1, got " + std::to_string(N));
    if (!(x_min < x_max)) throw DomainError("GridSpec: x_min must be < x_max");
    if (!(maturity > 0.0)) throw DomainError("GridSpec: maturity must be > 0");
  }
};

// Default truncation bounds for barrier-free contracts, matching the
// resolutions used throughout the numerical studies.
inline constexpr double kDefaultXMin = -20.0;
inline constexpr double kDefaultXMax = 10.0;

// ---------------------------------------------------------------------------
// Build the grid for an option: barrier bounds are pinned to ln(H) exactly,
// barrier-free bounds come from the defaults (or caller overrides).
// ---------------------------------------------------------------------------
inline GridSpec make_grid(const OptionSpec& option, int n, int N,
                          double x_min = kDefaultXMin, double x_max = kDefaultXMax) {
  option.validate();
  GridSpec grid;
  grid.n = n;
  grid.N = N;
  grid.maturity = option.maturity;
  grid.x_min = option.has_lower_barrier() ? std::log(option.lower_barrier) : x_min;
  grid.x_max = option.has_upper_barrier() ? std::log(option.upper_barrier) : x_max;
  grid.validate();
  return grid;
}

} // namespace subdiff

#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "subdiff/errors.hpp"

namespace subdiff {

// ---------------------------------------------------------------------------
// Market model parameters.
//
// The model is a subdiffusive geometric Brownian motion: the classical GBM
// run on the clock of an inverse alpha-stable subordinator.  alpha = 1 is the
// classical Black-Scholes limit.  The dividend rate is fixed to zero for the
// whole engine and deliberately not exposed as a field.
// ---------------------------------------------------------------------------
struct MarketParams {
  double r = 0.0;      // risk-free rate, 1/year
  double sigma = 0.0;  // volatility, 1/sqrt(year)
  double alpha = 1.0;  // subdiffusion exponent, in (0,1]; 1 = classical
  double z0 = 0.0;     // spot price

  void validate() const {
    if (!(sigma > 0.0))
      throw DomainError("MarketParams: sigma must be > 0, got " + std::to_string(sigma));
    if (!(r >= 0.0))
      throw DomainError("MarketParams: r must be >= 0, got " + std::to_string(r));
    if (!(alpha > 0.0 && alpha <= 1.0))
      throw DomainError("MarketParams: alpha must lie in (0,1], got " + std::to_string(alpha));
    if (!(z0 > 0.0))
      throw DomainError("MarketParams: z0 must be > 0, got " + std::to_string(z0));
  }
};

enum class OptionKind { call, put };
enum class ExerciseStyle { european, american };

// Barrier variants.  Knock-in contracts are never discretized directly: they
// are always priced through in-out parity against the matching knock-out leg.
enum class BarrierKind {
  none,
  up_out,
  up_in,
  down_out,
  down_in,
  double_out,
  double_in
};

inline const char* to_string(OptionKind k) {
  return k == OptionKind::call ? "call" : "put";
}

inline const char* to_string(ExerciseStyle s) {
  return s == ExerciseStyle::european ? "european" : "american";
}

inline const char* to_string(BarrierKind b) {
  switch (b) {
    case BarrierKind::none: return "none";
    case BarrierKind::up_out: return "up_out";
    case BarrierKind::up_in: return "up_in";
    case BarrierKind::down_out: return "down_out";
    case BarrierKind::down_in: return "down_in";
    case BarrierKind::double_out: return "double_out";
    case BarrierKind::double_in: return "double_in";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Option contract.
// ---------------------------------------------------------------------------
struct OptionSpec {
  OptionKind kind = OptionKind::call;
  ExerciseStyle style = ExerciseStyle::european;
  BarrierKind barrier = BarrierKind::none;
  double strike = 0.0;         // K
  double maturity = 0.0;       // T, years
  double lower_barrier = 0.0;  // H-, used by down_* and double_*
  double upper_barrier = 0.0;  // H+, used by up_* and double_*

  bool has_lower_barrier() const {
    return barrier == BarrierKind::down_out || barrier == BarrierKind::down_in ||
           barrier == BarrierKind::double_out || barrier == BarrierKind::double_in;
  }
  bool has_upper_barrier() const {
    return barrier == BarrierKind::up_out || barrier == BarrierKind::up_in ||
           barrier == BarrierKind::double_out || barrier == BarrierKind::double_in;
  }
  bool is_knock_in() const {
    return barrier == BarrierKind::up_in || barrier == BarrierKind::down_in ||
           barrier == BarrierKind::double_in;
  }
  bool is_knock_out() const {
    return barrier == BarrierKind::up_out || barrier == BarrierKind::down_out ||
           barrier == BarrierKind::double_out;
  }

  // The knock-out contract whose price complements this knock-in under parity.
  OptionSpec knock_out_leg() const {
    OptionSpec leg = *this;
    switch (barrier) {
      case BarrierKind::up_in: leg.barrier = BarrierKind::up_out; break;
      case BarrierKind::down_in: leg.barrier = BarrierKind::down_out; break;
      case BarrierKind::double_in: leg.barrier = BarrierKind::double_out; break;
      default:
        throw ConfigError("knock_out_leg: option is not a knock-in contract");
    }
    return leg;
  }

  // The barrier-free contract used as the vanilla leg in parity.
  OptionSpec vanilla_leg() const {
    OptionSpec leg = *this;
    leg.barrier = BarrierKind::none;
    leg.lower_barrier = 0.0;
    leg.upper_barrier = 0.0;
    return leg;
  }

  void validate() const {
    if (!(strike > 0.0))
      throw DomainError("OptionSpec: strike must be > 0, got " + std::to_string(strike));
    if (!(maturity > 0.0))
      throw DomainError("OptionSpec: maturity must be > 0, got " + std::to_string(maturity));
    if (has_lower_barrier() && !(lower_barrier > 0.0))
      throw DomainError("OptionSpec: lower barrier must be > 0, got " +
                        std::to_string(lower_barrier));
    if (has_upper_barrier() && !(upper_barrier > 0.0))
      throw DomainError("OptionSpec: upper barrier must be > 0, got " +
                        std::to_string(upper_barrier));
    if ((barrier == BarrierKind::double_out || barrier == BarrierKind::double_in) &&
        !(lower_barrier < upper_barrier))
      throw DomainError("OptionSpec: double barrier requires H- < H+");
  }
};

// ---------------------------------------------------------------------------
// Scheme weighting parameter.  theta = 1 is the fully explicit scheme,
// theta = 0 the fully implicit one; theta = 1/2 is Crank-Nicolson in the
// classical limit.
// ---------------------------------------------------------------------------
struct SchemeParams {
  double theta = 0.0;

  void validate() const {
    if (!(theta >= 0.0 && theta <= 1.0))
      throw DomainError("SchemeParams: theta must lie in [0,1], got " + std::to_string(theta));
  }
};

// ---------------------------------------------------------------------------
// Payoff at asset level z.  Barrier indicator logic is *not* applied here:
// barrier contracts are handled by grid truncation in the FD engine, and
// knock-ins by parity.
// ---------------------------------------------------------------------------
inline double intrinsic_payoff(const OptionSpec& option, double z) {
  if (!(z > 0.0))
    throw DomainError("intrinsic_payoff: z must be > 0, got " + std::to_string(z));
  if (option.kind == OptionKind::call) return std::max(z - option.strike, 0.0);
  return std::max(option.strike - z, 0.0);
}

// ---------------------------------------------------------------------------
// In-out parity: knock_in = vanilla - knock_out.
//
// Small negative results (solver noise) are clamped to zero; a violation
// beyond `tolerance` (relative, with an absolute floor of 1e-12 near zero)
// indicates the two legs were priced inconsistently and raises
// ParityViolation.
// ---------------------------------------------------------------------------
inline double in_out_parity(double vanilla, double knock_out, double tolerance = 1e-8) {
  if (!(vanilla >= 0.0) || !(knock_out >= 0.0))
    throw DomainError("in_out_parity: both leg prices must be >= 0");
  const double diff = vanilla - knock_out;
  if (diff >= 0.0) return diff;
  const double scale = std::max(vanilla, knock_out);
  const double threshold = std::max(tolerance * scale, 1e-12);
  if (-diff > threshold)
    throw ParityViolation("in_out_parity: knock-out price " + std::to_string(knock_out) +
                          " exceeds vanilla price " + std::to_string(vanilla) +
                          " beyond tolerance");
  return 0.0;
}

} // namespace subdiff

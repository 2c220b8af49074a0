#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "subdiff/contracts.hpp"
#include "subdiff/errors.hpp"

namespace subdiff {

// Standard normal CDF via the complementary error function; accurate to
// ~1e-15 absolute over the whole real line.
inline double norm_cdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

inline double norm_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

// ---------------------------------------------------------------------------
// Classical Black-Scholes price of a plain European option (zero dividends).
// Valid in the alpha = 1 limit of the model only.  As sigma*sqrt(T) -> 0 the
// price tends to the discounted intrinsic value, which is returned directly
// when the total volatility underflows.
// ---------------------------------------------------------------------------
inline double bs_vanilla(OptionKind kind, double z0, double strike, double r, double sigma,
                         double maturity) {
  if (!(z0 > 0.0) || !(strike > 0.0))
    throw DomainError("bs_vanilla: z0 and strike must be > 0");
  if (!(sigma > 0.0) || !(maturity > 0.0))
    throw DomainError("bs_vanilla: sigma and maturity must be > 0");

  const double vol = sigma * std::sqrt(maturity);
  const double disc_k = strike * std::exp(-r * maturity);
  if (vol < 1e-12) {
    const double fwd = z0 - disc_k;
    return kind == OptionKind::call ? std::max(fwd, 0.0) : std::max(-fwd, 0.0);
  }
  const double d1 = (std::log(z0 / strike) + (r + 0.5 * sigma * sigma) * maturity) / vol;
  const double d2 = d1 - vol;
  if (kind == OptionKind::call) return z0 * norm_cdf(d1) - disc_k * norm_cdf(d2);
  return disc_k * norm_cdf(-d2) - z0 * norm_cdf(-d1);
}

// ---------------------------------------------------------------------------
// Classical closed form for the European down-and-out call (barrier H below
// the strike), by the reflection principle:
//
//   C = Z0 P(y1) - K e^{-rT} P(y1 - s) - Z0 (H/Z0)^{2l/s^2+2} P(y2)
//       + K e^{-rT} (H/Z0)^{2l/s^2} P(y2 - s)
//
// with s = sigma sqrt(T), l = r - sigma^2/2,
//   y1 = [ln(Z0/K) + (r + sigma^2/2) T] / s,
//   y2 = [ln(H^2/(K Z0)) + (r + sigma^2/2) T] / s.
//
// A spot at or below the barrier is already knocked out (price 0).  When the
// reflected-terms' normal probabilities underflow to zero the barrier
// correction is dropped entirely, avoiding a 0 * inf indeterminate for
// negative drift exponents.
// ---------------------------------------------------------------------------
inline double bs_down_and_out_call(double z0, double strike, double r, double sigma,
                                   double maturity, double barrier) {
  if (!(z0 > 0.0) || !(strike > 0.0) || !(barrier > 0.0))
    throw DomainError("bs_down_and_out_call: prices must be > 0");
  if (!(sigma > 0.0) || !(maturity > 0.0))
    throw DomainError("bs_down_and_out_call: sigma and maturity must be > 0");
  if (barrier > strike)
    throw DomainError("bs_down_and_out_call: formula requires H <= K");
  if (z0 <= barrier) return 0.0;

  const double s = sigma * std::sqrt(maturity);
  const double mu2 = (r + 0.5 * sigma * sigma) * maturity;
  const double disc_k = strike * std::exp(-r * maturity);
  const double y1 = (std::log(z0 / strike) + mu2) / s;
  const double y2 = (std::log(barrier * barrier / (strike * z0)) + mu2) / s;

  const double vanilla = z0 * norm_cdf(y1) - disc_k * norm_cdf(y1 - s);
  const double phi_y2 = norm_cdf(y2);
  const double phi_y2s = norm_cdf(y2 - s);
  if (phi_y2 == 0.0 && phi_y2s == 0.0) return vanilla;

  const double lam = r - 0.5 * sigma * sigma;
  const double expo = 2.0 * lam / (sigma * sigma);
  const double ratio = barrier / z0;
  return vanilla - z0 * std::pow(ratio, expo + 2.0) * phi_y2 +
         disc_k * std::pow(ratio, expo) * phi_y2s;
}

// ---------------------------------------------------------------------------
// Cox-Ross-Rubinstein binomial price of a plain American put.
// ---------------------------------------------------------------------------
inline double binomial_american_put(double z0, double strike, double r, double sigma,
                                    double maturity, int steps = 5000) {
  if (!(z0 > 0.0) || !(strike > 0.0))
    throw DomainError("binomial_american_put: z0 and strike must be > 0");
  if (!(sigma > 0.0) || !(maturity > 0.0))
    throw DomainError("binomial_american_put: sigma and maturity must be > 0");
  if (steps < 1)
    throw DomainError("binomial_american_put: steps must be >= 1");

  const double dt = maturity / steps;
  const double up = std::exp(sigma * std::sqrt(dt));
  const double down = 1.0 / up;
  const double grow = std::exp(r * dt);
  const double prob = (grow - down) / (up - down);
  if (!(prob > 0.0 && prob < 1.0))
    throw SolverError("binomial_american_put: risk-neutral probability outside (0,1); "
                      "increase steps");
  const double disc = 1.0 / grow;

  // Asset values at maturity: z0 * up^j * down^(steps-j), j = 0..steps.
  std::vector<double> value(static_cast<std::size_t>(steps) + 1);
  for (int j = 0; j <= steps; ++j) {
    const double z = z0 * std::pow(up, j) * std::pow(down, steps - j);
    value[static_cast<std::size_t>(j)] = std::max(strike - z, 0.0);
  }
  for (int i = steps - 1; i >= 0; --i) {
    for (int j = 0; j <= i; ++j) {
      const double cont =
          disc * (prob * value[static_cast<std::size_t>(j) + 1] + (1.0 - prob) * value[static_cast<std::size_t>(j)]);
      const double z = z0 * std::pow(up, j) * std::pow(down, i - j);
      value[static_cast<std::size_t>(j)] = std::max(cont, strike - z);
    }
  }
  return value[0];
}

// ---------------------------------------------------------------------------
// Dispatcher: route a contract to the matching classical oracle.  Only the
// alpha = 1 limit has closed forms; anything else is a domain error, and
// contracts with no oracle raise ConfigError.
// ---------------------------------------------------------------------------
struct OracleResult {
  double price = 0.0;
  std::string method;
  std::map<std::string, double> params;
};

inline OracleResult oracle_price(const MarketParams& market, const OptionSpec& option,
                                 int binomial_steps = 5000) {
  market.validate();
  option.validate();
  if (market.alpha != 1.0)
    throw DomainError("oracle_price: closed-form oracles exist only for alpha = 1");

  OracleResult res;
  res.params = {{"r", market.r},           {"sigma", market.sigma},
                {"alpha", market.alpha},   {"z0", market.z0},
                {"strike", option.strike}, {"maturity", option.maturity}};

  const bool call = option.kind == OptionKind::call;
  const bool american = option.style == ExerciseStyle::american;

  switch (option.barrier) {
    case BarrierKind::none:
      if (!american || call) {
        // American calls coincide with European ones (no dividends, r >= 0).
        res.price = bs_vanilla(option.kind, market.z0, option.strike, market.r, market.sigma,
                               option.maturity);
        res.method = "black_scholes";
      } else {
        res.price = binomial_american_put(market.z0, option.strike, market.r, market.sigma,
                                          option.maturity, binomial_steps);
        res.method = "crr_binomial";
        res.params["steps"] = binomial_steps;
      }
      return res;
    case BarrierKind::down_out:
      if (call && !american) {
        res.price = bs_down_and_out_call(market.z0, option.strike, market.r, market.sigma,
                                         option.maturity, option.lower_barrier);
        res.method = "reflection_closed_form";
        res.params["lower_barrier"] = option.lower_barrier;
        return res;
      }
      break;
    case BarrierKind::down_in:
      if (call && !american) {
        const double van = bs_vanilla(option.kind, market.z0, option.strike, market.r,
                                      market.sigma, option.maturity);
        const double ko = bs_down_and_out_call(market.z0, option.strike, market.r, market.sigma,
                                               option.maturity, option.lower_barrier);
        res.price = in_out_parity(van, ko);
        res.method = "parity_closed_form";
        res.params["lower_barrier"] = option.lower_barrier;
        return res;
      }
      break;
    default:
      break;
  }
  throw ConfigError(std::string("oracle_price: no closed-form oracle for this contract (") +
                    to_string(option.kind) + "/" + to_string(option.style) + "/" +
                    to_string(option.barrier) + ")");
}

} // namespace subdiff

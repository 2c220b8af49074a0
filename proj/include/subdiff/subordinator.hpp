#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "subdiff/contracts.hpp"
#include "subdiff/errors.hpp"

namespace subdiff {

namespace detail {

// splitmix64 finalizer; used to derive well-separated engine keys.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

} // namespace detail

// ---------------------------------------------------------------------------
// Reproducible RNG stream addressing.  A (seed, stream) pair plus a small
// role index yields an independent engine; path j of a simulation uses
// stream_id = j, so results are bit-identical for a given seed regardless of
// how paths are scheduled across threads.
// ---------------------------------------------------------------------------
struct RngStream {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;

  std::mt19937_64 engine(std::uint64_t role) const {
    std::uint64_t k = detail::splitmix64(seed);
    k = detail::splitmix64(k ^ stream_id);
    k = detail::splitmix64(k ^ role);
    return std::mt19937_64(k);
  }
};

// ---------------------------------------------------------------------------
// One increment of the strictly increasing alpha-stable subordinator over an
// operational time step dtau, normalized so that
//
//   E exp(-u * U(dtau)) = exp(-dtau * u^alpha).
//
// Sampled by the Kanter transform: with V uniform on (0,pi) and E a unit
// exponential,
//
//   eta = sin(alpha V) (sin((1-alpha) V))^{(1-alpha)/alpha}
//         / ( (sin V)^{1/alpha} E^{(1-alpha)/alpha} ),
//
// and the increment is dtau^{1/alpha} * eta.  Defined for alpha in (0,1)
// strictly; the alpha = 1 limit (deterministic clock) is handled at the path
// level, not here.
// ---------------------------------------------------------------------------
inline double stable_subordinator_increment(double alpha, double dtau, std::mt19937_64& rng) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw DomainError("stable_subordinator_increment: alpha must lie in (0,1), got " +
                      std::to_string(alpha));
  if (!(dtau > 0.0))
    throw DomainError("stable_subordinator_increment: dtau must be > 0");

  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::exponential_distribution<double> expo(1.0);
  double u = 0.0;
  do { u = unif(rng); } while (u <= 0.0);
  double e = 0.0;
  do { e = expo(rng); } while (e <= 0.0);

  const double v = std::numbers::pi * u;
  const double frac = (1.0 - alpha) / alpha;
  const double eta = std::sin(alpha * v) *
                     std::pow(std::sin((1.0 - alpha) * v) / e, frac) /
                     std::pow(std::sin(v), 1.0 / alpha);
  return std::pow(dtau, 1.0 / alpha) * eta;
}

// ---------------------------------------------------------------------------
// Inverse subordinator path on the calendar grid t_i = i*T/m, i = 0..m, by
// grid inversion of a simulated subordinator trajectory with operational
// resolution dtau:
//
//   S(t) = dtau * min{ k >= 1 : U(k*dtau) > t },   S(0) = 0 exactly.
//
// The strict crossing makes the estimate an over-approximation by at most
// dtau.  For alpha = 1 the path is the identity clock S(t) = t.
// ---------------------------------------------------------------------------
inline std::vector<double> inverse_subordinator_path(double alpha, double T, int m, double dtau,
                                                     std::mt19937_64& rng) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw DomainError("inverse_subordinator_path: alpha must lie in (0,1]");
  if (!(T > 0.0)) throw DomainError("inverse_subordinator_path: T must be > 0");
  if (m < 1) throw DomainError("inverse_subordinator_path: m must be >= 1");
  if (!(dtau > 0.0)) throw DomainError("inverse_subordinator_path: dtau must be > 0");

  std::vector<double> s(static_cast<std::size_t>(m) + 1, 0.0);
  if (alpha == 1.0) {
    for (int i = 1; i <= m; ++i) s[static_cast<std::size_t>(i)] = T * i / m;
    return s;
  }
  double level = 0.0; // U(k*dtau)
  long long k = 0;
  for (int i = 1; i <= m; ++i) {
    const double t = T * i / m;
    while (level <= t) {
      ++k;
      level += stable_subordinator_increment(alpha, dtau, rng);
    }
    s[static_cast<std::size_t>(i)] = static_cast<double>(k) * dtau;
  }
  return s;
}

// Default operational resolution: a tenth of the calendar step.
inline std::vector<double> inverse_subordinator_path(double alpha, double T, int m,
                                                     std::mt19937_64& rng) {
  return inverse_subordinator_path(alpha, T, m, T / (10.0 * m), rng);
}

// ---------------------------------------------------------------------------
// Ensemble of subdiffusive GBM paths
//
//   Z_j(t_i) = z0 * exp( nu * S_j(t_i) + sigma * W_j(S_j(t_i)) ),
//
// with per-path inverse subordinator clocks S_j and Brownian increments drawn
// with variance equal to the clock increments.  During the flat periods of S
// the asset stays constant — the hallmark of subdiffusive dynamics.
// ---------------------------------------------------------------------------
struct PathEnsemble {
  std::vector<double> times;             // m+1 calendar times
  std::vector<double> values;            // M x (m+1), row-major asset paths
  std::vector<double> operational_times; // M x (m+1), S_alpha at the calendar nodes
  int paths = 0;
  std::uint64_t seed = 0;

  int steps() const { return static_cast<int>(times.size()) - 1; }
  double value(int path, int i) const {
    return values[static_cast<std::size_t>(path) * times.size() + static_cast<std::size_t>(i)];
  }
  double operational(int path, int i) const {
    return operational_times[static_cast<std::size_t>(path) * times.size() +
                             static_cast<std::size_t>(i)];
  }
};

inline PathEnsemble subdiffusive_gbm_paths(const MarketParams& market, double T, int m, int M,
                                           std::uint64_t seed,
                                           std::optional<double> drift = std::nullopt,
                                           int workers = 1) {
  market.validate();
  if (!(T > 0.0)) throw DomainError("subdiffusive_gbm_paths: T must be > 0");
  if (m < 2) throw DomainError("subdiffusive_gbm_paths: m must be >= 2");
  if (M < 1) throw DomainError("subdiffusive_gbm_paths: M must be >= 1");
  if (workers < 1) workers = 1;

  PathEnsemble ens;
  ens.paths = M;
  ens.seed = seed;
  ens.times.resize(static_cast<std::size_t>(m) + 1);
  for (int i = 0; i <= m; ++i) ens.times[static_cast<std::size_t>(i)] = T * i / m;
  ens.values.assign(static_cast<std::size_t>(M) * (m + 1), 0.0);
  ens.operational_times.assign(static_cast<std::size_t>(M) * (m + 1), 0.0);

  // Operational-time risk-neutral drift; overridable for diagnostics.
  const double nu = drift.has_value() ? *drift : market.r - 0.5 * market.sigma * market.sigma;
  const double sigma = market.sigma;
  const double z0 = market.z0;
  const double dtau = T / (10.0 * m);

  auto run_path = [&](int j) {
    const RngStream stream{seed, static_cast<std::uint64_t>(j)};
    std::mt19937_64 rng_s = stream.engine(0);
    std::mt19937_64 rng_w = stream.engine(1);
    const std::vector<double> s =
        inverse_subordinator_path(market.alpha, T, m, dtau, rng_s);
    std::normal_distribution<double> gauss(0.0, 1.0);

    double* vrow = ens.values.data() + static_cast<std::size_t>(j) * (m + 1);
    double* orow = ens.operational_times.data() + static_cast<std::size_t>(j) * (m + 1);
    vrow[0] = z0;
    orow[0] = 0.0;
    double w = 0.0; // W(S(t_i)), accumulated
    for (int i = 1; i <= m; ++i) {
      const double ds = s[static_cast<std::size_t>(i)] - s[static_cast<std::size_t>(i) - 1];
      if (ds > 0.0) w += std::sqrt(ds) * gauss(rng_w);
      orow[i] = s[static_cast<std::size_t>(i)];
      vrow[i] = z0 * std::exp(nu * orow[i] + sigma * w);
    }
  };

  if (workers == 1 || M == 1) {
    for (int j = 0; j < M; ++j) run_path(j);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (int j = w; j < M; j += workers) run_path(j);
      });
    for (auto& th : pool) th.join();
  }
  return ens;
}

// ---------------------------------------------------------------------------
// CSV export: a documented header, then one block per path introduced by a
// `# path <index>` line, with columns t, S_alpha, Z.
// ---------------------------------------------------------------------------
inline void write_paths_csv(std::ostream& os, const PathEnsemble& ens) {
  os << "# subdiffusive GBM sample paths: paths=" << ens.paths << ", seed=" << ens.seed
     << "; one block per path, introduced by a '# path <index>' line\n";
  os << "t,S_alpha,Z\n";
  os.precision(17);
  const int m = ens.steps();
  for (int j = 0; j < ens.paths; ++j) {
    os << "# path " << j << "\n";
    for (int i = 0; i <= m; ++i)
      os << ens.times[static_cast<std::size_t>(i)] << "," << ens.operational(j, i) << ","
         << ens.value(j, i) << "\n";
  }
}

} // namespace subdiff

#ifndef SUBDIFF_RUNNER_HPP
#define SUBDIFF_RUNNER_HPP

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "subdiff/contracts.hpp"
#include "subdiff/errors.hpp"
#include "subdiff/frac_fd.hpp"
#include "subdiff/grid.hpp"
#include "subdiff/longstaff_schwartz.hpp"
#include "subdiff/oracles.hpp"
#include "subdiff/subordinator.hpp"

namespace subdiff {

enum class Method { fd, ls, oracle };

enum class SweepAxis { z0, strike, theta, alpha, maturity };

inline const char* to_string(Method m) {
  switch (m) {
    case Method::fd: return "fd";
    case Method::ls: return "ls";
    case Method::oracle: return "oracle";
  }
  return "?";
}

inline const char* to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::z0: return "z0";
    case SweepAxis::strike: return "strike";
    case SweepAxis::theta: return "theta";
    case SweepAxis::alpha: return "alpha";
    case SweepAxis::maturity: return "maturity";
  }
  return "?";
}

// Scheme weight: either an explicit number or "optimal", resolved against the
// (possibly swept) alpha at run time.
struct ThetaChoice {
  bool optimal = true;
  double value = 0.0;

  double resolve(double alpha) const { return optimal ? theta_optimal(alpha) : value; }
};

struct GridChoice {
  int n = 0; // space intervals; 0 = unset
  int N = 0; // time steps; 0 = unset
  std::optional<double> x_min;
  std::optional<double> x_max;
  std::vector<int> resolutions; // when non-empty: square grids n = N = R
};

struct SweepSpec {
  SweepAxis axis = SweepAxis::z0;
  std::vector<double> values;
};

struct McParams {
  int paths = 10000;
  int steps = 50;
  int basis = 3;
  std::uint64_t seed = 1;
  std::optional<double> drift;
};

struct OutputSpec {
  std::string path;          // empty = stdout
  std::string format = "csv";
};

struct RunConfig {
  MarketParams market;
  OptionSpec option;
  GridChoice grid;
  ThetaChoice theta;
  Method method = Method::fd;
  McParams mc;
  std::optional<SweepSpec> sweep;
  OutputSpec output;
  int workers = 1;
};

// One line of a report: the parameters actually used, the price, and (when a
// classical oracle applies) the reference value and relative error.
struct ReportRow {
  std::string kind;
  std::string style;
  std::string barrier;
  double strike = 0.0;
  double maturity = 0.0;
  double lower_barrier = 0.0;
  double upper_barrier = 0.0;
  double r = 0.0;
  double sigma = 0.0;
  double alpha = 0.0;
  double z0 = 0.0;
  std::string method;
  std::string oracle_method; // filled for method = oracle
  double theta = 0.0;
  int n = 0;
  int N = 0;
  int paths = 0;
  int steps = 0;
  std::uint64_t seed = 0;
  double price = 0.0;
  std::optional<double> reference;
  std::optional<double> rel_error;
  std::optional<double> std_error;
  double runtime_seconds = 0.0;
};

// ---------------------------------------------------------------------------
// Config file parsing.  The format is INI-style key = value lines under
// [section] headers; '#' and ';' start comments; keys are case-sensitive.
// Errors carry file name and line number.
// ---------------------------------------------------------------------------
namespace cfg_detail {

inline std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

inline double parse_double(const std::string& v, const std::string& ctx) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return x;
  } catch (const std::exception&) {
    throw ConfigError(ctx + ": invalid number '" + v + "'");
  }
}

inline int parse_int(const std::string& v, const std::string& ctx) {
  try {
    std::size_t pos = 0;
    const int x = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return x;
  } catch (const std::exception&) {
    throw ConfigError(ctx + ": invalid integer '" + v + "'");
  }
}

inline std::uint64_t parse_u64(const std::string& v, const std::string& ctx) {
  try {
    std::size_t pos = 0;
    const unsigned long long x = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return static_cast<std::uint64_t>(x);
  } catch (const std::exception&) {
    throw ConfigError(ctx + ": invalid unsigned integer '" + v + "'");
  }
}

} // namespace cfg_detail

inline RunConfig parse_config(std::istream& in, const std::string& name = "<config>") {
  using cfg_detail::parse_double;
  using cfg_detail::parse_int;
  using cfg_detail::parse_u64;
  using cfg_detail::split;
  using cfg_detail::trim;

  RunConfig cfg;
  SweepSpec sweep;
  bool sweep_present = false;
  bool sweep_axis_set = false;
  std::optional<double> sweep_from, sweep_to, sweep_step;

  std::string line;
  std::string section;
  int lineno = 0;
  auto ctx = [&](void) { return name + ":" + std::to_string(lineno); };

  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t cut = line.find_first_of("#;");
    if (cut != std::string::npos) line.erase(cut);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(ctx() + ": unterminated section header '" + line + "'");
      section = trim(line.substr(1, line.size() - 2));
      static const char* known[] = {"market", "option", "grid",  "scheme",
                                    "method", "monte_carlo", "sweep", "output"};
      if (std::find_if(std::begin(known), std::end(known),
                       [&](const char* k) { return section == k; }) == std::end(known))
        throw ConfigError(ctx() + ": unknown section [" + section + "]");
      if (section == "sweep") sweep_present = true;
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(ctx() + ": expected 'key = value', got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError(ctx() + ": empty key or value");
    const std::string kctx = ctx() + " [" + section + "] " + key;

    if (section == "market") {
      if (key == "r") cfg.market.r = parse_double(value, kctx);
      else if (key == "sigma") cfg.market.sigma = parse_double(value, kctx);
      else if (key == "alpha") cfg.market.alpha = parse_double(value, kctx);
      else if (key == "z0") cfg.market.z0 = parse_double(value, kctx);
      else throw ConfigError(kctx + ": unknown key");
    } else if (section == "option") {
      if (key == "kind") {
        if (value == "call") cfg.option.kind = OptionKind::call;
        else if (value == "put") cfg.option.kind = OptionKind::put;
        else throw ConfigError(kctx + ": expected call|put, got '" + value + "'");
      } else if (key == "style") {
        if (value == "european") cfg.option.style = ExerciseStyle::european;
        else if (value == "american") cfg.option.style = ExerciseStyle::american;
        else throw ConfigError(kctx + ": expected european|american, got '" + value + "'");
      } else if (key == "barrier") {
        if (value == "none") cfg.option.barrier = BarrierKind::none;
        else if (value == "up_out") cfg.option.barrier = BarrierKind::up_out;
        else if (value == "up_in") cfg.option.barrier = BarrierKind::up_in;
        else if (value == "down_out") cfg.option.barrier = BarrierKind::down_out;
        else if (value == "down_in") cfg.option.barrier = BarrierKind::down_in;
        else if (value == "double_out") cfg.option.barrier = BarrierKind::double_out;
        else if (value == "double_in") cfg.option.barrier = BarrierKind::double_in;
        else throw ConfigError(kctx + ": unknown barrier kind '" + value + "'");
      } else if (key == "strike") cfg.option.strike = parse_double(value, kctx);
      else if (key == "maturity") cfg.option.maturity = parse_double(value, kctx);
      else if (key == "lower_barrier") cfg.option.lower_barrier = parse_double(value, kctx);
      else if (key == "upper_barrier") cfg.option.upper_barrier = parse_double(value, kctx);
      else throw ConfigError(kctx + ": unknown key");
    } else if (section == "grid") {
      if (key == "n") cfg.grid.n = parse_int(value, kctx);
      else if (key == "N") cfg.grid.N = parse_int(value, kctx);
      else if (key == "x_min") cfg.grid.x_min = parse_double(value, kctx);
      else if (key == "x_max") cfg.grid.x_max = parse_double(value, kctx);
      else if (key == "z_min") {
        const double z = parse_double(value, kctx);
        if (!(z > 0.0)) throw ConfigError(kctx + ": z_min must be > 0");
        cfg.grid.x_min = std::log(z);
      } else if (key == "z_max") {
        const double z = parse_double(value, kctx);
        if (!(z > 0.0)) throw ConfigError(kctx + ": z_max must be > 0");
        cfg.grid.x_max = std::log(z);
      } else if (key == "resolutions") {
        cfg.grid.resolutions.clear();
        for (const std::string& item : split(value, ','))
          if (!item.empty()) cfg.grid.resolutions.push_back(parse_int(item, kctx));
        if (cfg.grid.resolutions.empty())
          throw ConfigError(kctx + ": empty resolution list");
      } else throw ConfigError(kctx + ": unknown key");
    } else if (section == "scheme") {
      if (key == "theta") {
        if (value == "optimal") cfg.theta = ThetaChoice{true, 0.0};
        else cfg.theta = ThetaChoice{false, parse_double(value, kctx)};
      } else throw ConfigError(kctx + ": unknown key");
    } else if (section == "method") {
      if (key == "type") {
        if (value == "fd") cfg.method = Method::fd;
        else if (value == "ls") cfg.method = Method::ls;
        else if (value == "oracle") cfg.method = Method::oracle;
        else throw ConfigError(kctx + ": expected fd|ls|oracle, got '" + value + "'");
      } else throw ConfigError(kctx + ": unknown key");
    } else if (section == "monte_carlo") {
      if (key == "paths") cfg.mc.paths = parse_int(value, kctx);
      else if (key == "steps") cfg.mc.steps = parse_int(value, kctx);
      else if (key == "basis") cfg.mc.basis = parse_int(value, kctx);
      else if (key == "seed") cfg.mc.seed = parse_u64(value, kctx);
      else if (key == "drift") cfg.mc.drift = parse_double(value, kctx);
      else if (key == "workers") cfg.workers = parse_int(value, kctx);
      else throw ConfigError(kctx + ": unknown key");
    } else if (section == "sweep") {
      if (key == "axis") {
        if (value == "z0" || value == "Z0") sweep.axis = SweepAxis::z0;
        else if (value == "strike" || value == "K") sweep.axis = SweepAxis::strike;
        else if (value == "theta") sweep.axis = SweepAxis::theta;
        else if (value == "alpha") sweep.axis = SweepAxis::alpha;
        else if (value == "maturity" || value == "T") sweep.axis = SweepAxis::maturity;
        else throw ConfigError(kctx + ": unknown sweep axis '" + value + "'");
        sweep_axis_set = true;
      } else if (key == "values") {
        sweep.values.clear();
        for (const std::string& item : split(value, ','))
          if (!item.empty()) sweep.values.push_back(parse_double(item, kctx));
      } else if (key == "from") sweep_from = parse_double(value, kctx);
      else if (key == "to") sweep_to = parse_double(value, kctx);
      else if (key == "step") sweep_step = parse_double(value, kctx);
      else throw ConfigError(kctx + ": unknown key");
    } else if (section == "output") {
      if (key == "path") cfg.output.path = value;
      else if (key == "format") {
        if (value != "csv")
          throw ConfigError(kctx + ": only format = csv is supported");
        cfg.output.format = value;
      } else throw ConfigError(kctx + ": unknown key");
    } else {
      throw ConfigError(ctx() + ": key '" + key + "' outside of any section");
    }
  }

  if (sweep_present) {
    if (!sweep_axis_set)
      throw ConfigError(name + ": [sweep] requires an 'axis' key");
    if (sweep.values.empty()) {
      if (!sweep_from || !sweep_to || !sweep_step)
        throw ConfigError(name + ": [sweep] needs either 'values' or from/to/step");
      if (!(*sweep_step > 0.0))
        throw ConfigError(name + ": [sweep] step must be > 0");
      if (*sweep_to < *sweep_from)
        throw ConfigError(name + ": [sweep] requires from <= to");
      for (double v = *sweep_from; v <= *sweep_to + 0.5 * *sweep_step; v += *sweep_step)
        sweep.values.push_back(v);
    }
    cfg.sweep = sweep;
  }
  return cfg;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("load_config: cannot open '" + path + "'");
  return parse_config(in, path);
}

// Canonical serialization; parse_config(write_config(c)) reproduces c.
inline std::string write_config(const RunConfig& cfg) {
  std::ostringstream os;
  os.precision(17);
  os << "[market]\n";
  os << "r = " << cfg.market.r << "\n";
  os << "sigma = " << cfg.market.sigma << "\n";
  os << "alpha = " << cfg.market.alpha << "\n";
  os << "z0 = " << cfg.market.z0 << "\n";
  os << "\n[option]\n";
  os << "kind = " << to_string(cfg.option.kind) << "\n";
  os << "style = " << to_string(cfg.option.style) << "\n";
  os << "barrier = " << to_string(cfg.option.barrier) << "\n";
  os << "strike = " << cfg.option.strike << "\n";
  os << "maturity = " << cfg.option.maturity << "\n";
  if (cfg.option.has_lower_barrier())
    os << "lower_barrier = " << cfg.option.lower_barrier << "\n";
  if (cfg.option.has_upper_barrier())
    os << "upper_barrier = " << cfg.option.upper_barrier << "\n";
  os << "\n[grid]\n";
  if (cfg.grid.n > 0) os << "n = " << cfg.grid.n << "\n";
  if (cfg.grid.N > 0) os << "N = " << cfg.grid.N << "\n";
  if (cfg.grid.x_min) os << "x_min = " << *cfg.grid.x_min << "\n";
  if (cfg.grid.x_max) os << "x_max = " << *cfg.grid.x_max << "\n";
  if (!cfg.grid.resolutions.empty()) {
    os << "resolutions = ";
    for (std::size_t i = 0; i < cfg.grid.resolutions.size(); ++i)
      os << (i ? "," : "") << cfg.grid.resolutions[i];
    os << "\n";
  }
  os << "\n[scheme]\n";
  if (cfg.theta.optimal) os << "theta = optimal\n";
  else os << "theta = " << cfg.theta.value << "\n";
  os << "\n[method]\n";
  os << "type = " << to_string(cfg.method) << "\n";
  os << "\n[monte_carlo]\n";
  os << "paths = " << cfg.mc.paths << "\n";
  os << "steps = " << cfg.mc.steps << "\n";
  os << "basis = " << cfg.mc.basis << "\n";
  os << "seed = " << cfg.mc.seed << "\n";
  if (cfg.mc.drift) os << "drift = " << *cfg.mc.drift << "\n";
  os << "workers = " << cfg.workers << "\n";
  if (cfg.sweep) {
    os << "\n[sweep]\n";
    os << "axis = " << to_string(cfg.sweep->axis) << "\n";
    os << "values = ";
    for (std::size_t i = 0; i < cfg.sweep->values.size(); ++i)
      os << (i ? "," : "") << cfg.sweep->values[i];
    os << "\n";
  }
  if (!cfg.output.path.empty()) {
    os << "\n[output]\n";
    os << "path = " << cfg.output.path << "\n";
    os << "format = " << cfg.output.format << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Execution.
// ---------------------------------------------------------------------------
inline void apply_sweep_value(RunConfig& cfg, SweepAxis axis, double v) {
  switch (axis) {
    case SweepAxis::z0: cfg.market.z0 = v; break;
    case SweepAxis::strike: cfg.option.strike = v; break;
    case SweepAxis::theta: cfg.theta = ThetaChoice{false, v}; break;
    case SweepAxis::alpha: cfg.market.alpha = v; break;
    case SweepAxis::maturity: cfg.option.maturity = v; break;
  }
}

// Price one fully resolved job.  Wall-clock timing wraps the solver call
// only, not configuration handling.
inline ReportRow run_single(const RunConfig& cfg, int n, int N) {
  cfg.market.validate();
  cfg.option.validate();

  ReportRow row;
  row.kind = to_string(cfg.option.kind);
  row.style = to_string(cfg.option.style);
  row.barrier = to_string(cfg.option.barrier);
  row.strike = cfg.option.strike;
  row.maturity = cfg.option.maturity;
  row.lower_barrier = cfg.option.has_lower_barrier() ? cfg.option.lower_barrier : 0.0;
  row.upper_barrier = cfg.option.has_upper_barrier() ? cfg.option.upper_barrier : 0.0;
  row.r = cfg.market.r;
  row.sigma = cfg.market.sigma;
  row.alpha = cfg.market.alpha;
  row.z0 = cfg.market.z0;
  row.method = to_string(cfg.method);

  const auto clock_now = [] { return std::chrono::steady_clock::now(); };

  if (cfg.method == Method::fd) {
    const double theta = cfg.theta.resolve(cfg.market.alpha);
    row.theta = theta;
    row.n = n;
    row.N = N;
    const double x_min = cfg.grid.x_min.value_or(kDefaultXMin);
    const double x_max = cfg.grid.x_max.value_or(kDefaultXMax);

    if (!cfg.option.is_knock_in()) {
      const GridSpec g = make_grid(cfg.option, n, N, x_min, x_max);
      const OperatorSet ops = assemble_operators(cfg.market, g, theta);
      if (!ops.diagonally_dominant)
        std::cerr << "warning: scheme matrix is not diagonally dominant on this grid "
                     "(n=" << n << ", N=" << N << "); results may be inaccurate\n";
    }

    const auto t0 = clock_now();
    row.price = price_option_fd(cfg.market, cfg.option, n, N, theta, x_min, x_max);
    row.runtime_seconds = std::chrono::duration<double>(clock_now() - t0).count();

    if (cfg.market.alpha == 1.0) {
      try {
        row.reference = oracle_price(cfg.market, cfg.option).price;
      } catch (const Error&) {
        // no oracle for this contract; leave the reference empty
      }
    }
  } else if (cfg.method == Method::ls) {
    LsConfig lc;
    lc.paths = cfg.mc.paths;
    lc.steps = cfg.mc.steps;
    lc.basis_size = cfg.mc.basis;
    lc.seed = cfg.mc.seed;
    lc.drift = cfg.mc.drift;
    lc.workers = cfg.workers;
    row.paths = lc.paths;
    row.steps = lc.steps;
    row.seed = lc.seed;
    row.theta = 0.0;

    const auto t0 = clock_now();
    const LsResult res = ls_price_american_put(cfg.market, cfg.option, lc);
    row.runtime_seconds = std::chrono::duration<double>(clock_now() - t0).count();
    row.price = res.price;
    row.std_error = res.std_error;

    if (cfg.market.alpha == 1.0) {
      try {
        row.reference = oracle_price(cfg.market, cfg.option).price;
      } catch (const Error&) {
      }
    }
  } else {
    const auto t0 = clock_now();
    const OracleResult res = oracle_price(cfg.market, cfg.option);
    row.runtime_seconds = std::chrono::duration<double>(clock_now() - t0).count();
    row.price = res.price;
    row.oracle_method = res.method;
  }

  if (row.reference && std::fabs(*row.reference) > 1e-12)
    row.rel_error = std::fabs(row.price - *row.reference) / std::fabs(*row.reference);
  return row;
}

inline std::vector<ReportRow> run(const RunConfig& cfg) {
  struct Job {
    RunConfig c;
    int n = 0;
    int N = 0;
  };
  std::vector<Job> jobs;

  std::vector<RunConfig> swept;
  if (cfg.sweep) {
    if (cfg.sweep->values.empty())
      throw ConfigError("run: sweep with no values");
    for (double v : cfg.sweep->values) {
      RunConfig c = cfg;
      c.sweep.reset();
      apply_sweep_value(c, cfg.sweep->axis, v);
      swept.push_back(std::move(c));
    }
  } else {
    swept.push_back(cfg);
  }

  for (const RunConfig& c : swept) {
    if (c.method == Method::fd) {
      if (!c.grid.resolutions.empty()) {
        for (int R : c.grid.resolutions) jobs.push_back({c, R, R});
      } else {
        if (c.grid.n < 2 || c.grid.N < 1)
          throw ConfigError("run: method fd requires [grid] n and N (or a resolutions list)");
        jobs.push_back({c, c.grid.n, c.grid.N});
      }
    } else {
      jobs.push_back({c, 0, 0});
    }
  }

  std::vector<ReportRow> rows(jobs.size());
  const int workers = std::max(1, cfg.workers);
  if (workers == 1 || jobs.size() == 1) {
    for (std::size_t i = 0; i < jobs.size(); ++i)
      rows[i] = run_single(jobs[i].c, jobs[i].n, jobs[i].N);
  } else {
    // Parallel over jobs; per-job Monte Carlo then runs single-threaded.
    // Row order is the input order regardless of scheduling.
    for (Job& j : jobs) j.c.workers = 1;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t i = static_cast<std::size_t>(w); i < jobs.size();
             i += static_cast<std::size_t>(workers))
          rows[i] = run_single(jobs[i].c, jobs[i].n, jobs[i].N);
      });
    for (auto& th : pool) th.join();
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Study presets.
// ---------------------------------------------------------------------------

// Classical-limit convergence study: square grids at several resolutions, the
// implicit scheme (theta = 0) against the optimally weighted one, relative
// errors against the closed-form reference.
inline std::vector<ReportRow> run_table7(const RunConfig& base) {
  if (base.market.alpha != 1.0)
    throw ConfigError("table7: market alpha must be 1 (classical limit)");
  std::vector<int> res = base.grid.resolutions;
  if (res.empty()) res = {20, 40, 100, 200, 500, 1500};
  const double th_opt = theta_optimal(base.market.alpha);

  std::vector<ReportRow> rows;
  for (int R : res) {
    for (double th : {0.0, th_opt}) {
      RunConfig c = base;
      c.sweep.reset();
      c.method = Method::fd;
      c.theta = ThetaChoice{false, th};
      c.grid.resolutions.clear();
      rows.push_back(run_single(c, R, R));
    }
  }
  return rows;
}

// Fractional convergence study: for each alpha, prices at several square
// resolutions for theta = 0 and theta = optimal; the reference value is the
// mean of the two prices on the finest grid in the list, shared by all rows
// of that alpha.
inline std::vector<ReportRow> run_table8(const RunConfig& base) {
  std::vector<double> alphas;
  if (base.sweep && base.sweep->axis == SweepAxis::alpha && !base.sweep->values.empty())
    alphas = base.sweep->values;
  else
    alphas = {0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3};
  std::vector<int> res = base.grid.resolutions;
  if (res.empty()) res = {40, 100, 1500};
  const int finest = *std::max_element(res.begin(), res.end());

  std::vector<ReportRow> rows;
  for (double alpha : alphas) {
    RunConfig c0 = base;
    c0.sweep.reset();
    c0.method = Method::fd;
    c0.market.alpha = alpha;
    c0.grid.resolutions.clear();
    const double th_opt = theta_optimal(alpha);

    std::vector<ReportRow> block;
    for (int R : res) {
      for (double th : {0.0, th_opt}) {
        RunConfig c = c0;
        c.theta = ThetaChoice{false, th};
        block.push_back(run_single(c, R, R));
      }
    }
    double p_impl = 0.0, p_opt = 0.0;
    for (const ReportRow& row : block) {
      if (row.n == finest) {
        if (row.theta == 0.0) p_impl = row.price;
        else p_opt = row.price;
      }
    }
    const double ref = 0.5 * (p_impl + p_opt);
    for (ReportRow& row : block) {
      row.reference = ref;
      if (std::fabs(ref) > 1e-12)
        row.rel_error = std::fabs(row.price - ref) / std::fabs(ref);
    }
    rows.insert(rows.end(), block.begin(), block.end());
  }
  return rows;
}

// FD vs Longstaff-Schwartz on the same contract; the LS row's reference is
// the FD price.
inline std::vector<ReportRow> run_compare_fd_ls(const RunConfig& base) {
  if (base.option.kind != OptionKind::put || base.option.style != ExerciseStyle::american ||
      base.option.barrier != BarrierKind::none)
    throw ConfigError("compare-fd-ls: contract must be a plain American put");

  RunConfig fd_cfg = base;
  fd_cfg.sweep.reset();
  fd_cfg.method = Method::fd;
  int n = fd_cfg.grid.n, N = fd_cfg.grid.N;
  if (!fd_cfg.grid.resolutions.empty()) n = N = fd_cfg.grid.resolutions.front();
  if (n < 2 || N < 1)
    throw ConfigError("compare-fd-ls: [grid] n and N are required");
  ReportRow fd_row = run_single(fd_cfg, n, N);

  RunConfig ls_cfg = base;
  ls_cfg.sweep.reset();
  ls_cfg.method = Method::ls;
  ReportRow ls_row = run_single(ls_cfg, 0, 0);
  ls_row.reference = fd_row.price;
  if (std::fabs(fd_row.price) > 1e-12)
    ls_row.rel_error = std::fabs(ls_row.price - fd_row.price) / std::fabs(fd_row.price);

  return {fd_row, ls_row};
}

// ---------------------------------------------------------------------------
// CSV report emission: UTF-8, header first, decimal points, rows in input
// order.  Refuses to create a file for an empty report.
// ---------------------------------------------------------------------------
inline void emit_csv(std::ostream& os, const std::vector<ReportRow>& rows) {
  os << "kind,style,barrier,strike,maturity,lower_barrier,upper_barrier,"
        "r,sigma,alpha,z0,method,oracle_method,theta,n,N,paths,steps,seed,"
        "price,reference,rel_error,std_error,runtime_seconds\n";
  os.precision(17);
  for (const ReportRow& row : rows) {
    os << row.kind << ',' << row.style << ',' << row.barrier << ',' << row.strike << ','
       << row.maturity << ',' << row.lower_barrier << ',' << row.upper_barrier << ',' << row.r
       << ',' << row.sigma << ',' << row.alpha << ',' << row.z0 << ',' << row.method << ','
       << row.oracle_method << ',' << row.theta << ',' << row.n << ',' << row.N << ','
       << row.paths << ',' << row.steps << ',' << row.seed << ',' << row.price << ',';
    if (row.reference) os << *row.reference;
    os << ',';
    if (row.rel_error) os << *row.rel_error;
    os << ',';
    if (row.std_error) os << *row.std_error;
    os << ',' << row.runtime_seconds << '\n';
  }
}

inline void emit_csv_file(const std::string& path, const std::vector<ReportRow>& rows) {
  if (rows.empty())
    throw IoError("emit_csv: refusing to write an empty report (no file created)");
  std::ofstream out(path);
  if (!out) throw IoError("emit_csv: cannot open '" + path + "' for writing");
  emit_csv(out, rows);
  out.flush();
  if (!out) throw IoError("emit_csv: write failure on '" + path + "'");
}

} // namespace subdiff

#endif // SUBDIFF_RUNNER_HPP

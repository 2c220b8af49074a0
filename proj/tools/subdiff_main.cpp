// Command-line front end for the subdiffusive option pricing engine.
//
// Subcommands:
//   price          price the configured contract (single run or sweep)
//   sweep          alias of price, requires a [sweep] section
//   table7         classical-limit convergence study (theta = 0 vs optimal)
//   table8         fractional convergence study over alpha
//   compare-fd-ls  finite differences vs Longstaff-Schwartz on one contract
//
// Exit codes: 0 success, 2 configuration/domain error, 3 numerical error,
// 4 output error, 1 anything else.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "subdiff/subdiff.hpp"

namespace {

struct CliOverrides {
  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int workers = 0;
  std::string out;
  int repeat = 1;
};

void add_common(CLI::App* sub, CliOverrides& ov) {
  sub->add_option("config", ov.config_path, "path to the run configuration file")
      ->required()
      ->check(CLI::ExistingFile);
  sub->add_option("--seed", ov.seed, "override the Monte Carlo seed")
      ->each([&ov](const std::string&) { ov.seed_set = true; });
  sub->add_option("--workers", ov.workers, "number of worker threads (>= 1)");
  sub->add_option("--out", ov.out, "override the output CSV path");
  sub->add_option("--repeat", ov.repeat, "repeat the computation and average runtimes")
      ->check(CLI::PositiveNumber);
}

std::vector<subdiff::ReportRow> dispatch(const std::string& mode, const subdiff::RunConfig& cfg) {
  if (mode == "table7") return subdiff::run_table7(cfg);
  if (mode == "table8") return subdiff::run_table8(cfg);
  if (mode == "compare-fd-ls") return subdiff::run_compare_fd_ls(cfg);
  if (mode == "sweep" && !cfg.sweep)
    throw subdiff::ConfigError("sweep: the configuration has no [sweep] section");
  return subdiff::run(cfg);
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"subdiff: American and barrier option pricing under subdiffusive dynamics"};
  app.require_subcommand(1);

  CliOverrides ov;
  const char* modes[] = {"price", "sweep", "table7", "table8", "compare-fd-ls"};
  const char* descs[] = {
      "price the configured contract",
      "run the configured parameter sweep",
      "classical-limit convergence study (implicit vs optimal weighting)",
      "fractional convergence study over alpha",
      "compare finite differences against Longstaff-Schwartz",
  };
  for (int i = 0; i < 5; ++i) add_common(app.add_subcommand(modes[i], descs[i]), ov);

  CLI11_PARSE(app, argc, argv);
  const std::string mode = app.get_subcommands().front()->get_name();

  try {
    subdiff::RunConfig cfg = subdiff::load_config(ov.config_path);
    if (ov.seed_set) cfg.mc.seed = ov.seed;
    if (ov.workers > 0) cfg.workers = ov.workers;
    if (!ov.out.empty()) cfg.output.path = ov.out;

    std::vector<subdiff::ReportRow> rows = dispatch(mode, cfg);
    if (ov.repeat > 1) {
      for (int rep = 1; rep < ov.repeat; ++rep) {
        const std::vector<subdiff::ReportRow> again = dispatch(mode, cfg);
        for (std::size_t i = 0; i < rows.size() && i < again.size(); ++i)
          rows[i].runtime_seconds += again[i].runtime_seconds;
      }
      for (subdiff::ReportRow& row : rows) row.runtime_seconds /= ov.repeat;
    }

    if (cfg.output.path.empty()) {
      subdiff::emit_csv(std::cout, rows);
    } else {
      subdiff::emit_csv_file(cfg.output.path, rows);
      std::cerr << "wrote " << rows.size() << " rows to " << cfg.output.path << "\n";
    }
    return 0;
  } catch (const subdiff::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const subdiff::DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 2;
  } catch (const subdiff::SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 3;
  } catch (const subdiff::ParityViolation& e) {
    std::cerr << "parity violation: " << e.what() << "\n";
    return 3;
  } catch (const subdiff::IoError& e) {
    std::cerr << "output error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

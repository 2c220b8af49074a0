#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "subdiff/oracles.hpp"
#include "subdiff/runner.hpp"

namespace {

using namespace subdiff;

const char* kBaseConfig = R"(# sample configuration
[market]
r = 0.05
sigma = 0.3
alpha = 0.8
z0 = 1.5

[option]
kind = put
style = american
barrier = none
strike = 2.0
maturity = 1.5

[grid]
n = 32
N = 16
x_min = -6
x_max = 3

[scheme]
theta = optimal

[method]
type = fd
)";

TEST(ParseConfig, ReadsEverySection) {
  std::istringstream in(kBaseConfig);
  RunConfig cfg = parse_config(in, "base.cfg");
  EXPECT_DOUBLE_EQ(cfg.market.r, 0.05);
  EXPECT_DOUBLE_EQ(cfg.market.sigma, 0.3);
  EXPECT_DOUBLE_EQ(cfg.market.alpha, 0.8);
  EXPECT_DOUBLE_EQ(cfg.market.z0, 1.5);
  EXPECT_EQ(cfg.option.kind, OptionKind::put);
  EXPECT_EQ(cfg.option.style, ExerciseStyle::american);
  EXPECT_EQ(cfg.option.barrier, BarrierKind::none);
  EXPECT_DOUBLE_EQ(cfg.option.strike, 2.0);
  EXPECT_DOUBLE_EQ(cfg.option.maturity, 1.5);
  EXPECT_EQ(cfg.grid.n, 32);
  EXPECT_EQ(cfg.grid.N, 16);
  ASSERT_TRUE(cfg.grid.x_min.has_value());
  EXPECT_DOUBLE_EQ(*cfg.grid.x_min, -6.0);
  EXPECT_TRUE(cfg.theta.optimal);
  EXPECT_EQ(cfg.method, Method::fd);
  EXPECT_NEAR(cfg.theta.resolve(0.8), theta_optimal(0.8), 1e-15);
}

TEST(ParseConfig, LogSpaceAliasesAndNumericTheta) {
  std::istringstream in("[grid]\nz_min = 1\nz_max = 100\n[scheme]\ntheta = 0.25\n");
  RunConfig cfg = parse_config(in);
  ASSERT_TRUE(cfg.grid.x_min.has_value());
  EXPECT_DOUBLE_EQ(*cfg.grid.x_min, 0.0);
  EXPECT_DOUBLE_EQ(*cfg.grid.x_max, std::log(100.0));
  EXPECT_FALSE(cfg.theta.optimal);
  EXPECT_DOUBLE_EQ(cfg.theta.resolve(0.5), 0.25);
}

TEST(ParseConfig, DiagnosticsCarryFileAndLine) {
  std::istringstream in("[market]\nr = 0.05\nsigma = banana\n");
  try {
    parse_config(in, "broken.cfg");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("broken.cfg:3"), std::string::npos) << e.what();
  }
}

TEST(ParseConfig, RejectsMalformedInput) {
  {
    std::istringstream in("[nonsense]\n");
    EXPECT_THROW(parse_config(in), ConfigError);
  }
  {
    std::istringstream in("[market]\nvolatility = 0.3\n");
    EXPECT_THROW(parse_config(in), ConfigError);
  }
  {
    std::istringstream in("r = 0.05\n");
    EXPECT_THROW(parse_config(in), ConfigError); // key before any section
  }
  {
    std::istringstream in("[market]\nr 0.05\n");
    EXPECT_THROW(parse_config(in), ConfigError);
  }
  {
    std::istringstream in("[sweep]\nvalues = 1,2\n");
    EXPECT_THROW(parse_config(in), ConfigError); // missing axis
  }
}

TEST(ParseConfig, SweepFromToStep) {
  std::istringstream in("[sweep]\naxis = K\nfrom = 0.5\nto = 2.0\nstep = 0.5\n");
  RunConfig cfg = parse_config(in);
  ASSERT_TRUE(cfg.sweep.has_value());
  EXPECT_EQ(cfg.sweep->axis, SweepAxis::strike);
  ASSERT_EQ(cfg.sweep->values.size(), 4u);
  EXPECT_DOUBLE_EQ(cfg.sweep->values.front(), 0.5);
  EXPECT_DOUBLE_EQ(cfg.sweep->values.back(), 2.0);
}

TEST(ParseConfig, WriteConfigRoundTrips) {
  std::istringstream in(kBaseConfig);
  RunConfig cfg = parse_config(in, "base.cfg");
  std::string serialized = write_config(cfg);
  std::istringstream again(serialized);
  RunConfig cfg2 = parse_config(again, "serialized.cfg");
  EXPECT_EQ(write_config(cfg2), serialized);
  EXPECT_DOUBLE_EQ(cfg2.market.z0, cfg.market.z0);
  EXPECT_EQ(cfg2.option.style, cfg.option.style);
  EXPECT_EQ(cfg2.grid.n, cfg.grid.n);
  EXPECT_TRUE(cfg2.theta.optimal);
}

RunConfig oracle_barrier_config() {
  RunConfig cfg;
  cfg.market = MarketParams{0.03, 0.3, 1.0, 2.0};
  cfg.option.kind = OptionKind::call;
  cfg.option.barrier = BarrierKind::down_out;
  cfg.option.strike = 2.0;
  cfg.option.maturity = 4.0;
  cfg.option.lower_barrier = 1.0;
  cfg.method = Method::oracle;
  return cfg;
}

TEST(Run, OracleMethodSingleRow) {
  std::vector<ReportRow> rows = run(oracle_barrier_config());
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].method, "oracle");
  EXPECT_EQ(rows[0].oracle_method, "reflection_closed_form");
  EXPECT_DOUBLE_EQ(rows[0].price, bs_down_and_out_call(2.0, 2.0, 0.03, 0.3, 4.0, 1.0));
  EXPECT_EQ(rows[0].kind, "call");
  EXPECT_EQ(rows[0].barrier, "down_out");
}

TEST(Run, FdSweepKeepsInputOrderAndReferences) {
  RunConfig cfg;
  cfg.market = MarketParams{0.05, 0.4, 1.0, 1.0};
  cfg.option.kind = OptionKind::put;
  cfg.option.style = ExerciseStyle::american;
  cfg.option.strike = 1.0;
  cfg.option.maturity = 1.0;
  cfg.grid.n = 64;
  cfg.grid.N = 32;
  cfg.grid.x_min = -3.0;
  cfg.grid.x_max = 3.0;
  cfg.theta = ThetaChoice{false, 0.4};
  cfg.method = Method::fd;
  cfg.sweep = SweepSpec{SweepAxis::strike, {0.8, 1.0, 1.2}};

  std::vector<ReportRow> rows = run(cfg);
  ASSERT_EQ(rows.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_DOUBLE_EQ(rows[i].strike, cfg.sweep->values[i]);
    EXPECT_EQ(rows[i].method, "fd");
    ASSERT_TRUE(rows[i].reference.has_value()); // classical alpha: oracle reference
    ASSERT_TRUE(rows[i].rel_error.has_value());
    EXPECT_LT(*rows[i].rel_error, 0.05);
  }
  EXPECT_LT(rows[0].price, rows[1].price);
  EXPECT_LT(rows[1].price, rows[2].price);
}

TEST(Run, FdWithoutGridRejected) {
  RunConfig cfg = oracle_barrier_config();
  cfg.method = Method::fd;
  EXPECT_THROW(run(cfg), ConfigError);
}

TEST(Run, DeterministicRows) {
  RunConfig cfg;
  cfg.market = MarketParams{0.04, 0.5, 0.7, 5.0};
  cfg.option.kind = OptionKind::put;
  cfg.option.style = ExerciseStyle::american;
  cfg.option.strike = 2.0;
  cfg.option.maturity = 4.0;
  cfg.method = Method::ls;
  cfg.mc.paths = 500;
  cfg.mc.steps = 10;
  cfg.mc.seed = 42;
  std::vector<ReportRow> a = run(cfg);
  std::vector<ReportRow> b = run(cfg);
  ASSERT_EQ(a.size(), 1u);
  ASSERT_EQ(b.size(), 1u);
  EXPECT_DOUBLE_EQ(a[0].price, b[0].price);
  ASSERT_TRUE(a[0].std_error.has_value());
  EXPECT_DOUBLE_EQ(*a[0].std_error, *b[0].std_error);
}

TEST(RunTable7, RowLayoutAndClassicalGuard) {
  RunConfig cfg = oracle_barrier_config();
  cfg.method = Method::fd;
  cfg.grid.x_min = -20.0;
  cfg.grid.x_max = std::log(100.0);
  cfg.grid.resolutions = {10, 20};
  std::vector<ReportRow> rows = run_table7(cfg);
  ASSERT_EQ(rows.size(), 4u); // two resolutions x {implicit, optimal}
  EXPECT_EQ(rows[0].n, 10);
  EXPECT_DOUBLE_EQ(rows[0].theta, 0.0);
  EXPECT_DOUBLE_EQ(rows[1].theta, 0.5);
  EXPECT_EQ(rows[3].n, 20);
  for (const ReportRow& row : rows) {
    ASSERT_TRUE(row.reference.has_value());
    ASSERT_TRUE(row.rel_error.has_value());
  }

  cfg.market.alpha = 0.9;
  EXPECT_THROW(run_table7(cfg), ConfigError);
}

TEST(RunTable8, SelfReferencedErrors) {
  RunConfig cfg = oracle_barrier_config();
  cfg.method = Method::fd;
  cfg.grid.x_min = -20.0;
  cfg.grid.x_max = std::log(100.0);
  cfg.grid.resolutions = {10, 20};
  cfg.sweep = SweepSpec{SweepAxis::alpha, {0.9, 0.5}};
  std::vector<ReportRow> rows = run_table8(cfg);
  ASSERT_EQ(rows.size(), 8u); // 2 alphas x 2 resolutions x 2 thetas
  for (const ReportRow& row : rows) {
    ASSERT_TRUE(row.reference.has_value());
    ASSERT_TRUE(row.rel_error.has_value());
  }
  // Coarsest implicit row has the largest error within each alpha block.
  EXPECT_GT(*rows[0].rel_error, *rows[2].rel_error);
  // The finest rows sit right at the shared reference.
  EXPECT_NEAR(*rows[2].rel_error, *rows[3].rel_error, 0.5 * (*rows[2].rel_error + 1e-12));
}

TEST(RunCompareFdLs, PairsRowsAndGuardsContract) {
  RunConfig cfg;
  cfg.market = MarketParams{0.04, 1.0, 0.9, 5.0};
  cfg.option.kind = OptionKind::put;
  cfg.option.style = ExerciseStyle::american;
  cfg.option.strike = 2.0;
  cfg.option.maturity = 4.0;
  cfg.grid.n = 24;
  cfg.grid.N = 12;
  cfg.method = Method::fd;
  cfg.mc.paths = 400;
  cfg.mc.steps = 12;
  cfg.mc.seed = 7;
  std::vector<ReportRow> rows = run_compare_fd_ls(cfg);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].method, "fd");
  EXPECT_EQ(rows[1].method, "ls");
  ASSERT_TRUE(rows[1].reference.has_value());
  EXPECT_DOUBLE_EQ(*rows[1].reference, rows[0].price);
  ASSERT_TRUE(rows[1].std_error.has_value());

  cfg.option.kind = OptionKind::call;
  EXPECT_THROW(run_compare_fd_ls(cfg), ConfigError);
}

TEST(EmitCsv, HeaderOrderAndOptionals) {
  std::vector<ReportRow> rows = run(oracle_barrier_config());
  std::ostringstream os;
  emit_csv(os, rows);
  std::istringstream in(os.str());
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header,
            "kind,style,barrier,strike,maturity,lower_barrier,upper_barrier,"
            "r,sigma,alpha,z0,method,oracle_method,theta,n,N,paths,steps,seed,"
            "price,reference,rel_error,std_error,runtime_seconds");
  std::string row;
  ASSERT_TRUE(std::getline(in, row));
  EXPECT_EQ(row.substr(0, 5), "call,");
  // 23 commas = 24 fields.
  EXPECT_EQ(std::count(row.begin(), row.end(), ','), 23);
  EXPECT_FALSE(std::getline(in, row)); // single data row
}

TEST(EmitCsv, EmptyReportRefusedWithoutCreatingFile) {
  const std::string path = "/tmp/subdiff_empty_report_test.csv";
  std::remove(path.c_str());
  EXPECT_THROW(emit_csv_file(path, {}), IoError);
  std::ifstream probe(path);
  EXPECT_FALSE(probe.good());
}

TEST(EmitCsv, WritesAndReloadsFile) {
  const std::string path = "/tmp/subdiff_report_test.csv";
  std::vector<ReportRow> rows = run(oracle_barrier_config());
  emit_csv_file(path, rows);
  std::ifstream in(path);
  ASSERT_TRUE(in.good());
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header.substr(0, 10), "kind,style");
  std::string row;
  EXPECT_TRUE(std::getline(in, row));
  std::remove(path.c_str());
}

TEST(LoadConfig, MissingFileRaisesIoError) {
  EXPECT_THROW(load_config("/nonexistent/path/subdiff.cfg"), IoError);
}

} // namespace

// Generate a handful of subdiffusive GBM sample paths and dump them as CSV
// (to stdout, or to the path given as the first argument).  The flat periods
// of the operational clock show up as constant stretches of Z.

#include <fstream>
#include <iostream>

#include "subdiff/subdiff.hpp"

int main(int argc, char** argv) {
  using namespace subdiff;

  MarketParams market;
  market.r = 0.04;
  market.sigma = 0.5;
  market.alpha = 0.85;
  market.z0 = 1.0;

  const PathEnsemble ens = subdiffusive_gbm_paths(market, /*T=*/2.0, /*m=*/200, /*M=*/8,
                                                  /*seed=*/7);

  if (argc > 1) {
    std::ofstream out(argv[1]);
    if (!out) {
      std::cerr << "cannot open " << argv[1] << "\n";
      return 1;
    }
    write_paths_csv(out, ens);
    std::cerr << "wrote " << ens.paths << " paths to " << argv[1] << "\n";
  } else {
    write_paths_csv(std::cout, ens);
  }
  return 0;
}

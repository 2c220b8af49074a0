#pragma once

// Umbrella header: the whole pricing engine.

#include "subdiff/contracts.hpp"
#include "subdiff/errors.hpp"
#include "subdiff/frac_fd.hpp"
#include "subdiff/grid.hpp"
#include "subdiff/longstaff_schwartz.hpp"
#include "subdiff/oracles.hpp"
#include "subdiff/runner.hpp"
#include "subdiff/subordinator.hpp"
#include "subdiff/tridiagonal.hpp"

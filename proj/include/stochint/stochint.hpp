#pragma once

#include "stochint/basis.hpp"
#include "stochint/bridge.hpp"
#include "stochint/coefficients.hpp"
#include "stochint/error_analysis.hpp"
#include "stochint/gaussians.hpp"
#include "stochint/interval.hpp"
#include "stochint/ito_expansion.hpp"
#include "stochint/kernel_spec.hpp"
#include "stochint/mc_oracle.hpp"
#include "stochint/path_grid.hpp"
#include "stochint/strat_expansion.hpp"
#include "stochint/tensor_io.hpp"

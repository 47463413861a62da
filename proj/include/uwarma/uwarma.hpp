#pragma once

// Umbrella header for the UWARMA toolkit: quantile-parameterized
// Unit-Weibull ARMA models for time series on (0,1).

#include "uwarma/constants.hpp"
#include "uwarma/csv.hpp"
#include "uwarma/fit.hpp"
#include "uwarma/forecast.hpp"
#include "uwarma/garma.hpp"
#include "uwarma/inference.hpp"
#include "uwarma/linalg.hpp"
#include "uwarma/links.hpp"
#include "uwarma/mc.hpp"
#include "uwarma/model.hpp"
#include "uwarma/normal.hpp"
#include "uwarma/optimize.hpp"
#include "uwarma/result_io.hpp"
#include "uwarma/rng.hpp"
#include "uwarma/transform.hpp"
#include "uwarma/uw_distribution.hpp"
#include "uwarma/version.hpp"

#pragma once

// Umbrella header for the fractional Laplace-Beltrami laboratory.

#include "fraclab/checks.hpp"
#include "fraclab/csv.hpp"
#include "fraclab/experiment.hpp"
#include "fraclab/geometry.hpp"
#include "fraclab/heat.hpp"
#include "fraclab/inequalities.hpp"
#include "fraclab/parallel.hpp"
#include "fraclab/parametrix.hpp"
#include "fraclab/pvkernel.hpp"
#include "fraclab/quadrature.hpp"
#include "fraclab/specfun.hpp"
#include "fraclab/spectral.hpp"

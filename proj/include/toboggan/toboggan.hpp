#pragma once

// Umbrella header for the whole library.

#include "toboggan/errors.hpp"
#include "toboggan/sheet_point.hpp"
#include "toboggan/riemann_path.hpp"
#include "toboggan/contour_io.hpp"
#include "toboggan/potential.hpp"
#include "toboggan/potential_config.hpp"
#include "toboggan/specfun.hpp"
#include "toboggan/parallel.hpp"
#include "toboggan/propagate.hpp"
#include "toboggan/spectrum.hpp"
#include "toboggan/liouville.hpp"
#include "toboggan/scattering.hpp"
#include "toboggan/polynomial.hpp"
#include "toboggan/susy.hpp"

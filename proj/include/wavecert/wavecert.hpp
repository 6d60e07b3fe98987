#pragma once

#include "wavecert/analytic.hpp"
#include "wavecert/bounds.hpp"
#include "wavecert/convergence.hpp"
#include "wavecert/energy.hpp"
#include "wavecert/field.hpp"
#include "wavecert/grid.hpp"
#include "wavecert/kernel.hpp"
#include "wavecert/numeric.hpp"
#include "wavecert/roundoff.hpp"
#include "wavecert/scheme.hpp"

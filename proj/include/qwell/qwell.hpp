// qwell.hpp
// Umbrella header for the width-estimation library.

#pragma once

#include "qwell/dynamics.hpp"
#include "qwell/entangled.hpp"
#include "qwell/inference.hpp"
#include "qwell/metrology.hpp"
#include "qwell/probe_states.hpp"
#include "qwell/quadrature.hpp"
#include "qwell/summation.hpp"
#include "qwell/well.hpp"

#pragma once

// Umbrella header: controllability Gramians of infinite lattice systems,
// the nearest-neighbor 1-D closed forms, control-energy metrics and
// bounds, the finite-window oracle, and driver placement.

#include "latgram/consistency.hpp"
#include "latgram/elliptic.hpp"
#include "latgram/finite.hpp"
#include "latgram/lattice.hpp"
#include "latgram/linalg.hpp"
#include "latgram/metrics.hpp"
#include "latgram/nn1d.hpp"
#include "latgram/placement.hpp"
#include "latgram/precision.hpp"
#include "latgram/quadrature.hpp"
#include "latgram/spec_io.hpp"
#include "latgram/spectral.hpp"

#pragma once

// Umbrella header for the library (the CLI front end lives in eqfd/cli.hpp).

#include "eqfd/error.hpp"
#include "eqfd/harmonic_map.hpp"
#include "eqfd/interval.hpp"
#include "eqfd/io.hpp"
#include "eqfd/mesh1d.hpp"
#include "eqfd/operators.hpp"
#include "eqfd/quadrature.hpp"
#include "eqfd/schrodinger.hpp"
#include "eqfd/sparse.hpp"
#include "eqfd/spectral.hpp"
#include "eqfd/stencil.hpp"
#include "eqfd/tensor_mesh.hpp"
#include "eqfd/weights.hpp"

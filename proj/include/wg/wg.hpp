#pragma once

// Umbrella header for the weak Galerkin Helmholtz library.

#include "wg/analysis.hpp"
#include "wg/assembly.hpp"
#include "wg/bessel.hpp"
#include "wg/config.hpp"
#include "wg/experiments.hpp"
#include "wg/geometry.hpp"
#include "wg/mesh.hpp"
#include "wg/mesh_io.hpp"
#include "wg/problems.hpp"
#include "wg/quadrature.hpp"
#include "wg/solver.hpp"
#include "wg/sparse.hpp"
#include "wg/wg_space.hpp"

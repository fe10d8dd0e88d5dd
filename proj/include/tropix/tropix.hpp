#pragma once

// Umbrella header for the whole library.

#include "tropix/number.hpp"
#include "tropix/linalg.hpp"
#include "tropix/lattice.hpp"
#include "tropix/subdivision.hpp"
#include "tropix/complex.hpp"
#include "tropix/homology.hpp"
#include "tropix/pants.hpp"
#include "tropix/dequantization.hpp"
#include "tropix/patchwork.hpp"
#include "tropix/io.hpp"
#include "tropix/svg.hpp"

/** @file
 * Umbrella header.
 */
#pragma once

#include "cpmaps/algebra.hpp"
#include "cpmaps/channel.hpp"
#include "cpmaps/dstoch.hpp"
#include "cpmaps/gen.hpp"
#include "cpmaps/matrix.hpp"
#include "cpmaps/rng.hpp"
#include "cpmaps/schur.hpp"
#include "cpmaps/uncertainty.hpp"

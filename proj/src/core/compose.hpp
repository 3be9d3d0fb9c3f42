#ifndef DUNEDRIFT_CORE_COMPOSE_HPP
#define DUNEDRIFT_CORE_COMPOSE_HPP

#include "core/raster.hpp"

namespace dunedrift {

// Multiply is the default: an inverted edge layer (dark edges on white)
// multiplied over the base darkens it exactly where the edges are.
enum class BlendMode { Multiply, Additive, Darken };

// out = (1-opacity)*base + opacity*f(base,layer), with f per mode.
Raster blend(const Raster& base, const Raster& layer, BlendMode mode, double opacity);

}  // namespace dunedrift

#endif

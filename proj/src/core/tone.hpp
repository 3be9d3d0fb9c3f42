#ifndef DUNEDRIFT_CORE_TONE_HPP
#define DUNEDRIFT_CORE_TONE_HPP

#include "core/raster.hpp"

namespace dunedrift {

// Brightness in [-1,1]; contrast in [-1,0.99]. The contrast slope is
// tan((contrast+1)*pi/4), so (0,0) is the identity and the slope stays
// finite at the upper bound.
struct ToneParams {
    double brightness = 0.0;
    double contrast = 0.0;
};

// out = clamp((in - 0.5)*slope + 0.5 + brightness, 0, 1)
Raster adjust(const Raster& r, const ToneParams& p);

// out = 1 - in
Raster invert(const Raster& r);

// Affine map of [min,max] onto [0,1]; flat images pass through unchanged.
Raster stretch(const Raster& r);

}  // namespace dunedrift

#endif

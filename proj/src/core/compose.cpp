#include "core/compose.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"

namespace dunedrift {

Raster blend(const Raster& base, const Raster& layer, BlendMode mode, double opacity) {
    if (!base.same_size(layer)) {
        throw ArgumentError("blend inputs must have identical dimensions");
    }
    if (!std::isfinite(opacity) || opacity < 0.0 || opacity > 1.0) {
        throw ArgumentError("blend opacity must lie in [0,1]");
    }
    std::vector<double> out(base.samples().size());
    for (size_t i = 0; i < out.size(); ++i) {
        double b = base.samples()[i];
        double l = layer.samples()[i];
        double f = 0.0;
        switch (mode) {
            case BlendMode::Multiply: f = b * l; break;
            case BlendMode::Additive: f = std::min(b + l, 1.0); break;
            case BlendMode::Darken: f = std::min(b, l); break;
        }
        out[i] = (1.0 - opacity) * b + opacity * f;
    }
    return Raster(base.width(), base.height(), std::move(out), base.pixel_scale());
}

}  // namespace dunedrift

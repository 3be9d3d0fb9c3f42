#include "core/tone.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "core/errors.hpp"

namespace dunedrift {

Raster adjust(const Raster& r, const ToneParams& p) {
    if (!std::isfinite(p.brightness) || p.brightness < -1.0 || p.brightness > 1.0) {
        throw ArgumentError("brightness must lie in [-1,1]");
    }
    if (!std::isfinite(p.contrast) || p.contrast < -1.0 || p.contrast > 0.99) {
        throw ArgumentError("contrast must lie in [-1,0.99]");
    }
    double slope = std::tan((p.contrast + 1.0) * std::numbers::pi / 4.0);
    std::vector<double> out(r.samples().size());
    for (size_t i = 0; i < out.size(); ++i) {
        double v = (r.samples()[i] - 0.5) * slope + 0.5 + p.brightness;
        out[i] = std::clamp(v, 0.0, 1.0);
    }
    return Raster(r.width(), r.height(), std::move(out), r.pixel_scale());
}

Raster invert(const Raster& r) {
    std::vector<double> out(r.samples().size());
    for (size_t i = 0; i < out.size(); ++i) out[i] = 1.0 - r.samples()[i];
    return Raster(r.width(), r.height(), std::move(out), r.pixel_scale());
}

Raster stretch(const Raster& r) {
    auto [lo_it, hi_it] = std::minmax_element(r.samples().begin(), r.samples().end());
    double lo = *lo_it, hi = *hi_it;
    if (hi - lo < 1e-12) return r;
    std::vector<double> out(r.samples().size());
    for (size_t i = 0; i < out.size(); ++i) out[i] = (r.samples()[i] - lo) / (hi - lo);
    return Raster(r.width(), r.height(), std::move(out), r.pixel_scale());
}

}  // namespace dunedrift

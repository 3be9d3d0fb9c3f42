#ifndef DUNEDRIFT_CORE_REGISTRATION_HPP
#define DUNEDRIFT_CORE_REGISTRATION_HPP

#include <optional>
#include <span>

#include "core/raster.hpp"

namespace dunedrift {

// p -> scale * R(rotation) * p + (tx, ty). Source frame is the image being
// warped (epoch B), target frame the reference image (epoch A).
struct SimilarityTransform {
    double scale = 1.0;
    double rotation = 0.0;  // radians
    double tx = 0.0;
    double ty = 0.0;

    SubpixelPoint apply(SubpixelPoint p) const;
    SimilarityTransform inverse() const;
};

struct ControlPointPair {
    SubpixelPoint source;
    SubpixelPoint target;
};

enum class Interpolation { Bilinear, Nearest };

// Closed-form least-squares similarity fit (scale+rotation+translation)
// from n >= 2 control points. With fixed_scale set, only rotation and
// translation are fitted; the rotation estimate is unchanged by fixing the
// scale, so the same normal equations apply.
SimilarityTransform estimate_similarity(std::span<const ControlPointPair> pairs,
                                        std::optional<double> fixed_scale = std::nullopt);

// Inverse-maps every output pixel through xf and samples the input.
// Output pixel scale is input scale / xf.scale when the input carries one.
Raster warp(const Raster& r, const SimilarityTransform& xf, int out_width, int out_height,
            BoundaryPolicy policy, Interpolation interp = Interpolation::Bilinear);

}  // namespace dunedrift

#endif

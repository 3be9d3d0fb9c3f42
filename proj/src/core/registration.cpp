#include "core/registration.hpp"

#include <cmath>

#include "core/errors.hpp"

namespace dunedrift {

namespace {
constexpr double kDegenerateSpread = 1e-12;
constexpr double kMinScale = 1e-12;
}  // namespace

SubpixelPoint SimilarityTransform::apply(SubpixelPoint p) const {
    double c = std::cos(rotation);
    double s = std::sin(rotation);
    return {scale * (c * p.x - s * p.y) + tx, scale * (s * p.x + c * p.y) + ty};
}

SimilarityTransform SimilarityTransform::inverse() const {
    if (!std::isfinite(scale) || std::abs(scale) < kMinScale) {
        throw NumericError("similarity transform is not invertible (scale ~ 0)");
    }
    double c = std::cos(rotation);
    double s = std::sin(rotation);
    // q = sRp + t  =>  p = (1/s) R^T (q - t)
    double inv_scale = 1.0 / scale;
    double itx = -inv_scale * (c * tx + s * ty);
    double ity = -inv_scale * (-s * tx + c * ty);
    return {inv_scale, -rotation, itx, ity};
}

SimilarityTransform estimate_similarity(std::span<const ControlPointPair> pairs,
                                        std::optional<double> fixed_scale) {
    if (pairs.size() < 2) {
        throw ArgumentError("similarity fit needs at least 2 control point pairs");
    }
    for (const auto& pr : pairs) {
        if (!std::isfinite(pr.source.x) || !std::isfinite(pr.source.y) ||
            !std::isfinite(pr.target.x) || !std::isfinite(pr.target.y)) {
            throw ArgumentError("control points must be finite");
        }
    }
    if (fixed_scale && (!std::isfinite(*fixed_scale) || *fixed_scale <= 0.0)) {
        throw ArgumentError("fixed scale must be positive and finite");
    }

    const double n = static_cast<double>(pairs.size());
    double mx = 0, my = 0, qx = 0, qy = 0;
    for (const auto& pr : pairs) {
        mx += pr.source.x;
        my += pr.source.y;
        qx += pr.target.x;
        qy += pr.target.y;
    }
    mx /= n;
    my /= n;
    qx /= n;
    qy /= n;

    // Centered second moments: dot and cross of source against target, and
    // the source spread.
    double dot = 0, cross = 0, spread = 0;
    for (const auto& pr : pairs) {
        double px = pr.source.x - mx, py = pr.source.y - my;
        double tx = pr.target.x - qx, ty = pr.target.y - qy;
        dot += px * tx + py * ty;
        cross += px * ty - py * tx;
        spread += px * px + py * py;
    }
    if (spread < kDegenerateSpread) {
        throw ArgumentError("similarity fit is degenerate: source points coincide");
    }

    double rotation = std::atan2(cross, dot);
    double scale = fixed_scale ? *fixed_scale : std::sqrt(dot * dot + cross * cross) / spread;
    if (!std::isfinite(scale) || scale < kMinScale) {
        throw NumericError("similarity fit produced a non-invertible scale");
    }

    double c = std::cos(rotation);
    double s = std::sin(rotation);
    double tx = qx - scale * (c * mx - s * my);
    double ty = qy - scale * (s * mx + c * my);
    return {scale, rotation, tx, ty};
}

Raster warp(const Raster& r, const SimilarityTransform& xf, int out_width, int out_height,
            BoundaryPolicy policy, Interpolation interp) {
    if (out_width < 1 || out_height < 1) {
        throw ArgumentError("warp output dimensions must be at least 1x1");
    }
    SimilarityTransform inv = xf.inverse();

    Plane out(out_width, out_height);
    for (int y = 0; y < out_height; ++y) {
        for (int x = 0; x < out_width; ++x) {
            SubpixelPoint p = inv.apply({double(x), double(y)});
            if (interp == Interpolation::Bilinear) {
                out.at(x, y) = bilinear_sample(r, p, policy);
            } else {
                out.at(x, y) = sample(r, static_cast<int>(std::lround(p.x)),
                                      static_cast<int>(std::lround(p.y)), policy);
            }
        }
    }
    std::optional<double> out_scale;
    if (r.pixel_scale()) out_scale = *r.pixel_scale() / xf.scale;
    return Raster::from_plane_clamped(out, out_scale);
}

}  // namespace dunedrift

#include "core/raster.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"

namespace dunedrift {

namespace {

void check_dims(int width, int height) {
    if (width < 1 || height < 1) {
        throw ArgumentError("raster dimensions must be at least 1x1");
    }
}

void check_pixel_scale(const std::optional<double>& mpp) {
    if (mpp && (!std::isfinite(*mpp) || *mpp <= 0.0)) {
        throw ArgumentError("pixel scale must be a positive finite meters-per-pixel value");
    }
}

}  // namespace

Plane::Plane(int width, int height, double fill) : width_(width), height_(height) {
    check_dims(width, height);
    values_.assign(static_cast<size_t>(width) * height, fill);
}

Raster::Raster(int width, int height, double fill) : width_(width), height_(height) {
    check_dims(width, height);
    if (!std::isfinite(fill) || fill < 0.0 || fill > 1.0) {
        throw ArgumentError("raster fill value must lie in [0,1]");
    }
    samples_.assign(static_cast<size_t>(width) * height, fill);
}

Raster::Raster(int width, int height, std::vector<double> samples,
               std::optional<double> pixel_scale)
    : width_(width), height_(height), samples_(std::move(samples)), pixel_scale_(pixel_scale) {
    check_dims(width, height);
    if (samples_.size() != static_cast<size_t>(width) * height) {
        throw ArgumentError("sample count does not match raster dimensions");
    }
    for (double s : samples_) {
        if (!std::isfinite(s) || s < 0.0 || s > 1.0) {
            throw ArgumentError("raster samples must lie in [0,1]");
        }
    }
    check_pixel_scale(pixel_scale_);
}

Raster Raster::from_plane_clamped(const Plane& p, std::optional<double> pixel_scale) {
    std::vector<double> samples(p.values().size());
    for (size_t i = 0; i < samples.size(); ++i) {
        double v = p.values()[i];
        if (!std::isfinite(v)) {
            throw ArgumentError("plane contains non-finite values");
        }
        samples[i] = std::clamp(v, 0.0, 1.0);
    }
    return Raster(p.width(), p.height(), std::move(samples), pixel_scale);
}

void Raster::set_pixel_scale(std::optional<double> meters_per_pixel) {
    check_pixel_scale(meters_per_pixel);
    pixel_scale_ = meters_per_pixel;
}

int map_index(int i, int n, BoundaryPolicy policy) {
    if (i >= 0 && i < n) return i;
    switch (policy) {
        case BoundaryPolicy::Clamp:
            return std::clamp(i, 0, n - 1);
        case BoundaryPolicy::Wrap: {
            int m = i % n;
            return m < 0 ? m + n : m;
        }
        case BoundaryPolicy::Reflect: {
            if (n == 1) return 0;
            int period = 2 * n;
            int m = i % period;
            if (m < 0) m += period;
            return m < n ? m : period - 1 - m;
        }
        case BoundaryPolicy::Zero:
            return -1;
    }
    return -1;
}

double sample(const Raster& r, int ix, int iy, BoundaryPolicy policy) {
    int x = map_index(ix, r.width(), policy);
    int y = map_index(iy, r.height(), policy);
    if (x < 0 || y < 0) return 0.0;
    return r.at(x, y);
}

double bilinear_sample(const Raster& r, SubpixelPoint p, BoundaryPolicy policy) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
        throw ArgumentError("bilinear sample point must be finite");
    }
    double fx = std::floor(p.x);
    double fy = std::floor(p.y);
    int x0 = static_cast<int>(fx);
    int y0 = static_cast<int>(fy);
    double tx = p.x - fx;
    double ty = p.y - fy;
    double v00 = sample(r, x0, y0, policy);
    double v10 = sample(r, x0 + 1, y0, policy);
    double v01 = sample(r, x0, y0 + 1, policy);
    double v11 = sample(r, x0 + 1, y0 + 1, policy);
    double top = (1.0 - tx) * v00 + tx * v10;
    double bottom = (1.0 - tx) * v01 + tx * v11;
    return (1.0 - ty) * top + ty * bottom;
}

std::vector<std::uint8_t> quantize(const Raster& r) {
    std::vector<std::uint8_t> bytes(r.samples().size());
    for (size_t i = 0; i < bytes.size(); ++i) {
        bytes[i] = static_cast<std::uint8_t>(std::lround(r.samples()[i] * 255.0));
    }
    return bytes;
}

Raster dequantize(int width, int height, std::span<const std::uint8_t> bytes) {
    check_dims(width, height);
    if (bytes.size() != static_cast<size_t>(width) * height) {
        throw ArgumentError("byte count does not match raster dimensions");
    }
    std::vector<double> samples(bytes.size());
    for (size_t i = 0; i < bytes.size(); ++i) {
        samples[i] = bytes[i] / 255.0;
    }
    return Raster(width, height, std::move(samples));
}

}  // namespace dunedrift

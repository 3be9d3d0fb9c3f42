#ifndef DUNEDRIFT_CORE_RASTER_HPP
#define DUNEDRIFT_CORE_RASTER_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace dunedrift {

// Rule for reading samples outside the image during convolution and warping.
enum class BoundaryPolicy {
    Clamp,    // replicate the edge pixel
    Wrap,     // modular indexing
    Reflect,  // mirror about the border, edge pixel repeated
    Zero,     // out-of-bounds reads are 0
};

struct SubpixelPoint {
    double x = 0.0;
    double y = 0.0;
};

// Unconstrained value grid. Intermediate results that may leave [0,1]
// (gradient responses, correlation surfaces) live here.
class Plane {
public:
    Plane() = default;
    Plane(int width, int height, double fill = 0.0);

    int width() const { return width_; }
    int height() const { return height_; }
    double at(int x, int y) const { return values_[static_cast<size_t>(y) * width_ + x]; }
    double& at(int x, int y) { return values_[static_cast<size_t>(y) * width_ + x]; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> values_;
};

// Grayscale image: normalized luminance in [0,1], row-major, with an
// optional physical pixel scale in meters per pixel. Samples are validated
// on construction and the object is immutable afterwards, so rasters are
// safe to share across threads.
class Raster {
public:
    Raster() = default;
    Raster(int width, int height, double fill = 0.0);
    Raster(int width, int height, std::vector<double> samples,
           std::optional<double> pixel_scale = std::nullopt);

    // Clamps plane values into [0,1]; non-finite values are rejected.
    static Raster from_plane_clamped(const Plane& p,
                                     std::optional<double> pixel_scale = std::nullopt);

    int width() const { return width_; }
    int height() const { return height_; }
    double at(int x, int y) const { return samples_[static_cast<size_t>(y) * width_ + x]; }
    const std::vector<double>& samples() const { return samples_; }
    std::optional<double> pixel_scale() const { return pixel_scale_; }
    void set_pixel_scale(std::optional<double> meters_per_pixel);

    bool same_size(const Raster& other) const {
        return width_ == other.width_ && height_ == other.height_;
    }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> samples_;
    std::optional<double> pixel_scale_;
};

// Maps index i into [0,n) per policy; returns -1 for Zero out-of-bounds.
int map_index(int i, int n, BoundaryPolicy policy);

double sample(const Raster& r, int ix, int iy, BoundaryPolicy policy);
double bilinear_sample(const Raster& r, SubpixelPoint p, BoundaryPolicy policy);

// 8-bit quantization: s -> round(s*255), b -> b/255. Quantization happens
// only at IO boundaries; all processing stays in normalized doubles.
std::vector<std::uint8_t> quantize(const Raster& r);
Raster dequantize(int width, int height, std::span<const std::uint8_t> bytes);

}  // namespace dunedrift

#endif

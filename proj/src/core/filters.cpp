#include "core/filters.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "core/errors.hpp"

namespace dunedrift {

namespace {

constexpr int kMaxKernelDim = 15;
constexpr double kMaxBlurRadius = 50.0;

void validate_kernel(const Kernel& k) {
    validate_kernel_shape(k.width, k.height);
    if (k.weights.size() != static_cast<size_t>(k.width) * k.height) {
        throw ArgumentError("kernel weight count does not match its dimensions");
    }
    if (k.anchor_x < 0 || k.anchor_x >= k.width || k.anchor_y < 0 || k.anchor_y >= k.height) {
        throw ArgumentError("kernel anchor lies outside the kernel");
    }
    for (double w : k.weights) {
        if (!std::isfinite(w)) throw ArgumentError("kernel weights must be finite");
    }
}

// 1D Gaussian taps for sigma = radius/3, truncated at +-ceil(3*sigma),
// normalized to unit sum.
std::vector<double> gaussian_taps(double radius) {
    double sigma = radius / 3.0;
    int half = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> taps(2 * half + 1);
    double sum = 0.0;
    for (int i = -half; i <= half; ++i) {
        double w = std::exp(-(double(i) * i) / (2.0 * sigma * sigma));
        taps[i + half] = w;
        sum += w;
    }
    for (double& w : taps) w /= sum;
    return taps;
}

}  // namespace

void validate_kernel_shape(int width, int height) {
    if (width < 1 || height < 1) {
        throw ArgumentError("kernel dimensions must be at least 1");
    }
    bool roberts_shape = (width == 2 && height == 2);
    if (!roberts_shape && (width % 2 == 0 || height % 2 == 0)) {
        throw ArgumentError("kernel dimensions must be odd (2x2 is the only even shape allowed)");
    }
    if (width > kMaxKernelDim || height > kMaxKernelDim) {
        throw ArgumentError("kernel dimension exceeds " + std::to_string(kMaxKernelDim));
    }
}

Kernel Kernel::centered(int width, int height, std::vector<double> weights) {
    Kernel k{width, height, width / 2, height / 2, std::move(weights)};
    validate_kernel(k);
    if (width % 2 == 0 || height % 2 == 0) {
        throw ArgumentError("centered kernels require odd dimensions");
    }
    return k;
}

Kernel Kernel::top_left(int width, int height, std::vector<double> weights) {
    Kernel k{width, height, 0, 0, std::move(weights)};
    validate_kernel(k);
    return k;
}

EdgeOperator EdgeOperator::dog(double radius_small, double radius_large) {
    if (!(radius_small > 0.0) || !(radius_small < radius_large)) {
        throw ArgumentError("DoG requires 0 < radius_small < radius_large");
    }
    if (radius_large > kMaxBlurRadius) {
        throw ArgumentError("DoG radius exceeds the blur radius limit");
    }
    return {OperatorKind::DoG, radius_small, radius_large};
}

double EdgeOperator::gain() const {
    switch (kind) {
        case OperatorKind::Sobel: return 4.0 * std::sqrt(2.0);
        case OperatorKind::Prewitt: return 3.0 * std::sqrt(2.0);
        case OperatorKind::Roberts: return std::sqrt(2.0);
        case OperatorKind::Laplace4: return 4.0;
        case OperatorKind::DoG: return 1.0;
    }
    return 1.0;
}

const Kernel& sobel_gx() {
    static const Kernel k = Kernel::centered(3, 3, {-1, 0, 1, -2, 0, 2, -1, 0, 1});
    return k;
}

const Kernel& sobel_gy() {
    static const Kernel k = Kernel::centered(3, 3, {-1, -2, -1, 0, 0, 0, 1, 2, 1});
    return k;
}

const Kernel& prewitt_gx() {
    static const Kernel k = Kernel::centered(3, 3, {-1, 0, 1, -1, 0, 1, -1, 0, 1});
    return k;
}

const Kernel& prewitt_gy() {
    static const Kernel k = Kernel::centered(3, 3, {-1, -1, -1, 0, 0, 0, 1, 1, 1});
    return k;
}

const Kernel& roberts_g1() {
    static const Kernel k = Kernel::top_left(2, 2, {1, 0, 0, -1});
    return k;
}

const Kernel& roberts_g2() {
    static const Kernel k = Kernel::top_left(2, 2, {0, 1, -1, 0});
    return k;
}

const Kernel& laplace4_kernel() {
    static const Kernel k = Kernel::centered(3, 3, {0, 1, 0, 1, -4, 1, 0, 1, 0});
    return k;
}

Plane convolve(const Raster& r, const Kernel& k, BoundaryPolicy policy) {
    validate_kernel(k);
    Plane out(r.width(), r.height());
    for (int y = 0; y < r.height(); ++y) {
        for (int x = 0; x < r.width(); ++x) {
            double acc = 0.0;
            for (int j = 0; j < k.height; ++j) {
                for (int i = 0; i < k.width; ++i) {
                    acc += k.at(i, j) * sample(r, x + i - k.anchor_x, y + j - k.anchor_y, policy);
                }
            }
            out.at(x, y) = acc;
        }
    }
    return out;
}

Raster gaussian_blur(const Raster& r, double radius, BoundaryPolicy policy) {
    if (!std::isfinite(radius) || radius <= 0.0) {
        throw ArgumentError("blur radius must be positive");
    }
    if (radius > kMaxBlurRadius) {
        throw ArgumentError("blur radius exceeds " + std::to_string(kMaxBlurRadius));
    }
    const std::vector<double> taps = gaussian_taps(radius);
    const int half = static_cast<int>(taps.size() / 2);
    const int w = r.width();
    const int h = r.height();

    // Two 1D passes; with per-axis index mapping this matches the direct 2D
    // convolution for every boundary policy.
    Plane tmp(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int i = -half; i <= half; ++i) {
                int xi = map_index(x + i, w, policy);
                if (xi >= 0) acc += taps[i + half] * r.at(xi, y);
            }
            tmp.at(x, y) = acc;
        }
    }
    Plane out(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int i = -half; i <= half; ++i) {
                int yi = map_index(y + i, h, policy);
                if (yi >= 0) acc += taps[i + half] * tmp.at(x, yi);
            }
            out.at(x, y) = acc;
        }
    }
    return Raster::from_plane_clamped(out, r.pixel_scale());
}

EdgeMap edge_response(const Raster& r, const EdgeOperator& op, BoundaryPolicy policy) {
    Plane mag(r.width(), r.height());
    switch (op.kind) {
        case OperatorKind::Sobel:
        case OperatorKind::Prewitt:
        case OperatorKind::Roberts: {
            const Kernel& kx = op.kind == OperatorKind::Sobel     ? sobel_gx()
                               : op.kind == OperatorKind::Prewitt ? prewitt_gx()
                                                                  : roberts_g1();
            const Kernel& ky = op.kind == OperatorKind::Sobel     ? sobel_gy()
                               : op.kind == OperatorKind::Prewitt ? prewitt_gy()
                                                                  : roberts_g2();
            Plane gx = convolve(r, kx, policy);
            Plane gy = convolve(r, ky, policy);
            double gain = op.gain();
            for (size_t i = 0; i < mag.values().size(); ++i) {
                double a = gx.values()[i];
                double b = gy.values()[i];
                mag.values()[i] = std::sqrt(a * a + b * b) / gain;
            }
            break;
        }
        case OperatorKind::Laplace4: {
            Plane lap = convolve(r, laplace4_kernel(), policy);
            for (size_t i = 0; i < mag.values().size(); ++i) {
                mag.values()[i] = std::abs(lap.values()[i]) / 4.0;
            }
            break;
        }
        case OperatorKind::DoG: {
            if (!(op.dog_radius_small > 0.0) || !(op.dog_radius_small < op.dog_radius_large)) {
                throw ArgumentError("DoG requires 0 < radius_small < radius_large");
            }
            Raster small = gaussian_blur(r, op.dog_radius_small, policy);
            Raster large = gaussian_blur(r, op.dog_radius_large, policy);
            for (size_t i = 0; i < mag.values().size(); ++i) {
                mag.values()[i] = std::abs(small.samples()[i] - large.samples()[i]);
            }
            break;
        }
    }
    return EdgeMap{Raster::from_plane_clamped(mag, r.pixel_scale()), op, std::nullopt};
}

EdgeMap threshold_edges(const EdgeMap& e, double t, bool binarize) {
    if (!std::isfinite(t) || t < 0.0 || t > 1.0) {
        throw ArgumentError("edge threshold must lie in [0,1]");
    }
    std::vector<double> out(e.magnitude.samples().size());
    for (size_t i = 0; i < out.size(); ++i) {
        double m = e.magnitude.samples()[i];
        out[i] = m < t ? 0.0 : (binarize ? 1.0 : m);
    }
    Raster mag(e.magnitude.width(), e.magnitude.height(), std::move(out),
               e.magnitude.pixel_scale());
    return EdgeMap{std::move(mag), e.op, t};
}

}  // namespace dunedrift

#ifndef DUNEDRIFT_CORE_FILTERS_HPP
#define DUNEDRIFT_CORE_FILTERS_HPP

#include <optional>
#include <vector>

#include "core/raster.hpp"

namespace dunedrift {

// Convolution weight matrix. Dimensions are limited to 1..15 and must be
// odd, with the single exception of 2x2 (Roberts), which anchors top-left.
struct Kernel {
    int width = 0;
    int height = 0;
    int anchor_x = 0;
    int anchor_y = 0;
    std::vector<double> weights;

    static Kernel centered(int width, int height, std::vector<double> weights);
    static Kernel top_left(int width, int height, std::vector<double> weights);

    double at(int i, int j) const { return weights[static_cast<size_t>(j) * width + i]; }
};

enum class OperatorKind { Sobel, Prewitt, Roberts, Laplace4, DoG };

// An edge operator together with its fixed maximum-response gain on [0,1]
// inputs. Dividing by the gain makes thresholds comparable across images,
// which is what lets the same low threshold be applied to both epochs.
struct EdgeOperator {
    OperatorKind kind = OperatorKind::Sobel;
    double dog_radius_small = 0.0;
    double dog_radius_large = 0.0;

    static EdgeOperator sobel() { return {OperatorKind::Sobel, 0.0, 0.0}; }
    static EdgeOperator prewitt() { return {OperatorKind::Prewitt, 0.0, 0.0}; }
    static EdgeOperator roberts() { return {OperatorKind::Roberts, 0.0, 0.0}; }
    static EdgeOperator laplace4() { return {OperatorKind::Laplace4, 0.0, 0.0}; }
    static EdgeOperator dog(double radius_small, double radius_large);

    double gain() const;
};

struct EdgeMap {
    Raster magnitude;
    EdgeOperator op;
    std::optional<double> threshold_applied;
};

// Rejects dimensions that are even (other than 2x2), non-positive, or
// above 15. Callers that receive kernel buffers from outside can check the
// shape before touching the weights.
void validate_kernel_shape(int width, int height);

// out(x,y) = sum_ij weights(i,j) * sample(r, x+i-anchor_x, y+j-anchor_y).
// Output has the input's dimensions and is unclamped.
Plane convolve(const Raster& r, const Kernel& k, BoundaryPolicy policy);

// Separable discrete Gaussian, sigma = radius/3, truncated at +-ceil(3*sigma),
// weights renormalized to unit sum. radius in (0, 50].
Raster gaussian_blur(const Raster& r, double radius, BoundaryPolicy policy);

// Gradient pairs use sqrt(Gx^2+Gy^2)/gain; Laplace4 uses |response|/4;
// DoG uses |blur(small) - blur(large)|.
EdgeMap edge_response(const Raster& r, const EdgeOperator& op, BoundaryPolicy policy);

// Samples below t become 0; samples >= t are kept, or set to 1 when binarize.
EdgeMap threshold_edges(const EdgeMap& e, double t, bool binarize);

// The fixed operator kernels.
const Kernel& sobel_gx();
const Kernel& sobel_gy();
const Kernel& prewitt_gx();
const Kernel& prewitt_gy();
const Kernel& roberts_g1();
const Kernel& roberts_g2();
const Kernel& laplace4_kernel();

}  // namespace dunedrift

#endif

#ifndef DUNEDRIFT_CORE_SYNTHGEN_HPP
#define DUNEDRIFT_CORE_SYNTHGEN_HPP

#include <cstdint>
#include <vector>

#include "core/displacement.hpp"
#include "core/raster.hpp"

namespace dunedrift {

// Crescent drawn as the set difference of two discs: a disc of radius r
// minus a disc of radius 0.8r offset by 0.5r along the orientation vector.
// The horns point along +orientation. A geometric stand-in, not a dune
// model; it only has to be dark, asymmetric and trackable.
struct Barchan {
    SubpixelPoint center;
    double radius = 0.0;       // px
    double orientation = 0.0;  // radians
    double albedo = 0.0;       // fill luminance
};

struct SceneParams {
    int width = 0;
    int height = 0;
    std::uint64_t seed = 0;
    double noise_amplitude = 0.0;  // uniform ground noise, 0..0.2
    double ground_level = 0.5;
    std::vector<Barchan> barchans;
};

struct ScenePair {
    Raster epoch_a;
    Raster epoch_b;
};

// Renders both epochs. The ground noise field is a splitmix64 hash of
// (seed, x, y), so it is attached to the terrain and identical in both
// epochs; only the barchans move, by displacements[i] pixels each.
// Edges are anti-aliased by 4x4 subsample coverage.
ScenePair generate_pair(const SceneParams& p, const std::vector<Vec2>& displacements);

}  // namespace dunedrift

#endif

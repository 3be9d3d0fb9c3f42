#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#define CHECK_NEAR(a, b, tol) CHECK(std::abs((a) - (b)) <= (tol))

#include <cmath>
#include <random>

#include "core/compose.hpp"
#include "core/errors.hpp"

using namespace dunedrift;

namespace {

Raster random_raster(std::mt19937_64& rng, int w, int h) {
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    std::vector<double> s(static_cast<size_t>(w) * h);
    for (double& v : s) v = dist(rng);
    return Raster(w, h, std::move(s));
}

}  // namespace

TEST_CASE("zero opacity returns the base exactly") {
    std::mt19937_64 rng(3);
    Raster base = random_raster(rng, 6, 6);
    Raster layer = random_raster(rng, 6, 6);
    for (auto mode : {BlendMode::Multiply, BlendMode::Additive, BlendMode::Darken}) {
        Raster out = blend(base, layer, mode, 0.0);
        for (size_t i = 0; i < out.samples().size(); ++i)
            CHECK(out.samples()[i] == base.samples()[i]);
    }
}

TEST_CASE("multiply with a white layer is the identity") {
    std::mt19937_64 rng(7);
    Raster base = random_raster(rng, 5, 4);
    Raster white(5, 4, 1.0);
    Raster out = blend(base, white, BlendMode::Multiply, 1.0);
    for (size_t i = 0; i < out.samples().size(); ++i) CHECK(out.samples()[i] == base.samples()[i]);
}

TEST_CASE("mode definitions") {
    Raster base(1, 1, 0.8);
    Raster layer(1, 1, 0.5);
    CHECK(blend(base, layer, BlendMode::Multiply, 1.0).at(0, 0) == 0.8 * 0.5);
    CHECK(blend(base, layer, BlendMode::Darken, 1.0).at(0, 0) == 0.5);
    CHECK_NEAR(blend(base, layer, BlendMode::Additive, 1.0).at(0, 0), 1.0, 1e-15);

    Raster dim(1, 1, 0.25);
    CHECK(blend(dim, layer, BlendMode::Additive, 1.0).at(0, 0) == 0.75);
}

TEST_CASE("multiply and darken never brighten") {
    std::mt19937_64 rng(11);
    Raster base = random_raster(rng, 8, 8);
    Raster layer = random_raster(rng, 8, 8);
    for (auto mode : {BlendMode::Multiply, BlendMode::Darken}) {
        Raster out = blend(base, layer, mode, 1.0);
        for (size_t i = 0; i < out.samples().size(); ++i)
            CHECK(out.samples()[i] <= base.samples()[i]);
    }
}

TEST_CASE("blend is affine in opacity") {
    std::mt19937_64 rng(13);
    Raster base = random_raster(rng, 7, 7);
    Raster layer = random_raster(rng, 7, 7);
    for (auto mode : {BlendMode::Multiply, BlendMode::Additive, BlendMode::Darken}) {
        Raster at0 = blend(base, layer, mode, 0.0);
        Raster at1 = blend(base, layer, mode, 1.0);
        for (double alpha : {0.25, 0.5, 0.8}) {
            Raster mid = blend(base, layer, mode, alpha);
            for (size_t i = 0; i < mid.samples().size(); ++i) {
                double expect = (1.0 - alpha) * at0.samples()[i] + alpha * at1.samples()[i];
                CHECK_NEAR(mid.samples()[i], expect, 1e-12);
            }
        }
    }
}

TEST_CASE("outputs stay in range") {
    std::mt19937_64 rng(17);
    Raster base = random_raster(rng, 9, 9);
    Raster layer = random_raster(rng, 9, 9);
    for (auto mode : {BlendMode::Multiply, BlendMode::Additive, BlendMode::Darken}) {
        Raster out = blend(base, layer, mode, 0.7);
        for (double v : out.samples()) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    }
}

TEST_CASE("validation") {
    Raster base(4, 4, 0.5);
    Raster small(3, 4, 0.5);
    CHECK_THROWS_AS(blend(base, small, BlendMode::Multiply, 1.0), ArgumentError);
    CHECK_THROWS_AS(blend(base, base, BlendMode::Multiply, -0.1), ArgumentError);
    CHECK_THROWS_AS(blend(base, base, BlendMode::Multiply, 1.1), ArgumentError);
}

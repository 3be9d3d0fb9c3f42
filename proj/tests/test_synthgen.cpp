#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#define CHECK_NEAR(a, b, tol) CHECK(std::abs((a) - (b)) <= (tol))

#include <cmath>

#include "core/displacement.hpp"
#include "core/errors.hpp"
#include "core/synthgen.hpp"

using namespace dunedrift;

namespace {

SceneParams basic_scene() {
    SceneParams p;
    p.width = 128;
    p.height = 128;
    p.seed = 42;
    p.noise_amplitude = 0.02;
    p.ground_level = 0.55;
    p.barchans = {{{64.0, 64.0}, 20.0, 0.0, 0.25}};
    return p;
}

}  // namespace

TEST_CASE("generation is deterministic") {
    SceneParams p = basic_scene();
    ScenePair first = generate_pair(p, {{7.0, -4.0}});
    ScenePair second = generate_pair(p, {{7.0, -4.0}});
    CHECK(first.epoch_a.samples() == second.epoch_a.samples());
    CHECK(first.epoch_b.samples() == second.epoch_b.samples());
}

TEST_CASE("zero displacement yields identical epochs") {
    ScenePair pair = generate_pair(basic_scene(), {{0.0, 0.0}});
    CHECK(pair.epoch_a.samples() == pair.epoch_b.samples());
}

TEST_CASE("different seeds change the ground") {
    SceneParams p = basic_scene();
    ScenePair one = generate_pair(p, {{0.0, 0.0}});
    p.seed = 43;
    ScenePair two = generate_pair(p, {{0.0, 0.0}});
    CHECK(one.epoch_a.samples() != two.epoch_a.samples());
}

TEST_CASE("ground far from every barchan is static") {
    SceneParams p = basic_scene();
    Vec2 d{9.0, 6.0};
    ScenePair pair = generate_pair(p, {d});
    const Barchan& b = p.barchans[0];
    int changed = 0, compared = 0;
    for (int y = 0; y < p.height; ++y)
        for (int x = 0; x < p.width; ++x) {
            double da = std::hypot(x - b.center.x, y - b.center.y);
            double db = std::hypot(x - b.center.x - d.x, y - b.center.y - d.y);
            if (da > 2.0 * b.radius && db > 2.0 * b.radius) {
                ++compared;
                if (pair.epoch_a.at(x, y) != pair.epoch_b.at(x, y)) ++changed;
            }
        }
    CHECK(compared > 1000);
    CHECK(changed == 0);
}

TEST_CASE("the crescent actually darkens the scene") {
    SceneParams p = basic_scene();
    ScenePair pair = generate_pair(p, {{0.0, 0.0}});
    // The lune lies opposite the orientation vector (horns point +x here).
    double lune = pair.epoch_a.at(64 - 13, 64);
    CHECK(lune == 0.25);
    // The cut-out region near +x stays ground-colored.
    double cut = pair.epoch_a.at(64 + 10, 64);
    CHECK(cut > 0.4);
}

TEST_CASE("frame validation") {
    SceneParams p = basic_scene();
    p.barchans[0].center = {10.0, 64.0};  // radius 20 pokes out on the left
    CHECK_THROWS_AS(generate_pair(p, {{0.0, 0.0}}), ArgumentError);

    p = basic_scene();
    CHECK_THROWS_AS(generate_pair(p, {{50.0, 0.0}}), ArgumentError);  // leaves after moving
    CHECK_THROWS_AS(generate_pair(p, {}), ArgumentError);             // missing displacement
    p.noise_amplitude = 0.5;
    CHECK_THROWS_AS(generate_pair(p, {{0.0, 0.0}}), ArgumentError);
}

TEST_CASE("displacement is recovered end to end") {
    SceneParams p;
    p.width = 256;
    p.height = 256;
    p.seed = 7;
    p.noise_amplitude = 0.02;
    p.ground_level = 0.55;
    p.barchans = {{{128.0, 128.0}, 30.0, 0.0, 0.25}};
    ScenePair pair = generate_pair(p, {{12.0, -5.0}});

    MatchResult m = ncc_match(pair.epoch_a, pair.epoch_b, {128, 128, 36}, {14});
    CHECK(m.peak_dx == 12);
    CHECK(m.peak_dy == -5);
    CHECK_NEAR(m.offset_px.x, 12.0, 0.5);
    CHECK_NEAR(m.offset_px.y, -5.0, 0.5);
    CHECK(m.peak_score >= 0.9);
}

TEST_CASE("two barchans move independently") {
    SceneParams p;
    p.width = 256;
    p.height = 256;
    p.seed = 99;
    p.noise_amplitude = 0.01;
    p.ground_level = 0.6;
    p.barchans = {{{70.0, 70.0}, 22.0, 0.3, 0.2}, {{180.0, 170.0}, 26.0, -1.2, 0.3}};
    ScenePair pair = generate_pair(p, {{5.0, 3.0}, {-4.0, 6.0}});

    MatchResult m1 = ncc_match(pair.epoch_a, pair.epoch_b, {70, 70, 28}, {8});
    CHECK(m1.peak_dx == 5);
    CHECK(m1.peak_dy == 3);
    MatchResult m2 = ncc_match(pair.epoch_a, pair.epoch_b, {180, 170, 32}, {8});
    CHECK(m2.peak_dx == -4);
    CHECK(m2.peak_dy == 6);
}

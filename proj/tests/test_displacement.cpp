#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#define CHECK_NEAR(a, b, tol) CHECK(std::abs((a) - (b)) <= (tol))

#include <cmath>
#include <cstdint>
#include <vector>

#include "core/displacement.hpp"
#include "core/errors.hpp"
#include "core/registration.hpp"

using namespace dunedrift;

namespace {

// Deterministic aperiodic texture with enough local contrast to lock onto.
Raster textured_scene(int w, int h) {
    std::vector<double> s(static_cast<size_t>(w) * h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double v = 0.5 + 0.18 * std::sin(0.37 * x + 0.11 * y) +
                       0.14 * std::cos(0.05 * x - 0.23 * y) +
                       0.1 * std::sin(0.83 * x) * std::sin(0.71 * y);
            s[static_cast<size_t>(y) * w + x] = std::clamp(v, 0.0, 1.0);
        }
    return Raster(w, h, std::move(s));
}

Raster translate_int(const Raster& a, int dx, int dy) {
    std::vector<double> s(a.samples().size());
    for (int y = 0; y < a.height(); ++y)
        for (int x = 0; x < a.width(); ++x)
            s[static_cast<size_t>(y) * a.width() + x] =
                sample(a, x - dx, y - dy, BoundaryPolicy::Clamp);
    return Raster(a.width(), a.height(), std::move(s));
}

// Independent oracle: the NCC definition written out literally.
double oracle_ncc(const Raster& a, const Raster& b, int cx, int cy, int h, int u, int v) {
    int n = 2 * h + 1;
    double ma = 0, mb = 0;
    for (int j = -h; j <= h; ++j)
        for (int i = -h; i <= h; ++i) {
            ma += a.at(cx + i, cy + j);
            mb += b.at(cx + u + i, cy + v + j);
        }
    ma /= n * n;
    mb /= n * n;
    double num = 0, da = 0, db = 0;
    for (int j = -h; j <= h; ++j)
        for (int i = -h; i <= h; ++i) {
            double ca = a.at(cx + i, cy + j) - ma;
            double cb = b.at(cx + u + i, cy + v + j) - mb;
            num += ca * cb;
            da += ca * ca;
            db += cb * cb;
        }
    return num / std::sqrt(da * db);
}

// Day-count oracle: walk the calendar one day at a time.
long oracle_days(CalendarDate a, CalendarDate b) {
    auto leap = [](int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; };
    auto month_len = [&](int y, int m) {
        static const int len[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
        return m == 2 && leap(y) ? 29 : len[m - 1];
    };
    long days = 0;
    while (a.year != b.year || a.month != b.month || a.day != b.day) {
        ++a.day;
        if (a.day > month_len(a.year, a.month)) {
            a.day = 1;
            ++a.month;
            if (a.month > 12) {
                a.month = 1;
                ++a.year;
            }
        }
        ++days;
    }
    return days;
}

}  // namespace

TEST_CASE("self match scores 1 at zero offset") {
    Raster a = textured_scene(64, 64);
    MatchResult m = ncc_match(a, a, {32, 32, 8}, {5});
    CHECK(m.peak_dx == 0);
    CHECK(m.peak_dy == 0);
    CHECK_NEAR(m.peak_score, 1.0, 1e-12);
    CHECK_NEAR(m.offset_px.x, 0.0, 0.25);
    CHECK_NEAR(m.offset_px.y, 0.0, 0.25);
}

TEST_CASE("integer translation is recovered exactly at the peak") {
    Raster a = textured_scene(96, 96);
    Raster b = translate_int(a, 5, -3);
    MatchResult m = ncc_match(a, b, {48, 48, 10}, {8});
    CHECK(m.peak_dx == 5);
    CHECK(m.peak_dy == -3);
    CHECK(m.peak_score >= 0.999);
    CHECK_NEAR(m.offset_px.x, 5.0, 0.25);
    CHECK_NEAR(m.offset_px.y, -3.0, 0.25);
}

TEST_CASE("exhaustive small-shift recovery") {
    Raster a = textured_scene(80, 80);
    for (int dy = -3; dy <= 3; ++dy)
        for (int dx = -3; dx <= 3; ++dx) {
            Raster b = translate_int(a, dx, dy);
            MatchResult m = ncc_match(a, b, {40, 40, 9}, {4});
            CHECK(m.peak_dx == dx);
            CHECK(m.peak_dy == dy);
        }
}

TEST_CASE("sub-pixel translation is recovered within a quarter pixel") {
    Raster a = textured_scene(96, 96);
    // Forward shift by (2.5, 0): warp with the translation transform.
    Raster b = warp(a, {1.0, 0.0, 2.5, 0.0}, 96, 96, BoundaryPolicy::Clamp);
    MatchResult m = ncc_match(a, b, {48, 48, 10}, {6});
    CHECK_NEAR(m.offset_px.x, 2.5, 0.25);
    CHECK_NEAR(m.offset_px.y, 0.0, 0.25);
}

TEST_CASE("scores are invariant under affine luminance changes") {
    Raster a = textured_scene(72, 72);
    Raster b = translate_int(a, 2, 1);
    std::vector<double> scaled(b.samples().size());
    for (size_t i = 0; i < scaled.size(); ++i) scaled[i] = 0.5 * b.samples()[i] + 0.25;
    Raster b2(72, 72, std::move(scaled));

    TemplateSpec tpl{36, 36, 7};
    SearchSpec search{5};
    Plane s1 = ncc_surface(a, b, tpl, search);
    Plane s2 = ncc_surface(a, b2, tpl, search);
    for (size_t i = 0; i < s1.values().size(); ++i) {
        CHECK_NEAR(s1.values()[i], s2.values()[i], 1e-9);
    }
    MatchResult m1 = ncc_match(a, b, tpl, search);
    MatchResult m2 = ncc_match(a, b2, tpl, search);
    CHECK(m1.peak_dx == m2.peak_dx);
    CHECK(m1.peak_dy == m2.peak_dy);
}

TEST_CASE("surface agrees with the brute-force oracle everywhere") {
    Raster a = textured_scene(60, 60);
    Raster b = translate_int(a, -2, 3);
    TemplateSpec tpl{30, 30, 6};
    SearchSpec search{4};
    Plane s = ncc_surface(a, b, tpl, search);
    for (int v = -4; v <= 4; ++v)
        for (int u = -4; u <= 4; ++u) {
            double expect = oracle_ncc(a, b, 30, 30, 6, u, v);
            CHECK_NEAR(s.at(u + 4, v + 4), expect, 1e-9);
        }
}

TEST_CASE("scores stay within the valid range") {
    Raster a = textured_scene(64, 64);
    Raster b = textured_scene(64, 64);
    Plane s = ncc_surface(a, b, {32, 32, 6}, {6});
    for (double v : s.values()) {
        if (std::isfinite(v)) CHECK(std::abs(v) <= 1.0 + 1e-9);
    }
}

TEST_CASE("degenerate windows") {
    Raster flat(64, 64, 0.5);
    Raster a = textured_scene(64, 64);
    CHECK_THROWS_AS(ncc_match(flat, a, {32, 32, 5}, {4}), NumericError);
    CHECK_THROWS_AS(ncc_match(a, flat, {32, 32, 5}, {4}), NumericError);

    // Partially flat: flat windows score -inf and are never selected.
    std::vector<double> s(64 * 64, 0.5);
    for (int y = 26; y < 39; ++y)
        for (int x = 26; x < 39; ++x) s[static_cast<size_t>(y) * 64 + x] = a.at(x, y);
    Raster partial(64, 64, std::move(s));
    Plane surf = ncc_surface(a, partial, {32, 32, 5}, {12});
    CHECK(std::isinf(surf.at(0, 0)));  // corner offset (-12,-12) sees flat ground
    MatchResult m = ncc_match(a, partial, {32, 32, 5}, {12});
    CHECK(std::isfinite(m.peak_score));
    CHECK(m.peak_dx == 0);
    CHECK(m.peak_dy == 0);
}

TEST_CASE("ties break to the lexicographically smallest offset") {
    // Stripes with period 4 along x and constant along y: every offset with
    // u = 0 mod 4 matches perfectly, so (-8,-8) wins.
    std::vector<double> s(64 * 64);
    for (int y = 0; y < 64; ++y)
        for (int x = 0; x < 64; ++x)
            s[static_cast<size_t>(y) * 64 + x] = (x % 4 < 2) ? 0.2 : 0.8;
    Raster a(64, 64, std::move(s));
    MatchResult m = ncc_match(a, a, {32, 32, 6}, {8});
    CHECK(m.peak_dx == -8);
    CHECK(m.peak_dy == -8);
    CHECK_NEAR(m.peak_score, 1.0, 1e-12);
}

TEST_CASE("window validation") {
    Raster a = textured_scene(32, 32);
    CHECK_THROWS_AS(ncc_match(a, a, {2, 16, 5}, {4}), ArgumentError);    // template off A
    CHECK_THROWS_AS(ncc_match(a, a, {16, 16, 12}, {8}), ArgumentError);  // search off B
    CHECK_THROWS_AS(ncc_match(a, a, {16, 16, 1}, {4}), ArgumentError);   // half too small
    CHECK_THROWS_AS(ncc_match(a, a, {16, 16, 5}, {0}), ArgumentError);   // no search
}

TEST_CASE("physical conversion reproduces the headline arithmetic") {
    MatchResult m;
    m.offset_px = {10.0, 0.0};
    // Exactly 8 Earth years: 2922 days.
    CalendarDate a{2000, 1, 1}, b{2008, 1, 1};
    CHECK(day_count(a, b) == 2922);
    MatchResult phys = to_physical(m, 1.0, a, b);
    CHECK(phys.interval_yr == 8.0);
    CHECK(phys.rate_m_per_yr == 1.25);
    CHECK(phys.offset_m->x == 10.0);

    // Euclidean magnitude over both axes.
    MatchResult diag;
    diag.offset_px = {6.0, 8.0};
    MatchResult pd = to_physical(diag, 1.0, a, b);
    CHECK_NEAR(*pd.rate_m_per_yr, 1.25, 1e-12);
}

TEST_CASE("the paper's epoch interval") {
    CalendarDate a = parse_iso_date("1999-03-11");
    CalendarDate b = parse_iso_date("2007-10-13");
    CHECK(day_count(a, b) == 3138);
    CHECK(day_count(a, b) == oracle_days(a, b));

    MatchResult m;
    m.offset_px = {10.0, 0.0};
    MatchResult phys = to_physical(m, 1.0, a, b);
    CHECK_NEAR(*phys.interval_yr, 8.59, 0.01);
}

TEST_CASE("day-count oracle over assorted spans") {
    const CalendarDate dates[] = {{1999, 12, 31}, {2000, 2, 28}, {2000, 3, 1},
                                  {2004, 2, 29},  {2100, 3, 1},  {2007, 10, 13}};
    for (const auto& a : dates)
        for (const auto& b : dates) {
            if (day_count(a, b) > 0) CHECK(day_count(a, b) == oracle_days(a, b));
        }
}

TEST_CASE("zero offset means zero rate") {
    MatchResult m;
    m.offset_px = {0.0, 0.0};
    MatchResult phys = to_physical(m, 2.5, {1999, 3, 11}, {2007, 10, 13});
    CHECK(*phys.rate_m_per_yr == 0.0);
}

TEST_CASE("physical conversion validation") {
    MatchResult m;
    m.offset_px = {1.0, 0.0};
    CHECK_THROWS_AS(to_physical(m, 0.0), ArgumentError);
    CHECK_THROWS_AS(to_physical(m, -1.0), ArgumentError);
    CHECK_THROWS_AS(to_physical(m, 1.0, {2007, 10, 13}, {1999, 3, 11}), ArgumentError);
    CHECK_THROWS_AS(to_physical(m, 1.0, {1999, 3, 11}, {1999, 3, 11}), ArgumentError);
    CHECK_THROWS_AS(parse_iso_date("1999/03/11"), ArgumentError);
    CHECK_THROWS_AS(parse_iso_date("1999-02-30"), ArgumentError);
    CHECK_THROWS_AS(parse_iso_date("1999-03-11 "), ArgumentError);
    CHECK_NOTHROW(parse_iso_date("1999-03-11"));
}

#include "core/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "core/errors.hpp"

namespace dunedrift {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

double hash01(std::uint64_t seed, int x, int y) {
    std::uint64_t h = splitmix64(seed ^ static_cast<std::uint32_t>(x));
    h = splitmix64(h ^ static_cast<std::uint32_t>(y));
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

void check_in_frame(const SceneParams& p, SubpixelPoint c, double r, const char* what) {
    if (c.x - r < 0.0 || c.x + r > p.width || c.y - r < 0.0 || c.y + r > p.height) {
        throw ArgumentError(std::string("barchan out of frame ") + what);
    }
}

double crescent_coverage(SubpixelPoint center, double radius, double orientation, double px,
                         double py) {
    const double inner_r = 0.8 * radius;
    const double ix = center.x + 0.5 * radius * std::cos(orientation);
    const double iy = center.y + 0.5 * radius * std::sin(orientation);
    int inside = 0;
    for (int sy = 0; sy < 4; ++sy) {
        for (int sx = 0; sx < 4; ++sx) {
            double x = px + (sx + 0.5) / 4.0;
            double y = py + (sy + 0.5) / 4.0;
            double dx = x - center.x, dy = y - center.y;
            if (dx * dx + dy * dy > radius * radius) continue;
            double ex = x - ix, ey = y - iy;
            if (ex * ex + ey * ey <= inner_r * inner_r) continue;
            ++inside;
        }
    }
    return inside / 16.0;
}

Raster render_epoch(const SceneParams& p, const std::vector<Barchan>& barchans) {
    std::vector<double> s(static_cast<size_t>(p.width) * p.height);
    for (int y = 0; y < p.height; ++y) {
        for (int x = 0; x < p.width; ++x) {
            double noise = (2.0 * hash01(p.seed, x, y) - 1.0) * p.noise_amplitude;
            double v = std::clamp(p.ground_level + noise, 0.0, 1.0);
            for (const Barchan& b : barchans) {
                double c = crescent_coverage(b.center, b.radius, b.orientation, x, y);
                if (c > 0.0) v = v + c * (b.albedo - v);
            }
            s[static_cast<size_t>(y) * p.width + x] = std::clamp(v, 0.0, 1.0);
        }
    }
    return Raster(p.width, p.height, std::move(s));
}

}  // namespace

ScenePair generate_pair(const SceneParams& p, const std::vector<Vec2>& displacements) {
    if (p.width < 1 || p.height < 1) {
        throw ArgumentError("scene dimensions must be at least 1x1");
    }
    if (!std::isfinite(p.noise_amplitude) || p.noise_amplitude < 0.0 || p.noise_amplitude > 0.2) {
        throw ArgumentError("noise amplitude must lie in [0,0.2]");
    }
    if (!std::isfinite(p.ground_level) || p.ground_level < 0.0 || p.ground_level > 1.0) {
        throw ArgumentError("ground level must lie in [0,1]");
    }
    if (displacements.size() != p.barchans.size()) {
        throw ArgumentError("one displacement per barchan is required");
    }

    std::vector<Barchan> shifted = p.barchans;
    for (size_t i = 0; i < p.barchans.size(); ++i) {
        const Barchan& b = p.barchans[i];
        if (!(b.radius > 0.0) || !std::isfinite(b.radius)) {
            throw ArgumentError("barchan radius must be positive");
        }
        if (!std::isfinite(b.albedo) || b.albedo < 0.0 || b.albedo > 1.0) {
            throw ArgumentError("barchan albedo must lie in [0,1]");
        }
        if (!std::isfinite(displacements[i].x) || !std::isfinite(displacements[i].y)) {
            throw ArgumentError("barchan displacement must be finite");
        }
        check_in_frame(p, b.center, b.radius, "in epoch A");
        shifted[i].center.x += displacements[i].x;
        shifted[i].center.y += displacements[i].y;
        check_in_frame(p, shifted[i].center, b.radius, "after displacement");
    }

    return ScenePair{render_epoch(p, p.barchans), render_epoch(p, shifted)};
}

}  // namespace dunedrift

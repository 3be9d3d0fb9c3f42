#include "core/displacement.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <vector>

#include "core/errors.hpp"

namespace dunedrift {

namespace {

constexpr double kDegenerateVariance = 1e-12;

// Parabolic vertex through three samples centered on the peak.
double parabolic_delta(double before, double center, double after) {
    double denom = 2.0 * (before - 2.0 * center + after);
    if (!std::isfinite(before) || !std::isfinite(after) || std::abs(denom) < 1e-12) {
        return 0.0;
    }
    return (before - after) / denom;
}

std::chrono::sys_days to_sys_days(const CalendarDate& d) {
    std::chrono::year_month_day ymd{std::chrono::year{d.year},
                                    std::chrono::month{static_cast<unsigned>(d.month)},
                                    std::chrono::day{static_cast<unsigned>(d.day)}};
    if (d.month < 1 || d.day < 1 || !ymd.ok()) {
        throw ArgumentError("invalid calendar date");
    }
    return std::chrono::sys_days(ymd);
}

}  // namespace

CalendarDate parse_iso_date(const std::string& text) {
    CalendarDate d;
    int consumed = 0;
    if (std::sscanf(text.c_str(), "%d-%2d-%2d%n", &d.year, &d.month, &d.day, &consumed) != 3 ||
        consumed != static_cast<int>(text.size())) {
        throw ArgumentError("dates must be ISO-8601 YYYY-MM-DD, got '" + text + "'");
    }
    to_sys_days(d);  // validates
    return d;
}

long day_count(const CalendarDate& from, const CalendarDate& to) {
    return (to_sys_days(to) - to_sys_days(from)).count();
}

Plane ncc_surface(const Raster& a, const Raster& b, const TemplateSpec& tpl,
                  const SearchSpec& search) {
    const int h = tpl.half_size;
    const int m = search.max_shift;
    if (h < 2) throw ArgumentError("template half size must be at least 2");
    if (m < 1) throw ArgumentError("search max shift must be at least 1");
    if (tpl.center_x - h < 0 || tpl.center_x + h >= a.width() || tpl.center_y - h < 0 ||
        tpl.center_y + h >= a.height()) {
        throw ArgumentError("template window does not fit inside image A");
    }
    if (tpl.center_x - h - m < 0 || tpl.center_x + h + m >= b.width() ||
        tpl.center_y - h - m < 0 || tpl.center_y + h + m >= b.height()) {
        throw ArgumentError("search windows do not fit inside image B");
    }

    const int n = 2 * h + 1;
    const double count = static_cast<double>(n) * n;

    std::vector<double> tpl_centered(static_cast<size_t>(n) * n);
    double mean_a = 0.0;
    for (int j = -h; j <= h; ++j)
        for (int i = -h; i <= h; ++i) mean_a += a.at(tpl.center_x + i, tpl.center_y + j);
    mean_a /= count;
    double var_a = 0.0;
    for (int j = -h; j <= h; ++j)
        for (int i = -h; i <= h; ++i) {
            double c = a.at(tpl.center_x + i, tpl.center_y + j) - mean_a;
            tpl_centered[static_cast<size_t>(j + h) * n + (i + h)] = c;
            var_a += c * c;
        }
    if (var_a < kDegenerateVariance) {
        throw NumericError("template window has zero variance");
    }

    Plane grid(2 * m + 1, 2 * m + 1);
    const double neg_inf = -std::numeric_limits<double>::infinity();
    bool any_valid = false;
    for (int v = -m; v <= m; ++v) {
        for (int u = -m; u <= m; ++u) {
            const int cx = tpl.center_x + u;
            const int cy = tpl.center_y + v;
            double mean_b = 0.0;
            for (int j = -h; j <= h; ++j)
                for (int i = -h; i <= h; ++i) mean_b += b.at(cx + i, cy + j);
            mean_b /= count;
            double var_b = 0.0, numer = 0.0;
            for (int j = -h; j <= h; ++j)
                for (int i = -h; i <= h; ++i) {
                    double c = b.at(cx + i, cy + j) - mean_b;
                    var_b += c * c;
                    numer += tpl_centered[static_cast<size_t>(j + h) * n + (i + h)] * c;
                }
            if (var_b < kDegenerateVariance) {
                grid.at(u + m, v + m) = neg_inf;
            } else {
                grid.at(u + m, v + m) = numer / std::sqrt(var_a * var_b);
                any_valid = true;
            }
        }
    }
    if (!any_valid) {
        throw NumericError("every search window has zero variance");
    }
    return grid;
}

MatchResult ncc_match(const Raster& a, const Raster& b, const TemplateSpec& tpl,
                      const SearchSpec& search) {
    const int m = search.max_shift;
    Plane grid = ncc_surface(a, b, tpl, search);

    int best_u = -m, best_v = -m;
    double best = -std::numeric_limits<double>::infinity();
    for (int v = -m; v <= m; ++v) {
        for (int u = -m; u <= m; ++u) {
            double score = grid.at(u + m, v + m);
            // Strict comparison keeps the smallest (v,u) on ties.
            if (score > best) {
                best = score;
                best_u = u;
                best_v = v;
            }
        }
    }

    double du = 0.0, dv = 0.0;
    if (best_u > -m && best_u < m) {
        du = parabolic_delta(grid.at(best_u - 1 + m, best_v + m), best,
                             grid.at(best_u + 1 + m, best_v + m));
    }
    if (best_v > -m && best_v < m) {
        dv = parabolic_delta(grid.at(best_u + m, best_v - 1 + m), best,
                             grid.at(best_u + m, best_v + 1 + m));
    }

    MatchResult result;
    result.offset_px = {best_u + du, best_v + dv};
    result.peak_dx = best_u;
    result.peak_dy = best_v;
    result.peak_score = best;
    return result;
}

MatchResult to_physical(const MatchResult& m, double meters_per_pixel) {
    if (!std::isfinite(meters_per_pixel) || meters_per_pixel <= 0.0) {
        throw ArgumentError("meters per pixel must be positive");
    }
    MatchResult out = m;
    out.offset_m = Vec2{m.offset_px.x * meters_per_pixel, m.offset_px.y * meters_per_pixel};
    return out;
}

MatchResult to_physical(const MatchResult& m, double meters_per_pixel,
                        const CalendarDate& date_a, const CalendarDate& date_b) {
    MatchResult out = to_physical(m, meters_per_pixel);
    long days = day_count(date_a, date_b);
    if (days <= 0) {
        throw ArgumentError("date_b must be after date_a");
    }
    out.interval_yr = days / 365.25;
    out.rate_m_per_yr = std::hypot(out.offset_m->x, out.offset_m->y) / *out.interval_yr;
    return out;
}

}  // namespace dunedrift

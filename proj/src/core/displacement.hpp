#ifndef DUNEDRIFT_CORE_DISPLACEMENT_HPP
#define DUNEDRIFT_CORE_DISPLACEMENT_HPP

#include <optional>
#include <string>

#include "core/raster.hpp"

namespace dunedrift {

// Analyst-chosen feature window in image A: a (2*half_size+1)^2 square
// centered on an integer pixel, fully inside A.
struct TemplateSpec {
    int center_x = 0;
    int center_y = 0;
    int half_size = 0;
};

// Integer search offsets (u,v) in [-max_shift, +max_shift]^2; every
// candidate window must fit inside image B.
struct SearchSpec {
    int max_shift = 0;
};

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

// Offset sign convention: B-position minus A-position of the feature.
struct MatchResult {
    Vec2 offset_px;               // sub-pixel refined
    int peak_dx = 0;              // integer argmax, kept for diagnostics
    int peak_dy = 0;
    double peak_score = 0.0;      // NCC at the integer peak
    std::optional<Vec2> offset_m;
    std::optional<double> interval_yr;
    std::optional<double> rate_m_per_yr;
};

// Proleptic Gregorian calendar date, parsed from ISO-8601 YYYY-MM-DD.
struct CalendarDate {
    int year = 0;
    int month = 0;
    int day = 0;
};

CalendarDate parse_iso_date(const std::string& text);
long day_count(const CalendarDate& from, const CalendarDate& to);

// Raw NCC scores for every integer offset, as a (2m+1)^2 plane indexed by
// (u+m, v+m). Zero-variance candidate windows score -inf; a zero-variance
// template is an error.
Plane ncc_surface(const Raster& a, const Raster& b, const TemplateSpec& tpl,
                  const SearchSpec& search);

// Argmax of the surface (ties resolve to the smallest (v,u) lexicographic
// pair) followed by per-axis parabolic refinement around the peak.
MatchResult ncc_match(const Raster& a, const Raster& b, const TemplateSpec& tpl,
                      const SearchSpec& search);

// Pixel offset -> meters (per axis); with dates also an interval in Earth
// years of 365.25 days and a rate along the displacement magnitude.
MatchResult to_physical(const MatchResult& m, double meters_per_pixel);
MatchResult to_physical(const MatchResult& m, double meters_per_pixel,
                        const CalendarDate& date_a, const CalendarDate& date_b);

}  // namespace dunedrift

#endif

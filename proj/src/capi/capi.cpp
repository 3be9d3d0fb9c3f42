#include "dunedrift.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>
#include <vector>

#include "core/compose.hpp"
#include "core/displacement.hpp"
#include "core/errors.hpp"
#include "core/filters.hpp"
#include "core/image_io.hpp"
#include "core/pipeline.hpp"
#include "core/raster.hpp"
#include "core/registration.hpp"
#include "core/synthgen.hpp"
#include "core/tone.hpp"
#include "core/version.hpp"

using namespace dunedrift;

struct dd_raster {
    Raster impl;
};

struct dd_edge_map {
    EdgeOperator op;
    std::optional<double> threshold;
    dd_raster magnitude;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

template <typename F>
dd_status guarded(F&& body) noexcept {
    try {
        body();
        return DD_OK;
    } catch (const ArgumentError& e) {
        set_error(e.what());
        return DD_ERR_ARGUMENT;
    } catch (const IoError& e) {
        set_error(e.what());
        return DD_ERR_IO;
    } catch (const NumericError& e) {
        set_error(e.what());
        return DD_ERR_NUMERIC;
    } catch (const std::exception& e) {
        set_error(e.what());
        return DD_ERR_INTERNAL;
    } catch (...) {
        set_error("unknown error");
        return DD_ERR_INTERNAL;
    }
}

void require(bool ok, const char* msg) {
    if (!ok) throw ArgumentError(msg);
}

BoundaryPolicy to_policy(dd_boundary p) {
    switch (p) {
        case DD_BOUNDARY_CLAMP: return BoundaryPolicy::Clamp;
        case DD_BOUNDARY_WRAP: return BoundaryPolicy::Wrap;
        case DD_BOUNDARY_REFLECT: return BoundaryPolicy::Reflect;
        case DD_BOUNDARY_ZERO: return BoundaryPolicy::Zero;
    }
    throw ArgumentError("invalid boundary policy value");
}

EdgeOperator to_operator(dd_operator op, double dog_small, double dog_large) {
    switch (op) {
        case DD_OPERATOR_SOBEL: return EdgeOperator::sobel();
        case DD_OPERATOR_PREWITT: return EdgeOperator::prewitt();
        case DD_OPERATOR_ROBERTS: return EdgeOperator::roberts();
        case DD_OPERATOR_LAPLACE: return EdgeOperator::laplace4();
        case DD_OPERATOR_DOG: return EdgeOperator::dog(dog_small, dog_large);
    }
    throw ArgumentError("invalid edge operator value");
}

dd_operator from_operator(OperatorKind kind) {
    switch (kind) {
        case OperatorKind::Sobel: return DD_OPERATOR_SOBEL;
        case OperatorKind::Prewitt: return DD_OPERATOR_PREWITT;
        case OperatorKind::Roberts: return DD_OPERATOR_ROBERTS;
        case OperatorKind::Laplace4: return DD_OPERATOR_LAPLACE;
        case OperatorKind::DoG: return DD_OPERATOR_DOG;
    }
    return DD_OPERATOR_SOBEL;
}

BlendMode to_blend(dd_blend_mode m) {
    switch (m) {
        case DD_BLEND_MULTIPLY: return BlendMode::Multiply;
        case DD_BLEND_ADDITIVE: return BlendMode::Additive;
        case DD_BLEND_DARKEN: return BlendMode::Darken;
    }
    throw ArgumentError("invalid blend mode value");
}

Interpolation to_interp(dd_interpolation i) {
    switch (i) {
        case DD_INTERP_BILINEAR: return Interpolation::Bilinear;
        case DD_INTERP_NEAREST: return Interpolation::Nearest;
    }
    throw ArgumentError("invalid interpolation value");
}

SimilarityTransform to_transform(const dd_transform* xf) {
    require(xf != nullptr, "transform must not be null");
    return {xf->scale, xf->rotation, xf->tx, xf->ty};
}

void from_transform(const SimilarityTransform& xf, dd_transform* out) {
    out->scale = xf.scale;
    out->rotation = xf.rotation;
    out->tx = xf.tx;
    out->ty = xf.ty;
}

std::vector<ControlPointPair> to_pairs(const double* quads, size_t pair_count) {
    require(quads != nullptr || pair_count == 0, "control point array must not be null");
    std::vector<ControlPointPair> pairs(pair_count);
    for (size_t i = 0; i < pair_count; ++i) {
        pairs[i] = {{quads[4 * i], quads[4 * i + 1]}, {quads[4 * i + 2], quads[4 * i + 3]}};
    }
    return pairs;
}

void from_match(const MatchResult& m, dd_match_result* out) {
    out->dx_px = m.offset_px.x;
    out->dy_px = m.offset_px.y;
    out->peak_dx = m.peak_dx;
    out->peak_dy = m.peak_dy;
    out->peak_score = m.peak_score;
    out->has_offset_m = m.offset_m.has_value();
    out->dx_m = m.offset_m ? m.offset_m->x : 0.0;
    out->dy_m = m.offset_m ? m.offset_m->y : 0.0;
    out->has_interval = m.interval_yr.has_value();
    out->interval_yr = m.interval_yr.value_or(0.0);
    out->has_rate = m.rate_m_per_yr.has_value();
    out->rate_m_per_yr = m.rate_m_per_yr.value_or(0.0);
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

}  // namespace

extern "C" {

const char* dd_version(void) { return kVersion; }

const char* dd_last_error(void) { return g_last_error.c_str(); }

void dd_string_free(char* s) { std::free(s); }

void dd_buffer_free(double* buffer) { std::free(buffer); }

/* ---- rasters ---- */

dd_status dd_raster_create(int width, int height, const double* samples, dd_raster** out) {
    return guarded([&] {
        require(out != nullptr, "output pointer must not be null");
        if (samples == nullptr) {
            *out = new dd_raster{Raster(width, height)};
        } else {
            std::vector<double> data(samples,
                                     samples + static_cast<size_t>(width) * height);
            *out = new dd_raster{Raster(width, height, std::move(data))};
        }
    });
}

dd_status dd_raster_clone(const dd_raster* r, dd_raster** out) {
    return guarded([&] {
        require(r != nullptr && out != nullptr, "raster and output must not be null");
        *out = new dd_raster{r->impl};
    });
}

void dd_raster_free(dd_raster* r) { delete r; }

int dd_raster_width(const dd_raster* r) { return r ? r->impl.width() : 0; }

int dd_raster_height(const dd_raster* r) { return r ? r->impl.height() : 0; }

const double* dd_raster_samples(const dd_raster* r) {
    return r ? r->impl.samples().data() : nullptr;
}

int dd_raster_has_pixel_scale(const dd_raster* r) {
    return r && r->impl.pixel_scale() ? 1 : 0;
}

double dd_raster_pixel_scale(const dd_raster* r) {
    return r && r->impl.pixel_scale() ? *r->impl.pixel_scale() : 0.0;
}

dd_status dd_raster_set_pixel_scale(dd_raster* r, double meters_per_pixel) {
    return guarded([&] {
        require(r != nullptr, "raster must not be null");
        r->impl.set_pixel_scale(meters_per_pixel);
    });
}

void dd_raster_clear_pixel_scale(dd_raster* r) {
    if (r) r->impl.set_pixel_scale(std::nullopt);
}

dd_status dd_raster_sample(const dd_raster* r, int x, int y, dd_boundary policy, double* out) {
    return guarded([&] {
        require(r != nullptr && out != nullptr, "raster and output must not be null");
        *out = sample(r->impl, x, y, to_policy(policy));
    });
}

dd_status dd_raster_bilinear_sample(const dd_raster* r, double x, double y, dd_boundary policy,
                                    double* out) {
    return guarded([&] {
        require(r != nullptr && out != nullptr, "raster and output must not be null");
        *out = bilinear_sample(r->impl, {x, y}, to_policy(policy));
    });
}

dd_status dd_raster_load(const char* path, dd_raster** out) {
    return guarded([&] {
        require(path != nullptr && out != nullptr, "path and output must not be null");
        *out = new dd_raster{load_image(path)};
    });
}

dd_status dd_raster_save(const dd_raster* r, const char* path) {
    return guarded([&] {
        require(r != nullptr && path != nullptr, "raster and path must not be null");
        save_image(r->impl, path);
    });
}

/* ---- filters ---- */

dd_status dd_convolve(const dd_raster* r, int kernel_width, int kernel_height,
                      const double* weights, int anchor_x, int anchor_y, dd_boundary policy,
                      double* out_values) {
    return guarded([&] {
        require(r != nullptr && weights != nullptr && out_values != nullptr,
                "raster, weights and output must not be null");
        validate_kernel_shape(kernel_width, kernel_height);
        Kernel k{kernel_width, kernel_height, anchor_x, anchor_y,
                 std::vector<double>(weights,
                                     weights + static_cast<size_t>(kernel_width) * kernel_height)};
        Plane p = convolve(r->impl, k, to_policy(policy));
        std::memcpy(out_values, p.values().data(), p.values().size() * sizeof(double));
    });
}

dd_status dd_gaussian_blur(const dd_raster* r, double radius, dd_boundary policy,
                           dd_raster** out) {
    return guarded([&] {
        require(r != nullptr && out != nullptr, "raster and output must not be null");
        *out = new dd_raster{gaussian_blur(r->impl, radius, to_policy(policy))};
    });
}

dd_status dd_edge_response(const dd_raster* r, dd_operator op, double dog_radius_small,
                           double dog_radius_large, dd_boundary policy, dd_edge_map** out) {
    return guarded([&] {
        require(r != nullptr && out != nullptr, "raster and output must not be null");
        EdgeMap e = edge_response(r->impl, to_operator(op, dog_radius_small, dog_radius_large),
                                  to_policy(policy));
        *out = new dd_edge_map{e.op, e.threshold_applied, dd_raster{std::move(e.magnitude)}};
    });
}

dd_status dd_threshold_edges(const dd_edge_map* e, double threshold, int binarize,
                             dd_edge_map** out) {
    return guarded([&] {
        require(e != nullptr && out != nullptr, "edge map and output must not be null");
        EdgeMap in{e->magnitude.impl, e->op, e->threshold};
        EdgeMap t = threshold_edges(in, threshold, binarize != 0);
        *out = new dd_edge_map{t.op, t.threshold_applied, dd_raster{std::move(t.magnitude)}};
    });
}

void dd_edge_map_free(dd_edge_map* e) { delete e; }

const dd_raster* dd_edge_map_magnitude(const dd_edge_map* e) {
    return e ? &e->magnitude : nullptr;
}

dd_operator dd_edge_map_operator(const dd_edge_map* e) {
    return e ? from_operator(e->op.kind) : DD_OPERATOR_SOBEL;
}

int dd_edge_map_has_threshold(const dd_edge_map* e) {
    return e && e->threshold ? 1 : 0;
}

double dd_edge_map_threshold(const dd_edge_map* e) {
    return e && e->threshold ? *e->threshold : 0.0;
}

/* ---- tone ---- */

dd_status dd_tone_adjust(const dd_raster* r, double brightness, double contrast,
                         dd_raster** out) {
    return guarded([&] {
        require(r != nullptr && out != nullptr, "raster and output must not be null");
        *out = new dd_raster{adjust(r->impl, {brightness, contrast})};
    });
}

dd_status dd_invert(const dd_raster* r, dd_raster** out) {
    return guarded([&] {
        require(r != nullptr && out != nullptr, "raster and output must not be null");
        *out = new dd_raster{invert(r->impl)};
    });
}

dd_status dd_stretch(const dd_raster* r, dd_raster** out) {
    return guarded([&] {
        require(r != nullptr && out != nullptr, "raster and output must not be null");
        *out = new dd_raster{stretch(r->impl)};
    });
}

/* ---- compositing ---- */

dd_status dd_blend(const dd_raster* base, const dd_raster* layer, dd_blend_mode mode,
                   double opacity, dd_raster** out) {
    return guarded([&] {
        require(base != nullptr && layer != nullptr && out != nullptr,
                "base, layer and output must not be null");
        *out = new dd_raster{blend(base->impl, layer->impl, to_blend(mode), opacity)};
    });
}

/* ---- registration ---- */

dd_status dd_estimate_similarity(const double* quads, size_t pair_count, dd_transform* out) {
    return guarded([&] {
        require(out != nullptr, "output transform must not be null");
        from_transform(estimate_similarity(to_pairs(quads, pair_count)), out);
    });
}

dd_status dd_estimate_similarity_fixed_scale(const double* quads, size_t pair_count, double scale,
                                             dd_transform* out) {
    return guarded([&] {
        require(out != nullptr, "output transform must not be null");
        from_transform(estimate_similarity(to_pairs(quads, pair_count), scale), out);
    });
}

dd_status dd_transform_apply(const dd_transform* xf, double x, double y, double* out_x,
                             double* out_y) {
    return guarded([&] {
        require(out_x != nullptr && out_y != nullptr, "output pointers must not be null");
        SubpixelPoint p = to_transform(xf).apply({x, y});
        *out_x = p.x;
        *out_y = p.y;
    });
}

dd_status dd_transform_invert(const dd_transform* xf, dd_transform* out) {
    return guarded([&] {
        require(out != nullptr, "output transform must not be null");
        from_transform(to_transform(xf).inverse(), out);
    });
}

dd_status dd_warp(const dd_raster* r, const dd_transform* xf, int out_width, int out_height,
                  dd_boundary policy, dd_interpolation interp, dd_raster** out) {
    return guarded([&] {
        require(r != nullptr && out != nullptr, "raster and output must not be null");
        *out = new dd_raster{warp(r->impl, to_transform(xf), out_width, out_height,
                                  to_policy(policy), to_interp(interp))};
    });
}

dd_status dd_control_points_load(const char* path, double** out_quads, size_t* out_pair_count) {
    return guarded([&] {
        require(path != nullptr && out_quads != nullptr && out_pair_count != nullptr,
                "path and output pointers must not be null");
        std::vector<ControlPointPair> pairs = load_control_points(path);
        double* quads = static_cast<double*>(std::malloc(sizeof(double) * 4 * pairs.size()));
        if (!quads) throw std::bad_alloc();
        for (size_t i = 0; i < pairs.size(); ++i) {
            quads[4 * i] = pairs[i].source.x;
            quads[4 * i + 1] = pairs[i].source.y;
            quads[4 * i + 2] = pairs[i].target.x;
            quads[4 * i + 3] = pairs[i].target.y;
        }
        *out_quads = quads;
        *out_pair_count = pairs.size();
    });
}

/* ---- displacement ---- */

dd_status dd_ncc_match(const dd_raster* a, const dd_raster* b, int center_x, int center_y,
                       int half_size, int max_shift, dd_match_result* out) {
    return guarded([&] {
        require(a != nullptr && b != nullptr && out != nullptr,
                "rasters and output must not be null");
        MatchResult m = ncc_match(a->impl, b->impl, {center_x, center_y, half_size}, {max_shift});
        from_match(m, out);
    });
}

dd_status dd_match_to_physical(dd_match_result* match, double meters_per_pixel,
                               const char* date_a, const char* date_b) {
    return guarded([&] {
        require(match != nullptr, "match must not be null");
        require((date_a == nullptr) == (date_b == nullptr),
                "pass both dates or neither");
        MatchResult m;
        m.offset_px = {match->dx_px, match->dy_px};
        m.peak_dx = match->peak_dx;
        m.peak_dy = match->peak_dy;
        m.peak_score = match->peak_score;
        if (date_a) {
            m = to_physical(m, meters_per_pixel, parse_iso_date(date_a), parse_iso_date(date_b));
        } else {
            m = to_physical(m, meters_per_pixel);
        }
        from_match(m, match);
    });
}

dd_status dd_day_count(const char* date_a, const char* date_b, long* out_days) {
    return guarded([&] {
        require(date_a != nullptr && date_b != nullptr && out_days != nullptr,
                "dates and output must not be null");
        *out_days = day_count(parse_iso_date(date_a), parse_iso_date(date_b));
    });
}

/* ---- synthetic scenes ---- */

dd_status dd_synth_pair(const dd_scene_params* scene, const dd_barchan* barchans,
                        size_t barchan_count, dd_raster** epoch_a, dd_raster** epoch_b) {
    return guarded([&] {
        require(scene != nullptr && epoch_a != nullptr && epoch_b != nullptr,
                "scene and outputs must not be null");
        require(barchans != nullptr || barchan_count == 0, "barchan array must not be null");
        SceneParams params;
        params.width = scene->width;
        params.height = scene->height;
        params.seed = scene->seed;
        params.noise_amplitude = scene->noise_amplitude;
        params.ground_level = scene->ground_level;
        std::vector<Vec2> displacements(barchan_count);
        for (size_t i = 0; i < barchan_count; ++i) {
            const dd_barchan& b = barchans[i];
            params.barchans.push_back(
                {{b.center_x, b.center_y}, b.radius, b.orientation, b.albedo});
            displacements[i] = {b.shift_x, b.shift_y};
        }
        ScenePair pair = generate_pair(params, displacements);
        *epoch_a = new dd_raster{std::move(pair.epoch_a)};
        *epoch_b = new dd_raster{std::move(pair.epoch_b)};
    });
}

/* ---- pipeline ---- */

dd_status dd_pipeline_run(const char* config_json, char** report_json) {
    return guarded([&] {
        require(config_json != nullptr, "config JSON must not be null");
        std::string report = run_pipeline(pipeline_config_from_json(config_json));
        if (report_json) *report_json = dup_string(report);
    });
}

dd_status dd_synth_run(const char* scene_json, char** truth_json) {
    return guarded([&] {
        require(scene_json != nullptr, "scene JSON must not be null");
        std::string truth = run_synth(synth_config_from_json(scene_json));
        if (truth_json) *truth_json = dup_string(truth);
    });
}

}  // extern "C"

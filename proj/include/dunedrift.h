/* dunedrift: change detection for two-epoch satellite image pairs.
 *
 * C interface to the dunedrift core. The library compares two grayscale
 * rasters of the same terrain taken years apart: it registers them into a
 * common frame, runs edge-operator overlays that make landform outlines
 * comparable by eye, and measures feature displacement by normalized
 * cross-correlation, converting pixels to meters and meters per year.
 *
 * Conventions:
 *  - Every fallible function returns dd_status; DD_OK is 0. On failure
 *    dd_last_error() returns a message for the calling thread, valid until
 *    the thread's next failing call.
 *  - Objects returned through dd_*_create/load/... out-parameters are owned
 *    by the caller and released with the matching dd_*_free.
 *  - Pointers returned by accessor functions (dd_raster_samples,
 *    dd_edge_map_magnitude) borrow from the parent object and stay valid
 *    only while it lives.
 *  - Luminance samples are doubles in [0,1], row-major, y down.
 */

#ifndef DUNEDRIFT_H
#define DUNEDRIFT_H

#include <stddef.h>

#if defined(_WIN32)
#define DD_API __declspec(dllexport)
#else
#define DD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct dd_raster dd_raster;
typedef struct dd_edge_map dd_edge_map;

/* Matches the CLI exit codes: 2 argument/config, 3 IO, 4 numeric. */
typedef enum dd_status {
    DD_OK = 0,
    DD_ERR_INTERNAL = 1,
    DD_ERR_ARGUMENT = 2,
    DD_ERR_IO = 3,
    DD_ERR_NUMERIC = 4
} dd_status;

typedef enum dd_boundary {
    DD_BOUNDARY_CLAMP = 0, /* replicate edge pixel (default) */
    DD_BOUNDARY_WRAP = 1,
    DD_BOUNDARY_REFLECT = 2,
    DD_BOUNDARY_ZERO = 3
} dd_boundary;

typedef enum dd_operator {
    DD_OPERATOR_SOBEL = 0,
    DD_OPERATOR_PREWITT = 1,
    DD_OPERATOR_ROBERTS = 2,
    DD_OPERATOR_LAPLACE = 3,
    DD_OPERATOR_DOG = 4
} dd_operator;

typedef enum dd_blend_mode {
    DD_BLEND_MULTIPLY = 0,
    DD_BLEND_ADDITIVE = 1,
    DD_BLEND_DARKEN = 2
} dd_blend_mode;

typedef enum dd_interpolation {
    DD_INTERP_BILINEAR = 0,
    DD_INTERP_NEAREST = 1
} dd_interpolation;

/* p -> scale * R(rotation) * p + (tx, ty); rotation in radians. */
typedef struct dd_transform {
    double scale;
    double rotation;
    double tx;
    double ty;
} dd_transform;

typedef struct dd_match_result {
    double dx_px;       /* sub-pixel refined offset, B minus A */
    double dy_px;
    int peak_dx;        /* integer correlation peak */
    int peak_dy;
    double peak_score;  /* NCC at the integer peak, in [-1,1] */
    int has_offset_m;
    double dx_m;
    double dy_m;
    int has_interval;
    double interval_yr; /* Earth years of 365.25 days */
    int has_rate;
    double rate_m_per_yr;
} dd_match_result;

typedef struct dd_scene_params {
    int width;
    int height;
    unsigned long long seed;
    double noise_amplitude; /* uniform ground noise, 0..0.2 */
    double ground_level;    /* background luminance */
} dd_scene_params;

/* Crescent dune: disc of `radius` minus a 0.8*radius disc offset by half a
 * radius along `orientation`. shift_x/shift_y move it between epochs. */
typedef struct dd_barchan {
    double center_x;
    double center_y;
    double radius;
    double orientation;
    double albedo;
    double shift_x;
    double shift_y;
} dd_barchan;

DD_API const char* dd_version(void);
DD_API const char* dd_last_error(void);
DD_API void dd_string_free(char* s);
DD_API void dd_buffer_free(double* buffer);

/* ---- rasters ---- */

/* samples may be NULL for an all-zero raster; otherwise width*height
 * doubles in [0,1]. */
DD_API dd_status dd_raster_create(int width, int height, const double* samples, dd_raster** out);
DD_API dd_status dd_raster_clone(const dd_raster* r, dd_raster** out);
DD_API void dd_raster_free(dd_raster* r);
DD_API int dd_raster_width(const dd_raster* r);
DD_API int dd_raster_height(const dd_raster* r);
DD_API const double* dd_raster_samples(const dd_raster* r);
DD_API int dd_raster_has_pixel_scale(const dd_raster* r);
DD_API double dd_raster_pixel_scale(const dd_raster* r); /* 0 when absent */
DD_API dd_status dd_raster_set_pixel_scale(dd_raster* r, double meters_per_pixel);
DD_API void dd_raster_clear_pixel_scale(dd_raster* r);

DD_API dd_status dd_raster_sample(const dd_raster* r, int x, int y, dd_boundary policy,
                                  double* out);
DD_API dd_status dd_raster_bilinear_sample(const dd_raster* r, double x, double y,
                                           dd_boundary policy, double* out);

/* PGM (P2/P5, maxval 255) or 8-bit PNG; format detected from content.
 * Saving selects the format from the extension: .pgm or .png. */
DD_API dd_status dd_raster_load(const char* path, dd_raster** out);
DD_API dd_status dd_raster_save(const dd_raster* r, const char* path);

/* ---- filters ---- */

/* Correlation-style convolution: out(x,y) = sum_ij w(i,j) *
 * sample(x+i-anchor_x, y+j-anchor_y). Kernel dimensions 1..15 odd, or 2x2.
 * out_values receives width*height unclamped doubles. */
DD_API dd_status dd_convolve(const dd_raster* r, int kernel_width, int kernel_height,
                             const double* weights, int anchor_x, int anchor_y,
                             dd_boundary policy, double* out_values);

/* Separable Gaussian, sigma = radius/3, truncated at 3 sigma; radius in
 * (0, 50]. */
DD_API dd_status dd_gaussian_blur(const dd_raster* r, double radius, dd_boundary policy,
                                  dd_raster** out);

/* Gradient magnitude normalized by the operator's fixed gain, so the same
 * threshold means the same thing on both epochs. The DoG radii are only
 * read for DD_OPERATOR_DOG. */
DD_API dd_status dd_edge_response(const dd_raster* r, dd_operator op, double dog_radius_small,
                                  double dog_radius_large, dd_boundary policy, dd_edge_map** out);

/* Samples below threshold become 0; the rest survive, or become 1 when
 * binarize is nonzero. */
DD_API dd_status dd_threshold_edges(const dd_edge_map* e, double threshold, int binarize,
                                    dd_edge_map** out);
DD_API void dd_edge_map_free(dd_edge_map* e);
DD_API const dd_raster* dd_edge_map_magnitude(const dd_edge_map* e); /* borrowed */
DD_API dd_operator dd_edge_map_operator(const dd_edge_map* e);
DD_API int dd_edge_map_has_threshold(const dd_edge_map* e);
DD_API double dd_edge_map_threshold(const dd_edge_map* e);

/* ---- tone ---- */

/* out = clamp((in-0.5)*tan((contrast+1)*pi/4) + 0.5 + brightness, 0, 1);
 * brightness in [-1,1], contrast in [-1,0.99]. */
DD_API dd_status dd_tone_adjust(const dd_raster* r, double brightness, double contrast,
                                dd_raster** out);
DD_API dd_status dd_invert(const dd_raster* r, dd_raster** out);
DD_API dd_status dd_stretch(const dd_raster* r, dd_raster** out);

/* ---- compositing ---- */

DD_API dd_status dd_blend(const dd_raster* base, const dd_raster* layer, dd_blend_mode mode,
                          double opacity, dd_raster** out);

/* ---- registration ---- */

/* quads holds pair_count quadruples: sx sy tx ty (source = image being
 * warped, target = reference frame). Least-squares similarity fit;
 * pair_count >= 2 and non-coincident sources required. */
DD_API dd_status dd_estimate_similarity(const double* quads, size_t pair_count,
                                        dd_transform* out);
DD_API dd_status dd_estimate_similarity_fixed_scale(const double* quads, size_t pair_count,
                                                    double scale, dd_transform* out);
DD_API dd_status dd_transform_apply(const dd_transform* xf, double x, double y, double* out_x,
                                    double* out_y);
DD_API dd_status dd_transform_invert(const dd_transform* xf, dd_transform* out);

/* Inverse-maps output pixels through xf and samples the input. */
DD_API dd_status dd_warp(const dd_raster* r, const dd_transform* xf, int out_width,
                         int out_height, dd_boundary policy, dd_interpolation interp,
                         dd_raster** out);

/* Text file with one "sx sy tx ty" quadruple per line; '#' comments and
 * blank lines are skipped. Returns 4*pair_count doubles via out_quads,
 * released with dd_buffer_free. */
DD_API dd_status dd_control_points_load(const char* path, double** out_quads,
                                        size_t* out_pair_count);

/* ---- displacement ---- */

/* NCC of a (2*half_size+1)^2 template from A against every integer offset
 * within max_shift in B, with per-axis parabolic sub-pixel refinement. */
DD_API dd_status dd_ncc_match(const dd_raster* a, const dd_raster* b, int center_x, int center_y,
                              int half_size, int max_shift, dd_match_result* out);

/* Fills the physical fields of *match in place. Dates are ISO-8601
 * YYYY-MM-DD; pass both or neither. With dates, the interval uses Earth
 * years of 365.25 days and the rate is |offset_m| / interval. */
DD_API dd_status dd_match_to_physical(dd_match_result* match, double meters_per_pixel,
                                      const char* date_a, const char* date_b);
DD_API dd_status dd_day_count(const char* date_a, const char* date_b, long* out_days);

/* ---- synthetic scenes ---- */

/* Renders a two-epoch pair with known ground truth. The ground noise field
 * is a deterministic hash of (seed, x, y), identical in both epochs; only
 * the barchans move. */
DD_API dd_status dd_synth_pair(const dd_scene_params* scene, const dd_barchan* barchans,
                               size_t barchan_count, dd_raster** epoch_a, dd_raster** epoch_b);

/* ---- pipeline ---- */

/* Runs the full comparison pipeline described by a JSON config (see the
 * README for the schema), writes edge maps, composites and report.json
 * into the configured output directory, and hands back the report text.
 * Release *report_json with dd_string_free. */
DD_API dd_status dd_pipeline_run(const char* config_json, char** report_json);

/* Renders a synthetic scene from a JSON description, writes the epoch
 * images plus truth.json, and hands back the truth text. */
DD_API dd_status dd_synth_run(const char* scene_json, char** truth_json);

#ifdef __cplusplus
}
#endif

#endif /* DUNEDRIFT_H */

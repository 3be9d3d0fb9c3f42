// Command line front end. Talks to the core exclusively through the
// extern-C surface in dunedrift.h, the same way an external binding would.

#include <dunedrift.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

using nlohmann::json;

namespace {

int exit_code(dd_status status) {
    switch (status) {
        case DD_OK: return 0;
        case DD_ERR_ARGUMENT: return 2;
        case DD_ERR_IO: return 3;
        case DD_ERR_NUMERIC: return 4;
        case DD_ERR_INTERNAL: return 4;
    }
    return 4;
}

[[noreturn]] void fail(dd_status status) {
    std::cerr << "error: " << dd_last_error() << "\n";
    std::exit(exit_code(status));
}

void check(dd_status status) {
    if (status != DD_OK) fail(status);
}

struct RasterHandle {
    dd_raster* r = nullptr;
    ~RasterHandle() { dd_raster_free(r); }
    RasterHandle() = default;
    RasterHandle(const RasterHandle&) = delete;
    RasterHandle& operator=(const RasterHandle&) = delete;
};

struct EdgeMapHandle {
    dd_edge_map* e = nullptr;
    ~EdgeMapHandle() { dd_edge_map_free(e); }
};

dd_boundary parse_boundary(const std::string& s) {
    if (s == "clamp") return DD_BOUNDARY_CLAMP;
    if (s == "wrap") return DD_BOUNDARY_WRAP;
    if (s == "reflect") return DD_BOUNDARY_REFLECT;
    if (s == "zero") return DD_BOUNDARY_ZERO;
    std::cerr << "error: unknown boundary policy '" << s << "'\n";
    std::exit(2);
}

dd_operator parse_operator(const std::string& s) {
    if (s == "sobel") return DD_OPERATOR_SOBEL;
    if (s == "prewitt") return DD_OPERATOR_PREWITT;
    if (s == "roberts") return DD_OPERATOR_ROBERTS;
    if (s == "laplace") return DD_OPERATOR_LAPLACE;
    if (s == "dog") return DD_OPERATOR_DOG;
    std::cerr << "error: unknown operator '" << s << "'\n";
    std::exit(2);
}

dd_blend_mode parse_blend(const std::string& s) {
    if (s == "multiply") return DD_BLEND_MULTIPLY;
    if (s == "additive") return DD_BLEND_ADDITIVE;
    if (s == "darken") return DD_BLEND_DARKEN;
    std::cerr << "error: unknown blend mode '" << s << "'\n";
    std::exit(2);
}

dd_interpolation parse_interpolation(const std::string& s) {
    if (s == "bilinear") return DD_INTERP_BILINEAR;
    if (s == "nearest") return DD_INTERP_NEAREST;
    std::cerr << "error: unknown interpolation '" << s << "'\n";
    std::exit(2);
}

json match_to_json(const dd_match_result& m) {
    json out;
    out["offset_px"] = {m.dx_px, m.dy_px};
    out["peak_px"] = {m.peak_dx, m.peak_dy};
    out["peak_score"] = m.peak_score;
    out["offset_m"] = m.has_offset_m ? json({m.dx_m, m.dy_m}) : json(nullptr);
    out["interval_yr"] = m.has_interval ? json(m.interval_yr) : json(nullptr);
    out["rate_m_per_yr"] = m.has_rate ? json(m.rate_m_per_yr) : json(nullptr);
    return out;
}

// ---- run ----

struct RunFlags {
    std::string config_path;
    std::string input_a, input_b, out, op, boundary, blend, interpolation, format;
    std::string date_a, date_b, control_points;
    double mpp_a = 0, mpp_b = 0, threshold = 0, opacity = 0, brightness = 0, contrast = 0;
    double dog_small = 0, dog_large = 0;
    int template_x = 0, template_y = 0, template_half = 0, search = 0;
    bool binarize = false;
};

int cmd_run(CLI::App* cmd, const RunFlags& f) {
    json config = json::object();
    if (!f.config_path.empty()) {
        std::ifstream in(f.config_path);
        if (!in) {
            std::cerr << "error: cannot open config file " << f.config_path << "\n";
            return 3;
        }
        try {
            in >> config;
        } catch (const json::exception& e) {
            std::cerr << "error: " << f.config_path << ": " << e.what() << "\n";
            return 2;
        }
        if (!config.is_object()) {
            std::cerr << "error: config file must hold a JSON object\n";
            return 2;
        }
    }

    // Flags override config keys.
    auto passed = [&](const char* name) { return cmd->count(name) > 0; };
    if (passed("--input-a")) config["input_a"] = f.input_a;
    if (passed("--input-b")) config["input_b"] = f.input_b;
    if (passed("--out")) config["output_dir"] = f.out;
    if (passed("--mpp-a")) config["pixel_scale_a"] = f.mpp_a;
    if (passed("--mpp-b")) config["pixel_scale_b"] = f.mpp_b;
    if (passed("--date-a")) config["date_a"] = f.date_a;
    if (passed("--date-b")) config["date_b"] = f.date_b;
    if (passed("--operator")) config["operator"] = f.op;
    if (passed("--dog-small")) config["dog_radius_small"] = f.dog_small;
    if (passed("--dog-large")) config["dog_radius_large"] = f.dog_large;
    if (passed("--boundary")) config["boundary"] = f.boundary;
    if (passed("--threshold")) config["threshold"] = f.threshold;
    if (passed("--binarize")) config["binarize"] = f.binarize;
    if (passed("--blend")) config["blend"] = f.blend;
    if (passed("--opacity")) config["opacity"] = f.opacity;
    if (passed("--interpolation")) config["interpolation"] = f.interpolation;
    if (passed("--control-points")) config["control_points"] = f.control_points;
    if (passed("--brightness")) config["tone"]["brightness"] = f.brightness;
    if (passed("--contrast")) config["tone"]["contrast"] = f.contrast;
    if (passed("--template-x")) config["template"]["x"] = f.template_x;
    if (passed("--template-y")) config["template"]["y"] = f.template_y;
    if (passed("--template-half")) config["template"]["half"] = f.template_half;
    if (passed("--search")) config["search"]["max_shift"] = f.search;
    if (passed("--format")) config["format"] = f.format;

    char* report = nullptr;
    dd_status status = dd_pipeline_run(config.dump().c_str(), &report);
    if (status != DD_OK) fail(status);
    std::cout << report;
    dd_string_free(report);
    return 0;
}

// ---- synth ----

struct SynthFlags {
    int width = 512, height = 512;
    unsigned long long seed = 0;
    double noise = 0.02, ground = 0.55, mpp = 0;
    std::vector<std::string> barchans;
    std::string date_a, date_b, out, format;
};

int cmd_synth(CLI::App* cmd, const SynthFlags& f) {
    json scene{{"width", f.width},   {"height", f.height},
               {"seed", f.seed},     {"noise_amplitude", f.noise},
               {"ground_level", f.ground}, {"output_dir", f.out}};
    json barchans = json::array();
    for (const std::string& spec : f.barchans) {
        double cx, cy, r, orient, albedo, dx, dy;
        if (std::sscanf(spec.c_str(), "%lf,%lf,%lf,%lf,%lf,%lf,%lf", &cx, &cy, &r, &orient,
                        &albedo, &dx, &dy) != 7) {
            std::cerr << "error: --barchan expects cx,cy,radius,orientation,albedo,dx,dy\n";
            return 2;
        }
        barchans.push_back(json{{"center", {cx, cy}},
                                {"radius", r},
                                {"orientation", orient},
                                {"albedo", albedo},
                                {"displacement", {dx, dy}}});
    }
    scene["barchans"] = barchans;
    if (cmd->count("--mpp")) scene["pixel_scale"] = f.mpp;
    if (cmd->count("--date-a")) scene["date_a"] = f.date_a;
    if (cmd->count("--date-b")) scene["date_b"] = f.date_b;
    if (cmd->count("--format")) scene["format"] = f.format;

    char* truth = nullptr;
    dd_status status = dd_synth_run(scene.dump().c_str(), &truth);
    if (status != DD_OK) fail(status);
    std::cout << truth;
    dd_string_free(truth);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dunedrift: edge-overlay comparison and displacement measurement "
                 "for two-epoch satellite image pairs"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(dd_version()));

    // run
    RunFlags rf;
    CLI::App* run = app.add_subcommand("run", "full pipeline: register, tone, edge, "
                                              "threshold, invert, compose, measure, report");
    run->add_option("--config", rf.config_path, "JSON config file; flags override its keys");
    run->add_option("--input-a", rf.input_a, "earlier epoch image (PGM or PNG)");
    run->add_option("--input-b", rf.input_b, "later epoch image");
    run->add_option("--out", rf.out, "output directory");
    run->add_option("--mpp-a", rf.mpp_a, "meters per pixel of image A");
    run->add_option("--mpp-b", rf.mpp_b, "meters per pixel of image B");
    run->add_option("--date-a", rf.date_a, "acquisition date of A (YYYY-MM-DD)");
    run->add_option("--date-b", rf.date_b, "acquisition date of B (YYYY-MM-DD)");
    run->add_option("--operator", rf.op, "sobel|prewitt|roberts|laplace|dog");
    run->add_option("--dog-small", rf.dog_small, "DoG small radius (px)");
    run->add_option("--dog-large", rf.dog_large, "DoG large radius (px)");
    run->add_option("--boundary", rf.boundary, "clamp|wrap|reflect|zero");
    run->add_option("--threshold", rf.threshold, "edge threshold in [0,1]");
    run->add_flag("--binarize", rf.binarize, "binarize surviving edges");
    run->add_option("--blend", rf.blend, "multiply|additive|darken");
    run->add_option("--opacity", rf.opacity, "layer opacity in [0,1]");
    run->add_option("--interpolation", rf.interpolation, "bilinear|nearest");
    run->add_option("--control-points", rf.control_points, "control point file (sx sy tx ty)");
    run->add_option("--brightness", rf.brightness, "tone brightness in [-1,1]");
    run->add_option("--contrast", rf.contrast, "tone contrast in [-1,0.99]");
    run->add_option("--template-x", rf.template_x, "template center x in A");
    run->add_option("--template-y", rf.template_y, "template center y in A");
    run->add_option("--template-half", rf.template_half, "template half size (px)");
    run->add_option("--search", rf.search, "search max shift (px)");
    run->add_option("--format", rf.format, "artifact image format: png|pgm");

    // edge
    struct {
        std::string input, out, op = "sobel", boundary = "clamp";
        double threshold = 0.0, dog_small = 0, dog_large = 0;
        bool binarize = false, invert = false;
    } ef;
    CLI::App* edge = app.add_subcommand("edge", "edge-detect a single image");
    edge->add_option("--input", ef.input, "input image")->required();
    edge->add_option("--out", ef.out, "output image (.pgm or .png)")->required();
    edge->add_option("--operator", ef.op, "sobel|prewitt|roberts|laplace|dog");
    edge->add_option("--dog-small", ef.dog_small, "DoG small radius (px)");
    edge->add_option("--dog-large", ef.dog_large, "DoG large radius (px)");
    edge->add_option("--boundary", ef.boundary, "clamp|wrap|reflect|zero");
    edge->add_option("--threshold", ef.threshold, "edge threshold in [0,1]");
    edge->add_flag("--binarize", ef.binarize, "binarize surviving edges");
    edge->add_flag("--invert", ef.invert, "write inverted colors (dark edges on white)");

    // compose
    struct {
        std::string base, layer, out, blend = "multiply";
        double opacity = 1.0;
    } cf;
    CLI::App* compose = app.add_subcommand("compose", "blend a layer over a base image");
    compose->add_option("--base", cf.base, "base image")->required();
    compose->add_option("--layer", cf.layer, "layer image")->required();
    compose->add_option("--out", cf.out, "output image")->required();
    compose->add_option("--blend", cf.blend, "multiply|additive|darken");
    compose->add_option("--opacity", cf.opacity, "layer opacity in [0,1]");

    // register
    struct {
        std::string input_a, input_b, points, out, boundary = "clamp",
                    interpolation = "bilinear";
        double mpp_a = 0, mpp_b = 0;
    } gf;
    CLI::App* reg = app.add_subcommand("register", "warp image B into image A's frame");
    reg->add_option("--input-a", gf.input_a, "reference image A")->required();
    reg->add_option("--input-b", gf.input_b, "image B to warp")->required();
    reg->add_option("--control-points", gf.points, "control point file (sx sy tx ty, B -> A)")
        ->required();
    reg->add_option("--out", gf.out, "output image")->required();
    reg->add_option("--mpp-a", gf.mpp_a, "meters per pixel of A (fixes the fitted scale)");
    reg->add_option("--mpp-b", gf.mpp_b, "meters per pixel of B");
    reg->add_option("--boundary", gf.boundary, "clamp|wrap|reflect|zero");
    reg->add_option("--interpolation", gf.interpolation, "bilinear|nearest");

    // measure
    struct {
        std::string input_a, input_b, date_a, date_b;
        int x = 0, y = 0, half = 0, search = 0;
        double mpp_a = 0;
    } mf;
    CLI::App* measure = app.add_subcommand("measure", "NCC displacement of a feature");
    measure->add_option("--input-a", mf.input_a, "earlier epoch image")->required();
    measure->add_option("--input-b", mf.input_b, "later epoch image")->required();
    measure->add_option("--template-x", mf.x, "template center x in A")->required();
    measure->add_option("--template-y", mf.y, "template center y in A")->required();
    measure->add_option("--template-half", mf.half, "template half size (px)")->required();
    measure->add_option("--search", mf.search, "search max shift (px)")->required();
    measure->add_option("--mpp-a", mf.mpp_a, "meters per pixel (enables meters)");
    measure->add_option("--date-a", mf.date_a, "date of A (enables m/yr)");
    measure->add_option("--date-b", mf.date_b, "date of B");

    // synth
    SynthFlags sf;
    CLI::App* synth = app.add_subcommand("synth", "generate a two-epoch synthetic scene "
                                                  "with known ground truth");
    synth->add_option("--width", sf.width, "scene width (px)");
    synth->add_option("--height", sf.height, "scene height (px)");
    synth->add_option("--seed", sf.seed, "noise seed");
    synth->add_option("--noise", sf.noise, "ground noise amplitude in [0,0.2]");
    synth->add_option("--ground", sf.ground, "ground luminance");
    synth->add_option("--barchan", sf.barchans,
                      "barchan as cx,cy,radius,orientation,albedo,dx,dy (repeatable)")
        ->required();
    synth->add_option("--mpp", sf.mpp, "pixel scale recorded in the truth file");
    synth->add_option("--date-a", sf.date_a, "epoch A date");
    synth->add_option("--date-b", sf.date_b, "epoch B date");
    synth->add_option("--out", sf.out, "output directory")->required();
    synth->add_option("--format", sf.format, "image format: png|pgm");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) return cmd_run(run, rf);
    if (synth->parsed()) return cmd_synth(synth, sf);

    if (edge->parsed()) {
        RasterHandle input;
        check(dd_raster_load(ef.input.c_str(), &input.r));
        EdgeMapHandle edges;
        check(dd_edge_response(input.r, parse_operator(ef.op), ef.dog_small, ef.dog_large,
                               parse_boundary(ef.boundary), &edges.e));
        EdgeMapHandle kept;
        check(dd_threshold_edges(edges.e, ef.threshold, ef.binarize ? 1 : 0, &kept.e));
        const dd_raster* magnitude = dd_edge_map_magnitude(kept.e);
        if (ef.invert) {
            RasterHandle inverted;
            check(dd_invert(magnitude, &inverted.r));
            check(dd_raster_save(inverted.r, ef.out.c_str()));
        } else {
            check(dd_raster_save(magnitude, ef.out.c_str()));
        }
        return 0;
    }

    if (compose->parsed()) {
        RasterHandle base, layer, blended;
        check(dd_raster_load(cf.base.c_str(), &base.r));
        check(dd_raster_load(cf.layer.c_str(), &layer.r));
        check(dd_blend(base.r, layer.r, parse_blend(cf.blend), cf.opacity, &blended.r));
        check(dd_raster_save(blended.r, cf.out.c_str()));
        return 0;
    }

    if (reg->parsed()) {
        RasterHandle a, b;
        check(dd_raster_load(gf.input_a.c_str(), &a.r));
        check(dd_raster_load(gf.input_b.c_str(), &b.r));
        double* quads = nullptr;
        size_t pair_count = 0;
        check(dd_control_points_load(gf.points.c_str(), &quads, &pair_count));
        dd_transform xf{};
        dd_status status;
        if (reg->count("--mpp-a") && reg->count("--mpp-b")) {
            status = dd_estimate_similarity_fixed_scale(quads, pair_count, gf.mpp_b / gf.mpp_a,
                                                        &xf);
        } else {
            status = dd_estimate_similarity(quads, pair_count, &xf);
        }
        dd_buffer_free(quads);
        check(status);
        RasterHandle warped;
        check(dd_warp(b.r, &xf, dd_raster_width(a.r), dd_raster_height(a.r),
                      parse_boundary(gf.boundary), parse_interpolation(gf.interpolation),
                      &warped.r));
        check(dd_raster_save(warped.r, gf.out.c_str()));
        json out{{"transform",
                  {{"scale", xf.scale}, {"rotation_rad", xf.rotation}, {"tx", xf.tx}, {"ty", xf.ty}}},
                 {"output", gf.out}};
        std::cout << out.dump(2) << "\n";
        return 0;
    }

    if (measure->parsed()) {
        if (measure->count("--date-a") != measure->count("--date-b")) {
            std::cerr << "error: pass both --date-a and --date-b or neither\n";
            return 2;
        }
        RasterHandle a, b;
        check(dd_raster_load(mf.input_a.c_str(), &a.r));
        check(dd_raster_load(mf.input_b.c_str(), &b.r));
        dd_match_result m{};
        check(dd_ncc_match(a.r, b.r, mf.x, mf.y, mf.half, mf.search, &m));
        if (measure->count("--mpp-a")) {
            const char* da = measure->count("--date-a") ? mf.date_a.c_str() : nullptr;
            const char* db = measure->count("--date-b") ? mf.date_b.c_str() : nullptr;
            check(dd_match_to_physical(&m, mf.mpp_a, da, db));
        }
        std::cout << match_to_json(m).dump(2) << "\n";
        return 0;
    }

    return 0;
}

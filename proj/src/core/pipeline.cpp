#include "core/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "core/errors.hpp"
#include "core/image_io.hpp"
#include "core/version.hpp"

namespace dunedrift {

namespace fs = std::filesystem;
using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

[[noreturn]] void config_error(const std::string& msg) { throw ArgumentError("config: " + msg); }

void reject_unknown_keys(const json& obj, const std::set<std::string>& known,
                         const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!known.contains(it.key())) {
            config_error("unknown key '" + it.key() + "' in " + where);
        }
    }
}

double require_number(const json& obj, const char* key) {
    if (!obj.contains(key) || !obj[key].is_number()) {
        config_error(std::string("'") + key + "' must be a number");
    }
    return obj[key].get<double>();
}

std::string require_string(const json& obj, const char* key) {
    if (!obj.contains(key) || !obj[key].is_string()) {
        config_error(std::string("'") + key + "' must be a string");
    }
    return obj[key].get<std::string>();
}

std::optional<double> optional_number(const json& obj, const char* key) {
    if (!obj.contains(key) || obj[key].is_null()) return std::nullopt;
    if (!obj[key].is_number()) config_error(std::string("'") + key + "' must be a number");
    return obj[key].get<double>();
}

std::optional<std::string> optional_string(const json& obj, const char* key) {
    if (!obj.contains(key) || obj[key].is_null()) return std::nullopt;
    if (!obj[key].is_string()) config_error(std::string("'") + key + "' must be a string");
    return obj[key].get<std::string>();
}

EdgeOperator operator_from_config(const std::string& name, std::optional<double> dog_small,
                                  std::optional<double> dog_large) {
    if (name == "dog") {
        if (!dog_small || !dog_large) {
            config_error("operator 'dog' requires dog_radius_small and dog_radius_large");
        }
        return EdgeOperator::dog(*dog_small, *dog_large);
    }
    if (dog_small || dog_large) {
        config_error("dog radii are only valid with operator 'dog'");
    }
    if (name == "sobel") return EdgeOperator::sobel();
    if (name == "prewitt") return EdgeOperator::prewitt();
    if (name == "roberts") return EdgeOperator::roberts();
    if (name == "laplace") return EdgeOperator::laplace4();
    config_error("unknown operator '" + name + "' (sobel|prewitt|roberts|laplace|dog)");
}

// Runs one pipeline stage, prefixing any failure with the stage name.
template <typename F>
auto stage(const char* name, F&& body) {
    try {
        return body();
    } catch (const ArgumentError& e) {
        throw ArgumentError(std::string(name) + ": " + e.what());
    } catch (const IoError& e) {
        throw IoError(std::string(name) + ": " + e.what());
    } catch (const NumericError& e) {
        throw NumericError(std::string(name) + ": " + e.what());
    }
}

std::string utc_timestamp() {
    std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(path.string() + ": cannot open file for writing");
    out << text;
    if (!out) throw IoError(path.string() + ": write failed");
}

// Removes files this run created, best effort, on failure.
class OutputTracker {
public:
    void record(const fs::path& p) { written_.push_back(p); }
    void discard_all() noexcept {
        std::error_code ec;
        for (const auto& p : written_) fs::remove(p, ec);
    }

private:
    std::vector<fs::path> written_;
};

ordered_json scene_echo(const SynthConfig& cfg) {
    ordered_json barchans = ordered_json::array();
    for (size_t i = 0; i < cfg.scene.barchans.size(); ++i) {
        const Barchan& b = cfg.scene.barchans[i];
        barchans.push_back({{"center", {b.center.x, b.center.y}},
                            {"radius", b.radius},
                            {"orientation", b.orientation},
                            {"albedo", b.albedo},
                            {"displacement", {cfg.displacements[i].x, cfg.displacements[i].y}}});
    }
    return ordered_json{{"width", cfg.scene.width},
                        {"height", cfg.scene.height},
                        {"seed", cfg.scene.seed},
                        {"noise_amplitude", cfg.scene.noise_amplitude},
                        {"ground_level", cfg.scene.ground_level},
                        {"barchans", barchans}};
}

}  // namespace

std::string to_string(BoundaryPolicy p) {
    switch (p) {
        case BoundaryPolicy::Clamp: return "clamp";
        case BoundaryPolicy::Wrap: return "wrap";
        case BoundaryPolicy::Reflect: return "reflect";
        case BoundaryPolicy::Zero: return "zero";
    }
    return "clamp";
}

std::string to_string(BlendMode m) {
    switch (m) {
        case BlendMode::Multiply: return "multiply";
        case BlendMode::Additive: return "additive";
        case BlendMode::Darken: return "darken";
    }
    return "multiply";
}

std::string to_string(Interpolation i) {
    return i == Interpolation::Nearest ? "nearest" : "bilinear";
}

std::string operator_name(const EdgeOperator& op) {
    switch (op.kind) {
        case OperatorKind::Sobel: return "sobel";
        case OperatorKind::Prewitt: return "prewitt";
        case OperatorKind::Roberts: return "roberts";
        case OperatorKind::Laplace4: return "laplace";
        case OperatorKind::DoG: return "dog";
    }
    return "sobel";
}

BoundaryPolicy boundary_from_string(const std::string& s) {
    if (s == "clamp") return BoundaryPolicy::Clamp;
    if (s == "wrap") return BoundaryPolicy::Wrap;
    if (s == "reflect") return BoundaryPolicy::Reflect;
    if (s == "zero") return BoundaryPolicy::Zero;
    config_error("unknown boundary policy '" + s + "' (clamp|wrap|reflect|zero)");
}

BlendMode blend_mode_from_string(const std::string& s) {
    if (s == "multiply") return BlendMode::Multiply;
    if (s == "additive") return BlendMode::Additive;
    if (s == "darken") return BlendMode::Darken;
    config_error("unknown blend mode '" + s + "' (multiply|additive|darken)");
}

Interpolation interpolation_from_string(const std::string& s) {
    if (s == "bilinear") return Interpolation::Bilinear;
    if (s == "nearest") return Interpolation::Nearest;
    config_error("unknown interpolation '" + s + "' (bilinear|nearest)");
}

std::vector<ControlPointPair> load_control_points(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path + ": cannot open control point file");
    std::vector<ControlPointPair> pairs;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        double sx, sy, tx, ty;
        if (!(ss >> sx)) continue;  // blank or comment-only line
        if (!(ss >> sy >> tx >> ty)) {
            throw IoError(path + ":" + std::to_string(lineno) +
                          ": expected four numbers 'sx sy tx ty'");
        }
        double extra;
        if (ss >> extra) {
            throw IoError(path + ":" + std::to_string(lineno) + ": trailing data after quadruple");
        }
        pairs.push_back({{sx, sy}, {tx, ty}});
    }
    return pairs;
}

PipelineConfig pipeline_config_from_json(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::exception& e) {
        config_error(e.what());
    }
    if (!root.is_object()) config_error("top level must be a JSON object");
    reject_unknown_keys(root,
                        {"input_a", "input_b", "pixel_scale_a", "pixel_scale_b", "date_a",
                         "date_b", "tone", "operator", "dog_radius_small", "dog_radius_large",
                         "boundary", "threshold", "binarize", "blend", "opacity", "interpolation",
                         "control_points", "template", "search", "output_dir", "format"},
                        "config");

    PipelineConfig cfg;
    cfg.input_a = require_string(root, "input_a");
    cfg.input_b = require_string(root, "input_b");
    cfg.output_dir = require_string(root, "output_dir");
    cfg.pixel_scale_a = optional_number(root, "pixel_scale_a");
    cfg.pixel_scale_b = optional_number(root, "pixel_scale_b");
    cfg.date_a = optional_string(root, "date_a");
    cfg.date_b = optional_string(root, "date_b");

    if (root.contains("tone")) {
        const json& tone = root["tone"];
        if (!tone.is_object()) config_error("'tone' must be an object");
        reject_unknown_keys(tone, {"brightness", "contrast"}, "tone");
        if (tone.contains("brightness")) cfg.tone.brightness = require_number(tone, "brightness");
        if (tone.contains("contrast")) cfg.tone.contrast = require_number(tone, "contrast");
    }

    std::string op_name = root.contains("operator") ? require_string(root, "operator") : "sobel";
    cfg.op = operator_from_config(op_name, optional_number(root, "dog_radius_small"),
                                  optional_number(root, "dog_radius_large"));

    if (root.contains("boundary")) cfg.boundary = boundary_from_string(require_string(root, "boundary"));
    if (root.contains("threshold")) cfg.threshold = require_number(root, "threshold");
    if (root.contains("binarize")) {
        if (!root["binarize"].is_boolean()) config_error("'binarize' must be a boolean");
        cfg.binarize = root["binarize"].get<bool>();
    }
    if (root.contains("blend")) cfg.blend_mode = blend_mode_from_string(require_string(root, "blend"));
    if (root.contains("opacity")) cfg.opacity = require_number(root, "opacity");
    if (root.contains("interpolation")) {
        cfg.interpolation = interpolation_from_string(require_string(root, "interpolation"));
    }
    cfg.control_points = optional_string(root, "control_points");

    if (root.contains("template") && !root["template"].is_null()) {
        const json& tpl = root["template"];
        if (!tpl.is_object()) config_error("'template' must be an object");
        reject_unknown_keys(tpl, {"x", "y", "half"}, "template");
        cfg.tpl = TemplateSpec{static_cast<int>(require_number(tpl, "x")),
                               static_cast<int>(require_number(tpl, "y")),
                               static_cast<int>(require_number(tpl, "half"))};
    }
    if (root.contains("search") && !root["search"].is_null()) {
        const json& search = root["search"];
        if (!search.is_object()) config_error("'search' must be an object");
        reject_unknown_keys(search, {"max_shift"}, "search");
        cfg.search = SearchSpec{static_cast<int>(require_number(search, "max_shift"))};
    }
    if (root.contains("format")) cfg.format = require_string(root, "format");
    return cfg;
}

SynthConfig synth_config_from_json(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::exception& e) {
        config_error(e.what());
    }
    if (!root.is_object()) config_error("top level must be a JSON object");
    reject_unknown_keys(root,
                        {"width", "height", "seed", "noise_amplitude", "ground_level", "barchans",
                         "pixel_scale", "date_a", "date_b", "output_dir", "format"},
                        "synth config");

    SynthConfig cfg;
    cfg.scene.width = static_cast<int>(require_number(root, "width"));
    cfg.scene.height = static_cast<int>(require_number(root, "height"));
    if (root.contains("seed")) {
        if (!root["seed"].is_number_unsigned()) {
            config_error("'seed' must be a non-negative integer");
        }
        cfg.scene.seed = root["seed"].get<std::uint64_t>();
    }
    if (root.contains("noise_amplitude")) {
        cfg.scene.noise_amplitude = require_number(root, "noise_amplitude");
    }
    if (root.contains("ground_level")) cfg.scene.ground_level = require_number(root, "ground_level");

    if (!root.contains("barchans") || !root["barchans"].is_array() || root["barchans"].empty()) {
        config_error("'barchans' must be a non-empty array");
    }
    for (const json& b : root["barchans"]) {
        if (!b.is_object()) config_error("each barchan must be an object");
        reject_unknown_keys(b, {"center", "radius", "orientation", "albedo", "displacement"},
                            "barchan");
        if (!b.contains("center") || !b["center"].is_array() || b["center"].size() != 2) {
            config_error("barchan 'center' must be [x, y]");
        }
        Barchan shape;
        shape.center = {b["center"][0].get<double>(), b["center"][1].get<double>()};
        shape.radius = require_number(b, "radius");
        if (b.contains("orientation")) shape.orientation = require_number(b, "orientation");
        shape.albedo = require_number(b, "albedo");
        Vec2 d{0.0, 0.0};
        if (b.contains("displacement")) {
            if (!b["displacement"].is_array() || b["displacement"].size() != 2) {
                config_error("barchan 'displacement' must be [dx, dy]");
            }
            d = {b["displacement"][0].get<double>(), b["displacement"][1].get<double>()};
        }
        cfg.scene.barchans.push_back(shape);
        cfg.displacements.push_back(d);
    }
    cfg.pixel_scale = optional_number(root, "pixel_scale");
    cfg.date_a = optional_string(root, "date_a");
    cfg.date_b = optional_string(root, "date_b");
    cfg.output_dir = require_string(root, "output_dir");
    if (root.contains("format")) cfg.format = require_string(root, "format");
    return cfg;
}

std::string run_pipeline(const PipelineConfig& cfg) {
    // Config-level validation that spans stages.
    stage("config", [&] {
        if (cfg.input_a.empty() || cfg.input_b.empty()) {
            throw ArgumentError("input_a and input_b are required");
        }
        if (cfg.output_dir.empty()) throw ArgumentError("output_dir is required");
        if (cfg.tpl.has_value() != cfg.search.has_value()) {
            throw ArgumentError("measurement needs both template and search");
        }
        if (cfg.date_a.has_value() != cfg.date_b.has_value()) {
            throw ArgumentError("date_a and date_b must be given together");
        }
        if (cfg.format != "png" && cfg.format != "pgm") {
            throw ArgumentError("format must be png or pgm");
        }
        if (cfg.date_a) {
            CalendarDate a = parse_iso_date(*cfg.date_a);
            CalendarDate b = parse_iso_date(*cfg.date_b);
            if (day_count(a, b) <= 0) throw ArgumentError("date_b must be after date_a");
        }
        if (cfg.pixel_scale_a && (!std::isfinite(*cfg.pixel_scale_a) || *cfg.pixel_scale_a <= 0)) {
            throw ArgumentError("pixel_scale_a must be positive");
        }
        if (cfg.pixel_scale_b && (!std::isfinite(*cfg.pixel_scale_b) || *cfg.pixel_scale_b <= 0)) {
            throw ArgumentError("pixel_scale_b must be positive");
        }
    });

    Raster a = stage("load", [&] {
        Raster r = load_image(cfg.input_a);
        r.set_pixel_scale(cfg.pixel_scale_a);
        return r;
    });
    Raster b = stage("load", [&] {
        Raster r = load_image(cfg.input_b);
        r.set_pixel_scale(cfg.pixel_scale_b);
        return r;
    });

    // Bring B into A's frame. Control points drive the fit; when both pixel
    // scales are known the scale is fixed to their ratio and only rotation
    // and translation are fitted. With scales alone, a pure rescale.
    std::string registration_mode = "none";
    std::optional<SimilarityTransform> xf;
    Raster b_reg = stage("register", [&]() -> Raster {
        if (cfg.control_points) {
            std::vector<ControlPointPair> pairs = load_control_points(*cfg.control_points);
            std::optional<double> fixed_scale;
            if (cfg.pixel_scale_a && cfg.pixel_scale_b) {
                fixed_scale = *cfg.pixel_scale_b / *cfg.pixel_scale_a;
                registration_mode = "control-points-fixed-scale";
            } else {
                registration_mode = "control-points";
            }
            xf = estimate_similarity(pairs, fixed_scale);
            return warp(b, *xf, a.width(), a.height(), cfg.boundary, cfg.interpolation);
        }
        if (cfg.pixel_scale_a && cfg.pixel_scale_b && *cfg.pixel_scale_a != *cfg.pixel_scale_b) {
            registration_mode = "pixel-scale";
            xf = SimilarityTransform{*cfg.pixel_scale_b / *cfg.pixel_scale_a, 0.0, 0.0, 0.0};
            return warp(b, *xf, a.width(), a.height(), cfg.boundary, cfg.interpolation);
        }
        return b;
    });

    Raster a_tone = stage("tone", [&] { return adjust(a, cfg.tone); });
    Raster b_tone = stage("tone", [&] { return adjust(b_reg, cfg.tone); });

    EdgeMap edge_a = stage("edge", [&] { return edge_response(a_tone, cfg.op, cfg.boundary); });
    EdgeMap edge_b = stage("edge", [&] { return edge_response(b_tone, cfg.op, cfg.boundary); });

    edge_a = stage("threshold", [&] { return threshold_edges(edge_a, cfg.threshold, cfg.binarize); });
    edge_b = stage("threshold", [&] { return threshold_edges(edge_b, cfg.threshold, cfg.binarize); });

    Raster inv_a = stage("invert", [&] { return invert(edge_a.magnitude); });
    Raster inv_b = stage("invert", [&] { return invert(edge_b.magnitude); });

    Raster composite_a =
        stage("compose", [&] { return blend(a_tone, inv_a, cfg.blend_mode, cfg.opacity); });
    Raster composite_b =
        stage("compose", [&] { return blend(b_tone, inv_b, cfg.blend_mode, cfg.opacity); });

    // Correlation runs on the tone-adjusted grayscale pair, not on edge
    // maps: the composites are for the eye, the correlator for numbers.
    std::optional<MatchResult> match;
    if (cfg.tpl) {
        match = stage("measure", [&] { return ncc_match(a_tone, b_tone, *cfg.tpl, *cfg.search); });
        if (cfg.pixel_scale_a) {
            match = stage("measure", [&] {
                if (cfg.date_a) {
                    return to_physical(*match, *cfg.pixel_scale_a, parse_iso_date(*cfg.date_a),
                                       parse_iso_date(*cfg.date_b));
                }
                return to_physical(*match, *cfg.pixel_scale_a);
            });
        }
    }

    std::optional<double> interval_yr;
    if (cfg.date_a) {
        interval_yr = day_count(parse_iso_date(*cfg.date_a), parse_iso_date(*cfg.date_b)) / 365.25;
    }

    // Emit artifacts; failures remove everything written by this run.
    OutputTracker tracker;
    try {
        std::string report_text = stage("write", [&] {
            fs::path out_dir(cfg.output_dir);
            std::error_code ec;
            fs::create_directories(out_dir, ec);
            if (ec) throw IoError(cfg.output_dir + ": cannot create output directory");

            auto emit = [&](const Raster& r, const std::string& name) {
                fs::path p = out_dir / (name + "." + cfg.format);
                save_image(r, p.string());
                tracker.record(p);
                return p.string();
            };

            ordered_json artifacts = ordered_json::array();
            artifacts.push_back(emit(inv_a, "edge_a"));
            artifacts.push_back(emit(inv_b, "edge_b"));
            artifacts.push_back(emit(composite_a, "composite_a"));
            artifacts.push_back(emit(composite_b, "composite_b"));
            if (registration_mode != "none") {
                artifacts.push_back(emit(b_reg, "registered_b"));
            }

            ordered_json report;
            auto opt_num = [](const std::optional<double>& v) {
                return v ? ordered_json(*v) : ordered_json(nullptr);
            };
            auto opt_str = [](const std::optional<std::string>& v) {
                return v ? ordered_json(*v) : ordered_json(nullptr);
            };
            report["inputs"] = {{"input_a", cfg.input_a},
                                {"input_b", cfg.input_b},
                                {"pixel_scale_a", opt_num(cfg.pixel_scale_a)},
                                {"pixel_scale_b", opt_num(cfg.pixel_scale_b)},
                                {"date_a", opt_str(cfg.date_a)},
                                {"date_b", opt_str(cfg.date_b)}};
            ordered_json params;
            params["tone"] = {{"brightness", cfg.tone.brightness}, {"contrast", cfg.tone.contrast}};
            params["operator"] = operator_name(cfg.op);
            bool is_dog = cfg.op.kind == OperatorKind::DoG;
            params["dog_radius_small"] =
                is_dog ? ordered_json(cfg.op.dog_radius_small) : ordered_json(nullptr);
            params["dog_radius_large"] =
                is_dog ? ordered_json(cfg.op.dog_radius_large) : ordered_json(nullptr);
            params["boundary"] = to_string(cfg.boundary);
            params["threshold"] = cfg.threshold;
            params["binarize"] = cfg.binarize;
            params["blend"] = to_string(cfg.blend_mode);
            params["opacity"] = cfg.opacity;
            params["interpolation"] = to_string(cfg.interpolation);
            params["registration"] = registration_mode;
            params["transform"] = xf ? ordered_json{{"scale", xf->scale},
                                                    {"rotation_rad", xf->rotation},
                                                    {"tx", xf->tx},
                                                    {"ty", xf->ty}}
                                     : ordered_json(nullptr);
            params["control_points"] = opt_str(cfg.control_points);
            params["template"] = cfg.tpl ? ordered_json{{"x", cfg.tpl->center_x},
                                                        {"y", cfg.tpl->center_y},
                                                        {"half", cfg.tpl->half_size}}
                                         : ordered_json(nullptr);
            params["search"] =
                cfg.search ? ordered_json{{"max_shift", cfg.search->max_shift}} : ordered_json(nullptr);
            params["format"] = cfg.format;
            report["parameters"] = params;

            report["offset_px"] =
                match ? ordered_json{match->offset_px.x, match->offset_px.y} : ordered_json(nullptr);
            report["peak_score"] = match ? ordered_json(match->peak_score) : ordered_json(nullptr);
            report["offset_m"] = match && match->offset_m
                                     ? ordered_json{match->offset_m->x, match->offset_m->y}
                                     : ordered_json(nullptr);
            report["interval_yr"] = interval_yr ? ordered_json(*interval_yr) : ordered_json(nullptr);
            report["rate_m_per_yr"] =
                match && match->rate_m_per_yr ? ordered_json(*match->rate_m_per_yr) : ordered_json(nullptr);
            report["artifacts"] = artifacts;
            report["version"] = kVersion;
            report["generated_at"] = utc_timestamp();

            std::string text = report.dump(2) + "\n";
            fs::path report_path = out_dir / "report.json";
            write_text_file(report_path, text);
            tracker.record(report_path);
            return text;
        });
        return report_text;
    } catch (...) {
        tracker.discard_all();
        throw;
    }
}

std::string run_synth(const SynthConfig& cfg) {
    stage("config", [&] {
        if (cfg.output_dir.empty()) throw ArgumentError("output_dir is required");
        if (cfg.format != "png" && cfg.format != "pgm") {
            throw ArgumentError("format must be png or pgm");
        }
        if (cfg.date_a.has_value() != cfg.date_b.has_value()) {
            throw ArgumentError("date_a and date_b must be given together");
        }
        if (cfg.pixel_scale && (!std::isfinite(*cfg.pixel_scale) || *cfg.pixel_scale <= 0)) {
            throw ArgumentError("pixel_scale must be positive");
        }
    });

    ScenePair pair = stage("synth", [&] { return generate_pair(cfg.scene, cfg.displacements); });
    if (cfg.pixel_scale) {
        pair.epoch_a.set_pixel_scale(cfg.pixel_scale);
        pair.epoch_b.set_pixel_scale(cfg.pixel_scale);
    }

    // Truth for the first barchan fills the measurement slots of the report
    // schema; per-barchan truth is echoed under parameters.scene.
    MatchResult truth;
    truth.offset_px = {cfg.displacements[0].x, cfg.displacements[0].y};
    truth.peak_score = 1.0;
    std::optional<double> interval_yr;
    if (cfg.pixel_scale) {
        if (cfg.date_a) {
            truth = to_physical(truth, *cfg.pixel_scale, parse_iso_date(*cfg.date_a),
                                parse_iso_date(*cfg.date_b));
        } else {
            truth = to_physical(truth, *cfg.pixel_scale);
        }
    }
    if (cfg.date_a) {
        interval_yr = day_count(parse_iso_date(*cfg.date_a), parse_iso_date(*cfg.date_b)) / 365.25;
    }

    OutputTracker tracker;
    try {
        return stage("write", [&] {
            fs::path out_dir(cfg.output_dir);
            std::error_code ec;
            fs::create_directories(out_dir, ec);
            if (ec) throw IoError(cfg.output_dir + ": cannot create output directory");

            fs::path path_a = out_dir / ("epoch_a." + cfg.format);
            fs::path path_b = out_dir / ("epoch_b." + cfg.format);
            save_image(pair.epoch_a, path_a.string());
            tracker.record(path_a);
            save_image(pair.epoch_b, path_b.string());
            tracker.record(path_b);

            ordered_json report;
            report["inputs"] = {
                {"input_a", path_a.string()},
                {"input_b", path_b.string()},
                {"pixel_scale_a", cfg.pixel_scale ? ordered_json(*cfg.pixel_scale) : ordered_json(nullptr)},
                {"pixel_scale_b", cfg.pixel_scale ? ordered_json(*cfg.pixel_scale) : ordered_json(nullptr)},
                {"date_a", cfg.date_a ? ordered_json(*cfg.date_a) : ordered_json(nullptr)},
                {"date_b", cfg.date_b ? ordered_json(*cfg.date_b) : ordered_json(nullptr)}};
            report["parameters"] = ordered_json{{"scene", scene_echo(cfg)}};
            report["offset_px"] = {truth.offset_px.x, truth.offset_px.y};
            report["peak_score"] = ordered_json(nullptr);
            report["offset_m"] =
                truth.offset_m ? ordered_json{truth.offset_m->x, truth.offset_m->y}
                               : ordered_json(nullptr);
            report["interval_yr"] = interval_yr ? ordered_json(*interval_yr) : ordered_json(nullptr);
            report["rate_m_per_yr"] = truth.rate_m_per_yr ? ordered_json(*truth.rate_m_per_yr) : ordered_json(nullptr);
            report["artifacts"] = {path_a.string(), path_b.string()};
            report["version"] = kVersion;
            report["generated_at"] = utc_timestamp();

            std::string text = report.dump(2) + "\n";
            fs::path truth_path = out_dir / "truth.json";
            write_text_file(truth_path, text);
            tracker.record(truth_path);
            return text;
        });
    } catch (...) {
        tracker.discard_all();
        throw;
    }
}

}  // namespace dunedrift

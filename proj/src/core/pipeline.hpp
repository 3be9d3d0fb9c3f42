#ifndef DUNEDRIFT_CORE_PIPELINE_HPP
#define DUNEDRIFT_CORE_PIPELINE_HPP

#include <optional>
#include <string>
#include <vector>

#include "core/compose.hpp"
#include "core/displacement.hpp"
#include "core/filters.hpp"
#include "core/raster.hpp"
#include "core/registration.hpp"
#include "core/synthgen.hpp"
#include "core/tone.hpp"

namespace dunedrift {

// Full two-epoch comparison run: load -> register -> tone -> edge ->
// threshold -> invert -> compose -> measure -> report.
struct PipelineConfig {
    std::string input_a;
    std::string input_b;
    std::optional<double> pixel_scale_a;  // m/px
    std::optional<double> pixel_scale_b;
    std::optional<std::string> date_a;  // ISO-8601
    std::optional<std::string> date_b;
    ToneParams tone;
    EdgeOperator op = EdgeOperator::sobel();
    BoundaryPolicy boundary = BoundaryPolicy::Clamp;
    double threshold = 0.1;
    bool binarize = false;
    BlendMode blend_mode = BlendMode::Multiply;
    double opacity = 1.0;
    Interpolation interpolation = Interpolation::Bilinear;
    std::optional<std::string> control_points;  // path to "sx sy tx ty" lines
    std::optional<TemplateSpec> tpl;
    std::optional<SearchSpec> search;
    std::string output_dir;
    std::string format = "png";  // artifact image format: png or pgm
};

// Two-epoch synthetic scene request; emits epoch images plus a truth file
// in the report schema.
struct SynthConfig {
    SceneParams scene;
    std::vector<Vec2> displacements;
    std::optional<double> pixel_scale;
    std::optional<std::string> date_a;
    std::optional<std::string> date_b;
    std::string output_dir;
    std::string format = "png";
};

PipelineConfig pipeline_config_from_json(const std::string& json_text);
SynthConfig synth_config_from_json(const std::string& json_text);

// Runs the full pipeline, writes artifacts and report.json into
// config.output_dir, and returns the report JSON text. Any stage failure
// throws with a stage-named message after removing partial outputs.
std::string run_pipeline(const PipelineConfig& config);

// Renders the scene, writes epoch_a/epoch_b images and truth.json, and
// returns the truth JSON text.
std::string run_synth(const SynthConfig& config);

std::vector<ControlPointPair> load_control_points(const std::string& path);

// Enum <-> CLI/config spellings.
std::string to_string(BoundaryPolicy p);
std::string to_string(BlendMode m);
std::string to_string(Interpolation i);
std::string operator_name(const EdgeOperator& op);
BoundaryPolicy boundary_from_string(const std::string& s);
BlendMode blend_mode_from_string(const std::string& s);
Interpolation interpolation_from_string(const std::string& s);

}  // namespace dunedrift

#endif

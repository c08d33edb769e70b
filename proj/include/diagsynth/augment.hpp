#pragma once

#include <string_view>
#include <vector>

#include <json.hpp>

#include "diagsynth/raster.hpp"
#include "diagsynth/rng.hpp"

namespace diagsynth {

enum class TransformKind {
    MotionBlur,
    MedianBlur,
    GaussianBlur,
    RgbShift,
    HsvShift,
    BrightnessContrast,
    Rotate,
    ShiftScaleRotate,
    GridDistortion,
    Perspective,
    CoarseDropout,
    GridDropout,
    Rain,
    Fog,
    Shadow,
    Clahe,
    Sharpen,
};

std::string_view to_string(TransformKind kind);
// Throws ParameterError on unknown ids.
TransformKind parse_transform_kind(std::string_view id);

/// Probabilities and parameters of the augmentation pipeline. Defaults are
/// the published pipeline values; kernel-shape parameters the pipeline leaves
/// open carry Albumentations-like defaults.
struct AugmentConfig {
    struct Blur {
        double gate = 0.7;
        double motion_p = 0.5;
        int motion_min = 3;
        int motion_max = 7;
        double median_p = 0.5;
        int median_limit = 3;
        double gaussian_p = 0.5;
        int gaussian_min = 3;
        int gaussian_max = 5;
    } blur;

    struct Color {
        double gate = 0.9;
        double rgb_p = 0.8;
        int rgb_limit = 80;
        double hsv_p = 0.8;
        int hue_limit = 15;
        int sat_limit = 25;
        int val_limit = 20;
    } color;

    struct BrightnessContrast {
        double p = 0.7;
        double brightness = 0.4;
        double contrast = 0.2;
    } brightness_contrast;

    struct Geometry {
        double gate = 0.3;
        double rotate_p = 0.5;
        double rotate_limit = 30.0;
        double ssr_p = 0.3;
        double shift_limit = 0.1;
        double scale_limit = 0.2;
        double ssr_rotate_limit = 45.0;
    } geometry;

    struct GridDistortion {
        double gate = 0.2;
        double p = 0.5;
        int steps = 5;
        double limit = 0.3;
    } grid_distortion;

    struct Perspective {
        double p = 0.4;
        double scale_min = 0.01;
        double scale_max = 0.05;
    } perspective;

    // Ungated "select one": each member still rolls its own probability.
    struct Dropout {
        double coarse_p = 0.3;
        int holes = 4;
        int hole_width = 16;
        int hole_height = 16;
        double grid_p = 0.1;
        double grid_ratio = 0.2;
        int grid_unit_min = 10;
        int grid_unit_max = 40;
    } dropout;

    struct Weather {
        double gate = 0.4;
        double rain_p = 0.3;
        double fog_p = 0.3;
        double shadow_p = 0.8;
        int rain_drop_length = 20;
        double fog_min = 0.3;
        double fog_max = 0.6;
        double shadow_darkness = 0.5;
    } weather;

    struct Clahe {
        double p = 0.3;
        double clip_limit = 4.0;
        int tiles = 8;
    } clahe;

    struct Sharpen {
        double p = 0.3;
        double alpha_min = 0.2;
        double alpha_max = 0.5;
        double lightness_min = 0.5;
        double lightness_max = 1.0;
    } sharpen;

    // Every gate and probability set to 0.
    static AugmentConfig disabled();

    // Throws ParameterError when a probability is outside [0, 1] or a
    // parameter is outside its documented range.
    void check() const;
};

nlohmann::json to_json(const AugmentConfig& cfg);
// Missing keys keep their defaults.
AugmentConfig augment_config_from_json(const nlohmann::json& j);

// Which gates opened and which transforms actually ran, in order.
struct AugmentTrace {
    bool blur_gate = false;
    bool color_gate = false;
    bool geometry_gate = false;
    bool grid_gate = false;
    bool weather_gate = false;
    std::vector<TransformKind> applied;

    bool ran(TransformKind kind) const;
};

RasterImage augment(const RasterImage& image, const AugmentConfig& cfg, Rng& rng,
                    AugmentTrace* trace = nullptr);

// Applies one transform unconditionally (its probability is not rolled);
// random parameters come from rng.
RasterImage apply_transform(TransformKind kind, const AugmentConfig& params,
                            const RasterImage& image, Rng& rng);

}  // namespace diagsynth

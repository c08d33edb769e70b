#include <gtest/gtest.h>
#include <omp.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>

#include "diagsynth/augment.hpp"
#include "diagsynth/errors.hpp"
#include "diagsynth/kernels.hpp"

using namespace diagsynth;
namespace kr = diagsynth::kernels;

namespace {

// A small diagram-like picture: white canvas, a dark box outline and some
// coloured text-ish strokes, so every transform has edges to work on.
RasterImage sample_image(int w = 64, int h = 48, std::uint64_t seed = 7) {
    RasterImage img(w, h);
    for (int x = 8; x < w - 8; ++x) {
        for (int c = 0; c < 3; ++c) {
            img.at(x, 10)[c] = 30;
            img.at(x, h - 10)[c] = 30;
        }
    }
    for (int y = 10; y <= h - 10; ++y) {
        for (int c = 0; c < 3; ++c) {
            img.at(8, y)[c] = 30;
            img.at(w - 9, y)[c] = 30;
        }
    }
    Rng rng(seed);
    for (int i = 0; i < 60; ++i) {
        auto* p = img.at(uniform_int(rng, 12, w - 13), uniform_int(rng, 14, h - 14));
        p[0] = static_cast<std::uint8_t>(uniform_int(rng, 0, 255));
        p[1] = static_cast<std::uint8_t>(uniform_int(rng, 0, 255));
        p[2] = static_cast<std::uint8_t>(uniform_int(rng, 0, 255));
    }
    return img;
}

int max_abs_diff(const RasterImage& a, const RasterImage& b) {
    int worst = 0;
    for (std::size_t i = 0; i < a.pixels.size(); ++i) worst = std::max(worst, std::abs(a.pixels[i] - b.pixels[i]));
    return worst;
}

}  // namespace

TEST(Raster, ConstructorFillsAndRejectsEmpty) {
    RasterImage img(3, 2, Rgb{1, 2, 3});
    EXPECT_TRUE(img.valid());
    EXPECT_EQ(img.at(2, 1)[2], 3);
    EXPECT_THROW(RasterImage(0, 4), ParameterError);
}

TEST(Raster, PngRoundTrip) {
    const auto img = sample_image();
    const auto path = std::filesystem::temp_directory_path() / "diagsynth_png_roundtrip.png";
    write_png(img, path);
    EXPECT_EQ(read_png(path), img);
    std::filesystem::remove(path);
    EXPECT_THROW(read_png(path), IoError);
}

TEST(Kernels, ParallelMatchesReference) {
    // Oversubscribe so row partitioning is exercised even on one core.
    omp_set_num_threads(4);
    const auto img = sample_image(97, 61);
    kr::Kernel2D box{3, 5, std::vector<float>(15, 1.0f / 15)};
    EXPECT_EQ(kr::convolve(img, box), kr::reference::convolve(img, box));
    EXPECT_EQ(kr::median_blur(img, 5), kr::reference::median_blur(img, 5));
    const kr::Projective tilt{0.98, 0.05, 1.5, -0.04, 1.01, -2.0, 1e-4, -2e-4, 1.0};
    EXPECT_EQ(kr::warp(img, tilt), kr::reference::warp(img, tilt));
    std::vector<float> mx(97 * 61), my(97 * 61);
    for (int y = 0; y < 61; ++y) {
        for (int x = 0; x < 97; ++x) {
            mx[y * 97 + x] = static_cast<float>(x + 0.3 * std::sin(y));
            my[y * 97 + x] = static_cast<float>(y * 1.02);
        }
    }
    EXPECT_EQ(kr::remap(img, mx, my), kr::reference::remap(img, mx, my));
    EXPECT_EQ(kr::clahe(img, {2.5, 8, 8}), kr::reference::clahe(img, {2.5, 8, 8}));
    EXPECT_EQ(kr::max_threads(), 4);
    omp_set_num_threads(omp_get_num_procs());
}

TEST(Kernels, ConvolveHandComputed) {
    // 3x1 image, horizontal [1 1 1]/3 kernel with replicated borders.
    RasterImage img(3, 1, Rgb{0, 0, 0});
    img.at(0, 0)[0] = 30;
    img.at(1, 0)[0] = 60;
    img.at(2, 0)[0] = 90;
    const kr::Kernel2D k{3, 1, {1.0f / 3, 1.0f / 3, 1.0f / 3}};
    const auto out = kr::convolve(img, k);
    EXPECT_EQ(out.at(0, 0)[0], 40);  // (30 + 30 + 60) / 3
    EXPECT_EQ(out.at(1, 0)[0], 60);
    EXPECT_EQ(out.at(2, 0)[0], 80);  // (60 + 90 + 90) / 3
    EXPECT_THROW(kr::convolve(img, kr::Kernel2D{2, 2, {1.0f}}), ParameterError);
}

TEST(Kernels, MedianRemovesIsolatedSpeck) {
    RasterImage img(5, 5);
    img.at(2, 2)[1] = 0;
    const auto out = kr::median_blur(img, 3);
    EXPECT_EQ(out, RasterImage(5, 5));
    EXPECT_THROW(kr::median_blur(img, 4), ParameterError);
}

TEST(Kernels, IdentityWarpAndOutsideIsWhite) {
    const auto img = sample_image();
    EXPECT_EQ(kr::warp(img, {1, 0, 0, 0, 1, 0, 0, 0, 1}), img);
    // Translate the whole source out of view.
    const auto gone = kr::warp(img, {1, 0, 1000, 0, 1, 0, 0, 0, 1});
    EXPECT_EQ(gone, RasterImage(img.width, img.height));
}

TEST(Kernels, ClaheLeavesFlatImageNearlyFlat) {
    RasterImage img(32, 32, Rgb{120, 120, 120});
    const auto out = kr::clahe(img, {4.0, 4, 4});
    const auto v = out.at(0, 0)[0];
    for (std::size_t i = 0; i < out.pixels.size(); ++i) ASSERT_EQ(out.pixels[i], v);
}

TEST(Augment, DisabledConfigIsIdentity) {
    const auto img = sample_image();
    const auto cfg = AugmentConfig::disabled();
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        Rng rng(seed);
        AugmentTrace trace;
        EXPECT_EQ(augment(img, cfg, rng, &trace), img);
        EXPECT_TRUE(trace.applied.empty());
    }
}

TEST(Augment, GateFrequenciesMatchConfiguredProbabilities) {
    const RasterImage img(8, 8);
    const AugmentConfig cfg;
    const int runs = 10000;
    int blur = 0, color = 0, geometry = 0, grid = 0, weather = 0, clahe = 0, sharpen = 0, bc = 0, persp = 0;
    int motion = 0, coarse = 0, grid_drop = 0, shadow = 0;
    for (int i = 0; i < runs; ++i) {
        Rng rng(derive_seed(2024, static_cast<std::uint64_t>(i)));
        AugmentTrace t;
        augment(img, cfg, rng, &t);
        blur += t.blur_gate;
        color += t.color_gate;
        geometry += t.geometry_gate;
        grid += t.grid_gate;
        weather += t.weather_gate;
        clahe += t.ran(TransformKind::Clahe);
        sharpen += t.ran(TransformKind::Sharpen);
        bc += t.ran(TransformKind::BrightnessContrast);
        persp += t.ran(TransformKind::Perspective);
        motion += t.ran(TransformKind::MotionBlur);
        coarse += t.ran(TransformKind::CoarseDropout);
        grid_drop += t.ran(TransformKind::GridDropout);
        shadow += t.ran(TransformKind::Shadow);
    }
    auto freq = [&](int n) { return static_cast<double>(n) / runs; };
    EXPECT_NEAR(freq(blur), 0.7, 0.02);
    EXPECT_NEAR(freq(color), 0.9, 0.02);
    EXPECT_NEAR(freq(geometry), 0.3, 0.02);
    EXPECT_NEAR(freq(grid), 0.2, 0.02);
    EXPECT_NEAR(freq(weather), 0.4, 0.02);
    EXPECT_NEAR(freq(clahe), 0.3, 0.02);
    EXPECT_NEAR(freq(sharpen), 0.3, 0.02);
    EXPECT_NEAR(freq(bc), 0.7, 0.02);
    EXPECT_NEAR(freq(persp), 0.4, 0.02);
    // Member rates: gate x 1/members x own probability.
    EXPECT_NEAR(freq(motion), 0.7 / 3 * 0.5, 0.02);
    EXPECT_NEAR(freq(coarse), 0.5 * 0.3, 0.02);
    EXPECT_NEAR(freq(grid_drop), 0.5 * 0.1, 0.02);
    EXPECT_NEAR(freq(shadow), 0.4 / 3 * 0.8, 0.02);
}

TEST(Augment, DeterministicAndSizePreserving) {
    const auto img = sample_image();
    const AugmentConfig cfg;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        Rng a(seed), b(seed);
        const auto x = augment(img, cfg, a);
        EXPECT_EQ(x, augment(img, cfg, b));
        EXPECT_EQ(x.width, img.width);
        EXPECT_EQ(x.height, img.height);
    }
}

TEST(Augment, EveryTransformPreservesSizeAndIsSeeded) {
    const auto img = sample_image();
    const AugmentConfig cfg;
    for (int k = 0; k <= static_cast<int>(TransformKind::Sharpen); ++k) {
        const auto kind = static_cast<TransformKind>(k);
        EXPECT_EQ(parse_transform_kind(to_string(kind)), kind);
        Rng a(99), b(99);
        const auto x = apply_transform(kind, cfg, img, a);
        EXPECT_TRUE(x.valid()) << to_string(kind);
        EXPECT_EQ(x.width, img.width);
        EXPECT_EQ(x, apply_transform(kind, cfg, img, b)) << to_string(kind);
    }
    EXPECT_THROW(parse_transform_kind("sepia"), ParameterError);
}

TEST(Augment, GaussianBlurOnConstantImageIsIdentity) {
    const RasterImage img(40, 30, Rgb{17, 200, 93});
    const AugmentConfig cfg;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Rng rng(seed);
        EXPECT_EQ(apply_transform(TransformKind::GaussianBlur, cfg, img, rng), img);
    }
}

TEST(Augment, CoarseDropoutWhitensAtMostFourHoles) {
    const RasterImage black(64, 64, Rgb{0, 0, 0});
    const AugmentConfig cfg;
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        Rng rng(seed);
        const auto out = apply_transform(TransformKind::CoarseDropout, cfg, black, rng);
        int white = 0;
        for (std::size_t i = 0; i < out.pixels.size(); i += 3) white += out.pixels[i] == 255;
        EXPECT_GE(white, 16 * 16);
        EXPECT_LE(white, 4 * 16 * 16);
    }
}

TEST(Augment, ZeroRotationIsNearIdentity) {
    const auto img = sample_image();
    AugmentConfig cfg;
    cfg.geometry.rotate_limit = 0.0;
    Rng rng(3);
    EXPECT_LE(max_abs_diff(apply_transform(TransformKind::Rotate, cfg, img, rng), img), 1);
}

TEST(Augment, FogBrightensTowardWhite) {
    const RasterImage img(4, 4, Rgb{0, 100, 255});
    const AugmentConfig cfg;
    Rng rng(5);
    const auto out = apply_transform(TransformKind::Fog, cfg, img, rng);
    // alpha in [0.3, 0.6]: 0 -> [77, 153]
    EXPECT_GE(out.at(0, 0)[0], 76);
    EXPECT_LE(out.at(0, 0)[0], 153);
    EXPECT_EQ(out.at(0, 0)[2], 255);
}

TEST(Augment, ConfigJsonRoundTripAndValidation) {
    AugmentConfig cfg;
    cfg.blur.gate = 0.25;
    cfg.sharpen.alpha_max = 0.4;
    const auto j = to_json(cfg);
    const auto back = augment_config_from_json(j);
    EXPECT_EQ(to_json(back), j);

    const auto partial = augment_config_from_json(nlohmann::json{{"clahe", {{"p", 0.9}}}});
    EXPECT_DOUBLE_EQ(partial.clahe.p, 0.9);
    EXPECT_DOUBLE_EQ(partial.blur.gate, 0.7);

    EXPECT_THROW(augment_config_from_json(nlohmann::json{{"blur", {{"gate", 1.5}}}}), ParameterError);
    EXPECT_THROW(augment_config_from_json(nlohmann::json{{"blur", {{"motion_min", 4}}}}), ParameterError);
    EXPECT_THROW(augment_config_from_json(nlohmann::json{{"blurr", {}}}), ParameterError);
    EXPECT_THROW(augment_config_from_json(nlohmann::json{{"fog", "thick"}}), ParameterError);
    EXPECT_NO_THROW(AugmentConfig{}.check());
    EXPECT_NO_THROW(AugmentConfig::disabled().check());
}

#pragma once

#include <array>
#include <vector>

#include "diagsynth/raster.hpp"

// Pixel kernels behind the augmentation transforms. The functions in
// diagsynth::kernels are OpenMP-parallel over rows (or tiles); the ones in
// diagsynth::kernels::reference are straightforward serial versions kept as
// the test oracle. Both produce bit-identical output.
namespace diagsynth::kernels {

struct Kernel2D {
    int width = 1;
    int height = 1;
    std::vector<float> weights;  // row-major, width * height
};

// 3x3 matrix mapping destination (x, y, 1) to source coordinates.
using Projective = std::array<double, 9>;

struct ClaheParams {
    double clip_limit = 4.0;
    int tiles_x = 8;
    int tiles_y = 8;
};

// Replicated borders.
RasterImage convolve(const RasterImage& src, const Kernel2D& kernel);
RasterImage median_blur(const RasterImage& src, int ksize);
// Bilinear sampling; samples outside the source read as white.
RasterImage warp(const RasterImage& src, const Projective& dst_to_src);
// Per-pixel source coordinates (width * height each).
RasterImage remap(const RasterImage& src, const std::vector<float>& map_x, const std::vector<float>& map_y);
// Contrast-limited adaptive histogram equalisation on BT.601 luma.
RasterImage clahe(const RasterImage& src, const ClaheParams& params);

int max_threads();

namespace reference {

RasterImage convolve(const RasterImage& src, const Kernel2D& kernel);
RasterImage median_blur(const RasterImage& src, int ksize);
RasterImage warp(const RasterImage& src, const Projective& dst_to_src);
RasterImage remap(const RasterImage& src, const std::vector<float>& map_x, const std::vector<float>& map_y);
RasterImage clahe(const RasterImage& src, const ClaheParams& params);

}  // namespace reference

}  // namespace diagsynth::kernels

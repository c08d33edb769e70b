#include <omp.h>

#include "diagsynth/errors.hpp"
#include "kernels_common.hpp"

namespace diagsynth::kernels {

using namespace kernels::detail;

namespace {

void check_kernel(const Kernel2D& k) {
    if (k.width < 1 || k.height < 1 || k.weights.size() != static_cast<std::size_t>(k.width * k.height)) {
        throw ParameterError("kernel weights do not match its shape");
    }
}

}  // namespace

int max_threads() { return omp_get_max_threads(); }

RasterImage convolve(const RasterImage& src, const Kernel2D& kernel) {
    check_kernel(kernel);
    RasterImage out = src;
#pragma omp parallel for schedule(static)
    for (int y = 0; y < src.height; ++y) {
        auto* row = out.at(0, y);
        for (int x = 0; x < src.width; ++x) convolve_pixel(src, kernel, x, y, row + 3 * x);
    }
    return out;
}

RasterImage median_blur(const RasterImage& src, int ksize) {
    if (ksize < 1 || ksize % 2 == 0) throw ParameterError("median kernel size must be odd and positive");
    RasterImage out = src;
#pragma omp parallel
    {
        std::vector<std::uint8_t> scratch;
        scratch.reserve(static_cast<std::size_t>(ksize * ksize));
#pragma omp for schedule(static)
        for (int y = 0; y < src.height; ++y)
            for (int x = 0; x < src.width; ++x) median_pixel(src, ksize, x, y, scratch, out.at(x, y));
    }
    return out;
}

RasterImage warp(const RasterImage& src, const Projective& m) {
    RasterImage out = src;
#pragma omp parallel for schedule(static)
    for (int y = 0; y < src.height; ++y)
        for (int x = 0; x < src.width; ++x) warp_pixel(src, m, x, y, out.at(x, y));
    return out;
}

RasterImage remap(const RasterImage& src, const std::vector<float>& map_x, const std::vector<float>& map_y) {
    const auto n = static_cast<std::size_t>(src.width) * src.height;
    if (map_x.size() != n || map_y.size() != n) throw ParameterError("remap tables do not match the image");
    RasterImage out = src;
#pragma omp parallel for schedule(static)
    for (int y = 0; y < src.height; ++y) {
        const auto base = static_cast<std::size_t>(y) * src.width;
        for (int x = 0; x < src.width; ++x) bilinear(src, map_x[base + x], map_y[base + x], out.at(x, y));
    }
    return out;
}

RasterImage clahe(const RasterImage& src, const ClaheParams& params) {
    if (!(params.clip_limit > 0.0) || params.tiles_x < 1 || params.tiles_y < 1) {
        throw ParameterError("CLAHE needs a positive clip limit and tile grid");
    }
    std::vector<std::uint8_t> y_plane(static_cast<std::size_t>(src.width) * src.height);
    ClaheGrid grid(src, params);
    RasterImage out = src;
#pragma omp parallel
    {
#pragma omp for schedule(static)
        for (int y = 0; y < src.height; ++y)
            for (int x = 0; x < src.width; ++x) y_plane[static_cast<std::size_t>(y) * src.width + x] = luma(src.at(x, y));
#pragma omp for collapse(2) schedule(static)
        for (int ty = 0; ty < grid.tiles_y; ++ty)
            for (int tx = 0; tx < grid.tiles_x; ++tx)
                clahe_tile(y_plane, src.width, src.height, params.clip_limit, grid, tx, ty);
#pragma omp for schedule(static)
        for (int y = 0; y < src.height; ++y)
            for (int x = 0; x < src.width; ++x) clahe_pixel(src, y_plane, grid, x, y, out.at(x, y));
    }
    return out;
}

}  // namespace diagsynth::kernels

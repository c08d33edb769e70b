#include "diagsynth/errors.hpp"
#include "kernels_common.hpp"

namespace diagsynth::kernels::reference {

using namespace kernels::detail;

RasterImage convolve(const RasterImage& src, const Kernel2D& kernel) {
    RasterImage out = src;
    for (int y = 0; y < src.height; ++y)
        for (int x = 0; x < src.width; ++x) convolve_pixel(src, kernel, x, y, out.at(x, y));
    return out;
}

RasterImage median_blur(const RasterImage& src, int ksize) {
    RasterImage out = src;
    std::vector<std::uint8_t> scratch;
    for (int y = 0; y < src.height; ++y)
        for (int x = 0; x < src.width; ++x) median_pixel(src, ksize, x, y, scratch, out.at(x, y));
    return out;
}

RasterImage warp(const RasterImage& src, const Projective& m) {
    RasterImage out = src;
    for (int y = 0; y < src.height; ++y)
        for (int x = 0; x < src.width; ++x) warp_pixel(src, m, x, y, out.at(x, y));
    return out;
}

RasterImage remap(const RasterImage& src, const std::vector<float>& map_x, const std::vector<float>& map_y) {
    RasterImage out = src;
    for (int y = 0; y < src.height; ++y) {
        for (int x = 0; x < src.width; ++x) {
            const auto i = static_cast<std::size_t>(y) * src.width + x;
            bilinear(src, map_x[i], map_y[i], out.at(x, y));
        }
    }
    return out;
}

RasterImage clahe(const RasterImage& src, const ClaheParams& params) {
    std::vector<std::uint8_t> y_plane(static_cast<std::size_t>(src.width) * src.height);
    for (int y = 0; y < src.height; ++y)
        for (int x = 0; x < src.width; ++x) y_plane[static_cast<std::size_t>(y) * src.width + x] = luma(src.at(x, y));
    ClaheGrid grid(src, params);
    for (int ty = 0; ty < grid.tiles_y; ++ty)
        for (int tx = 0; tx < grid.tiles_x; ++tx) clahe_tile(y_plane, src.width, src.height, params.clip_limit, grid, tx, ty);
    RasterImage out = src;
    for (int y = 0; y < src.height; ++y)
        for (int x = 0; x < src.width; ++x) clahe_pixel(src, y_plane, grid, x, y, out.at(x, y));
    return out;
}

}  // namespace diagsynth::kernels::reference

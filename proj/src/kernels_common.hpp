#pragma once

// Per-pixel arithmetic shared by the parallel kernels and their serial
// reference, so both paths round identically.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "diagsynth/kernels.hpp"

namespace diagsynth::kernels::detail {

inline std::uint8_t clamp_u8(double v) {
    if (!(v > 0.0)) return 0;
    if (v >= 255.0) return 255;
    return static_cast<std::uint8_t>(std::lround(v));
}

inline int clamp_index(int v, int n) { return v < 0 ? 0 : (v >= n ? n - 1 : v); }

inline void convolve_pixel(const RasterImage& src, const Kernel2D& k, int x, int y, std::uint8_t* out) {
    const int ax = k.width / 2;
    const int ay = k.height / 2;
    double acc[3] = {0.0, 0.0, 0.0};
    for (int ky = 0; ky < k.height; ++ky) {
        const int sy = clamp_index(y + ky - ay, src.height);
        for (int kx = 0; kx < k.width; ++kx) {
            const double w = k.weights[static_cast<std::size_t>(ky * k.width + kx)];
            const auto* p = src.at(clamp_index(x + kx - ax, src.width), sy);
            acc[0] += w * p[0];
            acc[1] += w * p[1];
            acc[2] += w * p[2];
        }
    }
    for (int c = 0; c < 3; ++c) out[c] = clamp_u8(acc[c]);
}

inline void median_pixel(const RasterImage& src, int ksize, int x, int y, std::vector<std::uint8_t>& scratch,
                         std::uint8_t* out) {
    const int r = ksize / 2;
    for (int c = 0; c < 3; ++c) {
        scratch.clear();
        for (int dy = -r; dy <= r; ++dy) {
            const int sy = clamp_index(y + dy, src.height);
            for (int dx = -r; dx <= r; ++dx) scratch.push_back(src.at(clamp_index(x + dx, src.width), sy)[c]);
        }
        auto mid = scratch.begin() + static_cast<std::ptrdiff_t>(scratch.size() / 2);
        std::nth_element(scratch.begin(), mid, scratch.end());
        out[c] = *mid;
    }
}

inline double fetch(const RasterImage& s, int x, int y, int c) {
    if (x < 0 || y < 0 || x >= s.width || y >= s.height) return 255.0;
    return s.at(x, y)[c];
}

inline void bilinear(const RasterImage& s, double sx, double sy, std::uint8_t* out) {
    if (!std::isfinite(sx) || !std::isfinite(sy) || sx <= -1.0 || sy <= -1.0 || sx >= s.width || sy >= s.height) {
        out[0] = out[1] = out[2] = 255;
        return;
    }
    const int x0 = static_cast<int>(std::floor(sx));
    const int y0 = static_cast<int>(std::floor(sy));
    const double fx = sx - x0;
    const double fy = sy - y0;
    for (int c = 0; c < 3; ++c) {
        const double v = (1 - fx) * (1 - fy) * fetch(s, x0, y0, c) + fx * (1 - fy) * fetch(s, x0 + 1, y0, c) +
                         (1 - fx) * fy * fetch(s, x0, y0 + 1, c) + fx * fy * fetch(s, x0 + 1, y0 + 1, c);
        out[c] = clamp_u8(v);
    }
}

inline void warp_pixel(const RasterImage& src, const Projective& m, int x, int y, std::uint8_t* out) {
    const double w = m[6] * x + m[7] * y + m[8];
    if (std::abs(w) < 1e-12) {
        out[0] = out[1] = out[2] = 255;
        return;
    }
    bilinear(src, (m[0] * x + m[1] * y + m[2]) / w, (m[3] * x + m[4] * y + m[5]) / w, out);
}

inline std::uint8_t luma(const std::uint8_t* p) { return clamp_u8(0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2]); }

struct ClaheGrid {
    int tiles_x = 1;
    int tiles_y = 1;
    int tile_w = 1;
    int tile_h = 1;
    std::vector<std::array<std::uint8_t, 256>> luts;  // row-major tiles

    ClaheGrid(const RasterImage& img, const ClaheParams& p)
        : tiles_x(std::clamp(p.tiles_x, 1, img.width)),
          tiles_y(std::clamp(p.tiles_y, 1, img.height)),
          tile_w((img.width + tiles_x - 1) / tiles_x),
          tile_h((img.height + tiles_y - 1) / tiles_y),
          luts(static_cast<std::size_t>(tiles_x * tiles_y)) {}
};

inline void clahe_tile(const std::vector<std::uint8_t>& y_plane, int width, int height, double clip,
                       ClaheGrid& g, int tx, int ty) {
    std::array<int, 256> hist{};
    const int x0 = tx * g.tile_w;
    const int y0 = ty * g.tile_h;
    const int x1 = std::min(width, x0 + g.tile_w);
    const int y1 = std::min(height, y0 + g.tile_h);
    int n = 0;
    for (int y = y0; y < y1; ++y)
        for (int x = x0; x < x1; ++x, ++n) ++hist[y_plane[static_cast<std::size_t>(y) * width + x]];
    auto& lut = g.luts[static_cast<std::size_t>(ty * g.tiles_x + tx)];
    if (n == 0) {
        for (int v = 0; v < 256; ++v) lut[v] = static_cast<std::uint8_t>(v);
        return;
    }
    const int limit = std::max(1, static_cast<int>(clip * n / 256.0));
    int excess = 0;
    for (auto& h : hist) {
        if (h > limit) {
            excess += h - limit;
            h = limit;
        }
    }
    const int add = excess / 256;
    const int rem = excess % 256;
    for (int v = 0; v < 256; ++v) hist[v] += add + (v < rem ? 1 : 0);
    long cdf = 0;
    for (int v = 0; v < 256; ++v) {
        cdf += hist[v];
        lut[v] = clamp_u8(static_cast<double>(cdf) * 255.0 / n);
    }
}

inline void clahe_pixel(const RasterImage& src, const std::vector<std::uint8_t>& y_plane, const ClaheGrid& g, int x,
                        int y, std::uint8_t* out) {
    const double gx = (x + 0.5) / g.tile_w - 0.5;
    const double gy = (y + 0.5) / g.tile_h - 0.5;
    const int ix = static_cast<int>(std::floor(gx));
    const int iy = static_cast<int>(std::floor(gy));
    const double fx = gx - ix;
    const double fy = gy - iy;
    const int x1 = clamp_index(ix, g.tiles_x), x2 = clamp_index(ix + 1, g.tiles_x);
    const int y1 = clamp_index(iy, g.tiles_y), y2 = clamp_index(iy + 1, g.tiles_y);
    const auto v = y_plane[static_cast<std::size_t>(y) * src.width + x];
    auto lut = [&](int tx, int ty) { return static_cast<double>(g.luts[static_cast<std::size_t>(ty * g.tiles_x + tx)][v]); };
    const double mapped = (lut(x1, y1) * (1 - fx) + lut(x2, y1) * fx) * (1 - fy) + (lut(x1, y2) * (1 - fx) + lut(x2, y2) * fx) * fy;
    const double delta = mapped - v;
    const auto* p = src.at(x, y);
    for (int c = 0; c < 3; ++c) out[c] = clamp_u8(p[c] + delta);
}

}  // namespace diagsynth::kernels::detail

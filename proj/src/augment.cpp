#include "diagsynth/augment.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "diagsynth/errors.hpp"
#include "diagsynth/kernels.hpp"

namespace diagsynth {

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(AugmentConfig::Blur, gate, motion_p, motion_min, motion_max, median_p,
                                                median_limit, gaussian_p, gaussian_min, gaussian_max)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(AugmentConfig::Color, gate, rgb_p, rgb_limit, hsv_p, hue_limit,
                                                sat_limit, val_limit)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(AugmentConfig::BrightnessContrast, p, brightness, contrast)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(AugmentConfig::Geometry, gate, rotate_p, rotate_limit, ssr_p,
                                                shift_limit, scale_limit, ssr_rotate_limit)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(AugmentConfig::GridDistortion, gate, p, steps, limit)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(AugmentConfig::Perspective, p, scale_min, scale_max)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(AugmentConfig::Dropout, coarse_p, holes, hole_width, hole_height,
                                                grid_p, grid_ratio, grid_unit_min, grid_unit_max)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(AugmentConfig::Weather, gate, rain_p, fog_p, shadow_p,
                                                rain_drop_length, fog_min, fog_max, shadow_darkness)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(AugmentConfig::Clahe, p, clip_limit, tiles)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(AugmentConfig::Sharpen, p, alpha_min, alpha_max, lightness_min,
                                                lightness_max)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(AugmentConfig, blur, color, brightness_contrast, geometry,
                                                grid_distortion, perspective, dropout, weather, clahe, sharpen)

namespace {

constexpr std::array<std::pair<TransformKind, std::string_view>, 17> kNames{{
    {TransformKind::MotionBlur, "motion_blur"},
    {TransformKind::MedianBlur, "median_blur"},
    {TransformKind::GaussianBlur, "gaussian_blur"},
    {TransformKind::RgbShift, "rgb_shift"},
    {TransformKind::HsvShift, "hsv_shift"},
    {TransformKind::BrightnessContrast, "brightness_contrast"},
    {TransformKind::Rotate, "rotate"},
    {TransformKind::ShiftScaleRotate, "shift_scale_rotate"},
    {TransformKind::GridDistortion, "grid_distortion"},
    {TransformKind::Perspective, "perspective"},
    {TransformKind::CoarseDropout, "coarse_dropout"},
    {TransformKind::GridDropout, "grid_dropout"},
    {TransformKind::Rain, "rain"},
    {TransformKind::Fog, "fog"},
    {TransformKind::Shadow, "shadow"},
    {TransformKind::Clahe, "clahe"},
    {TransformKind::Sharpen, "sharpen"},
}};

std::uint8_t clamp_u8(double v) {
    if (!(v > 0.0)) return 0;
    if (v >= 255.0) return 255;
    return static_cast<std::uint8_t>(std::lround(v));
}

template <typename F>
RasterImage map_pixels(const RasterImage& src, F&& f) {
    RasterImage out = src;
    const auto n = out.pixels.size();
    for (std::size_t i = 0; i < n; i += 3) f(out.pixels.data() + i);
    return out;
}

void fill_rect(RasterImage& img, int x0, int y0, int w, int h, Rgb color) {
    const int x1 = std::min(img.width, x0 + w);
    const int y1 = std::min(img.height, y0 + h);
    for (int y = std::max(0, y0); y < y1; ++y) {
        for (int x = std::max(0, x0); x < x1; ++x) {
            auto* p = img.at(x, y);
            p[0] = color[0];
            p[1] = color[1];
            p[2] = color[2];
        }
    }
}

int random_odd(Rng& rng, int lo, int hi) {
    // lo and hi are odd (checked).
    return lo + 2 * uniform_int(rng, 0, (hi - lo) / 2);
}

kernels::Kernel2D motion_kernel(int length, double angle_deg) {
    kernels::Kernel2D k{length, length, std::vector<float>(static_cast<std::size_t>(length * length), 0.0f)};
    const double c = length / 2;
    const double rad = angle_deg * std::numbers::pi / 180.0;
    for (int i = 0; i < length; ++i) {
        const double d = i - c;
        const int x = static_cast<int>(std::lround(c + d * std::cos(rad)));
        const int y = static_cast<int>(std::lround(c + d * std::sin(rad)));
        k.weights[static_cast<std::size_t>(y * length + x)] = 1.0f;
    }
    float total = 0.0f;
    for (float w : k.weights) total += w;
    for (float& w : k.weights) w /= total;
    return k;
}

kernels::Kernel2D gaussian_kernel(int ksize) {
    // OpenCV's default sigma for a given aperture.
    const double sigma = 0.3 * ((ksize - 1) * 0.5 - 1) + 0.8;
    std::vector<double> g(static_cast<std::size_t>(ksize));
    double total = 0.0;
    for (int i = 0; i < ksize; ++i) {
        const double d = i - ksize / 2;
        g[i] = std::exp(-d * d / (2 * sigma * sigma));
        total += g[i];
    }
    kernels::Kernel2D k{ksize, ksize, {}};
    k.weights.reserve(static_cast<std::size_t>(ksize * ksize));
    for (int y = 0; y < ksize; ++y)
        for (int x = 0; x < ksize; ++x) k.weights.push_back(static_cast<float>(g[y] * g[x] / (total * total)));
    return k;
}

// dst -> src for a similarity transform about the image centre.
kernels::Projective similarity(const RasterImage& img, double angle_deg, double scale, double dx, double dy) {
    const double cx = (img.width - 1) / 2.0;
    const double cy = (img.height - 1) / 2.0;
    const double rad = angle_deg * std::numbers::pi / 180.0;
    const double c = std::cos(rad) / scale;
    const double s = std::sin(rad) / scale;
    // src = R(-a) (dst - centre - shift) / scale + centre
    const double tx = -cx - dx;
    const double ty = -cy - dy;
    return {c, s, c * tx + s * ty + cx, -s, c, -s * tx + c * ty + cy, 0.0, 0.0, 1.0};
}

kernels::Projective homography(const std::array<std::array<double, 2>, 4>& from,
                               const std::array<std::array<double, 2>, 4>& to) {
    Eigen::Matrix<double, 8, 8> a;
    Eigen::Matrix<double, 8, 1> b;
    for (int i = 0; i < 4; ++i) {
        const double x = from[i][0], y = from[i][1], u = to[i][0], v = to[i][1];
        a.row(2 * i) << x, y, 1, 0, 0, 0, -u * x, -u * y;
        a.row(2 * i + 1) << 0, 0, 0, x, y, 1, -v * x, -v * y;
        b(2 * i) = u;
        b(2 * i + 1) = v;
    }
    const Eigen::Matrix<double, 8, 1> h = a.partialPivLu().solve(b);
    return {h(0), h(1), h(2), h(3), h(4), h(5), h(6), h(7), 1.0};
}

void rgb_to_hsv(const std::uint8_t* p, double& h, double& s, double& v) {
    const double r = p[0] / 255.0, g = p[1] / 255.0, b = p[2] / 255.0;
    const double mx = std::max({r, g, b});
    const double mn = std::min({r, g, b});
    const double d = mx - mn;
    v = mx;
    s = mx > 0 ? d / mx : 0.0;
    if (d <= 0) {
        h = 0;
    } else if (mx == r) {
        h = 60.0 * std::fmod((g - b) / d + 6.0, 6.0);
    } else if (mx == g) {
        h = 60.0 * ((b - r) / d + 2.0);
    } else {
        h = 60.0 * ((r - g) / d + 4.0);
    }
}

void hsv_to_rgb(double h, double s, double v, std::uint8_t* p) {
    const double c = v * s;
    const double hp = h / 60.0;
    const double x = c * (1 - std::abs(std::fmod(hp, 2.0) - 1));
    double r = 0, g = 0, b = 0;
    switch (static_cast<int>(hp) % 6) {
        case 0: r = c, g = x; break;
        case 1: r = x, g = c; break;
        case 2: g = c, b = x; break;
        case 3: g = x, b = c; break;
        case 4: r = x, b = c; break;
        default: r = c, b = x; break;
    }
    const double m = v - c;
    p[0] = clamp_u8((r + m) * 255.0);
    p[1] = clamp_u8((g + m) * 255.0);
    p[2] = clamp_u8((b + m) * 255.0);
}

// Per-axis displacement of a grid-distortion field: cumulative source
// positions for every destination coordinate along one axis.
std::vector<float> distort_axis(int size, int steps, double limit, Rng& rng) {
    std::vector<float> out(static_cast<std::size_t>(size));
    const int step = std::max(1, size / steps);
    double prev = 0.0;
    for (int start = 0; start < size; start += step) {
        const int end = (start + 2 * step > size) ? size : start + step;
        const double cur = std::min<double>(size - 1, prev + (end - start) * (1.0 + uniform_real(rng, -limit, limit)));
        const int n = end - start;
        for (int i = 0; i < n; ++i) {
            const double t = n > 1 ? static_cast<double>(i) / (n - 1) : 0.0;
            out[static_cast<std::size_t>(start + i)] = static_cast<float>(prev + t * (cur - prev));
        }
        prev = cur;
        if (end == size) break;
    }
    return out;
}

void draw_line(RasterImage& img, int x0, int y0, int x1, int y1, Rgb color) {
    const int dx = std::abs(x1 - x0), sx = x0 < x1 ? 1 : -1;
    const int dy = -std::abs(y1 - y0), sy = y0 < y1 ? 1 : -1;
    int err = dx + dy;
    while (true) {
        if (x0 >= 0 && y0 >= 0 && x0 < img.width && y0 < img.height) {
            auto* p = img.at(x0, y0);
            p[0] = color[0];
            p[1] = color[1];
            p[2] = color[2];
        }
        if (x0 == x1 && y0 == y1) break;
        const int e2 = 2 * err;
        if (e2 >= dy) err += dy, x0 += sx;
        if (e2 <= dx) err += dx, y0 += sy;
    }
}

bool inside_polygon(const std::vector<std::array<double, 2>>& poly, double x, double y) {
    bool in = false;
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        const auto& a = poly[i];
        const auto& b = poly[j];
        if ((a[1] > y) != (b[1] > y) && x < (b[0] - a[0]) * (y - a[1]) / (b[1] - a[1]) + a[0]) in = !in;
    }
    return in;
}

void require(bool ok, const std::string& what) {
    if (!ok) throw ParameterError("augment config: " + what);
}

bool is_prob(double p) { return p >= 0.0 && p <= 1.0; }

void check_keys(const nlohmann::json& given, const nlohmann::json& known, const std::string& path) {
    if (!given.is_object()) throw ParameterError("augment config: " + (path.empty() ? "root" : path) + " must be an object");
    for (const auto& [key, value] : given.items()) {
        const auto it = known.find(key);
        if (it == known.end()) throw ParameterError("augment config: unknown key " + path + key);
        if (it->is_object()) check_keys(value, *it, path + key + ".");
    }
}

}  // namespace

std::string_view to_string(TransformKind kind) {
    for (const auto& [k, name] : kNames)
        if (k == kind) return name;
    return "unknown";
}

TransformKind parse_transform_kind(std::string_view id) {
    for (const auto& [k, name] : kNames)
        if (name == id) return k;
    throw ParameterError("unknown transform: " + std::string(id));
}

AugmentConfig AugmentConfig::disabled() {
    AugmentConfig c;
    c.blur.gate = c.blur.motion_p = c.blur.median_p = c.blur.gaussian_p = 0;
    c.color.gate = c.color.rgb_p = c.color.hsv_p = 0;
    c.brightness_contrast.p = 0;
    c.geometry.gate = c.geometry.rotate_p = c.geometry.ssr_p = 0;
    c.grid_distortion.gate = c.grid_distortion.p = 0;
    c.perspective.p = 0;
    c.dropout.coarse_p = c.dropout.grid_p = 0;
    c.weather.gate = c.weather.rain_p = c.weather.fog_p = c.weather.shadow_p = 0;
    c.clahe.p = 0;
    c.sharpen.p = 0;
    return c;
}

void AugmentConfig::check() const {
    for (double p : {blur.gate, blur.motion_p, blur.median_p, blur.gaussian_p, color.gate, color.rgb_p, color.hsv_p,
                     brightness_contrast.p, geometry.gate, geometry.rotate_p, geometry.ssr_p, grid_distortion.gate,
                     grid_distortion.p, perspective.p, dropout.coarse_p, dropout.grid_p, weather.gate, weather.rain_p,
                     weather.fog_p, weather.shadow_p, clahe.p, sharpen.p}) {
        require(is_prob(p), "probabilities must lie in [0, 1]");
    }
    auto odd = [](int k) { return k >= 3 && k % 2 == 1; };
    require(odd(blur.motion_min) && odd(blur.motion_max) && blur.motion_min <= blur.motion_max,
            "motion blur lengths must be odd, >= 3 and ordered");
    require(odd(blur.median_limit), "median limit must be odd and >= 3");
    require(odd(blur.gaussian_min) && odd(blur.gaussian_max) && blur.gaussian_min <= blur.gaussian_max,
            "gaussian sizes must be odd, >= 3 and ordered");
    require(color.rgb_limit >= 0 && color.rgb_limit <= 255, "rgb limit must lie in [0, 255]");
    require(color.hue_limit >= 0 && color.hue_limit <= 180, "hue limit must lie in [0, 180]");
    require(color.sat_limit >= 0 && color.sat_limit <= 255 && color.val_limit >= 0 && color.val_limit <= 255,
            "saturation/value limits must lie in [0, 255]");
    require(is_prob(brightness_contrast.brightness) && is_prob(brightness_contrast.contrast),
            "brightness and contrast limits must lie in [0, 1]");
    require(geometry.rotate_limit >= 0 && geometry.rotate_limit <= 180 && geometry.ssr_rotate_limit >= 0 &&
                geometry.ssr_rotate_limit <= 180,
            "rotation limits must lie in [0, 180]");
    require(is_prob(geometry.shift_limit), "shift limit must lie in [0, 1]");
    require(geometry.scale_limit >= 0 && geometry.scale_limit < 1, "scale limit must lie in [0, 1)");
    require(grid_distortion.steps >= 1, "grid steps must be >= 1");
    require(grid_distortion.limit >= 0 && grid_distortion.limit < 1, "grid limit must lie in [0, 1)");
    require(perspective.scale_min >= 0 && perspective.scale_min <= perspective.scale_max && perspective.scale_max <= 0.5,
            "perspective scale must satisfy 0 <= min <= max <= 0.5");
    require(dropout.holes >= 0 && dropout.hole_width >= 1 && dropout.hole_height >= 1, "bad coarse dropout holes");
    require(dropout.grid_ratio > 0 && dropout.grid_ratio < 1, "grid ratio must lie in (0, 1)");
    require(dropout.grid_unit_min >= 2 && dropout.grid_unit_min <= dropout.grid_unit_max, "bad grid unit range");
    require(weather.rain_drop_length >= 1, "rain drop length must be >= 1");
    require(weather.fog_min >= 0 && weather.fog_min <= weather.fog_max && weather.fog_max <= 1, "bad fog range");
    require(is_prob(weather.shadow_darkness), "shadow darkness must lie in [0, 1]");
    require(clahe.clip_limit >= 1 && clahe.tiles >= 1, "CLAHE needs clip >= 1 and tiles >= 1");
    require(is_prob(sharpen.alpha_min) && is_prob(sharpen.alpha_max) && sharpen.alpha_min <= sharpen.alpha_max,
            "sharpen alpha must be an ordered range in [0, 1]");
    require(sharpen.lightness_min >= 0 && sharpen.lightness_min <= sharpen.lightness_max, "bad sharpen lightness");
}

nlohmann::json to_json(const AugmentConfig& cfg) {
    nlohmann::json j;
    nlohmann::to_json(j, cfg);
    return j;
}

AugmentConfig augment_config_from_json(const nlohmann::json& j) {
    check_keys(j, to_json(AugmentConfig{}), "");
    AugmentConfig cfg;
    try {
        j.get_to(cfg);
    } catch (const nlohmann::json::exception& e) {
        throw ParameterError(std::string("augment config: ") + e.what());
    }
    cfg.check();
    return cfg;
}

bool AugmentTrace::ran(TransformKind kind) const {
    return std::find(applied.begin(), applied.end(), kind) != applied.end();
}

RasterImage apply_transform(TransformKind kind, const AugmentConfig& cfg, const RasterImage& img, Rng& rng) {
    if (!img.valid()) throw ParameterError("cannot augment an empty image");
    switch (kind) {
        case TransformKind::MotionBlur: {
            const int len = random_odd(rng, cfg.blur.motion_min, cfg.blur.motion_max);
            return kernels::convolve(img, motion_kernel(len, uniform_real(rng, 0.0, 180.0)));
        }
        case TransformKind::MedianBlur:
            return kernels::median_blur(img, cfg.blur.median_limit);
        case TransformKind::GaussianBlur:
            return kernels::convolve(img, gaussian_kernel(random_odd(rng, cfg.blur.gaussian_min, cfg.blur.gaussian_max)));
        case TransformKind::RgbShift: {
            const int lim = cfg.color.rgb_limit;
            const std::array<int, 3> d{uniform_int(rng, -lim, lim), uniform_int(rng, -lim, lim),
                                       uniform_int(rng, -lim, lim)};
            return map_pixels(img, [&](std::uint8_t* p) {
                for (int c = 0; c < 3; ++c) p[c] = clamp_u8(p[c] + d[c]);
            });
        }
        case TransformKind::HsvShift: {
            const double dh = uniform_int(rng, -cfg.color.hue_limit, cfg.color.hue_limit) * 2.0;  // 8-bit hue is degrees / 2
            const double ds = uniform_int(rng, -cfg.color.sat_limit, cfg.color.sat_limit) / 255.0;
            const double dv = uniform_int(rng, -cfg.color.val_limit, cfg.color.val_limit) / 255.0;
            return map_pixels(img, [&](std::uint8_t* p) {
                double h, s, v;
                rgb_to_hsv(p, h, s, v);
                h = std::fmod(h + dh + 360.0, 360.0);
                hsv_to_rgb(h, std::clamp(s + ds, 0.0, 1.0), std::clamp(v + dv, 0.0, 1.0), p);
            });
        }
        case TransformKind::BrightnessContrast: {
            const auto& bc = cfg.brightness_contrast;
            const double alpha = 1.0 + uniform_real(rng, -bc.contrast, bc.contrast);
            const double beta = uniform_real(rng, -bc.brightness, bc.brightness) * 255.0;
            return map_pixels(img, [&](std::uint8_t* p) {
                for (int c = 0; c < 3; ++c) p[c] = clamp_u8(alpha * p[c] + beta);
            });
        }
        case TransformKind::Rotate: {
            const double lim = cfg.geometry.rotate_limit;
            return kernels::warp(img, similarity(img, uniform_real(rng, -lim, lim), 1.0, 0.0, 0.0));
        }
        case TransformKind::ShiftScaleRotate: {
            const auto& g = cfg.geometry;
            const double dx = uniform_real(rng, -g.shift_limit, g.shift_limit) * img.width;
            const double dy = uniform_real(rng, -g.shift_limit, g.shift_limit) * img.height;
            const double scale = 1.0 + uniform_real(rng, -g.scale_limit, g.scale_limit);
            const double angle = uniform_real(rng, -g.ssr_rotate_limit, g.ssr_rotate_limit);
            return kernels::warp(img, similarity(img, angle, scale, dx, dy));
        }
        case TransformKind::GridDistortion: {
            const auto& gd = cfg.grid_distortion;
            const auto xs = distort_axis(img.width, gd.steps, gd.limit, rng);
            const auto ys = distort_axis(img.height, gd.steps, gd.limit, rng);
            std::vector<float> mx(img.pixels.size() / 3), my(img.pixels.size() / 3);
            for (int y = 0; y < img.height; ++y) {
                for (int x = 0; x < img.width; ++x) {
                    mx[static_cast<std::size_t>(y) * img.width + x] = xs[x];
                    my[static_cast<std::size_t>(y) * img.width + x] = ys[y];
                }
            }
            return kernels::remap(img, mx, my);
        }
        case TransformKind::Perspective: {
            // Jitter each corner inward by |N(0, scale)| of the canvas and stretch
            // that quadrilateral back over the full canvas.
            const double scale = uniform_real(rng, cfg.perspective.scale_min, cfg.perspective.scale_max);
            std::normal_distribution<double> normal(0.0, std::max(scale, 1e-12));
            std::array<double, 8> j{};
            for (auto& v : j) v = std::fmod(std::abs(normal(rng)), 1.0);
            const double w = img.width - 1, h = img.height - 1;
            const std::array<std::array<double, 2>, 4> canvas{{{0, 0}, {w, 0}, {w, h}, {0, h}}};
            const std::array<std::array<double, 2>, 4> quad{{{j[0] * w, j[1] * h},
                                                             {w - j[2] * w, j[3] * h},
                                                             {w - j[4] * w, h - j[5] * h},
                                                             {j[6] * w, h - j[7] * h}}};
            if (img.width < 2 || img.height < 2) return img;
            return kernels::warp(img, homography(canvas, quad));
        }
        case TransformKind::CoarseDropout: {
            RasterImage out = img;
            const auto& d = cfg.dropout;
            for (int i = 0; i < d.holes; ++i) {
                const int x = uniform_int(rng, 0, std::max(0, img.width - d.hole_width));
                const int y = uniform_int(rng, 0, std::max(0, img.height - d.hole_height));
                fill_rect(out, x, y, d.hole_width, d.hole_height, kWhite);
            }
            return out;
        }
        case TransformKind::GridDropout: {
            RasterImage out = img;
            const auto& d = cfg.dropout;
            const int max_unit = std::max(2, std::min({d.grid_unit_max, img.width, img.height}));
            const int unit = uniform_int(rng, std::min(d.grid_unit_min, max_unit), max_unit);
            const int hole = std::max(1, static_cast<int>(std::lround(unit * d.grid_ratio)));
            const int ox = uniform_int(rng, 0, unit - hole);
            const int oy = uniform_int(rng, 0, unit - hole);
            for (int y = oy; y < img.height; y += unit)
                for (int x = ox; x < img.width; x += unit) fill_rect(out, x, y, hole, hole, kWhite);
            return out;
        }
        case TransformKind::Rain: {
            RasterImage out = img;
            const int len = cfg.weather.rain_drop_length;
            const int slant = uniform_int(rng, -10, 10);
            const int drops = std::max(1, img.width * img.height / 600);
            for (int i = 0; i < drops; ++i) {
                const int x = uniform_int(rng, 0, img.width - 1);
                const int y = uniform_int(rng, 0, img.height - 1);
                draw_line(out, x, y, x + slant, y + len, Rgb{200, 200, 200});
            }
            // Overcast: rain darkens the whole frame.
            return map_pixels(out, [](std::uint8_t* p) {
                for (int c = 0; c < 3; ++c) p[c] = clamp_u8(p[c] * 0.7);
            });
        }
        case TransformKind::Fog: {
            const double a = uniform_real(rng, cfg.weather.fog_min, cfg.weather.fog_max);
            return map_pixels(img, [&](std::uint8_t* p) {
                for (int c = 0; c < 3; ++c) p[c] = clamp_u8((1 - a) * p[c] + a * 255.0);
            });
        }
        case TransformKind::Shadow: {
            std::vector<std::array<double, 2>> poly(5);
            for (auto& v : poly) v = {uniform_real(rng, 0, img.width), uniform_real(rng, img.height / 2.0, img.height)};
            RasterImage out = img;
            const double k = cfg.weather.shadow_darkness;
            for (int y = 0; y < img.height; ++y) {
                for (int x = 0; x < img.width; ++x) {
                    if (!inside_polygon(poly, x + 0.5, y + 0.5)) continue;
                    auto* p = out.at(x, y);
                    for (int c = 0; c < 3; ++c) p[c] = clamp_u8(p[c] * k);
                }
            }
            return out;
        }
        case TransformKind::Clahe: {
            const kernels::ClaheParams params{uniform_real(rng, 1.0, cfg.clahe.clip_limit), cfg.clahe.tiles, cfg.clahe.tiles};
            return kernels::clahe(img, params);
        }
        case TransformKind::Sharpen: {
            const double alpha = uniform_real(rng, cfg.sharpen.alpha_min, cfg.sharpen.alpha_max);
            const double light = uniform_real(rng, cfg.sharpen.lightness_min, cfg.sharpen.lightness_max);
            kernels::Kernel2D k{3, 3, std::vector<float>(9, static_cast<float>(-alpha))};
            k.weights[4] = static_cast<float>((1 - alpha) + alpha * (8 + light));
            // Rows sum to 1 + alpha * light; renormalise so flat regions keep their tone.
            float total = 0.0f;
            for (float w : k.weights) total += w;
            for (float& w : k.weights) w /= total;
            return kernels::convolve(img, k);
        }
    }
    throw ParameterError("unknown transform");
}

RasterImage augment(const RasterImage& image, const AugmentConfig& cfg, Rng& rng, AugmentTrace* trace) {
    AugmentTrace local;
    AugmentTrace& t = trace ? *trace : local;
    t = AugmentTrace{};
    RasterImage img = image;

    auto run = [&](TransformKind kind, double p) {
        if (!bernoulli(rng, p)) return;
        img = apply_transform(kind, cfg, img, rng);
        t.applied.push_back(kind);
    };
    struct Member {
        TransformKind kind;
        double p;
    };
    auto select_one = [&](double gate, std::initializer_list<Member> members) {
        if (!bernoulli(rng, gate)) return false;
        const auto& m = *(members.begin() + uniform_index(rng, members.size()));
        run(m.kind, m.p);
        return true;
    };

    const auto& b = cfg.blur;
    t.blur_gate = select_one(b.gate, {{TransformKind::MotionBlur, b.motion_p},
                                      {TransformKind::MedianBlur, b.median_p},
                                      {TransformKind::GaussianBlur, b.gaussian_p}});
    t.color_gate = select_one(cfg.color.gate, {{TransformKind::RgbShift, cfg.color.rgb_p},
                                               {TransformKind::HsvShift, cfg.color.hsv_p}});
    run(TransformKind::BrightnessContrast, cfg.brightness_contrast.p);
    t.geometry_gate = select_one(cfg.geometry.gate, {{TransformKind::Rotate, cfg.geometry.rotate_p},
                                                     {TransformKind::ShiftScaleRotate, cfg.geometry.ssr_p}});
    t.grid_gate = select_one(cfg.grid_distortion.gate, {{TransformKind::GridDistortion, cfg.grid_distortion.p}});
    run(TransformKind::Perspective, cfg.perspective.p);
    select_one(1.0, {{TransformKind::CoarseDropout, cfg.dropout.coarse_p}, {TransformKind::GridDropout, cfg.dropout.grid_p}});
    t.weather_gate = select_one(cfg.weather.gate, {{TransformKind::Rain, cfg.weather.rain_p},
                                                   {TransformKind::Fog, cfg.weather.fog_p},
                                                   {TransformKind::Shadow, cfg.weather.shadow_p}});
    run(TransformKind::Clahe, cfg.clahe.p);
    run(TransformKind::Sharpen, cfg.sharpen.p);
    return img;
}

}  // namespace diagsynth

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

namespace diagsynth {

using Rgb = std::array<std::uint8_t, 3>;

inline constexpr Rgb kWhite{255, 255, 255};

/// Row-major RGB image, 8 bits per channel.
struct RasterImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;

    RasterImage() = default;
    RasterImage(int w, int h, Rgb fill = kWhite);

    bool valid() const noexcept {
        return width >= 1 && height >= 1 &&
               pixels.size() == static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3;
    }
    std::size_t offset(int x, int y) const noexcept {
        return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)) * 3;
    }
    std::uint8_t* at(int x, int y) noexcept { return pixels.data() + offset(x, y); }
    const std::uint8_t* at(int x, int y) const noexcept { return pixels.data() + offset(x, y); }

    bool operator==(const RasterImage&) const = default;
};

// 8-bit PNG I/O; gray / palette / alpha inputs are converted to RGB, alpha
// composited over white. Throws IoError.
RasterImage read_png(const std::filesystem::path& path);
void write_png(const RasterImage& image, const std::filesystem::path& path);

}  // namespace diagsynth

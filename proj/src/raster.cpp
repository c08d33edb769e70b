#include "diagsynth/raster.hpp"

#include <png.h>

#include <cstdio>
#include <memory>

#include "diagsynth/errors.hpp"

namespace diagsynth {

RasterImage::RasterImage(int w, int h, Rgb fill) : width(w), height(h) {
    if (w < 1 || h < 1) throw ParameterError("image dimensions must be positive");
    pixels.resize(static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * 3);
    for (std::size_t i = 0; i < pixels.size(); i += 3) {
        pixels[i] = fill[0];
        pixels[i + 1] = fill[1];
        pixels[i + 2] = fill[2];
    }
}

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const { std::fclose(f); }
};
using File = std::unique_ptr<std::FILE, FileCloser>;

}  // namespace

RasterImage read_png(const std::filesystem::path& path) {
    File fp(std::fopen(path.c_str(), "rb"));
    if (!fp) throw IoError("cannot open " + path.string());
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_stdio(&image, fp.get())) {
        throw IoError("not a readable PNG: " + path.string() + " (" + image.message + ")");
    }
    image.format = PNG_FORMAT_RGB;
    RasterImage out;
    out.width = static_cast<int>(image.width);
    out.height = static_cast<int>(image.height);
    out.pixels.resize(PNG_IMAGE_SIZE(image));
    // background for alpha compositing
    png_color white{255, 255, 255};
    if (!png_image_finish_read(&image, &white, out.pixels.data(), 0, nullptr)) {
        png_image_free(&image);
        throw IoError("failed to decode " + path.string() + " (" + image.message + ")");
    }
    return out;
}

void write_png(const RasterImage& img, const std::filesystem::path& path) {
    if (!img.valid()) throw ParameterError("cannot write an invalid image");
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(img.width);
    image.height = static_cast<png_uint_32>(img.height);
    image.format = PNG_FORMAT_RGB;
    if (!png_image_write_to_file(&image, path.c_str(), 0, img.pixels.data(), 0, nullptr)) {
        throw IoError("cannot write " + path.string() + " (" + image.message + ")");
    }
}

}  // namespace diagsynth

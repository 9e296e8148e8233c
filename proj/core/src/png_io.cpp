#include "mccsr/png_io.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <memory>
#include <stdexcept>
#include <vector>

namespace mccsr {
namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

[[noreturn]] void fail(const std::string& what, const std::string& path) {
  throw std::runtime_error(what + ": " + path);
}

}  // namespace

PlanarImage read_png(const std::string& path) {
  FilePtr file(std::fopen(path.c_str(), "rb"));
  if (!file) fail("cannot open PNG", path);

  png_byte header[8];
  if (std::fread(header, 1, 8, file.get()) != 8 || png_sig_cmp(header, 0, 8))
    fail("not a PNG file", path);

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr,
                                           nullptr);
  if (!png) fail("libpng init failed", path);
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    fail("libpng init failed", path);
  }
  std::vector<png_bytep> row_ptrs;
  std::vector<png_byte> data;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    fail("PNG decode error", path);
  }

  png_init_io(png, file.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);

  png_set_expand(png);          // palette/gray bit depths -> 8-bit
  png_set_strip_16(png);        // 16-bit -> 8-bit
  png_set_strip_alpha(png);
  png_set_gray_to_rgb(png);
  png_read_update_info(png, info);

  const png_uint_32 width = png_get_image_width(png, info);
  const png_uint_32 height = png_get_image_height(png, info);
  if (png_get_channels(png, info) != 3) {
    png_destroy_read_struct(&png, &info, nullptr);
    fail("unexpected PNG channel layout", path);
  }

  data.resize(static_cast<size_t>(width) * height * 3);
  row_ptrs.resize(height);
  for (png_uint_32 y = 0; y < height; ++y)
    row_ptrs[y] = data.data() + static_cast<size_t>(y) * width * 3;
  png_read_image(png, row_ptrs.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  PlanarImage img(static_cast<int>(width), static_cast<int>(height), 3,
                  ColorSpace::kRgb);
  for (png_uint_32 y = 0; y < height; ++y) {
    const png_byte* row = data.data() + static_cast<size_t>(y) * width * 3;
    for (png_uint_32 x = 0; x < width; ++x) {
      for (int c = 0; c < 3; ++c)
        img.plane(c)(static_cast<int>(y), static_cast<int>(x)) = row[3 * x + c];
    }
  }
  return img;
}

void write_png(const std::string& path, const PlanarImage& img) {
  if (img.channels() != 3)
    throw std::invalid_argument("write_png expects a 3-channel image");

  const int width = img.width();
  const int height = img.height();
  std::vector<png_byte> data(static_cast<size_t>(width) * height * 3);
  for (int y = 0; y < height; ++y) {
    png_byte* row = data.data() + static_cast<size_t>(y) * width * 3;
    for (int x = 0; x < width; ++x) {
      for (int c = 0; c < 3; ++c) {
        double v = img.plane(c)(y, x);
        if (!std::isfinite(v)) v = 0.0;
        v = std::min(std::max(v, 0.0), 255.0);
        row[3 * x + c] = static_cast<png_byte>(std::lround(v));
      }
    }
  }

  FilePtr file(std::fopen(path.c_str(), "wb"));
  if (!file) fail("cannot create PNG", path);

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr,
                                            nullptr);
  if (!png) fail("libpng init failed", path);
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    fail("libpng init failed", path);
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    fail("PNG encode error", path);
  }

  png_init_io(png, file.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(width),
               static_cast<png_uint_32>(height), 8, PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < height; ++y)
    png_write_row(png, data.data() + static_cast<size_t>(y) * width * 3);
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace mccsr

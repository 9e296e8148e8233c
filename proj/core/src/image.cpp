#include "mccsr/image.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace mccsr {
namespace {

// BT.601 luma weights.
constexpr double kRedWeight = 0.299;
constexpr double kGreenWeight = 0.587;
constexpr double kBlueWeight = 0.114;

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

PlanarImage::PlanarImage(int width, int height, int channels, ColorSpace space)
    : width_(width), height_(height), space_(space) {
  require(width > 0 && height > 0, "image dimensions must be positive");
  require(channels == 1 || channels == 3, "images have 1 or 3 channels");
  planes_.assign(static_cast<size_t>(channels), Plane::Zero(height, width));
}

PlanarImage rgb_to_ycbcr(const PlanarImage& img) {
  require(img.space() == ColorSpace::kRgb && img.channels() == 3,
          "rgb_to_ycbcr expects an RGB image");
  PlanarImage out(img.width(), img.height(), 3, ColorSpace::kYcbcr);
  const Plane& r = img.plane(0);
  const Plane& g = img.plane(1);
  const Plane& b = img.plane(2);
  Plane y = kRedWeight * r + kGreenWeight * g + kBlueWeight * b;
  out.plane(1) = 128.0 + (b - y) / (2.0 * (1.0 - kBlueWeight));
  out.plane(2) = 128.0 + (r - y) / (2.0 * (1.0 - kRedWeight));
  out.plane(0) = std::move(y);
  return out;
}

PlanarImage ycbcr_to_rgb(const PlanarImage& img) {
  require(img.space() == ColorSpace::kYcbcr && img.channels() == 3,
          "ycbcr_to_rgb expects a YCbCr image");
  PlanarImage out(img.width(), img.height(), 3, ColorSpace::kRgb);
  const Plane& y = img.plane(0);
  const Plane& cb = img.plane(1);
  const Plane& cr = img.plane(2);
  Plane r = y + 2.0 * (1.0 - kRedWeight) * (cr - 128.0);
  Plane b = y + 2.0 * (1.0 - kBlueWeight) * (cb - 128.0);
  out.plane(1) = (y - kRedWeight * r - kBlueWeight * b) / kGreenWeight;
  out.plane(0) = std::move(r);
  out.plane(2) = std::move(b);
  return out;
}

Plane luma_plane(const PlanarImage& img) {
  if (img.channels() == 1) return img.plane(0);
  if (img.space() == ColorSpace::kYcbcr) return img.plane(0);
  require(img.space() == ColorSpace::kRgb, "luma_plane expects RGB, YCbCr or gray");
  return kRedWeight * img.plane(0) + kGreenWeight * img.plane(1) +
         kBlueWeight * img.plane(2);
}

double cubic_kernel(double t) {
  t = std::abs(t);
  if (t <= 1.0) return ((1.5 * t - 2.5) * t) * t + 1.0;
  if (t < 2.0) return ((-0.5 * t + 2.5) * t - 4.0) * t + 2.0;
  return 0.0;
}

namespace {

struct ResampleTaps {
  // For each output index: four source indices (clamped) and weights.
  std::vector<std::array<int, 4>> idx;
  std::vector<std::array<double, 4>> w;
};

ResampleTaps make_taps(int in_size, int out_size) {
  ResampleTaps taps;
  taps.idx.resize(static_cast<size_t>(out_size));
  taps.w.resize(static_cast<size_t>(out_size));
  const double step = static_cast<double>(in_size) / static_cast<double>(out_size);
  for (int o = 0; o < out_size; ++o) {
    const double src = (o + 0.5) * step - 0.5;
    const int i0 = static_cast<int>(std::floor(src));
    double sum = 0.0;
    for (int k = 0; k < 4; ++k) {
      const int src_index = i0 - 1 + k;
      const double weight = cubic_kernel(src - src_index);
      const int clamped = std::min(std::max(src_index, 0), in_size - 1);
      taps.idx[static_cast<size_t>(o)][static_cast<size_t>(k)] = clamped;
      taps.w[static_cast<size_t>(o)][static_cast<size_t>(k)] = weight;
      sum += weight;
    }
    // Weights sum to 1 analytically; normalize so constants are exact.
    for (int k = 0; k < 4; ++k) taps.w[static_cast<size_t>(o)][static_cast<size_t>(k)] /= sum;
  }
  return taps;
}

Plane resample_plane(const Plane& in, int out_w, int out_h) {
  const int in_h = static_cast<int>(in.rows());
  const int in_w = static_cast<int>(in.cols());
  const ResampleTaps col_taps = make_taps(in_w, out_w);
  const ResampleTaps row_taps = make_taps(in_h, out_h);

  Plane horiz(in_h, out_w);
  for (int x = 0; x < out_w; ++x) {
    const auto& ix = col_taps.idx[static_cast<size_t>(x)];
    const auto& wx = col_taps.w[static_cast<size_t>(x)];
    horiz.col(x) = wx[0] * in.col(ix[0]) + wx[1] * in.col(ix[1]) +
                   wx[2] * in.col(ix[2]) + wx[3] * in.col(ix[3]);
  }
  Plane out(out_h, out_w);
  for (int y = 0; y < out_h; ++y) {
    const auto& iy = row_taps.idx[static_cast<size_t>(y)];
    const auto& wy = row_taps.w[static_cast<size_t>(y)];
    out.row(y) = wy[0] * horiz.row(iy[0]) + wy[1] * horiz.row(iy[1]) +
                 wy[2] * horiz.row(iy[2]) + wy[3] * horiz.row(iy[3]);
  }
  return out;
}

}  // namespace

PlanarImage bicubic_resize_to(const PlanarImage& img, int out_width, int out_height) {
  require(img.channels() > 0, "empty image");
  if (out_width <= 0 || out_height <= 0)
    throw std::invalid_argument("bicubic_resize: zero-dimension output");
  PlanarImage out(out_width, out_height, img.channels(), img.space());
  for (int c = 0; c < img.channels(); ++c)
    out.plane(c) = resample_plane(img.plane(c), out_width, out_height);
  return out;
}

PlanarImage bicubic_resize(const PlanarImage& img, double scale) {
  require(scale > 0.0, "bicubic_resize: scale must be positive");
  const int out_w = static_cast<int>(std::llround(scale * img.width()));
  const int out_h = static_cast<int>(std::llround(scale * img.height()));
  return bicubic_resize_to(img, out_w, out_h);
}

PlanarImage crop_to_multiple(const PlanarImage& img, int factor) {
  require(factor >= 1, "crop factor must be >= 1");
  const int w = (img.width() / factor) * factor;
  const int h = (img.height() / factor) * factor;
  require(w > 0 && h > 0, "image smaller than crop factor");
  if (w == img.width() && h == img.height()) return img;
  PlanarImage out(w, h, img.channels(), img.space());
  for (int c = 0; c < img.channels(); ++c)
    out.plane(c) = img.plane(c).topLeftCorner(h, w);
  return out;
}

}  // namespace mccsr

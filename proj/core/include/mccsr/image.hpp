#ifndef MCCSR_IMAGE_HPP
#define MCCSR_IMAGE_HPP

#include <vector>

#include "mccsr/types.hpp"

namespace mccsr {

enum class ColorSpace { kRgb, kYcbcr, kGray };

/// Multi-plane raster with floating point samples in nominal [0, 255] range.
/// Values are kept unclamped internally; clamping happens only on export.
class PlanarImage {
 public:
  PlanarImage() = default;
  PlanarImage(int width, int height, int channels, ColorSpace space);

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return static_cast<int>(planes_.size()); }
  ColorSpace space() const { return space_; }
  void set_space(ColorSpace space) { space_ = space; }

  Plane& plane(int c) { return planes_[static_cast<size_t>(c)]; }
  const Plane& plane(int c) const { return planes_[static_cast<size_t>(c)]; }

 private:
  int width_ = 0;
  int height_ = 0;
  ColorSpace space_ = ColorSpace::kGray;
  std::vector<Plane> planes_;
};

/// Full-range BT.601: Y in [0,255], Cb/Cr centered at 128. No rounding.
PlanarImage rgb_to_ycbcr(const PlanarImage& img);

/// Exact algebraic inverse of rgb_to_ycbcr (pre-clamp).
PlanarImage ycbcr_to_rgb(const PlanarImage& img);

/// Luma plane: BT.601 Y for RGB input, the single plane for grayscale.
Plane luma_plane(const PlanarImage& img);

/// Separable cubic convolution (Catmull-Rom a = -0.5), replicate boundary,
/// pixel centers aligned. Output dims = round(scale * input dims).
PlanarImage bicubic_resize(const PlanarImage& img, double scale);

/// Same kernel, explicit output dimensions.
PlanarImage bicubic_resize_to(const PlanarImage& img, int out_width, int out_height);

/// The cubic interpolation kernel used by bicubic_resize.
double cubic_kernel(double t);

/// Crops to the top-left region whose dims are multiples of `factor`.
PlanarImage crop_to_multiple(const PlanarImage& img, int factor);

}  // namespace mccsr

#endif

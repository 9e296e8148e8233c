#include "support/test_images.hpp"

#include <algorithm>
#include <cmath>

namespace mccsr::testing {
namespace {

struct Color {
  double v[3];
};

Color random_color(Rng& rng) {
  return {{rng.uniform(10.0, 245.0), rng.uniform(10.0, 245.0),
           rng.uniform(10.0, 245.0)}};
}

void fill_rect(PlanarImage& img, int x0, int y0, int x1, int y1, const Color& col) {
  x0 = std::max(x0, 0);
  y0 = std::max(y0, 0);
  x1 = std::min(x1, img.width());
  y1 = std::min(y1, img.height());
  if (x0 >= x1 || y0 >= y1) return;
  for (int c = 0; c < 3; ++c)
    img.plane(c).block(y0, x0, y1 - y0, x1 - x0) = col.v[c];
}

void fill_ellipse(PlanarImage& img, double cx, double cy, double rx, double ry,
                  const Color& col) {
  const int x0 = std::max(static_cast<int>(cx - rx) - 1, 0);
  const int x1 = std::min(static_cast<int>(cx + rx) + 2, img.width());
  const int y0 = std::max(static_cast<int>(cy - ry) - 1, 0);
  const int y1 = std::min(static_cast<int>(cy + ry) + 2, img.height());
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) {
      const double dx = (x - cx) / rx;
      const double dy = (y - cy) / ry;
      if (dx * dx + dy * dy <= 1.0)
        for (int c = 0; c < 3; ++c) img.plane(c)(y, x) = col.v[c];
    }
  }
}

void fill_stripes(PlanarImage& img, int x0, int y0, int x1, int y1, const Color& a,
                  const Color& b, double angle, double period, double phase) {
  x0 = std::max(x0, 0);
  y0 = std::max(y0, 0);
  x1 = std::min(x1, img.width());
  y1 = std::min(y1, img.height());
  const double ux = std::cos(angle), uy = std::sin(angle);
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) {
      const double t =
          0.5 + 0.5 * std::sin(2.0 * M_PI * (ux * x + uy * y) / period + phase);
      for (int c = 0; c < 3; ++c)
        img.plane(c)(y, x) = a.v[c] + (b.v[c] - a.v[c]) * t;
    }
  }
}

}  // namespace

PlanarImage make_random_rgb(Rng& rng, int width, int height) {
  PlanarImage img(width, height, 3, ColorSpace::kRgb);
  for (int c = 0; c < 3; ++c)
    for (int y = 0; y < height; ++y)
      for (int x = 0; x < width; ++x) img.plane(c)(y, x) = rng.uniform(0.0, 255.0);
  return img;
}

PlanarImage make_textured_rgb(Rng& rng, int width, int height) {
  PlanarImage img(width, height, 3, ColorSpace::kRgb);

  // gradient background
  const Color tl = random_color(rng), tr = random_color(rng), bl = random_color(rng);
  for (int c = 0; c < 3; ++c) {
    for (int y = 0; y < height; ++y) {
      const double fy = height > 1 ? static_cast<double>(y) / (height - 1) : 0.0;
      for (int x = 0; x < width; ++x) {
        const double fx = width > 1 ? static_cast<double>(x) / (width - 1) : 0.0;
        img.plane(c)(y, x) =
            tl.v[c] + (tr.v[c] - tl.v[c]) * fx + (bl.v[c] - tl.v[c]) * fy;
      }
    }
  }

  const int shapes = 14 + static_cast<int>(rng.below(8));
  for (int i = 0; i < shapes; ++i) {
    const int kind = static_cast<int>(rng.below(3));
    if (kind == 0) {
      const int w = 4 + static_cast<int>(rng.below(static_cast<std::uint64_t>(width / 2)));
      const int h = 4 + static_cast<int>(rng.below(static_cast<std::uint64_t>(height / 2)));
      const int x = static_cast<int>(rng.below(static_cast<std::uint64_t>(width)));
      const int y = static_cast<int>(rng.below(static_cast<std::uint64_t>(height)));
      fill_rect(img, x, y, x + w, y + h, random_color(rng));
    } else if (kind == 1) {
      const double rx = rng.uniform(3.0, width / 4.0);
      const double ry = rng.uniform(3.0, height / 4.0);
      fill_ellipse(img, rng.uniform(0.0, width), rng.uniform(0.0, height), rx, ry,
                   random_color(rng));
    } else {
      const int w = 8 + static_cast<int>(rng.below(static_cast<std::uint64_t>(width / 2)));
      const int h = 8 + static_cast<int>(rng.below(static_cast<std::uint64_t>(height / 2)));
      const int x = static_cast<int>(rng.below(static_cast<std::uint64_t>(width)));
      const int y = static_cast<int>(rng.below(static_cast<std::uint64_t>(height)));
      fill_stripes(img, x, y, x + w, y + h, random_color(rng), random_color(rng),
                   rng.uniform(0.0, M_PI), rng.uniform(3.0, 9.0),
                   rng.uniform(0.0, 2.0 * M_PI));
    }
  }
  return img;
}

PlanarImage make_constant_rgb(int width, int height, double r, double g, double b) {
  PlanarImage img(width, height, 3, ColorSpace::kRgb);
  img.plane(0).setConstant(r);
  img.plane(1).setConstant(g);
  img.plane(2).setConstant(b);
  return img;
}

PlanarImage make_checkerboard_rgb(int width, int height, int cell) {
  PlanarImage img(width, height, 3, ColorSpace::kRgb);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const bool on = ((x / cell) + (y / cell)) % 2 == 0;
      const double v = on ? 200.0 : 40.0;
      for (int c = 0; c < 3; ++c) img.plane(c)(y, x) = v;
    }
  }
  return img;
}

PlanarImage add_gaussian_noise(const PlanarImage& img, double sigma,
                               std::uint64_t seed) {
  Rng rng(seed);
  PlanarImage out = img;
  for (int c = 0; c < out.channels(); ++c) {
    for (int y = 0; y < out.height(); ++y) {
      for (int x = 0; x < out.width(); ++x) {
        const double v = out.plane(c)(y, x) + sigma * rng.gaussian();
        out.plane(c)(y, x) = std::min(std::max(v, 0.0), 255.0);
      }
    }
  }
  return out;
}

}  // namespace mccsr::testing

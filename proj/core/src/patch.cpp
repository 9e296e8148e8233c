#include "mccsr/patch.hpp"

#include <stdexcept>

namespace mccsr {
namespace {

std::vector<int> axis_offsets(int size, int side, int stride) {
  std::vector<int> offsets;
  for (int o = 0; o + side <= size; o += stride) offsets.push_back(o);
  if (offsets.back() != size - side) offsets.push_back(size - side);
  return offsets;
}

}  // namespace

PatchGrid PatchGrid::create(int width, int height, int side, int overlap) {
  if (side < 1) throw std::invalid_argument("patch side must be >= 1");
  if (side > width || side > height)
    throw std::invalid_argument("patch side exceeds image dimensions");
  if (overlap < 0 || overlap >= side)
    throw std::invalid_argument("overlap must be in [0, side)");
  PatchGrid g;
  g.patch_side = side;
  g.overlap = overlap;
  g.source_width = width;
  g.source_height = height;
  const int stride = side - overlap;
  g.row_offsets = axis_offsets(height, side, stride);
  g.col_offsets = axis_offsets(width, side, stride);
  return g;
}

std::pair<Matrix, PatchGrid> extract_patches(const PlanarImage& img, int side,
                                             int overlap) {
  PatchGrid grid = PatchGrid::create(img.width(), img.height(), side, overlap);
  const int ch = img.channels();
  const Index plen = static_cast<Index>(side) * side;
  Matrix patches(plen * ch, grid.count());
  for (Index i = 0; i < grid.count(); ++i) {
    const auto [top, left] = grid.offset(i);
    for (int c = 0; c < ch; ++c) {
      patches.col(i).segment(c * plen, plen) =
          img.plane(c).block(top, left, side, side).reshaped().matrix();
    }
  }
  return {std::move(patches), std::move(grid)};
}

PlanarImage assemble_patches(const Matrix& patches, const PatchGrid& grid,
                             ColorSpace space) {
  const int side = grid.patch_side;
  const Index plen = static_cast<Index>(side) * side;
  if (patches.cols() != grid.count() || patches.rows() % plen != 0)
    throw std::invalid_argument("patch matrix does not match grid");
  const int ch = static_cast<int>(patches.rows() / plen);
  if (ch != 1 && ch != 3)
    throw std::invalid_argument("patch matrix does not match grid");

  PlanarImage out(grid.source_width, grid.source_height, ch, space);
  Plane weight = Plane::Zero(grid.source_height, grid.source_width);
  std::vector<Plane> sums(static_cast<size_t>(ch),
                          Plane::Zero(grid.source_height, grid.source_width));
  for (Index i = 0; i < grid.count(); ++i) {
    const auto [top, left] = grid.offset(i);
    weight.block(top, left, side, side) += 1.0;
    for (int c = 0; c < ch; ++c) {
      sums[static_cast<size_t>(c)].block(top, left, side, side) +=
          patches.col(i).segment(c * plen, plen).reshaped(side, side).array();
    }
  }
  for (int c = 0; c < ch; ++c) out.plane(c) = sums[static_cast<size_t>(c)] / weight;
  return out;
}

namespace {

// Correlation with a 1-D kernel along one axis, replicate boundary.
// taps hold (offset, coefficient) pairs.
template <int N>
Plane correlate_axis(const Plane& p, const std::array<std::pair<int, double>, N>& taps,
                     bool horizontal) {
  const int h = static_cast<int>(p.rows());
  const int w = static_cast<int>(p.cols());
  Plane out = Plane::Zero(h, w);
  if (horizontal) {
    for (const auto& [off, coef] : taps) {
      for (int x = 0; x < w; ++x) {
        const int sx = std::min(std::max(x + off, 0), w - 1);
        out.col(x) += coef * p.col(sx);
      }
    }
  } else {
    for (const auto& [off, coef] : taps) {
      for (int y = 0; y < h; ++y) {
        const int sy = std::min(std::max(y + off, 0), h - 1);
        out.row(y) += coef * p.row(sy);
      }
    }
  }
  return out;
}

}  // namespace

FeatureStack extract_feature_maps(const Plane& plane) {
  const std::array<std::pair<int, double>, 2> grad = {{{-1, -1.0}, {1, 1.0}}};
  const std::array<std::pair<int, double>, 3> lap = {
      {{-2, 1.0}, {0, -2.0}, {2, 1.0}}};
  FeatureStack fs;
  fs.maps[0] = correlate_axis<2>(plane, grad, true);
  fs.maps[1] = correlate_axis<2>(plane, grad, false);
  fs.maps[2] = correlate_axis<3>(plane, lap, true);
  fs.maps[3] = correlate_axis<3>(plane, lap, false);
  return fs;
}

Vector feature_patch(const FeatureStack& fs, int top, int left, int side) {
  const Index plen = static_cast<Index>(side) * side;
  Vector v(4 * plen);
  for (int m = 0; m < 4; ++m) {
    v.segment(m * plen, plen) =
        fs.maps[static_cast<size_t>(m)].block(top, left, side, side).reshaped().matrix();
  }
  return v;
}

}  // namespace mccsr

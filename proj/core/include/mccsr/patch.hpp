#ifndef MCCSR_PATCH_HPP
#define MCCSR_PATCH_HPP

#include <array>
#include <utility>
#include <vector>

#include "mccsr/image.hpp"
#include "mccsr/types.hpp"

namespace mccsr {

/// Square-patch tiling with fixed stride = side - overlap; the last row and
/// column of patches are snapped to the image boundary so coverage is total.
struct PatchGrid {
  int patch_side = 0;
  int overlap = 0;
  int source_width = 0;
  int source_height = 0;
  std::vector<int> row_offsets;  // top offsets, ascending
  std::vector<int> col_offsets;  // left offsets, ascending

  static PatchGrid create(int width, int height, int side, int overlap);

  Index count() const {
    return static_cast<Index>(row_offsets.size()) *
           static_cast<Index>(col_offsets.size());
  }
  /// Top-left offset of patch i in row-major grid order.
  std::pair<int, int> offset(Index i) const {
    const Index cols = static_cast<Index>(col_offsets.size());
    return {row_offsets[static_cast<size_t>(i / cols)],
            col_offsets[static_cast<size_t>(i % cols)]};
  }
};

/// Vectorizes every grid patch: column-major within the patch, channels
/// concatenated in plane order. Result columns follow row-major grid order.
std::pair<Matrix, PatchGrid> extract_patches(const PlanarImage& img, int side,
                                             int overlap);

/// Inverse of extract_patches up to overlap handling: every output pixel is
/// the arithmetic mean of all patch values covering it.
PlanarImage assemble_patches(const Matrix& patches, const PatchGrid& grid,
                             ColorSpace space);

/// First- and second-order gradient maps of one plane, replicate boundary.
/// maps[0]: [-1,0,1] horizontal   maps[1]: vertical counterpart
/// maps[2]: [1,0,-2,0,1] horizontal   maps[3]: vertical counterpart
struct FeatureStack {
  std::array<Plane, 4> maps;
};

FeatureStack extract_feature_maps(const Plane& plane);

/// Vectorized feature patch at (top, left): the four maps' side x side blocks,
/// each column-major, concatenated. Length = 4 * side^2.
Vector feature_patch(const FeatureStack& fs, int top, int left, int side);

}  // namespace mccsr

#endif

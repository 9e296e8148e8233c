#include <gtest/gtest.h>

#include <mccsr/image.hpp>
#include <mccsr/patch.hpp>
#include <mccsr/random.hpp>

#include "support/test_images.hpp"

namespace mccsr {
namespace {

using testing::make_constant_rgb;
using testing::make_random_rgb;

PlanarImage single_pixel_rgb(double r, double g, double b) {
  return make_constant_rgb(1, 1, r, g, b);
}

TEST(ColorConversion, BlackMapsToZeroLumaNeutralChroma) {
  const PlanarImage out = rgb_to_ycbcr(single_pixel_rgb(0, 0, 0));
  EXPECT_NEAR(out.plane(0)(0, 0), 0.0, 1e-12);
  EXPECT_NEAR(out.plane(1)(0, 0), 128.0, 1e-12);
  EXPECT_NEAR(out.plane(2)(0, 0), 128.0, 1e-12);
}

TEST(ColorConversion, WhiteMapsToFullLumaNeutralChroma) {
  const PlanarImage out = rgb_to_ycbcr(single_pixel_rgb(255, 255, 255));
  EXPECT_NEAR(out.plane(0)(0, 0), 255.0, 1e-9);
  EXPECT_NEAR(out.plane(1)(0, 0), 128.0, 1e-9);
  EXPECT_NEAR(out.plane(2)(0, 0), 128.0, 1e-9);
}

TEST(ColorConversion, PureRedMatchesScalarFormula) {
  // scalar oracle: Y = 0.299*255, Cb = 128 + (0 - Y)/1.772, Cr = 128 + (255 - Y)/1.402
  const double y = 0.299 * 255.0;
  const double cb = 128.0 - y / 1.772;
  const double cr = 128.0 + (255.0 - y) / 1.402;
  EXPECT_NEAR(y, 76.245, 1e-9);
  EXPECT_NEAR(cr, 255.5, 1e-9);

  const PlanarImage out = rgb_to_ycbcr(single_pixel_rgb(255, 0, 0));
  EXPECT_NEAR(out.plane(0)(0, 0), y, 1e-9);
  EXPECT_NEAR(out.plane(1)(0, 0), cb, 1e-9);
  EXPECT_NEAR(out.plane(2)(0, 0), cr, 1e-9);
}

TEST(ColorConversion, NeutralGrayIsFixedPoint) {
  PlanarImage img = single_pixel_rgb(128, 128, 128);
  img.set_space(ColorSpace::kYcbcr);
  const PlanarImage out = ycbcr_to_rgb(img);
  for (int c = 0; c < 3; ++c) EXPECT_NEAR(out.plane(c)(0, 0), 128.0, 1e-9);
}

TEST(ColorConversion, InverseOfBlackChroma) {
  PlanarImage img = single_pixel_rgb(0, 128, 128);
  img.set_space(ColorSpace::kYcbcr);
  const PlanarImage out = ycbcr_to_rgb(img);
  for (int c = 0; c < 3; ++c) EXPECT_NEAR(out.plane(c)(0, 0), 0.0, 1e-12);
}

TEST(ColorConversion, RoundTripIsAlgebraicInverse) {
  Rng rng(42);
  const PlanarImage img = make_random_rgb(rng, 17, 13);
  const PlanarImage back = ycbcr_to_rgb(rgb_to_ycbcr(img));
  for (int c = 0; c < 3; ++c) {
    EXPECT_LE((back.plane(c) - img.plane(c)).abs().maxCoeff(), 1e-9);
  }
}

TEST(ColorConversion, WrongSpaceTagIsRejected) {
  PlanarImage ycc = rgb_to_ycbcr(single_pixel_rgb(1, 2, 3));
  EXPECT_THROW(rgb_to_ycbcr(ycc), std::invalid_argument);
  PlanarImage rgb = single_pixel_rgb(1, 2, 3);
  EXPECT_THROW(ycbcr_to_rgb(rgb), std::invalid_argument);
}

TEST(Bicubic, ConstantImageStaysConstant) {
  const PlanarImage img = make_constant_rgb(9, 7, 55.5, 10.25, 200);
  for (const double scale : {0.5, 1.0, 1.37, 2.0, 3.0}) {
    const PlanarImage out = bicubic_resize(img, scale);
    for (int c = 0; c < 3; ++c) {
      EXPECT_LE((out.plane(c) - img.plane(c)(0, 0)).abs().maxCoeff(), 1e-12)
          << "scale " << scale;
    }
  }
}

TEST(Bicubic, ScaleOneIsIdentity) {
  Rng rng(7);
  const PlanarImage img = make_random_rgb(rng, 12, 9);
  const PlanarImage out = bicubic_resize(img, 1.0);
  for (int c = 0; c < 3; ++c)
    EXPECT_LE((out.plane(c) - img.plane(c)).abs().maxCoeff(), 1e-9);
}

TEST(Bicubic, ReproducesLinearRampInInterior) {
  // v(x, y) = x upscaled x2; the kernel reproduces linear functions, so
  // interior samples must equal the source coordinate (x + 0.5)/2 - 0.5.
  const int w = 8, h = 4;
  PlanarImage img(w, h, 1, ColorSpace::kGray);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) img.plane(0)(y, x) = x;
  const PlanarImage out = bicubic_resize(img, 2.0);
  for (int x = 3; x < 2 * w - 4; ++x) {
    const double src = (x + 0.5) / 2.0 - 0.5;
    EXPECT_NEAR(out.plane(0)(4, x), src, 1e-9) << "column " << x;
  }
  // direct kernel-evaluation oracle at one interior sample
  const double src = (5 + 0.5) / 2.0 - 0.5;  // 2.25
  const int i0 = 2;
  double expect = 0.0;
  for (int k = -1; k <= 2; ++k) expect += cubic_kernel(src - (i0 + k)) * (i0 + k);
  EXPECT_NEAR(out.plane(0)(4, 5), expect, 1e-9);
}

TEST(Bicubic, ZeroDimensionOutputIsRejected) {
  const PlanarImage img = make_constant_rgb(5, 5, 1, 2, 3);
  EXPECT_THROW(bicubic_resize(img, 0.01), std::invalid_argument);
}

TEST(FeatureMaps, ConstantPlaneGivesZeroMaps) {
  const Plane plane = Plane::Constant(6, 6, 3.25);
  const FeatureStack fs = extract_feature_maps(plane);
  for (const auto& m : fs.maps) EXPECT_LE(m.abs().maxCoeff(), 1e-12);
}

TEST(FeatureMaps, HorizontalRamp) {
  // v(x, y) = x: first-order horizontal response is 2 in the interior and the
  // second-order response vanishes; the vertical maps are identically zero.
  const int n = 8;
  Plane plane(n, n);
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) plane(y, x) = x;
  const FeatureStack fs = extract_feature_maps(plane);
  EXPECT_LE(fs.maps[0].block(0, 1, n, n - 2).abs().maxCoeff() - 2.0, 1e-12);
  EXPECT_GE(fs.maps[0].block(0, 1, n, n - 2).minCoeff(), 2.0 - 1e-12);
  EXPECT_LE(fs.maps[2].block(0, 2, n, n - 4).abs().maxCoeff(), 1e-12);
  EXPECT_LE(fs.maps[1].abs().maxCoeff(), 1e-12);
  EXPECT_LE(fs.maps[3].abs().maxCoeff(), 1e-12);
}

TEST(FeatureMaps, VerticalRamp) {
  const int n = 8;
  Plane plane(n, n);
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) plane(y, x) = y;
  const FeatureStack fs = extract_feature_maps(plane);
  EXPECT_GE(fs.maps[1].block(1, 0, n - 2, n).minCoeff(), 2.0 - 1e-12);
  EXPECT_LE(fs.maps[1].block(1, 0, n - 2, n).maxCoeff(), 2.0 + 1e-12);
  EXPECT_LE(fs.maps[0].abs().maxCoeff(), 1e-12);
  EXPECT_LE(fs.maps[3].block(2, 0, n - 4, n).abs().maxCoeff(), 1e-12);
}

TEST(Patches, SinglePatchEqualsImage) {
  Rng rng(3);
  const PlanarImage img = make_random_rgb(rng, 5, 5);
  const auto [patches, grid] = extract_patches(img, 5, 4);
  ASSERT_EQ(grid.count(), 1);
  ASSERT_EQ(patches.rows(), 75);
  // column-major vectorization, channels r then g then b
  for (int c = 0; c < 3; ++c)
    for (int col = 0; col < 5; ++col)
      for (int row = 0; row < 5; ++row)
        EXPECT_EQ(patches(c * 25 + col * 5 + row, 0), img.plane(c)(row, col));

  const PlanarImage back = assemble_patches(patches, grid, img.space());
  for (int c = 0; c < 3; ++c)
    EXPECT_LE((back.plane(c) - img.plane(c)).abs().maxCoeff(), 1e-12);
}

TEST(Patches, SixBySixWithOverlapFourGivesFourPatches) {
  Rng rng(4);
  const PlanarImage img = make_random_rgb(rng, 6, 6);
  const auto [patches, grid] = extract_patches(img, 5, 4);
  EXPECT_EQ(grid.count(), 4);
  EXPECT_EQ(grid.row_offsets.size(), 2u);
  EXPECT_EQ(grid.col_offsets.size(), 2u);
}

TEST(Patches, DisjointTiles) {
  Rng rng(5);
  const PlanarImage img = make_random_rgb(rng, 8, 8);
  const auto [patches, grid] = extract_patches(img, 4, 0);
  EXPECT_EQ(grid.count(), 4);
  const PlanarImage back = assemble_patches(patches, grid, img.space());
  for (int c = 0; c < 3; ++c)
    EXPECT_LE((back.plane(c) - img.plane(c)).abs().maxCoeff(), 1e-12);
}

TEST(Patches, ExtractAssembleIsIdentity) {
  Rng rng(6);
  for (const auto [w, h, side, overlap] :
       {std::tuple{11, 9, 3, 1}, {16, 16, 5, 4}, {7, 12, 4, 2}, {9, 9, 2, 0},
        {10, 8, 5, 1}}) {
    const PlanarImage img = make_random_rgb(rng, w, h);
    const auto [patches, grid] = extract_patches(img, side, overlap);
    const PlanarImage back = assemble_patches(patches, grid, img.space());
    for (int c = 0; c < 3; ++c) {
      EXPECT_LE((back.plane(c) - img.plane(c)).abs().maxCoeff(), 1e-12)
          << w << "x" << h << " side " << side << " overlap " << overlap;
    }
  }
}

TEST(Patches, OverlapAveragesValues) {
  // two half-overlapping constant patches, values 0 and 2: overlap mean is 1
  PatchGrid grid = PatchGrid::create(6, 4, 4, 2);
  ASSERT_EQ(grid.count(), 2);
  Matrix patches = Matrix::Zero(16, 2);
  patches.col(1).setConstant(2.0);
  const PlanarImage out = assemble_patches(patches, grid, ColorSpace::kGray);
  EXPECT_LE((out.plane(0).leftCols(2) - 0.0).abs().maxCoeff(), 1e-12);
  EXPECT_LE((out.plane(0).middleCols(2, 2) - 1.0).abs().maxCoeff(), 1e-12);
  EXPECT_LE((out.plane(0).rightCols(2) - 2.0).abs().maxCoeff(), 1e-12);
}

TEST(Patches, SideLargerThanImageIsRejected) {
  Rng rng(8);
  const PlanarImage img = make_random_rgb(rng, 4, 4);
  EXPECT_THROW(extract_patches(img, 5, 0), std::invalid_argument);
}

TEST(Patches, MismatchedGridIsRejected) {
  PatchGrid grid = PatchGrid::create(6, 6, 3, 1);
  Matrix patches = Matrix::Zero(9, 2);  // wrong column count
  EXPECT_THROW(assemble_patches(patches, grid, ColorSpace::kGray),
               std::invalid_argument);
}

TEST(CropToMultiple, DropsRemainder) {
  Rng rng(9);
  const PlanarImage img = make_random_rgb(rng, 11, 7);
  const PlanarImage out = crop_to_multiple(img, 3);
  EXPECT_EQ(out.width(), 9);
  EXPECT_EQ(out.height(), 6);
  EXPECT_EQ(out.plane(1)(2, 3), img.plane(1)(2, 3));
}

}  // namespace
}  // namespace mccsr

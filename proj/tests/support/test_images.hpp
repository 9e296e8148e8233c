#ifndef MCCSR_TESTS_TEST_IMAGES_HPP
#define MCCSR_TESTS_TEST_IMAGES_HPP

#include <mccsr/image.hpp>
#include <mccsr/random.hpp>

namespace mccsr::testing {

/// Uniform random samples in [0, 255].
PlanarImage make_random_rgb(Rng& rng, int width, int height);

/// Sharp-edged colored shapes, gradients and oriented stripe textures; edges
/// are aligned across the RGB channels. Deterministic for a given rng state.
PlanarImage make_textured_rgb(Rng& rng, int width, int height);

PlanarImage make_constant_rgb(int width, int height, double r, double g, double b);

PlanarImage make_checkerboard_rgb(int width, int height, int cell);

/// Adds seeded i.i.d. Gaussian noise, clamped to [0, 255].
PlanarImage add_gaussian_noise(const PlanarImage& img, double sigma,
                               std::uint64_t seed);

}  // namespace mccsr::testing

#endif

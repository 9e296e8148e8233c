#ifndef MCCSR_PIPELINE_HPP
#define MCCSR_PIPELINE_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "mccsr/dictionary_learning.hpp"
#include "mccsr/image.hpp"
#include "mccsr/operators.hpp"
#include "mccsr/solver.hpp"
#include "mccsr/types.hpp"

namespace mccsr {

/// Monotone logistic map from color variance to the coupling weight:
/// tau = tau_max / (1 + exp(-steepness * (beta - midpoint))).
struct TauMap {
  double tau_max = 0.1;
  double steepness = 10.0;
  double midpoint = 0.5;
};

double beta_to_tau(double beta, const TauMap& map);

/// Chroma-to-luma high-frequency energy ratio of one YCbCr patch, using the
/// horizontal and vertical Scharr operators. Fractions whose luma denominator
/// vanishes contribute zero.
double color_variance_beta(const Plane& y, const Plane& cb, const Plane& cr,
                           double normalizer);

struct SrConfig {
  int scale = 2;
  int patch_side = 5;  // on the upscaled grid
  int overlap = 4;     // on the upscaled grid
  double lambda = 0.1;
  TauMap tau_map;
  double beta_normalizer = 1.0;
  std::optional<double> noise_sigma;  // sets lambda = sigma/10, halves tau
  std::optional<double> force_tau;    // bypass the beta -> tau map
  int threads = 0;
  SolverConfig solver{300, 1e-7, 1.05};
};

struct SrStats {
  Index patch_count = 0;
  double beta_min = 0;
  double beta_max = 0;
  double beta_mean = 0;
  std::array<Index, 10> beta_histogram{};  // [0,0.2), [0.2,0.4), ... , [1.8,inf)
  double tau_mean = 0;
  double mean_edge_discrepancy = 0;  // per-patch cross-channel edge difference
  Index solver_nonconverged = 0;
};

/// Joint sparse-coding super resolution: bicubic upscale, gradient features,
/// per-patch adaptive coupling from color variance, joint FISTA solve, HR
/// patch reconstruction around the bicubic mean, overlap averaging, clamp.
PlanarImage super_resolve(const PlanarImage& lr_rgb, const DictionaryPair& dict,
                          const SrConfig& cfg, SrStats* stats = nullptr);

/// Bicubic downsample by 1/scale; dims must be divisible by scale.
PlanarImage degrade(const PlanarImage& hr, int scale, int min_output_side = 5);

struct TrainingDataConfig {
  int scale = 2;
  int patch_side = 5;
  double variance_threshold = 10.0;  // smooth-region rejection, 8-bit units
};

/// Samples N aligned LR-feature / HR-patch pairs (seeded, uniform over the
/// texture-qualifying locations) from degraded-and-upscaled versions of the
/// given images. HR patches are mean-subtracted per channel.
TrainingSet build_training_set(const std::vector<PlanarImage>& hr_images,
                               const TrainingDataConfig& cfg, Index count,
                               std::uint64_t seed);

}  // namespace mccsr

#endif

#ifndef MCCSR_METRICS_HPP
#define MCCSR_METRICS_HPP

#include "mccsr/image.hpp"
#include "mccsr/types.hpp"

namespace mccsr {

struct MetricReport {
  double psnr_db = 0;        // +inf for identical images
  double ssim = 0;
  double scielab_total = 0;  // sum of per-pixel delta-E over the image
};

/// 10*log10(255^2 / MSE) with the MSE pooled over all channels.
double psnr(const PlanarImage& a, const PlanarImage& b);

/// Structural similarity on the luma plane: 11x11 Gaussian window with
/// sigma 1.5, K1 = 0.01, K2 = 0.03, dynamic range 255, mean over valid windows.
double ssim(const PlanarImage& a, const PlanarImage& b);

/// Spatial color difference: sRGB -> XYZ -> opponent channels, per-channel
/// low-pass filtering scaled by samples_per_degree, back to Lab, summed
/// per-pixel delta-E*ab.
double scielab(const PlanarImage& a, const PlanarImage& b,
               double samples_per_degree = 23.0);

MetricReport evaluate_metrics(const PlanarImage& reference, const PlanarImage& test,
                              double samples_per_degree = 23.0);

}  // namespace mccsr

#endif

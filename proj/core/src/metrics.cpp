#include "mccsr/metrics.hpp"

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace mccsr {
namespace {

void check_same_dims(const PlanarImage& a, const PlanarImage& b) {
  if (a.width() != b.width() || a.height() != b.height() ||
      a.channels() != b.channels())
    throw std::invalid_argument("metric inputs must share dimensions");
}

// --- separable Gaussian filtering with replicate boundary ------------------

std::vector<double> gaussian_taps(double sigma, int radius) {
  std::vector<double> taps(static_cast<size_t>(2 * radius + 1));
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double v = std::exp(-0.5 * (i / sigma) * (i / sigma));
    taps[static_cast<size_t>(i + radius)] = v;
    sum += v;
  }
  for (double& t : taps) t /= sum;
  return taps;
}

Plane filter_separable(const Plane& p, const std::vector<double>& taps) {
  const int radius = static_cast<int>(taps.size() / 2);
  const int h = static_cast<int>(p.rows());
  const int w = static_cast<int>(p.cols());
  Plane tmp = Plane::Zero(h, w);
  for (int i = -radius; i <= radius; ++i) {
    const double coef = taps[static_cast<size_t>(i + radius)];
    for (int x = 0; x < w; ++x)
      tmp.col(x) += coef * p.col(std::min(std::max(x + i, 0), w - 1));
  }
  Plane out = Plane::Zero(h, w);
  for (int i = -radius; i <= radius; ++i) {
    const double coef = taps[static_cast<size_t>(i + radius)];
    for (int y = 0; y < h; ++y)
      out.row(y) += coef * tmp.row(std::min(std::max(y + i, 0), h - 1));
  }
  return out;
}

// 'valid' correlation with a centered kernel (no padding)
Plane filter_valid(const Plane& p, const std::vector<double>& taps) {
  const int radius = static_cast<int>(taps.size() / 2);
  const int h = static_cast<int>(p.rows());
  const int w = static_cast<int>(p.cols());
  const int oh = h - 2 * radius;
  const int ow = w - 2 * radius;
  Plane tmp = Plane::Zero(h, ow);
  for (int i = 0; i < 2 * radius + 1; ++i)
    tmp += taps[static_cast<size_t>(i)] * p.middleCols(i, ow);
  Plane out = Plane::Zero(oh, ow);
  for (int i = 0; i < 2 * radius + 1; ++i)
    out += taps[static_cast<size_t>(i)] * tmp.middleRows(i, oh);
  return out;
}

}  // namespace

double psnr(const PlanarImage& a, const PlanarImage& b) {
  check_same_dims(a, b);
  double sq = 0.0;
  for (int c = 0; c < a.channels(); ++c) sq += (a.plane(c) - b.plane(c)).square().sum();
  const double mse =
      sq / (static_cast<double>(a.width()) * a.height() * a.channels());
  if (mse <= 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

double ssim(const PlanarImage& a, const PlanarImage& b) {
  check_same_dims(a, b);
  constexpr int kRadius = 5;  // 11x11 window
  if (a.width() < 2 * kRadius + 1 || a.height() < 2 * kRadius + 1)
    throw std::invalid_argument("ssim: image smaller than the window");
  const std::vector<double> taps = gaussian_taps(1.5, kRadius);
  const Plane x = luma_plane(a);
  const Plane y = luma_plane(b);

  constexpr double kC1 = (0.01 * 255.0) * (0.01 * 255.0);
  constexpr double kC2 = (0.03 * 255.0) * (0.03 * 255.0);

  const Plane mu_x = filter_valid(x, taps);
  const Plane mu_y = filter_valid(y, taps);
  const Plane sigma_xx = filter_valid(x * x, taps) - mu_x * mu_x;
  const Plane sigma_yy = filter_valid(y * y, taps) - mu_y * mu_y;
  const Plane sigma_xy = filter_valid(x * y, taps) - mu_x * mu_y;

  const Plane numerator =
      (2.0 * mu_x * mu_y + kC1) * (2.0 * sigma_xy + kC2);
  const Plane denominator =
      (mu_x * mu_x + mu_y * mu_y + kC1) * (sigma_xx + sigma_yy + kC2);
  return (numerator / denominator).mean();
}

namespace {

// --- S-CIELAB ---------------------------------------------------------------

struct OpponentImage {
  std::array<Plane, 3> planes;
};

double srgb_to_linear(double v8) {
  const double s = std::min(std::max(v8 / 255.0, 0.0), 1.0);
  return s <= 0.04045 ? s / 12.92 : std::pow((s + 0.055) / 1.055, 2.4);
}

// sRGB D65 primaries
const Eigen::Matrix3d& rgb_to_xyz_matrix() {
  static const Eigen::Matrix3d m = [] {
    Eigen::Matrix3d v;
    v << 0.4124564, 0.3575761, 0.1804375,  //
        0.2126729, 0.7151522, 0.0721750,   //
        0.0193339, 0.1191920, 0.9503041;
    return v;
  }();
  return m;
}

const Eigen::Matrix3d& xyz_to_opponent_matrix() {
  static const Eigen::Matrix3d m = [] {
    Eigen::Matrix3d v;
    v << 0.279, 0.72, -0.107,  //
        -0.449, 0.29, -0.077,  //
        0.086, -0.59, 0.501;
    return v;
  }();
  return m;
}

OpponentImage to_opponent(const PlanarImage& img) {
  const int h = img.height(), w = img.width();
  OpponentImage out;
  for (auto& p : out.planes) p = Plane::Zero(h, w);
  const Eigen::Matrix3d m = xyz_to_opponent_matrix() * rgb_to_xyz_matrix();
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const Eigen::Vector3d lin(srgb_to_linear(img.plane(0)(y, x)),
                                srgb_to_linear(img.plane(1)(y, x)),
                                srgb_to_linear(img.plane(2)(y, x)));
      const Eigen::Vector3d o = m * lin;
      for (int c = 0; c < 3; ++c) out.planes[static_cast<size_t>(c)](y, x) = o[c];
    }
  }
  return out;
}

// Sum-of-Gaussians kernels; the second number of each pair is the component's
// full width at half maximum in degrees of visual angle.
struct KernelComponent {
  double weight;
  double fwhm_degrees;
};

const std::array<std::vector<KernelComponent>, 3>& opponent_kernels() {
  static const std::array<std::vector<KernelComponent>, 3> k = {{
      {{0.921, 0.0283}, {0.105, 0.133}, {-0.108, 4.336}},
      {{0.531, 0.0392}, {0.330, 0.494}},
      {{0.488, 0.0536}, {0.371, 0.386}},
  }};
  return k;
}

Plane spatial_filter(const Plane& p, const std::vector<KernelComponent>& comps,
                     double samples_per_degree) {
  constexpr double kFwhmToSigma = 2.3548200450309493;  // 2*sqrt(2*ln 2)
  double total_weight = 0.0;
  for (const auto& c : comps) total_weight += c.weight;
  const int max_radius =
      static_cast<int>(std::max(p.rows(), p.cols())) - 1;

  Plane out = Plane::Zero(p.rows(), p.cols());
  for (const auto& comp : comps) {
    const double sigma = comp.fwhm_degrees * samples_per_degree / kFwhmToSigma;
    int radius = static_cast<int>(std::ceil(4.0 * sigma));
    radius = std::min(std::max(radius, 1), std::max(max_radius, 1));
    out += (comp.weight / total_weight) *
           filter_separable(p, gaussian_taps(std::max(sigma, 1e-6), radius));
  }
  return out;
}

void lab_from_xyz(double x, double y, double z, double* lab) {
  // D65 white, XYZ on the 0..1 scale of the sRGB matrix
  constexpr double kXn = 0.95047, kYn = 1.0, kZn = 1.08883;
  const auto f = [](double t) {
    constexpr double d = 6.0 / 29.0;
    return t > d * d * d ? std::cbrt(t) : t / (3.0 * d * d) + 4.0 / 29.0;
  };
  const double fx = f(x / kXn), fy = f(y / kYn), fz = f(z / kZn);
  lab[0] = 116.0 * fy - 16.0;
  lab[1] = 500.0 * (fx - fy);
  lab[2] = 200.0 * (fy - fz);
}

}  // namespace

double scielab(const PlanarImage& a, const PlanarImage& b,
               double samples_per_degree) {
  check_same_dims(a, b);
  if (a.channels() != 3 || a.space() != ColorSpace::kRgb ||
      b.space() != ColorSpace::kRgb)
    throw std::invalid_argument("scielab expects RGB images");
  if (samples_per_degree <= 0.0)
    throw std::invalid_argument("samples_per_degree must be positive");

  OpponentImage oa = to_opponent(a);
  OpponentImage ob = to_opponent(b);
  const auto& kernels = opponent_kernels();
  for (int c = 0; c < 3; ++c) {
    oa.planes[static_cast<size_t>(c)] = spatial_filter(
        oa.planes[static_cast<size_t>(c)], kernels[static_cast<size_t>(c)],
        samples_per_degree);
    ob.planes[static_cast<size_t>(c)] = spatial_filter(
        ob.planes[static_cast<size_t>(c)], kernels[static_cast<size_t>(c)],
        samples_per_degree);
  }

  const Eigen::Matrix3d back = xyz_to_opponent_matrix().inverse();
  const int h = a.height(), w = a.width();
  double total = 0.0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const Eigen::Vector3d xa =
          back * Eigen::Vector3d(oa.planes[0](y, x), oa.planes[1](y, x),
                                 oa.planes[2](y, x));
      const Eigen::Vector3d xb =
          back * Eigen::Vector3d(ob.planes[0](y, x), ob.planes[1](y, x),
                                 ob.planes[2](y, x));
      double la[3], lb[3];
      lab_from_xyz(xa[0], xa[1], xa[2], la);
      lab_from_xyz(xb[0], xb[1], xb[2], lb);
      const double d0 = la[0] - lb[0], d1 = la[1] - lb[1], d2 = la[2] - lb[2];
      total += std::sqrt(d0 * d0 + d1 * d1 + d2 * d2);
    }
  }
  return total;
}

MetricReport evaluate_metrics(const PlanarImage& reference, const PlanarImage& test,
                              double samples_per_degree) {
  MetricReport r;
  r.psnr_db = psnr(reference, test);
  r.ssim = ssim(reference, test);
  r.scielab_total = scielab(reference, test, samples_per_degree);
  return r;
}

}  // namespace mccsr

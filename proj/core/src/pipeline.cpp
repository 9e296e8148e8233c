#include "mccsr/pipeline.hpp"

#include <cmath>
#include <stdexcept>

#include "mccsr/parallel.hpp"
#include "mccsr/patch.hpp"
#include "mccsr/random.hpp"

namespace mccsr {
namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

// Scharr derivative responses of one plane patch, replicate boundary.
// horizontal: [3,0,-3; 10,0,-10; 3,0,-3]/16, vertical: its transpose.
void scharr_norms(const Plane& p, double* horizontal, double* vertical) {
  const int h = static_cast<int>(p.rows());
  const int w = static_cast<int>(p.cols());
  auto at = [&](int r, int c) {
    return p(std::min(std::max(r, 0), h - 1), std::min(std::max(c, 0), w - 1));
  };
  double sh = 0.0, sv = 0.0;
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const double gh = (3.0 * (at(r - 1, c - 1) - at(r - 1, c + 1)) +
                         10.0 * (at(r, c - 1) - at(r, c + 1)) +
                         3.0 * (at(r + 1, c - 1) - at(r + 1, c + 1))) /
                        16.0;
      const double gv = (3.0 * (at(r - 1, c - 1) - at(r + 1, c - 1)) +
                         10.0 * (at(r - 1, c) - at(r + 1, c)) +
                         3.0 * (at(r - 1, c + 1) - at(r + 1, c + 1))) /
                        16.0;
      sh += gh * gh;
      sv += gv * gv;
    }
  }
  *horizontal = std::sqrt(sh);
  *vertical = std::sqrt(sv);
}

}  // namespace

double beta_to_tau(double beta, const TauMap& map) {
  return map.tau_max / (1.0 + std::exp(-map.steepness * (beta - map.midpoint)));
}

double color_variance_beta(const Plane& y, const Plane& cb, const Plane& cr,
                           double normalizer) {
  require(normalizer > 0.0, "beta normalizer must be positive");
  require(y.rows() == cb.rows() && y.cols() == cb.cols() && y.rows() == cr.rows() &&
              y.cols() == cr.cols(),
          "beta: plane dimensions differ");
  double yh, yv, cbh, cbv, crh, crv;
  scharr_norms(y, &yh, &yv);
  scharr_norms(cb, &cbh, &cbv);
  scharr_norms(cr, &crh, &crv);
  constexpr double kDenominatorFloor = 1e-8;
  double beta = 0.0;
  if (yh >= kDenominatorFloor) beta += (cbh + crh) / yh;
  if (yv >= kDenominatorFloor) beta += (cbv + crv) / yv;
  return beta / (2.0 * normalizer);
}

PlanarImage super_resolve(const PlanarImage& lr_rgb, const DictionaryPair& dict,
                          const SrConfig& cfg, SrStats* stats) {
  require(lr_rgb.space() == ColorSpace::kRgb && lr_rgb.channels() == 3,
          "super_resolve expects an RGB image");
  require(cfg.scale >= 2, "scale must be >= 2");
  require(cfg.overlap < cfg.patch_side, "overlap must be below the patch side");
  if (dict.patch_side != cfg.patch_side || dict.scale != cfg.scale)
    throw std::invalid_argument("dictionary geometry does not match the config");
  const int side = cfg.patch_side;
  const Index plen = static_cast<Index>(side) * side;
  const Index flen = static_cast<Index>(dict.feature_count) * plen;
  if (dict.hr.rows() != plen || dict.lr.rows() != flen)
    throw std::invalid_argument("dictionary rows do not match the patch geometry");

  const double lambda = cfg.noise_sigma ? *cfg.noise_sigma / 10.0 : cfg.lambda;
  const double tau_scale = cfg.noise_sigma ? 0.5 : 1.0;

  const PlanarImage up = bicubic_resize(lr_rgb, cfg.scale);
  require(up.width() >= side && up.height() >= side,
          "upscaled image smaller than a patch");
  const PlanarImage ycbcr = rgb_to_ycbcr(up);

  std::array<FeatureStack, 3> features;
  for (int c = 0; c < 3; ++c) features[static_cast<size_t>(c)] = extract_feature_maps(up.plane(c));

  const EdgeOperator s = build_edge_operator(side);
  const PatchGrid grid = PatchGrid::create(up.width(), up.height(), side, cfg.overlap);
  const Index rows = static_cast<Index>(grid.row_offsets.size());
  const Index cols = static_cast<Index>(grid.col_offsets.size());
  const Index m = dict.lr.atoms();

  // Lipschitz bound for any tau: L <= 2*safety*(lam_base + tau*lam_coupling).
  const FactoredJointQuadratic probe(&dict.lr, &dict.hr, &s);
  const auto [lam_base, lam_coupling] = probe.extremal_curvatures();

  Matrix patches(3 * plen, grid.count());
  Vector betas(grid.count()), taus(grid.count()), discrepancies(grid.count());
  std::vector<std::uint8_t> nonconverged(static_cast<size_t>(grid.count()), 0);

  // One grid row per task; the warm-start chain restarts at each row, so the
  // output is independent of the thread count.
  parallel_for(rows, cfg.threads, [&](Index gr) {
    FactoredJointQuadratic model(&dict.lr, &dict.hr, &s);
    Vector x = Vector::Zero(3 * m);
    Vector y_l(3 * flen);
    const int top = grid.row_offsets[static_cast<size_t>(gr)];
    for (Index gc = 0; gc < cols; ++gc) {
      const Index idx = gr * cols + gc;
      const int left = grid.col_offsets[static_cast<size_t>(gc)];

      for (int c = 0; c < 3; ++c)
        y_l.segment(c * flen, flen) =
            feature_patch(features[static_cast<size_t>(c)], top, left, side);

      const double beta = color_variance_beta(
          ycbcr.plane(0).block(top, left, side, side),
          ycbcr.plane(1).block(top, left, side, side),
          ycbcr.plane(2).block(top, left, side, side), cfg.beta_normalizer);
      const double tau = cfg.force_tau
                             ? *cfg.force_tau
                             : tau_scale * beta_to_tau(beta, cfg.tau_map);

      model.set_patch_from_lr(tau, lambda, y_l);
      const double lipschitz =
          cfg.solver.lipschitz_safety * 2.0 * (lam_base + tau * lam_coupling);
      const SolverResult res = fista_solve_model(model, cfg.solver, x, lipschitz);
      x = res.x;
      if (!res.converged) nonconverged[static_cast<size_t>(idx)] = 1;

      std::array<Vector, 3> recon;
      for (int c = 0; c < 3; ++c) {
        recon[static_cast<size_t>(c)] =
            dict.hr.channel(c) * x.segment(c * m, m);
        const double mean = up.plane(c).block(top, left, side, side).mean();
        patches.col(idx).segment(c * plen, plen) =
            recon[static_cast<size_t>(c)].array() + mean;
      }
      betas[idx] = beta;
      taus[idx] = tau;
      discrepancies[idx] =
          cross_channel_edge_discrepancy(s, recon[0], recon[1], recon[2]);
    }
  });

  PlanarImage out = assemble_patches(patches, grid, ColorSpace::kRgb);
  for (int c = 0; c < 3; ++c)
    out.plane(c) = out.plane(c).min(255.0).max(0.0);

  if (stats) {
    stats->patch_count = grid.count();
    stats->beta_min = betas.minCoeff();
    stats->beta_max = betas.maxCoeff();
    stats->beta_mean = betas.mean();
    stats->tau_mean = taus.mean();
    stats->mean_edge_discrepancy = discrepancies.mean();
    stats->beta_histogram.fill(0);
    for (Index i = 0; i < betas.size(); ++i) {
      const double scaled = std::min(std::max(0.0, betas[i]) / 0.2, 9.0);
      ++stats->beta_histogram[static_cast<size_t>(scaled)];
    }
    stats->solver_nonconverged = 0;
    for (const auto flag : nonconverged) stats->solver_nonconverged += flag;
  }
  return out;
}

PlanarImage degrade(const PlanarImage& hr, int scale, int min_output_side) {
  require(scale >= 1, "scale must be >= 1");
  if (hr.width() % scale != 0 || hr.height() % scale != 0)
    throw std::invalid_argument("degrade: dimensions not divisible by scale");
  const int out_w = hr.width() / scale;
  const int out_h = hr.height() / scale;
  if (out_w < min_output_side || out_h < min_output_side)
    throw std::invalid_argument("degrade: output smaller than a patch");
  return bicubic_resize_to(hr, out_w, out_h);
}

TrainingSet build_training_set(const std::vector<PlanarImage>& hr_images,
                               const TrainingDataConfig& cfg, Index count,
                               std::uint64_t seed) {
  require(!hr_images.empty(), "no training images");
  require(count >= 1, "sample count must be >= 1");
  const int side = cfg.patch_side;
  const Index plen = static_cast<Index>(side) * side;

  struct PreparedImage {
    PlanarImage hr;
    std::array<FeatureStack, 3> features;
  };
  std::vector<PreparedImage> prepared;
  struct Location {
    int image;
    int top;
    int left;
  };
  std::vector<Location> qualifying;

  for (const PlanarImage& raw : hr_images) {
    require(raw.space() == ColorSpace::kRgb && raw.channels() == 3,
            "training images must be RGB");
    PreparedImage pi;
    pi.hr = crop_to_multiple(raw, cfg.scale);
    const PlanarImage lr = degrade(pi.hr, cfg.scale, side);
    const PlanarImage up = bicubic_resize_to(lr, pi.hr.width(), pi.hr.height());
    for (int c = 0; c < 3; ++c)
      pi.features[static_cast<size_t>(c)] = extract_feature_maps(up.plane(c));

    const int image_index = static_cast<int>(prepared.size());
    const int max_top = pi.hr.height() - side;
    const int max_left = pi.hr.width() - side;
    for (int top = 0; top <= max_top; ++top) {
      for (int left = 0; left <= max_left; ++left) {
        // pooled variance of the 3*side^2 HR samples
        double sum = 0.0, sq = 0.0;
        for (int c = 0; c < 3; ++c) {
          const auto block = pi.hr.plane(c).block(top, left, side, side);
          sum += block.sum();
          sq += block.square().sum();
        }
        const double n = 3.0 * static_cast<double>(plen);
        const double variance = sq / n - (sum / n) * (sum / n);
        if (variance >= cfg.variance_threshold)
          qualifying.push_back({image_index, top, left});
      }
    }
    prepared.push_back(std::move(pi));
  }
  if (qualifying.empty())
    throw std::invalid_argument("no texture-qualifying training patches");

  TrainingSet ts;
  ts.patch_side = side;
  ts.scale = cfg.scale;
  ts.feature_count = 4;
  ts.lr_features.resize(3 * 4 * plen, count);
  ts.hr_patches.resize(3 * plen, count);

  Rng rng(seed);
  for (Index i = 0; i < count; ++i) {
    const Location& loc =
        qualifying[static_cast<size_t>(rng.below(qualifying.size()))];
    const PreparedImage& pi = prepared[static_cast<size_t>(loc.image)];
    for (int c = 0; c < 3; ++c) {
      ts.lr_features.col(i).segment(c * 4 * plen, 4 * plen) = feature_patch(
          pi.features[static_cast<size_t>(c)], loc.top, loc.left, side);
      const auto block = pi.hr.plane(c).block(loc.top, loc.left, side, side);
      ts.hr_patches.col(i).segment(c * plen, plen) =
          (block - block.mean()).reshaped().matrix();
    }
  }
  return ts;
}

}  // namespace mccsr

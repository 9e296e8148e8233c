#include "mccsr/dictionary_learning.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "mccsr/parallel.hpp"
#include "mccsr/random.hpp"

namespace mccsr {
namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

void validate_training_set(const TrainingSet& ts) {
  require(ts.lr_features.cols() == ts.hr_patches.cols(),
          "training set: LR/HR sample counts differ");
  require(ts.lr_features.rows() % 3 == 0 && ts.hr_patches.rows() % 3 == 0,
          "training set: rows must stack three channels");
  require(ts.count() > 0, "training set: empty");
}

// Thin model over a shared quadratic; only the linear part varies per column.
struct SharedQuadraticModel {
  const Matrix* q;
  const Vector* b;
  double c;
  double lam;

  Index dim() const { return q->rows(); }
  void multiply(const Vector& x, Vector& out) const { out.noalias() = (*q) * x; }
  const Vector& linear_term() const { return *b; }
  double constant_term() const { return c; }
  double l1_term_weight() const { return lam; }
};

}  // namespace

SparseCodeBatch sparse_code_batch(const TrainingSet& ts,
                                  const BlockDiagonalDictionary& d_l,
                                  const BlockDiagonalDictionary& d_h,
                                  const EdgeOperator& s, double tau, double gamma,
                                  double lambda, const SolverConfig& solver_cfg,
                                  int threads, const Matrix* warm_start) {
  validate_training_set(ts);
  require(d_l.rows() == ts.lr_channel_rows(), "LR dictionary rows mismatch");
  require(d_h.rows() == ts.hr_channel_rows(), "HR dictionary rows mismatch");
  const Index n = ts.count();
  const Index m = d_l.atoms();
  if (warm_start) {
    require(warm_start->rows() == 3 * m && warm_start->cols() == n,
            "warm start has wrong shape");
  }

  // The quadratic part is shared by every column; only b and c vary.
  const JointQuadratic shared = build_training_quadratic(
      d_l, d_h, s, tau, gamma, lambda, Vector::Zero(3 * d_l.rows()),
      Vector::Zero(3 * d_h.rows()));
  const double lipschitz = estimate_lipschitz(shared.q_sym, solver_cfg.lipschitz_safety);

  SparseCodeBatch batch;
  batch.codes.resize(3 * m, n);
  batch.converged.assign(static_cast<size_t>(n), 0);

  parallel_for(
      n, threads,
      [&](Index i) {
        const Vector y_l = ts.lr_features.col(i);
        const Vector y_h = ts.hr_patches.col(i);
        const Vector b =
            gamma * d_l.apply_transpose(y_l) + (1.0 - gamma) * d_h.apply_transpose(y_h);
        const double c =
            0.5 * gamma * y_l.squaredNorm() + 0.5 * (1.0 - gamma) * y_h.squaredNorm();
        const SharedQuadraticModel model{&shared.q_sym, &b, c, lambda};
        const Vector x0 = warm_start ? Vector(warm_start->col(i))
                                     : Vector(Vector::Zero(3 * m));
        const SolverResult res = fista_solve_model(model, solver_cfg, x0, lipschitz);
        batch.codes.col(i) = res.x;
        batch.converged[static_cast<size_t>(i)] = res.converged ? 1 : 0;
      },
      16);
  return batch;
}

void unit_ball_column_descent(Matrix& d, const Matrix& gram, const Matrix& corr,
                              int max_sweeps, double tolerance) {
  require(gram.rows() == gram.cols() && gram.rows() == d.cols() &&
              corr.rows() == d.rows() && corr.cols() == d.cols(),
          "column descent: dimension mismatch");
  const Index m = d.cols();
  const auto objective = [&]() {
    return ((d * gram).cwiseProduct(d)).sum() - 2.0 * corr.cwiseProduct(d).sum();
  };
  double prev = objective();
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    for (Index k = 0; k < m; ++k) {
      const double pivot = gram(k, k);
      if (pivot <= 0.0) continue;  // unused atom, leave the column alone
      Vector u = (corr.col(k) - d * gram.col(k) + pivot * d.col(k)) / pivot;
      const double norm = u.norm();
      if (norm > 1.0) u /= norm;
      d.col(k) = u;
    }
    const double now = objective();
    if (std::abs(prev - now) < tolerance * std::max(1.0, std::abs(prev))) break;
    prev = now;
  }
}

Matrix learn_lr_dictionary(const Matrix& samples, const Matrix& codes,
                           const Matrix& initial, int max_sweeps, double tolerance) {
  require(samples.cols() == codes.cols(), "samples/codes count mismatch");
  require(initial.rows() == samples.rows() && initial.cols() == codes.rows(),
          "initial dictionary has wrong shape");
  Matrix d = initial;
  const Matrix gram = codes * codes.transpose();
  const Matrix corr = samples * codes.transpose();
  unit_ball_column_descent(d, gram, corr, max_sweeps, tolerance);
  return d;
}

AdmmWorkspace make_admm_workspace(const Matrix& codes, const Matrix& hr_patches,
                                  const EdgeOperator& s) {
  require(codes.cols() == hr_patches.cols(), "codes/patches count mismatch");
  require(hr_patches.rows() == 3 * s.matrix.rows(),
          "edge operator does not match HR patch length");
  AdmmWorkspace ws;
  ws.code_gram.noalias() = codes * codes.transpose();
  ws.hr_code_corr.noalias() = hr_patches * codes.transpose();
  ws.edge_coupling = edge_coupling_matrix(s);
  ws.sample_count = codes.cols();
  return ws;
}

AdmmTerms compute_admm_terms(const AdmmWorkspace& ws, const Matrix& slack,
                             const Matrix& dual, double rho, double gamma,
                             double tau) {
  require(rho > 0.0, "rho must be positive");
  require(gamma >= 0.0 && gamma <= 1.0, "gamma must lie in [0, 1]");
  require(slack.rows() == ws.hr_code_corr.rows() &&
              slack.cols() == ws.hr_code_corr.cols() && slack.rows() == dual.rows() &&
              slack.cols() == dual.cols(),
          "slack/dual have wrong shape");
  const double n = static_cast<double>(ws.sample_count);
  const double fit = (1.0 - gamma) / (2.0 * n);

  AdmmTerms terms;
  terms.gram = fit * ws.code_gram;
  terms.gram.diagonal().array() += 0.5 * rho;
  terms.target = fit * ws.hr_code_corr + 0.5 * rho * (slack - dual);
  if (tau != 0.0) {
    terms.target.noalias() -=
        (tau / n) * (ws.edge_coupling * (slack * ws.code_gram));
  }
  return terms;
}

AdmmTerms compute_admm_terms(const Matrix& codes, const Matrix& hr_patches,
                             const Matrix& slack, const Matrix& dual, double rho,
                             double gamma, double tau, const EdgeOperator& s) {
  return compute_admm_terms(make_admm_workspace(codes, hr_patches, s), slack, dual,
                            rho, gamma, tau);
}

BlockDiagonalDictionary admm_dictionary_step(const AdmmTerms& terms,
                                             const BlockDiagonalDictionary& current,
                                             int max_sweeps, double tolerance) {
  validate(current, "d_h");
  const Index m = current.atoms();
  const Index p = current.rows();
  require(terms.gram.rows() == 3 * m && terms.target.rows() == 3 * p &&
              terms.target.cols() == 3 * m,
          "ADMM terms do not match the dictionary shape");
  BlockDiagonalDictionary next = current;
  for (int c = 0; c < 3; ++c) {
    const Matrix gram_cc = terms.gram.block(c * m, c * m, m, m);
    const Matrix target_cc = terms.target.block(c * p, c * m, p, m);
    unit_ball_column_descent(next.channel(c), gram_cc, target_cc, max_sweeps,
                             tolerance);
  }
  return next;
}

Matrix admm_slack_step(const BlockDiagonalDictionary& d_h, const Matrix& dual,
                       const AdmmWorkspace& ws, double tau, double rho) {
  require(rho > 0.0, "rho must be positive");
  const Matrix dense = d_h.to_dense();
  require(dual.rows() == dense.rows() && dual.cols() == dense.cols(),
          "dual has wrong shape");
  Matrix slack = dense + dual;
  if (tau != 0.0) {
    const double n = static_cast<double>(ws.sample_count);
    // S'(I - Ps)S is the transpose of the stored coupling matrix.
    slack.noalias() -= (2.0 * tau / (n * rho)) *
                       (ws.edge_coupling.transpose() * (dense * ws.code_gram));
  }
  return slack;
}

Matrix admm_dual_step(const Matrix& dual, const BlockDiagonalDictionary& d_h,
                      const Matrix& slack) {
  const Matrix dense = d_h.to_dense();
  require(dual.rows() == dense.rows() && dual.cols() == dense.cols() &&
              slack.rows() == dense.rows() && slack.cols() == dense.cols(),
          "dual step: dimension mismatch");
  return dual + dense - slack;
}

namespace {

// HR subproblem objective up to a Dh-independent constant, via the workspace
// grams: (1-gamma)/(2N)||Yh - Dh X||^2 + (2 tau/N) Tr(X' Dh' M Dh X).
double hr_subproblem_value(const Matrix& dense_dict, const AdmmWorkspace& ws,
                           double gamma, double tau) {
  const double n = static_cast<double>(ws.sample_count);
  const Matrix dg = dense_dict * ws.code_gram;
  double value = ((1.0 - gamma) / (2.0 * n)) *
                 (dg.cwiseProduct(dense_dict).sum() -
                  2.0 * ws.hr_code_corr.cwiseProduct(dense_dict).sum());
  if (tau != 0.0) {
    value += (2.0 * tau / n) *
             ((ws.edge_coupling * dg).cwiseProduct(dense_dict)).sum();
  }
  return value;
}

}  // namespace

HrDictionaryResult learn_hr_dictionary(const TrainingSet& ts, const Matrix& codes,
                                       const EdgeOperator& s, const TrainConfig& cfg,
                                       const BlockDiagonalDictionary& init) {
  validate_training_set(ts);
  validate(init, "d_h init");
  require(codes.rows() == 3 * init.atoms(), "codes do not match the dictionary");
  require(codes.cols() == ts.count(), "codes do not match the training set");

  const AdmmWorkspace ws = make_admm_workspace(codes, ts.hr_patches, s);

  AdmmState state;
  state.dict = init;
  state.slack = init.to_dense();
  state.dual = Matrix::Zero(state.slack.rows(), state.slack.cols());
  state.rho = cfg.rho;

  HrDictionaryResult result;
  result.dict = init;
  double best_value = hr_subproblem_value(state.slack, ws, cfg.gamma, cfg.tau);

  Matrix prev_dense = init.to_dense();
  for (state.iteration = 1; state.iteration <= cfg.admm_max_iterations;
       ++state.iteration) {
    const AdmmTerms terms =
        compute_admm_terms(ws, state.slack, state.dual, state.rho, cfg.gamma, cfg.tau);
    state.dict = admm_dictionary_step(terms, state.dict, cfg.dict_sweep_limit,
                                      cfg.dict_sweep_tolerance);
    const Matrix dense = state.dict.to_dense();
    state.slack = admm_slack_step(state.dict, state.dual, ws, cfg.tau, state.rho);
    state.dual += dense - state.slack;

    const double value = hr_subproblem_value(dense, ws, cfg.gamma, cfg.tau);
    if (value < best_value) {
      best_value = value;
      result.dict = state.dict;
    }

    const double step_change = (dense - prev_dense).norm();
    result.primal_residual = (dense - state.slack).norm();
    result.iterations = state.iteration;
    prev_dense = dense;
    if (step_change < cfg.admm_tolerance &&
        result.primal_residual <= cfg.admm_tolerance) {
      result.converged = true;
      break;
    }
  }
  return result;
}

double eval_training_objective(const TrainingSet& ts,
                               const BlockDiagonalDictionary& d_l,
                               const BlockDiagonalDictionary& d_h,
                               const Matrix& codes, const EdgeOperator& s,
                               double tau, double gamma, double lambda) {
  validate_training_set(ts);
  const Index n = ts.count();
  const Index m = d_l.atoms();
  const Index q = d_l.rows();
  const Index p = d_h.rows();
  require(codes.rows() == 3 * m && codes.cols() == n, "codes have wrong shape");

  double value = 0.0;
  Matrix filtered(3 * p, n);
  for (int c = 0; c < 3; ++c) {
    const auto xc = codes.middleRows(c * m, m);
    value += 0.5 * gamma *
             (ts.lr_features.middleRows(c * q, q) - d_l.channel(c) * xc).squaredNorm();
    const Matrix hr = d_h.channel(c) * xc;
    value += 0.5 * (1.0 - gamma) *
             (ts.hr_patches.middleRows(c * p, p) - hr).squaredNorm();
    filtered.middleRows(c * p, p) = s.matrix * hr;
  }
  value += lambda * codes.lpNorm<1>();
  if (tau != 0.0) {
    const Matrix shifted = apply_channel_shift_transpose(filtered);
    value += 2.0 * tau *
             (filtered.squaredNorm() - filtered.cwiseProduct(shifted).sum());
  }
  return value / static_cast<double>(n);
}

namespace {

Vector normalized_or_probe(const Matrix& block, Index start_col) {
  const Index n = block.cols();
  for (Index probe = 0; probe < n; ++probe) {
    const Index i = (start_col + probe) % n;
    const double norm = block.col(i).norm();
    if (norm > 1e-12) return block.col(i) / norm;
  }
  throw std::invalid_argument("training set has no usable columns for init");
}

BlockDiagonalDictionary init_from_samples(const Matrix& stacked, Index channel_rows,
                                          int atoms, Rng& rng) {
  const Index n = stacked.cols();
  BlockDiagonalDictionary d;
  for (int c = 0; c < 3; ++c) {
    const Matrix block = stacked.middleRows(c * channel_rows, channel_rows);
    Matrix dict(channel_rows, atoms);
    // distinct sample indices per channel
    std::vector<Index> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    for (int k = 0; k < atoms; ++k) {
      const Index j = static_cast<Index>(rng.below(static_cast<std::uint64_t>(n - k)));
      std::swap(order[static_cast<size_t>(k)], order[static_cast<size_t>(k) + j]);
      dict.col(k) = normalized_or_probe(block, order[static_cast<size_t>(k)]);
    }
    d.channel(c) = std::move(dict);
  }
  return d;
}

}  // namespace

TrainResult joint_dictionary_learning(const TrainingSet& ts, const TrainConfig& cfg) {
  validate_training_set(ts);
  const Index n = ts.count();
  const int atoms = cfg.atoms_per_channel;
  require(atoms >= 1, "atom count must be >= 1");
  if (n < atoms)
    throw std::invalid_argument("need at least as many training samples as atoms");
  const Index p = ts.hr_channel_rows();
  require(p == static_cast<Index>(ts.patch_side) * ts.patch_side,
          "HR rows do not match patch_side");

  const EdgeOperator s = build_edge_operator(ts.patch_side);

  Rng rng(cfg.seed);
  TrainResult result;
  result.lr = init_from_samples(ts.lr_features, ts.lr_channel_rows(), atoms, rng);
  result.hr = init_from_samples(ts.hr_patches, p, atoms, rng);

  Matrix codes = Matrix::Zero(3 * atoms, n);
  bool have_codes = false;
  result.initial_objective = eval_training_objective(ts, result.lr, result.hr, codes,
                                                     s, cfg.tau, cfg.gamma, cfg.lambda);

  for (int outer = 0; outer < cfg.outer_iterations; ++outer) {
    OuterIterationTrace trace;

    SparseCodeBatch batch =
        sparse_code_batch(ts, result.lr, result.hr, s, cfg.tau, cfg.gamma, cfg.lambda,
                          cfg.solver, cfg.threads, have_codes ? &codes : nullptr);
    codes = std::move(batch.codes);
    have_codes = true;
    trace.after_coding = eval_training_objective(ts, result.lr, result.hr, codes, s,
                                                 cfg.tau, cfg.gamma, cfg.lambda);

    for (int c = 0; c < 3; ++c) {
      result.lr.channel(c) = learn_lr_dictionary(
          ts.lr_features.middleRows(c * ts.lr_channel_rows(), ts.lr_channel_rows()),
          codes.middleRows(c * atoms, atoms), result.lr.channel(c),
          cfg.dict_sweep_limit, cfg.dict_sweep_tolerance);
    }
    trace.after_lr_update = eval_training_objective(ts, result.lr, result.hr, codes,
                                                    s, cfg.tau, cfg.gamma, cfg.lambda);

    const HrDictionaryResult hr = learn_hr_dictionary(ts, codes, s, cfg, result.hr);
    result.hr = hr.dict;
    trace.admm_iterations = hr.iterations;
    trace.admm_primal_residual = hr.primal_residual;
    trace.admm_converged = hr.converged;
    trace.after_hr_update = eval_training_objective(ts, result.lr, result.hr, codes,
                                                    s, cfg.tau, cfg.gamma, cfg.lambda);

    // Replace atoms no sample uses by the worst-reconstructed samples; their
    // code rows are zero so the objective is unaffected.
    std::vector<std::pair<int, Index>> dead;  // (channel, atom)
    for (int c = 0; c < 3; ++c) {
      for (Index k = 0; k < atoms; ++k) {
        if (codes.row(c * atoms + k).lpNorm<Eigen::Infinity>() == 0.0)
          dead.emplace_back(c, k);
      }
    }
    if (!dead.empty()) {
      Vector residual = Vector::Zero(n);
      for (int c = 0; c < 3; ++c) {
        const auto xc = codes.middleRows(c * atoms, atoms);
        residual += 0.5 * cfg.gamma *
                    (ts.lr_features.middleRows(c * ts.lr_channel_rows(),
                                               ts.lr_channel_rows()) -
                     result.lr.channel(c) * xc)
                        .colwise()
                        .squaredNorm()
                        .transpose();
        residual += 0.5 * (1.0 - cfg.gamma) *
                    (ts.hr_patches.middleRows(c * p, p) - result.hr.channel(c) * xc)
                        .colwise()
                        .squaredNorm()
                        .transpose();
      }
      std::vector<Index> order(static_cast<size_t>(n));
      std::iota(order.begin(), order.end(), Index{0});
      std::sort(order.begin(), order.end(),
                [&](Index a, Index b) { return residual[a] > residual[b]; });
      for (size_t i = 0; i < dead.size(); ++i) {
        const Index sample = order[i % order.size()];
        const auto [c, k] = dead[i];
        result.lr.channel(c).col(k) = normalized_or_probe(
            ts.lr_features.middleRows(c * ts.lr_channel_rows(), ts.lr_channel_rows()),
            sample);
        result.hr.channel(c).col(k) =
            normalized_or_probe(ts.hr_patches.middleRows(c * p, p), sample);
      }
    }

    result.trace.push_back(trace);
  }
  return result;
}

}  // namespace mccsr

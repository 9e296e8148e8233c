#ifndef MCCSR_DICTIONARY_LEARNING_HPP
#define MCCSR_DICTIONARY_LEARNING_HPP

#include <cstdint>
#include <vector>

#include "mccsr/operators.hpp"
#include "mccsr/solver.hpp"
#include "mccsr/types.hpp"

namespace mccsr {

/// Paired training data: channel-stacked LR feature vectors and
/// mean-subtracted HR patches, one sample per column.
struct TrainingSet {
  Matrix lr_features;  // 3q x N
  Matrix hr_patches;   // 3p x N
  int patch_side = 5;
  int scale = 2;
  int feature_count = 4;

  Index count() const { return lr_features.cols(); }
  Index lr_channel_rows() const { return lr_features.rows() / 3; }
  Index hr_channel_rows() const { return hr_patches.rows() / 3; }
};

struct TrainConfig {
  int atoms_per_channel = 512;
  double lambda = 0.1;
  double tau = 0.01;   // training-time coupling weight
  double gamma = 0.5;  // LR/HR reconstruction balance
  double rho = 1.0;    // ADMM penalty
  int outer_iterations = 20;
  double admm_tolerance = 1e-4;
  int admm_max_iterations = 100;
  std::uint64_t seed = 0;
  int threads = 0;
  SolverConfig solver;
  int dict_sweep_limit = 50;
  double dict_sweep_tolerance = 1e-8;
};

struct SparseCodeBatch {
  Matrix codes;  // 3m x N
  std::vector<std::uint8_t> converged;
};

/// Codes every training column against the current dictionaries; the shared
/// quadratic is built once and columns are solved independently in parallel.
SparseCodeBatch sparse_code_batch(const TrainingSet& ts,
                                  const BlockDiagonalDictionary& d_l,
                                  const BlockDiagonalDictionary& d_h,
                                  const EdgeOperator& s, double tau, double gamma,
                                  double lambda, const SolverConfig& solver_cfg = {},
                                  int threads = 1, const Matrix* warm_start = nullptr);

/// min_D Tr(D*gram*D') - 2*Tr(corr*D') subject to unit-ball columns, by
/// Gauss-Seidel column sweeps from the current d. Columns whose gram diagonal
/// vanishes are left unchanged. The objective never increases.
void unit_ball_column_descent(Matrix& d, const Matrix& gram, const Matrix& corr,
                              int max_sweeps, double tolerance);

/// One-channel LR dictionary update: min ||samples - D*codes||_F^2 with
/// unit-ball columns, warm-started from `initial`.
Matrix learn_lr_dictionary(const Matrix& samples, const Matrix& codes,
                           const Matrix& initial, int max_sweeps = 50,
                           double tolerance = 1e-8);

/// Quantities fixed across ADMM iterations while the codes are fixed.
struct AdmmWorkspace {
  Matrix code_gram;      // X X'
  Matrix hr_code_corr;   // Y_h X'
  Matrix edge_coupling;  // S'(I - Ps')S
  Index sample_count = 0;
};

AdmmWorkspace make_admm_workspace(const Matrix& codes, const Matrix& hr_patches,
                                  const EdgeOperator& s);

/// Coefficients of the dictionary-step objective Tr(D F D') - 2 Tr(E D'):
///   F = ((1-gamma)/2N) XX' + (rho/2) I
///   E = ((1-gamma)/2N) Y_h X' + (rho/2)(Z - U) - (tau/N) S'(I-Ps')S Z XX'
struct AdmmTerms {
  Matrix target;  // E, 3p x 3m
  Matrix gram;    // F, 3m x 3m, symmetric PSD
};

AdmmTerms compute_admm_terms(const AdmmWorkspace& ws, const Matrix& slack,
                             const Matrix& dual, double rho, double gamma,
                             double tau);
/// Convenience overload building the workspace internally.
AdmmTerms compute_admm_terms(const Matrix& codes, const Matrix& hr_patches,
                             const Matrix& slack, const Matrix& dual, double rho,
                             double gamma, double tau, const EdgeOperator& s);

/// ADMM step 1: per-channel constrained quadratic solve on the diagonal
/// blocks of (E, F), warm-started from the current dictionary.
BlockDiagonalDictionary admm_dictionary_step(const AdmmTerms& terms,
                                             const BlockDiagonalDictionary& current,
                                             int max_sweeps = 50,
                                             double tolerance = 1e-8);

/// ADMM step 2, closed form:
///   Z = Dh + U - (2*tau/(N*rho)) S'(I - Ps) S Dh XX'.
Matrix admm_slack_step(const BlockDiagonalDictionary& d_h, const Matrix& dual,
                       const AdmmWorkspace& ws, double tau, double rho);

/// ADMM step 3: U + Dh - Z.
Matrix admm_dual_step(const Matrix& dual, const BlockDiagonalDictionary& d_h,
                      const Matrix& slack);

/// ADMM iterate for the HR dictionary subproblem.
struct AdmmState {
  BlockDiagonalDictionary dict;
  Matrix slack;  // Z
  Matrix dual;   // U (scaled)
  double rho = 1.0;
  int iteration = 0;
};

struct HrDictionaryResult {
  BlockDiagonalDictionary dict;
  int iterations = 0;
  double primal_residual = 0;  // ||Dh - Z||_F at the last iteration
  bool converged = false;
};

/// Full ADMM solve of the HR dictionary subproblem with the codes fixed.
/// Returns the feasible iterate with the best subproblem objective.
HrDictionaryResult learn_hr_dictionary(const TrainingSet& ts, const Matrix& codes,
                                       const EdgeOperator& s, const TrainConfig& cfg,
                                       const BlockDiagonalDictionary& init);

/// The full training objective at (d_l, d_h, codes):
/// gamma/(2N)||Yl - Dl X||^2 + (1-gamma)/(2N)||Yh - Dh X||^2 + lambda/N ||X||_1
/// + (2 tau/N) Tr(X' Dh' S'(I-Ps')S Dh X).
double eval_training_objective(const TrainingSet& ts,
                               const BlockDiagonalDictionary& d_l,
                               const BlockDiagonalDictionary& d_h,
                               const Matrix& codes, const EdgeOperator& s,
                               double tau, double gamma, double lambda);

struct OuterIterationTrace {
  double after_coding = 0;
  double after_lr_update = 0;
  double after_hr_update = 0;
  int admm_iterations = 0;
  double admm_primal_residual = 0;
  bool admm_converged = false;
};

struct TrainResult {
  BlockDiagonalDictionary lr;
  BlockDiagonalDictionary hr;
  double initial_objective = 0;  // at the initial dictionaries with zero codes
  std::vector<OuterIterationTrace> trace;
};

/// Alternating minimization: batch sparse coding, per-channel LR dictionary
/// update, ADMM HR dictionary update. Dictionaries are initialized from
/// randomly selected (seeded) training pairs, column-normalized. Atoms whose
/// code row is all-zero are replaced by the worst-reconstructed samples.
TrainResult joint_dictionary_learning(const TrainingSet& ts, const TrainConfig& cfg);

/// Learned dictionaries plus the geometry needed to apply them.
struct DictionaryPair {
  BlockDiagonalDictionary lr;
  BlockDiagonalDictionary hr;
  int patch_side = 5;
  int scale = 2;
  int feature_count = 4;
};

}  // namespace mccsr

#endif

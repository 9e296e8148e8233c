#ifndef MCCSR_SOLVER_HPP
#define MCCSR_SOLVER_HPP

#include <cmath>
#include <functional>

#include "mccsr/operators.hpp"
#include "mccsr/types.hpp"

namespace mccsr {

struct SolverConfig {
  int max_iterations = 300;
  double tolerance = 1e-7;       // relative objective change
  double lipschitz_safety = 1.05;
};

struct SolverResult {
  Vector x;
  double objective = 0;
  int iterations = 0;
  bool converged = false;
};

/// sign(v) * max(|v| - theta, 0); theta must be nonnegative.
double soft_threshold(double v, double theta);
void soft_threshold_in_place(Vector& v, double theta);

/// Largest eigenvalue of a symmetric PSD operator by power iteration with a
/// fixed seeded start vector. Runs at least min_iterations and stops once the
/// relative eigenvalue change drops below tolerance.
double spectral_radius_symmetric(
    Index dim, const std::function<void(const Vector&, Vector&)>& apply,
    int min_iterations = 100, double tolerance = 1e-10, int max_iterations = 10000);

/// Lipschitz constant of the gradient 2*Q_sym*x - b: safety * 2 * lambda_max.
double estimate_lipschitz(const Matrix& q_sym, double safety = 1.05);

/// FISTA on any quadratic-plus-l1 model exposing:
///   dim(), multiply(x, out) = Q_sym*x, linear_term() = b,
///   constant_term() = c, l1_term_weight() = lambda.
/// Gradient 2*Q_sym*x - b, step 1/L, momentum restart when the objective
/// increases; converged after 3 consecutive relative changes below tolerance.
/// Returns the best iterate seen (x0 included).
template <class Model>
SolverResult fista_solve_model(const Model& model, const SolverConfig& cfg,
                               const Vector& x0, double lipschitz) {
  const Index n = model.dim();
  const double lam = model.l1_term_weight();
  const double big_l = std::max(lipschitz, 1e-12);
  const double step = 1.0 / big_l;

  Vector qx(n), grad(n);
  const auto objective = [&](const Vector& v) {
    model.multiply(v, qx);
    return v.dot(qx) - model.linear_term().dot(v) + model.constant_term() +
           lam * v.lpNorm<1>();
  };

  Vector x_prev = x0;
  Vector y = x0;
  Vector x(n);
  double t = 1.0;
  double f_prev = objective(x0);

  SolverResult best;
  best.x = x0;
  best.objective = f_prev;

  int small_streak = 0;
  int iter = 0;
  for (iter = 1; iter <= cfg.max_iterations; ++iter) {
    model.multiply(y, qx);
    grad = 2.0 * qx - model.linear_term();
    x = y - step * grad;
    soft_threshold_in_place(x, lam * step);
    double f = objective(x);

    if (f > f_prev) {
      // objective went up: drop momentum and redo the step from x_prev
      y = x_prev;
      t = 1.0;
      model.multiply(y, qx);
      grad = 2.0 * qx - model.linear_term();
      x = y - step * grad;
      soft_threshold_in_place(x, lam * step);
      f = objective(x);
    }

    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    y = x + ((t - 1.0) / t_next) * (x - x_prev);
    t = t_next;

    if (f < best.objective) {
      best.objective = f;
      best.x = x;
    }

    const double rel_change = std::abs(f - f_prev) / std::max(1.0, std::abs(f_prev));
    x_prev = x;
    f_prev = f;
    if (rel_change < cfg.tolerance) {
      if (++small_streak >= 3) {
        best.converged = true;
        break;
      }
    } else {
      small_streak = 0;
    }
  }
  best.iterations = std::min(iter, cfg.max_iterations);
  return best;
}

SolverResult fista_solve(const JointQuadratic& q, const SolverConfig& cfg = {});
SolverResult fista_solve(const JointQuadratic& q, const SolverConfig& cfg,
                         const Vector& x0);

/// Global minimizer by sign-pattern enumeration; dimension capped at 12.
/// Every pattern's stationary point is evaluated against the true objective,
/// so the returned value is exact up to linear-solve roundoff.
SolverResult brute_force_l1_qp(const JointQuadratic& q);

/// min_x 0.5*||y - Dx||^2 + lambda*||x||_1 via the quadratic form
/// Q = 0.5*D'D, b = D'y, c = 0.5*||y||^2.
SolverResult lasso_solve(const Matrix& d, const Vector& y, double lambda,
                         const SolverConfig& cfg = {});

}  // namespace mccsr

#endif

#include "mccsr/solver.hpp"

#include <Eigen/Dense>
#include <stdexcept>

#include "mccsr/random.hpp"

namespace mccsr {

double soft_threshold(double v, double theta) {
  if (theta < 0.0) throw std::invalid_argument("soft_threshold: negative threshold");
  if (v > theta) return v - theta;
  if (v < -theta) return v + theta;
  return 0.0;
}

void soft_threshold_in_place(Vector& v, double theta) {
  if (theta < 0.0) throw std::invalid_argument("soft_threshold: negative threshold");
  for (Index i = 0; i < v.size(); ++i) {
    const double a = v[i];
    v[i] = a > theta ? a - theta : (a < -theta ? a + theta : 0.0);
  }
}

double spectral_radius_symmetric(
    Index dim, const std::function<void(const Vector&, Vector&)>& apply,
    int min_iterations, double tolerance, int max_iterations) {
  if (dim <= 0) return 0.0;
  Rng rng(0x9e3779b97f4a7c15ull);
  Vector v(dim);
  for (Index i = 0; i < dim; ++i) v[i] = rng.uniform(-1.0, 1.0);
  v.normalize();

  Vector w(dim);
  double lambda = 0.0;
  for (int it = 0; it < max_iterations; ++it) {
    apply(v, w);
    const double norm = w.norm();
    if (norm <= 0.0) return 0.0;  // v in the null space: operator was zero on it
    const double next = v.dot(w);
    w /= norm;
    const double change = std::abs(next - lambda) / std::max(1.0, std::abs(next));
    v.swap(w);
    lambda = next;
    if (it + 1 >= min_iterations && change < tolerance) break;
  }
  return std::max(lambda, 0.0);
}

double estimate_lipschitz(const Matrix& q_sym, double safety) {
  if (!q_sym.allFinite())
    throw std::invalid_argument("estimate_lipschitz: non-finite entries");
  const auto apply = [&](const Vector& x, Vector& out) { out.noalias() = q_sym * x; };
  return safety * 2.0 * spectral_radius_symmetric(q_sym.rows(), apply);
}

SolverResult fista_solve(const JointQuadratic& q, const SolverConfig& cfg) {
  return fista_solve(q, cfg, Vector::Zero(q.dim()));
}

SolverResult fista_solve(const JointQuadratic& q, const SolverConfig& cfg,
                         const Vector& x0) {
  if (x0.size() != q.dim())
    throw std::invalid_argument("fista_solve: x0 has wrong length");
  if (!x0.allFinite()) throw std::invalid_argument("fista_solve: x0 not finite");
  const double lip = estimate_lipschitz(q.q_sym, cfg.lipschitz_safety);
  return fista_solve_model(q, cfg, x0, lip);
}

SolverResult brute_force_l1_qp(const JointQuadratic& q) {
  const Index n = q.dim();
  if (n > 12) throw std::invalid_argument("brute_force_l1_qp: dimension > 12");

  SolverResult best;
  best.x = Vector::Zero(n);
  best.objective = q.objective(best.x);
  best.converged = true;

  std::vector<int> sign(static_cast<size_t>(n), 0);
  long patterns = 1;
  for (Index i = 0; i < n; ++i) patterns *= 3;

  std::vector<Index> support;
  for (long code = 1; code < patterns; ++code) {
    long rest = code;
    support.clear();
    for (Index i = 0; i < n; ++i) {
      const int digit = static_cast<int>(rest % 3);
      rest /= 3;
      sign[static_cast<size_t>(i)] = digit == 2 ? -1 : digit;  // {0, +1, -1}
      if (digit != 0) support.push_back(i);
    }
    const Index k = static_cast<Index>(support.size());
    if (k == 0) continue;

    // Stationarity on the support: 2*Q_AA x_A = b_A - lambda*sigma_A.
    Matrix qaa(k, k);
    Vector rhs(k);
    for (Index a = 0; a < k; ++a) {
      for (Index b = 0; b < k; ++b) qaa(a, b) = 2.0 * q.q_sym(support[a], support[b]);
      rhs[a] = q.linear[support[a]] -
               q.l1_weight * sign[static_cast<size_t>(support[a])];
    }
    const Vector xa = qaa.fullPivLu().solve(rhs);
    if (!xa.allFinite()) continue;
    if ((qaa * xa - rhs).norm() > 1e-8 * (1.0 + rhs.norm())) continue;  // singular

    Vector x = Vector::Zero(n);
    for (Index a = 0; a < k; ++a) x[support[a]] = xa[a];
    const double f = q.objective(x);
    if (f < best.objective) {
      best.objective = f;
      best.x = x;
    }
  }
  best.iterations = static_cast<int>(std::min<long>(patterns, 1 << 30));
  return best;
}

SolverResult lasso_solve(const Matrix& d, const Vector& y, double lambda,
                         const SolverConfig& cfg) {
  if (d.rows() != y.size())
    throw std::invalid_argument("lasso_solve: dimension mismatch");
  JointQuadratic q;
  q.q_sym.noalias() = 0.5 * (d.transpose() * d);
  q.q_sym = 0.5 * (q.q_sym + q.q_sym.transpose()).eval();
  q.linear.noalias() = d.transpose() * y;
  q.constant = 0.5 * y.squaredNorm();
  q.l1_weight = lambda;
  return fista_solve(q, cfg);
}

}  // namespace mccsr

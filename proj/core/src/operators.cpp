#include "mccsr/operators.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "mccsr/solver.hpp"

namespace mccsr {
namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

void validate(const BlockDiagonalDictionary& d, const char* name) {
  if (d.red.rows() != d.green.rows() || d.red.rows() != d.blue.rows() ||
      d.red.cols() != d.green.cols() || d.red.cols() != d.blue.cols() ||
      d.red.size() == 0) {
    throw std::invalid_argument(std::string(name) +
                                ": channel blocks must share nonzero dimensions");
  }
}

Matrix BlockDiagonalDictionary::to_dense() const {
  const Index r = rows(), m = atoms();
  Matrix d = Matrix::Zero(3 * r, 3 * m);
  d.block(0, 0, r, m) = red;
  d.block(r, m, r, m) = green;
  d.block(2 * r, 2 * m, r, m) = blue;
  return d;
}

Vector BlockDiagonalDictionary::apply(const Vector& x) const {
  const Index r = rows(), m = atoms();
  require(x.size() == 3 * m, "dictionary apply: dimension mismatch");
  Vector out(3 * r);
  out.segment(0, r).noalias() = red * x.segment(0, m);
  out.segment(r, r).noalias() = green * x.segment(m, m);
  out.segment(2 * r, r).noalias() = blue * x.segment(2 * m, m);
  return out;
}

Vector BlockDiagonalDictionary::apply_transpose(const Vector& v) const {
  const Index r = rows(), m = atoms();
  require(v.size() == 3 * r, "dictionary apply_transpose: dimension mismatch");
  Vector out(3 * m);
  out.segment(0, m).noalias() = red.transpose() * v.segment(0, r);
  out.segment(m, m).noalias() = green.transpose() * v.segment(r, r);
  out.segment(2 * m, m).noalias() = blue.transpose() * v.segment(2 * r, r);
  return out;
}

double BlockDiagonalDictionary::max_column_norm() const {
  double best = 0.0;
  for (int c = 0; c < 3; ++c) {
    const Matrix& d = channel(c);
    for (Index k = 0; k < d.cols(); ++k) best = std::max(best, d.col(k).norm());
  }
  return best;
}

EdgeOperator build_edge_operator(int patch_side) {
  if (patch_side < 2) throw std::invalid_argument("edge operator needs patch_side >= 2");
  const int n = patch_side;
  const Index p = static_cast<Index>(n) * n;
  auto vec_index = [n](int r, int c) { return static_cast<Index>(c) * n + r; };
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(p) * 5);
  const int dr[4] = {-1, 1, 0, 0};
  const int dc[4] = {0, 0, -1, 1};
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const Index row = vec_index(r, c);
      trips.emplace_back(row, vec_index(r, c), 4.0);
      for (int k = 0; k < 4; ++k) {
        const int rr = std::min(std::max(r + dr[k], 0), n - 1);
        const int cc = std::min(std::max(c + dc[k], 0), n - 1);
        trips.emplace_back(row, vec_index(rr, cc), -1.0);
      }
    }
  }
  EdgeOperator op;
  op.patch_side = patch_side;
  op.matrix.resize(p, p);
  op.matrix.setFromTriplets(trips.begin(), trips.end());
  return op;
}

Matrix apply_channel_shift(const Matrix& v) {
  require(v.rows() % 3 == 0, "channel shift: rows not divisible by 3");
  const Index n = v.rows() / 3;
  Matrix out(v.rows(), v.cols());
  out.topRows(n) = v.bottomRows(n);
  out.middleRows(n, 2 * n) = v.topRows(2 * n);
  return out;
}

Matrix apply_channel_shift_transpose(const Matrix& v) {
  require(v.rows() % 3 == 0, "channel shift: rows not divisible by 3");
  const Index n = v.rows() / 3;
  Matrix out(v.rows(), v.cols());
  out.topRows(2 * n) = v.bottomRows(2 * n);
  out.bottomRows(n) = v.topRows(n);
  return out;
}

namespace {

// Dense 3p x 3m stack of the per-channel filtered dictionaries S*Dh_c,
// laid out block-diagonally.
Matrix filtered_hr_stack(const BlockDiagonalDictionary& d_h, const EdgeOperator& s) {
  const Index p = d_h.rows(), m = d_h.atoms();
  require(s.matrix.rows() == p, "edge operator does not match HR patch length");
  Matrix t = Matrix::Zero(3 * p, 3 * m);
  for (int c = 0; c < 3; ++c)
    t.block(c * p, c * m, p, m) = s.matrix * d_h.channel(c);
  return t;
}

Matrix block_diag_gram_half(const BlockDiagonalDictionary& d) {
  const Index m = d.atoms();
  Matrix q = Matrix::Zero(3 * m, 3 * m);
  for (int c = 0; c < 3; ++c) {
    q.block(c * m, c * m, m, m).noalias() =
        0.5 * d.channel(c).transpose() * d.channel(c);
  }
  return q;
}

}  // namespace

JointQuadratic build_joint_quadratic(const BlockDiagonalDictionary& d_l,
                                     const BlockDiagonalDictionary& d_h,
                                     const EdgeOperator& s, double tau,
                                     double lambda, const Vector& y_l) {
  validate(d_l, "d_l");
  validate(d_h, "d_h");
  require(d_l.atoms() == d_h.atoms(), "LR/HR atom counts differ");
  require(y_l.size() == 3 * d_l.rows(), "y_l length does not match LR dictionary");

  JointQuadratic q;
  Matrix quad = block_diag_gram_half(d_l);
  if (tau != 0.0) {
    const Matrix t = filtered_hr_stack(d_h, s);
    const Matrix shifted = apply_channel_shift_transpose(t);
    quad.noalias() += 2.0 * tau * (t.transpose() * t);
    quad.noalias() -= 2.0 * tau * (t.transpose() * shifted);
  }
  q.q_sym = 0.5 * (quad + quad.transpose());
  q.linear = d_l.apply_transpose(y_l);
  q.constant = 0.5 * y_l.squaredNorm();
  q.l1_weight = lambda;
  return q;
}

JointQuadratic build_training_quadratic(const BlockDiagonalDictionary& d_l,
                                        const BlockDiagonalDictionary& d_h,
                                        const EdgeOperator& s, double tau,
                                        double gamma, double lambda,
                                        const Vector& y_l, const Vector& y_h) {
  validate(d_l, "d_l");
  validate(d_h, "d_h");
  require(gamma >= 0.0 && gamma <= 1.0, "gamma must lie in [0, 1]");
  require(d_l.atoms() == d_h.atoms(), "LR/HR atom counts differ");
  require(y_l.size() == 3 * d_l.rows(), "y_l length does not match LR dictionary");
  require(y_h.size() == 3 * d_h.rows(), "y_h length does not match HR dictionary");

  JointQuadratic q;
  Matrix quad = (2.0 * gamma) * block_diag_gram_half(d_l);
  quad += (2.0 * (1.0 - gamma)) * block_diag_gram_half(d_h);
  quad *= 0.5;  // gamma/2 * Dl'Dl + (1-gamma)/2 * Dh'Dh
  if (tau != 0.0) {
    const Matrix t = filtered_hr_stack(d_h, s);
    const Matrix shifted = apply_channel_shift_transpose(t);
    quad.noalias() += 2.0 * tau * (t.transpose() * t);
    quad.noalias() -= 2.0 * tau * (t.transpose() * shifted);
  }
  q.q_sym = 0.5 * (quad + quad.transpose());
  q.linear = gamma * d_l.apply_transpose(y_l) + (1.0 - gamma) * d_h.apply_transpose(y_h);
  q.constant = 0.5 * gamma * y_l.squaredNorm() + 0.5 * (1.0 - gamma) * y_h.squaredNorm();
  q.l1_weight = lambda;
  return q;
}

double eval_color_cost(const Vector& x, const Vector& y_l,
                       const BlockDiagonalDictionary& d_l,
                       const BlockDiagonalDictionary& d_h, const EdgeOperator& s,
                       double lambda, double tau) {
  validate(d_l, "d_l");
  validate(d_h, "d_h");
  const Index m = d_l.atoms();
  const Index qrows = d_l.rows();
  require(x.size() == 3 * m, "x length does not match dictionaries");
  require(y_l.size() == 3 * qrows, "y_l length does not match LR dictionary");

  double cost = 0.0;
  std::array<Vector, 3> edges;
  for (int c = 0; c < 3; ++c) {
    const Vector xc = x.segment(c * m, m);
    const Vector residual = y_l.segment(c * qrows, qrows) - d_l.channel(c) * xc;
    cost += 0.5 * residual.squaredNorm() + lambda * xc.lpNorm<1>();
    edges[static_cast<size_t>(c)] = s.matrix * (d_h.channel(c) * xc);
  }
  cost += tau * ((edges[0] - edges[1]).squaredNorm() +
                 (edges[1] - edges[2]).squaredNorm() +
                 (edges[2] - edges[0]).squaredNorm());
  return cost;
}

double cross_channel_edge_discrepancy(const EdgeOperator& s, const Vector& patch_r,
                                      const Vector& patch_g, const Vector& patch_b) {
  const Vector er = s.matrix * patch_r;
  const Vector eg = s.matrix * patch_g;
  const Vector eb = s.matrix * patch_b;
  return (er - eg).squaredNorm() + (eg - eb).squaredNorm() + (eb - er).squaredNorm();
}

Matrix edge_coupling_matrix(const EdgeOperator& s) {
  const Index p = s.matrix.rows();
  const Matrix gram = Matrix(s.matrix.transpose() * s.matrix);
  Matrix m = Matrix::Zero(3 * p, 3 * p);
  for (int c = 0; c < 3; ++c) m.block(c * p, c * p, p, p) = gram;
  // S'(I - Ps')S: the shift places -S'S on blocks (0,1), (1,2), (2,0).
  m.block(0, p, p, p) -= gram;
  m.block(p, 2 * p, p, p) -= gram;
  m.block(2 * p, 0, p, p) -= gram;
  return m;
}

FactoredJointQuadratic::FactoredJointQuadratic(const BlockDiagonalDictionary* d_l,
                                               const BlockDiagonalDictionary* d_h,
                                               const EdgeOperator* s)
    : d_l_(d_l), d_h_(d_h), s_(s) {
  validate(*d_l, "d_l");
  validate(*d_h, "d_h");
  require(d_l->atoms() == d_h->atoms(), "LR/HR atom counts differ");
  require(s->matrix.rows() == d_h->rows(), "edge operator does not match HR rows");
  linear_ = Vector::Zero(dim());
  hr_scratch_.resize(3 * d_h->rows());
  hr_scratch2_.resize(3 * d_h->rows());
  out_scratch_.resize(dim());
}

void FactoredJointQuadratic::set_patch(double tau, double lambda, Vector b,
                                       double constant) {
  require(b.size() == dim(), "linear term has wrong length");
  tau_ = tau;
  l1_weight_ = lambda;
  linear_ = std::move(b);
  constant_ = constant;
}

void FactoredJointQuadratic::set_patch_from_lr(double tau, double lambda,
                                               const Vector& y_l) {
  set_patch(tau, lambda, d_l_->apply_transpose(y_l), 0.5 * y_l.squaredNorm());
}

void FactoredJointQuadratic::multiply_base(const Vector& x, Vector& out) const {
  const Index m = d_l_->atoms(), q = d_l_->rows();
  out.resize(dim());
  Vector tmp(q);
  for (int c = 0; c < 3; ++c) {
    tmp.noalias() = d_l_->channel(c) * x.segment(c * m, m);
    out.segment(c * m, m).noalias() = 0.5 * (d_l_->channel(c).transpose() * tmp);
  }
}

void FactoredJointQuadratic::multiply_coupling(const Vector& x, Vector& out) const {
  const Index m = d_h_->atoms(), p = d_h_->rows();
  out.resize(dim());
  // v = S*Dh*x per channel
  for (int c = 0; c < 3; ++c) {
    hr_scratch_.segment(c * p, p).noalias() =
        s_->matrix * (d_h_->channel(c) * x.segment(c * m, m));
  }
  // w = v - (Ps*v + Ps'*v)/2; Ps maps (r,g,b)->(b,r,g)
  auto v = [&](int c) { return hr_scratch_.segment(c * p, p); };
  hr_scratch2_.segment(0, p) = v(0) - 0.5 * (v(2) + v(1));
  hr_scratch2_.segment(p, p) = v(1) - 0.5 * (v(0) + v(2));
  hr_scratch2_.segment(2 * p, p) = v(2) - 0.5 * (v(1) + v(0));
  for (int c = 0; c < 3; ++c) {
    out.segment(c * m, m).noalias() =
        2.0 * (d_h_->channel(c).transpose() *
               (s_->matrix.transpose() * hr_scratch2_.segment(c * p, p)));
  }
}

void FactoredJointQuadratic::multiply(const Vector& x, Vector& out) const {
  multiply_base(x, out);
  if (tau_ != 0.0) {
    multiply_coupling(x, out_scratch_);
    out += tau_ * out_scratch_;
  }
}

std::pair<double, double> FactoredJointQuadratic::extremal_curvatures() const {
  const auto base = [this](const Vector& x, Vector& out) { multiply_base(x, out); };
  const auto coupling = [this](const Vector& x, Vector& out) {
    multiply_coupling(x, out);
  };
  return {spectral_radius_symmetric(dim(), base),
          spectral_radius_symmetric(dim(), coupling)};
}

}  // namespace mccsr

#ifndef MCCSR_OPERATORS_HPP
#define MCCSR_OPERATORS_HPP

#include <utility>

#include "mccsr/types.hpp"

namespace mccsr {

/// Three per-channel dictionaries forming a block-diagonal operator on
/// channel-stacked vectors (order r, g, b).
struct BlockDiagonalDictionary {
  Matrix red, green, blue;

  Index rows() const { return red.rows(); }
  Index atoms() const { return red.cols(); }

  const Matrix& channel(int c) const { return c == 0 ? red : (c == 1 ? green : blue); }
  Matrix& channel(int c) { return c == 0 ? red : (c == 1 ? green : blue); }

  /// Dense 3*rows x 3*atoms block-diagonal form.
  Matrix to_dense() const;

  Vector apply(const Vector& x) const;            // D * x
  Vector apply_transpose(const Vector& v) const;  // D' * v

  double max_column_norm() const;
  bool same_shape(const BlockDiagonalDictionary& other) const {
    return rows() == other.rows() && atoms() == other.atoms() &&
           green.rows() == other.green.rows() && blue.rows() == other.blue.rows();
  }
};

/// Shape check shared by all three blocks.
void validate(const BlockDiagonalDictionary& d, const char* name);

/// Sparse high-pass operator on column-major vectorized side x side patches:
/// the 3x3 Laplacian [0,-1,0; -1,4,-1; 0,-1,0] with replicate boundary.
/// Rows sum to zero, so constants are annihilated.
struct EdgeOperator {
  SparseMatrix matrix;
  int patch_side = 0;
};

EdgeOperator build_edge_operator(int patch_side);

/// Block-cyclic channel shift on 3n-row values: (r,g,b) -> (b,r,g).
Matrix apply_channel_shift(const Matrix& v);
/// Transpose shift: (r,g,b) -> (g,b,r).
Matrix apply_channel_shift_transpose(const Matrix& v);

/// The convex problem min_x x'Q_sym x - b'x + c + lambda*||x||_1 over
/// channel-stacked sparse codes; Q_sym is symmetric PSD.
struct JointQuadratic {
  Matrix q_sym;
  Vector linear;        // b
  double constant = 0;  // c
  double l1_weight = 0; // lambda

  Index dim() const { return q_sym.rows(); }
  void multiply(const Vector& x, Vector& out) const { out.noalias() = q_sym * x; }
  const Vector& linear_term() const { return linear; }
  double constant_term() const { return constant; }
  double l1_term_weight() const { return l1_weight; }

  /// x'Q_sym x - b'x + c.
  double smooth_value(const Vector& x) const {
    return x.dot(q_sym * x) - linear.dot(x) + constant;
  }
  double objective(const Vector& x) const {
    return smooth_value(x) + l1_weight * x.lpNorm<1>();
  }
};

/// Reconstruction-time joint quadratic:
///   Q = 0.5*Dl'Dl + 2*tau*Dh'S'(I - Ps')S*Dh, b = Dl'y_l, c = 0.5*||y_l||^2,
/// symmetrized. Its objective equals the joint color sparse-coding cost.
JointQuadratic build_joint_quadratic(const BlockDiagonalDictionary& d_l,
                                     const BlockDiagonalDictionary& d_h,
                                     const EdgeOperator& s, double tau,
                                     double lambda, const Vector& y_l);

/// Training-time quadratic for one sample:
///   A = (gamma/2)Dl'Dl + ((1-gamma)/2)Dh'Dh + 2*tau*Dh'S'(I - Ps')S*Dh,
///   b  = gamma*Dl'y_l + (1-gamma)*Dh'y_h,
///   c  = (gamma/2)||y_l||^2 + ((1-gamma)/2)||y_h||^2.
JointQuadratic build_training_quadratic(const BlockDiagonalDictionary& d_l,
                                        const BlockDiagonalDictionary& d_h,
                                        const EdgeOperator& s, double tau,
                                        double gamma, double lambda,
                                        const Vector& y_l, const Vector& y_h);

/// Literal joint sparse-coding cost: per-channel reconstruction + l1 plus the
/// tau-weighted pairwise edge differences of the reconstructed HR channels.
double eval_color_cost(const Vector& x, const Vector& y_l,
                       const BlockDiagonalDictionary& d_l,
                       const BlockDiagonalDictionary& d_h, const EdgeOperator& s,
                       double lambda, double tau);

/// Sum of pairwise squared edge differences of three reconstructed channels:
/// ||S(a-b)||^2 + ||S(b-c)||^2 + ||S(c-a)||^2 with a = S-filtered channels.
double cross_channel_edge_discrepancy(const EdgeOperator& s, const Vector& patch_r,
                                      const Vector& patch_g, const Vector& patch_b);

/// Dense 3p x 3p coupling matrix S'(I - Ps')S used by the trainer.
Matrix edge_coupling_matrix(const EdgeOperator& s);

/// Matrix-free view of the same quadratic family: Q(tau) = Q0 + tau*Q1_sym
/// with Q0 = 0.5*Dl'Dl and Q1_sym = 2*Dh'S'(I - (Ps+Ps')/2)S*Dh. One instance
/// per worker; dictionaries and the edge operator are shared read-only.
class FactoredJointQuadratic {
 public:
  FactoredJointQuadratic(const BlockDiagonalDictionary* d_l,
                         const BlockDiagonalDictionary* d_h, const EdgeOperator* s);

  /// Largest eigenvalues of Q0 and Q1_sym by power iteration (deterministic
  /// seeded start). Used for the Lipschitz bound L <= 2*(lam0 + tau*lam1).
  std::pair<double, double> extremal_curvatures() const;

  void set_patch(double tau, double lambda, Vector y_l_gram_rhs, double constant);
  /// Convenience: computes b = Dl'y_l and c = 0.5*||y_l||^2 itself.
  void set_patch_from_lr(double tau, double lambda, const Vector& y_l);

  Index dim() const { return 3 * d_l_->atoms(); }
  void multiply(const Vector& x, Vector& out) const;
  const Vector& linear_term() const { return linear_; }
  double constant_term() const { return constant_; }
  double l1_term_weight() const { return l1_weight_; }

  void multiply_base(const Vector& x, Vector& out) const;      // Q0 * x
  void multiply_coupling(const Vector& x, Vector& out) const;  // Q1_sym * x

 private:
  const BlockDiagonalDictionary* d_l_;
  const BlockDiagonalDictionary* d_h_;
  const EdgeOperator* s_;
  double tau_ = 0;
  double l1_weight_ = 0;
  double constant_ = 0;
  Vector linear_;
  mutable Vector hr_scratch_, hr_scratch2_, out_scratch_;
};

}  // namespace mccsr

#endif

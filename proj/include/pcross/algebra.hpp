#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace pcross {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Default scale-relative tolerance for numeric predicates.
inline constexpr double kDefaultTol = 1e-9;

/// Block sizes [n_1..n_k] of a multi-matrix algebra ⊕_i M_{n_i}(ℂ).
struct BlockShape {
  std::vector<int> dims;

  BlockShape() = default;
  explicit BlockShape(std::vector<int> d);

  int block_count() const { return static_cast<int>(dims.size()); }
  int dim(int block) const { return dims[static_cast<std::size_t>(block)]; }
  /// Dimension of the defining block-diagonal representation, Σ n_i.
  int rep_dim() const;
  /// Linear dimension Σ n_i².
  int linear_dim() const;
  /// Shape of Mat_n over this algebra: every block size scaled by n.
  BlockShape scaled(int n) const;

  bool operator==(const BlockShape&) const = default;
};

/// One complex n_i×n_i matrix per block.
class AlgebraElement {
 public:
  AlgebraElement() = default;
  AlgebraElement(BlockShape shape, std::vector<Matrix> blocks);
  /// Zero element of the given shape.
  static AlgebraElement zero(const BlockShape& shape);
  static AlgebraElement identity(const BlockShape& shape);
  /// e_{pq} in the given block, zero elsewhere.
  static AlgebraElement matrix_unit(const BlockShape& shape, int block, int p, int q);

  const BlockShape& shape() const { return shape_; }
  const Matrix& block(int i) const { return blocks_[static_cast<std::size_t>(i)]; }
  Matrix& block(int i) { return blocks_[static_cast<std::size_t>(i)]; }
  int block_count() const { return shape_.block_count(); }

  AlgebraElement& operator+=(const AlgebraElement& rhs);
  AlgebraElement& operator-=(const AlgebraElement& rhs);
  AlgebraElement& operator*=(Complex scalar);

  friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
  friend AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a -= b; }
  friend AlgebraElement operator*(Complex s, AlgebraElement a) { return a *= s; }

 private:
  BlockShape shape_;
  std::vector<Matrix> blocks_;
};

/// Blockwise product. Throws std::invalid_argument on shape mismatch.
AlgebraElement multiply(const AlgebraElement& a, const AlgebraElement& b);
inline AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) {
  return multiply(a, b);
}

/// Blockwise conjugate transpose.
AlgebraElement adjoint(const AlgebraElement& a);

/// C*-norm: largest singular value over blocks.
double operator_norm(const AlgebraElement& a);

/// Largest absolute entry, used for scale-relative tolerances.
double max_abs_entry(const AlgebraElement& a);

/// max over blocks of ‖a_i − b_i‖_∞ entrywise.
double entrywise_distance(const AlgebraElement& a, const AlgebraElement& b);

bool is_hermitian(const AlgebraElement& a, double tol = kDefaultTol);

struct PositivityCertificate {
  bool positive = false;
  /// Smallest eigenvalue over blocks of the element (after hermitian check).
  double min_eigenvalue = 0.0;
  double hermitian_deviation = 0.0;
};

/// PSD test: hermitian within tol and every block eigenvalue ≥ −tol·(1+‖a‖).
PositivityCertificate is_positive(const AlgebraElement& a, double tol = kDefaultTol);

struct CenterComponent {
  bool central = false;
  std::vector<Complex> scalars;  ///< per-block scalar when central
  int offending_block = -1;
  double deviation = 0.0;
};

/// Z(⊕M_{n_i}) is the per-block scalars; fails on any non-scalar block.
CenterComponent center_component(const AlgebraElement& a, double tol = kDefaultTol);

/// Central element Σ_i c_i·1_{block i} from per-block scalars.
AlgebraElement from_block_scalars(const BlockShape& shape, const std::vector<Complex>& scalars);

/// Ideal of a multi-matrix algebra = subset of block indices.
struct Ideal {
  std::vector<int> support;  ///< sorted, unique block indices

  Ideal() = default;
  Ideal(std::vector<int> s, int block_count);
  static Ideal full(const BlockShape& shape);
  static Ideal empty() { return Ideal{}; }

  bool contains_block(int i) const;
  /// The unit 1_S: identity on support, zero elsewhere (a central idempotent).
  AlgebraElement unit(const BlockShape& shape) const;
  /// Element lies in the ideal iff its blocks vanish off support (within tol).
  bool contains(const AlgebraElement& a, double tol = kDefaultTol) const;
  /// Max entry of a outside the support.
  double support_violation(const AlgebraElement& a) const;

  Ideal intersect(const Ideal& other) const;
  bool operator==(const Ideal&) const = default;
};

/// τ(a) = Σ_i w_i·Tr(a_i) with Σ_i w_i·n_i = 1.
struct TracialState {
  std::vector<double> weights;

  TracialState() = default;
  explicit TracialState(std::vector<double> w) : weights(std::move(w)) {}
  /// Normalized trace: w_i = 1/Σn_j, equal weight on every rep dimension.
  static TracialState uniform(const BlockShape& shape);

  /// Throws if weights are negative, mismatched, or Σ w_i n_i ≠ 1.
  void validate(const BlockShape& shape, double tol = kDefaultTol) const;
  bool is_faithful() const;

  Complex operator()(const AlgebraElement& a) const;
  /// ‖a‖_{2,τ} = sqrt(τ(a*a)).
  double two_norm(const AlgebraElement& a) const;
};

/// Coordinates w.r.t. the matrix-unit basis, blocks in order, row-major.
struct AlgebraBasis {
  BlockShape shape;
  struct Label {
    int block, row, col;
  };
  std::vector<Label> labels;

  explicit AlgebraBasis(const BlockShape& s);
  int dim() const { return static_cast<int>(labels.size()); }
  Vector coords(const AlgebraElement& a) const;
  AlgebraElement element(const Vector& coords) const;
  AlgebraElement basis_element(int idx) const;
};

}  // namespace pcross

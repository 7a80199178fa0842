#pragma once

#include <memory>
#include <vector>

#include "pcross/partial_action.hpp"

namespace pcross {

class CrossedElement;

/// The algebraic partial crossed product A⋊_alg G of a validated system.
/// Cheap to copy; all state immutable and shared.
class CrossedProduct {
 public:
  CrossedProduct() = default;
  explicit CrossedProduct(PartialAction action);

  const PartialAction& action() const { return data_->action; }
  const FiniteGroup& group() const { return data_->action.group(); }
  const BlockShape& shape() const { return data_->action.shape(); }

  /// Linear dimension: Σ_g Σ_{i ∈ S_g} n_i².
  int dim() const { return static_cast<int>(data_->labels.size()); }

  struct BasisLabel {
    int g, block, row, col;  ///< e^{block}_{row,col}·δ_g with block ∈ S_g
  };
  const std::vector<BasisLabel>& basis() const { return data_->labels; }

  CrossedElement zero() const;
  /// 1δ_e, the unit.
  CrossedElement unit() const;
  /// aδ_g. Rejects coefficients outside D_g (never silently cuts).
  CrossedElement monomial(int g, const AlgebraElement& a, double tol = kDefaultTol) const;
  /// u_g = 1_g δ_g.
  CrossedElement range_unit_monomial(int g) const;
  CrossedElement basis_element(int idx) const;

  Vector coords(const CrossedElement& x) const;
  CrossedElement element(const Vector& coords) const;

  bool same_system(const CrossedProduct& other) const { return data_ == other.data_; }

 private:
  struct Data {
    PartialAction action;
    std::vector<BasisLabel> labels;
  };
  std::shared_ptr<const Data> data_;
  friend class CrossedElement;
};

/// Finitely supported map g ↦ a_g ∈ D_g, the element Σ a_g δ_g.
class CrossedElement {
 public:
  CrossedElement() = default;

  const CrossedProduct& system() const { return system_; }
  const AlgebraElement& coefficient(int g) const {
    return coefficients_[static_cast<std::size_t>(g)];
  }

  CrossedElement& operator+=(const CrossedElement& rhs);
  CrossedElement& operator-=(const CrossedElement& rhs);
  CrossedElement& operator*=(Complex s);
  friend CrossedElement operator+(CrossedElement a, const CrossedElement& b) { return a += b; }
  friend CrossedElement operator-(CrossedElement a, const CrossedElement& b) { return a -= b; }
  friend CrossedElement operator*(Complex s, CrossedElement a) { return a *= s; }

  double max_abs_entry() const;

 private:
  CrossedElement(CrossedProduct system, std::vector<AlgebraElement> coefficients, double tol);
  CrossedProduct system_;
  std::vector<AlgebraElement> coefficients_;
  friend class CrossedProduct;
  friend CrossedElement cp_multiply(const CrossedElement&, const CrossedElement&);
  friend CrossedElement cp_adjoint(const CrossedElement&);
};

/// (aδ_g)(bδ_h) = α_g(α_{g⁻¹}(a)b)δ_{gh}, extended bilinearly.
CrossedElement cp_multiply(const CrossedElement& x, const CrossedElement& y);
inline CrossedElement operator*(const CrossedElement& x, const CrossedElement& y) {
  return cp_multiply(x, y);
}

/// (aδ_g)* = α_{g⁻¹}(a*)δ_{g⁻¹}.
CrossedElement cp_adjoint(const CrossedElement& x);

/// E(Σ a_g δ_g) = a_e: the coefficient at the identity.
AlgebraElement conditional_expectation(const CrossedElement& x);

double cp_distance(const CrossedElement& x, const CrossedElement& y);

/// τ̃ = τ∘E. Construction requires τ faithful and G-invariant for the action.
class InducedTrace {
 public:
  InducedTrace(const CrossedProduct& system, TracialState tau, double tol = kDefaultTol);

  const TracialState& algebra_trace() const { return tau_; }
  Complex operator()(const CrossedElement& x) const;
  double two_norm(const CrossedElement& x) const;

 private:
  TracialState tau_;
};

/// Choice of the faithful unital representation of A used as the fiber of
/// the regular representation: per-block multiplicities plus an optional
/// unitary conjugation. Defaults to the defining block-diagonal representation.
struct FiberRepSpec {
  std::vector<int> multiplicities;  ///< per block, all ≥ 1; empty = all 1
  Matrix conjugator;                ///< unitary on the fiber space; empty = identity
};

/// The regular representation of A⋊_alg G on ℓ²(G, H_π):
///   π̃(a) = diag over fibers g of π′_g(a),  π′_g(a) = π(α_{g⁻¹}(a·1_g)),
///   λ_g the fiber permutation, Λ(Σ a_gδ_g) = Σ π̃(a_g)λ_g.
/// The closed form of π′_g is the unique extension of π_g annihilating the
/// complement of span{π_g(a)ξ : a ∈ D_g}.
class RegularRepresentation {
 public:
  explicit RegularRepresentation(CrossedProduct system, FiberRepSpec spec = {});

  const CrossedProduct& system() const { return system_; }
  int fiber_dim() const { return fiber_dim_; }
  int total_dim() const { return fiber_dim_ * system_.group().order(); }

  Matrix pi(const AlgebraElement& a) const;
  Matrix pi_prime(int g, const AlgebraElement& a) const;
  Matrix pi_tilde(const AlgebraElement& a) const;
  Matrix lambda(int g) const;
  Matrix integrated(const CrossedElement& x) const;

 private:
  CrossedProduct system_;
  FiberRepSpec spec_;
  int fiber_dim_ = 0;
  std::vector<int> block_offsets_;  // offset of each block's first copy in the fiber
};

struct CovarianceReport {
  bool pass = false;
  double max_deviation = 0.0;
  std::vector<ActionViolation> violations;
};

/// λ_g π̃(a) λ_{g⁻¹} = π̃(α_g(a)) for a ∈ D_{g⁻¹}, verified on a matrix-unit
/// basis of every domain ideal.
CovarianceReport check_covariance(const RegularRepresentation& rep, double tol = kDefaultTol);

/// ‖Λ(x)‖: the reduced norm computed from the chosen faithful representation.
double reduced_norm(const RegularRepresentation& rep, const CrossedElement& x);

}  // namespace pcross

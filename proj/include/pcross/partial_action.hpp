#pragma once

#include <string>
#include <vector>

#include "pcross/algebra.hpp"
#include "pcross/group.hpp"

namespace pcross {

/// One block of the ideal isomorphism α_g: domain block `source` is carried
/// onto block `target` by x ↦ U x U*.
struct BlockIso {
  int source = 0;
  int target = 0;
  Matrix unitary;
};

/// Partial action of a finite group on a multi-matrix algebra. Ideals are
/// block subsets; each α_g is a dimension-preserving block bijection with a
/// unitary per target block — the general form of a finite-dimensional
/// *-isomorphism between block ideals.
class PartialAction {
 public:
  PartialAction() = default;
  /// maps[g] lists the blocks of α_g. The identity record may be left empty;
  /// it is filled in as the identity map on all blocks. Throws on malformed
  /// data (bad indices, dimension mismatches, non-bijective block maps).
  PartialAction(FiniteGroup group, BlockShape shape, std::vector<std::vector<BlockIso>> maps);

  /// Global action with every α_g the identity map (D_g = A for all g).
  static PartialAction trivial_global(const FiniteGroup& group, const BlockShape& shape);

  const FiniteGroup& group() const { return group_; }
  const BlockShape& shape() const { return shape_; }

  /// Domain ideal of α_g, i.e. S_{g⁻¹}.
  const Ideal& domain(int g) const { return domains_[static_cast<std::size_t>(g)]; }
  /// Range ideal of α_g, i.e. S_g (the ideal D_g of the paper-side notation).
  const Ideal& range(int g) const { return ranges_[static_cast<std::size_t>(g)]; }
  /// Unit 1_g of D_g = range(g).
  AlgebraElement range_unit(int g) const { return range(g).unit(shape_); }

  /// b_g(i); i must lie in domain(g).
  int map_block(int g, int i) const;
  /// b_g⁻¹(j); j must lie in range(g).
  int inverse_map_block(int g, int j) const;
  /// U_{g,j} for a target block j ∈ range(g).
  const Matrix& unitary(int g, int j) const;

  /// α_g(a). Requires a supported on domain(g) within tol; throws otherwise,
  /// naming the offending blocks.
  AlgebraElement apply(int g, const AlgebraElement& a, double tol = kDefaultTol) const;

 private:
  FiniteGroup group_;
  BlockShape shape_;
  std::vector<Ideal> domains_;  // per g: S_{g⁻¹}
  std::vector<Ideal> ranges_;   // per g: S_g
  std::vector<std::vector<int>> fwd_;   // per g: block → b_g(block) or -1
  std::vector<std::vector<int>> bwd_;   // per g: block → b_g⁻¹(block) or -1
  std::vector<std::vector<Matrix>> unitaries_;  // per g: indexed by target block
};

struct ActionViolation {
  std::string check;
  int g = -1;
  int h = -1;
  int block = -1;
  double deviation = 0.0;
};

struct ActionValidation {
  bool valid = false;
  double max_deviation = 0.0;
  std::vector<ActionViolation> violations;
};

/// Checks the partial-action axioms: identity element acts identically,
/// unitarity, inverse consistency (b_{g⁻¹} = b_g⁻¹ and α_{g⁻¹}∘α_g = id),
/// and the composition law α_g∘α_h ⊆ α_{gh} on a matrix-unit basis of the
/// exact composition domain. Basis checking is complete: the identities are
/// linear in the element.
ActionValidation validate_partial_action(const PartialAction& alpha, double tol = kDefaultTol);

struct RestrictionResult {
  PartialAction action;
  /// Block indices of the ambient algebra retained in the ideal, in order.
  std::vector<int> kept_blocks;
  /// Whether the ambient algebra equals ∪_g b_g(A) at block level — the
  /// globalization coverage condition.
  bool globalization_covered = false;
};

/// Restriction partial action: D_g = b_g(A) ∩ A for a global action on the
/// ambient algebra and a block subset A. The result is reindexed to A.
RestrictionResult restrict_global(const PartialAction& global, const std::vector<int>& ideal_blocks);

struct TraceInvariance {
  bool invariant = false;
  double max_deviation = 0.0;
  std::vector<ActionViolation> violations;
};

/// τ∘α_g = τ on D_{g⁻¹} for all g. For block data this is the weight identity
/// w_{b_g(i)} = w_i on domains; it is additionally verified numerically on
/// matrix units.
TraceInvariance check_invariant_trace(const PartialAction& alpha, const TracialState& tau,
                                      double tol = kDefaultTol);

}  // namespace pcross

#pragma once

#include <optional>
#include <vector>

#include "pcross/gns.hpp"
#include "pcross/rng.hpp"

namespace pcross {

/// One stage of a trace-compatible chain of multi-matrix algebras, optionally
/// carrying a partial action of the common group.
struct ChainStage {
  BlockShape shape;
  TracialState trace;
  std::optional<PartialAction> action;
};

/// Unital embedding between multi-matrix algebras in Bratteli form: target
/// block i contains multiplicity[i][j] copies of source block j, conjugated
/// by a unitary per target block. Copies are laid out by ascending source
/// block, then copy index.
struct Embedding {
  std::vector<std::vector<int>> multiplicity;
  std::vector<Matrix> conjugators;  ///< per target block; empty entries = identity

  AlgebraElement apply(const BlockShape& source, const BlockShape& target,
                       const AlgebraElement& a) const;
  /// Coordinate matrix w.r.t. the matrix-unit bases.
  Matrix coord_matrix(const BlockShape& source, const BlockShape& target) const;
};

struct EmbeddingValidation {
  bool valid = false;
  double max_deviation = 0.0;
  std::vector<std::string> violations;
};

/// Unitality (Σ_j m_ij n_j = n_i), the trace equation w_j = Σ_i m_ij w_i', and
/// the *-homomorphism property on matrix units.
EmbeddingValidation validate_embedding(const Embedding& emb, const ChainStage& source,
                                       const ChainStage& target, double tol = kDefaultTol);

/// second∘first, with the canonical copy-reordering permutation folded into
/// the conjugators so the composite is again in Bratteli form.
Embedding compose_embeddings(const Embedding& second, const Embedding& first,
                             const BlockShape& source, const BlockShape& middle,
                             const BlockShape& target);

/// U(a + N_{τ_src}) = φ(a) + N_{τ_tgt} in orthonormalized GNS bases;
/// an isometry exactly when the embedding is trace-compatible.
Matrix gns_isometry(const Embedding& emb, const ChainStage& source, const ChainStage& target);

/// T′ = (embedded T)∘P_n: acts as T on the embedded copy of the source GNS
/// space and as zero on its complement. T is given in the source orthonormal
/// basis; the result lives on the target space.
Matrix extend_operator(const Matrix& op_on_source, const Matrix& isometry);

struct LiftedUcp {
  LinearMapOnAlgebra map;          ///< ψ on the target algebra
  LinearMapOnAlgebra expectation;  ///< E_ι: target → embedded image (as target map)
};

/// ψ = ι∘φ∘E_ι with E_ι the trace-preserving conditional expectation onto the
/// embedded image; satisfies ψ∘ι = ι∘φ exactly.
LiftedUcp lift_ucp(const LinearMapOnAlgebra& phi, const Embedding& emb,
                   const ChainStage& source, const ChainStage& target);

struct ChainStageReport {
  bool pass = false;
  double equivariance_deviation = 0.0;    ///< φ∘α_g vs α_g'∘φ and ideal compatibility
  double homomorphism_deviation = 0.0;    ///< induced crossed map on basis pairs
  double unit_deviation = 0.0;            ///< ι̂(1δ_e) vs 1δ_e
  double isometry_deviation = 0.0;        ///< reduced norms, relative, random elements
  double expectation_deviation = 0.0;     ///< E'∘ι̂ vs φ∘E on basis
  double trace_deviation = 0.0;           ///< τ̃'∘ι̂ vs τ̃ on basis
};

/// Stagewise certification of the induced embeddings of crossed products
/// Σ a_gδ_g ↦ Σ φ(a_g)δ_g along an equivariant chain: *-homomorphism,
/// reduced-norm isometry, intertwining of conditional expectations, and
/// trace compatibility.
std::vector<ChainStageReport> equivariant_chain_crossed_products(
    const std::vector<ChainStage>& stages, const std::vector<Embedding>& embeddings,
    std::uint64_t seed = 0, double tol = kDefaultTol);

}  // namespace pcross

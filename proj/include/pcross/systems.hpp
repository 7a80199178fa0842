#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "pcross/haagerup.hpp"
#include "pcross/inductive_limit.hpp"
#include "pcross/rng.hpp"

namespace pcross {

using Json = nlohmann::ordered_json;

/// A fully validated partial C*-dynamical system with a compatible trace.
struct SystemDescription {
  std::string name;
  FiniteGroup group;
  BlockShape shape;
  TracialState trace;
  PartialAction action;
};

/// Named presets:
///   "W1"                  Z₂ on ℂ⊕ℂ with D_g the second block, identity iso,
///                         weights (1/2, 1/2)
///   "trivial"             Z₂ acting trivially (globally) on M₂, normalized trace
///   "restriction-example" Z₃ cycling three lines restricted to the first one:
///                         D_g = 0 for g ≠ e
SystemDescription preset_system(const std::string& name);

struct SizeBudget {
  int max_group_order = 8;
  int max_total_dim = 6;
};

/// Deterministic random partial dynamical system with a G-invariant faithful
/// trace. Systems are built as restrictions of gauge-conjugated global
/// permutation actions, so they are valid by construction.
SystemDescription generate_random_system(std::uint64_t seed, const SizeBudget& budget = {});

/// Random UCP map on A in Stinespring form compressed to the block algebra:
/// a ↦ E_A(V*(π(a)⊗I_r)V). Not necessarily τ-decreasing.
LinearMapOnAlgebra random_ucp_map(Rng& rng, const GnsSpace& algebra_space, int dilation_rank = 2);

/// Random UCP τ-preserving map: a convex combination of unitary conjugations
/// u*au (u ∈ A) and a ↦ τ(a)1.
LinearMapOnAlgebra random_tau_preserving_ucp(Rng& rng, const BlockShape& shape,
                                             const TracialState& tau);

/// Random UCP τ-preserving map commuting with the partial action
/// (φ∘α_g = α_g∘φ on every domain, φ preserving every block ideal). Built
/// from orbit-constant unital trace-preserving channels conjugated through
/// the action's gauge; equivariance is verified numerically, with a
/// mixture of the identity and the blockwise normalized trace as fallback.
LinearMapOnAlgebra random_equivariant_ucp(Rng& rng, const PartialAction& alpha,
                                          const TracialState& tau);

/// max over g and matrix units of D_{g⁻¹} of ‖φ(α_g(x)) − α_g(φ(x))‖, plus
/// any leakage of φ out of the block ideals it must preserve.
double equivariance_deviation(const PartialAction& alpha, const LinearMapOnAlgebra& phi);

/// Random scalar positive-definite function with η(e) = 1, built as the
/// autocorrelation η(g) = Σ_h ⟨f(gh), f(h)⟩ of a random vector field on G.
ScalarPDFunction random_scalar_pd(Rng& rng, const FiniteGroup& G, int width = 2);

/// Random certified-PD center-valued function: Schur products and convex
/// combinations of η·1_g lifts of random scalar PD functions.
CenterValuedPDFunction random_pd_function(Rng& rng, const PartialAction& alpha);

// JSON encoding (complex numbers as [re, im], matrices row-major).
Json to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);
Json to_json(const BlockShape& s);
Json to_json(const TracialState& t);
Json to_json(const FiniteGroup& g);
Json to_json(const AlgebraElement& a);
AlgebraElement element_from_json(const Json& j);
Json to_json(const PartialAction& a);
Json to_json(const SystemDescription& s);

FiniteGroup group_from_json(const Json& j);
PartialAction action_from_json(const Json& j, const FiniteGroup& group, const BlockShape& shape);
/// Either {"preset": name} or {group, shape, weights, action}.
SystemDescription system_from_json(const Json& j);

CrossedElement crossed_element_from_json(const Json& j, const CrossedProduct& system);
Json to_json(const CrossedElement& x);

ScalarPDFunction eta_from_json(const Json& j, const FiniteGroup& group);
CenterValuedPDFunction h_from_json(const Json& j, const PartialAction& alpha);
Json to_json(const CenterValuedPDFunction& h);

struct ChainDescription {
  std::vector<ChainStage> stages;
  std::vector<Embedding> embeddings;
};
ChainDescription chain_from_json(const Json& j);

/// Random trace-compatible chain; when with_actions is true every stage
/// carries an action of the same group and all embeddings are equivariant.
ChainDescription generate_random_chain(std::uint64_t seed, int stage_count, bool with_actions);

}  // namespace pcross

#pragma once

#include <vector>

#include "pcross/gns.hpp"

namespace pcross {

/// Map h: G → Z(A) with h(g) ∈ D_g, stored as per-block scalars supported on
/// S_g. The Haagerup datum for a partial action.
class CenterValuedPDFunction {
 public:
  CenterValuedPDFunction() = default;
  /// scalars[g][block]; entries off S_g must vanish (throws otherwise).
  CenterValuedPDFunction(const PartialAction& alpha,
                         std::vector<std::vector<Complex>> scalars);
  /// h(g) = 1_g, the ideal units.
  static CenterValuedPDFunction units(const PartialAction& alpha);
  /// h(g) = η(g)·1_g.
  static CenterValuedPDFunction from_eta(const PartialAction& alpha, const ScalarPDFunction& eta);

  int group_order() const { return static_cast<int>(scalars_.size()); }
  const std::vector<Complex>& scalars(int g) const {
    return scalars_[static_cast<std::size_t>(g)];
  }
  AlgebraElement value(const PartialAction& alpha, int g) const;
  /// max_i |h(g)_i|: operator norm of the central element h(g).
  double operator_norm_at(int g) const;

 private:
  std::vector<std::vector<Complex>> scalars_;
};

/// Convention for the action-twisted Gram matrix of h.
///   kCutdown: a[r][c] = α_{g_r}(1_{g_r⁻¹}·h(g_r⁻¹·g_c))   (always defined)
///   kPaper:   a[r][c] = α_{g_r}(h(g_r⁻¹·g_c)) when h(g_r⁻¹g_c) ∈ D_{g_r⁻¹},
///             and 0 otherwise (the literal branch form).
/// The two agree whenever the membership condition holds; they diverge on
/// proper partial actions, where only the cutdown form stays hermitian.
enum class PDConvention { kCutdown, kPaper };

/// The tuple Gram matrix as an element of Mat_n(A), realized on the scaled
/// shape [n·n_1, …, n·n_k].
AlgebraElement pd_matrix(const PartialAction& alpha, const CenterValuedPDFunction& h,
                         const std::vector<int>& tuple,
                         PDConvention convention = PDConvention::kCutdown);

/// PSD test of pd_matrix over the full tuple (g_0,…,g_{|G|−1}); sufficient
/// for every tuple since duplications and principal submatrices of a PSD
/// matrix are PSD.
PositivityCertificate is_pd_wrt_action(const PartialAction& alpha,
                                       const CenterValuedPDFunction& h,
                                       PDConvention convention = PDConvention::kCutdown,
                                       double tol = kDefaultTol);

/// Φ(Σ a_gδ_g) = Σ φ(a_g)h(g)δ_g as a matrix on the crossed-product basis.
/// Preconditions (φ UCP unital, h positive definite, h(e) = 1) are the
/// caller's responsibility; induce_ucp_checked certifies them.
LinearMapOnAlgebra induce_ucp_on_crossed(const CrossedProduct& system,
                                         const LinearMapOnAlgebra& phi,
                                         const CenterValuedPDFunction& h);

struct InducedUcpResult {
  LinearMapOnAlgebra map;          ///< Φ on the crossed product
  UcpCertificate phi_certificate;  ///< φ on A
  PositivityCertificate h_certificate;
  bool h_unit_at_identity = false;
  bool preconditions_pass() const {
    return phi_certificate.pass() && h_certificate.positive && h_unit_at_identity;
  }
};

/// Certifying wrapper; throws std::invalid_argument when a precondition
/// certificate fails.
InducedUcpResult induce_ucp_checked(const CrossedProduct& system, const GnsSpace& algebra_space,
                                    const LinearMapOnAlgebra& phi,
                                    const CenterValuedPDFunction& h, double tol = kDefaultTol);

struct TruncationEstimate {
  LinearMapOnAlgebra truncation;  ///< T(Σ a_gδ_g) = Σ_{g∈F} φ_approx(a_g)h(g)δ_g
  double measured_norm = 0.0;     ///< ‖Φ̃ − T̃‖
  double eps_phi = 0.0;           ///< measured ‖φ̃ − φ̃_approx‖
  double k_inf = 0.0;             ///< sup_g ‖h(g)‖_op²
  double delta_op = 0.0;          ///< sup_{g∉F} ‖h(g)‖_op
  double delta_two = 0.0;         ///< sup_{g∉F} ‖h(g)‖_{2,τ}
  double phi_tilde_norm = 0.0;    ///< ‖φ̃‖
  /// sqrt(2(εφ²·K∞ + δ_op²·‖φ̃‖²)): provable operator-norm bound.
  double certified_bound = 0.0;
  /// Same expression with δ_two in place of δ_op: the two-norm constant the
  /// original estimate suggests. Reported as data; not a theorem.
  double two_norm_bound = 0.0;
  bool certified_ok = false;
  bool two_norm_variant_ok = false;
  int truncation_rank = 0;  ///< numeric rank of T̃
  int rank_cap = 0;         ///< rank(φ̃_approx)·|F|
};

/// Finite-rank truncation of Φ over the subset F with the quantitative
/// compactness bound, measured and certified.
TruncationEstimate truncation_estimate(const CrossedProduct& system, const TracialState& tau,
                                       const GnsSpace& algebra_space,
                                       const GnsSpace& crossed_space,
                                       const LinearMapOnAlgebra& phi,
                                       const LinearMapOnAlgebra& phi_approx,
                                       const CenterValuedPDFunction& h,
                                       const std::vector<int>& support_set,
                                       double tol = kDefaultTol);

/// φ(a) = E(Φ(aδ_e)): compression of a crossed-product map to the algebra.
LinearMapOnAlgebra compress_to_algebra(const CrossedProduct& system,
                                       const LinearMapOnAlgebra& Phi);

/// η(g) = τ̃(Φ(1_gδ_g)·(1_gδ_g)*).
ScalarPDFunction eta_from_ucp(const CrossedProduct& system, const TracialState& tau,
                              const LinearMapOnAlgebra& Phi);

struct HaagerupStage {
  LinearMapOnAlgebra phi;  ///< UCP τ-decreasing map on A
  CenterValuedPDFunction h;
  double eps = 0.0;        ///< stage tolerance for the pointwise deviation
};

struct HaagerupStageReport {
  bool preconditions_pass = false;
  UcpCertificate phi_cert;
  MapCertificate phi_tau_decreasing;
  PositivityCertificate h_cert;
  UcpCertificate induced_cert;        ///< Φ on the crossed product
  MapCertificate induced_tau_decreasing;
  std::vector<double> singular_values;  ///< rank-vs-ε curve of Φ̃
  double max_pointwise_deviation = 0.0;  ///< max over unit basis of ‖Φ(b)−b‖₂,τ̃
  double max_h_deviation = 0.0;          ///< max_g ‖h(g)−1‖₂,τ
  double two_norm_growth = 0.0;          ///< measured sup over unit basis of ‖φ(a)‖₂,τ
  double eps = 0.0;
  bool pass = false;
};

struct HaagerupCertification {
  bool pass = false;
  std::vector<HaagerupStageReport> stages;
};

/// Per-stage quantitative rendering of the Haagerup data checks: every stage
/// must carry certified (φ_n, h_n) and satisfy the pointwise deviation bound
/// ‖Φ_n(b)−b‖₂,τ̃ ≤ ε_n on the unit basis.
HaagerupCertification certify_haagerup_data(const CrossedProduct& system,
                                            const TracialState& tau,
                                            const std::vector<HaagerupStage>& stages,
                                            double tol = kDefaultTol);

}  // namespace pcross

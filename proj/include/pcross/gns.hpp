#pragma once

#include "pcross/crossed_product.hpp"

namespace pcross {

/// Linear map on a finite-dimensional algebra, stored as its dense matrix in
/// the algebra's matrix-unit coordinate basis.
struct LinearMapOnAlgebra {
  Matrix mat;

  static LinearMapOnAlgebra identity(int dim) { return {Matrix::Identity(dim, dim)}; }
  LinearMapOnAlgebra compose(const LinearMapOnAlgebra& inner) const { return {mat * inner.mat}; }
};

/// GNS data L²(B, τ) of a finite-dimensional *-algebra B with faithful trace,
/// together with a faithful unital representation ρ: B → M_{d'} used for
/// exact positivity arguments. Everything is expressed in a fixed linear
/// basis {b_j}: elements are coordinate vectors, maps are matrices.
class GnsSpace {
 public:
  GnsSpace() = default;
  /// basis_images: ρ(b_j); gram(i,j) = τ(b_i* b_j); trace_values(j) = τ(b_j);
  /// unit_coords: coordinates of 1; adjoint_mat: coords(x*) = A·conj(coords x).
  GnsSpace(std::vector<Matrix> basis_images, Matrix gram, Vector trace_values,
           Vector unit_coords, Matrix adjoint_mat);

  int dim() const { return dim_; }
  int rep_dim() const { return rep_dim_; }

  const Matrix& gram() const { return gram_; }
  const Matrix& gram_sqrt() const { return gram_sqrt_; }
  const Matrix& gram_sqrt_inv() const { return gram_sqrt_inv_; }
  const Vector& unit_coords() const { return unit_coords_; }
  const std::vector<Matrix>& basis_images() const { return basis_images_; }

  /// ρ of the element with the given coordinates.
  Matrix represent(const Vector& coords) const;
  /// Coordinates of the Hilbert–Schmidt-orthogonal projection of X onto ρ(B);
  /// composed with represent() this is the trace-preserving conditional
  /// expectation of M_{d'} onto the represented algebra.
  Vector project_coords(const Matrix& x) const;

  Complex trace(const Vector& coords) const { return trace_values_.transpose() * coords; }
  Complex inner(const Vector& a, const Vector& b) const;
  double two_norm(const Vector& coords) const;
  Vector multiply(const Vector& a, const Vector& b) const;
  Vector adjoint(const Vector& coords) const { return adjoint_mat_ * coords.conjugate(); }

 private:
  int dim_ = 0;
  int rep_dim_ = 0;
  std::vector<Matrix> basis_images_;
  Matrix gram_, gram_sqrt_, gram_sqrt_inv_;
  Vector trace_values_;
  Vector unit_coords_;
  Matrix adjoint_mat_;
  Matrix vec_basis_;     // d'²×d, column j = vec(ρ(b_j))
  Eigen::LDLT<Matrix> hs_gram_ldlt_;  // factors V*V for HS projection
};

/// GNS space of (A, τ) in the matrix-unit basis with the defining
/// block-diagonal representation.
GnsSpace make_algebra_gns(const BlockShape& shape, const TracialState& tau);

/// GNS space of (A⋊_alg G, τ̃) in the {matrix-unit·δ_g} basis with the
/// regular representation. τ must be faithful and G-invariant.
GnsSpace make_crossed_gns(const CrossedProduct& system, const TracialState& tau);

/// Matrix of the induced GNS operator φ̃(a + N_τ) = φ(a) + N_τ in the
/// orthonormalized basis: G^{1/2}·Φ·G^{-1/2}.
Matrix induce_operator(const GnsSpace& space, const LinearMapOnAlgebra& map);

/// Largest singular value of the induced operator.
double induced_operator_norm(const GnsSpace& space, const LinearMapOnAlgebra& map);

struct FiniteRankApproximation {
  LinearMapOnAlgebra map;   ///< R, mapped back to algebra level
  int rank = 0;             ///< minimal rank achieving the bound
  double achieved_bound = 0.0;  ///< ‖φ̃ − R̃‖, equals the first dropped singular value
};

/// Best rank-r truncation of φ̃ with r minimal such that ‖φ̃ − R̃‖ ≤ ε.
FiniteRankApproximation finite_rank_approximation(const GnsSpace& space,
                                                  const LinearMapOnAlgebra& map, double eps);

/// Singular values of φ̃: the rank-vs-ε curve (rank r suffices for ε ≥ σ_{r+1}).
std::vector<double> induced_singular_values(const GnsSpace& space, const LinearMapOnAlgebra& map);

struct MapCertificate {
  bool pass = false;
  double certificate = 0.0;         ///< min eigenvalue of the witness
  double hermitian_deviation = 0.0;
};

/// τ∘φ ≤ τ, decided exactly through the density element of τ − τ∘φ with
/// respect to the trace pairing. Certificate: min eigenvalue of the density.
MapCertificate check_tau_decreasing(const GnsSpace& space, const LinearMapOnAlgebra& map,
                                    double tol = kDefaultTol);

/// Complete positivity, decided exactly: φ is CP on B iff the Choi matrix of
/// φ∘E_B: M_{d'} → M_{d'} is PSD, where E_B is the trace-preserving
/// conditional expectation onto the represented algebra. Certificate: min
/// Choi eigenvalue.
MapCertificate check_completely_positive(const GnsSpace& space, const LinearMapOnAlgebra& map,
                                         double tol = kDefaultTol);

bool map_is_unital(const GnsSpace& space, const LinearMapOnAlgebra& map, double tol = kDefaultTol);
bool map_is_hermitian_preserving(const GnsSpace& space, const LinearMapOnAlgebra& map,
                                 double tol = kDefaultTol);

/// Full UCP certificate: unital + completely positive.
struct UcpCertificate {
  bool unital = false;
  MapCertificate cp;
  bool pass() const { return unital && cp.pass; }
};
UcpCertificate check_ucp(const GnsSpace& space, const LinearMapOnAlgebra& map,
                         double tol = kDefaultTol);

}  // namespace pcross

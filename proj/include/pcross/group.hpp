#pragma once

#include <string>
#include <vector>

#include "pcross/algebra.hpp"

namespace pcross {

struct GroupValidation {
  bool valid = false;
  std::vector<std::string> violations;
};

/// Finite group given by its Cayley table. table[g][h] = g∘h.
class FiniteGroup {
 public:
  FiniteGroup() = default;

  /// Validates all group axioms; throws std::invalid_argument when they fail.
  static FiniteGroup from_table(std::vector<std::vector<int>> table);
  /// Axiom report without throwing.
  static GroupValidation validate_table(const std::vector<std::vector<int>>& table);

  static FiniteGroup trivial() { return cyclic(1); }
  static FiniteGroup cyclic(int n);
  /// Symmetric group on n letters, n ≤ 4 (order ≤ 24).
  static FiniteGroup symmetric(int n);
  /// Direct product (used for Klein four = Z2 × Z2 and friends).
  static FiniteGroup product(const FiniteGroup& a, const FiniteGroup& b);

  int order() const { return order_; }
  int identity() const { return identity_; }
  int op(int g, int h) const { return table_[static_cast<std::size_t>(g)][static_cast<std::size_t>(h)]; }
  int inverse(int g) const { return inverse_[static_cast<std::size_t>(g)]; }
  const std::vector<std::vector<int>>& table() const { return table_; }

  bool operator==(const FiniteGroup&) const = default;

 private:
  int order_ = 0;
  int identity_ = 0;
  std::vector<std::vector<int>> table_;
  std::vector<int> inverse_;
};

/// Complex-valued function on a finite group, indexed by element.
struct ScalarPDFunction {
  std::vector<Complex> values;

  Complex operator()(int g) const { return values[static_cast<std::size_t>(g)]; }
  int size() const { return static_cast<int>(values.size()); }
};

struct PDCertificate {
  bool positive_definite = false;
  double min_eigenvalue = 0.0;
  double hermitian_deviation = 0.0;
};

/// PSD test of the full |G|×|G| Gram matrix K[r][c] = η(g_r⁻¹ g_c).
/// For finite G this certifies positive definiteness for every tuple:
/// principal submatrices and row/column duplications of a PSD matrix are PSD.
PDCertificate is_scalar_positive_definite(const FiniteGroup& G, const ScalarPDFunction& eta,
                                          double tol = kDefaultTol);

/// The Gram matrix tested above, exposed for oracles and reports.
Matrix scalar_pd_gram(const FiniteGroup& G, const ScalarPDFunction& eta);

/// Smallest set F with |η(g)| ≥ ε ⟹ g ∈ F.
std::vector<int> epsilon_support(const FiniteGroup& G, const ScalarPDFunction& eta, double eps);

}  // namespace pcross

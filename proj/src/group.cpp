#include "pcross/group.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace pcross {

GroupValidation FiniteGroup::validate_table(const std::vector<std::vector<int>>& table) {
  GroupValidation report;
  const int m = static_cast<int>(table.size());
  if (m == 0) {
    report.violations.push_back("empty table");
    return report;
  }
  for (int g = 0; g < m; ++g) {
    if (static_cast<int>(table[static_cast<std::size_t>(g)].size()) != m) {
      report.violations.push_back("table is not square at row " + std::to_string(g));
      return report;
    }
    for (int h = 0; h < m; ++h) {
      const int v = table[static_cast<std::size_t>(g)][static_cast<std::size_t>(h)];
      if (v < 0 || v >= m) {
        report.violations.push_back("entry out of range at (" + std::to_string(g) + "," +
                                    std::to_string(h) + ")");
        return report;
      }
    }
  }

  // Latin square: every row and column is a permutation.
  for (int g = 0; g < m; ++g) {
    std::vector<bool> seen_row(static_cast<std::size_t>(m), false);
    std::vector<bool> seen_col(static_cast<std::size_t>(m), false);
    for (int h = 0; h < m; ++h) {
      const int r = table[static_cast<std::size_t>(g)][static_cast<std::size_t>(h)];
      const int c = table[static_cast<std::size_t>(h)][static_cast<std::size_t>(g)];
      if (seen_row[static_cast<std::size_t>(r)])
        report.violations.push_back("row " + std::to_string(g) + " is not a permutation");
      if (seen_col[static_cast<std::size_t>(c)])
        report.violations.push_back("column " + std::to_string(g) + " is not a permutation");
      seen_row[static_cast<std::size_t>(r)] = seen_col[static_cast<std::size_t>(c)] = true;
    }
  }
  if (!report.violations.empty()) return report;

  // Identity.
  int identity = -1;
  for (int e = 0; e < m; ++e) {
    bool ok = true;
    for (int g = 0; g < m; ++g)
      ok = ok && table[static_cast<std::size_t>(e)][static_cast<std::size_t>(g)] == g &&
           table[static_cast<std::size_t>(g)][static_cast<std::size_t>(e)] == g;
    if (ok) {
      identity = e;
      break;
    }
  }
  if (identity < 0) {
    report.violations.push_back("no two-sided identity element");
    return report;
  }

  // Inverses.
  for (int g = 0; g < m; ++g) {
    bool found = false;
    for (int h = 0; h < m; ++h)
      if (table[static_cast<std::size_t>(g)][static_cast<std::size_t>(h)] == identity &&
          table[static_cast<std::size_t>(h)][static_cast<std::size_t>(g)] == identity)
        found = true;
    if (!found) report.violations.push_back("no inverse for element " + std::to_string(g));
  }
  if (!report.violations.empty()) return report;

  // Associativity on all triples.
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c) {
        const int ab_c = table[static_cast<std::size_t>(
            table[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)])][static_cast<std::size_t>(c)];
        const int a_bc = table[static_cast<std::size_t>(a)][static_cast<std::size_t>(
            table[static_cast<std::size_t>(b)][static_cast<std::size_t>(c)])];
        if (ab_c != a_bc) {
          report.violations.push_back("associativity fails at (" + std::to_string(a) + "," +
                                      std::to_string(b) + "," + std::to_string(c) + ")");
          return report;
        }
      }

  report.valid = true;
  return report;
}

FiniteGroup FiniteGroup::from_table(std::vector<std::vector<int>> table) {
  const GroupValidation report = validate_table(table);
  if (!report.valid)
    throw std::invalid_argument("FiniteGroup: " + (report.violations.empty()
                                                       ? std::string("invalid table")
                                                       : report.violations.front()));
  FiniteGroup G;
  G.order_ = static_cast<int>(table.size());
  G.table_ = std::move(table);
  for (int e = 0; e < G.order_; ++e) {
    bool ok = true;
    for (int g = 0; g < G.order_; ++g) ok = ok && G.op(e, g) == g && G.op(g, e) == g;
    if (ok) {
      G.identity_ = e;
      break;
    }
  }
  G.inverse_.resize(static_cast<std::size_t>(G.order_));
  for (int g = 0; g < G.order_; ++g)
    for (int h = 0; h < G.order_; ++h)
      if (G.op(g, h) == G.identity_) G.inverse_[static_cast<std::size_t>(g)] = h;
  return G;
}

FiniteGroup FiniteGroup::cyclic(int n) {
  if (n < 1) throw std::invalid_argument("cyclic: order must be >= 1");
  std::vector<std::vector<int>> table(static_cast<std::size_t>(n),
                                      std::vector<int>(static_cast<std::size_t>(n)));
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h) table[static_cast<std::size_t>(g)][static_cast<std::size_t>(h)] = (g + h) % n;
  return from_table(std::move(table));
}

namespace {

// Lexicographic permutation list of {0..n-1}; composition (p∘q)(x) = p(q(x)).
std::vector<std::vector<int>> all_permutations(int n) {
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

}  // namespace

FiniteGroup FiniteGroup::symmetric(int n) {
  if (n < 1 || n > 4) throw std::invalid_argument("symmetric: supported range is 1..4");
  const auto perms = all_permutations(n);
  const int m = static_cast<int>(perms.size());
  auto index_of = [&](const std::vector<int>& p) {
    return static_cast<int>(std::find(perms.begin(), perms.end(), p) - perms.begin());
  };
  std::vector<std::vector<int>> table(static_cast<std::size_t>(m),
                                      std::vector<int>(static_cast<std::size_t>(m)));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      std::vector<int> comp(static_cast<std::size_t>(n));
      for (int x = 0; x < n; ++x)
        comp[static_cast<std::size_t>(x)] = perms[static_cast<std::size_t>(a)][static_cast<std::size_t>(
            perms[static_cast<std::size_t>(b)][static_cast<std::size_t>(x)])];
      table[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = index_of(comp);
    }
  return from_table(std::move(table));
}

FiniteGroup FiniteGroup::product(const FiniteGroup& a, const FiniteGroup& b) {
  const int m = a.order() * b.order();
  auto idx = [&](int x, int y) { return x * b.order() + y; };
  std::vector<std::vector<int>> table(static_cast<std::size_t>(m),
                                      std::vector<int>(static_cast<std::size_t>(m)));
  for (int x1 = 0; x1 < a.order(); ++x1)
    for (int y1 = 0; y1 < b.order(); ++y1)
      for (int x2 = 0; x2 < a.order(); ++x2)
        for (int y2 = 0; y2 < b.order(); ++y2)
          table[static_cast<std::size_t>(idx(x1, y1))][static_cast<std::size_t>(idx(x2, y2))] =
              idx(a.op(x1, x2), b.op(y1, y2));
  return from_table(std::move(table));
}

Matrix scalar_pd_gram(const FiniteGroup& G, const ScalarPDFunction& eta) {
  const int m = G.order();
  Matrix K(m, m);
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c) K(r, c) = eta(G.op(G.inverse(r), c));
  return K;
}

PDCertificate is_scalar_positive_definite(const FiniteGroup& G, const ScalarPDFunction& eta,
                                          double tol) {
  if (eta.size() != G.order())
    throw std::invalid_argument("is_scalar_positive_definite: eta not defined on all of G");
  const Matrix K = scalar_pd_gram(G, eta);
  PDCertificate cert;
  cert.hermitian_deviation = (K - K.adjoint()).cwiseAbs().maxCoeff();
  const double scale = 1.0 + K.cwiseAbs().maxCoeff();
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (K + K.adjoint()), Eigen::EigenvaluesOnly);
  cert.min_eigenvalue = es.eigenvalues().minCoeff();
  cert.positive_definite =
      cert.hermitian_deviation <= tol * scale && cert.min_eigenvalue >= -tol * scale;
  return cert;
}

std::vector<int> epsilon_support(const FiniteGroup& G, const ScalarPDFunction& eta, double eps) {
  std::vector<int> F;
  for (int g = 0; g < G.order(); ++g)
    if (std::abs(eta(g)) >= eps) F.push_back(g);
  return F;
}

}  // namespace pcross

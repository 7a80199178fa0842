#include "pcross/crossed_product.hpp"

#include <stdexcept>

namespace pcross {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

CrossedProduct::CrossedProduct(PartialAction action) {
  auto data = std::make_shared<Data>();
  data->action = std::move(action);
  const FiniteGroup& G = data->action.group();
  const BlockShape& shape = data->action.shape();
  for (int g = 0; g < G.order(); ++g)
    for (int i : data->action.range(g).support)
      for (int p = 0; p < shape.dim(i); ++p)
        for (int q = 0; q < shape.dim(i); ++q) data->labels.push_back({g, i, p, q});
  data_ = std::move(data);
}

CrossedElement::CrossedElement(CrossedProduct system, std::vector<AlgebraElement> coefficients,
                               double tol)
    : system_(std::move(system)), coefficients_(std::move(coefficients)) {
  const PartialAction& alpha = system_.action();
  for (int g = 0; g < system_.group().order(); ++g) {
    AlgebraElement& a = coefficients_[static_cast<std::size_t>(g)];
    const Ideal& ideal = alpha.range(g);
    const double violation = ideal.support_violation(a);
    if (violation > tol * (1.0 + pcross::max_abs_entry(a)))
      throw std::invalid_argument("CrossedElement: coefficient at g=" + std::to_string(g) +
                                  " lies outside D_g (violation " + std::to_string(violation) + ")");
    // Sub-tolerance dust off the ideal is numeric noise; clear it to keep
    // the support invariant exact.
    for (int i = 0; i < a.block_count(); ++i)
      if (!ideal.contains_block(i)) a.block(i).setZero();
  }
}

CrossedElement CrossedProduct::zero() const {
  std::vector<AlgebraElement> coeffs(static_cast<std::size_t>(group().order()),
                                     AlgebraElement::zero(shape()));
  return CrossedElement(*this, std::move(coeffs), kDefaultTol);
}

CrossedElement CrossedProduct::unit() const {
  return monomial(group().identity(), AlgebraElement::identity(shape()));
}

CrossedElement CrossedProduct::monomial(int g, const AlgebraElement& a, double tol) const {
  require(a.shape() == shape(), "monomial: shape mismatch");
  std::vector<AlgebraElement> coeffs(static_cast<std::size_t>(group().order()),
                                     AlgebraElement::zero(shape()));
  coeffs[static_cast<std::size_t>(g)] = a;
  return CrossedElement(*this, std::move(coeffs), tol);
}

CrossedElement CrossedProduct::range_unit_monomial(int g) const {
  return monomial(g, action().range_unit(g));
}

CrossedElement CrossedProduct::basis_element(int idx) const {
  const BasisLabel& l = basis()[static_cast<std::size_t>(idx)];
  return monomial(l.g, AlgebraElement::matrix_unit(shape(), l.block, l.row, l.col));
}

Vector CrossedProduct::coords(const CrossedElement& x) const {
  require(same_system(x.system()), "coords: system mismatch");
  Vector v(dim());
  for (int k = 0; k < dim(); ++k) {
    const BasisLabel& l = basis()[static_cast<std::size_t>(k)];
    v(k) = x.coefficient(l.g).block(l.block)(l.row, l.col);
  }
  return v;
}

CrossedElement CrossedProduct::element(const Vector& v) const {
  require(v.size() == dim(), "element: coordinate dimension mismatch");
  std::vector<AlgebraElement> coeffs(static_cast<std::size_t>(group().order()),
                                     AlgebraElement::zero(shape()));
  for (int k = 0; k < dim(); ++k) {
    const BasisLabel& l = basis()[static_cast<std::size_t>(k)];
    coeffs[static_cast<std::size_t>(l.g)].block(l.block)(l.row, l.col) = v(k);
  }
  return CrossedElement(*this, std::move(coeffs), kDefaultTol);
}

CrossedElement& CrossedElement::operator+=(const CrossedElement& rhs) {
  require(system_.same_system(rhs.system_), "CrossedElement: system mismatch in +");
  for (std::size_t g = 0; g < coefficients_.size(); ++g) coefficients_[g] += rhs.coefficients_[g];
  return *this;
}

CrossedElement& CrossedElement::operator-=(const CrossedElement& rhs) {
  require(system_.same_system(rhs.system_), "CrossedElement: system mismatch in -");
  for (std::size_t g = 0; g < coefficients_.size(); ++g) coefficients_[g] -= rhs.coefficients_[g];
  return *this;
}

CrossedElement& CrossedElement::operator*=(Complex s) {
  for (auto& a : coefficients_) a *= s;
  return *this;
}

double CrossedElement::max_abs_entry() const {
  double m = 0.0;
  for (const auto& a : coefficients_) m = std::max(m, pcross::max_abs_entry(a));
  return m;
}

CrossedElement cp_multiply(const CrossedElement& x, const CrossedElement& y) {
  require(x.system().same_system(y.system()), "cp_multiply: system mismatch");
  const CrossedProduct& sys = x.system();
  const PartialAction& alpha = sys.action();
  const FiniteGroup& G = sys.group();
  std::vector<AlgebraElement> out(static_cast<std::size_t>(G.order()),
                                  AlgebraElement::zero(sys.shape()));
  for (int g = 0; g < G.order(); ++g) {
    const AlgebraElement& a = x.coefficient(g);
    if (pcross::max_abs_entry(a) == 0.0) continue;
    const AlgebraElement pulled = alpha.apply(G.inverse(g), a);
    for (int h = 0; h < G.order(); ++h) {
      const AlgebraElement& b = y.coefficient(h);
      if (pcross::max_abs_entry(b) == 0.0) continue;
      out[static_cast<std::size_t>(G.op(g, h))] += alpha.apply(g, multiply(pulled, b));
    }
  }
  return CrossedElement(sys, std::move(out), kDefaultTol);
}

CrossedElement cp_adjoint(const CrossedElement& x) {
  const CrossedProduct& sys = x.system();
  const PartialAction& alpha = sys.action();
  const FiniteGroup& G = sys.group();
  std::vector<AlgebraElement> out(static_cast<std::size_t>(G.order()),
                                  AlgebraElement::zero(sys.shape()));
  for (int g = 0; g < G.order(); ++g)
    out[static_cast<std::size_t>(g)] = alpha.apply(g, adjoint(x.coefficient(G.inverse(g))));
  return CrossedElement(sys, std::move(out), kDefaultTol);
}

AlgebraElement conditional_expectation(const CrossedElement& x) {
  return x.coefficient(x.system().group().identity());
}

double cp_distance(const CrossedElement& x, const CrossedElement& y) {
  double m = 0.0;
  for (int g = 0; g < x.system().group().order(); ++g)
    m = std::max(m, entrywise_distance(x.coefficient(g), y.coefficient(g)));
  return m;
}

InducedTrace::InducedTrace(const CrossedProduct& system, TracialState tau, double tol)
    : tau_(std::move(tau)) {
  tau_.validate(system.shape(), tol);
  if (!tau_.is_faithful())
    throw std::invalid_argument("InducedTrace: trace must be faithful");
  const TraceInvariance inv = check_invariant_trace(system.action(), tau_, tol);
  if (!inv.invariant)
    throw std::invalid_argument("InducedTrace: trace is not G-invariant (max deviation " +
                                std::to_string(inv.max_deviation) + ")");
}

Complex InducedTrace::operator()(const CrossedElement& x) const {
  return tau_(conditional_expectation(x));
}

double InducedTrace::two_norm(const CrossedElement& x) const {
  const Complex t = (*this)(cp_multiply(cp_adjoint(x), x));
  return std::sqrt(std::max(0.0, t.real()));
}

RegularRepresentation::RegularRepresentation(CrossedProduct system, FiberRepSpec spec)
    : system_(std::move(system)), spec_(std::move(spec)) {
  const BlockShape& shape = system_.shape();
  if (spec_.multiplicities.empty())
    spec_.multiplicities.assign(static_cast<std::size_t>(shape.block_count()), 1);
  require(static_cast<int>(spec_.multiplicities.size()) == shape.block_count(),
          "RegularRepresentation: multiplicity count mismatch");
  block_offsets_.resize(static_cast<std::size_t>(shape.block_count()));
  int offset = 0;
  for (int i = 0; i < shape.block_count(); ++i) {
    require(spec_.multiplicities[static_cast<std::size_t>(i)] >= 1,
            "RegularRepresentation: fiber representation must be faithful (multiplicity >= 1)");
    block_offsets_[static_cast<std::size_t>(i)] = offset;
    offset += spec_.multiplicities[static_cast<std::size_t>(i)] * shape.dim(i);
  }
  fiber_dim_ = offset;
  if (spec_.conjugator.size() != 0)
    require(spec_.conjugator.rows() == fiber_dim_ && spec_.conjugator.cols() == fiber_dim_,
            "RegularRepresentation: conjugator dimension mismatch");
}

Matrix RegularRepresentation::pi(const AlgebraElement& a) const {
  Matrix m = Matrix::Zero(fiber_dim_, fiber_dim_);
  const BlockShape& shape = system_.shape();
  for (int i = 0; i < shape.block_count(); ++i) {
    const int n = shape.dim(i);
    int off = block_offsets_[static_cast<std::size_t>(i)];
    for (int c = 0; c < spec_.multiplicities[static_cast<std::size_t>(i)]; ++c) {
      m.block(off, off, n, n) = a.block(i);
      off += n;
    }
  }
  if (spec_.conjugator.size() != 0) m = spec_.conjugator * m * spec_.conjugator.adjoint();
  return m;
}

Matrix RegularRepresentation::pi_prime(int g, const AlgebraElement& a) const {
  const PartialAction& alpha = system_.action();
  const AlgebraElement cutdown = multiply(a, alpha.range_unit(g));
  return pi(alpha.apply(system_.group().inverse(g), cutdown));
}

Matrix RegularRepresentation::pi_tilde(const AlgebraElement& a) const {
  const int m = system_.group().order();
  Matrix out = Matrix::Zero(total_dim(), total_dim());
  for (int g = 0; g < m; ++g)
    out.block(g * fiber_dim_, g * fiber_dim_, fiber_dim_, fiber_dim_) = pi_prime(g, a);
  return out;
}

Matrix RegularRepresentation::lambda(int g) const {
  const FiniteGroup& G = system_.group();
  Matrix out = Matrix::Zero(total_dim(), total_dim());
  for (int c = 0; c < G.order(); ++c) {
    const int r = G.op(g, c);
    out.block(r * fiber_dim_, c * fiber_dim_, fiber_dim_, fiber_dim_) =
        Matrix::Identity(fiber_dim_, fiber_dim_);
  }
  return out;
}

Matrix RegularRepresentation::integrated(const CrossedElement& x) const {
  require(system_.same_system(x.system()), "integrated: system mismatch");
  const FiniteGroup& G = system_.group();
  Matrix out = Matrix::Zero(total_dim(), total_dim());
  for (int g = 0; g < G.order(); ++g) {
    const AlgebraElement& a = x.coefficient(g);
    if (pcross::max_abs_entry(a) == 0.0) continue;
    for (int c = 0; c < G.order(); ++c) {
      const int r = G.op(g, c);
      out.block(r * fiber_dim_, c * fiber_dim_, fiber_dim_, fiber_dim_) += pi_prime(r, a);
    }
  }
  return out;
}

CovarianceReport check_covariance(const RegularRepresentation& rep, double tol) {
  CovarianceReport report;
  const CrossedProduct& sys = rep.system();
  const PartialAction& alpha = sys.action();
  const FiniteGroup& G = sys.group();
  for (int g = 0; g < G.order(); ++g) {
    const Matrix lg = rep.lambda(g);
    const Matrix lg_inv = rep.lambda(G.inverse(g));
    for (int i : alpha.domain(g).support)
      for (int p = 0; p < sys.shape().dim(i); ++p)
        for (int q = 0; q < sys.shape().dim(i); ++q) {
          const AlgebraElement x = AlgebraElement::matrix_unit(sys.shape(), i, p, q);
          const Matrix lhs = lg * rep.pi_tilde(x) * lg_inv;
          const Matrix rhs = rep.pi_tilde(alpha.apply(g, x));
          const double dev = (lhs - rhs).cwiseAbs().maxCoeff();
          report.max_deviation = std::max(report.max_deviation, dev);
          if (dev > tol) report.violations.push_back({"covariance", g, -1, i, dev});
        }
  }
  report.pass = report.violations.empty();
  return report;
}

double reduced_norm(const RegularRepresentation& rep, const CrossedElement& x) {
  const Matrix m = rep.integrated(x);
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
}

}  // namespace pcross

#include "pcross/algebra.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace pcross {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

BlockShape::BlockShape(std::vector<int> d) : dims(std::move(d)) {
  require(!dims.empty(), "BlockShape: need at least one block");
  for (int n : dims) require(n >= 1, "BlockShape: block sizes must be >= 1");
}

int BlockShape::rep_dim() const { return std::accumulate(dims.begin(), dims.end(), 0); }

int BlockShape::linear_dim() const {
  int d = 0;
  for (int n : dims) d += n * n;
  return d;
}

BlockShape BlockShape::scaled(int n) const {
  std::vector<int> d = dims;
  for (int& x : d) x *= n;
  return BlockShape(d);
}

AlgebraElement::AlgebraElement(BlockShape shape, std::vector<Matrix> blocks)
    : shape_(std::move(shape)), blocks_(std::move(blocks)) {
  require(static_cast<int>(blocks_.size()) == shape_.block_count(),
          "AlgebraElement: block count mismatch");
  for (int i = 0; i < shape_.block_count(); ++i) {
    const Matrix& m = blocks_[static_cast<std::size_t>(i)];
    require(m.rows() == shape_.dim(i) && m.cols() == shape_.dim(i),
            "AlgebraElement: block dimension mismatch at block " + std::to_string(i));
  }
}

AlgebraElement AlgebraElement::zero(const BlockShape& shape) {
  std::vector<Matrix> blocks;
  blocks.reserve(static_cast<std::size_t>(shape.block_count()));
  for (int n : shape.dims) blocks.push_back(Matrix::Zero(n, n));
  return AlgebraElement(shape, std::move(blocks));
}

AlgebraElement AlgebraElement::identity(const BlockShape& shape) {
  std::vector<Matrix> blocks;
  blocks.reserve(static_cast<std::size_t>(shape.block_count()));
  for (int n : shape.dims) blocks.push_back(Matrix::Identity(n, n));
  return AlgebraElement(shape, std::move(blocks));
}

AlgebraElement AlgebraElement::matrix_unit(const BlockShape& shape, int block, int p, int q) {
  AlgebraElement e = zero(shape);
  e.block(block)(p, q) = 1.0;
  return e;
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& rhs) {
  require(shape_ == rhs.shape_, "AlgebraElement: shape mismatch in +");
  for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] += rhs.blocks_[i];
  return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& rhs) {
  require(shape_ == rhs.shape_, "AlgebraElement: shape mismatch in -");
  for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] -= rhs.blocks_[i];
  return *this;
}

AlgebraElement& AlgebraElement::operator*=(Complex scalar) {
  for (auto& b : blocks_) b *= scalar;
  return *this;
}

AlgebraElement multiply(const AlgebraElement& a, const AlgebraElement& b) {
  require(a.shape() == b.shape(), "multiply: shape mismatch");
  AlgebraElement out = AlgebraElement::zero(a.shape());
  for (int i = 0; i < a.block_count(); ++i) out.block(i) = a.block(i) * b.block(i);
  return out;
}

AlgebraElement adjoint(const AlgebraElement& a) {
  AlgebraElement out = AlgebraElement::zero(a.shape());
  for (int i = 0; i < a.block_count(); ++i) out.block(i) = a.block(i).adjoint();
  return out;
}

double operator_norm(const AlgebraElement& a) {
  double norm = 0.0;
  for (int i = 0; i < a.block_count(); ++i) {
    Eigen::JacobiSVD<Matrix> svd(a.block(i));
    if (svd.singularValues().size() > 0) norm = std::max(norm, svd.singularValues()(0));
  }
  return norm;
}

double max_abs_entry(const AlgebraElement& a) {
  double m = 0.0;
  for (int i = 0; i < a.block_count(); ++i) m = std::max(m, a.block(i).cwiseAbs().maxCoeff());
  return m;
}

double entrywise_distance(const AlgebraElement& a, const AlgebraElement& b) {
  require(a.shape() == b.shape(), "entrywise_distance: shape mismatch");
  double m = 0.0;
  for (int i = 0; i < a.block_count(); ++i)
    m = std::max(m, (a.block(i) - b.block(i)).cwiseAbs().maxCoeff());
  return m;
}

bool is_hermitian(const AlgebraElement& a, double tol) {
  const double scale = 1.0 + max_abs_entry(a);
  return entrywise_distance(a, adjoint(a)) <= tol * scale;
}

PositivityCertificate is_positive(const AlgebraElement& a, double tol) {
  PositivityCertificate cert;
  cert.hermitian_deviation = entrywise_distance(a, adjoint(a));
  const double scale = 1.0 + operator_norm(a);
  double min_eig = std::numeric_limits<double>::infinity();
  for (int i = 0; i < a.block_count(); ++i) {
    const Matrix herm = 0.5 * (a.block(i) + a.block(i).adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(herm, Eigen::EigenvaluesOnly);
    min_eig = std::min(min_eig, es.eigenvalues().minCoeff());
  }
  cert.min_eigenvalue = min_eig;
  cert.positive = cert.hermitian_deviation <= tol * scale && min_eig >= -tol * scale;
  return cert;
}

CenterComponent center_component(const AlgebraElement& a, double tol) {
  CenterComponent out;
  const double scale = 1.0 + max_abs_entry(a);
  out.scalars.resize(static_cast<std::size_t>(a.block_count()));
  for (int i = 0; i < a.block_count(); ++i) {
    const int n = a.shape().dim(i);
    const Complex c = a.block(i).trace() / static_cast<double>(n);
    const double dev = (a.block(i) - c * Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
    if (dev > tol * scale) {
      out.central = false;
      out.offending_block = i;
      out.deviation = dev;
      return out;
    }
    out.scalars[static_cast<std::size_t>(i)] = c;
  }
  out.central = true;
  return out;
}

AlgebraElement from_block_scalars(const BlockShape& shape, const std::vector<Complex>& scalars) {
  require(static_cast<int>(scalars.size()) == shape.block_count(),
          "from_block_scalars: scalar count mismatch");
  AlgebraElement out = AlgebraElement::zero(shape);
  for (int i = 0; i < shape.block_count(); ++i)
    out.block(i) = scalars[static_cast<std::size_t>(i)] * Matrix::Identity(shape.dim(i), shape.dim(i));
  return out;
}

Ideal::Ideal(std::vector<int> s, int block_count) : support(std::move(s)) {
  std::sort(support.begin(), support.end());
  support.erase(std::unique(support.begin(), support.end()), support.end());
  for (int i : support)
    require(i >= 0 && i < block_count, "Ideal: block index out of range");
}

Ideal Ideal::full(const BlockShape& shape) {
  Ideal s;
  s.support.resize(static_cast<std::size_t>(shape.block_count()));
  std::iota(s.support.begin(), s.support.end(), 0);
  return s;
}

bool Ideal::contains_block(int i) const {
  return std::binary_search(support.begin(), support.end(), i);
}

AlgebraElement Ideal::unit(const BlockShape& shape) const {
  AlgebraElement u = AlgebraElement::zero(shape);
  for (int i : support) u.block(i) = Matrix::Identity(shape.dim(i), shape.dim(i));
  return u;
}

double Ideal::support_violation(const AlgebraElement& a) const {
  double m = 0.0;
  for (int i = 0; i < a.block_count(); ++i)
    if (!contains_block(i)) m = std::max(m, a.block(i).cwiseAbs().maxCoeff());
  return m;
}

bool Ideal::contains(const AlgebraElement& a, double tol) const {
  return support_violation(a) <= tol * (1.0 + max_abs_entry(a));
}

Ideal Ideal::intersect(const Ideal& other) const {
  Ideal out;
  std::set_intersection(support.begin(), support.end(), other.support.begin(),
                        other.support.end(), std::back_inserter(out.support));
  return out;
}

TracialState TracialState::uniform(const BlockShape& shape) {
  const double w = 1.0 / static_cast<double>(shape.rep_dim());
  return TracialState(std::vector<double>(static_cast<std::size_t>(shape.block_count()), w));
}

void TracialState::validate(const BlockShape& shape, double tol) const {
  require(static_cast<int>(weights.size()) == shape.block_count(),
          "TracialState: weight count mismatch");
  double total = 0.0;
  for (int i = 0; i < shape.block_count(); ++i) {
    const double w = weights[static_cast<std::size_t>(i)];
    require(w >= 0.0, "TracialState: negative weight");
    total += w * shape.dim(i);
  }
  require(std::abs(total - 1.0) <= tol, "TracialState: weights not normalized, tau(1) = " +
                                            std::to_string(total));
}

bool TracialState::is_faithful() const {
  return std::all_of(weights.begin(), weights.end(), [](double w) { return w > 0.0; });
}

Complex TracialState::operator()(const AlgebraElement& a) const {
  Complex t = 0.0;
  for (int i = 0; i < a.block_count(); ++i)
    t += weights[static_cast<std::size_t>(i)] * a.block(i).trace();
  return t;
}

double TracialState::two_norm(const AlgebraElement& a) const {
  const Complex t = (*this)(multiply(adjoint(a), a));
  return std::sqrt(std::max(0.0, t.real()));
}

AlgebraBasis::AlgebraBasis(const BlockShape& s) : shape(s) {
  for (int i = 0; i < s.block_count(); ++i)
    for (int p = 0; p < s.dim(i); ++p)
      for (int q = 0; q < s.dim(i); ++q) labels.push_back({i, p, q});
}

Vector AlgebraBasis::coords(const AlgebraElement& a) const {
  Vector v(dim());
  for (int k = 0; k < dim(); ++k) {
    const Label& l = labels[static_cast<std::size_t>(k)];
    v(k) = a.block(l.block)(l.row, l.col);
  }
  return v;
}

AlgebraElement AlgebraBasis::element(const Vector& v) const {
  AlgebraElement a = AlgebraElement::zero(shape);
  for (int k = 0; k < dim(); ++k) {
    const Label& l = labels[static_cast<std::size_t>(k)];
    a.block(l.block)(l.row, l.col) = v(k);
  }
  return a;
}

AlgebraElement AlgebraBasis::basis_element(int idx) const {
  const Label& l = labels[static_cast<std::size_t>(idx)];
  return AlgebraElement::matrix_unit(shape, l.block, l.row, l.col);
}

}  // namespace pcross

#include "pcross/gns.hpp"

#include <stdexcept>

namespace pcross {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

Vector vectorize(const Matrix& m) {
  return Eigen::Map<const Vector>(m.data(), m.size());
}

Matrix unvectorize(const Vector& v, int n) {
  return Eigen::Map<const Matrix>(v.data(), n, n);
}

// Hermitian square root and inverse square root via eigendecomposition.
void hermitian_sqrt(const Matrix& m, Matrix& sqrt_out, Matrix& inv_sqrt_out) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  require(es.eigenvalues().minCoeff() > 0,
          "GnsSpace: Gram matrix is not positive definite (trace not faithful?)");
  const Eigen::VectorXd sq = es.eigenvalues().cwiseSqrt();
  sqrt_out = es.eigenvectors() * sq.asDiagonal() * es.eigenvectors().adjoint();
  inv_sqrt_out =
      es.eigenvectors() * sq.cwiseInverse().asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

GnsSpace::GnsSpace(std::vector<Matrix> basis_images, Matrix gram, Vector trace_values,
                   Vector unit_coords, Matrix adjoint_mat)
    : basis_images_(std::move(basis_images)),
      gram_(std::move(gram)),
      trace_values_(std::move(trace_values)),
      unit_coords_(std::move(unit_coords)),
      adjoint_mat_(std::move(adjoint_mat)) {
  dim_ = static_cast<int>(basis_images_.size());
  require(dim_ > 0, "GnsSpace: empty basis");
  rep_dim_ = static_cast<int>(basis_images_.front().rows());
  vec_basis_.resize(rep_dim_ * rep_dim_, dim_);
  for (int j = 0; j < dim_; ++j) {
    const Matrix& b = basis_images_[static_cast<std::size_t>(j)];
    require(b.rows() == rep_dim_ && b.cols() == rep_dim_, "GnsSpace: ragged basis images");
    vec_basis_.col(j) = vectorize(b);
  }
  hs_gram_ldlt_.compute(vec_basis_.adjoint() * vec_basis_);
  require(hs_gram_ldlt_.info() == Eigen::Success && hs_gram_ldlt_.isPositive(),
          "GnsSpace: basis images are linearly dependent (representation not faithful?)");
  hermitian_sqrt(gram_, gram_sqrt_, gram_sqrt_inv_);
}

Matrix GnsSpace::represent(const Vector& coords) const {
  return unvectorize(vec_basis_ * coords, rep_dim_);
}

Vector GnsSpace::project_coords(const Matrix& x) const {
  return hs_gram_ldlt_.solve(vec_basis_.adjoint() * vectorize(x));
}

Complex GnsSpace::inner(const Vector& a, const Vector& b) const {
  return (a.adjoint() * gram_ * b)(0);
}

double GnsSpace::two_norm(const Vector& coords) const {
  return std::sqrt(std::max(0.0, inner(coords, coords).real()));
}

Vector GnsSpace::multiply(const Vector& a, const Vector& b) const {
  return project_coords(represent(a) * represent(b));
}

GnsSpace make_algebra_gns(const BlockShape& shape, const TracialState& tau) {
  tau.validate(shape);
  require(tau.is_faithful(), "make_algebra_gns: trace must be faithful");
  const AlgebraBasis basis(shape);
  const int d = basis.dim();
  const int n = shape.rep_dim();

  std::vector<Matrix> images;
  images.reserve(static_cast<std::size_t>(d));
  Vector trace_values(d), unit_coords(d);
  Matrix gram = Matrix::Zero(d, d);
  Matrix adjoint_mat = Matrix::Zero(d, d);

  std::vector<int> offsets(static_cast<std::size_t>(shape.block_count()));
  for (int i = 0, off = 0; i < shape.block_count(); ++i) {
    offsets[static_cast<std::size_t>(i)] = off;
    off += shape.dim(i);
  }

  const AlgebraElement one = AlgebraElement::identity(shape);
  unit_coords = basis.coords(one);
  for (int j = 0; j < d; ++j) {
    const auto& l = basis.labels[static_cast<std::size_t>(j)];
    Matrix img = Matrix::Zero(n, n);
    img(offsets[static_cast<std::size_t>(l.block)] + l.row,
        offsets[static_cast<std::size_t>(l.block)] + l.col) = 1.0;
    images.push_back(std::move(img));
    trace_values(j) = tau.weights[static_cast<std::size_t>(l.block)] * (l.row == l.col ? 1.0 : 0.0);
    const AlgebraElement adj = pcross::adjoint(basis.basis_element(j));
    adjoint_mat.col(j) = basis.coords(adj);
  }
  // <e^i_pq, e^j_rs> = δ_ij δ_pr δ_qs w_i: diagonal Gram.
  for (int j = 0; j < d; ++j)
    gram(j, j) = tau.weights[static_cast<std::size_t>(basis.labels[static_cast<std::size_t>(j)].block)];

  return GnsSpace(std::move(images), std::move(gram), std::move(trace_values),
                  std::move(unit_coords), std::move(adjoint_mat));
}

GnsSpace make_crossed_gns(const CrossedProduct& system, const TracialState& tau) {
  const InducedTrace induced(system, tau);  // validates faithfulness + invariance
  const RegularRepresentation rep(system);
  const int d = system.dim();

  // The unit 1δ_e maps to a proper projection when some D_g are proper;
  // compress to its range so the represented algebra is unital and the HS
  // projection is the trace-preserving conditional expectation.
  const Matrix unit_image = rep.integrated(system.unit());
  std::vector<int> live;
  for (int i = 0; i < rep.total_dim(); ++i)
    if (unit_image(i, i).real() > 0.5) live.push_back(i);

  std::vector<Matrix> images;
  images.reserve(static_cast<std::size_t>(d));
  Vector trace_values(d);
  Matrix gram(d, d);
  Matrix adjoint_mat(d, d);

  std::vector<CrossedElement> basis_elements;
  basis_elements.reserve(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) basis_elements.push_back(system.basis_element(j));

  for (int j = 0; j < d; ++j) {
    const Matrix full = rep.integrated(basis_elements[static_cast<std::size_t>(j)]);
    images.push_back(full(live, live));
    trace_values(j) = 0.0;
    adjoint_mat.col(j) = system.coords(cp_adjoint(basis_elements[static_cast<std::size_t>(j)]));
  }
  const int e = system.group().identity();
  for (int j = 0; j < d; ++j) {
    const auto& l = system.basis()[static_cast<std::size_t>(j)];
    if (l.g == e && l.row == l.col)
      trace_values(j) = tau.weights[static_cast<std::size_t>(l.block)];
  }
  // Fibers are τ̃-orthogonal: <aδ_g, bδ_h> = δ_{gh} τ(a*b).
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const auto& li = system.basis()[static_cast<std::size_t>(i)];
      const auto& lj = system.basis()[static_cast<std::size_t>(j)];
      gram(i, j) = (li.g == lj.g && li.block == lj.block && li.row == lj.row && li.col == lj.col)
                       ? Complex(tau.weights[static_cast<std::size_t>(li.block)], 0.0)
                       : Complex(0.0, 0.0);
    }

  return GnsSpace(std::move(images), std::move(gram), std::move(trace_values),
                  system.coords(system.unit()), std::move(adjoint_mat));
}

Matrix induce_operator(const GnsSpace& space, const LinearMapOnAlgebra& map) {
  return space.gram_sqrt() * map.mat * space.gram_sqrt_inv();
}

double induced_operator_norm(const GnsSpace& space, const LinearMapOnAlgebra& map) {
  Eigen::JacobiSVD<Matrix> svd(induce_operator(space, map));
  return svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
}

std::vector<double> induced_singular_values(const GnsSpace& space,
                                            const LinearMapOnAlgebra& map) {
  Eigen::JacobiSVD<Matrix> svd(induce_operator(space, map));
  const auto& sv = svd.singularValues();
  return std::vector<double>(sv.data(), sv.data() + sv.size());
}

FiniteRankApproximation finite_rank_approximation(const GnsSpace& space,
                                                  const LinearMapOnAlgebra& map, double eps) {
  require(eps >= 0, "finite_rank_approximation: eps must be nonnegative");
  const Matrix on = induce_operator(space, map);
  Eigen::JacobiSVD<Matrix> svd(on, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const int d = static_cast<int>(sv.size());

  int rank = d;
  for (int r = 0; r <= d; ++r) {
    const double dropped = r < d ? sv(r) : 0.0;
    if (dropped <= eps) {
      rank = r;
      break;
    }
  }
  Matrix truncated = Matrix::Zero(d, d);
  for (int k = 0; k < rank; ++k)
    truncated += sv(k) * svd.matrixU().col(k) * svd.matrixV().col(k).adjoint();

  FiniteRankApproximation out;
  out.rank = rank;
  out.achieved_bound = rank < d ? sv(rank) : 0.0;
  out.map = {space.gram_sqrt_inv() * truncated * space.gram_sqrt()};
  return out;
}

MapCertificate check_tau_decreasing(const GnsSpace& space, const LinearMapOnAlgebra& map,
                                    double tol) {
  const int d = space.dim();
  // Values of the functional τ − τ∘φ on the basis.
  Vector f(d);
  for (int j = 0; j < d; ++j) {
    Vector ej = Vector::Zero(d);
    ej(j) = 1.0;
    f(j) = space.trace(ej) - space.trace(map.mat * ej);
  }
  // Density element w.r.t. the pairing (d, b) ↦ τ(d·b).
  Matrix pairing(d, d);
  for (int beta = 0; beta < d; ++beta) {
    Vector eb = Vector::Zero(d);
    eb(beta) = 1.0;
    for (int j = 0; j < d; ++j) {
      Vector ej = Vector::Zero(d);
      ej(j) = 1.0;
      pairing(j, beta) = space.trace(space.multiply(eb, ej));
    }
  }
  const Vector density = pairing.partialPivLu().solve(f);
  const Matrix rep = space.represent(density);

  MapCertificate cert;
  cert.hermitian_deviation = (rep - rep.adjoint()).cwiseAbs().maxCoeff();
  const double scale = 1.0 + rep.cwiseAbs().maxCoeff();
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rep + rep.adjoint()), Eigen::EigenvaluesOnly);
  cert.certificate = es.eigenvalues().minCoeff();
  cert.pass = cert.hermitian_deviation <= tol * scale && cert.certificate >= -tol * scale;
  return cert;
}

MapCertificate check_completely_positive(const GnsSpace& space, const LinearMapOnAlgebra& map,
                                         double tol) {
  const int dp = space.rep_dim();
  Matrix choi = Matrix::Zero(dp * dp, dp * dp);
  for (int p = 0; p < dp; ++p)
    for (int q = 0; q < dp; ++q) {
      Matrix unit = Matrix::Zero(dp, dp);
      unit(p, q) = 1.0;
      // (φ∘E_B)(E_pq), expressed back in M_{d'}.
      const Matrix img = space.represent(map.mat * space.project_coords(unit));
      choi.block(p * dp, q * dp, dp, dp) = img;
    }

  MapCertificate cert;
  cert.hermitian_deviation = (choi - choi.adjoint()).cwiseAbs().maxCoeff();
  const double scale = 1.0 + choi.cwiseAbs().maxCoeff();
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (choi + choi.adjoint()), Eigen::EigenvaluesOnly);
  cert.certificate = es.eigenvalues().minCoeff();
  cert.pass = cert.hermitian_deviation <= tol * scale && cert.certificate >= -tol * scale;
  return cert;
}

bool map_is_unital(const GnsSpace& space, const LinearMapOnAlgebra& map, double tol) {
  const Vector image = map.mat * space.unit_coords();
  return (image - space.unit_coords()).cwiseAbs().maxCoeff() <= tol;
}

bool map_is_hermitian_preserving(const GnsSpace& space, const LinearMapOnAlgebra& map,
                                 double tol) {
  const int d = space.dim();
  double dev = 0.0;
  for (int j = 0; j < d; ++j) {
    Vector ej = Vector::Zero(d);
    ej(j) = 1.0;
    const Vector lhs = map.mat * space.adjoint(ej);
    const Vector rhs = space.adjoint(map.mat * ej);
    dev = std::max(dev, (lhs - rhs).cwiseAbs().maxCoeff());
  }
  return dev <= tol * (1.0 + map.mat.cwiseAbs().maxCoeff());
}

UcpCertificate check_ucp(const GnsSpace& space, const LinearMapOnAlgebra& map, double tol) {
  UcpCertificate cert;
  cert.unital = map_is_unital(space, map, tol);
  cert.cp = check_completely_positive(space, map, tol);
  return cert;
}

}  // namespace pcross

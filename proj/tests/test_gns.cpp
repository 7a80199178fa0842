#include <doctest.h>

#include "pcross/gns.hpp"
#include "pcross/systems.hpp"
#include "test_util.hpp"

using namespace pcross;
using testutil::random_crossed;

namespace {

// phi(a) = tau(a)·1 in matrix-unit coordinates.
LinearMapOnAlgebra trace_functional_map(const BlockShape& shape, const TracialState& tau) {
  const AlgebraBasis basis(shape);
  Matrix m(basis.dim(), basis.dim());
  const Vector one = basis.coords(AlgebraElement::identity(shape));
  for (int j = 0; j < basis.dim(); ++j) m.col(j) = tau(basis.basis_element(j)) * one;
  return {m};
}

}  // namespace

TEST_CASE("two-norm on algebra and crossed spaces") {
  const SystemDescription w1 = preset_system("W1");
  const GnsSpace space = make_algebra_gns(w1.shape, w1.trace);
  const AlgebraBasis basis(w1.shape);
  CHECK(space.two_norm(basis.coords(AlgebraElement::identity(w1.shape))) == doctest::Approx(1.0));

  AlgebraElement e2 = AlgebraElement::zero(w1.shape);
  e2.block(1)(0, 0) = 1.0;
  CHECK(space.two_norm(basis.coords(e2)) == doctest::Approx(std::sqrt(0.5)));

  // Definition check against the trace route on random elements.
  Rng rng(51);
  for (int t = 0; t < 10; ++t) {
    const AlgebraElement a = testutil::random_element(rng, w1.shape);
    CHECK(space.two_norm(basis.coords(a)) == doctest::Approx(w1.trace.two_norm(a)).epsilon(1e-12));
  }
}

TEST_CASE("crossed GNS Gram agrees with the trace pairing") {
  const SystemDescription sys = generate_random_system(23);
  const CrossedProduct cp(sys.action);
  const GnsSpace space = make_crossed_gns(cp, sys.trace);
  const InducedTrace tau(cp, sys.trace);
  for (int i = 0; i < cp.dim(); ++i)
    for (int j = 0; j < cp.dim(); ++j) {
      const Complex direct =
          tau(cp_multiply(cp_adjoint(cp.basis_element(i)), cp.basis_element(j)));
      CHECK(std::abs(space.gram()(i, j) - direct) < 1e-10);
    }
  // Orthonormalization consistency: G^{1/2}·G^{-1/2} = I.
  CHECK((space.gram_sqrt() * space.gram_sqrt_inv() -
         Matrix::Identity(cp.dim(), cp.dim())).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("induce_operator: identity, trace functional, contraction bound") {
  const SystemDescription sys = preset_system("W1");
  const GnsSpace space = make_algebra_gns(sys.shape, sys.trace);
  const AlgebraBasis basis(sys.shape);
  const int d = basis.dim();

  CHECK((induce_operator(space, LinearMapOnAlgebra::identity(d)) - Matrix::Identity(d, d))
            .cwiseAbs()
            .maxCoeff() < 1e-12);

  // tau(a)·1 induces the rank-one orthogonal projection onto span(1).
  const Matrix p = induce_operator(space, trace_functional_map(sys.shape, sys.trace));
  CHECK((p * p - p).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((p - p.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(std::abs(p.trace() - Complex(1.0)) < 1e-12);

  // UCP tau-decreasing maps induce contractions.
  Rng rng(52);
  for (int t = 0; t < 10; ++t) {
    const SystemDescription s = generate_random_system(60 + static_cast<std::uint64_t>(t));
    const GnsSpace sp = make_algebra_gns(s.shape, s.trace);
    const LinearMapOnAlgebra phi = random_tau_preserving_ucp(rng, s.shape, s.trace);
    REQUIRE(check_ucp(sp, phi).pass());
    REQUIRE(check_tau_decreasing(sp, phi).pass);
    CHECK(induced_operator_norm(sp, phi) <= 1.0 + 1e-9);
  }
}

TEST_CASE("finite rank approximation") {
  const SystemDescription sys = preset_system("W1");
  const GnsSpace space = make_algebra_gns(sys.shape, sys.trace);
  const AlgebraBasis basis(sys.shape);
  const int d = basis.dim();
  const LinearMapOnAlgebra id = LinearMapOnAlgebra::identity(d);

  // eps at or above the norm needs rank 0; eps = 0 on the identity needs full rank.
  CHECK(finite_rank_approximation(space, id, 1.0).rank == 0);
  CHECK(finite_rank_approximation(space, id, 0.0).rank == d);

  // tau(a)1 + small perturbation: rank 1 at eps above the perturbation scale.
  Rng rng(53);
  Matrix noise(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) noise(r, c) = rng.complex_normal();
  noise *= 0.01 / noise.norm();
  const LinearMapOnAlgebra perturbed{trace_functional_map(sys.shape, sys.trace).mat + noise};
  const FiniteRankApproximation fr = finite_rank_approximation(space, perturbed, 0.05);
  CHECK(fr.rank == 1);
  CHECK(fr.achieved_bound <= 0.05);

  // The reported bound is the exact operator distance.
  const FiniteRankApproximation fr2 = finite_rank_approximation(space, perturbed, 0.001);
  const double measured =
      induced_operator_norm(space, {perturbed.mat - fr2.map.mat});
  CHECK(measured == doctest::Approx(fr2.achieved_bound).epsilon(1e-9));
}

TEST_CASE("tau-decreasing certification") {
  const SystemDescription sys = preset_system("W1");
  const GnsSpace space = make_algebra_gns(sys.shape, sys.trace);
  const AlgebraBasis basis(sys.shape);
  const int d = basis.dim();

  const MapCertificate ident = check_tau_decreasing(space, LinearMapOnAlgebra::identity(d));
  CHECK(ident.pass);
  CHECK(std::abs(ident.certificate) < 1e-12);

  CHECK(check_tau_decreasing(space, trace_functional_map(sys.shape, sys.trace)).pass);

  const MapCertificate doubled =
      check_tau_decreasing(space, {2.0 * Matrix::Identity(d, d)});
  CHECK_FALSE(doubled.pass);
  CHECK(doubled.certificate < -0.5);
}

TEST_CASE("complete positivity certification") {
  const SystemDescription sys = preset_system("W1");
  const GnsSpace space = make_algebra_gns(sys.shape, sys.trace);
  const AlgebraBasis basis(sys.shape);
  CHECK(check_completely_positive(space, LinearMapOnAlgebra::identity(basis.dim())).pass);
  CHECK(check_completely_positive(space, trace_functional_map(sys.shape, sys.trace)).pass);

  // Transpose on a full 2x2 block: Choi matrix is the swap with eigenvalue -1.
  const BlockShape m2({2});
  const TracialState tr2 = TracialState::uniform(m2);
  const GnsSpace space2 = make_algebra_gns(m2, tr2);
  const AlgebraBasis basis2(m2);
  Matrix transpose = Matrix::Zero(4, 4);
  for (int j = 0; j < 4; ++j) {
    const auto& l = basis2.labels[static_cast<std::size_t>(j)];
    const AlgebraElement t = AlgebraElement::matrix_unit(m2, 0, l.col, l.row);
    transpose.col(j) = basis2.coords(t);
  }
  const MapCertificate cert = check_completely_positive(space2, {transpose});
  CHECK_FALSE(cert.pass);
  CHECK(cert.certificate == doctest::Approx(-1.0));
}

TEST_CASE("CP maps are positive at level one") {
  Rng rng(54);
  for (int t = 0; t < 5; ++t) {
    const SystemDescription sys = generate_random_system(80 + static_cast<std::uint64_t>(t));
    const GnsSpace space = make_algebra_gns(sys.shape, sys.trace);
    const AlgebraBasis basis(sys.shape);
    const LinearMapOnAlgebra phi = random_ucp_map(rng, space);
    REQUIRE(check_completely_positive(space, phi).pass);
    for (int s = 0; s < 5; ++s) {
      const AlgebraElement b = testutil::random_element(rng, sys.shape);
      const AlgebraElement psd = multiply(adjoint(b), b);
      const AlgebraElement image = basis.element(phi.mat * basis.coords(psd));
      CHECK(is_positive(image, 1e-9).positive);
    }
  }
}

TEST_CASE("the HS projection is the trace-preserving conditional expectation") {
  Rng rng(55);
  for (std::uint64_t seed : {7ull, 31ull}) {
    const SystemDescription sys = generate_random_system(seed);
    const CrossedProduct cp(sys.action);
    const GnsSpace space = make_crossed_gns(cp, sys.trace);
    const int dp = space.rep_dim();

    // E_B itself is UCP: the identity map's certification exercises the Choi
    // matrix of E_B.
    CHECK(check_completely_positive(space, LinearMapOnAlgebra::identity(space.dim())).pass);
    CHECK((space.represent(space.project_coords(Matrix::Identity(dp, dp))) -
           Matrix::Identity(dp, dp))
              .cwiseAbs()
              .maxCoeff() < 1e-9);

    for (int t = 0; t < 5; ++t) {
      const Matrix x = rng.gaussian_matrix(dp, dp);
      const Matrix ex = space.represent(space.project_coords(x));
      // Trace-preserving.
      CHECK(std::abs(x.trace() - ex.trace()) < 1e-8 * (1.0 + std::abs(x.trace())));
      // Idempotent.
      CHECK((space.represent(space.project_coords(ex)) - ex).cwiseAbs().maxCoeff() < 1e-8);
      // B-bimodule.
      const Matrix b = space.represent(space.project_coords(rng.gaussian_matrix(dp, dp)));
      const Matrix c = space.represent(space.project_coords(rng.gaussian_matrix(dp, dp)));
      const Matrix lhs = space.represent(space.project_coords(b * x * c));
      CHECK((lhs - b * ex * c).cwiseAbs().maxCoeff() < 1e-7 * (1.0 + lhs.cwiseAbs().maxCoeff()));
    }
  }
}

TEST_CASE("composition closure of certified maps") {
  Rng rng(56);
  const SystemDescription sys = generate_random_system(12);
  const GnsSpace space = make_algebra_gns(sys.shape, sys.trace);
  for (int t = 0; t < 5; ++t) {
    const LinearMapOnAlgebra phi = random_tau_preserving_ucp(rng, sys.shape, sys.trace);
    const LinearMapOnAlgebra psi = random_tau_preserving_ucp(rng, sys.shape, sys.trace);
    REQUIRE(check_ucp(space, phi).pass());
    REQUIRE(check_ucp(space, psi).pass());
    REQUIRE(check_tau_decreasing(space, phi).pass);
    REQUIRE(check_tau_decreasing(space, psi).pass);
    const LinearMapOnAlgebra comp = phi.compose(psi);
    CHECK(check_ucp(space, comp).pass());
    CHECK(check_tau_decreasing(space, comp).pass);
  }
}

TEST_CASE("hermitian-preserving flag") {
  const SystemDescription sys = preset_system("W1");
  const GnsSpace space = make_algebra_gns(sys.shape, sys.trace);
  CHECK(map_is_hermitian_preserving(space, LinearMapOnAlgebra::identity(space.dim())));
  Matrix skew = Matrix::Identity(space.dim(), space.dim());
  skew(0, 1) = Complex(0.0, 1.0);
  CHECK_FALSE(map_is_hermitian_preserving(space, {skew}));
}

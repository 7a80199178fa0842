#include <doctest.h>

#include "pcross/crossed_product.hpp"
#include "pcross/systems.hpp"
#include "test_util.hpp"

using namespace pcross;
using testutil::random_crossed;
using testutil::random_element;

namespace {

CrossedProduct w1() { return CrossedProduct(preset_system("W1").action); }

AlgebraElement e2(const BlockShape& shape) {
  AlgebraElement x = AlgebraElement::zero(shape);
  x.block(1)(0, 0) = 1.0;
  return x;
}

// Independent multiplication oracle: recover coefficients of a product from
// the integrated regular representation, Λ(xy) = Λ(x)Λ(y). The coefficient
// at m sits in the fiber block (m, e) as π(α_{m⁻¹}(a_m)).
CrossedElement from_integrated(const RegularRepresentation& rep, const Matrix& big) {
  const CrossedProduct& sys = rep.system();
  const FiniteGroup& G = sys.group();
  const BlockShape& shape = sys.shape();
  std::vector<int> offsets(static_cast<std::size_t>(shape.block_count()));
  for (int i = 0, off = 0; i < shape.block_count(); ++i) {
    offsets[static_cast<std::size_t>(i)] = off;
    off += shape.dim(i);
  }
  const int f = rep.fiber_dim();
  const int e = G.identity();
  CrossedElement out = sys.zero();
  for (int m = 0; m < G.order(); ++m) {
    const Matrix blk = big.block(m * f, e * f, f, f);
    AlgebraElement pulled = AlgebraElement::zero(shape);
    for (int i : sys.action().domain(m).support)
      pulled.block(i) = blk.block(offsets[static_cast<std::size_t>(i)],
                                  offsets[static_cast<std::size_t>(i)], shape.dim(i), shape.dim(i));
    out += sys.monomial(m, sys.action().apply(m, pulled), 1e-8);
  }
  return out;
}

}  // namespace

TEST_CASE("cp_multiply: unit, W1 witness, associativity") {
  const CrossedProduct cp = w1();
  Rng rng(31);
  const CrossedElement x = random_crossed(rng, cp);
  CHECK(cp_distance(cp_multiply(cp.unit(), x), x) < 1e-14);
  CHECK(cp_distance(cp_multiply(x, cp.unit()), x) < 1e-14);

  const CrossedElement ug = cp.monomial(1, e2(cp.shape()));
  const CrossedElement sq = cp_multiply(ug, ug);
  CHECK(cp_distance(sq, cp.monomial(0, e2(cp.shape()))) < 1e-14);

  for (int t = 0; t < 20; ++t) {
    const CrossedElement a = random_crossed(rng, cp);
    const CrossedElement b = random_crossed(rng, cp);
    const CrossedElement c = random_crossed(rng, cp);
    CHECK(cp_distance(cp_multiply(cp_multiply(a, b), c), cp_multiply(a, cp_multiply(b, c))) <
          1e-12);
  }
}

TEST_CASE("cp_multiply agrees with the regular-representation oracle") {
  Rng rng(32);
  for (std::uint64_t seed : {3ull, 17ull, 40ull}) {
    const SystemDescription sys = generate_random_system(seed);
    const CrossedProduct cp(sys.action);
    const RegularRepresentation rep(cp);
    for (int t = 0; t < 5; ++t) {
      const CrossedElement x = random_crossed(rng, cp);
      const CrossedElement y = random_crossed(rng, cp);
      const CrossedElement direct = cp_multiply(x, y);
      const CrossedElement via_rep = from_integrated(rep, rep.integrated(x) * rep.integrated(y));
      CHECK(cp_distance(direct, via_rep) < 1e-9);
    }
  }
}

TEST_CASE("cp_adjoint: involution laws") {
  const CrossedProduct cp = w1();
  Rng rng(33);
  const AlgebraElement a = random_element(rng, cp.shape());
  CHECK(cp_distance(cp_adjoint(cp.monomial(0, a)), cp.monomial(0, adjoint(a))) < 1e-14);

  const CrossedElement ug = cp.monomial(1, e2(cp.shape()));
  CHECK(cp_distance(cp_adjoint(ug), ug) < 1e-14);

  for (int t = 0; t < 20; ++t) {
    const CrossedElement x = random_crossed(rng, cp);
    const CrossedElement y = random_crossed(rng, cp);
    CHECK(cp_distance(cp_adjoint(cp_adjoint(x)), x) < 1e-12);
    CHECK(cp_distance(cp_adjoint(cp_multiply(x, y)),
                      cp_multiply(cp_adjoint(y), cp_adjoint(x))) < 1e-12);
  }
}

TEST_CASE("coefficients outside the ideal are rejected") {
  const CrossedProduct cp = w1();
  AlgebraElement bad = AlgebraElement::identity(cp.shape());  // not in D_g
  CHECK_THROWS_AS(cp.monomial(1, bad), std::invalid_argument);
}

TEST_CASE("conditional expectation") {
  const CrossedProduct cp = w1();
  Rng rng(34);
  const AlgebraElement a = random_element(rng, cp.shape());
  CHECK(entrywise_distance(conditional_expectation(cp.monomial(0, a)), a) == 0.0);
  const AlgebraElement z = AlgebraElement::zero(cp.shape());
  CHECK(entrywise_distance(conditional_expectation(cp.monomial(1, e2(cp.shape()))), z) == 0.0);

  const CrossedElement mixed = cp.monomial(0, e2(cp.shape())) + cp.monomial(1, e2(cp.shape()));
  CHECK(entrywise_distance(conditional_expectation(mixed), e2(cp.shape())) == 0.0);
}

TEST_CASE("conditional expectation is positive, unital, bimodular") {
  Rng rng(35);
  const SystemDescription sys = generate_random_system(5);
  const CrossedProduct cp(sys.action);
  CHECK(entrywise_distance(conditional_expectation(cp.unit()),
                           AlgebraElement::identity(cp.shape())) == 0.0);
  for (int t = 0; t < 10; ++t) {
    const CrossedElement x = random_crossed(rng, cp);
    CHECK(is_positive(conditional_expectation(cp_multiply(cp_adjoint(x), x)), 1e-9).positive);
    // A-bimodule: E(a x b) = a E(x) b for a, b in A.
    const AlgebraElement a = random_element(rng, cp.shape());
    const AlgebraElement b = random_element(rng, cp.shape());
    const CrossedElement axb =
        cp_multiply(cp.monomial(0, a), cp_multiply(x, cp.monomial(0, b)));
    CHECK(entrywise_distance(conditional_expectation(axb),
                             multiply(a, multiply(conditional_expectation(x), b))) < 1e-10);
  }
}

TEST_CASE("induced trace") {
  const CrossedProduct cp = w1();
  const InducedTrace tau(cp, TracialState({0.5, 0.5}));
  CHECK(tau(cp.unit()).real() == doctest::Approx(1.0));
  const CrossedElement mixed = cp.monomial(0, e2(cp.shape())) + cp.monomial(1, e2(cp.shape()));
  CHECK(tau(mixed).real() == doctest::Approx(0.5));

  Rng rng(36);
  for (int t = 0; t < 20; ++t) {
    const CrossedElement x = random_crossed(rng, cp);
    const CrossedElement y = random_crossed(rng, cp);
    CHECK(std::abs(tau(cp_multiply(x, y)) - tau(cp_multiply(y, x))) < 1e-12);
    CHECK(tau(cp_multiply(cp_adjoint(x), x)).real() >= 0.0);
  }
}

TEST_CASE("induced trace rejects non-invariant or unfaithful traces") {
  const FiniteGroup z2 = FiniteGroup::cyclic(2);
  const BlockShape shape({1, 1});
  std::vector<std::vector<BlockIso>> maps(2);
  maps[1].push_back({0, 1, Matrix::Identity(1, 1)});
  maps[1].push_back({1, 0, Matrix::Identity(1, 1)});
  const CrossedProduct swap_cp{PartialAction(z2, shape, std::move(maps))};
  CHECK_THROWS_AS(InducedTrace(swap_cp, TracialState({0.25, 0.75})), std::invalid_argument);
  CHECK_THROWS_AS(InducedTrace(w1(), TracialState({1.0, 0.0})), std::invalid_argument);
}

TEST_CASE("regular representation: trivial group reduces to the defining rep") {
  const BlockShape shape({2, 1});
  const PartialAction alpha = PartialAction::trivial_global(FiniteGroup::trivial(), shape);
  const CrossedProduct cp(alpha);
  const RegularRepresentation rep(cp);
  Rng rng(37);
  const AlgebraElement a = random_element(rng, shape);
  CHECK((rep.integrated(cp.monomial(0, a)) - rep.pi(a)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("regular representation on W1: fibers and lambda") {
  const CrossedProduct cp = w1();
  const RegularRepresentation rep(cp);
  REQUIRE(rep.fiber_dim() == 2);
  REQUIRE(rep.total_dim() == 4);

  Matrix expected = Matrix::Zero(4, 4);
  expected(1, 1) = 1.0;
  expected(3, 3) = 1.0;
  CHECK((rep.pi_tilde(e2(cp.shape())) - expected).cwiseAbs().maxCoeff() < 1e-14);

  const Matrix lg = rep.lambda(1);
  Matrix swap = Matrix::Zero(4, 4);
  swap(0, 2) = swap(1, 3) = swap(2, 0) = swap(3, 1) = 1.0;
  CHECK((lg - swap).cwiseAbs().maxCoeff() == 0.0);
  CHECK((lg * lg - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);

  // lambda is a unitary representation.
  const FiniteGroup& G = cp.group();
  for (int g = 0; g < G.order(); ++g)
    for (int h = 0; h < G.order(); ++h)
      CHECK((rep.lambda(g) * rep.lambda(h) - rep.lambda(G.op(g, h))).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("covariance: W1 and block-swap systems pass, inconsistent data is caught") {
  CHECK(check_covariance(RegularRepresentation(w1())).max_deviation < 1e-12);

  const BlockShape shape({2});
  const PartialAction trivial = PartialAction::trivial_global(FiniteGroup::cyclic(2), shape);
  CHECK(check_covariance(RegularRepresentation{CrossedProduct(trivial)}).pass);

  const FiniteGroup z2 = FiniteGroup::cyclic(2);
  const BlockShape shape2({2, 2});
  std::vector<std::vector<BlockIso>> maps(2);
  Matrix u(2, 2);
  u << 0, 1, 1, 0;
  maps[1].push_back({0, 1, u});
  maps[1].push_back({1, 0, u});
  const PartialAction good(z2, shape2, std::move(maps));
  CHECK(validate_partial_action(good).valid);
  CHECK(check_covariance(RegularRepresentation{CrossedProduct(good)}).pass);

  // Forward and backward unitaries that are not inverse to each other break
  // the axioms; covariance inherits a nonzero deviation.
  std::vector<std::vector<BlockIso>> broken_maps(2);
  Matrix v(2, 2);
  v << 0, 1, 1, 0;
  broken_maps[1].push_back({0, 1, v});
  broken_maps[1].push_back({1, 0, Matrix::Identity(2, 2)});
  const PartialAction broken(z2, shape2, std::move(broken_maps));
  CHECK_FALSE(validate_partial_action(broken).valid);
  CHECK_FALSE(check_covariance(RegularRepresentation{CrossedProduct(broken)}).pass);
}

TEST_CASE("reduced norm: unit, W1 witness against the explicit matrix") {
  const CrossedProduct cp = w1();
  const RegularRepresentation rep(cp);
  CHECK(reduced_norm(rep, cp.unit()) == doctest::Approx(1.0));

  const CrossedElement witness =
      cp.monomial(0, e2(cp.shape())) + cp.monomial(1, e2(cp.shape()));
  // Oracle: the explicit 4x4 matrix (I+swap) ⊗ diag(0,1) has norm 2.
  Matrix explicit4 = Matrix::Zero(4, 4);
  explicit4(1, 1) = explicit4(3, 3) = 1.0;
  explicit4(1, 3) = explicit4(3, 1) = 1.0;
  CHECK((rep.integrated(witness) - explicit4).cwiseAbs().maxCoeff() < 1e-14);
  Eigen::JacobiSVD<Matrix> svd(explicit4);
  CHECK(svd.singularValues()(0) == doctest::Approx(2.0));
  CHECK(reduced_norm(rep, witness) == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("reduced norm: faithfulness and the isometric embedding of A") {
  Rng rng(38);
  for (std::uint64_t seed : {2ull, 9ull}) {
    const SystemDescription sys = generate_random_system(seed);
    const CrossedProduct cp(sys.action);
    const RegularRepresentation rep(cp);
    for (int t = 0; t < 5; ++t) {
      const CrossedElement x = random_crossed(rng, cp);
      if (reduced_norm(rep, x) < 1e-9) CHECK(x.max_abs_entry() < 1e-9);
      const AlgebraElement a = random_element(rng, cp.shape());
      const double na = operator_norm(a);
      CHECK(std::abs(reduced_norm(rep, cp.monomial(0, a)) - na) <= 1e-9 * (1.0 + na));
    }
  }
}

TEST_CASE("reduced norm is independent of the faithful fiber representation") {
  Rng rng(39);
  for (std::uint64_t seed : {4ull, 21ull}) {
    const SystemDescription sys = generate_random_system(seed);
    const CrossedProduct cp(sys.action);
    const RegularRepresentation rep(cp);
    FiberRepSpec doubled;
    doubled.multiplicities.assign(static_cast<std::size_t>(cp.shape().block_count()), 2);
    const RegularRepresentation rep2(cp, doubled);
    FiberRepSpec conjugated;
    conjugated.conjugator = rng.unitary(rep.fiber_dim());
    const RegularRepresentation rep3(cp, conjugated);
    for (int t = 0; t < 5; ++t) {
      const CrossedElement x = random_crossed(rng, cp);
      const double n1 = reduced_norm(rep, x);
      CHECK(std::abs(reduced_norm(rep2, x) - n1) <= 1e-9 * (1.0 + n1));
      CHECK(std::abs(reduced_norm(rep3, x) - n1) <= 1e-9 * (1.0 + n1));
    }
  }
}

TEST_CASE("E is contractive for the 2-norms and induced trace is faithful") {
  Rng rng(40);
  const SystemDescription sys = generate_random_system(14);
  const CrossedProduct cp(sys.action);
  const InducedTrace tau(cp, sys.trace);
  for (int t = 0; t < 20; ++t) {
    const CrossedElement x = random_crossed(rng, cp);
    const AlgebraElement ex = conditional_expectation(x);
    const double lhs = sys.trace(multiply(adjoint(ex), ex)).real();
    const double rhs = tau(cp_multiply(cp_adjoint(x), x)).real();
    CHECK(lhs <= rhs + 1e-12);
    if (x.max_abs_entry() > 1e-6) CHECK(rhs > 0.0);
  }
}

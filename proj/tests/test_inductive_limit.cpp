#include <doctest.h>

#include "pcross/inductive_limit.hpp"
#include "pcross/systems.hpp"
#include "test_util.hpp"

using namespace pcross;

namespace {

ChainStage stage_of(const BlockShape& shape, const TracialState& trace) {
  return {shape, trace, std::nullopt};
}

Embedding identity_embedding(const BlockShape& shape) {
  Embedding emb;
  emb.multiplicity.assign(static_cast<std::size_t>(shape.block_count()),
                          std::vector<int>(static_cast<std::size_t>(shape.block_count()), 0));
  for (int i = 0; i < shape.block_count(); ++i)
    emb.multiplicity[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1;
  return emb;
}

}  // namespace

TEST_CASE("validate_embedding: identity, C into M2, non-unital rejection") {
  const BlockShape c1({1});
  const BlockShape m2({2});
  const ChainStage src = stage_of(c1, TracialState({1.0}));
  const ChainStage tgt = stage_of(m2, TracialState({0.5}));

  CHECK(validate_embedding(identity_embedding(c1), src, src).valid);

  Embedding twice;
  twice.multiplicity = {{2}};
  CHECK(validate_embedding(twice, src, tgt).valid);

  Embedding once;
  once.multiplicity = {{1}};
  const EmbeddingValidation rejected = validate_embedding(once, src, tgt);
  CHECK_FALSE(rejected.valid);
  REQUIRE_FALSE(rejected.violations.empty());
  CHECK(rejected.violations.front().find("non-unital") != std::string::npos);

  // Trace mismatch is caught.
  const ChainStage bad_tgt = stage_of(m2, TracialState({0.5}));
  const ChainStage bad_src = stage_of(c1, TracialState({1.0}));
  Embedding twice_bad;
  twice_bad.multiplicity = {{2}};
  const ChainStage wrong_src = stage_of(BlockShape({1}), TracialState({1.0}));
  // weight equation: w_src = 2 * 0.5 = 1 holds; corrupt the target instead
  const ChainStage corrupt_tgt{m2, TracialState({0.5}), std::nullopt};
  CHECK(validate_embedding(twice_bad, wrong_src, corrupt_tgt).valid);
}

TEST_CASE("embedding application is a unital *-homomorphism") {
  Rng rng(81);
  const ChainDescription chain = generate_random_chain(5, 3, false);
  for (std::size_t s = 0; s + 1 < chain.stages.size(); ++s) {
    const EmbeddingValidation v =
        validate_embedding(chain.embeddings[s], chain.stages[s], chain.stages[s + 1]);
    CHECK(v.valid);
    CHECK(v.max_deviation < 1e-10);
  }
}

TEST_CASE("gns_isometry: identity, the 2-into-5 example, orthonormality") {
  const BlockShape c2({1, 1});
  const ChainStage src = stage_of(c2, TracialState({0.25, 0.75}));
  const Matrix u = gns_isometry(identity_embedding(c2), src, src);
  CHECK((u - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);

  // C ⊕ C -> M2 ⊕ C: block M2 holds one copy of each line, block C the second.
  const BlockShape tgt_shape({2, 1});
  Embedding emb;
  emb.multiplicity = {{1, 1}, {0, 1}};
  // weights: w_src = (a, a+b) with target (a, b)
  const double a = 0.3, b = 1.0 - 2 * a;
  const ChainStage src2 = stage_of(c2, TracialState({a, a + b}));
  const ChainStage tgt2 = stage_of(tgt_shape, TracialState({a, b}));
  REQUIRE(validate_embedding(emb, src2, tgt2).valid);
  const Matrix iso = gns_isometry(emb, src2, tgt2);
  CHECK(iso.rows() == 5);
  CHECK(iso.cols() == 2);
  CHECK((iso.adjoint() * iso - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("functoriality: composite embeddings and composite isometries agree") {
  Rng rng(82);
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    const ChainDescription chain = generate_random_chain(seed, 3, false);
    const Embedding composite =
        compose_embeddings(chain.embeddings[1], chain.embeddings[0], chain.stages[0].shape,
                           chain.stages[1].shape, chain.stages[2].shape);

    // The composite is a valid embedding and acts as the composition.
    CHECK(validate_embedding(composite, chain.stages[0], chain.stages[2]).valid);
    const AlgebraElement x = testutil::random_element(rng, chain.stages[0].shape);
    const AlgebraElement via_steps = chain.embeddings[1].apply(
        chain.stages[1].shape, chain.stages[2].shape,
        chain.embeddings[0].apply(chain.stages[0].shape, chain.stages[1].shape, x));
    const AlgebraElement direct =
        composite.apply(chain.stages[0].shape, chain.stages[2].shape, x);
    CHECK(entrywise_distance(via_steps, direct) < 1e-10);

    const Matrix u01 = gns_isometry(chain.embeddings[0], chain.stages[0], chain.stages[1]);
    const Matrix u12 = gns_isometry(chain.embeddings[1], chain.stages[1], chain.stages[2]);
    const Matrix u02 = gns_isometry(composite, chain.stages[0], chain.stages[2]);
    CHECK((u12 * u01 - u02).cwiseAbs().maxCoeff() < 1e-10);

    // Isometries preserve the inner products induced by the traces.
    CHECK((u01.adjoint() * u01 - Matrix::Identity(u01.cols(), u01.cols())).cwiseAbs().maxCoeff() <
          1e-10);
  }
}

TEST_CASE("gns_isometry intertwines the GNS embeddings on basis vectors") {
  const ChainDescription chain = generate_random_chain(9, 2, false);
  const ChainStage& src = chain.stages[0];
  const ChainStage& tgt = chain.stages[1];
  const Embedding& emb = chain.embeddings[0];
  const GnsSpace src_space = make_algebra_gns(src.shape, src.trace);
  const GnsSpace tgt_space = make_algebra_gns(tgt.shape, tgt.trace);
  const AlgebraBasis src_basis(src.shape);
  const AlgebraBasis tgt_basis(tgt.shape);
  const Matrix u = gns_isometry(emb, src, tgt);
  for (int j = 0; j < src_basis.dim(); ++j) {
    Vector ej = Vector::Zero(src_basis.dim());
    ej(j) = 1.0;
    const Vector lhs = tgt_space.gram_sqrt_inv() * u * src_space.gram_sqrt() * ej;
    const Vector rhs =
        tgt_basis.coords(emb.apply(src.shape, tgt.shape, src_basis.basis_element(j)));
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("extend_operator: projections, zero, norm and rank preservation") {
  Rng rng(83);
  const ChainDescription chain = generate_random_chain(11, 2, false);
  const Matrix u = gns_isometry(chain.embeddings[0], chain.stages[0], chain.stages[1]);
  const int dn = static_cast<int>(u.cols());

  const Matrix p = extend_operator(Matrix::Identity(dn, dn), u);
  CHECK((p * p - p).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((p - p.adjoint()).cwiseAbs().maxCoeff() < 1e-10);

  CHECK(extend_operator(Matrix::Zero(dn, dn), u).cwiseAbs().maxCoeff() == 0.0);

  for (int t = 0; t < 5; ++t) {
    const Matrix op = rng.gaussian_matrix(dn, dn);
    const Matrix lifted = extend_operator(op, u);
    Eigen::JacobiSVD<Matrix> svd_src(op);
    Eigen::JacobiSVD<Matrix> svd_tgt(lifted);
    CHECK(std::abs(svd_src.singularValues()(0) - svd_tgt.singularValues()(0)) < 1e-10);
    int rank_src = 0, rank_tgt = 0;
    for (int i = 0; i < svd_src.singularValues().size(); ++i)
      if (svd_src.singularValues()(i) > 1e-10) ++rank_src;
    for (int i = 0; i < svd_tgt.singularValues().size(); ++i)
      if (svd_tgt.singularValues()(i) > 1e-10) ++rank_tgt;
    CHECK(rank_src == rank_tgt);

    // Approximants transfer: ‖(T−T_m)P‖ ≤ ‖T−T_m‖, realized as equality here.
    const Matrix tm = rng.gaussian_matrix(dn, dn);
    Eigen::JacobiSVD<Matrix> diff_src(op - tm);
    Eigen::JacobiSVD<Matrix> diff_tgt(extend_operator(op, u) - extend_operator(tm, u));
    CHECK(diff_tgt.singularValues()(0) <= diff_src.singularValues()(0) + 1e-10);
  }
}

TEST_CASE("lift_ucp: identity gives the conditional expectation, k = n gives phi") {
  Rng rng(84);
  const ChainDescription chain = generate_random_chain(13, 2, false);
  const ChainStage& src = chain.stages[0];
  const ChainStage& tgt = chain.stages[1];
  const Embedding& emb = chain.embeddings[0];
  const AlgebraBasis src_basis(src.shape);
  const GnsSpace tgt_space = make_algebra_gns(tgt.shape, tgt.trace);
  const GnsSpace src_space = make_algebra_gns(src.shape, src.trace);

  const LiftedUcp lifted =
      lift_ucp(LinearMapOnAlgebra::identity(src_basis.dim()), emb, src, tgt);
  CHECK((lifted.map.mat - lifted.expectation.mat).cwiseAbs().maxCoeff() < 1e-10);
  // The conditional expectation is UCP, idempotent and tau-preserving.
  CHECK(check_ucp(tgt_space, lifted.expectation).pass());
  CHECK((lifted.expectation.mat * lifted.expectation.mat - lifted.expectation.mat)
            .cwiseAbs()
            .maxCoeff() < 1e-9);
  for (int j = 0; j < static_cast<int>(lifted.expectation.mat.cols()); ++j) {
    Vector ej = Vector::Zero(lifted.expectation.mat.cols());
    ej(j) = 1.0;
    CHECK(std::abs(tgt_space.trace(lifted.expectation.mat * ej) - tgt_space.trace(ej)) < 1e-10);
  }

  // k = n: lifting through the identity embedding returns phi.
  const LinearMapOnAlgebra phi = random_tau_preserving_ucp(rng, src.shape, src.trace);
  const LiftedUcp same =
      lift_ucp(phi, identity_embedding(src.shape), src, src);
  CHECK((same.map.mat - phi.mat).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("lift_ucp: compatibility, certification, deviation preservation") {
  Rng rng(85);
  for (std::uint64_t seed : {21ull, 22ull}) {
    const ChainDescription chain = generate_random_chain(seed, 3, false);
    const Embedding composite =
        compose_embeddings(chain.embeddings[1], chain.embeddings[0], chain.stages[0].shape,
                           chain.stages[1].shape, chain.stages[2].shape);
    const ChainStage& src = chain.stages[0];
    const ChainStage& tgt = chain.stages[2];
    const AlgebraBasis src_basis(src.shape);
    const AlgebraBasis tgt_basis(tgt.shape);
    const GnsSpace tgt_space = make_algebra_gns(tgt.shape, tgt.trace);

    const LinearMapOnAlgebra phi = random_tau_preserving_ucp(rng, src.shape, src.trace);
    const LiftedUcp lifted = lift_ucp(phi, composite, src, tgt);
    CHECK(check_ucp(tgt_space, lifted.map).pass());
    CHECK(check_tau_decreasing(tgt_space, lifted.map).pass);

    const Matrix j = composite.coord_matrix(src.shape, tgt.shape);
    // psi ∘ iota = iota ∘ phi exactly.
    CHECK((lifted.map.mat * j - j * phi.mat).cwiseAbs().maxCoeff() < 1e-9);

    // Stagewise deviation preservation on the source basis.
    for (int idx = 0; idx < src_basis.dim(); ++idx) {
      const AlgebraElement a = src_basis.basis_element(idx);
      const AlgebraElement fa = src_basis.element(phi.mat * src_basis.coords(a));
      const AlgebraElement ia = composite.apply(src.shape, tgt.shape, a);
      const AlgebraElement psi_ia = tgt_basis.element(lifted.map.mat * tgt_basis.coords(ia));
      const double src_dev = src.trace.two_norm(fa - a);
      const double tgt_dev = tgt.trace.two_norm(psi_ia - ia);
      CHECK(std::abs(src_dev - tgt_dev) < 1e-10);
    }

    // phi = tau(.)1 lifts to tau_k(.)1.
    const AlgebraBasis basis(src.shape);
    Matrix tf(basis.dim(), basis.dim());
    const Vector one = basis.coords(AlgebraElement::identity(src.shape));
    for (int k = 0; k < basis.dim(); ++k) tf.col(k) = src.trace(basis.basis_element(k)) * one;
    const LiftedUcp tf_lifted = lift_ucp({tf}, composite, src, tgt);
    Matrix tf_tgt(tgt_basis.dim(), tgt_basis.dim());
    const Vector one_tgt = tgt_basis.coords(AlgebraElement::identity(tgt.shape));
    for (int k = 0; k < tgt_basis.dim(); ++k)
      tf_tgt.col(k) = tgt.trace(tgt_basis.basis_element(k)) * one_tgt;
    CHECK((tf_lifted.map.mat - tf_tgt).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("equivariant chains: constant chain passes, doubling chains pass") {
  // Constant chain on the W1 system.
  const SystemDescription w1 = preset_system("W1");
  std::vector<ChainStage> stages(3, ChainStage{w1.shape, w1.trace, w1.action});
  std::vector<Embedding> embeddings(2, identity_embedding(w1.shape));
  const auto reports = equivariant_chain_crossed_products(stages, embeddings, 0);
  for (const auto& r : reports) {
    CHECK(r.pass);
    CHECK(r.homomorphism_deviation < 1e-10);
  }

  // Random amplified chains with actions.
  for (std::uint64_t seed : {31ull, 32ull}) {
    const ChainDescription chain = generate_random_chain(seed, 3, true);
    for (std::size_t s = 0; s + 1 < chain.stages.size(); ++s)
      REQUIRE(validate_embedding(chain.embeddings[s], chain.stages[s], chain.stages[s + 1]).valid);
    const auto rs = equivariant_chain_crossed_products(chain.stages, chain.embeddings, seed);
    for (const auto& r : rs) CHECK(r.pass);
  }
}

TEST_CASE("equivariant chains: a non-equivariant embedding is flagged") {
  const SystemDescription w1 = preset_system("W1");
  std::vector<ChainStage> stages(2, ChainStage{w1.shape, w1.trace, w1.action});
  // Swap the two lines: unital *-isomorphism, trace-compatible, but it does
  // not intertwine the partial action (it moves D_g off itself).
  Embedding swap;
  swap.multiplicity = {{0, 1}, {1, 0}};
  REQUIRE(validate_embedding(swap, stages[0], stages[1]).valid);
  const auto reports = equivariant_chain_crossed_products(stages, {swap}, 0);
  REQUIRE(reports.size() == 1);
  CHECK_FALSE(reports.front().pass);
  CHECK(reports.front().equivariance_deviation > 0.5);
}

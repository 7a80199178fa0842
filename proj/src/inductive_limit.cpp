#include "pcross/inductive_limit.hpp"

#include <stdexcept>

namespace pcross {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

Matrix conjugator_or_identity(const Embedding& emb, int target_block, int n) {
  if (target_block < static_cast<int>(emb.conjugators.size()) &&
      emb.conjugators[static_cast<std::size_t>(target_block)].size() != 0)
    return emb.conjugators[static_cast<std::size_t>(target_block)];
  return Matrix::Identity(n, n);
}

}  // namespace

AlgebraElement Embedding::apply(const BlockShape& source, const BlockShape& target,
                                const AlgebraElement& a) const {
  require(a.shape() == source, "Embedding::apply: source shape mismatch");
  require(static_cast<int>(multiplicity.size()) == target.block_count(),
          "Embedding::apply: multiplicity row count mismatch");
  AlgebraElement out = AlgebraElement::zero(target);
  for (int i = 0; i < target.block_count(); ++i) {
    const auto& row = multiplicity[static_cast<std::size_t>(i)];
    require(static_cast<int>(row.size()) == source.block_count(),
            "Embedding::apply: multiplicity column count mismatch");
    Matrix diag = Matrix::Zero(target.dim(i), target.dim(i));
    int off = 0;
    for (int j = 0; j < source.block_count(); ++j)
      for (int c = 0; c < row[static_cast<std::size_t>(j)]; ++c) {
        diag.block(off, off, source.dim(j), source.dim(j)) = a.block(j);
        off += source.dim(j);
      }
    require(off == target.dim(i), "Embedding::apply: non-unital layout at target block " +
                                      std::to_string(i));
    const Matrix w = conjugator_or_identity(*this, i, target.dim(i));
    out.block(i) = w * diag * w.adjoint();
  }
  return out;
}

Matrix Embedding::coord_matrix(const BlockShape& source, const BlockShape& target) const {
  const AlgebraBasis src(source), tgt(target);
  Matrix m(tgt.dim(), src.dim());
  for (int j = 0; j < src.dim(); ++j)
    m.col(j) = tgt.coords(apply(source, target, src.basis_element(j)));
  return m;
}

EmbeddingValidation validate_embedding(const Embedding& emb, const ChainStage& source,
                                       const ChainStage& target, double tol) {
  EmbeddingValidation report;
  const BlockShape& src = source.shape;
  const BlockShape& tgt = target.shape;

  if (static_cast<int>(emb.multiplicity.size()) != tgt.block_count()) {
    report.violations.push_back("multiplicity row count mismatch");
    return report;
  }
  for (int i = 0; i < tgt.block_count(); ++i) {
    const auto& row = emb.multiplicity[static_cast<std::size_t>(i)];
    if (static_cast<int>(row.size()) != src.block_count()) {
      report.violations.push_back("multiplicity column count mismatch at row " + std::to_string(i));
      return report;
    }
    int total = 0;
    for (int j = 0; j < src.block_count(); ++j) {
      if (row[static_cast<std::size_t>(j)] < 0)
        report.violations.push_back("negative multiplicity at (" + std::to_string(i) + "," +
                                    std::to_string(j) + ")");
      total += row[static_cast<std::size_t>(j)] * src.dim(j);
    }
    if (total != tgt.dim(i))
      report.violations.push_back("non-unital embedding: target block " + std::to_string(i) +
                                  " has size " + std::to_string(tgt.dim(i)) + " but receives " +
                                  std::to_string(total));
    const Matrix w = conjugator_or_identity(emb, i, tgt.dim(i));
    const double udev =
        (w.adjoint() * w - Matrix::Identity(w.rows(), w.cols())).cwiseAbs().maxCoeff();
    if (udev > tol) {
      report.violations.push_back("conjugator at target block " + std::to_string(i) +
                                  " is not unitary");
      report.max_deviation = std::max(report.max_deviation, udev);
    }
  }
  if (!report.violations.empty()) return report;

  // Trace equation: w_j^src = Σ_i m_ij w_i^tgt.
  for (int j = 0; j < src.block_count(); ++j) {
    double sum = 0.0;
    for (int i = 0; i < tgt.block_count(); ++i)
      sum += emb.multiplicity[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
             target.trace.weights[static_cast<std::size_t>(i)];
    const double dev = std::abs(sum - source.trace.weights[static_cast<std::size_t>(j)]);
    if (dev > tol) {
      report.violations.push_back("trace equation fails at source block " + std::to_string(j));
      report.max_deviation = std::max(report.max_deviation, dev);
    }
  }

  // *-homomorphism on matrix units, and the trace equation numerically.
  const AlgebraBasis basis(src);
  for (int a = 0; a < basis.dim(); ++a) {
    const AlgebraElement xa = basis.basis_element(a);
    const AlgebraElement ya = emb.apply(src, tgt, xa);
    {
      const double dev = entrywise_distance(emb.apply(src, tgt, adjoint(xa)), adjoint(ya));
      if (dev > tol) {
        report.violations.push_back("adjoint compatibility fails");
        report.max_deviation = std::max(report.max_deviation, dev);
      }
      const double tdev = std::abs(target.trace(ya) - source.trace(xa));
      if (tdev > tol) {
        report.violations.push_back("numeric trace compatibility fails");
        report.max_deviation = std::max(report.max_deviation, tdev);
      }
    }
    for (int b = 0; b < basis.dim(); ++b) {
      const AlgebraElement xb = basis.basis_element(b);
      const double dev = entrywise_distance(emb.apply(src, tgt, multiply(xa, xb)),
                                            multiply(ya, emb.apply(src, tgt, xb)));
      if (dev > tol) {
        report.violations.push_back("multiplicativity fails on basis pair");
        report.max_deviation = std::max(report.max_deviation, dev);
      }
    }
  }
  const double unit_dev = entrywise_distance(
      emb.apply(src, tgt, AlgebraElement::identity(src)), AlgebraElement::identity(tgt));
  if (unit_dev > tol) {
    report.violations.push_back("unit is not preserved");
    report.max_deviation = std::max(report.max_deviation, unit_dev);
  }

  report.valid = report.violations.empty();
  return report;
}

Embedding compose_embeddings(const Embedding& second, const Embedding& first,
                             const BlockShape& source, const BlockShape& middle,
                             const BlockShape& target) {
  Embedding out;
  out.multiplicity.assign(static_cast<std::size_t>(target.block_count()),
                          std::vector<int>(static_cast<std::size_t>(source.block_count()), 0));
  for (int i = 0; i < target.block_count(); ++i)
    for (int l = 0; l < source.block_count(); ++l) {
      int m = 0;
      for (int j = 0; j < middle.block_count(); ++j)
        m += second.multiplicity[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
             first.multiplicity[static_cast<std::size_t>(j)][static_cast<std::size_t>(l)];
      out.multiplicity[static_cast<std::size_t>(i)][static_cast<std::size_t>(l)] = m;
    }

  out.conjugators.resize(static_cast<std::size_t>(target.block_count()));
  for (int i = 0; i < target.block_count(); ++i) {
    const int n = target.dim(i);
    // Nested layout of second∘first at target block i: for j asc, copy c2,
    // the inner layout of first at middle block j (l asc, copy c1). The
    // composite's canonical layout groups by l first; P matches the slots.
    struct Slot {
      int j, c2, l, c1, size;
    };
    std::vector<Slot> slots;
    for (int j = 0; j < middle.block_count(); ++j)
      for (int c2 = 0; c2 < second.multiplicity[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; ++c2)
        for (int l = 0; l < source.block_count(); ++l)
          for (int c1 = 0; c1 < first.multiplicity[static_cast<std::size_t>(j)][static_cast<std::size_t>(l)]; ++c1)
            slots.push_back({j, c2, l, c1, source.dim(l)});

    std::vector<int> nested_offset(slots.size());
    int off = 0;
    for (std::size_t s = 0; s < slots.size(); ++s) {
      nested_offset[s] = off;
      off += slots[s].size;
    }

    // Canonical order: l asc, then (j, c2, c1) in nested order.
    std::vector<std::size_t> order(slots.size());
    for (std::size_t s = 0; s < order.size(); ++s) order[s] = s;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return slots[a].l < slots[b].l; });

    Matrix perm = Matrix::Zero(n, n);
    off = 0;
    for (std::size_t rank = 0; rank < order.size(); ++rank) {
      const std::size_t s = order[rank];
      for (int t = 0; t < slots[s].size; ++t) perm(nested_offset[s] + t, off + t) = 1.0;
      off += slots[s].size;
    }

    // Block-diagonal of first's conjugators repeated per second's layout.
    Matrix inner = Matrix::Zero(n, n);
    off = 0;
    for (int j = 0; j < middle.block_count(); ++j)
      for (int c2 = 0; c2 < second.multiplicity[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; ++c2) {
        inner.block(off, off, middle.dim(j), middle.dim(j)) =
            conjugator_or_identity(first, j, middle.dim(j));
        off += middle.dim(j);
      }

    out.conjugators[static_cast<std::size_t>(i)] =
        conjugator_or_identity(second, i, n) * inner * perm;
  }
  return out;
}

Matrix gns_isometry(const Embedding& emb, const ChainStage& source, const ChainStage& target) {
  const GnsSpace src_space = make_algebra_gns(source.shape, source.trace);
  const GnsSpace tgt_space = make_algebra_gns(target.shape, target.trace);
  const Matrix j = emb.coord_matrix(source.shape, target.shape);
  return tgt_space.gram_sqrt() * j * src_space.gram_sqrt_inv();
}

Matrix extend_operator(const Matrix& op_on_source, const Matrix& isometry) {
  require(isometry.cols() == op_on_source.rows() && op_on_source.rows() == op_on_source.cols(),
          "extend_operator: dimension mismatch");
  return isometry * op_on_source * isometry.adjoint();
}

LiftedUcp lift_ucp(const LinearMapOnAlgebra& phi, const Embedding& emb,
                   const ChainStage& source, const ChainStage& target) {
  const GnsSpace tgt_space = make_algebra_gns(target.shape, target.trace);
  const Matrix j = emb.coord_matrix(source.shape, target.shape);
  // τ_tgt-orthogonal projection onto the embedded image, read back in source
  // coordinates: E' = (J*GJ)⁻¹ J*G.
  const Matrix jg = j.adjoint() * tgt_space.gram();
  const Matrix eprime = (jg * j).partialPivLu().solve(jg);
  LiftedUcp out;
  out.map = {j * phi.mat * eprime};
  out.expectation = {j * eprime};
  return out;
}

std::vector<ChainStageReport> equivariant_chain_crossed_products(
    const std::vector<ChainStage>& stages, const std::vector<Embedding>& embeddings,
    std::uint64_t seed, double tol) {
  require(stages.size() >= 2 && embeddings.size() + 1 == stages.size(),
          "equivariant_chain_crossed_products: need k stages and k-1 embeddings");
  for (const ChainStage& st : stages)
    require(st.action.has_value(), "equivariant_chain_crossed_products: every stage needs an action");

  Rng rng(seed);
  std::vector<ChainStageReport> reports;
  for (std::size_t n = 0; n + 1 < stages.size(); ++n) {
    const ChainStage& src_stage = stages[n];
    const ChainStage& tgt_stage = stages[n + 1];
    const Embedding& emb = embeddings[n];
    const PartialAction& alpha = *src_stage.action;
    const PartialAction& alpha_next = *tgt_stage.action;
    const FiniteGroup& G = alpha.group();
    require(G == alpha_next.group(), "equivariant chain: stages carry different groups");

    ChainStageReport report;

    // Equivariance: φ(D_g) ⊆ D_g' and φ∘α_g = α_g'∘φ on D_{g⁻¹} basis.
    for (int g = 0; g < G.order(); ++g) {
      for (int i : alpha.range(g).support)
        for (int p = 0; p < src_stage.shape.dim(i); ++p)
          for (int q = 0; q < src_stage.shape.dim(i); ++q) {
            const AlgebraElement img = emb.apply(
                src_stage.shape, tgt_stage.shape,
                AlgebraElement::matrix_unit(src_stage.shape, i, p, q));
            report.equivariance_deviation = std::max(
                report.equivariance_deviation, alpha_next.range(g).support_violation(img));
          }
      for (int i : alpha.domain(g).support)
        for (int p = 0; p < src_stage.shape.dim(i); ++p)
          for (int q = 0; q < src_stage.shape.dim(i); ++q) {
            const AlgebraElement x = AlgebraElement::matrix_unit(src_stage.shape, i, p, q);
            const AlgebraElement lhs =
                emb.apply(src_stage.shape, tgt_stage.shape, alpha.apply(g, x));
            // Cut the image into the domain before applying; any leakage is
            // already recorded above as an equivariance violation.
            const AlgebraElement img = emb.apply(src_stage.shape, tgt_stage.shape, x);
            const AlgebraElement rhs = alpha_next.apply(
                g, multiply(img, alpha_next.domain(g).unit(tgt_stage.shape)));
            report.equivariance_deviation = std::max(
                {report.equivariance_deviation, entrywise_distance(lhs, rhs),
                 alpha_next.domain(g).support_violation(img)});
          }
    }

    // The induced map on crossed products is only defined when the embedding
    // respects the ideals; report and stop this stage otherwise.
    if (report.equivariance_deviation > tol) {
      report.pass = false;
      reports.push_back(std::move(report));
      continue;
    }

    const CrossedProduct src_cp(alpha);
    const CrossedProduct tgt_cp(alpha_next);
    const InducedTrace src_trace(src_cp, src_stage.trace);
    const InducedTrace tgt_trace(tgt_cp, tgt_stage.trace);
    const RegularRepresentation src_rep(src_cp);
    const RegularRepresentation tgt_rep(tgt_cp);

    // Induced embedding ι̂(Σ a_gδ_g) = Σ φ(a_g)δ_g on the crossed basis.
    auto lift = [&](const CrossedElement& x) {
      CrossedElement out = tgt_cp.zero();
      for (int g = 0; g < G.order(); ++g)
        out += tgt_cp.monomial(g, emb.apply(src_stage.shape, tgt_stage.shape, x.coefficient(g)),
                               1e-6);
      return out;
    };

    std::vector<CrossedElement> basis_images;
    basis_images.reserve(static_cast<std::size_t>(src_cp.dim()));
    for (int j = 0; j < src_cp.dim(); ++j)
      basis_images.push_back(lift(src_cp.basis_element(j)));

    report.unit_deviation = cp_distance(lift(src_cp.unit()), tgt_cp.unit());
    for (int a = 0; a < src_cp.dim(); ++a) {
      const CrossedElement xa = src_cp.basis_element(a);
      report.homomorphism_deviation =
          std::max(report.homomorphism_deviation,
                   cp_distance(lift(cp_adjoint(xa)),
                               cp_adjoint(basis_images[static_cast<std::size_t>(a)])));
      for (int b = 0; b < src_cp.dim(); ++b) {
        const CrossedElement xb = src_cp.basis_element(b);
        report.homomorphism_deviation = std::max(
            report.homomorphism_deviation,
            cp_distance(lift(cp_multiply(xa, xb)),
                        cp_multiply(basis_images[static_cast<std::size_t>(a)],
                                    basis_images[static_cast<std::size_t>(b)])));
      }
      // Conditional expectations intertwine and traces match on the basis.
      report.expectation_deviation = std::max(
          report.expectation_deviation,
          entrywise_distance(
              conditional_expectation(basis_images[static_cast<std::size_t>(a)]),
              emb.apply(src_stage.shape, tgt_stage.shape, conditional_expectation(xa))));
      report.trace_deviation =
          std::max(report.trace_deviation,
                   std::abs(tgt_trace(basis_images[static_cast<std::size_t>(a)]) - src_trace(xa)));
    }

    // Reduced-norm isometry on random elements.
    for (int trial = 0; trial < 5; ++trial) {
      Vector coords = Vector::Zero(src_cp.dim());
      for (int j = 0; j < src_cp.dim(); ++j) coords(j) = rng.complex_normal();
      const CrossedElement x = src_cp.element(coords);
      const double src_norm = reduced_norm(src_rep, x);
      const double tgt_norm = reduced_norm(tgt_rep, lift(x));
      report.isometry_deviation = std::max(
          report.isometry_deviation, std::abs(src_norm - tgt_norm) / (1.0 + src_norm));
    }

    report.pass = report.equivariance_deviation <= tol && report.homomorphism_deviation <= tol &&
                  report.unit_deviation <= tol && report.isometry_deviation <= tol &&
                  report.expectation_deviation <= tol && report.trace_deviation <= tol;
    reports.push_back(std::move(report));
  }
  return reports;
}

}  // namespace pcross

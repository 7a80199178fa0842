#include "pcross/partial_action.hpp"

#include <algorithm>
#include <stdexcept>

namespace pcross {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

PartialAction::PartialAction(FiniteGroup group, BlockShape shape,
                             std::vector<std::vector<BlockIso>> maps)
    : group_(std::move(group)), shape_(std::move(shape)) {
  const int m = group_.order();
  const int k = shape_.block_count();
  require(static_cast<int>(maps.size()) == m, "PartialAction: need one record per group element");

  // Identity acts on everything; an empty record is filled in.
  auto& id_map = maps[static_cast<std::size_t>(group_.identity())];
  if (id_map.empty()) {
    for (int i = 0; i < k; ++i)
      id_map.push_back({i, i, Matrix::Identity(shape_.dim(i), shape_.dim(i))});
  }

  domains_.resize(static_cast<std::size_t>(m));
  ranges_.resize(static_cast<std::size_t>(m));
  fwd_.assign(static_cast<std::size_t>(m), std::vector<int>(static_cast<std::size_t>(k), -1));
  bwd_.assign(static_cast<std::size_t>(m), std::vector<int>(static_cast<std::size_t>(k), -1));
  unitaries_.assign(static_cast<std::size_t>(m), std::vector<Matrix>(static_cast<std::size_t>(k)));

  for (int g = 0; g < m; ++g) {
    std::vector<int> sources, targets;
    for (const BlockIso& iso : maps[static_cast<std::size_t>(g)]) {
      require(iso.source >= 0 && iso.source < k && iso.target >= 0 && iso.target < k,
              "PartialAction: block index out of range for g=" + std::to_string(g));
      require(shape_.dim(iso.source) == shape_.dim(iso.target),
              "PartialAction: block dimension mismatch in map for g=" + std::to_string(g));
      Matrix u = iso.unitary;
      if (u.size() == 0) u = Matrix::Identity(shape_.dim(iso.target), shape_.dim(iso.target));
      require(u.rows() == shape_.dim(iso.target) && u.cols() == shape_.dim(iso.target),
              "PartialAction: unitary dimension mismatch for g=" + std::to_string(g));
      require(fwd_[static_cast<std::size_t>(g)][static_cast<std::size_t>(iso.source)] < 0,
              "PartialAction: duplicate source block for g=" + std::to_string(g));
      require(bwd_[static_cast<std::size_t>(g)][static_cast<std::size_t>(iso.target)] < 0,
              "PartialAction: duplicate target block for g=" + std::to_string(g));
      fwd_[static_cast<std::size_t>(g)][static_cast<std::size_t>(iso.source)] = iso.target;
      bwd_[static_cast<std::size_t>(g)][static_cast<std::size_t>(iso.target)] = iso.source;
      unitaries_[static_cast<std::size_t>(g)][static_cast<std::size_t>(iso.target)] = std::move(u);
      sources.push_back(iso.source);
      targets.push_back(iso.target);
    }
    domains_[static_cast<std::size_t>(g)] = Ideal(sources, k);
    ranges_[static_cast<std::size_t>(g)] = Ideal(targets, k);
  }

  const int e = group_.identity();
  require(domains_[static_cast<std::size_t>(e)].support.size() == static_cast<std::size_t>(k),
          "PartialAction: identity element must act on every block");
  for (int i = 0; i < k; ++i)
    require(fwd_[static_cast<std::size_t>(e)][static_cast<std::size_t>(i)] == i,
            "PartialAction: identity element must fix every block");
}

PartialAction PartialAction::trivial_global(const FiniteGroup& group, const BlockShape& shape) {
  std::vector<std::vector<BlockIso>> maps(static_cast<std::size_t>(group.order()));
  for (int g = 0; g < group.order(); ++g)
    for (int i = 0; i < shape.block_count(); ++i)
      maps[static_cast<std::size_t>(g)].push_back(
          {i, i, Matrix::Identity(shape.dim(i), shape.dim(i))});
  return PartialAction(group, shape, std::move(maps));
}

int PartialAction::map_block(int g, int i) const {
  const int j = fwd_[static_cast<std::size_t>(g)][static_cast<std::size_t>(i)];
  require(j >= 0, "map_block: block " + std::to_string(i) + " not in domain of g=" + std::to_string(g));
  return j;
}

int PartialAction::inverse_map_block(int g, int j) const {
  const int i = bwd_[static_cast<std::size_t>(g)][static_cast<std::size_t>(j)];
  require(i >= 0, "inverse_map_block: block " + std::to_string(j) + " not in range of g=" + std::to_string(g));
  return i;
}

const Matrix& PartialAction::unitary(int g, int j) const {
  require(bwd_[static_cast<std::size_t>(g)][static_cast<std::size_t>(j)] >= 0,
          "unitary: block " + std::to_string(j) + " not in range of g=" + std::to_string(g));
  return unitaries_[static_cast<std::size_t>(g)][static_cast<std::size_t>(j)];
}

AlgebraElement PartialAction::apply(int g, const AlgebraElement& a, double tol) const {
  require(a.shape() == shape_, "apply: shape mismatch");
  const Ideal& dom = domain(g);
  const double scale = 1.0 + max_abs_entry(a);
  if (dom.support_violation(a) > tol * scale) {
    std::string blocks;
    for (int i = 0; i < a.block_count(); ++i)
      if (!dom.contains_block(i) && a.block(i).cwiseAbs().maxCoeff() > tol * scale)
        blocks += (blocks.empty() ? "" : ",") + std::to_string(i);
    throw std::invalid_argument("apply: element not supported on domain of g=" +
                                std::to_string(g) + ", offending blocks {" + blocks + "}");
  }
  AlgebraElement out = AlgebraElement::zero(shape_);
  for (int i : dom.support) {
    const int j = fwd_[static_cast<std::size_t>(g)][static_cast<std::size_t>(i)];
    const Matrix& u = unitaries_[static_cast<std::size_t>(g)][static_cast<std::size_t>(j)];
    out.block(j) = u * a.block(i) * u.adjoint();
  }
  return out;
}

namespace {

// Deviation of α_h2(α_h1(x)) from α_h12(x) over matrix units of `block`.
double composition_deviation(const PartialAction& alpha, int h2, int h1, int h12, int block) {
  const BlockShape& shape = alpha.shape();
  double dev = 0.0;
  for (int p = 0; p < shape.dim(block); ++p)
    for (int q = 0; q < shape.dim(block); ++q) {
      const AlgebraElement x = AlgebraElement::matrix_unit(shape, block, p, q);
      const AlgebraElement lhs = alpha.apply(h2, alpha.apply(h1, x));
      const AlgebraElement rhs = alpha.apply(h12, x);
      dev = std::max(dev, entrywise_distance(lhs, rhs));
    }
  return dev;
}

}  // namespace

ActionValidation validate_partial_action(const PartialAction& alpha, double tol) {
  ActionValidation report;
  const FiniteGroup& G = alpha.group();
  const BlockShape& shape = alpha.shape();
  const int e = G.identity();

  auto flag = [&](ActionViolation v) {
    report.max_deviation = std::max(report.max_deviation, v.deviation);
    report.violations.push_back(std::move(v));
  };

  // α_e is the identity map on all of A.
  for (int i = 0; i < shape.block_count(); ++i) {
    const Matrix& u = alpha.unitary(e, i);
    const double dev = (u - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
    if (dev > tol) flag({"identity_unitary", e, -1, i, dev});
  }

  for (int g = 0; g < G.order(); ++g) {
    // Unitarity of every stored block map.
    for (int j : alpha.range(g).support) {
      const Matrix& u = alpha.unitary(g, j);
      const double dev =
          (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
      if (dev > tol) flag({"unitarity", g, -1, j, dev});
    }

    // Inverse consistency: b_{g⁻¹} = b_g⁻¹ as block maps, α_{g⁻¹}∘α_g = id.
    const int ginv = G.inverse(g);
    if (!(alpha.domain(g) == alpha.range(ginv)) || !(alpha.range(g) == alpha.domain(ginv))) {
      flag({"inverse_supports", g, ginv, -1, 1.0});
      continue;
    }
    for (int i : alpha.domain(g).support) {
      if (alpha.inverse_map_block(ginv, i) != alpha.map_block(g, i)) {
        flag({"inverse_block_map", g, ginv, i, 1.0});
        continue;
      }
      const double dev = composition_deviation(alpha, ginv, g, e, i);
      if (dev > tol) flag({"inverse_map", g, ginv, i, dev});
    }
  }

  // Composition law α_g∘α_h ⊆ α_{gh}: on the exact composition domain
  // b_h⁻¹(S_{g⁻¹} ∩ S_h) the block maps must agree with b_{gh} and the
  // conjugations must coincide on matrix units.
  for (int g = 0; g < G.order(); ++g)
    for (int h = 0; h < G.order(); ++h) {
      const int gh = G.op(g, h);
      for (int i : alpha.domain(h).support) {
        const int mid = alpha.map_block(h, i);
        if (!alpha.domain(g).contains_block(mid)) continue;  // outside dom(α_g∘α_h)
        if (!alpha.domain(gh).contains_block(i)) {
          flag({"composition_domain", g, h, i, 1.0});
          continue;
        }
        if (alpha.map_block(g, mid) != alpha.map_block(gh, i)) {
          flag({"composition_block_map", g, h, i, 1.0});
          continue;
        }
        const double dev = composition_deviation(alpha, g, h, gh, i);
        if (dev > tol) flag({"composition", g, h, i, dev});
      }
    }

  report.valid = report.violations.empty();
  return report;
}

RestrictionResult restrict_global(const PartialAction& global, const std::vector<int>& ideal_blocks) {
  const FiniteGroup& G = global.group();
  const BlockShape& big = global.shape();
  for (int g = 0; g < G.order(); ++g)
    require(static_cast<int>(global.range(g).support.size()) == big.block_count(),
            "restrict_global: action is not global (partial support at g=" + std::to_string(g) + ")");

  const Ideal ideal(ideal_blocks, big.block_count());
  require(!ideal.support.empty(), "restrict_global: ideal must contain at least one block");

  RestrictionResult out;
  out.kept_blocks = ideal.support;
  std::vector<int> new_index(static_cast<std::size_t>(big.block_count()), -1);
  std::vector<int> dims;
  for (std::size_t n = 0; n < ideal.support.size(); ++n) {
    new_index[static_cast<std::size_t>(ideal.support[n])] = static_cast<int>(n);
    dims.push_back(big.dim(ideal.support[n]));
  }
  const BlockShape shape(dims);

  std::vector<std::vector<BlockIso>> maps(static_cast<std::size_t>(G.order()));
  for (int g = 0; g < G.order(); ++g)
    for (int i : ideal.support) {
      const int j = global.map_block(g, i);
      if (!ideal.contains_block(j)) continue;  // D_g = b_g(A) ∩ A
      maps[static_cast<std::size_t>(g)].push_back(
          {new_index[static_cast<std::size_t>(i)], new_index[static_cast<std::size_t>(j)],
           global.unitary(g, j)});
    }

  out.action = PartialAction(G, shape, std::move(maps));

  // Coverage flag: is the ambient algebra the union of the translates of A?
  std::vector<bool> covered(static_cast<std::size_t>(big.block_count()), false);
  for (int g = 0; g < G.order(); ++g)
    for (int i : ideal.support) covered[static_cast<std::size_t>(global.map_block(g, i))] = true;
  out.globalization_covered =
      std::all_of(covered.begin(), covered.end(), [](bool b) { return b; });
  return out;
}

TraceInvariance check_invariant_trace(const PartialAction& alpha, const TracialState& tau,
                                      double tol) {
  tau.validate(alpha.shape());
  TraceInvariance report;
  const FiniteGroup& G = alpha.group();
  for (int g = 0; g < G.order(); ++g)
    for (int i : alpha.domain(g).support) {
      const int j = alpha.map_block(g, i);
      const double dev =
          std::abs(tau.weights[static_cast<std::size_t>(j)] - tau.weights[static_cast<std::size_t>(i)]);
      if (dev > tol) {
        report.violations.push_back({"weight", g, -1, i, dev});
        report.max_deviation = std::max(report.max_deviation, dev);
      }
      // Numeric confirmation on a diagonal matrix unit.
      const AlgebraElement x = AlgebraElement::matrix_unit(alpha.shape(), i, 0, 0);
      const double num_dev = std::abs(tau(alpha.apply(g, x)) - tau(x));
      if (num_dev > tol) {
        report.violations.push_back({"trace_numeric", g, -1, i, num_dev});
        report.max_deviation = std::max(report.max_deviation, num_dev);
      }
    }
  report.invariant = report.violations.empty();
  return report;
}

}  // namespace pcross

#include "pcross/haagerup.hpp"

#include <stdexcept>

namespace pcross {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

CenterValuedPDFunction::CenterValuedPDFunction(const PartialAction& alpha,
                                               std::vector<std::vector<Complex>> scalars)
    : scalars_(std::move(scalars)) {
  const int m = alpha.group().order();
  const int k = alpha.shape().block_count();
  require(static_cast<int>(scalars_.size()) == m,
          "CenterValuedPDFunction: need one scalar vector per group element");
  for (int g = 0; g < m; ++g) {
    require(static_cast<int>(scalars_[static_cast<std::size_t>(g)].size()) == k,
            "CenterValuedPDFunction: scalar count mismatch at g=" + std::to_string(g));
    for (int i = 0; i < k; ++i)
      if (!alpha.range(g).contains_block(i))
        require(scalars_[static_cast<std::size_t>(g)][static_cast<std::size_t>(i)] == Complex(0.0),
                "CenterValuedPDFunction: h(g) must lie in D_g; nonzero scalar off S_g at g=" +
                    std::to_string(g) + ", block " + std::to_string(i));
  }
}

CenterValuedPDFunction CenterValuedPDFunction::units(const PartialAction& alpha) {
  std::vector<std::vector<Complex>> s(
      static_cast<std::size_t>(alpha.group().order()),
      std::vector<Complex>(static_cast<std::size_t>(alpha.shape().block_count()), Complex(0.0)));
  for (int g = 0; g < alpha.group().order(); ++g)
    for (int i : alpha.range(g).support) s[static_cast<std::size_t>(g)][static_cast<std::size_t>(i)] = 1.0;
  return CenterValuedPDFunction(alpha, std::move(s));
}

CenterValuedPDFunction CenterValuedPDFunction::from_eta(const PartialAction& alpha,
                                                        const ScalarPDFunction& eta) {
  require(eta.size() == alpha.group().order(), "from_eta: eta not defined on all of G");
  std::vector<std::vector<Complex>> s(
      static_cast<std::size_t>(alpha.group().order()),
      std::vector<Complex>(static_cast<std::size_t>(alpha.shape().block_count()), Complex(0.0)));
  for (int g = 0; g < alpha.group().order(); ++g)
    for (int i : alpha.range(g).support)
      s[static_cast<std::size_t>(g)][static_cast<std::size_t>(i)] = eta(g);
  return CenterValuedPDFunction(alpha, std::move(s));
}

AlgebraElement CenterValuedPDFunction::value(const PartialAction& alpha, int g) const {
  return from_block_scalars(alpha.shape(), scalars_[static_cast<std::size_t>(g)]);
}

double CenterValuedPDFunction::operator_norm_at(int g) const {
  double m = 0.0;
  for (const Complex& c : scalars_[static_cast<std::size_t>(g)]) m = std::max(m, std::abs(c));
  return m;
}

AlgebraElement pd_matrix(const PartialAction& alpha, const CenterValuedPDFunction& h,
                         const std::vector<int>& tuple, PDConvention convention) {
  const FiniteGroup& G = alpha.group();
  const BlockShape& shape = alpha.shape();
  const int n = static_cast<int>(tuple.size());
  require(n >= 1, "pd_matrix: tuple must be nonempty");

  AlgebraElement out = AlgebraElement::zero(shape.scaled(n));
  for (int r = 0; r < n; ++r) {
    const int gr = tuple[static_cast<std::size_t>(r)];
    const int gr_inv = G.inverse(gr);
    for (int c = 0; c < n; ++c) {
      const int gc = tuple[static_cast<std::size_t>(c)];
      const int arg = G.op(gr_inv, gc);
      const AlgebraElement hval = h.value(alpha, arg);

      AlgebraElement entry = AlgebraElement::zero(shape);
      if (convention == PDConvention::kCutdown) {
        entry = alpha.apply(gr, multiply(alpha.domain(gr).unit(shape), hval));
      } else {
        // Literal branch: α_{g_r}(h(g_r⁻¹g_c)) when h(g_r⁻¹g_c) ∈ D_{g_r⁻¹}.
        if (alpha.domain(gr).contains(hval)) entry = alpha.apply(gr, hval);
      }
      for (int b = 0; b < shape.block_count(); ++b) {
        const int nb = shape.dim(b);
        out.block(b).block(r * nb, c * nb, nb, nb) = entry.block(b);
      }
    }
  }
  return out;
}

PositivityCertificate is_pd_wrt_action(const PartialAction& alpha,
                                       const CenterValuedPDFunction& h, PDConvention convention,
                                       double tol) {
  std::vector<int> full(static_cast<std::size_t>(alpha.group().order()));
  for (int g = 0; g < alpha.group().order(); ++g) full[static_cast<std::size_t>(g)] = g;
  return is_positive(pd_matrix(alpha, h, full, convention), tol);
}

LinearMapOnAlgebra induce_ucp_on_crossed(const CrossedProduct& system,
                                         const LinearMapOnAlgebra& phi,
                                         const CenterValuedPDFunction& h) {
  const AlgebraBasis basis(system.shape());
  require(phi.mat.rows() == basis.dim() && phi.mat.cols() == basis.dim(),
          "induce_ucp_on_crossed: phi dimension mismatch");
  require(h.group_order() == system.group().order(),
          "induce_ucp_on_crossed: h not defined on all of G");

  const int d = system.dim();
  Matrix Phi = Matrix::Zero(d, d);
  for (int j = 0; j < d; ++j) {
    const auto& l = system.basis()[static_cast<std::size_t>(j)];
    // φ(e^block_{row,col}), then the central multiplication by h(g) which
    // also cuts the coefficient down to D_g.
    Vector unit = Vector::Zero(basis.dim());
    for (int k = 0; k < basis.dim(); ++k) {
      const auto& al = basis.labels[static_cast<std::size_t>(k)];
      if (al.block == l.block && al.row == l.row && al.col == l.col) unit(k) = 1.0;
    }
    const Vector phi_coords = phi.mat * unit;
    AlgebraElement y = basis.element(phi_coords);
    for (int b = 0; b < system.shape().block_count(); ++b)
      y.block(b) *= h.scalars(l.g)[static_cast<std::size_t>(b)];
    Phi.col(j) = system.coords(system.monomial(l.g, y));
  }
  return {Phi};
}

InducedUcpResult induce_ucp_checked(const CrossedProduct& system, const GnsSpace& algebra_space,
                                    const LinearMapOnAlgebra& phi,
                                    const CenterValuedPDFunction& h, double tol) {
  InducedUcpResult out;
  out.phi_certificate = check_ucp(algebra_space, phi, tol);
  out.h_certificate = is_pd_wrt_action(system.action(), h, PDConvention::kCutdown, tol);
  const int e = system.group().identity();
  double unit_dev = 0.0;
  for (int b = 0; b < system.shape().block_count(); ++b)
    unit_dev = std::max(unit_dev, std::abs(h.scalars(e)[static_cast<std::size_t>(b)] - 1.0));
  out.h_unit_at_identity = unit_dev <= tol;
  if (!out.preconditions_pass())
    throw std::invalid_argument("induce_ucp_checked: precondition certificates failed");
  out.map = induce_ucp_on_crossed(system, phi, h);
  return out;
}

TruncationEstimate truncation_estimate(const CrossedProduct& system, const TracialState& tau,
                                       const GnsSpace& algebra_space,
                                       const GnsSpace& crossed_space,
                                       const LinearMapOnAlgebra& phi,
                                       const LinearMapOnAlgebra& phi_approx,
                                       const CenterValuedPDFunction& h,
                                       const std::vector<int>& support_set, double tol) {
  const FiniteGroup& G = system.group();
  std::vector<bool> in_f(static_cast<std::size_t>(G.order()), false);
  for (int g : support_set) in_f[static_cast<std::size_t>(g)] = true;

  // h restricted to F; off F the truncation drops the fiber entirely.
  std::vector<std::vector<Complex>> restricted(
      static_cast<std::size_t>(G.order()),
      std::vector<Complex>(static_cast<std::size_t>(system.shape().block_count()), Complex(0.0)));
  for (int g = 0; g < G.order(); ++g)
    if (in_f[static_cast<std::size_t>(g)]) restricted[static_cast<std::size_t>(g)] = h.scalars(g);
  const CenterValuedPDFunction h_f(system.action(), std::move(restricted));

  TruncationEstimate out;
  const LinearMapOnAlgebra Phi = induce_ucp_on_crossed(system, phi, h);
  out.truncation = induce_ucp_on_crossed(system, phi_approx, h_f);

  const Matrix diff = induce_operator(crossed_space, Phi) -
                      induce_operator(crossed_space, out.truncation);
  Eigen::JacobiSVD<Matrix> svd(diff);
  out.measured_norm = svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;

  out.eps_phi = induced_operator_norm(algebra_space, {phi.mat - phi_approx.mat});
  out.phi_tilde_norm = induced_operator_norm(algebra_space, phi);

  const AlgebraElement one = AlgebraElement::identity(system.shape());
  for (int g = 0; g < G.order(); ++g) {
    out.k_inf = std::max(out.k_inf, h.operator_norm_at(g) * h.operator_norm_at(g));
    if (!in_f[static_cast<std::size_t>(g)]) {
      out.delta_op = std::max(out.delta_op, h.operator_norm_at(g));
      out.delta_two = std::max(out.delta_two, tau.two_norm(h.value(system.action(), g)));
    }
  }

  auto bound = [&](double delta) {
    return std::sqrt(2.0 * (out.eps_phi * out.eps_phi * out.k_inf +
                            delta * delta * out.phi_tilde_norm * out.phi_tilde_norm));
  };
  out.certified_bound = bound(out.delta_op);
  out.two_norm_bound = bound(out.delta_two);
  out.certified_ok = out.measured_norm <= out.certified_bound + tol;
  out.two_norm_variant_ok = out.measured_norm <= out.two_norm_bound + tol;

  // Rank accounting: T̃ acts fiberwise by R_{h(g)}∘φ̃_approx for g ∈ F.
  const std::vector<double> t_sv = induced_singular_values(crossed_space, out.truncation);
  const std::vector<double> p_sv = induced_singular_values(algebra_space, phi_approx);
  const double t_scale = t_sv.empty() ? 0.0 : t_sv.front();
  const double p_scale = p_sv.empty() ? 0.0 : p_sv.front();
  for (double s : t_sv)
    if (s > tol * (1.0 + t_scale)) ++out.truncation_rank;
  int approx_rank = 0;
  for (double s : p_sv)
    if (s > tol * (1.0 + p_scale)) ++approx_rank;
  out.rank_cap = approx_rank * static_cast<int>(support_set.size());
  return out;
}

LinearMapOnAlgebra compress_to_algebra(const CrossedProduct& system,
                                       const LinearMapOnAlgebra& Phi) {
  const AlgebraBasis basis(system.shape());
  const int d_alg = basis.dim();
  const int d = system.dim();
  require(Phi.mat.rows() == d && Phi.mat.cols() == d, "compress_to_algebra: dimension mismatch");
  const int e = system.group().identity();

  Matrix out = Matrix::Zero(d_alg, d_alg);
  for (int j = 0; j < d_alg; ++j) {
    const AlgebraElement a = basis.basis_element(j);
    const Vector image = Phi.mat * system.coords(system.monomial(e, a));
    out.col(j) = basis.coords(conditional_expectation(system.element(image)));
  }
  return {out};
}

ScalarPDFunction eta_from_ucp(const CrossedProduct& system, const TracialState& tau,
                              const LinearMapOnAlgebra& Phi) {
  const InducedTrace trace(system, tau);
  const FiniteGroup& G = system.group();
  ScalarPDFunction eta;
  eta.values.resize(static_cast<std::size_t>(G.order()));
  for (int g = 0; g < G.order(); ++g) {
    const CrossedElement ug = system.range_unit_monomial(g);
    const CrossedElement image = system.element(Phi.mat * system.coords(ug));
    eta.values[static_cast<std::size_t>(g)] = trace(cp_multiply(image, cp_adjoint(ug)));
  }
  return eta;
}

HaagerupCertification certify_haagerup_data(const CrossedProduct& system,
                                            const TracialState& tau,
                                            const std::vector<HaagerupStage>& stages,
                                            double tol) {
  const GnsSpace algebra_space = make_algebra_gns(system.shape(), tau);
  const GnsSpace crossed_space = make_crossed_gns(system, tau);
  const AlgebraBasis basis(system.shape());
  const AlgebraElement one = AlgebraElement::identity(system.shape());

  HaagerupCertification cert;
  cert.pass = true;
  for (const HaagerupStage& stage : stages) {
    HaagerupStageReport report;
    report.eps = stage.eps;
    report.phi_cert = check_ucp(algebra_space, stage.phi, tol);
    report.phi_tau_decreasing = check_tau_decreasing(algebra_space, stage.phi, tol);
    report.h_cert = is_pd_wrt_action(system.action(), stage.h, PDConvention::kCutdown, tol);
    report.preconditions_pass = report.phi_cert.pass() && report.phi_tau_decreasing.pass &&
                                report.h_cert.positive;

    const LinearMapOnAlgebra Phi = induce_ucp_on_crossed(system, stage.phi, stage.h);
    report.induced_cert = check_ucp(crossed_space, Phi, tol);
    report.induced_tau_decreasing = check_tau_decreasing(crossed_space, Phi, tol);
    report.singular_values = induced_singular_values(crossed_space, Phi);

    // Pointwise convergence data: deviation on the normalized basis.
    const int d = system.dim();
    for (int j = 0; j < d; ++j) {
      Vector ej = Vector::Zero(d);
      ej(j) = 1.0;
      const double norm = crossed_space.two_norm(ej);
      const double dev = crossed_space.two_norm(Phi.mat * ej - ej) / norm;
      report.max_pointwise_deviation = std::max(report.max_pointwise_deviation, dev);
    }
    for (int j = 0; j < basis.dim(); ++j) {
      Vector ej = Vector::Zero(basis.dim());
      ej(j) = 1.0;
      const double norm = algebra_space.two_norm(ej);
      report.two_norm_growth =
          std::max(report.two_norm_growth, algebra_space.two_norm(stage.phi.mat * ej) / norm);
    }
    for (int g = 0; g < system.group().order(); ++g)
      report.max_h_deviation = std::max(
          report.max_h_deviation, tau.two_norm(stage.h.value(system.action(), g) - one));

    report.pass = report.preconditions_pass && report.induced_cert.pass() &&
                  report.induced_tau_decreasing.pass &&
                  report.max_pointwise_deviation <= stage.eps + tol;
    cert.pass = cert.pass && report.pass;
    cert.stages.push_back(std::move(report));
  }
  return cert;
}

}  // namespace pcross

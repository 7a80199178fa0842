#include "pcross/systems.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace pcross {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

SystemDescription preset_system(const std::string& name) {
  if (name == "W1") {
    SystemDescription sys;
    sys.name = "W1";
    sys.group = FiniteGroup::cyclic(2);
    sys.shape = BlockShape({1, 1});
    sys.trace = TracialState({0.5, 0.5});
    std::vector<std::vector<BlockIso>> maps(2);
    maps[1].push_back({1, 1, Matrix::Identity(1, 1)});
    sys.action = PartialAction(sys.group, sys.shape, std::move(maps));
    return sys;
  }
  if (name == "trivial") {
    SystemDescription sys;
    sys.name = "trivial";
    sys.group = FiniteGroup::cyclic(2);
    sys.shape = BlockShape({2});
    sys.trace = TracialState({0.5});
    sys.action = PartialAction::trivial_global(sys.group, sys.shape);
    return sys;
  }
  if (name == "restriction-example") {
    // Z₃ cycling three one-dimensional blocks, restricted to the first.
    const FiniteGroup z3 = FiniteGroup::cyclic(3);
    const BlockShape ambient({1, 1, 1});
    std::vector<std::vector<BlockIso>> maps(3);
    for (int g = 0; g < 3; ++g)
      for (int i = 0; i < 3; ++i) maps[static_cast<std::size_t>(g)].push_back(
          {i, (i + g) % 3, Matrix::Identity(1, 1)});
    const PartialAction global(z3, ambient, std::move(maps));
    SystemDescription sys;
    sys.name = "restriction-example";
    sys.group = z3;
    sys.action = restrict_global(global, {0}).action;
    sys.shape = sys.action.shape();
    sys.trace = TracialState({1.0});
    return sys;
  }
  throw std::invalid_argument("unknown preset '" + name + "'");
}

namespace {

FiniteGroup pick_group(Rng& rng, int max_order) {
  std::vector<FiniteGroup> catalog;
  for (int n = 1; n <= std::min(8, max_order); ++n) catalog.push_back(FiniteGroup::cyclic(n));
  if (max_order >= 4)
    catalog.push_back(FiniteGroup::product(FiniteGroup::cyclic(2), FiniteGroup::cyclic(2)));
  if (max_order >= 6) catalog.push_back(FiniteGroup::symmetric(3));
  if (max_order >= 8)
    catalog.push_back(FiniteGroup::product(FiniteGroup::cyclic(2), FiniteGroup::cyclic(4)));
  return catalog[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(catalog.size()) - 1))];
}

}  // namespace

SystemDescription generate_random_system(std::uint64_t seed, const SizeBudget& budget) {
  Rng rng(seed);
  const FiniteGroup G = pick_group(rng, budget.max_group_order);
  const int m = G.order();

  // Ambient G-set: a few orbits, each either regular (G acting on itself by
  // left translation) or a fixed point. Dims and weights constant per orbit.
  struct AmbientBlock {
    int orbit, dim;
    double weight;
  };
  std::vector<AmbientBlock> ambient;
  std::vector<std::vector<int>> orbit_blocks;  // orbit -> ambient block indices
  std::vector<bool> orbit_regular;

  const int fixed_count = rng.uniform_int(m > 1 ? 0 : 1, 2);
  const int regular_count = m > 1 ? rng.uniform_int(fixed_count == 0 ? 1 : 0, 1) : 0;
  for (int t = 0; t < fixed_count; ++t) {
    const int orbit = static_cast<int>(orbit_blocks.size());
    const int dim = rng.uniform_int(1, 3);
    const double w = rng.uniform(0.5, 1.5);
    orbit_blocks.push_back({static_cast<int>(ambient.size())});
    orbit_regular.push_back(false);
    ambient.push_back({orbit, dim, w});
  }
  for (int t = 0; t < regular_count; ++t) {
    const int orbit = static_cast<int>(orbit_blocks.size());
    const int dim = rng.uniform_int(1, 2);
    const double w = rng.uniform(0.5, 1.5);
    std::vector<int> blocks;
    for (int g = 0; g < m; ++g) {
      blocks.push_back(static_cast<int>(ambient.size()));
      ambient.push_back({orbit, dim, w});
    }
    orbit_blocks.push_back(std::move(blocks));
    orbit_regular.push_back(true);
  }
  if (ambient.empty()) {
    orbit_blocks.push_back({0});
    orbit_regular.push_back(false);
    ambient.push_back({0, rng.uniform_int(1, 3), rng.uniform(0.5, 1.5)});
  }

  std::vector<int> dims;
  for (const AmbientBlock& b : ambient) dims.push_back(b.dim);
  const BlockShape ambient_shape(dims);

  // Gauge unitaries make the conjugations nontrivial while keeping the
  // composition law exact: U_{g,target} = V_target V_source*.
  std::vector<Matrix> gauge;
  for (const AmbientBlock& b : ambient) gauge.push_back(rng.unitary(b.dim));

  // Global action: fixed blocks stay put; a regular orbit's block h goes to gh.
  std::vector<std::vector<BlockIso>> maps(static_cast<std::size_t>(m));
  for (int g = 0; g < m; ++g)
    for (std::size_t orbit = 0; orbit < orbit_blocks.size(); ++orbit) {
      const auto& blocks = orbit_blocks[orbit];
      for (std::size_t pos = 0; pos < blocks.size(); ++pos) {
        const int src = blocks[pos];
        const int tgt = orbit_regular[orbit]
                            ? blocks[static_cast<std::size_t>(G.op(g, static_cast<int>(pos)))]
                            : src;
        maps[static_cast<std::size_t>(g)].push_back(
            {src, tgt,
             gauge[static_cast<std::size_t>(tgt)] * gauge[static_cast<std::size_t>(src)].adjoint()});
      }
    }
  const PartialAction global(G, ambient_shape, std::move(maps));

  // Restrict to a random block subset within the dimension budget.
  const bool keep_all = rng.uniform() < 0.25 && ambient_shape.rep_dim() <= budget.max_total_dim;
  std::vector<int> order(ambient.size());
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = order.size(); i > 1; --i)
    std::swap(order[i - 1], order[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(i) - 1))]);

  std::vector<int> kept;
  int total = 0;
  for (int idx : order) {
    if (keep_all || rng.uniform() < 0.7) {
      if (total + ambient[static_cast<std::size_t>(idx)].dim > budget.max_total_dim) continue;
      kept.push_back(idx);
      total += ambient[static_cast<std::size_t>(idx)].dim;
    }
  }
  if (kept.empty()) {
    kept.push_back(order.front());
  }

  RestrictionResult restricted = restrict_global(global, kept);

  SystemDescription sys;
  sys.name = "random:" + std::to_string(seed);
  sys.group = G;
  sys.action = std::move(restricted.action);
  sys.shape = sys.action.shape();

  std::vector<double> weights;
  double norm = 0.0;
  for (int idx : restricted.kept_blocks) {
    weights.push_back(ambient[static_cast<std::size_t>(idx)].weight);
    norm += ambient[static_cast<std::size_t>(idx)].weight * ambient[static_cast<std::size_t>(idx)].dim;
  }
  for (double& w : weights) w /= norm;
  sys.trace = TracialState(std::move(weights));
  return sys;
}

LinearMapOnAlgebra random_ucp_map(Rng& rng, const GnsSpace& algebra_space, int dilation_rank) {
  const int n = algebra_space.rep_dim();
  const int d = algebra_space.dim();
  // Isometry V: ℂ^n → ℂ^n ⊗ ℂ^r as the first n columns of a Haar unitary.
  const Matrix big = rng.unitary(n * dilation_rank);
  const Matrix v = big.leftCols(n);

  Matrix out(d, d);
  for (int j = 0; j < d; ++j) {
    Vector ej = Vector::Zero(d);
    ej(j) = 1.0;
    const Matrix a = algebra_space.represent(ej);
    Matrix dilated = Matrix::Zero(n * dilation_rank, n * dilation_rank);
    for (int c = 0; c < dilation_rank; ++c) dilated.block(c * n, c * n, n, n) = a;
    out.col(j) = algebra_space.project_coords(v.adjoint() * dilated * v);
  }
  return {out};
}

LinearMapOnAlgebra random_tau_preserving_ucp(Rng& rng, const BlockShape& shape,
                                             const TracialState& tau) {
  const AlgebraBasis basis(shape);
  const int d = basis.dim();

  const int conjugation_count = rng.uniform_int(1, 3);
  std::vector<double> lambdas;
  std::vector<AlgebraElement> unitaries;
  for (int t = 0; t < conjugation_count; ++t) {
    lambdas.push_back(rng.uniform(0.1, 1.0));
    AlgebraElement u = AlgebraElement::zero(shape);
    for (int i = 0; i < shape.block_count(); ++i) u.block(i) = rng.unitary(shape.dim(i));
    unitaries.push_back(std::move(u));
  }
  const double lambda_trace = rng.uniform() < 0.5 ? rng.uniform(0.0, 1.0) : 0.0;
  double total = lambda_trace;
  for (double l : lambdas) total += l;
  for (double& l : lambdas) l /= total;

  const AlgebraElement one = AlgebraElement::identity(shape);
  Matrix out = Matrix::Zero(d, d);
  for (int j = 0; j < d; ++j) {
    const AlgebraElement a = basis.basis_element(j);
    AlgebraElement img = (lambda_trace / total) * tau(a) * one;
    for (std::size_t t = 0; t < unitaries.size(); ++t)
      img += lambdas[t] * multiply(multiply(adjoint(unitaries[t]), a), unitaries[t]);
    out.col(j) = basis.coords(img);
  }
  return {out};
}

double equivariance_deviation(const PartialAction& alpha, const LinearMapOnAlgebra& phi) {
  const AlgebraBasis basis(alpha.shape());
  double dev = 0.0;
  auto apply_phi = [&](const AlgebraElement& a) { return basis.element(phi.mat * basis.coords(a)); };
  for (int g = 0; g < alpha.group().order(); ++g)
    for (int i : alpha.domain(g).support) {
      for (int p = 0; p < alpha.shape().dim(i); ++p)
        for (int q = 0; q < alpha.shape().dim(i); ++q) {
          const AlgebraElement x = AlgebraElement::matrix_unit(alpha.shape(), i, p, q);
          const AlgebraElement fx = apply_phi(x);
          dev = std::max(dev, alpha.domain(g).support_violation(fx));
          const AlgebraElement lhs = apply_phi(alpha.apply(g, x));
          const AlgebraElement rhs =
              alpha.apply(g, multiply(fx, alpha.domain(g).unit(alpha.shape())));
          dev = std::max(dev, entrywise_distance(lhs, rhs));
        }
    }
  return dev;
}

namespace {

// Blockwise channel data: phi(a)_j = V_j psi_o(V_j* a_j V_j) V_j*.
struct OrbitChannel {
  double lambda_id = 1.0, lambda_unitary = 0.0, lambda_trace = 0.0;
  Matrix unitary;  // for the Ad component, per orbit
};

LinearMapOnAlgebra blockwise_map(const BlockShape& shape, const std::vector<int>& orbit_of,
                                 const std::vector<OrbitChannel>& channels,
                                 const std::vector<Matrix>& gauge) {
  const AlgebraBasis basis(shape);
  Matrix out = Matrix::Zero(basis.dim(), basis.dim());
  for (int j = 0; j < basis.dim(); ++j) {
    const AlgebraElement a = basis.basis_element(j);
    AlgebraElement img = AlgebraElement::zero(shape);
    for (int i = 0; i < shape.block_count(); ++i) {
      const OrbitChannel& ch = channels[static_cast<std::size_t>(orbit_of[static_cast<std::size_t>(i)])];
      const Matrix& v = gauge[static_cast<std::size_t>(i)];
      const int n = shape.dim(i);
      const Matrix local = v.adjoint() * a.block(i) * v;
      Matrix res = ch.lambda_id * local;
      if (ch.lambda_unitary > 0.0)
        res += ch.lambda_unitary * ch.unitary.adjoint() * local * ch.unitary;
      if (ch.lambda_trace > 0.0)
        res += ch.lambda_trace * (local.trace() / static_cast<double>(n)) * Matrix::Identity(n, n);
      img.block(i) = v * res * v.adjoint();
    }
    out.col(j) = basis.coords(img);
  }
  return {out};
}

}  // namespace

LinearMapOnAlgebra random_equivariant_ucp(Rng& rng, const PartialAction& alpha,
                                          const TracialState& tau) {
  const BlockShape& shape = alpha.shape();
  const int k = shape.block_count();

  // Orbits of blocks under all the block bijections, with a gauge transport
  // V_j chained along the orbit (valid when the action is gauge-permutation
  // shaped, which the generator's systems are; verified below either way).
  std::vector<int> orbit_of(static_cast<std::size_t>(k), -1);
  std::vector<Matrix> gauge(static_cast<std::size_t>(k));
  int orbit_count = 0;
  for (int root = 0; root < k; ++root) {
    if (orbit_of[static_cast<std::size_t>(root)] >= 0) continue;
    const int orbit = orbit_count++;
    orbit_of[static_cast<std::size_t>(root)] = orbit;
    gauge[static_cast<std::size_t>(root)] = Matrix::Identity(shape.dim(root), shape.dim(root));
    std::vector<int> stack{root};
    while (!stack.empty()) {
      const int i = stack.back();
      stack.pop_back();
      for (int g = 0; g < alpha.group().order(); ++g) {
        if (!alpha.domain(g).contains_block(i)) continue;
        const int j = alpha.map_block(g, i);
        if (orbit_of[static_cast<std::size_t>(j)] >= 0) continue;
        orbit_of[static_cast<std::size_t>(j)] = orbit;
        gauge[static_cast<std::size_t>(j)] =
            alpha.unitary(g, j) * gauge[static_cast<std::size_t>(i)];
        stack.push_back(j);
      }
    }
  }

  std::vector<OrbitChannel> channels(static_cast<std::size_t>(orbit_count));
  std::vector<int> orbit_dim(static_cast<std::size_t>(orbit_count), 1);
  for (int i = 0; i < k; ++i) orbit_dim[static_cast<std::size_t>(orbit_of[static_cast<std::size_t>(i)])] = shape.dim(i);
  for (int o = 0; o < orbit_count; ++o) {
    OrbitChannel& ch = channels[static_cast<std::size_t>(o)];
    const double a = rng.uniform(0.2, 1.0);
    const double b = rng.uniform(0.0, 0.8);
    const double c = rng.uniform(0.0, 0.8);
    const double total = a + b + c;
    ch.lambda_id = a / total;
    ch.lambda_unitary = b / total;
    ch.lambda_trace = c / total;
    ch.unitary = rng.unitary(orbit_dim[static_cast<std::size_t>(o)]);
  }

  LinearMapOnAlgebra phi = blockwise_map(shape, orbit_of, channels, gauge);
  if (equivariance_deviation(alpha, phi) > 1e-9) {
    // Fallback that is equivariant for every partial action: mix the identity
    // with the blockwise normalized trace.
    const double lambda = rng.uniform(0.1, 0.9);
    for (auto& ch : channels) {
      ch.lambda_id = 1.0 - lambda;
      ch.lambda_unitary = 0.0;
      ch.lambda_trace = lambda;
    }
    for (int i = 0; i < k; ++i)
      gauge[static_cast<std::size_t>(i)] = Matrix::Identity(shape.dim(i), shape.dim(i));
    phi = blockwise_map(shape, orbit_of, channels, gauge);
  }
  (void)tau;  // blockwise trace-preserving channels are tau-preserving for any weights
  return phi;
}

ScalarPDFunction random_scalar_pd(Rng& rng, const FiniteGroup& G, int width) {
  const int m = G.order();
  Matrix f = rng.gaussian_matrix(width, m);  // column h: the vector f(h)
  // η(g) = Σ_h <f(gh), f(h)> / Σ_h ‖f(h)‖², so η(e) = 1.
  double norm = 0.0;
  for (int h = 0; h < m; ++h) norm += f.col(h).squaredNorm();
  ScalarPDFunction eta;
  eta.values.resize(static_cast<std::size_t>(m));
  for (int g = 0; g < m; ++g) {
    Complex v = 0.0;
    for (int h = 0; h < m; ++h) v += f.col(G.op(g, h)).adjoint().dot(f.col(h).adjoint());
    eta.values[static_cast<std::size_t>(g)] = v / norm;
  }
  return eta;
}

CenterValuedPDFunction random_pd_function(Rng& rng, const PartialAction& alpha) {
  const int m = alpha.group().order();
  const int k = alpha.shape().block_count();
  const int factors = rng.uniform_int(1, 2);
  std::vector<std::vector<Complex>> scalars(
      static_cast<std::size_t>(m), std::vector<Complex>(static_cast<std::size_t>(k), Complex(0.0)));
  for (int g = 0; g < m; ++g)
    for (int i : alpha.range(g).support) scalars[static_cast<std::size_t>(g)][static_cast<std::size_t>(i)] = 1.0;
  // Schur products of η·1_g lifts stay PD w.r.t. the action.
  for (int t = 0; t < factors; ++t) {
    const ScalarPDFunction eta = random_scalar_pd(rng, alpha.group(), rng.uniform_int(1, 3));
    for (int g = 0; g < m; ++g)
      for (int i : alpha.range(g).support)
        scalars[static_cast<std::size_t>(g)][static_cast<std::size_t>(i)] *= eta(g);
  }
  return CenterValuedPDFunction(alpha, std::move(scalars));
}

Json to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j) {
  require(j.is_array() && !j.empty(), "matrix: expected nonempty array of rows");
  const auto rows = j.size();
  const auto cols = j.front().size();
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    require(j[r].is_array() && j[r].size() == cols, "matrix: ragged rows");
    for (std::size_t c = 0; c < cols; ++c) {
      const Json& entry = j[r][c];
      require(entry.is_array() && entry.size() == 2, "matrix: entries must be [re, im]");
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          Complex(entry[0].get<double>(), entry[1].get<double>());
    }
  }
  return m;
}

Json to_json(const BlockShape& s) { return Json(s.dims); }

Json to_json(const TracialState& t) { return Json(t.weights); }

Json to_json(const FiniteGroup& g) {
  Json j;
  j["table"] = g.table();
  return j;
}

Json to_json(const AlgebraElement& a) {
  Json j;
  j["shape"] = to_json(a.shape());
  Json blocks = Json::array();
  for (int i = 0; i < a.block_count(); ++i) blocks.push_back(to_json(a.block(i)));
  j["blocks"] = std::move(blocks);
  return j;
}

AlgebraElement element_from_json(const Json& j) {
  require(j.contains("shape") && j.contains("blocks"), "element: need shape and blocks");
  const BlockShape shape(j["shape"].get<std::vector<int>>());
  std::vector<Matrix> blocks;
  for (const Json& b : j["blocks"]) blocks.push_back(matrix_from_json(b));
  return AlgebraElement(shape, std::move(blocks));
}

FiniteGroup group_from_json(const Json& j) {
  if (j.contains("table")) return FiniteGroup::from_table(j["table"].get<std::vector<std::vector<int>>>());
  require(j.contains("name") && j.contains("n"), "group: need table or {name, n}");
  const std::string name = j["name"].get<std::string>();
  const int n = j["n"].get<int>();
  if (name == "cyclic") return FiniteGroup::cyclic(n);
  if (name == "symmetric") return FiniteGroup::symmetric(n);
  throw std::invalid_argument("group: unknown constructor '" + name + "'");
}

PartialAction action_from_json(const Json& j, const FiniteGroup& group, const BlockShape& shape) {
  std::vector<std::vector<BlockIso>> maps(static_cast<std::size_t>(group.order()));
  if (j.contains("elements")) {
    for (const Json& rec : j["elements"]) {
      require(rec.contains("g"), "action: record missing g");
      const int g = rec["g"].get<int>();
      require(g >= 0 && g < group.order(), "action: g out of range");
      std::vector<BlockIso>& map = maps[static_cast<std::size_t>(g)];
      require(rec.contains("block_map"), "action: record missing block_map");
      for (const Json& pair : rec["block_map"]) {
        require(pair.is_array() && pair.size() == 2, "action: block_map entries are [source, target]");
        map.push_back({pair[0].get<int>(), pair[1].get<int>(), Matrix()});
      }
      if (rec.contains("domain_blocks")) {
        std::vector<int> declared = rec["domain_blocks"].get<std::vector<int>>();
        std::sort(declared.begin(), declared.end());
        std::vector<int> actual;
        for (const BlockIso& iso : map) actual.push_back(iso.source);
        std::sort(actual.begin(), actual.end());
        require(declared == actual, "action: domain_blocks disagrees with block_map sources");
      }
      if (rec.contains("unitaries"))
        for (const Json& u : rec["unitaries"]) {
          const int target = u["block"].get<int>();
          bool found = false;
          for (BlockIso& iso : map)
            if (iso.target == target) {
              iso.unitary = matrix_from_json(u["matrix"]);
              found = true;
            }
          require(found, "action: unitary given for a block that is not a target");
        }
    }
  }
  return PartialAction(group, shape, std::move(maps));
}

Json to_json(const PartialAction& a) {
  Json elements = Json::array();
  for (int g = 0; g < a.group().order(); ++g) {
    Json rec;
    rec["g"] = g;
    rec["domain_blocks"] = a.domain(g).support;
    Json map = Json::array();
    Json unitaries = Json::array();
    for (int i : a.domain(g).support) {
      const int j = a.map_block(g, i);
      map.push_back(Json::array({i, j}));
      Json u;
      u["block"] = j;
      u["matrix"] = to_json(a.unitary(g, j));
      unitaries.push_back(std::move(u));
    }
    rec["block_map"] = std::move(map);
    rec["unitaries"] = std::move(unitaries);
    elements.push_back(std::move(rec));
  }
  Json j;
  j["elements"] = std::move(elements);
  return j;
}

Json to_json(const SystemDescription& s) {
  Json j;
  j["name"] = s.name;
  j["group"] = to_json(s.group);
  j["shape"] = to_json(s.shape);
  j["weights"] = to_json(s.trace);
  j["action"] = to_json(s.action);
  return j;
}

SystemDescription system_from_json(const Json& j) {
  if (j.contains("preset")) return preset_system(j["preset"].get<std::string>());
  require(j.contains("group") && j.contains("shape") && j.contains("weights"),
          "system: need group, shape, weights");
  SystemDescription sys;
  sys.name = j.value("name", std::string("inline"));
  sys.group = group_from_json(j["group"]);
  sys.shape = BlockShape(j["shape"].get<std::vector<int>>());
  sys.trace = TracialState(j["weights"].get<std::vector<double>>());
  sys.trace.validate(sys.shape);
  sys.action = j.contains("action")
                   ? action_from_json(j["action"], sys.group, sys.shape)
                   : PartialAction::trivial_global(sys.group, sys.shape);
  return sys;
}

CrossedElement crossed_element_from_json(const Json& j, const CrossedProduct& system) {
  require(j.contains("coefficients"), "crossed element: need coefficients");
  CrossedElement x = system.zero();
  for (const Json& rec : j["coefficients"]) {
    const int g = rec["g"].get<int>();
    require(g >= 0 && g < system.group().order(), "crossed element: g out of range");
    x += system.monomial(g, element_from_json(rec["element"]));
  }
  return x;
}

Json to_json(const CrossedElement& x) {
  Json coefficients = Json::array();
  for (int g = 0; g < x.system().group().order(); ++g) {
    if (pcross::max_abs_entry(x.coefficient(g)) == 0.0) continue;
    Json rec;
    rec["g"] = g;
    rec["element"] = to_json(x.coefficient(g));
    coefficients.push_back(std::move(rec));
  }
  Json j;
  j["coefficients"] = std::move(coefficients);
  return j;
}

ScalarPDFunction eta_from_json(const Json& j, const FiniteGroup& group) {
  require(j.contains("values"), "eta: need values");
  const Json& vals = j["values"];
  require(static_cast<int>(vals.size()) == group.order(), "eta: need one value per group element");
  ScalarPDFunction eta;
  for (const Json& v : vals)
    eta.values.emplace_back(v[0].get<double>(), v[1].get<double>());
  return eta;
}

CenterValuedPDFunction h_from_json(const Json& j, const PartialAction& alpha) {
  require(j.contains("values"), "h: need values");
  std::vector<std::vector<Complex>> scalars(
      static_cast<std::size_t>(alpha.group().order()),
      std::vector<Complex>(static_cast<std::size_t>(alpha.shape().block_count()), Complex(0.0)));
  for (const Json& rec : j["values"]) {
    const int g = rec["g"].get<int>();
    require(g >= 0 && g < alpha.group().order(), "h: g out of range");
    const Json& s = rec["scalars"];
    require(static_cast<int>(s.size()) == alpha.shape().block_count(),
            "h: need one scalar per block");
    for (int i = 0; i < alpha.shape().block_count(); ++i)
      scalars[static_cast<std::size_t>(g)][static_cast<std::size_t>(i)] =
          Complex(s[static_cast<std::size_t>(i)][0].get<double>(),
                  s[static_cast<std::size_t>(i)][1].get<double>());
  }
  return CenterValuedPDFunction(alpha, std::move(scalars));
}

Json to_json(const CenterValuedPDFunction& h) {
  Json values = Json::array();
  for (int g = 0; g < h.group_order(); ++g) {
    Json rec;
    rec["g"] = g;
    Json scalars = Json::array();
    for (const Complex& c : h.scalars(g)) scalars.push_back(Json::array({c.real(), c.imag()}));
    rec["scalars"] = std::move(scalars);
    values.push_back(std::move(rec));
  }
  Json j;
  j["values"] = std::move(values);
  return j;
}

ChainDescription chain_from_json(const Json& j) {
  require(j.contains("stages"), "chain: need stages");
  ChainDescription chain;
  for (const Json& st : j["stages"]) {
    ChainStage stage;
    stage.shape = BlockShape(st["shape"].get<std::vector<int>>());
    stage.trace = TracialState(st["weights"].get<std::vector<double>>());
    stage.trace.validate(stage.shape);
    if (st.contains("action")) {
      const FiniteGroup group = group_from_json(st["group"]);
      stage.action = action_from_json(st["action"], group, stage.shape);
    }
    chain.stages.push_back(std::move(stage));
  }
  if (j.contains("embeddings"))
    for (const Json& em : j["embeddings"]) {
      Embedding emb;
      emb.multiplicity = em["multiplicity"].get<std::vector<std::vector<int>>>();
      if (em.contains("conjugators"))
        for (const Json& c : em["conjugators"])
          emb.conjugators.push_back(c.is_null() ? Matrix() : matrix_from_json(c));
      chain.embeddings.push_back(std::move(emb));
    }
  require(chain.embeddings.size() + 1 == chain.stages.size(),
          "chain: need one embedding between consecutive stages");
  return chain;
}

ChainDescription generate_random_chain(std::uint64_t seed, int stage_count, bool with_actions) {
  Rng rng(seed);
  ChainDescription chain;

  if (with_actions) {
    // Base stage from the system generator; subsequent stages amplify each
    // block by an orbit-constant multiplicity, conjugated by fresh unitaries.
    SystemDescription base = generate_random_system(seed * 2 + 1, {4, 4});
    ChainStage stage{base.shape, base.trace, base.action};
    chain.stages.push_back(stage);
    for (int s = 1; s < stage_count; ++s) {
      const ChainStage& prev = chain.stages.back();
      const PartialAction& alpha = *prev.action;
      const int k = prev.shape.block_count();

      // Orbit-constant amplification factor per block.
      std::vector<int> factor(static_cast<std::size_t>(k), 0);
      for (int i = 0; i < k; ++i) {
        if (factor[static_cast<std::size_t>(i)] != 0) continue;
        const int c = rng.uniform_int(1, 2);
        // Spread along the orbit of i under all block bijections.
        std::vector<int> stack{i};
        factor[static_cast<std::size_t>(i)] = c;
        while (!stack.empty()) {
          const int b = stack.back();
          stack.pop_back();
          for (int g = 0; g < alpha.group().order(); ++g)
            if (alpha.domain(g).contains_block(b)) {
              const int j = alpha.map_block(g, b);
              if (factor[static_cast<std::size_t>(j)] == 0) {
                factor[static_cast<std::size_t>(j)] = c;
                stack.push_back(j);
              }
            }
        }
      }

      std::vector<int> dims;
      std::vector<double> weights;
      for (int i = 0; i < k; ++i) {
        dims.push_back(prev.shape.dim(i) * factor[static_cast<std::size_t>(i)]);
        weights.push_back(prev.trace.weights[static_cast<std::size_t>(i)] /
                          factor[static_cast<std::size_t>(i)]);
      }
      ChainStage next;
      next.shape = BlockShape(dims);
      next.trace = TracialState(weights);

      Embedding emb;
      emb.multiplicity.assign(static_cast<std::size_t>(k),
                              std::vector<int>(static_cast<std::size_t>(k), 0));
      for (int i = 0; i < k; ++i)
        emb.multiplicity[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] =
            factor[static_cast<std::size_t>(i)];
      for (int i = 0; i < k; ++i) emb.conjugators.push_back(rng.unitary(next.shape.dim(i)));

      // Amplified action: same block bijections, unitaries intertwined with
      // the embedding conjugators so the embedding is equivariant.
      std::vector<std::vector<BlockIso>> maps(static_cast<std::size_t>(alpha.group().order()));
      for (int g = 0; g < alpha.group().order(); ++g)
        for (int i : alpha.domain(g).support) {
          const int j = alpha.map_block(g, i);
          const Matrix& u = alpha.unitary(g, j);
          const int c = factor[static_cast<std::size_t>(i)];
          Matrix amplified = Matrix::Zero(next.shape.dim(j), next.shape.dim(j));
          for (int t = 0; t < c; ++t)
            amplified.block(t * u.rows(), t * u.rows(), u.rows(), u.cols()) = u;
          maps[static_cast<std::size_t>(g)].push_back(
              {i, j,
               emb.conjugators[static_cast<std::size_t>(j)] * amplified *
                   emb.conjugators[static_cast<std::size_t>(i)].adjoint()});
        }
      next.action = PartialAction(alpha.group(), next.shape, std::move(maps));

      chain.embeddings.push_back(std::move(emb));
      chain.stages.push_back(std::move(next));
    }
    return chain;
  }

  // Action-free chain with general Bratteli multiplicities: shapes forward,
  // weights pulled back from a random faithful trace on the last stage.
  std::vector<BlockShape> shapes;
  {
    std::vector<int> dims;
    const int k0 = rng.uniform_int(1, 2);
    for (int i = 0; i < k0; ++i) dims.push_back(rng.uniform_int(1, 2));
    shapes.push_back(BlockShape(dims));
  }
  std::vector<Embedding> embeddings;
  for (int s = 1; s < stage_count; ++s) {
    const BlockShape& prev = shapes.back();
    const int kt = rng.uniform_int(1, 2);
    Embedding emb;
    emb.multiplicity.assign(static_cast<std::size_t>(kt),
                            std::vector<int>(static_cast<std::size_t>(prev.block_count()), 0));
    // Column positivity keeps the embedding injective.
    for (int j = 0; j < prev.block_count(); ++j)
      emb.multiplicity[static_cast<std::size_t>(rng.uniform_int(0, kt - 1))][static_cast<std::size_t>(j)] = 1;
    for (int i = 0; i < kt; ++i)
      for (int j = 0; j < prev.block_count(); ++j)
        if (rng.uniform() < 0.4)
          emb.multiplicity[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] +=
              rng.uniform_int(0, 1);
    std::vector<int> dims(static_cast<std::size_t>(kt), 0);
    for (int i = 0; i < kt; ++i) {
      for (int j = 0; j < prev.block_count(); ++j)
        dims[static_cast<std::size_t>(i)] +=
            emb.multiplicity[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * prev.dim(j);
      if (dims[static_cast<std::size_t>(i)] == 0) {
        // Every target block must receive something; reroute the first source.
        emb.multiplicity[static_cast<std::size_t>(i)][0] = 1;
        dims[static_cast<std::size_t>(i)] += prev.dim(0);
      }
    }
    const BlockShape next(dims);
    for (int i = 0; i < kt; ++i) emb.conjugators.push_back(rng.unitary(next.dim(i)));
    embeddings.push_back(std::move(emb));
    shapes.push_back(next);
  }

  // Faithful weights on the last stage, pulled back through the chain.
  std::vector<TracialState> traces(shapes.size());
  {
    std::vector<double> w;
    double norm = 0.0;
    for (int i = 0; i < shapes.back().block_count(); ++i) {
      w.push_back(rng.uniform(0.5, 1.5));
      norm += w.back() * shapes.back().dim(i);
    }
    for (double& x : w) x /= norm;
    traces.back() = TracialState(w);
  }
  for (int s = static_cast<int>(shapes.size()) - 2; s >= 0; --s) {
    std::vector<double> w(static_cast<std::size_t>(shapes[static_cast<std::size_t>(s)].block_count()), 0.0);
    for (int j = 0; j < shapes[static_cast<std::size_t>(s)].block_count(); ++j)
      for (int i = 0; i < shapes[static_cast<std::size_t>(s) + 1].block_count(); ++i)
        w[static_cast<std::size_t>(j)] +=
            embeddings[static_cast<std::size_t>(s)]
                .multiplicity[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
            traces[static_cast<std::size_t>(s) + 1].weights[static_cast<std::size_t>(i)];
    traces[static_cast<std::size_t>(s)] = TracialState(w);
  }

  for (std::size_t s = 0; s < shapes.size(); ++s)
    chain.stages.push_back({shapes[s], traces[s], std::nullopt});
  chain.embeddings = std::move(embeddings);
  return chain;
}

}  // namespace pcross

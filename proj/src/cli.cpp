#include "pcross/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "pcross/systems.hpp"

namespace pcross::cli {

namespace {

std::string fnv1a64(const std::string& data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

struct Options {
  std::string preset;
  std::string system_file;
  std::string element_file;
  std::string h_file;
  std::string phi_spec = "identity";
  std::string input_file;
  std::string convention = "cutdown";
  std::string format = "json";
  std::string out_file;
  std::string csv_file;
  double tol = kDefaultTol;
  std::uint64_t seed = 0;
  int stages = 0;  // 0 = all
};

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open input file '" + path + "'");
  return Json::parse(in);  // throws parse_error with byte location
}

SystemDescription load_system(const Options& opt, Json& digest_inputs) {
  if (!opt.preset.empty()) {
    digest_inputs["preset"] = opt.preset;
    return preset_system(opt.preset);
  }
  if (!opt.system_file.empty()) {
    const Json j = load_json(opt.system_file);
    digest_inputs["system"] = j;
    return system_from_json(j);
  }
  throw std::runtime_error("no system given: use --preset or --system");
}

struct Check {
  std::string name;
  bool pass = false;
  double certificate = 0.0;
  double tolerance = 0.0;
  double deviation = 0.0;
};

struct ReportBuilder {
  std::string command;
  Json inputs;
  std::uint64_t seed = 0;
  double tol = kDefaultTol;
  std::vector<Check> checks;
  Json info = Json::object();

  void add(const std::string& name, bool pass, double certificate, double deviation) {
    checks.push_back({name, pass, certificate, tol, deviation});
  }
  bool all_pass() const {
    for (const Check& c : checks)
      if (!c.pass) return false;
    return true;
  }
  Json finish(double elapsed_ms) const {
    Json j;
    j["command"] = command;
    j["inputs_digest"] = fnv1a64(inputs.dump());
    j["seed"] = seed;
    j["tolerance"] = tol;
    Json arr = Json::array();
    for (const Check& c : checks) {
      Json cj;
      cj["name"] = c.name;
      cj["pass"] = c.pass;
      cj["certificate"] = c.certificate;
      cj["tolerance"] = c.tolerance;
      cj["deviation"] = c.deviation;
      arr.push_back(std::move(cj));
    }
    j["checks"] = std::move(arr);
    j["info"] = info;
    j["pass"] = all_pass();
    j["timings"] = Json{{"total_ms", elapsed_ms}};
    return j;
  }
};

void emit(const Json& report, const Options& opt, std::ostream& out) {
  std::ostream* sink = &out;
  std::ofstream file;
  if (!opt.out_file.empty()) {
    file.open(opt.out_file);
    if (!file) throw std::runtime_error("cannot open output file '" + opt.out_file + "'");
    sink = &file;
  }
  if (opt.format == "json") {
    *sink << report.dump(2) << "\n";
    return;
  }
  // text format
  *sink << "command: " << report["command"].get<std::string>() << "\n";
  for (const Json& c : report["checks"])
    *sink << (c["pass"].get<bool>() ? "  [pass] " : "  [FAIL] ") << c["name"].get<std::string>()
          << "  certificate=" << c["certificate"].dump() << " deviation=" << c["deviation"].dump()
          << "\n";
  *sink << (report["pass"].get<bool>() ? "PASS" : "FAIL") << "\n";
}

void write_csv(const Options& opt, const std::string& header,
               const std::vector<std::string>& rows) {
  if (opt.csv_file.empty()) return;
  std::ofstream csv(opt.csv_file);
  if (!csv) throw std::runtime_error("cannot open csv file '" + opt.csv_file + "'");
  csv << header << "\n";
  for (const std::string& r : rows) csv << r << "\n";
}

// ---- command implementations -------------------------------------------

void cmd_validate(const Options& opt, ReportBuilder& rb) {
  // Lenient path: report violations instead of failing on malformed systems.
  Json sysj;
  if (!opt.preset.empty()) {
    rb.inputs["preset"] = opt.preset;
    sysj = to_json(preset_system(opt.preset));
  } else {
    sysj = load_json(opt.system_file);
    rb.inputs["system"] = sysj;
    if (sysj.contains("preset")) sysj = to_json(preset_system(sysj["preset"].get<std::string>()));
  }

  FiniteGroup group;
  bool group_ok = false;
  {
    double dev = 0.0;
    std::string violation;
    try {
      if (sysj["group"].contains("table")) {
        const auto table = sysj["group"]["table"].get<std::vector<std::vector<int>>>();
        const GroupValidation v = FiniteGroup::validate_table(table);
        group_ok = v.valid;
        if (!v.violations.empty()) violation = v.violations.front();
        if (group_ok) group = FiniteGroup::from_table(table);
      } else {
        group = group_from_json(sysj["group"]);
        group_ok = true;
      }
    } catch (const std::exception& e) {
      violation = e.what();
      dev = 1.0;
    }
    rb.add("group_axioms", group_ok, group_ok ? 1.0 : 0.0, dev);
    if (!violation.empty()) rb.info["group_violation"] = violation;
    if (group_ok) rb.info["group_order"] = group.order();
  }
  if (!group_ok) return;

  BlockShape shape;
  PartialAction action;
  bool action_ok = false;
  try {
    shape = BlockShape(sysj["shape"].get<std::vector<int>>());
    action = sysj.contains("action") ? action_from_json(sysj["action"], group, shape)
                                     : PartialAction::trivial_global(group, shape);
    const ActionValidation v = validate_partial_action(action, opt.tol);
    action_ok = v.valid;
    rb.add("action_axioms", v.valid, v.valid ? 1.0 : 0.0, v.max_deviation);
    if (!v.valid && !v.violations.empty()) {
      rb.info["action_violation"] =
          v.violations.front().check + " at g=" + std::to_string(v.violations.front().g);
    }
  } catch (const std::exception& e) {
    rb.add("action_axioms", false, 0.0, 1.0);
    rb.info["action_violation"] = e.what();
  }
  if (!action_ok) return;

  try {
    const TracialState tau(sysj["weights"].get<std::vector<double>>());
    tau.validate(shape, opt.tol);
    rb.add("trace_normalized", true, 1.0, 0.0);
    rb.add("trace_faithful", tau.is_faithful(), tau.is_faithful() ? 1.0 : 0.0, 0.0);
    const TraceInvariance inv = check_invariant_trace(action, tau, opt.tol);
    rb.add("trace_invariant", inv.invariant, inv.invariant ? 1.0 : 0.0, inv.max_deviation);
  } catch (const std::exception& e) {
    rb.add("trace_normalized", false, 0.0, 1.0);
    rb.info["trace_violation"] = e.what();
  }
}

void cmd_build(const Options& opt, ReportBuilder& rb) {
  const SystemDescription sys = load_system(opt, rb.inputs);
  const CrossedProduct cp(sys.action);
  const RegularRepresentation rep(cp);

  rb.info["crossed_dim"] = cp.dim();
  rb.info["fiber_dim"] = rep.fiber_dim();
  rb.info["total_dim"] = rep.total_dim();
  Json labels = Json::array();
  for (const auto& l : cp.basis())
    labels.push_back(Json::array({l.g, l.block, l.row, l.col}));
  rb.info["basis"] = std::move(labels);

  // Structure constants of the basis products, sparse.
  Json table = Json::array();
  double assoc_dev = 0.0;
  std::vector<CrossedElement> basis;
  for (int i = 0; i < cp.dim(); ++i) basis.push_back(cp.basis_element(i));
  for (int i = 0; i < cp.dim(); ++i)
    for (int j = 0; j < cp.dim(); ++j) {
      const Vector c = cp.coords(cp_multiply(basis[static_cast<std::size_t>(i)],
                                             basis[static_cast<std::size_t>(j)]));
      Json entry = Json::array();
      for (int k = 0; k < cp.dim(); ++k)
        if (std::abs(c(k)) > 1e-14)
          entry.push_back(Json::array({k, Json::array({c(k).real(), c(k).imag()})}));
      if (!entry.empty()) table.push_back(Json{{"i", i}, {"j", j}, {"coeffs", entry}});
    }
  rb.info["structure_constants"] = std::move(table);

  // Unit law and basis associativity (full when small, seeded sample otherwise).
  double unit_dev = 0.0;
  const CrossedElement one = cp.unit();
  for (int i = 0; i < cp.dim(); ++i) {
    unit_dev = std::max(unit_dev, cp_distance(cp_multiply(one, basis[static_cast<std::size_t>(i)]),
                                              basis[static_cast<std::size_t>(i)]));
    unit_dev = std::max(unit_dev, cp_distance(cp_multiply(basis[static_cast<std::size_t>(i)], one),
                                              basis[static_cast<std::size_t>(i)]));
  }
  rb.add("unit_law", unit_dev <= opt.tol, unit_dev, unit_dev);

  Rng rng(opt.seed);
  const int d = cp.dim();
  const bool full = d <= 8;
  const int trials = full ? d * d * d : 200;
  for (int t = 0; t < trials; ++t) {
    int i, j, k;
    if (full) {
      i = t / (d * d);
      j = (t / d) % d;
      k = t % d;
    } else {
      i = rng.uniform_int(0, d - 1);
      j = rng.uniform_int(0, d - 1);
      k = rng.uniform_int(0, d - 1);
    }
    const auto& x = basis[static_cast<std::size_t>(i)];
    const auto& y = basis[static_cast<std::size_t>(j)];
    const auto& z = basis[static_cast<std::size_t>(k)];
    assoc_dev = std::max(assoc_dev, cp_distance(cp_multiply(cp_multiply(x, y), z),
                                                cp_multiply(x, cp_multiply(y, z))));
  }
  rb.add("associativity_basis", assoc_dev <= opt.tol, assoc_dev, assoc_dev);
}

void cmd_check_covariance(const Options& opt, ReportBuilder& rb) {
  const SystemDescription sys = load_system(opt, rb.inputs);
  const CrossedProduct cp(sys.action);
  const RegularRepresentation rep(cp);
  const CovarianceReport report = check_covariance(rep, opt.tol);
  rb.add("covariance", report.pass, report.max_deviation, report.max_deviation);
  rb.info["total_dim"] = rep.total_dim();
}

void cmd_norm(const Options& opt, ReportBuilder& rb) {
  const SystemDescription sys = load_system(opt, rb.inputs);
  const CrossedProduct cp(sys.action);
  const RegularRepresentation rep(cp);
  if (opt.element_file.empty()) throw std::runtime_error("norm: need --element FILE");
  const Json ej = load_json(opt.element_file);
  rb.inputs["element"] = ej;
  const CrossedElement x = crossed_element_from_json(ej, cp);

  const double norm = reduced_norm(rep, x);
  const double norm_sq = reduced_norm(rep, cp_multiply(cp_adjoint(x), x));
  const double cstar_dev = std::abs(norm_sq - norm * norm);
  rb.add("reduced_norm", true, norm, 0.0);
  rb.add("cstar_identity", cstar_dev <= opt.tol * (1.0 + norm * norm), norm_sq, cstar_dev);
  rb.info["norm"] = norm;
  rb.info["norm_of_x_star_x"] = norm_sq;
}

void cmd_check_pd(const Options& opt, ReportBuilder& rb) {
  const SystemDescription sys = load_system(opt, rb.inputs);
  if (opt.h_file.empty()) throw std::runtime_error("check-pd: need --h FILE");
  const Json hj = load_json(opt.h_file);
  rb.inputs["h"] = hj;
  rb.inputs["convention"] = opt.convention;
  const CenterValuedPDFunction h = h_from_json(hj, sys.action);

  const bool run_cutdown = opt.convention == "cutdown" || opt.convention == "both";
  const bool run_paper = opt.convention == "paper" || opt.convention == "both";
  if (!run_cutdown && !run_paper)
    throw std::runtime_error("check-pd: --convention must be cutdown, paper, or both");

  if (run_cutdown) {
    const PositivityCertificate c =
        is_pd_wrt_action(sys.action, h, PDConvention::kCutdown, opt.tol);
    rb.add("pd_cutdown", c.positive, c.min_eigenvalue, c.hermitian_deviation);
  }
  if (run_paper) {
    const PositivityCertificate c = is_pd_wrt_action(sys.action, h, PDConvention::kPaper, opt.tol);
    rb.add("pd_paper", c.positive, c.min_eigenvalue, c.hermitian_deviation);
  }
  if (run_cutdown && run_paper) {
    std::vector<int> full(static_cast<std::size_t>(sys.group.order()));
    for (int g = 0; g < sys.group.order(); ++g) full[static_cast<std::size_t>(g)] = g;
    const double divergence =
        entrywise_distance(pd_matrix(sys.action, h, full, PDConvention::kCutdown),
                           pd_matrix(sys.action, h, full, PDConvention::kPaper));
    rb.info["convention_divergence"] = divergence;
  }
}

LinearMapOnAlgebra parse_phi(const Options& opt, const SystemDescription& sys, Json& inputs) {
  const AlgebraBasis basis(sys.shape);
  if (opt.phi_spec == "identity") {
    inputs["phi"] = "identity";
    return LinearMapOnAlgebra::identity(basis.dim());
  }
  const Json j = load_json(opt.phi_spec);
  inputs["phi"] = j;
  return {matrix_from_json(j.contains("matrix") ? j["matrix"] : j)};
}

void cmd_induce_ucp(const Options& opt, ReportBuilder& rb) {
  const SystemDescription sys = load_system(opt, rb.inputs);
  if (opt.h_file.empty()) throw std::runtime_error("induce-ucp: need --h FILE");
  const Json hj = load_json(opt.h_file);
  rb.inputs["h"] = hj;
  const CenterValuedPDFunction h = h_from_json(hj, sys.action);
  const LinearMapOnAlgebra phi = parse_phi(opt, sys, rb.inputs);

  const CrossedProduct cp(sys.action);
  const GnsSpace algebra_space = make_algebra_gns(sys.shape, sys.trace);
  const GnsSpace crossed_space = make_crossed_gns(cp, sys.trace);

  const UcpCertificate phi_cert = check_ucp(algebra_space, phi, opt.tol);
  rb.add("phi_unital", phi_cert.unital, phi_cert.unital ? 1.0 : 0.0, 0.0);
  rb.add("phi_completely_positive", phi_cert.cp.pass, phi_cert.cp.certificate,
         phi_cert.cp.hermitian_deviation);
  const MapCertificate phi_dec = check_tau_decreasing(algebra_space, phi, opt.tol);
  rb.add("phi_tau_decreasing", phi_dec.pass, phi_dec.certificate, phi_dec.hermitian_deviation);

  const PositivityCertificate h_cert =
      is_pd_wrt_action(sys.action, h, PDConvention::kCutdown, opt.tol);
  rb.add("h_positive_definite", h_cert.positive, h_cert.min_eigenvalue,
         h_cert.hermitian_deviation);
  double unit_dev = 0.0;
  for (int b = 0; b < sys.shape.block_count(); ++b)
    unit_dev = std::max(unit_dev,
                        std::abs(h.scalars(sys.group.identity())[static_cast<std::size_t>(b)] - 1.0));
  rb.add("h_unit_at_identity", unit_dev <= opt.tol, 1.0 - unit_dev, unit_dev);

  if (!rb.all_pass()) return;  // precondition certificates failed: stop here

  const LinearMapOnAlgebra Phi = induce_ucp_on_crossed(cp, phi, h);
  const UcpCertificate cert = check_ucp(crossed_space, Phi, opt.tol);
  rb.add("induced_unital", cert.unital, cert.unital ? 1.0 : 0.0, 0.0);
  rb.add("induced_completely_positive", cert.cp.pass, cert.cp.certificate,
         cert.cp.hermitian_deviation);
  const MapCertificate dec = check_tau_decreasing(crossed_space, Phi, opt.tol);
  rb.add("induced_tau_decreasing", dec.pass, dec.certificate, dec.hermitian_deviation);

  rb.info["matrix_digest"] = fnv1a64(to_json(Phi.mat).dump());
  rb.info["crossed_dim"] = cp.dim();

  const std::vector<double> sv = induced_singular_values(crossed_space, Phi);
  Json curve = Json::array();
  for (double s : sv) curve.push_back(s);
  rb.info["singular_values"] = std::move(curve);
  std::vector<std::string> rows;
  for (std::size_t r = 0; r <= sv.size(); ++r) {
    std::ostringstream line;
    line << r << "," << (r < sv.size() ? sv[r] : 0.0);
    rows.push_back(line.str());
  }
  write_csv(opt, "rank,eps", rows);
}

void cmd_certify(const Options& opt, ReportBuilder& rb) {
  const SystemDescription sys = load_system(opt, rb.inputs);
  if (opt.input_file.empty()) throw std::runtime_error("certify: need --input FILE");
  const Json j = load_json(opt.input_file);
  rb.inputs["stages"] = j;

  const CrossedProduct cp(sys.action);
  std::vector<HaagerupStage> stages;
  const AlgebraBasis basis(sys.shape);
  for (const Json& st : j["stages"]) {
    HaagerupStage stage;
    if (st.contains("phi") && st["phi"].is_object())
      stage.phi = {matrix_from_json(st["phi"]["matrix"])};
    else
      stage.phi = LinearMapOnAlgebra::identity(basis.dim());
    stage.h = h_from_json(st["h"], sys.action);
    stage.eps = st.value("eps", 0.0);
    stages.push_back(std::move(stage));
  }

  const HaagerupCertification cert = certify_haagerup_data(cp, sys.trace, stages, opt.tol);
  std::vector<std::string> rows;
  for (std::size_t n = 0; n < cert.stages.size(); ++n) {
    const HaagerupStageReport& r = cert.stages[n];
    const std::string prefix = "stage" + std::to_string(n) + "_";
    rb.add(prefix + "preconditions", r.preconditions_pass,
           std::min(r.phi_cert.cp.certificate, r.h_cert.min_eigenvalue), 0.0);
    rb.add(prefix + "induced_ucp", r.induced_cert.pass() && r.induced_tau_decreasing.pass,
           r.induced_cert.cp.certificate, r.induced_cert.cp.hermitian_deviation);
    rb.add(prefix + "pointwise_deviation", r.max_pointwise_deviation <= r.eps + opt.tol,
           r.max_pointwise_deviation, r.max_pointwise_deviation);
    Json stage_info;
    stage_info["max_h_deviation"] = r.max_h_deviation;
    stage_info["two_norm_growth"] = r.two_norm_growth;
    Json curve = Json::array();
    for (double s : r.singular_values) curve.push_back(s);
    stage_info["singular_values"] = std::move(curve);
    rb.info["stage" + std::to_string(n)] = std::move(stage_info);

    std::ostringstream line;
    line << n << "," << r.max_pointwise_deviation << "," << r.max_h_deviation << "," << r.eps
         << "," << (r.pass ? 1 : 0);
    rows.push_back(line.str());
  }
  write_csv(opt, "stage,pointwise_deviation,h_deviation,eps,pass", rows);
}

void cmd_chain(const Options& opt, ReportBuilder& rb) {
  if (opt.input_file.empty()) throw std::runtime_error("chain: need --input FILE");
  const Json j = load_json(opt.input_file);
  rb.inputs["chain"] = j;
  rb.inputs["stages_flag"] = opt.stages;
  ChainDescription chain = chain_from_json(j);
  if (opt.stages > 0 && opt.stages < static_cast<int>(chain.stages.size())) {
    chain.stages.resize(static_cast<std::size_t>(opt.stages));
    chain.embeddings.resize(static_cast<std::size_t>(opt.stages) - 1);
  }

  std::vector<std::string> rows;
  for (std::size_t n = 0; n + 1 < chain.stages.size(); ++n) {
    const std::string prefix = "step" + std::to_string(n) + "_";
    const EmbeddingValidation v = validate_embedding(
        chain.embeddings[n], chain.stages[n], chain.stages[n + 1], opt.tol);
    rb.add(prefix + "embedding", v.valid, v.valid ? 1.0 : 0.0, v.max_deviation);
    if (!v.valid) continue;
    const Matrix u = gns_isometry(chain.embeddings[n], chain.stages[n], chain.stages[n + 1]);
    const double iso_dev =
        (u.adjoint() * u - Matrix::Identity(u.cols(), u.cols())).cwiseAbs().maxCoeff();
    rb.add(prefix + "gns_isometry", iso_dev <= opt.tol, iso_dev, iso_dev);
  }

  const bool with_actions =
      std::all_of(chain.stages.begin(), chain.stages.end(),
                  [](const ChainStage& s) { return s.action.has_value(); });
  if (with_actions) {
    const auto reports =
        equivariant_chain_crossed_products(chain.stages, chain.embeddings, opt.seed, opt.tol);
    for (std::size_t n = 0; n < reports.size(); ++n) {
      const ChainStageReport& r = reports[n];
      const double max_dev =
          std::max({r.equivariance_deviation, r.homomorphism_deviation, r.unit_deviation,
                    r.isometry_deviation, r.expectation_deviation, r.trace_deviation});
      rb.add("step" + std::to_string(n) + "_equivariant_crossed", r.pass, max_dev, max_dev);
      std::ostringstream line;
      line << n << "," << r.equivariance_deviation << "," << r.homomorphism_deviation << ","
           << r.unit_deviation << "," << r.isometry_deviation << "," << r.expectation_deviation
           << "," << r.trace_deviation << "," << (r.pass ? 1 : 0);
      rows.push_back(line.str());
    }
  }
  write_csv(opt, "stage,equivariance,homomorphism,unit,isometry,expectation,trace,pass", rows);
  rb.info["stage_count"] = chain.stages.size();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"finite-dimensional partial crossed products: build and certify"};
  app.require_subcommand(1);

  Options opt;
  if (const char* env_tol = std::getenv("PCROSS_TOL")) opt.tol = std::atof(env_tol);

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--preset", opt.preset, "named system preset (W1, trivial, restriction-example)");
    sub->add_option("--system", opt.system_file, "system description JSON file");
    sub->add_option("--tol", opt.tol, "scale-relative tolerance");
    sub->add_option("--seed", opt.seed, "seed for randomized sub-checks");
    sub->add_option("--format", opt.format, "json|text")->check(CLI::IsMember({"json", "text"}));
    sub->add_option("--out", opt.out_file, "write the report to a file instead of stdout");
    sub->add_option("--csv", opt.csv_file, "write auxiliary CSV data");
  };

  CLI::App* validate = app.add_subcommand("validate", "validate group, action, and trace");
  CLI::App* build = app.add_subcommand("build", "crossed product structure constants and dims");
  CLI::App* covariance = app.add_subcommand("check-covariance", "regular representation covariance");
  CLI::App* norm = app.add_subcommand("norm", "reduced norm of a crossed element");
  CLI::App* checkpd = app.add_subcommand("check-pd", "positive definiteness w.r.t. the action");
  CLI::App* induce = app.add_subcommand("induce-ucp", "induced UCP map on the crossed product");
  CLI::App* certify = app.add_subcommand("certify", "staged Haagerup data certification");
  CLI::App* chain = app.add_subcommand("chain", "trace-compatible chain certification");
  for (CLI::App* sub : {validate, build, covariance, norm, checkpd, induce, certify, chain})
    add_common(sub);

  norm->add_option("--element", opt.element_file, "crossed element JSON file");
  checkpd->add_option("--h", opt.h_file, "center-valued function JSON file");
  checkpd->add_option("--convention", opt.convention, "cutdown|paper|both")
      ->check(CLI::IsMember({"cutdown", "paper", "both"}));
  induce->add_option("--h", opt.h_file, "center-valued function JSON file");
  induce->add_option("--phi", opt.phi_spec, "'identity' or a JSON file with {matrix}");
  certify->add_option("--input", opt.input_file, "stages JSON file");
  chain->add_option("--input", opt.input_file, "chain JSON file");
  chain->add_option("--stages", opt.stages, "truncate the chain to this many stages");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  const auto start = std::chrono::steady_clock::now();
  ReportBuilder rb;
  rb.seed = opt.seed;
  rb.tol = opt.tol;
  rb.inputs["tol"] = opt.tol;
  rb.inputs["seed"] = opt.seed;

  try {
    if (validate->parsed()) {
      rb.command = "validate";
      cmd_validate(opt, rb);
    } else if (build->parsed()) {
      rb.command = "build";
      cmd_build(opt, rb);
    } else if (covariance->parsed()) {
      rb.command = "check-covariance";
      cmd_check_covariance(opt, rb);
    } else if (norm->parsed()) {
      rb.command = "norm";
      cmd_norm(opt, rb);
    } else if (checkpd->parsed()) {
      rb.command = "check-pd";
      cmd_check_pd(opt, rb);
    } else if (induce->parsed()) {
      rb.command = "induce-ucp";
      cmd_induce_ucp(opt, rb);
    } else if (certify->parsed()) {
      rb.command = "certify";
      cmd_certify(opt, rb);
    } else if (chain->parsed()) {
      rb.command = "chain";
      cmd_chain(opt, rb);
    }
  } catch (const Json::parse_error& e) {
    err << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  const double elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  emit(rb.finish(elapsed_ms), opt, out);
  return rb.all_pass() ? 0 : 1;
}

}  // namespace pcross::cli

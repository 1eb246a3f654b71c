#include "polyrigid/cli.hpp"

#include "polyrigid/cauchy.hpp"
#include "polyrigid/generators.hpp"
#include "polyrigid/io.hpp"
#include "polyrigid/lambda.hpp"
#include "polyrigid/linalg.hpp"
#include "polyrigid/probe.hpp"
#include "polyrigid/suspension.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

namespace polyrigid {

using nlohmann::json;

namespace {

struct Context {
  Tolerance tol;
  std::uint64_t seed = 1;
  bool csv = false;
  bool timings = false;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

json base_report(const Context& c, const std::string& command) {
  json r;
  r["command"] = command;
  r["tolerances"] = {{"rank_tol", c.tol.rank_tol}, {"geom_tol", c.tol.geom_tol}};
  r["seed"] = c.seed;
  return r;
}

void emit(const Context& c, json report, const CsvTable* table, std::ostream& out) {
  if (c.csv && table) {
    out << table->str();
    return;
  }
  if (c.timings) {
    const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - c.start).count();
    report["timings"] = {{"total_ms", ms}};
  }
  out << report.dump(2) << "\n";
}

json edge_json(const Edge& e) { return json::array({e.i, e.j}); }

Edge parse_edge(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw UsageError("edge must be given as i,j: '" + text + "'");
  try {
    return make_edge(std::stoi(text.substr(0, comma)), std::stoi(text.substr(comma + 1)));
  } catch (const std::logic_error&) {
    throw UsageError("edge must be given as i,j: '" + text + "'");
  }
}

// File index of each suspension vertex (N, S, equator).
std::vector<int> suspension_ids(const FrameworkFile& f) {
  std::vector<int> ids{(*f.poles)[0], (*f.poles)[1]};
  ids.insert(ids.end(), f.equator->begin(), f.equator->end());
  return ids;
}

// ---------------------------------------------------------------------------

int cmd_analyze(const Context& c, const std::string& path, std::ostream& out) {
  const FrameworkFile f = load_framework(path);
  json rep = base_report(c, "analyze");
  rep["instance_hash"] = hex64(instance_hash(f));
  CsvTable table{{"key", "value"}, {}};
  json v;

  const Framework fw = to_framework(f, c.tol.geom_tol);
  const SvdSummary svd = analyze_matrix(rigidity_matrix(fw), c.tol.rank_tol);
  const int n = fw.vertex_count();
  const int dim = affine_dimension(fw.vertices(), c.tol.geom_tol);
  v["vertices"] = n;
  v["edges"] = fw.edge_count();
  v["affine_dimension"] = dim;
  v["rank"] = svd.rank;
  v["flex_dimension"] = 3 * n - svd.rank;
  v["trivial_dimension"] = static_cast<int>(trivial_motions(fw.vertices(), c.tol.rank_tol).cols());
  v["stress_dimension"] = fw.edge_count() - svd.rank;
  if (n >= 3 && dim == 3) {
    v["infinitesimally_rigid"] = svd.rank == 3 * n - 6;
  } else {
    v["infinitesimally_rigid"] = nullptr;
    v["note"] = "configuration does not span 3-space";
  }

  if (f.faces) {
    const PolyhedralSurface s = to_surface(f, c.tol.geom_tol);
    const ConvexityReport conv = classify_convexity(s, c.tol);
    json reflex = json::array();
    for (int e = 0; e < s.edge_count(); ++e) {
      if (conv.edge_non_convex[e]) reflex.push_back(edge_json(s.edges()[e]));
    }
    json hidden = json::array();
    for (int k = 0; k < s.vertex_count(); ++k) {
      if (!conv.vertex_exposed[k]) hidden.push_back(k);
    }
    v["convexity"] = to_string(conv.classification);
    v["non_convex_edges"] = reflex;
    v["non_exposed_vertices"] = hidden;
    if (!conv.diagnostic.empty()) v["convexity_diagnostic"] = conv.diagnostic;
  }
  if (f.poles) {
    const Suspension s = to_suspension(f, c.tol.geom_tol);
    const Decomposability dec = is_ns_decomposable(s, c.tol);
    json sj;
    sj["ns_decomposable"] = dec.decomposable;
    if (!dec.decomposable) sj["diagnostic"] = dec.diagnostic;
    sj["weakly_strictly_convex"] = is_weakly_strictly_convex(s, c.tol);
    try {
      sj["lambda"] = lambda_scalar(s).lambda;
    } catch (const GeometryError& e) {
      sj["lambda"] = nullptr;
      sj["lambda_error"] = e.what();
    }
    sj["rigid"] = suspension_rigidity(s, c.tol);
    v["suspension"] = sj;
  }
  if (f.tetrahedra) {
    const Decomposition d = to_decomposition(f, c.tol);
    const LambdaRigidity lr = rigidity_from_lambda(d, c.tol);
    json dj;
    dj["interior_edges"] = d.interior_count();
    dj["rigid_from_lambda"] = lr.rigid;
    dj["rigid_from_rank"] = lr.rank_rigid;
    if (d.interior_count() > 0) dj["min_eigenvalue"] = lr.lambda.eigenvalues(0);
    v["decomposition"] = dj;
  }
  rep["verdicts"] = v;

  for (const auto& [key, value] : v.items()) {
    if (value.is_primitive()) table.add({key, value.is_number_float()  ? format_double(value.get<double>())
                    : value.is_string() ? value.get<std::string>()
                                        : value.dump()});
  }
  emit(c, rep, &table, out);
  return 0;
}

int cmd_stress(const Context& c, const std::string& path, bool inductive, std::ostream& out) {
  const FrameworkFile f = load_framework(path);
  json rep = base_report(c, "stress");
  rep["instance_hash"] = hex64(instance_hash(f));
  CsvTable table;
  if (inductive) {
    const Suspension s = to_suspension(f, c.tol.geom_tol);
    const InductiveStress ind = inductive_proper_stress(s, c.tol);
    const Framework fw = tensegrity_labeling(s, true);
    const Stress w = normalized_max_one(ind.stress);
    const auto ids = suspension_ids(f);
    table.header = {"i", "j", "kind", "omega"};
    json edges = json::array();
    for (int k = 0; k < fw.edge_count(); ++k) {
      const auto& e = fw.edges()[k];
      edges.push_back({{"i", ids[e.i]}, {"j", ids[e.j]}, {"kind", to_string(e.kind)}, {"omega", w.omega(k)}});
      table.add({std::to_string(ids[e.i]), std::to_string(ids[e.j]), to_string(e.kind), format_double(w.omega(k))});
    }
    rep["method"] = "inductive";
    rep["stress"] = edges;
    rep["proper"] = is_proper(fw, ind.stress);
    rep["equilibrium_residual"] = equilibrium_residual(fw, ind.stress);
    rep["fallback"] = ind.fallback;
    rep["trace"] = ind.trace;
  } else {
    const Framework fw = to_framework(f, c.tol.geom_tol);
    const auto space = equilibrium_stress_space(fw, c.tol);
    table.header = {"i", "j", "kind"};
    for (std::size_t b = 0; b < space.size(); ++b) table.header.push_back("omega_" + std::to_string(b));
    json basis = json::array();
    for (const auto& s : space) {
      const Stress w = normalized_max_one(s);
      basis.push_back({{"omega", std::vector<double>(w.omega.data(), w.omega.data() + w.omega.size())},
                       {"proper", is_proper(fw, s)},
                       {"equilibrium_residual", equilibrium_residual(fw, s)}});
    }
    for (int k = 0; k < fw.edge_count(); ++k) {
      const auto& e = fw.edges()[k];
      std::vector<std::string> row{std::to_string(e.i), std::to_string(e.j), to_string(e.kind)};
      for (const auto& s : space) row.push_back(format_double(normalized_max_one(s).omega(k)));
      table.add(std::move(row));
    }
    json edges = json::array();
    for (const auto& e : fw.edges()) edges.push_back({{"i", e.i}, {"j", e.j}, {"kind", to_string(e.kind)}});
    rep["method"] = "null-space";
    rep["edges"] = edges;
    rep["dimension"] = space.size();
    rep["basis"] = basis;
  }
  emit(c, rep, &table, out);
  return 0;
}

int cmd_lambda(const Context& c, const std::string& path, std::ostream& out) {
  const FrameworkFile f = load_framework(path);
  json rep = base_report(c, "lambda");
  rep["instance_hash"] = hex64(instance_hash(f));
  CsvTable table;
  if (f.tetrahedra) {
    const Decomposition d = to_decomposition(f, c.tol);
    const LambdaRigidity lr = rigidity_from_lambda(d, c.tol);
    const auto& lm = lr.lambda;
    const int r = d.interior_count();
    const auto l0 = d.interior_lengths();
    const auto theta = cone_angles(d, l0);
    json edges = json::array();
    json matrix = json::array();
    table.header = {"k", "i", "j", "length", "cone_angle", "eigenvalue"};
    for (int k = 0; k < r; ++k) table.header.push_back("lambda_" + std::to_string(k));
    for (int k = 0; k < r; ++k) {
      const Edge e = d.interior_edges()[k];
      edges.push_back({{"i", e.i}, {"j", e.j}, {"length", l0[k]}, {"cone_angle", theta[k]}});
      json jrow = json::array();
      std::vector<std::string> cells{std::to_string(k), std::to_string(e.i), std::to_string(e.j),
                                     format_double(l0[k]), format_double(theta[k]),
                                     format_double(lm.eigenvalues(k))};
      for (int m = 0; m < r; ++m) {
        jrow.push_back(lm.matrix(k, m));
        cells.push_back(format_double(lm.matrix(k, m)));
      }
      matrix.push_back(jrow);
      table.add(std::move(cells));
    }
    rep["kind"] = "decomposition";
    rep["interior_edges"] = edges;
    rep["matrix"] = matrix;
    rep["eigenvalues"] = std::vector<double>(lm.eigenvalues.data(), lm.eigenvalues.data() + lm.eigenvalues.size());
    rep["singular_values"] =
        std::vector<double>(lm.singular_values.data(), lm.singular_values.data() + lm.singular_values.size());
    rep["asymmetry"] = lm.asymmetry;
    rep["rigid"] = lr.rigid;
    rep["rigid_from_rank"] = lr.rank_rigid;
  } else {
    const Suspension s = to_suspension(f, c.tol.geom_tol);
    const LambdaBreakdown br = lambda_scalar(s);
    const CylindricalEquator cyl = cylindrical_equator(s);
    table.header = {"i", "z", "r", "theta", "a", "b", "simplex_term", "expression_term"};
    for (int i = 0; i < s.equator_size(); ++i) {
      table.add({std::to_string(i), format_double(cyl.z[i]), format_double(cyl.r[i]), format_double(cyl.theta[i]),
                 format_double(br.a[i]), format_double(br.b[i]), format_double(br.simplex_terms[i]),
                 format_double(br.expression_terms[i])});
    }
    rep["kind"] = "suspension";
    rep["lambda"] = br.lambda;
    rep["simplex_total"] = br.simplex_total;
    rep["expression_total"] = br.expression_total;
    rep["ns_length"] = br.ns_length;
    rep["simplex_terms"] = br.simplex_terms;
    rep["expression_terms"] = br.expression_terms;
    rep["a"] = br.a;
    rep["b"] = br.b;
    rep["frame"] = {{"z", cyl.z}, {"r", cyl.r}, {"theta", cyl.theta}, {"mirrored", cyl.mirrored}};
    rep["ns_decomposable"] = is_ns_decomposable(s, c.tol).decomposable;
  }
  emit(c, rep, &table, out);
  return 0;
}

int cmd_dent(const Context& c, const std::string& path, const std::vector<std::string>& edges,
             const std::string& out_path, std::ostream& out) {
  if (edges.empty() || edges.size() > 2) throw UsageError("dent takes one or two --edge options");
  const FrameworkFile f = load_framework(path);
  PolyhedralSurface s = to_surface(f, c.tol.geom_tol);
  json dented = json::array();
  json created = json::array();
  for (const auto& text : edges) {
    const Edge e = parse_edge(text);
    DentResult r = dent(s, e, c.tol.geom_tol);
    dented.push_back(edge_json(e));
    created.push_back(edge_json(r.new_edge));
    s = std::move(r.surface);
  }
  FrameworkFile result = file_from_surface(s);
  result.metadata = {{"dented", dented}, {"new_edges", created}, {"source_hash", hex64(instance_hash(f))}};
  if (out_path.empty()) {
    out << to_json(result).dump(2) << "\n";
    return 0;
  }
  save_framework(out_path, result);
  json rep = base_report(c, "dent");
  rep["output"] = out_path;
  rep["instance_hash"] = hex64(instance_hash(result));
  rep["dented"] = dented;
  rep["new_edges"] = created;
  rep["convexity"] = to_string(classify_convexity(s, c.tol).classification);
  emit(c, rep, nullptr, out);
  return 0;
}

int cmd_suspend(const Context& c, int n, const std::string& profile_name, const std::string& out_path,
                std::ostream& out) {
  SuspensionProfile profile;
  try {
    profile = suspension_profile_from_string(profile_name);
  } catch (const GeometryError& e) {
    throw UsageError(e.what());
  }
  if (n < 3) throw UsageError("--n must be at least 3");
  const auto gen = generate_suspension(n, profile, c.seed, c.tol);
  if (!gen) throw GeometryError("no suspension matching the profile found in 1000 attempts");
  FrameworkFile file = file_from_suspension(gen->suspension);
  file.metadata = {{"generator", "suspend"}, {"profile", profile_name}, {"seed", c.seed},
                   {"attempt", gen->attempt}, {"n", n}};
  if (out_path.empty()) {
    out << to_json(file).dump(2) << "\n";
    return 0;
  }
  save_framework(out_path, file);
  json rep = base_report(c, "suspend");
  rep["output"] = out_path;
  rep["instance_hash"] = hex64(instance_hash(file));
  rep["attempt"] = gen->attempt;
  emit(c, rep, nullptr, out);
  return 0;
}

int cmd_signs(const Context& c, const std::string& path, int flex_index, std::ostream& out) {
  const FrameworkFile f = load_framework(path);
  const PolyhedralSurface s = to_surface(f, c.tol.geom_tol);
  const Eigen::MatrixXd flex = nontrivial_flexes(Framework::all_bars(s), c.tol);
  if (flex_index < 0 || flex_index >= flex.cols()) {
    throw UsageError("flex index " + std::to_string(flex_index) + " out of range: the surface has " +
                     std::to_string(flex.cols()) + " nontrivial flexes");
  }
  const SignVector sv = sign_vector_from_flex(s, Motion{flex.col(flex_index)});
  json rep = base_report(c, "signs");
  rep["instance_hash"] = hex64(instance_hash(f));
  rep["flex_count"] = flex.cols();
  CsvTable table{{"i", "j", "rate", "sign"}, {}};
  json edges = json::array();
  for (int e = 0; e < s.edge_count(); ++e) {
    const Edge ed = s.edges()[e];
    const std::string sign(1, to_char(sv.signs[e]));
    edges.push_back({{"i", ed.i}, {"j", ed.j}, {"rate", sv.rates[e]}, {"sign", sign}});
    table.add({std::to_string(ed.i), std::to_string(ed.j), format_double(sv.rates[e]), sign});
  }
  rep["edges"] = edges;
  json vertices = json::array();
  int violations = 0;
  for (const auto& r : vertex_sign_lemma_check(s, sv)) {
    vertices.push_back({{"vertex", r.vertex}, {"convex", r.convex}, {"changes", r.changes}, {"nonzero", r.nonzero},
                        {"satisfied", r.satisfied}, {"clause", r.clause}});
    if (!r.satisfied) ++violations;
  }
  rep["vertices"] = vertices;
  rep["vertex_violations"] = violations;
  try {
    const SignChangeStats st = count_sign_changes(sign_subgraph(s, sv));
    json sizes = json::object();
    for (const auto& [k, cnt] : st.face_sizes) sizes[std::to_string(k)] = cnt;
    rep["subgraph"] = {{"v", st.v},
                       {"e", st.e},
                       {"f", st.f},
                       {"s", st.s},
                       {"face_sizes", sizes},
                       {"lower_bound", st.lower_bound},
                       {"face_bound", st.face_bound},
                       {"euler_upper", st.euler_upper},
                       {"lower_holds", st.lower_holds},
                       {"upper_holds", st.upper_holds},
                       {"contradiction", st.contradiction}};
  } catch (const GeometryError& e) {
    rep["subgraph"] = {{"error", e.what()}};
  }
  emit(c, rep, &table, out);
  return 0;
}

json probe_instance_metadata(const ProbeInstance& inst, std::uint64_t seed) {
  return {{"generator", to_string(inst.generator)},
          {"trial", inst.trial},
          {"seed", seed},
          {"weakly_convex", inst.weakly_convex},
          {"apex", inst.apex},
          {"interior_edges", inst.interior_edges},
          {"eigenvalues", inst.eigenvalues},
          {"min_eigenvalue", inst.min_eigenvalue},
          {"positive_definite", inst.positive_definite},
          {"diagonal_positive", inst.diagonal_positive},
          {"rigid", inst.rigid}};
}

int cmd_probe(const Context& c, int trials, const std::string& out_dir, std::ostream& out) {
  if (trials < 0) throw UsageError("--trials must be non-negative");
  ProbeConfig cfg;
  cfg.trials = trials;
  cfg.seed = c.seed;
  const ProbeReport rep = pd_probe(cfg, c.tol);
  json r = base_report(c, "probe-pd");
  r["trials"] = trials;
  r["generated"] = rep.generated;
  r["skipped"] = rep.skipped;
  r["weakly_convex"] = rep.weakly_convex;
  r["weakly_convex_non_pd"] = rep.weakly_convex_non_pd;
  r["controls"] = rep.controls;
  r["controls_non_pd"] = rep.controls_non_pd;
  r["with_interior_edges"] = rep.with_interior;
  r["diagonal_positive"] = rep.diagonal_positive;
  r["diagonal_positive_rate"] =
      rep.with_interior ? static_cast<double>(rep.diagonal_positive) / rep.with_interior : 0.0;
  r["cross_check_mismatches"] = rep.cross_check_mismatches;
  r["min_eigenvalue_quantiles"] = {{"q", {0.0, 0.1, 0.5, 0.9, 1.0}}, {"value", rep.min_eigenvalue_quantiles}};
  json non_pd = json::array();
  for (const auto& inst : rep.instances) {
    if (inst.weakly_convex && !inst.positive_definite) {
      json entry = to_json(FrameworkFile{inst.vertices, {}, std::nullopt, std::nullopt, std::nullopt,
                                         inst.tetrahedra, probe_instance_metadata(inst, c.seed)});
      non_pd.push_back(entry);
    }
  }
  r["weakly_convex_non_pd_instances"] = non_pd;

  CsvTable table{{"trial", "generator", "weakly_convex", "interior_edges", "min_eigenvalue", "positive_definite",
                  "diagonal_positive", "rigid"},
                 {}};
  for (const auto& inst : rep.instances) {
    table.add({std::to_string(inst.trial), to_string(inst.generator), inst.weakly_convex ? "1" : "0",
               std::to_string(inst.interior_edges), format_double(inst.min_eigenvalue),
               inst.positive_definite ? "1" : "0", inst.diagonal_positive ? "1" : "0", inst.rigid ? "1" : "0"});
  }

  if (!out_dir.empty()) {
    namespace fs = std::filesystem;
    fs::create_directories(fs::path(out_dir) / "instances");
    json index = json::array();
    for (const auto& inst : rep.instances) {
      char name[32];
      std::snprintf(name, sizeof name, "trial_%05d.json", inst.trial);
      FrameworkFile file;
      file.vertices = inst.vertices;
      file.tetrahedra = inst.tetrahedra;
      file.metadata = probe_instance_metadata(inst, c.seed);
      save_framework((fs::path(out_dir) / "instances" / name).string(), file);
      index.push_back(std::string("instances/") + name);
    }
    r["instances"] = index;
    std::ofstream csv(fs::path(out_dir) / "instances.csv");
    csv << table.str();
    std::ofstream report(fs::path(out_dir) / "report.json");
    report << r.dump(2) << "\n";
    if (!csv || !report) throw std::runtime_error("cannot write probe output to '" + out_dir + "'");
  }
  emit(c, r, &table, out);
  return 0;
}

int cmd_harness(const Context& c, int trials, std::ostream& out) {
  if (trials < 0) throw UsageError("--trials must be non-negative");
  const HarnessReport rep = theorem1_harness(c.seed, trials, {}, c.tol);
  json r = base_report(c, "dent-harness");
  r["trials"] = rep.trials;
  r["skipped"] = rep.skipped;
  r["checked"] = rep.checked;
  r["failures"] = rep.failures;
  r["controls"] = rep.controls;
  r["controls_flexible"] = rep.controls_flexible;
  json failed = json::array();
  CsvTable table{{"trial", "kind", "vertices", "rank", "expected_rank", "rigid"}, {}};
  for (const auto& inst : rep.instances) {
    table.add({std::to_string(inst.trial), to_string(inst.kind), std::to_string(inst.vertex_count),
               std::to_string(inst.rank), std::to_string(inst.expected_rank), inst.rigid ? "1" : "0"});
    if (!inst.rigid && inst.kind != DentKind::Control) {
      FrameworkFile file;
      file.vertices = inst.vertices;
      file.faces = inst.faces;
      file.metadata = {{"trial", inst.trial}, {"kind", to_string(inst.kind)}};
      failed.push_back(to_json(file));
    }
  }
  r["failed_instances"] = failed;
  emit(c, r, &table, out);
  return rep.failures == 0 ? 0 : 2;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Infinitesimal rigidity, tensegrity stresses and angle-variation invariants of polyhedra",
               "polyrigid"};
  app.require_subcommand(1);
  Context ctx;
  app.add_option("--rank-tol", ctx.tol.rank_tol, "Relative singular-value cutoff")->capture_default_str();
  app.add_option("--geom-tol", ctx.tol.geom_tol, "Coincidence and coplanarity cutoff on unit-diameter input")
      ->capture_default_str();
  auto* json_flag = app.add_flag("--json", "JSON output (default)");
  auto* csv_flag = app.add_flag("--csv", ctx.csv, "CSV output where the command has a table");
  csv_flag->excludes(json_flag);
  app.add_option("--seed", ctx.seed, "Random seed")->capture_default_str();
  app.add_flag("--timings", ctx.timings, "Add wall-clock timings to the report");

  std::string path, out_path, profile = "convex";
  bool inductive = false;
  std::vector<std::string> edges;
  int n = 6, flex_index = 0, trials = 500;

  auto* analyze = app.add_subcommand("analyze", "Convexity, rigidity, flex and stress dimensions");
  analyze->add_option("file", path, "Framework file (JSON or OFF)")->required();
  auto* stress = app.add_subcommand("stress", "Equilibrium stresses");
  stress->add_option("file", path)->required();
  stress->add_flag("--inductive", inductive, "Build the proper stress of a suspension inductively");
  auto* lambda = app.add_subcommand("lambda", "Lambda scalar of a suspension or matrix of a decomposition");
  lambda->add_option("file", path)->required();
  auto* dent_cmd = app.add_subcommand("dent", "Dent a surface at one or two edges");
  dent_cmd->add_option("file", path)->required();
  dent_cmd->add_option("--edge", edges, "Edge i,j (repeat for a second dent)")->required();
  dent_cmd->add_option("-o,--out", out_path, "Write the dented surface here");
  auto* suspend = app.add_subcommand("suspend", "Generate a random suspension");
  suspend->add_option("--n", n, "Equator size")->capture_default_str();
  suspend->add_option("--profile", profile, "convex|weak|convex-projection|star|random")->capture_default_str();
  suspend->add_option("-o,--out", out_path, "Write the suspension here");
  auto* signs = app.add_subcommand("signs", "Sign vector of a nontrivial flex");
  signs->add_option("file", path)->required();
  signs->add_option("--flex-index", flex_index, "Which nontrivial flex")->capture_default_str();
  auto* probe = app.add_subcommand("probe-pd", "Positive-definiteness probe of the Lambda matrix");
  probe->add_option("--trials", trials)->capture_default_str();
  probe->add_option("--out", out_path, "Directory for the report and instance dumps");
  auto* harness = app.add_subcommand("dent-harness", "Rigidity of randomly dented convex surfaces");
  harness->add_option("--trials", trials)->capture_default_str();
  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 1;
  }

  try {
    ctx.tol.validate();
    if (*analyze) return cmd_analyze(ctx, path, out);
    if (*stress) return cmd_stress(ctx, path, inductive, out);
    if (*lambda) return cmd_lambda(ctx, path, out);
    if (*dent_cmd) return cmd_dent(ctx, path, edges, out_path, out);
    if (*suspend) return cmd_suspend(ctx, n, profile, out_path, out);
    if (*signs) return cmd_signs(ctx, path, flex_index, out);
    if (*probe) return cmd_probe(ctx, trials, out_path, out);
    if (*harness) return cmd_harness(ctx, trials, out);
  } catch (const InvariantViolation& e) {
    err << "invariant violation: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace polyrigid

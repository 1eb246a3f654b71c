#include "polyrigid/cli.hpp"
#include "polyrigid/io.hpp"
#include "polyrigid/suspension.hpp"
#include "shapes.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace polyrigid;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::string kFixtures = POLYRIGID_FIXTURES;

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli(std::vector<std::string> args) {
  args.insert(args.begin(), "polyrigid");
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("polyrigid_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string expect_schema_error(const json& doc) {
  try {
    framework_from_json(doc);
  } catch (const SchemaError& e) {
    return e.pointer();
  }
  ADD_FAILURE() << "no schema error for " << doc.dump();
  return {};
}

json octahedron_doc() {
  std::ifstream in(kFixtures + "/octahedron.json");
  return json::parse(in);
}

}  // namespace

TEST(Load, OctahedronFixture) {
  const FrameworkFile f = load_framework(kFixtures + "/octahedron.json");
  EXPECT_EQ(f.vertices.size(), 6u);
  EXPECT_EQ(f.edges.size(), 12u);
  ASSERT_TRUE(f.poles.has_value());
  EXPECT_EQ((*f.poles)[0], 0);
  EXPECT_EQ(f.equator->size(), 4u);
  EXPECT_EQ(to_surface(f).face_count(), 8);
  EXPECT_NEAR(lambda_scalar(to_suspension(f)).lambda, 4.0, 1e-9);
}

TEST(Load, SchemaPointers) {
  json doc = octahedron_doc();
  doc["edges"][5]["j"] = 17;
  EXPECT_EQ(expect_schema_error(doc), "/edges/5/j");

  doc = octahedron_doc();
  doc["version"] = 2;
  EXPECT_EQ(expect_schema_error(doc), "/version");

  doc = octahedron_doc();
  doc["colour"] = "red";
  EXPECT_EQ(expect_schema_error(doc), "/colour");

  doc = octahedron_doc();
  doc["vertices"][2] = json::array({1, 2});
  EXPECT_EQ(expect_schema_error(doc), "/vertices/2");

  doc = octahedron_doc();
  doc["edges"][0]["kind"] = "rope";
  EXPECT_EQ(expect_schema_error(doc), "/edges/0/kind");

  doc = octahedron_doc();
  doc.erase("equator");
  EXPECT_EQ(expect_schema_error(doc), "/equator");

  doc = octahedron_doc();
  doc["faces"][3][1] = -1;
  EXPECT_EQ(expect_schema_error(doc), "/faces/3/1");
}

TEST(Load, DefaultsToBar) {
  json doc = octahedron_doc();
  doc["edges"][0].erase("kind");
  EXPECT_EQ(framework_from_json(doc).edges[0].kind, EdgeKind::Bar);
}

TEST(SaveLoad, RoundTripIsBitwise) {
  const fs::path dir = scratch_dir("roundtrip");
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    FrameworkFile f;
    std::normal_distribution<double> g(0, 1e3);
    for (int k = 0; k < 9; ++k) f.vertices.emplace_back(g(rng), g(rng) * 1e-7, g(rng) * 1e9);
    for (int k = 0; k < 8; ++k) f.edges.push_back({k, k + 1, static_cast<EdgeKind>(k % 3)});
    f.metadata = {{"trial", trial}};
    const std::string path = (dir / "f.json").string();
    save_framework(path, f);
    const FrameworkFile back = load_framework(path);
    ASSERT_EQ(back.vertices.size(), f.vertices.size());
    for (std::size_t k = 0; k < f.vertices.size(); ++k) {
      for (int c = 0; c < 3; ++c) EXPECT_EQ(back.vertices[k](c), f.vertices[k](c));
    }
    for (std::size_t k = 0; k < f.edges.size(); ++k) EXPECT_EQ(back.edges[k].kind, f.edges[k].kind);
    EXPECT_EQ(instance_hash(back), instance_hash(f));
  }
}

TEST(SaveLoad, SuspensionAndDecompositionViews) {
  const Suspension s = shapes::octahedron_suspension();
  const FrameworkFile f = file_from_suspension(s);
  const Suspension back = to_suspension(framework_from_json(to_json(f)));
  EXPECT_EQ(back.equator(), s.equator());
  const Decomposition d = to_decomposition(load_framework(kFixtures + "/octahedron_decomposition.json"));
  EXPECT_EQ(d.interior_count(), 1);
  const Decomposition again = to_decomposition(framework_from_json(to_json(file_from_decomposition(d))));
  EXPECT_EQ(again.interior_edges(), d.interior_edges());
}

TEST(Off, CubeFanTriangulated) {
  const FrameworkFile f = load_framework(kFixtures + "/cube.off");
  EXPECT_EQ(f.vertices.size(), 8u);
  ASSERT_TRUE(f.faces.has_value());
  EXPECT_EQ(f.faces->size(), 12u);
  EXPECT_EQ(f.edges.size(), 18u);
  EXPECT_EQ(to_surface(f).edge_count(), 18);
  std::istringstream bad("OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 5\n");
  EXPECT_THROW(read_off(bad), SchemaError);
}

TEST(Hash, IgnoresMetadata) {
  FrameworkFile a = load_framework(kFixtures + "/octahedron.json");
  FrameworkFile b = a;
  b.metadata = {{"other", 1}};
  EXPECT_EQ(instance_hash(a), instance_hash(b));
  b.vertices[0].x() += 1e-15;
  EXPECT_NE(instance_hash(a), instance_hash(b));
  EXPECT_EQ(hex64(0xabcULL), "0000000000000abc");
}

TEST(Csv, NumbersRoundTrip) {
  Rng rng(8);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int k = 0; k < 1000; ++k) {
    const double x = u(rng) * std::pow(10.0, k % 40 - 20);
    EXPECT_EQ(std::strtod(format_double(x).c_str(), nullptr), x);
  }
}

TEST(Cli, AnalyzeOctahedron) {
  const CliResult r = cli({"analyze", kFixtures + "/octahedron.json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json rep = json::parse(r.out);
  EXPECT_EQ(rep["verdicts"]["rank"], 12);
  EXPECT_EQ(rep["verdicts"]["infinitesimally_rigid"], true);
  EXPECT_EQ(rep["verdicts"]["flex_dimension"], 6);
  EXPECT_EQ(rep["verdicts"]["stress_dimension"], 0);
  EXPECT_EQ(rep["verdicts"]["convexity"], "StronglyStrictlyConvex");
  EXPECT_EQ(rep["seed"], 1);
  EXPECT_TRUE(rep.contains("tolerances"));
  EXPECT_TRUE(rep.contains("instance_hash"));
  EXPECT_FALSE(rep.contains("timings"));
  EXPECT_TRUE(json::parse(cli({"--timings", "analyze", kFixtures + "/octahedron.json"}).out).contains("timings"));
}

TEST(Cli, AnalyzeVerdictsInvariantUnderRigidMotion) {
  const fs::path dir = scratch_dir("rigid_motion");
  FrameworkFile f = load_framework(kFixtures + "/octahedron.json");
  Rng rng(3);
  f.vertices = shapes::rigid_image(f.vertices, rng);
  save_framework((dir / "moved.json").string(), f);
  const json a = json::parse(cli({"analyze", kFixtures + "/octahedron.json"}).out);
  const json b = json::parse(cli({"analyze", (dir / "moved.json").string()}).out);
  json va = a["verdicts"], vb = b["verdicts"];
  // Lambda is a float; compare it separately.
  const double la = va["suspension"]["lambda"], lb = vb["suspension"]["lambda"];
  EXPECT_NEAR(la, lb, 1e-12);
  va["suspension"].erase("lambda");
  vb["suspension"].erase("lambda");
  EXPECT_EQ(va, vb);
  EXPECT_NE(a["instance_hash"], b["instance_hash"]);
}

TEST(Cli, CsvOutputs) {
  const CliResult r = cli({"--csv", "lambda", kFixtures + "/octahedron.json"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "i,z,r,theta,a,b,simplex_term,expression_term");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    std::stringstream cells(line);
    std::string cell;
    std::vector<double> v;
    while (std::getline(cells, cell, ',')) v.push_back(std::strtod(cell.c_str(), nullptr));
    ASSERT_EQ(v.size(), 8u);
    EXPECT_NEAR(v[6], 2.0, 1e-12);
  }
  EXPECT_EQ(rows, 4);
  EXPECT_EQ(cli({"--csv", "--json", "analyze", kFixtures + "/octahedron.json"}).code, 1);
}

TEST(Cli, StressCommands) {
  const CliResult ind = cli({"stress", "--inductive", kFixtures + "/octahedron.json"});
  ASSERT_EQ(ind.code, 0) << ind.err;
  const json rep = json::parse(ind.out);
  EXPECT_EQ(rep["proper"], true);
  EXPECT_EQ(rep["stress"].size(), 13u);
  const CliResult plain = cli({"stress", kFixtures + "/octahedron.json"});
  ASSERT_EQ(plain.code, 0);
  EXPECT_EQ(json::parse(plain.out)["dimension"], 0);
}

TEST(Cli, LambdaDecomposition) {
  const CliResult r = cli({"lambda", kFixtures + "/octahedron_decomposition.json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json rep = json::parse(r.out);
  EXPECT_NEAR(rep["eigenvalues"][0].get<double>(), 4.0, 1e-9);
  EXPECT_EQ(rep["rigid"], true);
}

TEST(Cli, DentAndSuspendWriteLoadableFiles) {
  const fs::path dir = scratch_dir("dent");
  const std::string dented = (dir / "dented.json").string();
  const CliResult d = cli({"dent", kFixtures + "/octahedron.json", "--edge", "2,3", "--out", dented});
  ASSERT_EQ(d.code, 0) << d.err;
  const FrameworkFile f = load_framework(dented);
  EXPECT_TRUE(to_surface(f).has_edge(0, 1));
  EXPECT_EQ(cli({"dent", kFixtures + "/octahedron.json", "--edge", "0,1"}).code, 1);
  EXPECT_EQ(cli({"dent", kFixtures + "/octahedron.json", "--edge", "zero"}).code, 1);

  const std::string s1 = (dir / "s1.json").string(), s2 = (dir / "s2.json").string();
  ASSERT_EQ(cli({"suspend", "--n", "7", "--profile", "star", "--seed", "9", "--out", s1}).code, 0);
  ASSERT_EQ(cli({"--seed", "9", "suspend", "--n", "7", "--profile", "star", "--out", s2}).code, 0);
  EXPECT_EQ(instance_hash(load_framework(s1)), instance_hash(load_framework(s2)));
  EXPECT_TRUE(is_ns_decomposable(to_suspension(load_framework(s1))).decomposable);
  EXPECT_EQ(cli({"suspend", "--profile", "cubic"}).code, 1);
}

TEST(Cli, SignsNeedsAFlex) {
  const CliResult r = cli({"signs", kFixtures + "/octahedron.json", "--flex-index", "0"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("0 nontrivial flexes"), std::string::npos);
}

TEST(Cli, SignsOnFlexibleSuspension) {
  std::vector<Point3> eq;
  for (int k = 0; k < 6; ++k) {
    const double r = (k % 2) ? 0.2 : 1.0;
    eq.emplace_back(r * std::cos(k * std::numbers::pi / 3), r * std::sin(k * std::numbers::pi / 3), 0.5);
  }
  const Suspension root = lambda_root_on_height(build_suspension({0, 0, 1}, {0, 0, 0}, eq), 1, 0.05, 0.5);
  const fs::path dir = scratch_dir("signs");
  save_framework((dir / "root.json").string(), file_from_suspension(root));
  const CliResult r = cli({"signs", (dir / "root.json").string(), "--flex-index", "0"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json rep = json::parse(r.out);
  EXPECT_EQ(rep["flex_count"], 1);
  EXPECT_EQ(rep["edges"].size(), 18u);
}

TEST(Cli, ProbeIsDeterministicAndReplayable) {
  const fs::path a = scratch_dir("probe_a"), b = scratch_dir("probe_b");
  ASSERT_EQ(cli({"probe-pd", "--trials", "20", "--seed", "4", "--out", a.string()}).code, 0);
  ASSERT_EQ(cli({"probe-pd", "--trials", "20", "--seed", "4", "--out", b.string()}).code, 0);
  std::ifstream ra(a / "report.json"), rb(b / "report.json");
  const json ja = json::parse(ra), jb = json::parse(rb);
  EXPECT_EQ(ja, jb);
  ASSERT_FALSE(ja["instances"].empty());
  const std::string first = ja["instances"][0];
  const FrameworkFile inst = load_framework((a / first).string());
  const Decomposition d = to_decomposition(inst);
  EXPECT_EQ(d.interior_count(), inst.metadata["interior_edges"].get<int>());
  EXPECT_TRUE(fs::exists(a / "instances.csv"));
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(cli({}).code, 1);
  EXPECT_EQ(cli({"frobnicate"}).code, 1);
  EXPECT_EQ(cli({"analyze"}).code, 1);
  EXPECT_EQ(cli({"analyze", "/nonexistent/file.json"}).code, 1);
  EXPECT_EQ(cli({"--rank-tol", "-1", "analyze", kFixtures + "/octahedron.json"}).code, 1);
  EXPECT_EQ(cli({"--help"}).code, 0);
}

TEST(Cli, SchemaErrorReportsPointer) {
  const fs::path dir = scratch_dir("schema");
  json doc = octahedron_doc();
  doc["edges"][3]["j"] = 99;
  std::ofstream((dir / "bad.json")) << doc.dump();
  const CliResult r = cli({"analyze", (dir / "bad.json").string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("/edges/3/j"), std::string::npos);
}

TEST(Cli, HarnessExitCode) {
  const CliResult r = cli({"dent-harness", "--trials", "3"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json::parse(r.out)["failures"], 0);
}

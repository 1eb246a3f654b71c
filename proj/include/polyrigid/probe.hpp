#pragma once

#include "polyrigid/common.hpp"
#include "polyrigid/lambda.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace polyrigid {

enum class ProbeGenerator { DentedHull, PairDentedHull, Suspension, ConvexHull, Control };

std::string to_string(ProbeGenerator g);
ProbeGenerator probe_generator_from_string(const std::string& s);

struct ProbeConfig {
  int trials = 500;
  std::uint64_t seed = 1;
  int min_vertices = 6;
  int max_vertices = 14;
  int min_equator = 3;
  int max_equator = 10;
};

struct ProbeInstance {
  int trial = 0;
  ProbeGenerator generator = ProbeGenerator::DentedHull;
  bool weakly_convex = false;  // controls are not
  int apex = -1;               // -1 for axial suspension decompositions
  std::vector<Point3> vertices;
  std::vector<Tetrahedron> tetrahedra;
  int interior_edges = 0;
  std::vector<double> eigenvalues;  // ascending
  std::vector<double> diagonal;
  double min_eigenvalue = 0.0;
  bool diagonal_positive = false;
  bool positive_definite = false;
  bool rigid = false;
  bool cross_check_ok = true;
  std::string note;
};

struct ProbeReport {
  ProbeConfig config;
  int generated = 0;
  int skipped = 0;
  int weakly_convex = 0;
  int weakly_convex_non_pd = 0;
  int controls = 0;
  int controls_non_pd = 0;
  int diagonal_positive = 0;  // among weakly convex instances with r > 0
  int with_interior = 0;      // weakly convex instances with r > 0
  int cross_check_mismatches = 0;
  std::vector<double> min_eigenvalue_quantiles;  // 0, 0.1, 0.5, 0.9, 1 over weakly convex, r > 0
  std::vector<ProbeInstance> instances;
};

/// Trial k uses the generator k mod 5 and its own sub-seed, so a single trial
/// can be regenerated without the others.
std::optional<ProbeInstance> probe_trial(const ProbeConfig& cfg, int trial, const Tolerance& tol = {});

/// Recomputes the Lambda data of a dumped instance.
ProbeInstance evaluate_probe_instance(int trial, ProbeGenerator g, bool weakly_convex, int apex,
                                      std::vector<Point3> vertices, std::vector<Tetrahedron> tetrahedra,
                                      const Tolerance& tol = {});

ProbeReport pd_probe(const ProbeConfig& cfg, const Tolerance& tol = {});

}  // namespace polyrigid

#include "polyrigid/probe.hpp"

#include "polyrigid/cauchy.hpp"
#include "polyrigid/generators.hpp"
#include "polyrigid/suspension.hpp"

#include <algorithm>
#include <cmath>

namespace polyrigid {

std::string to_string(ProbeGenerator g) {
  switch (g) {
    case ProbeGenerator::DentedHull: return "dented-hull";
    case ProbeGenerator::PairDentedHull: return "pair-dented-hull";
    case ProbeGenerator::Suspension: return "suspension";
    case ProbeGenerator::ConvexHull: return "convex-hull";
    case ProbeGenerator::Control: return "control";
  }
  return "?";
}

ProbeGenerator probe_generator_from_string(const std::string& s) {
  for (auto g : {ProbeGenerator::DentedHull, ProbeGenerator::PairDentedHull, ProbeGenerator::Suspension,
                 ProbeGenerator::ConvexHull, ProbeGenerator::Control}) {
    if (to_string(g) == s) return g;
  }
  throw GeometryError("unknown probe generator '" + s + "'");
}

ProbeInstance evaluate_probe_instance(int trial, ProbeGenerator g, bool weakly_convex, int apex,
                                      std::vector<Point3> vertices, std::vector<Tetrahedron> tetrahedra,
                                      const Tolerance& tol) {
  ProbeInstance inst;
  inst.trial = trial;
  inst.generator = g;
  inst.weakly_convex = weakly_convex;
  inst.apex = apex;
  const Decomposition d = Decomposition::from_tetrahedra(std::move(vertices), std::move(tetrahedra), tol);
  inst.vertices = d.vertices();
  inst.tetrahedra = d.tetrahedra();
  inst.interior_edges = d.interior_count();
  LambdaMatrix lm;
  try {
    const LambdaRigidity lr = rigidity_from_lambda(d, tol);
    lm = lr.lambda;
    inst.rigid = lr.rigid;
  } catch (const InvariantViolation& e) {
    inst.cross_check_ok = false;
    inst.note = e.what();
    lm = lambda_matrix(d, tol);
    inst.rigid = lm.rank == d.interior_count();
  }
  for (Eigen::Index k = 0; k < lm.eigenvalues.size(); ++k) inst.eigenvalues.push_back(lm.eigenvalues(k));
  for (Eigen::Index k = 0; k < lm.matrix.rows(); ++k) inst.diagonal.push_back(lm.matrix(k, k));
  inst.min_eigenvalue = inst.eigenvalues.empty() ? 0.0 : inst.eigenvalues.front();
  inst.diagonal_positive = std::all_of(inst.diagonal.begin(), inst.diagonal.end(), [](double x) { return x > 0.0; });
  inst.positive_definite = inst.eigenvalues.empty() || inst.min_eigenvalue > 0.0;
  return inst;
}

namespace {

// First apex from which the surface is star-shaped.
std::optional<std::pair<int, Decomposition>> star_from(const PolyhedralSurface& s, std::vector<int> preferred,
                                                       const Tolerance& tol) {
  for (int v = 0; v < s.vertex_count(); ++v) {
    if (std::find(preferred.begin(), preferred.end(), v) == preferred.end()) preferred.push_back(v);
  }
  for (int v : preferred) {
    try {
      return std::make_pair(v, decompose_star(s, v, tol));
    } catch (const GeometryError&) {
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<ProbeInstance> probe_trial(const ProbeConfig& cfg, int trial, const Tolerance& tol) {
  Rng rng(split_seed(cfg.seed, static_cast<std::uint64_t>(trial)));
  const auto g = static_cast<ProbeGenerator>(trial % 5);
  try {
    switch (g) {
      case ProbeGenerator::DentedHull:
      case ProbeGenerator::PairDentedHull:
      case ProbeGenerator::ConvexHull: {
        const int n = std::uniform_int_distribution<int>(cfg.min_vertices, cfg.max_vertices)(rng);
        const auto hull = random_convex_surface(rng, n);
        if (!hull) return std::nullopt;
        std::optional<PolyhedralSurface> surface;
        std::vector<int> preferred;
        if (g == ProbeGenerator::ConvexHull) {
          surface = *hull;
          preferred.push_back(std::uniform_int_distribution<int>(0, n - 1)(rng));
        } else if (g == ProbeGenerator::DentedHull) {
          std::vector<Edge> candidates;
          for (const auto& e : hull->edges()) {
            if (dentable(*hull, e, tol.geom_tol)) candidates.push_back(e);
          }
          if (candidates.empty()) return std::nullopt;
          const Edge e = candidates[std::uniform_int_distribution<std::size_t>(0, candidates.size() - 1)(rng)];
          auto dented = dent(*hull, e, tol.geom_tol);
          preferred = {dented.new_edge.i, dented.new_edge.j};
          surface = std::move(dented.surface);
        } else {
          auto pair = random_adjacent_pair_dent(*hull, rng, tol.geom_tol);
          if (!pair) return std::nullopt;
          const Edge a = pair->dented[0], b = pair->dented[1];
          preferred = {a.i == b.i || a.i == b.j ? a.i : a.j};
          for (const auto& e : pair->new_edges) {
            preferred.push_back(e.i);
            preferred.push_back(e.j);
          }
          surface = std::move(pair->surface);
        }
        const bool weak = classify_convexity(*surface, tol).classification != ConvexityClass::NotWeaklyConvex;
        auto star = star_from(*surface, preferred, tol);
        if (!star) return std::nullopt;
        return evaluate_probe_instance(trial, g, weak, star->first, star->second.vertices(),
                                       star->second.tetrahedra(), tol);
      }
      case ProbeGenerator::Suspension:
      case ProbeGenerator::Control: {
        const int n = std::uniform_int_distribution<int>(cfg.min_equator, cfg.max_equator)(rng);
        const auto profile = g == ProbeGenerator::Suspension ? SuspensionProfile::Weak : SuspensionProfile::Star;
        // Star equators alternate outer and inner vertices, so controls use an even count.
        // A reflex lateral edge needs at least four equator vertices.
        const int m = g == ProbeGenerator::Control ? 2 * std::max(2, n / 2) : n;
        const bool want_weak = g == ProbeGenerator::Suspension;
        for (int draw = 0; draw < 100; ++draw) {
          const auto data = random_suspension_data(rng, want_weak ? std::max(4, m) : m, profile);
          std::optional<Suspension> s;
          try {
            s.emplace(data.north, data.south, data.equator, tol.geom_tol);
          } catch (const GeometryError&) {
            continue;
          }
          if (!is_ns_decomposable(*s, tol).decomposable) continue;
          if (is_weakly_strictly_convex(*s, tol) != want_weak) continue;
          const Decomposition d = axial_decomposition(*s, tol);
          return evaluate_probe_instance(trial, g, want_weak, -1, d.vertices(), d.tetrahedra(), tol);
        }
        return std::nullopt;
      }
    }
  } catch (const GeometryError&) {
    return std::nullopt;
  }
  return std::nullopt;
}

ProbeReport pd_probe(const ProbeConfig& cfg, const Tolerance& tol) {
  ProbeReport rep;
  rep.config = cfg;
  std::vector<double> mins;
  for (int t = 0; t < cfg.trials; ++t) {
    auto inst = probe_trial(cfg, t, tol);
    if (!inst) {
      ++rep.skipped;
      continue;
    }
    ++rep.generated;
    if (!inst->cross_check_ok) ++rep.cross_check_mismatches;
    if (inst->weakly_convex) {
      ++rep.weakly_convex;
      if (!inst->positive_definite) ++rep.weakly_convex_non_pd;
      if (inst->interior_edges > 0) {
        ++rep.with_interior;
        if (inst->diagonal_positive) ++rep.diagonal_positive;
        mins.push_back(inst->min_eigenvalue);
      }
    } else {
      ++rep.controls;
      if (!inst->positive_definite) ++rep.controls_non_pd;
    }
    rep.instances.push_back(std::move(*inst));
  }
  std::sort(mins.begin(), mins.end());
  if (!mins.empty()) {
    for (double q : {0.0, 0.1, 0.5, 0.9, 1.0}) {
      const auto k = static_cast<std::size_t>(std::lround(q * static_cast<double>(mins.size() - 1)));
      rep.min_eigenvalue_quantiles.push_back(mins[k]);
    }
  }
  return rep;
}

}  // namespace polyrigid

#include "polyrigid/cauchy.hpp"

#include "polyrigid/generators.hpp"
#include "polyrigid/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <set>

namespace polyrigid {

char to_char(Sign s) {
  switch (s) {
    case Sign::Minus: return '-';
    case Sign::Zero: return '0';
    case Sign::Plus: return '+';
  }
  return '?';
}

SignVector sign_vector_from_flex(const PolyhedralSurface& surface, const Motion& m, double threshold) {
  if (m.vertex_count() != surface.vertex_count()) throw GeometryError("sign_vector_from_flex: motion size mismatch");
  SignVector sv;
  const int ne = surface.edge_count();
  sv.signs.assign(ne, Sign::Zero);
  sv.rates.assign(ne, 0.0);
  const double mnorm = m.v.norm();
  if (mnorm == 0.0) return sv;

  // Rates are scale free once the motion has unit norm.
  const auto p = normalized_unit_diameter(surface.vertices());
  const Eigen::VectorXd v = m.v / mnorm;
  auto vel = [&](int k) -> Vec3 { return v.segment<3>(3 * k); };

  for (int e = 0; e < ne; ++e) {
    const Edge ed = surface.edges()[e];
    const auto faces = surface.edge_faces(e);
    const int c = surface.opposite_vertex(faces[0], ed);
    const int dd = surface.opposite_vertex(faces[1], ed);
    const double rate = dihedral_angle_rate(p[ed.i], p[ed.j], p[c], p[dd], vel(ed.i), vel(ed.j), vel(c), vel(dd));
    sv.rates[e] = rate;
    if (rate > threshold) {
      sv.signs[e] = Sign::Plus;
    } else if (rate < -threshold) {
      sv.signs[e] = Sign::Minus;
    }
  }
  return sv;
}

int cyclic_sign_changes(std::span<const Sign> cyclic) {
  std::vector<Sign> nz;
  for (Sign s : cyclic) {
    if (s != Sign::Zero) nz.push_back(s);
  }
  int changes = 0;
  for (std::size_t k = 0; k < nz.size(); ++k) {
    if (nz[k] != nz[(k + 1) % nz.size()]) ++changes;
  }
  return changes;
}

// ---------------------------------------------------------------------------
// Embeddings

int PlanarEmbedding::edge_index(int a, int b) const {
  const Edge e = make_edge(a, b);
  auto it = std::lower_bound(edges.begin(), edges.end(), e);
  if (it == edges.end() || *it != e) return -1;
  return static_cast<int>(it - edges.begin());
}

std::vector<std::vector<int>> PlanarEmbedding::faces() const {
  // Half-edge u->w continues with w->pred_w(u).
  std::set<std::pair<int, int>> used;
  std::vector<std::vector<int>> out;
  for (int u = 0; u < vertex_count; ++u) {
    for (int w : rotation[u]) {
      if (used.contains({u, w})) continue;
      std::vector<int> face;
      int a = u, b = w;
      while (!used.contains({a, b})) {
        used.insert({a, b});
        face.push_back(edge_index(a, b));
        const auto& rot = rotation[b];
        const auto it = std::find(rot.begin(), rot.end(), a);
        const std::size_t pos = static_cast<std::size_t>(it - rot.begin());
        const int next = rot[(pos + rot.size() - 1) % rot.size()];
        a = b;
        b = next;
      }
      out.push_back(std::move(face));
    }
  }
  return out;
}

bool PlanarEmbedding::connected() const {
  if (vertex_count == 0) return true;
  std::vector<bool> seen(vertex_count, false);
  std::queue<int> q;
  q.push(0);
  seen[0] = true;
  int count = 1;
  while (!q.empty()) {
    const int v = q.front();
    q.pop();
    for (int w : rotation[v]) {
      if (!seen[w]) {
        seen[w] = true;
        ++count;
        q.push(w);
      }
    }
  }
  return count == vertex_count;
}

PlanarEmbedding embedding_from_surface(const PolyhedralSurface& surface) {
  PlanarEmbedding g;
  g.vertex_count = surface.vertex_count();
  g.edges = surface.edges();
  for (int v = 0; v < g.vertex_count; ++v) g.rotation.push_back(surface.ring(v));
  return g;
}

SignedPlanarGraph sign_subgraph(const PolyhedralSurface& surface, const SignVector& sv) {
  if (static_cast<int>(sv.signs.size()) != surface.edge_count()) {
    throw GeometryError("sign_subgraph: sign vector does not match the edge set");
  }
  const int nv = surface.vertex_count();
  std::vector<int> local(nv, -1);
  SignedPlanarGraph g;
  for (int v = 0; v < nv; ++v) {
    bool any = false;
    for (int w : surface.ring(v)) {
      if (sv.signs[surface.edge_index(make_edge(v, w))] != Sign::Zero) any = true;
    }
    if (any) {
      local[v] = static_cast<int>(g.surface_ids.size());
      g.surface_ids.push_back(v);
    }
  }
  auto& emb = g.embedding;
  emb.vertex_count = static_cast<int>(g.surface_ids.size());
  for (int e = 0; e < surface.edge_count(); ++e) {
    if (sv.signs[e] == Sign::Zero) continue;
    const Edge ed = surface.edges()[e];
    emb.edges.push_back(make_edge(local[ed.i], local[ed.j]));
  }
  std::sort(emb.edges.begin(), emb.edges.end());
  g.labels.assign(emb.edges.size(), Sign::Zero);
  for (int e = 0; e < surface.edge_count(); ++e) {
    if (sv.signs[e] == Sign::Zero) continue;
    const Edge ed = surface.edges()[e];
    g.labels[emb.edge_index(local[ed.i], local[ed.j])] = sv.signs[e];
  }
  emb.rotation.resize(emb.vertex_count);
  for (int lv = 0; lv < emb.vertex_count; ++lv) {
    const int v = g.surface_ids[lv];
    for (int w : surface.ring(v)) {
      if (sv.signs[surface.edge_index(make_edge(v, w))] != Sign::Zero) emb.rotation[lv].push_back(local[w]);
    }
    if (emb.rotation[lv].size() < 3) {
      throw GeometryError("sign_subgraph: vertex " + std::to_string(v) + " keeps only " +
                          std::to_string(emb.rotation[lv].size()) +
                          " signed edges; the sign vector cannot come from a flex");
    }
  }
  if (!emb.connected()) throw GeometryError("sign_subgraph: signed subgraph is disconnected");
  return g;
}

SignChangeStats count_sign_changes(const SignedPlanarGraph& g) {
  SignChangeStats st;
  const auto& emb = g.embedding;
  st.v = emb.vertex_count;
  st.e = static_cast<int>(emb.edges.size());
  for (int v = 0; v < emb.vertex_count; ++v) {
    std::vector<Sign> around;
    for (int w : emb.rotation[v]) around.push_back(g.labels[emb.edge_index(v, w)]);
    st.per_vertex.push_back(cyclic_sign_changes(around));
  }
  const auto faces = emb.faces();
  st.f = static_cast<int>(faces.size());
  for (const auto& face : faces) {
    std::vector<Sign> around;
    for (int e : face) around.push_back(g.labels[e]);
    const int c = cyclic_sign_changes(around);
    st.per_face.push_back(c);
    st.s += c;
    const int k = static_cast<int>(face.size());
    ++st.face_sizes[k];
    st.face_bound += 2 * (k / 2);
  }
  st.lower_bound = 4 * st.v - 6;
  st.euler_upper = 4 * st.e - 4 * st.f;
  st.lower_holds = st.lower_bound <= st.s;
  st.upper_holds = st.s <= st.euler_upper;
  st.contradiction = st.lower_holds && st.upper_holds;
  return st;
}

std::optional<std::vector<Sign>> topo_lemma_witness_search(const PlanarEmbedding& g, int max_edges) {
  const int e = static_cast<int>(g.edges.size());
  if (e > max_edges) {
    throw GeometryError("topo_lemma_witness_search: " + std::to_string(e) + " edges exceed the limit of " +
                        std::to_string(max_edges));
  }
  std::vector<std::vector<int>> incident(g.vertex_count);
  for (int v = 0; v < g.vertex_count; ++v) {
    for (int w : g.rotation[v]) incident[v].push_back(g.edge_index(v, w));
  }
  std::vector<Sign> labels(e);
  std::vector<Sign> around;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << e); ++mask) {
    for (int k = 0; k < e; ++k) labels[k] = (mask >> k) & 1U ? Sign::Plus : Sign::Minus;
    bool ok = true;
    int weak_vertices = 0;
    for (int v = 0; v < g.vertex_count && ok; ++v) {
      around.clear();
      for (int k : incident[v]) around.push_back(labels[k]);
      const int c = cyclic_sign_changes(around);
      if (c == 0) ok = false;
      if (c < 4 && ++weak_vertices > 3) ok = false;
    }
    if (ok) return labels;
  }
  return std::nullopt;
}

std::vector<VertexSignReport> vertex_sign_lemma_check(const PolyhedralSurface& surface, const SignVector& sv) {
  std::vector<VertexSignReport> out;
  for (int v = 0; v < surface.vertex_count(); ++v) {
    VertexSignReport r;
    r.vertex = v;
    r.convex = true;
    std::vector<Sign> around;
    bool plus = false, minus = false;
    for (int w : surface.ring(v)) {
      const int e = surface.edge_index(make_edge(v, w));
      if (dihedral_angle(surface, e) > std::numbers::pi + 1e-9) r.convex = false;
      around.push_back(sv.signs[e]);
      if (sv.signs[e] == Sign::Plus) plus = true;
      if (sv.signs[e] == Sign::Minus) minus = true;
      if (sv.signs[e] != Sign::Zero) ++r.nonzero;
    }
    r.changes = cyclic_sign_changes(around);
    r.all_zero = r.nonzero == 0;
    if (r.all_zero) {
      r.satisfied = true;
      r.clause = "all zero";
    } else if (r.convex) {
      r.satisfied = r.changes >= 4;
      r.clause = "convex vertex: at least 4 sign changes";
    } else {
      r.satisfied = plus && minus && r.nonzero >= 3;
      r.clause = "non-convex vertex: both signs on at least 3 nonzero edges";
    }
    out.push_back(r);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Denting

namespace {

struct DentPlan {
  int f1, f2;
  int a, b, c, d;
};

DentPlan plan_dent(const PolyhedralSurface& s, Edge edge, double geom_tol) {
  const int k = s.edge_index(edge);
  if (k < 0) throw GeometryError("dent: " + to_string(edge) + " is not an edge");
  const auto faces = s.edge_faces(k);
  DentPlan p{faces[0], faces[1], edge.i, edge.j, s.opposite_vertex(faces[0], edge), s.opposite_vertex(faces[1], edge)};
  if (s.has_edge(p.c, p.d)) {
    throw GeometryError("dent: opposite vertices " + std::to_string(p.c) + " and " + std::to_string(p.d) +
                        " are already adjacent");
  }
  const auto unit = normalized_unit_diameter(s.vertices());
  const double vol = (unit[p.b] - unit[p.a]).cross(unit[p.c] - unit[p.a]).dot(unit[p.d] - unit[p.a]);
  if (std::abs(vol) < geom_tol) throw GeometryError("dent: quadrilateral " + to_string(edge) + " is coplanar");
  return p;
}

}  // namespace

bool dentable(const PolyhedralSurface& surface, Edge edge, double geom_tol) {
  try {
    plan_dent(surface, edge, geom_tol);
    return true;
  } catch (const GeometryError&) {
    return false;
  }
}

DentResult dent(const PolyhedralSurface& surface, Edge edge, double geom_tol) {
  const DentPlan p = plan_dent(surface, edge, geom_tol);
  std::vector<Face> faces;
  for (int f = 0; f < surface.face_count(); ++f) {
    if (f != p.f1 && f != p.f2) faces.push_back(surface.faces()[f]);
  }
  // (a, b, c) and (b, a, d) become (b, c, d) and (c, a, d).
  faces.push_back({p.b, p.c, p.d});
  faces.push_back({p.c, p.a, p.d});
  return {PolyhedralSurface(surface.vertices(), std::move(faces), geom_tol), make_edge(p.c, p.d)};
}

std::string to_string(DentKind k) {
  switch (k) {
    case DentKind::Single: return "single";
    case DentKind::AdjacentPair: return "adjacent-pair";
    case DentKind::Control: return "control";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Harness

namespace {

HarnessInstance evaluate(int trial, DentKind kind, const PolyhedralSurface& s, std::vector<Edge> dented,
                         const Tolerance& tol) {
  HarnessInstance inst;
  inst.trial = trial;
  inst.kind = kind;
  inst.vertex_count = s.vertex_count();
  inst.dented = std::move(dented);
  const Framework fw = Framework::all_bars(s);
  inst.rank = numerical_rank(rigidity_matrix(fw), tol.rank_tol);
  inst.expected_rank = 3 * s.vertex_count() - 6;
  inst.rigid = inst.rank == inst.expected_rank;
  if (!inst.rigid) {
    const Eigen::MatrixXd flex = nontrivial_flexes(fw, tol);
    if (flex.cols() > 0) {
      try {
        const SignVector sv = sign_vector_from_flex(s, Motion{flex.col(0)});
        inst.flex_signs = count_sign_changes(sign_subgraph(s, sv));
      } catch (const GeometryError&) {
      }
    }
  }
  if (!inst.rigid && kind != DentKind::Control) {
    inst.vertices = s.vertices();
    inst.faces = s.faces();
  }
  return inst;
}

bool share_face(const PolyhedralSurface& s, int v, int a, int b) {
  for (const auto& f : s.faces()) {
    const bool hv = std::find(f.begin(), f.end(), v) != f.end();
    const bool ha = std::find(f.begin(), f.end(), a) != f.end();
    const bool hb = std::find(f.begin(), f.end(), b) != f.end();
    if (hv && ha && hb) return true;
  }
  return false;
}

}  // namespace

std::optional<PairDent> random_adjacent_pair_dent(const PolyhedralSurface& q, std::mt19937_64& rng,
                                                  double geom_tol) {
  std::vector<std::array<int, 3>> pairs;
  for (int v = 0; v < q.vertex_count(); ++v) {
    const auto& ring = q.ring(v);
    for (std::size_t x = 0; x < ring.size(); ++x) {
      for (std::size_t y = x + 1; y < ring.size(); ++y) {
        if (!share_face(q, v, ring[x], ring[y])) pairs.push_back({v, ring[x], ring[y]});
      }
    }
  }
  std::shuffle(pairs.begin(), pairs.end(), rng);
  for (const auto& [v, a, b] : pairs) {
    const Edge ea = make_edge(v, a);
    const Edge eb = make_edge(v, b);
    if (!dentable(q, ea, geom_tol)) continue;
    const auto first = dent(q, ea, geom_tol);
    if (!dentable(first.surface, eb, geom_tol)) continue;
    auto second = dent(first.surface, eb, geom_tol);
    return PairDent{std::move(second.surface), {ea, eb}, {first.new_edge, second.new_edge}};
  }
  return std::nullopt;
}

HarnessReport theorem1_harness(std::uint64_t seed, int trials, const HarnessConfig& cfg, const Tolerance& tol) {
  HarnessReport rep;
  rep.seed = seed;
  rep.trials = trials;
  for (int t = 0; t < trials; ++t) {
    Rng rng(split_seed(seed, static_cast<std::uint64_t>(t)));
    const int n = std::uniform_int_distribution<int>(cfg.min_vertices, cfg.max_vertices)(rng);
    auto hull = random_convex_surface(rng, n);
    if (!hull || classify_convexity(*hull, tol).classification != ConvexityClass::StronglyStrictlyConvex) {
      ++rep.skipped;
      continue;
    }
    const PolyhedralSurface& q = *hull;

    // Single dent at a random dentable edge.
    std::vector<Edge> candidates;
    for (const auto& e : q.edges()) {
      if (dentable(q, e, tol.geom_tol)) candidates.push_back(e);
    }
    if (candidates.empty()) {
      ++rep.skipped;
      continue;
    }
    const Edge e1 = candidates[std::uniform_int_distribution<std::size_t>(0, candidates.size() - 1)(rng)];
    const auto once = dent(q, e1, tol.geom_tol);
    rep.instances.push_back(evaluate(t, DentKind::Single, once.surface, {e1}, tol));

    if (auto pair = random_adjacent_pair_dent(q, rng, tol.geom_tol)) {
      rep.instances.push_back(evaluate(t, DentKind::AdjacentPair, pair->surface,
                                       {pair->dented[0], pair->dented[1]}, tol));
    }

    if (cfg.controls) {
      std::vector<std::pair<Edge, Edge>> far;
      for (std::size_t x = 0; x < candidates.size(); ++x) {
        for (std::size_t y = x + 1; y < candidates.size(); ++y) {
          const Edge a = candidates[x], b = candidates[y];
          if (a.i != b.i && a.i != b.j && a.j != b.i && a.j != b.j) far.emplace_back(a, b);
        }
      }
      std::shuffle(far.begin(), far.end(), rng);
      for (const auto& [a, b] : far) {
        const auto first = dent(q, a, tol.geom_tol);
        if (!dentable(first.surface, b, tol.geom_tol)) continue;
        const auto second = dent(first.surface, b, tol.geom_tol);
        rep.instances.push_back(evaluate(t, DentKind::Control, second.surface, {a, b}, tol));
        break;
      }
    }
  }
  for (const auto& inst : rep.instances) {
    if (inst.kind == DentKind::Control) {
      ++rep.controls;
      if (!inst.rigid) ++rep.controls_flexible;
    } else {
      ++rep.checked;
      if (!inst.rigid) ++rep.failures;
    }
  }
  return rep;
}

}  // namespace polyrigid

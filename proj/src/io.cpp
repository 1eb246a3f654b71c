#include "polyrigid/io.hpp"

#include "polyrigid/suspension.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace polyrigid {

using nlohmann::json;

namespace {

std::string ptr(const std::string& base, std::size_t k) { return base + "/" + std::to_string(k); }

int index_at(const json& v, const std::string& where, int count) {
  if (!v.is_number_integer()) throw SchemaError(where, "expected an integer index");
  const auto k = v.get<long long>();
  if (k < 0 || k >= count) throw SchemaError(where, "index " + std::to_string(k) + " out of range");
  return static_cast<int>(k);
}

const json& member(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw SchemaError(where, std::string("missing field '") + key + "'");
  return obj.at(key);
}

template <std::size_t N>
std::array<int, N> index_tuple(const json& v, const std::string& where, int count) {
  if (!v.is_array() || v.size() != N) {
    throw SchemaError(where, "expected an array of " + std::to_string(N) + " indices");
  }
  std::array<int, N> out{};
  for (std::size_t k = 0; k < N; ++k) out[k] = index_at(v[k], ptr(where, k), count);
  return out;
}

}  // namespace

FrameworkFile framework_from_json(const json& doc) {
  if (!doc.is_object()) throw SchemaError("", "document must be an object");
  const json& version = member(doc, "version", "");
  if (!version.is_number_integer() || version.get<long long>() != 1) {
    throw SchemaError("/version", "unsupported version (expected 1)");
  }
  static const std::set<std::string> known{"version", "vertices", "edges",      "faces",
                                           "poles",   "equator",  "tetrahedra", "metadata"};
  for (const auto& [key, value] : doc.items()) {
    if (!known.contains(key)) throw SchemaError("/" + key, "unknown field");
  }

  FrameworkFile f;
  const json& verts = member(doc, "vertices", "");
  if (!verts.is_array()) throw SchemaError("/vertices", "expected an array");
  for (std::size_t k = 0; k < verts.size(); ++k) {
    const json& v = verts[k];
    const std::string where = ptr("/vertices", k);
    if (!v.is_array() || v.size() != 3) throw SchemaError(where, "expected [x, y, z]");
    Point3 p;
    for (std::size_t c = 0; c < 3; ++c) {
      if (!v[c].is_number()) throw SchemaError(ptr(where, c), "expected a number");
      p(static_cast<Eigen::Index>(c)) = v[c].get<double>();
      if (!std::isfinite(p(static_cast<Eigen::Index>(c)))) throw SchemaError(ptr(where, c), "not finite");
    }
    f.vertices.push_back(p);
  }
  const int nv = static_cast<int>(f.vertices.size());

  const json& edges = doc.contains("edges") ? doc.at("edges") : json::array();
  if (!edges.is_array()) throw SchemaError("/edges", "expected an array");
  std::set<Edge> seen;
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const json& e = edges[k];
    const std::string where = ptr("/edges", k);
    if (!e.is_object()) throw SchemaError(where, "expected {i, j, kind}");
    FrameworkEdge fe;
    fe.i = index_at(member(e, "i", where), where + "/i", nv);
    fe.j = index_at(member(e, "j", where), where + "/j", nv);
    if (fe.i == fe.j) throw SchemaError(where + "/j", "edge is a loop");
    if (e.contains("kind")) {
      const json& kind = e.at("kind");
      if (!kind.is_string()) throw SchemaError(where + "/kind", "expected a string");
      try {
        fe.kind = edge_kind_from_string(kind.get<std::string>());
      } catch (const GeometryError& err) {
        throw SchemaError(where + "/kind", err.what());
      }
    }
    if (!seen.insert(fe.key()).second) throw SchemaError(where, "duplicate edge " + to_string(fe.key()));
    if (fe.i > fe.j) std::swap(fe.i, fe.j);
    f.edges.push_back(fe);
  }

  if (doc.contains("faces")) {
    const json& faces = doc.at("faces");
    if (!faces.is_array()) throw SchemaError("/faces", "expected an array");
    std::vector<Face> out;
    for (std::size_t k = 0; k < faces.size(); ++k) out.push_back(index_tuple<3>(faces[k], ptr("/faces", k), nv));
    f.faces = std::move(out);
  }
  if (doc.contains("poles")) {
    const json& poles = doc.at("poles");
    if (!poles.is_object()) throw SchemaError("/poles", "expected {N, S}");
    const int n = index_at(member(poles, "N", "/poles"), "/poles/N", nv);
    const int s = index_at(member(poles, "S", "/poles"), "/poles/S", nv);
    if (n == s) throw SchemaError("/poles/S", "poles coincide");
    f.poles = std::array<int, 2>{n, s};
  }
  if (doc.contains("equator")) {
    const json& eq = doc.at("equator");
    if (!eq.is_array()) throw SchemaError("/equator", "expected an array");
    std::vector<int> out;
    for (std::size_t k = 0; k < eq.size(); ++k) out.push_back(index_at(eq[k], ptr("/equator", k), nv));
    f.equator = std::move(out);
  }
  if (f.equator.has_value() != f.poles.has_value()) {
    throw SchemaError(f.poles ? "/equator" : "/poles", "poles and equator must be given together");
  }
  if (doc.contains("tetrahedra")) {
    const json& tets = doc.at("tetrahedra");
    if (!tets.is_array()) throw SchemaError("/tetrahedra", "expected an array");
    std::vector<Tetrahedron> out;
    for (std::size_t k = 0; k < tets.size(); ++k) {
      out.push_back(index_tuple<4>(tets[k], ptr("/tetrahedra", k), nv));
    }
    f.tetrahedra = std::move(out);
  }
  if (doc.contains("metadata")) {
    if (!doc.at("metadata").is_object()) throw SchemaError("/metadata", "expected an object");
    f.metadata = doc.at("metadata");
  }
  return f;
}

json to_json(const FrameworkFile& f) {
  json doc;
  doc["version"] = 1;
  json verts = json::array();
  for (const auto& p : f.vertices) verts.push_back({p.x(), p.y(), p.z()});
  doc["vertices"] = std::move(verts);
  json edges = json::array();
  for (const auto& e : f.edges) edges.push_back({{"i", e.i}, {"j", e.j}, {"kind", to_string(e.kind)}});
  doc["edges"] = std::move(edges);
  if (f.faces) doc["faces"] = *f.faces;
  if (f.poles) doc["poles"] = {{"N", (*f.poles)[0]}, {"S", (*f.poles)[1]}};
  if (f.equator) doc["equator"] = *f.equator;
  if (f.tetrahedra) doc["tetrahedra"] = *f.tetrahedra;
  if (!f.metadata.empty()) doc["metadata"] = f.metadata;
  return doc;
}

FrameworkFile read_off(std::istream& in) {
  // Tokens with '#' comments removed.
  std::vector<std::string> tok;
  std::string line;
  while (std::getline(in, line)) {
    if (auto c = line.find('#'); c != std::string::npos) line.erase(c);
    std::istringstream ls(line);
    std::string t;
    while (ls >> t) tok.push_back(t);
  }
  std::size_t at = 0;
  auto next = [&]() -> const std::string& {
    if (at >= tok.size()) throw SchemaError("", "OFF: unexpected end of file");
    return tok[at++];
  };
  auto next_int = [&] {
    try {
      return std::stoi(next());
    } catch (const std::logic_error&) {
      throw SchemaError("", "OFF: expected an integer");
    }
  };
  auto next_double = [&] {
    try {
      return std::stod(next());
    } catch (const std::logic_error&) {
      throw SchemaError("", "OFF: expected a number");
    }
  };
  if (next() != "OFF") throw SchemaError("", "OFF: missing header");
  const int nv = next_int();
  const int nf = next_int();
  next_int();
  if (nv < 0 || nf < 0) throw SchemaError("", "OFF: negative counts");
  FrameworkFile f;
  for (int k = 0; k < nv; ++k) {
    const double x = next_double();
    const double y = next_double();
    const double z = next_double();
    f.vertices.emplace_back(x, y, z);
  }
  std::vector<Face> faces;
  std::set<Edge> edges;
  for (int k = 0; k < nf; ++k) {
    const int m = next_int();
    if (m < 3) throw SchemaError("/faces/" + std::to_string(k), "OFF: face with fewer than 3 vertices");
    std::vector<int> poly;
    for (int c = 0; c < m; ++c) {
      const int v = next_int();
      if (v < 0 || v >= nv) throw SchemaError("/faces/" + std::to_string(k), "OFF: index out of range");
      poly.push_back(v);
    }
    for (int c = 1; c + 1 < m; ++c) faces.push_back({poly[0], poly[c], poly[c + 1]});
    for (int c = 0; c < m; ++c) edges.insert(make_edge(poly[c], poly[(c + 1) % m]));
    for (int c = 2; c + 1 < m; ++c) edges.insert(make_edge(poly[0], poly[c]));
  }
  for (const auto& e : edges) f.edges.push_back({e.i, e.j, EdgeKind::Bar});
  f.faces = std::move(faces);
  return f;
}

FrameworkFile load_framework(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".off") return read_off(in);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError("", std::string("invalid JSON: ") + e.what());
  }
  return framework_from_json(doc);
}

void save_framework(const std::string& path, const FrameworkFile& file) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << to_json(file).dump(2) << "\n";
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

Framework to_framework(const FrameworkFile& f, double geom_tol) { return Framework(f.vertices, f.edges, geom_tol); }

PolyhedralSurface to_surface(const FrameworkFile& f, double geom_tol) {
  if (!f.faces) throw SchemaError("/faces", "a surface needs faces");
  return PolyhedralSurface(f.vertices, *f.faces, geom_tol);
}

Suspension to_suspension(const FrameworkFile& f, double geom_tol) {
  if (!f.poles || !f.equator) throw SchemaError("/poles", "a suspension needs poles and an equator");
  std::vector<Point3> eq;
  for (int k : *f.equator) eq.push_back(f.vertices[k]);
  return Suspension(f.vertices[(*f.poles)[0]], f.vertices[(*f.poles)[1]], std::move(eq), geom_tol);
}

Decomposition to_decomposition(const FrameworkFile& f, const Tolerance& tol) {
  if (!f.tetrahedra) throw SchemaError("/tetrahedra", "a decomposition needs tetrahedra");
  return Decomposition::from_tetrahedra(f.vertices, *f.tetrahedra, tol);
}

FrameworkFile file_from_framework(const Framework& fw) {
  FrameworkFile f;
  f.vertices = fw.vertices();
  f.edges = fw.edges();
  return f;
}

FrameworkFile file_from_surface(const PolyhedralSurface& s) {
  FrameworkFile f = file_from_framework(Framework::all_bars(s));
  f.faces = s.faces();
  return f;
}

FrameworkFile file_from_suspension(const Suspension& s) {
  FrameworkFile f = file_from_framework(tensegrity_labeling(s, false));
  f.faces = s.surface().faces();
  f.poles = std::array<int, 2>{Suspension::kNorth, Suspension::kSouth};
  std::vector<int> eq;
  for (int i = 0; i < s.equator_size(); ++i) eq.push_back(Suspension::equator_vertex(i));
  f.equator = std::move(eq);
  return f;
}

FrameworkFile file_from_decomposition(const Decomposition& d) {
  FrameworkFile f;
  f.vertices = d.vertices();
  for (const auto& e : d.boundary_edges()) f.edges.push_back({e.i, e.j, EdgeKind::Bar});
  f.faces = d.boundary_faces();
  f.tetrahedra = d.tetrahedra();
  return f;
}

std::uint64_t instance_hash(const FrameworkFile& f) {
  FrameworkFile bare = f;
  bare.metadata = json::object();
  const std::string text = to_json(bare).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string CsvTable::str() const {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t k = 0; k < cells.size(); ++k) {
      if (k) out += ',';
      out += cells[k];
    }
    out += '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out;
}

}  // namespace polyrigid

#pragma once

#include "polyrigid/common.hpp"
#include "polyrigid/geometry.hpp"
#include "polyrigid/lambda.hpp"
#include "polyrigid/rigidity.hpp"

#include <json.hpp>

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace polyrigid {

class Suspension;

/// Schema violation; pointer() is the JSON pointer of the offending value.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string pointer, const std::string& msg)
      : std::runtime_error(pointer + ": " + msg), pointer_(std::move(pointer)) {}
  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

/// Version 1 document. One vertex set with optional views: faces make it a
/// surface, poles and equator a suspension, tetrahedra a decomposition.
struct FrameworkFile {
  std::vector<Point3> vertices;
  std::vector<FrameworkEdge> edges;
  std::optional<std::vector<Face>> faces;
  std::optional<std::array<int, 2>> poles;  // N, S
  std::optional<std::vector<int>> equator;
  std::optional<std::vector<Tetrahedron>> tetrahedra;
  nlohmann::json metadata = nlohmann::json::object();
};

FrameworkFile framework_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const FrameworkFile& file);

/// Reads JSON, or OFF when the path ends in ".off".
FrameworkFile load_framework(const std::string& path);
void save_framework(const std::string& path, const FrameworkFile& file);

/// Minimal OFF reader: polygons are fan-triangulated, every surface edge
/// becomes a bar.
FrameworkFile read_off(std::istream& in);

Framework to_framework(const FrameworkFile& f, double geom_tol = 1e-9);
PolyhedralSurface to_surface(const FrameworkFile& f, double geom_tol = 1e-9);
Suspension to_suspension(const FrameworkFile& f, double geom_tol = 1e-9);
Decomposition to_decomposition(const FrameworkFile& f, const Tolerance& tol = {});

FrameworkFile file_from_surface(const PolyhedralSurface& s);
FrameworkFile file_from_framework(const Framework& fw);
FrameworkFile file_from_suspension(const Suspension& s);
FrameworkFile file_from_decomposition(const Decomposition& d);

/// FNV-1a (64 bit) of the compact serialization without metadata.
std::uint64_t instance_hash(const FrameworkFile& f);
std::string hex64(std::uint64_t v);

/// printf "%.17g": reads back to the same double.
std::string format_double(double x);

/// CSV with a header row; numbers written with format_double.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }
  std::string str() const;
};

}  // namespace polyrigid

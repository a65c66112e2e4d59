#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace ldd {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }

enum class ModelKind { Richards, TwoPhase };

std::string to_string(ModelKind kind);

/// Simple polygon, vertices in counterclockwise order.
struct Polygon {
  std::vector<Point> vertices;
};

double polygon_area(const Polygon& poly);
bool polygon_is_simple(const Polygon& poly);
bool point_in_polygon(const Polygon& poly, Point p);
/// A point strictly inside the polygon (centroid of an ear).
Point polygon_interior_point(const Polygon& poly);

/// Scenario geometry descriptor: global polygon plus the subdomain
/// polygons with their model tags.
struct GeometrySpec {
  Polygon global;
  std::vector<Polygon> subdomains;
  std::vector<ModelKind> models;
};

/// Default two-domain split: (0,1)x(-1,1) with the top unit square
/// running Richards and the bottom one the full two-phase model,
/// interface on y = 0.
GeometrySpec two_domain_geometry(ModelKind top = ModelKind::Richards,
                                 ModelKind bottom = ModelKind::TwoPhase);

/// Five subdomains: two Richards squares on top (y in (0,1), split at
/// x = 0.5) over a two-phase strip y in (-1,0) that contains the inner
/// box (0.25,0.75)x(-0.75,-0.25) as its own subdomain.
GeometrySpec five_domain_geometry();

GeometrySpec unit_square_geometry(ModelKind model = ModelKind::Richards);

/// Validated partition with the neighbor index sets.
struct Partition {
  Polygon global;
  std::vector<Polygon> subdomains;
  std::vector<ModelKind> models;
  std::vector<std::vector<int>> neighbors;  // J_l, sorted, 0-based ids
  std::vector<int> richards_ids;            // J^R
  std::vector<int> twophase_ids;            // J^TP

  int count() const { return static_cast<int>(subdomains.size()); }
  bool is_richards(int l) const { return models[l] == ModelKind::Richards; }
};

/// Checks non-overlap and coverage of the subdomain polygons and
/// computes the neighbor sets from shared one-dimensional boundaries.
/// Throws std::invalid_argument on overlap, coverage gaps or degenerate
/// polygons.
Partition build_partition(const GeometrySpec& spec);

struct SubMesh {
  std::vector<int> vertex_global;            // local dof -> global vertex
  std::vector<Point> vertex_coords;          // copied from global vertices
  std::vector<std::array<int, 3>> cells;     // local vertex ids, CCW
  std::vector<int> cell_global;              // local cell -> global cell
  std::vector<int> boundary_dofs;            // local dofs on the global boundary
  double h = 0.0;                            // max cell circumdiameter

  int dof_count() const { return static_cast<int>(vertex_coords.size()); }
};

struct InterfaceFacet {
  int va = -1, vb = -1;                // global vertex ids, lexicographic order
  std::array<int, 2> dofs_l{};         // local trace dofs (va, vb) in side l
  std::array<int, 2> dofs_k{};         // local trace dofs (va, vb) in side k
  int cell_l = -1;                     // adjacent local cell in side l submesh
  int cell_k = -1;
  Point normal;                        // unit normal n_lk (from side l into side k)
  double length = 0.0;
};

/// All facets shared by the ordered pair (l, k) with l < k; n_kl = -n_lk.
struct Interface {
  int l = -1, k = -1;
  std::vector<InterfaceFacet> facets;
};

struct MultiDomainMesh {
  Partition partition;
  std::vector<Point> vertices;
  std::vector<std::array<int, 3>> cells;
  std::vector<int> cell_subdomain;
  std::vector<SubMesh> submeshes;
  std::vector<Interface> interfaces;
  std::vector<std::vector<int>> interface_index;  // [l][k] -> interfaces index or -1
  double target_edge_length = 0.0;

  const Interface& interface_between(int l, int k) const;
  double max_h() const;
};

/// Structured conforming triangulation. `resolution = r` targets edge
/// length 1/r; grid lines are snapped to every polygon vertex coordinate
/// so interfaces always coincide with mesh edges. Requires rectilinear
/// (axis-parallel) polygon edges and throws if any polygon edge is
/// shorter than the target edge length (refinement required).
MultiDomainMesh triangulate(const Partition& partition, int resolution);

struct TraceRecord {
  int facet = -1;               // index into the interface facet list
  std::array<int, 2> dofs_l{};  // endpoint dofs in subdomain l
  std::array<int, 2> dofs_k{};  // endpoint dofs in subdomain k
  Point normal;                 // n_lk
  double length = 0.0;
};

/// Ordered, orientation-consistent dof correspondence across the
/// interface between l and neighbor k; throws if k is not a neighbor.
std::vector<TraceRecord> interface_trace_map(const MultiDomainMesh& mesh, int l, int k);

/// Plain-text dump: vertices, per-subdomain cells, interface facet
/// records, one record per line.
void dump_mesh(const MultiDomainMesh& mesh, std::ostream& out);

}  // namespace ldd

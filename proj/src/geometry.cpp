#include "ldd/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <set>
#include <stdexcept>

namespace ldd {

namespace {

constexpr double kGeomEps = 1e-12;

Polygon rectangle(double x0, double y0, double x1, double y1) {
  return Polygon{{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}};
}

bool on_segment(Point a, Point b, Point p, double eps) {
  const Point ab = b - a;
  const Point ap = p - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return false;
  if (std::abs(cross(ab, ap)) > eps * std::sqrt(len2)) return false;
  const double t = dot(ap, ab) / len2;
  return t >= -eps && t <= 1.0 + eps;
}

/// Proper crossing: the open interiors of the two segments intersect.
bool segments_cross(Point a, Point b, Point c, Point d) {
  const double d1 = cross(b - a, c - a);
  const double d2 = cross(b - a, d - a);
  const double d3 = cross(d - c, a - c);
  const double d4 = cross(d - c, b - c);
  return ((d1 > kGeomEps && d2 < -kGeomEps) || (d1 < -kGeomEps && d2 > kGeomEps)) &&
         ((d3 > kGeomEps && d4 < -kGeomEps) || (d3 < -kGeomEps && d4 > kGeomEps));
}

struct Segment {
  Point a, b;
};

std::vector<Segment> polygon_edges(const Polygon& poly) {
  std::vector<Segment> edges;
  const std::size_t n = poly.vertices.size();
  for (std::size_t i = 0; i < n; ++i) edges.push_back({poly.vertices[i], poly.vertices[(i + 1) % n]});
  return edges;
}

/// Collinear overlap of two segments with positive shared length.
bool segments_overlap_1d(Point a, Point b, Point c, Point d, double& lo, double& hi) {
  const Point ab = b - a;
  const double len2 = dot(ab, ab);
  if (std::abs(cross(ab, c - a)) > kGeomEps || std::abs(cross(ab, d - a)) > kGeomEps) return false;
  double t0 = dot(c - a, ab) / len2;
  double t1 = dot(d - a, ab) / len2;
  if (t0 > t1) std::swap(t0, t1);
  lo = std::max(0.0, t0);
  hi = std::min(1.0, t1);
  return hi - lo > kGeomEps;
}

bool polygons_share_boundary(const Polygon& p, const Polygon& q) {
  double lo, hi;
  for (const Segment& e : polygon_edges(p))
    for (const Segment& f : polygon_edges(q))
      if (segments_overlap_1d(e.a, e.b, f.a, f.b, lo, hi)) return true;
  return false;
}

}  // namespace

std::string to_string(ModelKind kind) {
  return kind == ModelKind::Richards ? "richards" : "twophase";
}

double polygon_area(const Polygon& poly) {
  double acc = 0.0;
  const std::size_t n = poly.vertices.size();
  for (std::size_t i = 0; i < n; ++i) acc += cross(poly.vertices[i], poly.vertices[(i + 1) % n]);
  return 0.5 * acc;
}

bool polygon_is_simple(const Polygon& poly) {
  const std::size_t n = poly.vertices.size();
  if (n < 3) return false;
  const auto edges = polygon_edges(poly);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;  // adjacent edges share a vertex
      if (segments_cross(edges[i].a, edges[i].b, edges[j].a, edges[j].b)) return false;
    }
  }
  return true;
}

bool point_in_polygon(const Polygon& poly, Point p) {
  bool inside = false;
  const std::size_t n = poly.vertices.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point a = poly.vertices[i];
    const Point b = poly.vertices[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double xint = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
      if (p.x < xint) inside = !inside;
    }
  }
  return inside;
}

Point polygon_interior_point(const Polygon& poly) {
  // Ear centroid: convex vertex whose triangle contains no other vertex.
  const std::size_t n = poly.vertices.size();
  const double orient = polygon_area(poly) > 0.0 ? 1.0 : -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = poly.vertices[(i + n - 1) % n];
    const Point b = poly.vertices[i];
    const Point c = poly.vertices[(i + 1) % n];
    if (orient * cross(b - a, c - b) <= kGeomEps) continue;
    bool ear = true;
    for (std::size_t j = 0; j < n && ear; ++j) {
      if (j == i || j == (i + n - 1) % n || j == (i + 1) % n) continue;
      const Point p = poly.vertices[j];
      const double s1 = orient * cross(b - a, p - a);
      const double s2 = orient * cross(c - b, p - b);
      const double s3 = orient * cross(a - c, p - c);
      if (s1 >= -kGeomEps && s2 >= -kGeomEps && s3 >= -kGeomEps) ear = false;
    }
    if (ear) return {(a.x + b.x + c.x) / 3.0, (a.y + b.y + c.y) / 3.0};
  }
  throw std::invalid_argument("polygon has no ear; not a simple polygon");
}

GeometrySpec two_domain_geometry(ModelKind top, ModelKind bottom) {
  GeometrySpec spec;
  spec.global = rectangle(0.0, -1.0, 1.0, 1.0);
  spec.subdomains = {rectangle(0.0, 0.0, 1.0, 1.0), rectangle(0.0, -1.0, 1.0, 0.0)};
  spec.models = {top, bottom};
  return spec;
}

GeometrySpec five_domain_geometry() {
  GeometrySpec spec;
  spec.global = rectangle(0.0, -1.0, 1.0, 1.0);
  // Richards on top, two-phase strip below with the inner box Omega_3.
  Polygon left_c{{{0.0, -1.0},
                  {0.5, -1.0},
                  {0.5, -0.75},
                  {0.25, -0.75},
                  {0.25, -0.25},
                  {0.5, -0.25},
                  {0.5, 0.0},
                  {0.0, 0.0}}};
  Polygon right_c{{{0.5, -1.0},
                   {1.0, -1.0},
                   {1.0, 0.0},
                   {0.5, 0.0},
                   {0.5, -0.25},
                   {0.75, -0.25},
                   {0.75, -0.75},
                   {0.5, -0.75}}};
  spec.subdomains = {rectangle(0.0, 0.0, 0.5, 1.0), left_c, rectangle(0.25, -0.75, 0.75, -0.25),
                     right_c, rectangle(0.5, 0.0, 1.0, 1.0)};
  spec.models = {ModelKind::Richards, ModelKind::TwoPhase, ModelKind::TwoPhase,
                 ModelKind::TwoPhase, ModelKind::Richards};
  return spec;
}

GeometrySpec unit_square_geometry(ModelKind model) {
  GeometrySpec spec;
  spec.global = rectangle(0.0, 0.0, 1.0, 1.0);
  spec.subdomains = {spec.global};
  spec.models = {model};
  return spec;
}

Partition build_partition(const GeometrySpec& spec) {
  const int w = static_cast<int>(spec.subdomains.size());
  if (w == 0) throw std::invalid_argument("partition needs at least one subdomain");
  if (spec.models.size() != spec.subdomains.size())
    throw std::invalid_argument("one model tag per subdomain required");
  if (!polygon_is_simple(spec.global) || polygon_area(spec.global) <= 0.0)
    throw std::invalid_argument("global polygon must be simple with positive area");

  double covered = 0.0;
  for (int l = 0; l < w; ++l) {
    const Polygon& poly = spec.subdomains[l];
    if (!polygon_is_simple(poly)) throw std::invalid_argument("subdomain polygon is not simple");
    const double area = polygon_area(poly);
    if (area <= kGeomEps) throw std::invalid_argument("subdomain with empty interior");
    covered += area;
    if (!point_in_polygon(spec.global, polygon_interior_point(poly)))
      throw std::invalid_argument("subdomain polygon lies outside the global polygon");
  }

  // Overlap: a proper edge crossing, or one subdomain's interior point
  // inside another. Shared boundary segments are fine.
  for (int l = 0; l < w; ++l) {
    for (int k = l + 1; k < w; ++k) {
      const auto el = polygon_edges(spec.subdomains[l]);
      const auto ek = polygon_edges(spec.subdomains[k]);
      for (const Segment& a : el)
        for (const Segment& b : ek)
          if (segments_cross(a.a, a.b, b.a, b.b))
            throw std::invalid_argument("overlapping subdomain polygons");
      if (point_in_polygon(spec.subdomains[k], polygon_interior_point(spec.subdomains[l])) ||
          point_in_polygon(spec.subdomains[l], polygon_interior_point(spec.subdomains[k])))
        throw std::invalid_argument("overlapping subdomain polygons");
    }
  }

  const double total = polygon_area(spec.global);
  if (std::abs(covered - total) > 1e-12 * std::abs(total))
    throw std::invalid_argument("subdomain polygons do not cover the global polygon");

  Partition part;
  part.global = spec.global;
  part.subdomains = spec.subdomains;
  part.models = spec.models;
  part.neighbors.assign(w, {});
  for (int l = 0; l < w; ++l) {
    for (int k = l + 1; k < w; ++k) {
      if (polygons_share_boundary(spec.subdomains[l], spec.subdomains[k])) {
        part.neighbors[l].push_back(k);
        part.neighbors[k].push_back(l);
      }
    }
    if (spec.models[l] == ModelKind::Richards)
      part.richards_ids.push_back(l);
    else
      part.twophase_ids.push_back(l);
  }
  for (auto& nbrs : part.neighbors) std::sort(nbrs.begin(), nbrs.end());
  return part;
}

namespace {

double circumdiameter(Point a, Point b, Point c) {
  const double la = std::hypot(b.x - c.x, b.y - c.y);
  const double lb = std::hypot(a.x - c.x, a.y - c.y);
  const double lc = std::hypot(a.x - b.x, a.y - b.y);
  const double area = 0.5 * std::abs(cross(b - a, c - a));
  return la * lb * lc / (2.0 * area);
}

std::vector<double> grid_axis(std::vector<double> breaks, int resolution) {
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end(),
                           [](double a, double b) { return std::abs(a - b) < kGeomEps; }),
               breaks.end());
  std::vector<double> axis;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double a = breaks[i];
    const double b = breaks[i + 1];
    const int n = std::max(1, static_cast<int>(std::ceil((b - a) * resolution - 1e-9)));
    for (int j = 0; j < n; ++j) axis.push_back(a + (b - a) * j / n);
  }
  axis.push_back(breaks.back());
  return axis;
}

bool point_on_polygon_boundary(const Polygon& poly, Point p) {
  const std::size_t n = poly.vertices.size();
  for (std::size_t i = 0; i < n; ++i)
    if (on_segment(poly.vertices[i], poly.vertices[(i + 1) % n], p, kGeomEps)) return true;
  return false;
}

}  // namespace

const Interface& MultiDomainMesh::interface_between(int l, int k) const {
  const int idx = interface_index[l][k];
  if (idx < 0) throw std::invalid_argument("subdomains do not share an interface");
  return interfaces[idx];
}

double MultiDomainMesh::max_h() const {
  double h = 0.0;
  for (const SubMesh& sm : submeshes) h = std::max(h, sm.h);
  return h;
}

MultiDomainMesh triangulate(const Partition& partition, int resolution) {
  if (resolution < 1) throw std::invalid_argument("resolution must be >= 1");
  const double target = 1.0 / resolution;

  std::vector<double> xb, yb;
  auto add_polygon = [&](const Polygon& poly) {
    const std::size_t n = poly.vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Point a = poly.vertices[i];
      const Point b = poly.vertices[(i + 1) % n];
      if (std::abs(a.x - b.x) > kGeomEps && std::abs(a.y - b.y) > kGeomEps)
        throw std::invalid_argument("structured mesher requires axis-parallel polygon edges");
      if (std::hypot(b.x - a.x, b.y - a.y) < target - kGeomEps)
        throw std::invalid_argument("polygon edge shorter than target edge length; refine resolution");
      xb.push_back(a.x);
      yb.push_back(a.y);
    }
  };
  add_polygon(partition.global);
  for (const Polygon& poly : partition.subdomains) add_polygon(poly);

  const std::vector<double> xs = grid_axis(xb, resolution);
  const std::vector<double> ys = grid_axis(yb, resolution);
  const int nx = static_cast<int>(xs.size());
  const int ny = static_cast<int>(ys.size());

  MultiDomainMesh mesh;
  mesh.partition = partition;
  mesh.target_edge_length = target;

  // Grid vertices; only the ones referenced by cells are kept.
  std::vector<int> vertex_id(static_cast<std::size_t>(nx) * ny, -1);
  auto grid_vertex = [&](int i, int j) -> int {
    int& id = vertex_id[static_cast<std::size_t>(j) * nx + i];
    if (id < 0) {
      id = static_cast<int>(mesh.vertices.size());
      mesh.vertices.push_back({xs[i], ys[j]});
    }
    return id;
  };

  auto subdomain_of = [&](Point p) {
    int found = -1;
    for (int l = 0; l < partition.count(); ++l) {
      if (point_in_polygon(partition.subdomains[l], p)) {
        if (found >= 0) throw std::invalid_argument("overlapping subdomain polygons");
        found = l;
      }
    }
    return found;
  };

  for (int j = 0; j + 1 < ny; ++j) {
    for (int i = 0; i + 1 < nx; ++i) {
      const Point center{0.5 * (xs[i] + xs[i + 1]), 0.5 * (ys[j] + ys[j + 1])};
      if (!point_in_polygon(partition.global, center)) continue;
      const int v00 = grid_vertex(i, j);
      const int v10 = grid_vertex(i + 1, j);
      const int v11 = grid_vertex(i + 1, j + 1);
      const int v01 = grid_vertex(i, j + 1);
      for (const std::array<int, 3>& cell :
           {std::array<int, 3>{v00, v10, v11}, std::array<int, 3>{v00, v11, v01}}) {
        const Point a = mesh.vertices[cell[0]];
        const Point b = mesh.vertices[cell[1]];
        const Point c = mesh.vertices[cell[2]];
        const Point centroid{(a.x + b.x + c.x) / 3.0, (a.y + b.y + c.y) / 3.0};
        const int l = subdomain_of(centroid);
        if (l < 0) throw std::invalid_argument("coverage gap: cell inside the global polygon belongs to no subdomain");
        mesh.cells.push_back(cell);
        mesh.cell_subdomain.push_back(l);
      }
    }
  }

  // Extract submeshes; local vertex order follows global vertex ids.
  const int w = partition.count();
  mesh.submeshes.resize(w);
  std::vector<std::map<int, int>> local_of(w);
  for (std::size_t c = 0; c < mesh.cells.size(); ++c) {
    const int l = mesh.cell_subdomain[c];
    for (int v : mesh.cells[c]) local_of[l].emplace(v, 0);
  }
  for (int l = 0; l < w; ++l) {
    SubMesh& sm = mesh.submeshes[l];
    int next = 0;
    for (auto& [global_id, local_id] : local_of[l]) {
      local_id = next++;
      sm.vertex_global.push_back(global_id);
      sm.vertex_coords.push_back(mesh.vertices[global_id]);
    }
  }
  for (std::size_t c = 0; c < mesh.cells.size(); ++c) {
    const int l = mesh.cell_subdomain[c];
    SubMesh& sm = mesh.submeshes[l];
    const auto& cell = mesh.cells[c];
    sm.cells.push_back({local_of[l].at(cell[0]), local_of[l].at(cell[1]), local_of[l].at(cell[2])});
    sm.cell_global.push_back(static_cast<int>(c));
    sm.h = std::max(sm.h, circumdiameter(mesh.vertices[cell[0]], mesh.vertices[cell[1]],
                                         mesh.vertices[cell[2]]));
  }
  for (int l = 0; l < w; ++l) {
    SubMesh& sm = mesh.submeshes[l];
    for (int d = 0; d < sm.dof_count(); ++d)
      if (point_on_polygon_boundary(partition.global, sm.vertex_coords[d]))
        sm.boundary_dofs.push_back(d);
  }

  // Interface facets: edges shared by cells of two different subdomains.
  struct EdgeUse {
    int cell = -1;
    int subdomain = -1;
  };
  std::map<std::pair<int, int>, std::vector<EdgeUse>> edge_uses;
  for (std::size_t c = 0; c < mesh.cells.size(); ++c) {
    const auto& cell = mesh.cells[c];
    for (int e = 0; e < 3; ++e) {
      int a = cell[e];
      int b = cell[(e + 1) % 3];
      if (a > b) std::swap(a, b);
      edge_uses[{a, b}].push_back({static_cast<int>(c), mesh.cell_subdomain[c]});
    }
  }

  std::map<std::pair<int, int>, std::vector<InterfaceFacet>> facet_groups;
  auto vertex_less = [&](int a, int b) {
    const Point pa = mesh.vertices[a];
    const Point pb = mesh.vertices[b];
    return pa.x != pb.x ? pa.x < pb.x : pa.y < pb.y;
  };
  std::vector<int> cell_local(mesh.cells.size(), -1);
  {
    std::vector<int> counts(w, 0);
    for (std::size_t c = 0; c < mesh.cells.size(); ++c)
      cell_local[c] = counts[mesh.cell_subdomain[c]]++;
  }
  for (const auto& [edge, uses] : edge_uses) {
    if (uses.size() != 2 || uses[0].subdomain == uses[1].subdomain) continue;
    const EdgeUse& ul = uses[0].subdomain < uses[1].subdomain ? uses[0] : uses[1];
    const EdgeUse& uk = uses[0].subdomain < uses[1].subdomain ? uses[1] : uses[0];
    InterfaceFacet facet;
    facet.va = edge.first;
    facet.vb = edge.second;
    if (!vertex_less(facet.va, facet.vb)) std::swap(facet.va, facet.vb);
    facet.cell_l = cell_local[ul.cell];
    facet.cell_k = cell_local[uk.cell];
    facet.dofs_l = {local_of[ul.subdomain].at(facet.va), local_of[ul.subdomain].at(facet.vb)};
    facet.dofs_k = {local_of[uk.subdomain].at(facet.va), local_of[uk.subdomain].at(facet.vb)};
    const Point pa = mesh.vertices[facet.va];
    const Point pb = mesh.vertices[facet.vb];
    facet.length = std::hypot(pb.x - pa.x, pb.y - pa.y);
    // Unit normal pointing away from the l-side cell.
    Point n{(pb.y - pa.y) / facet.length, -(pb.x - pa.x) / facet.length};
    const auto& lc = mesh.cells[ul.cell];
    const Point centroid{(mesh.vertices[lc[0]].x + mesh.vertices[lc[1]].x + mesh.vertices[lc[2]].x) / 3.0,
                         (mesh.vertices[lc[0]].y + mesh.vertices[lc[1]].y + mesh.vertices[lc[2]].y) / 3.0};
    const Point mid{0.5 * (pa.x + pb.x), 0.5 * (pa.y + pb.y)};
    if (dot(n, centroid - mid) > 0.0) n = {-n.x, -n.y};
    facet.normal = n;
    facet_groups[{ul.subdomain, uk.subdomain}].push_back(facet);
  }

  mesh.interface_index.assign(w, std::vector<int>(w, -1));
  for (auto& [pair, facets] : facet_groups) {
    std::sort(facets.begin(), facets.end(), [&](const InterfaceFacet& a, const InterfaceFacet& b) {
      const Point ma{0.5 * (mesh.vertices[a.va].x + mesh.vertices[a.vb].x),
                     0.5 * (mesh.vertices[a.va].y + mesh.vertices[a.vb].y)};
      const Point mb{0.5 * (mesh.vertices[b.va].x + mesh.vertices[b.vb].x),
                     0.5 * (mesh.vertices[b.va].y + mesh.vertices[b.vb].y)};
      return ma.x != mb.x ? ma.x < mb.x : ma.y < mb.y;
    });
    Interface iface;
    iface.l = pair.first;
    iface.k = pair.second;
    iface.facets = std::move(facets);
    mesh.interface_index[iface.l][iface.k] = static_cast<int>(mesh.interfaces.size());
    mesh.interface_index[iface.k][iface.l] = static_cast<int>(mesh.interfaces.size());
    mesh.interfaces.push_back(std::move(iface));
  }

  // The partition told us who the neighbors are; the mesh must agree.
  for (int l = 0; l < w; ++l)
    for (int k : partition.neighbors[l])
      if (mesh.interface_index[l][k] < 0)
        throw std::invalid_argument("partition neighbors lost during meshing");

  return mesh;
}

std::vector<TraceRecord> interface_trace_map(const MultiDomainMesh& mesh, int l, int k) {
  const auto& nbrs = mesh.partition.neighbors[l];
  if (std::find(nbrs.begin(), nbrs.end(), k) == nbrs.end())
    throw std::invalid_argument("subdomain k is not a neighbor of l");
  const Interface& iface = mesh.interface_between(l, k);
  const bool flip = iface.l != l;
  std::vector<TraceRecord> records;
  records.reserve(iface.facets.size());
  for (std::size_t f = 0; f < iface.facets.size(); ++f) {
    const InterfaceFacet& facet = iface.facets[f];
    TraceRecord rec;
    rec.facet = static_cast<int>(f);
    rec.dofs_l = flip ? facet.dofs_k : facet.dofs_l;
    rec.dofs_k = flip ? facet.dofs_l : facet.dofs_k;
    rec.normal = flip ? Point{-facet.normal.x, -facet.normal.y} : facet.normal;
    rec.length = facet.length;
    records.push_back(rec);
  }
  return records;
}

void dump_mesh(const MultiDomainMesh& mesh, std::ostream& out) {
  out << "vertices " << mesh.vertices.size() << "\n";
  for (const Point& p : mesh.vertices) out << p.x << " " << p.y << "\n";
  for (int l = 0; l < mesh.partition.count(); ++l) {
    const SubMesh& sm = mesh.submeshes[l];
    out << "subdomain " << (l + 1) << " " << to_string(mesh.partition.models[l]) << " cells "
        << sm.cells.size() << " h " << sm.h << "\n";
    for (std::size_t c = 0; c < sm.cells.size(); ++c)
      out << sm.vertex_global[sm.cells[c][0]] << " " << sm.vertex_global[sm.cells[c][1]] << " "
          << sm.vertex_global[sm.cells[c][2]] << "\n";
  }
  for (const Interface& iface : mesh.interfaces) {
    out << "interface " << (iface.l + 1) << " " << (iface.k + 1) << " facets "
        << iface.facets.size() << "\n";
    for (const InterfaceFacet& f : iface.facets)
      out << f.va << " " << f.vb << " normal " << f.normal.x << " " << f.normal.y << "\n";
  }
}

}  // namespace ldd

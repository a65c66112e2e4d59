#include "ldd/fem.hpp"

#include <cmath>
#include <stdexcept>

namespace ldd {

namespace {

struct CellGeometry {
  std::array<Point, 3> coords;
  std::array<Point, 3> grad;  // constant P1 shape gradients
  double area = 0.0;
};

CellGeometry cell_geometry(const SubMesh& sm, int cell) {
  CellGeometry g;
  const auto& c = sm.cells[cell];
  for (int i = 0; i < 3; ++i) g.coords[i] = sm.vertex_coords[c[i]];
  const Point a = g.coords[0], b = g.coords[1], d = g.coords[2];
  const double det = cross(b - a, d - a);
  g.area = 0.5 * std::abs(det);
  // grad phi_i = rot90(opposite edge) / det
  g.grad[0] = {(b.y - d.y) / det, (d.x - b.x) / det};
  g.grad[1] = {(d.y - a.y) / det, (a.x - d.x) / det};
  g.grad[2] = {(a.y - b.y) / det, (b.x - a.x) / det};
  return g;
}

double field_at(const std::array<double, 3>& nodal, const std::array<double, 3>& bary) {
  return nodal[0] * bary[0] + nodal[1] * bary[1] + nodal[2] * bary[2];
}

Point point_at(const CellGeometry& g, const std::array<double, 3>& bary) {
  return {g.coords[0].x * bary[0] + g.coords[1].x * bary[1] + g.coords[2].x * bary[2],
          g.coords[0].y * bary[0] + g.coords[1].y * bary[1] + g.coords[2].y * bary[2]};
}

}  // namespace

const TriangleQuadrature& triangle_quadrature(int degree) {
  static const TriangleQuadrature deg1{{{1.0 / 3, 1.0 / 3, 1.0 / 3}}, {1.0}};
  static const TriangleQuadrature deg2{
      {{2.0 / 3, 1.0 / 6, 1.0 / 6}, {1.0 / 6, 2.0 / 3, 1.0 / 6}, {1.0 / 6, 1.0 / 6, 2.0 / 3}},
      {1.0 / 3, 1.0 / 3, 1.0 / 3}};
  static const TriangleQuadrature deg4 = [] {
    TriangleQuadrature q;
    const double a1 = 0.108103018168070, b1 = 0.445948490915965, w1 = 0.223381589678011;
    const double a2 = 0.816847572980459, b2 = 0.091576213509771, w2 = 0.109951743655322;
    for (const auto& [a, b, w] : {std::array<double, 3>{a1, b1, w1}, std::array<double, 3>{a2, b2, w2}}) {
      q.points.push_back({a, b, b});
      q.points.push_back({b, a, b});
      q.points.push_back({b, b, a});
      q.weights.insert(q.weights.end(), 3, w);
    }
    return q;
  }();
  static const TriangleQuadrature deg6 = [] {
    TriangleQuadrature q;
    const double a1 = 0.501426509658179, b1 = 0.249286745170910, w1 = 0.116786275726379;
    const double a2 = 0.873821971016996, b2 = 0.063089014491502, w2 = 0.050844906370207;
    for (const auto& [a, b, w] : {std::array<double, 3>{a1, b1, w1}, std::array<double, 3>{a2, b2, w2}}) {
      q.points.push_back({a, b, b});
      q.points.push_back({b, a, b});
      q.points.push_back({b, b, a});
      q.weights.insert(q.weights.end(), 3, w);
    }
    const double c1 = 0.053145049844817, c2 = 0.310352451033784, c3 = 0.636502499121399;
    const double w3 = 0.082851075618374;
    const std::array<std::array<double, 3>, 6> perms{{{c1, c2, c3},
                                                      {c1, c3, c2},
                                                      {c2, c1, c3},
                                                      {c2, c3, c1},
                                                      {c3, c1, c2},
                                                      {c3, c2, c1}}};
    for (const auto& p : perms) {
      q.points.push_back(p);
      q.weights.push_back(w3);
    }
    return q;
  }();
  switch (degree) {
    case 1:
      return deg1;
    case 2:
      return deg2;
    case 4:
      return deg4;
    case 6:
      return deg6;
    default:
      throw std::invalid_argument("unsupported quadrature degree");
  }
}

P1Field interpolate(const MultiDomainMesh& mesh, int subdomain,
                    const std::function<double(double, double)>& f) {
  const SubMesh& sm = mesh.submeshes[subdomain];
  P1Field field;
  field.subdomain = subdomain;
  field.values.reserve(sm.dof_count());
  for (const Point& p : sm.vertex_coords) field.values.push_back(f(p.x, p.y));
  return field;
}

ProjectedTrace project_trace(const MultiDomainMesh& mesh, const TraceFieldDG1& g) {
  const Interface& iface = mesh.interface_between(g.l, g.k);
  if (g.facet_values.size() != iface.facets.size())
    throw std::invalid_argument("trace field does not match interface facet count");
  std::map<int, std::pair<double, int>> vertex_acc;  // global vertex -> (sum, count)
  for (std::size_t f = 0; f < iface.facets.size(); ++f) {
    vertex_acc[iface.facets[f].va].first += g.facet_values[f][0];
    vertex_acc[iface.facets[f].va].second += 1;
    vertex_acc[iface.facets[f].vb].first += g.facet_values[f][1];
    vertex_acc[iface.facets[f].vb].second += 1;
  }
  ProjectedTrace out;
  out.facet_values.resize(iface.facets.size());
  for (std::size_t f = 0; f < iface.facets.size(); ++f) {
    const auto& a = vertex_acc.at(iface.facets[f].va);
    const auto& b = vertex_acc.at(iface.facets[f].vb);
    out.facet_values[f] = {a.first / a.second, b.first / b.second};
  }
  return out;
}

void apply_dirichlet(AssembledSystem& system) {
  const int n = system.matrix.rows();
  std::vector<double> constrained(n, 0.0);
  std::vector<bool> is_constrained(n, false);
  for (const auto& [dof, value] : system.dirichlet) {
    constrained[dof] = value;
    is_constrained[dof] = true;
  }
  // rhs -= A * x_constrained on free rows, then zero rows/cols.
  std::vector<double> ax(n, 0.0);
  system.matrix.multiply(constrained, ax);
  for (int r = 0; r < n; ++r)
    if (!is_constrained[r]) system.rhs[r] -= ax[r];
  for (int d = 0; d < n; ++d)
    if (is_constrained[d]) {
      system.matrix.eliminate_symmetric(d);
      system.rhs[d] = constrained[d];
    }
}

AssembledSystem assemble_subdomain_system(
    const MultiDomainMesh& mesh, const SubdomainEquation& eq, const P1Field& pw_prev_iter,
    const P1Field* pnw_prev_iter, const P1Field& pw_prev_time, const P1Field* pnw_prev_time,
    const std::map<int, const TraceFieldDG1*>& g_terms, const MaterialParams& params,
    const ConstitutiveCurves& curves, const std::function<double(double, double)>& source,
    const std::function<double(double, double)>* dirichlet_values) {
  const int l = eq.subdomain;
  const SubMesh& sm = mesh.submeshes[l];
  const bool richards = mesh.partition.is_richards(l);
  if (eq.phase == Phase::Nonwetting && richards)
    throw std::invalid_argument("no nonwetting equation on a Richards subdomain");
  if (!richards && (pnw_prev_iter == nullptr || pnw_prev_time == nullptr))
    throw std::invalid_argument("two-phase subdomain needs nonwetting fields");

  const TriangleQuadrature& quad = triangle_quadrature(eq.quadrature_degree);
  const int n = sm.dof_count();
  std::vector<Triplet> triplets;
  triplets.reserve(sm.cells.size() * 9 + 64);
  std::vector<double> rhs(n, 0.0);

  const double time_sign = eq.phase == Phase::Wetting ? -1.0 : 1.0;
  const Point grad_z{0.0, eq.gravity_on ? params.density(eq.phase) * params.gravity : 0.0};

  for (std::size_t cell = 0; cell < sm.cells.size(); ++cell) {
    const CellGeometry geom = cell_geometry(sm, cell);
    const auto& dofs = sm.cells[cell];
    std::array<double, 3> pw_i{}, pnw_i{}, pw_t{}, pnw_t{}, p_self_i{};
    for (int i = 0; i < 3; ++i) {
      pw_i[i] = pw_prev_iter.values[dofs[i]];
      pw_t[i] = pw_prev_time.values[dofs[i]];
      if (!richards) {
        pnw_i[i] = pnw_prev_iter->values[dofs[i]];
        pnw_t[i] = pnw_prev_time->values[dofs[i]];
      }
      p_self_i[i] = eq.phase == Phase::Wetting ? pw_i[i] : pnw_i[i];
    }

    std::array<std::array<double, 3>, 3> local{};
    std::array<double, 3> local_rhs{};
    for (std::size_t qp = 0; qp < quad.points.size(); ++qp) {
      const auto& bary = quad.points[qp];
      const double wq = quad.weights[qp] * geom.area;
      const Point x = point_at(geom, bary);

      // Coefficients composed from the interpolated pressures.
      const double pc_iter = (richards ? 0.0 : field_at(pnw_i, bary)) - field_at(pw_i, bary);
      const double pc_time = (richards ? 0.0 : field_at(pnw_t, bary)) - field_at(pw_t, bary);
      const double s_iter = saturation(curves, pc_iter);
      const double s_time = saturation(curves, pc_time);
      const double k_mob = mobility(params, curves, eq.phase, s_iter);

      for (int i = 0; i < 3; ++i) {
        const double phi_i = bary[i];
        for (int j = 0; j < 3; ++j)
          local[i][j] += wq * (eq.l_scheme_weight * phi_i * bary[j] +
                               eq.tau * k_mob * dot(geom.grad[i], geom.grad[j]));
        local_rhs[i] += wq * (eq.l_scheme_weight * field_at(p_self_i, bary) * phi_i +
                              time_sign * params.porosity * (s_iter - s_time) * phi_i +
                              eq.tau * source(x.x, x.y) * phi_i -
                              eq.tau * k_mob * dot(grad_z, geom.grad[i]));
      }
    }
    for (int i = 0; i < 3; ++i) {
      rhs[dofs[i]] += local_rhs[i];
      for (int j = 0; j < 3; ++j) triplets.push_back({dofs[i], dofs[j], local[i][j]});
    }
  }

  // Robin terms: tau lambda <p, phi> on the LHS and the projected g-term
  // on the RHS, facet-wise 1D P1 mass.
  for (const auto& [k, lambda] : eq.lambda) {
    const auto trace = interface_trace_map(mesh, l, k);
    const auto it = g_terms.find(k);
    if (it == g_terms.end() || it->second == nullptr)
      throw std::invalid_argument("missing g-term buffer for neighbor");
    const ProjectedTrace projected = project_trace(mesh, *it->second);
    for (const TraceRecord& rec : trace) {
      const double mass = eq.tau * lambda * rec.length / 6.0;
      const int a = rec.dofs_l[0];
      const int b = rec.dofs_l[1];
      triplets.push_back({a, a, 2.0 * mass});
      triplets.push_back({a, b, mass});
      triplets.push_back({b, a, mass});
      triplets.push_back({b, b, 2.0 * mass});
      const double ga = projected.facet_values[rec.facet][0];
      const double gb = projected.facet_values[rec.facet][1];
      rhs[a] -= eq.tau * rec.length / 6.0 * (2.0 * ga + gb);
      rhs[b] -= eq.tau * rec.length / 6.0 * (ga + 2.0 * gb);
    }
  }

  AssembledSystem system;
  system.matrix = SparseMatrix::from_triplets(n, n, std::move(triplets));
  system.rhs = std::move(rhs);
  if (dirichlet_values) {
    for (int d : sm.boundary_dofs) {
      const Point p = sm.vertex_coords[d];
      system.dirichlet.emplace_back(d, (*dirichlet_values)(p.x, p.y));
    }
  }
  return system;
}

TraceFieldDG1 reconstruct_interface_flux(const MultiDomainMesh& mesh, int l, int k, Phase phase,
                                         const P1Field& pw, const P1Field* pnw,
                                         const MaterialParams& params,
                                         const ConstitutiveCurves& curves, bool gravity_on) {
  const bool richards = mesh.partition.is_richards(l);
  if (phase == Phase::Nonwetting && richards)
    throw std::invalid_argument("use richards_nonwetting_interface_flux on Richards subdomains");
  if (!richards && pnw == nullptr)
    throw std::invalid_argument("two-phase subdomain needs the nonwetting field");
  const SubMesh& sm = mesh.submeshes[l];
  const auto trace = interface_trace_map(mesh, l, k);
  const P1Field& p_self = phase == Phase::Wetting ? pw : *pnw;
  const Interface& iface = mesh.interface_between(l, k);
  const bool flip = iface.l != l;

  TraceFieldDG1 out;
  out.l = l;
  out.k = k;
  out.phase = phase;
  out.facet_values.resize(trace.size());
  const Point grad_z{0.0, gravity_on ? params.density(phase) * params.gravity : 0.0};
  for (const TraceRecord& rec : trace) {
    const InterfaceFacet& facet = iface.facets[rec.facet];
    const int cell = flip ? facet.cell_k : facet.cell_l;
    if (cell < 0) throw std::invalid_argument("interface facet without an adjacent cell");
    const CellGeometry geom = cell_geometry(sm, cell);
    const auto& dofs = sm.cells[cell];
    Point grad_p{0.0, 0.0};
    for (int i = 0; i < 3; ++i) {
      grad_p.x += p_self.values[dofs[i]] * geom.grad[i].x;
      grad_p.y += p_self.values[dofs[i]] * geom.grad[i].y;
    }
    for (int e = 0; e < 2; ++e) {
      const int dof = rec.dofs_l[e];
      const double pc = (richards ? 0.0 : (*pnw).values[dof]) - pw.values[dof];
      const double s = saturation(curves, pc);
      const double k_mob = mobility(params, curves, phase, s);
      out.facet_values[rec.facet][e] =
          -k_mob * (dot(grad_p, rec.normal) + dot(grad_z, rec.normal));
    }
  }
  return out;
}

TraceFieldDG1 richards_nonwetting_interface_flux(const MultiDomainMesh& mesh, int l, int k,
                                                 const P1Field& pw, const MaterialParams& params,
                                                 const ConstitutiveCurves& curves,
                                                 GravityCoupling coupling, bool gravity_on) {
  const auto trace = interface_trace_map(mesh, l, k);
  TraceFieldDG1 out;
  out.l = l;
  out.k = k;
  out.phase = Phase::Nonwetting;
  out.facet_values.assign(trace.size(), {0.0, 0.0});
  if (coupling == GravityCoupling::ZeroFlux || !gravity_on) return out;
  const Point grad_z{0.0, params.rho_nw * params.gravity};
  for (const TraceRecord& rec : trace) {
    for (int e = 0; e < 2; ++e) {
      const int dof = rec.dofs_l[e];
      const double s = saturation(curves, -pw.values[dof]);
      const double k_mob = mobility(params, curves, Phase::Nonwetting, s);
      out.facet_values[rec.facet][e] = k_mob * dot(grad_z, rec.normal);
    }
  }
  return out;
}

namespace {

double l2_squared(const MultiDomainMesh& mesh, int subdomain,
                  const std::function<double(const CellGeometry&, const std::array<int, 3>&,
                                             const std::array<double, 3>&)>& value_at) {
  const SubMesh& sm = mesh.submeshes[subdomain];
  const TriangleQuadrature& quad = triangle_quadrature(4);
  double acc = 0.0;
  for (std::size_t cell = 0; cell < sm.cells.size(); ++cell) {
    const CellGeometry geom = cell_geometry(sm, cell);
    const auto& dofs = sm.cells[cell];
    for (std::size_t qp = 0; qp < quad.points.size(); ++qp) {
      const double v = value_at(geom, dofs, quad.points[qp]);
      acc += quad.weights[qp] * geom.area * v * v;
    }
  }
  return acc;
}

}  // namespace

double l2_norm(const MultiDomainMesh& mesh, const P1Field& field) {
  return std::sqrt(l2_squared(
      mesh, field.subdomain,
      [&](const CellGeometry&, const std::array<int, 3>& dofs, const std::array<double, 3>& bary) {
        return field.values[dofs[0]] * bary[0] + field.values[dofs[1]] * bary[1] +
               field.values[dofs[2]] * bary[2];
      }));
}

double l2_error(const MultiDomainMesh& mesh, const P1Field& field,
                const std::function<double(double, double)>& exact) {
  return std::sqrt(l2_squared(
      mesh, field.subdomain,
      [&](const CellGeometry& geom, const std::array<int, 3>& dofs,
          const std::array<double, 3>& bary) {
        const Point x = point_at(geom, bary);
        const double fv = field.values[dofs[0]] * bary[0] + field.values[dofs[1]] * bary[1] +
                          field.values[dofs[2]] * bary[2];
        return exact(x.x, x.y) - fv;
      }));
}

double l2_diff(const MultiDomainMesh& mesh, const P1Field& a, const P1Field& b) {
  if (a.subdomain != b.subdomain || a.values.size() != b.values.size())
    throw std::invalid_argument("field mismatch in l2_diff");
  return std::sqrt(l2_squared(
      mesh, a.subdomain,
      [&](const CellGeometry&, const std::array<int, 3>& dofs, const std::array<double, 3>& bary) {
        double v = 0.0;
        for (int i = 0; i < 3; ++i) v += (a.values[dofs[i]] - b.values[dofs[i]]) * bary[i];
        return v;
      }));
}

namespace {

double segment_l2_squared(double len, double va, double vb) {
  // exact for linear endpoint values
  return len / 3.0 * (va * va + va * vb + vb * vb);
}

}  // namespace

double interface_jump_norm(const MultiDomainMesh& mesh, int l, int k, const P1Field& field_l,
                           const P1Field& field_k) {
  const auto trace = interface_trace_map(mesh, l, k);
  double acc = 0.0;
  for (const TraceRecord& rec : trace) {
    const double da = field_l.values[rec.dofs_l[0]] - field_k.values[rec.dofs_k[0]];
    const double db = field_l.values[rec.dofs_l[1]] - field_k.values[rec.dofs_k[1]];
    acc += segment_l2_squared(rec.length, da, db);
  }
  return std::sqrt(acc);
}

double interface_trace_norm(const MultiDomainMesh& mesh, int l, int k, const P1Field& field_l) {
  const auto trace = interface_trace_map(mesh, l, k);
  double acc = 0.0;
  for (const TraceRecord& rec : trace) {
    acc += segment_l2_squared(rec.length, field_l.values[rec.dofs_l[0]],
                              field_l.values[rec.dofs_l[1]]);
  }
  return std::sqrt(acc);
}

}  // namespace ldd

#pragma once

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "ldd/constitutive.hpp"
#include "ldd/geometry.hpp"
#include "ldd/linalg.hpp"

namespace ldd {

/// Nodal P1 field on one subdomain submesh, one dof per vertex.
struct P1Field {
  int subdomain = -1;
  std::vector<double> values;
};

P1Field interpolate(const MultiDomainMesh& mesh, int subdomain,
                    const std::function<double(double, double)>& f);

/// Per-facet endpoint values of a DG1 quantity on the interface between
/// the owner l and neighbor k (facets in global interface order, two
/// dofs per facet at the lexicographically ordered endpoints).
struct TraceFieldDG1 {
  int l = -1, k = -1;
  Phase phase = Phase::Wetting;
  std::vector<std::array<double, 2>> facet_values;
};

/// Continuous (P1) trace after nodal averaging at shared interface
/// vertices; same facet/endpoint layout as the DG1 field.
struct ProjectedTrace {
  std::vector<std::array<double, 2>> facet_values;
};

/// Mean of all incident facet-endpoint dofs at each interface vertex.
ProjectedTrace project_trace(const MultiDomainMesh& mesh, const TraceFieldDG1& g);

struct AssembledSystem {
  SparseMatrix matrix;  // symmetric before constraints
  std::vector<double> rhs;
  std::vector<std::pair<int, double>> dirichlet;  // (dof, value)
};

/// Row/column elimination with symmetric RHS correction.
void apply_dirichlet(AssembledSystem& system);

enum class GravityCoupling { IncludeGravityFlux, ZeroFlux };  // the two nonwetting couplings

struct SubdomainEquation {
  int subdomain = -1;
  Phase phase = Phase::Wetting;
  double l_scheme_weight = 0.0;  // L_{alpha,l}
  double tau = 0.0;
  std::map<int, double> lambda;  // Robin weight per neighbor id
  bool gravity_on = false;
  int quadrature_degree = 4;
};

/// Assembles one per-iteration subdomain system: LHS
///   L <p, phi> + tau <k^{i-1} grad p, grad phi>
///   + tau sum_k lambda^{lk} <p, phi>_{Gamma_lk}
/// and the matching right hand side with the lagged saturation term, the
/// source, the gravity gradient contribution and the projected g-terms.
/// `pnw_prev_iter` / `pnw_prev_time` are null on Richards subdomains.
AssembledSystem assemble_subdomain_system(
    const MultiDomainMesh& mesh, const SubdomainEquation& eq, const P1Field& pw_prev_iter,
    const P1Field* pnw_prev_iter, const P1Field& pw_prev_time, const P1Field* pnw_prev_time,
    const std::map<int, const TraceFieldDG1*>& g_terms, const MaterialParams& params,
    const ConstitutiveCurves& curves, const std::function<double(double, double)>& source,
    const std::function<double(double, double)>* dirichlet_values);

/// One-sided interface flux in DG1: per facet endpoint,
///   -k_mob(S at the endpoint) * (grad p|cell + grad z_alpha) . n_lk
/// with the cell gradient taken from the subdomain whose flux is
/// reconstructed.
TraceFieldDG1 reconstruct_interface_flux(const MultiDomainMesh& mesh, int l, int k, Phase phase,
                                         const P1Field& pw, const P1Field* pnw,
                                         const MaterialParams& params,
                                         const ConstitutiveCurves& curves, bool gravity_on);

/// Richards-side nonwetting interface flux toward a two-phase neighbor:
/// +k_mob_nw(S) grad z_nw . n_lk when the gravity flux coupling is
/// selected (and gravity is on), zero otherwise.
TraceFieldDG1 richards_nonwetting_interface_flux(const MultiDomainMesh& mesh, int l, int k,
                                                 const P1Field& pw, const MaterialParams& params,
                                                 const ConstitutiveCurves& curves,
                                                 GravityCoupling coupling, bool gravity_on);

/// L2(Omega_l) norms with a quadrature rule exact for degree >= 4.
double l2_norm(const MultiDomainMesh& mesh, const P1Field& field);
double l2_error(const MultiDomainMesh& mesh, const P1Field& field,
                const std::function<double(double, double)>& exact);
double l2_diff(const MultiDomainMesh& mesh, const P1Field& a, const P1Field& b);

/// L2(Gamma_lk) norm of the difference of the two traces of a P1 field
/// pair across an interface (facet-wise exact for linears).
double interface_jump_norm(const MultiDomainMesh& mesh, int l, int k, const P1Field& field_l,
                           const P1Field& field_k);
/// L2(Gamma_lk) norm of one side's trace.
double interface_trace_norm(const MultiDomainMesh& mesh, int l, int k, const P1Field& field_l);

/// Triangle quadrature, exact for polynomials of the given degree
/// (supported: 1, 2, 4, 6). Barycentric points with weights summing to 1.
struct TriangleQuadrature {
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;
};
const TriangleQuadrature& triangle_quadrature(int degree);

}  // namespace ldd

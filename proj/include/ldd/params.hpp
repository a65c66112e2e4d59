#pragma once

#include <array>
#include <map>
#include <vector>

#include "ldd/fem.hpp"
#include "ldd/linalg.hpp"

namespace ldd {

enum class StoppingNorm { L2, DofEuclidean };
enum class LinearMethod { GmresIlu, Cg };

/// All knobs of the LDD-TP-R iteration: L-scheme weights, Robin weights,
/// time step, stopping tolerance and linear solver settings.
struct SolverParams {
  double tau = 1e-3;
  int steps = 100;
  double eps_stop = 2e-6;
  int max_ldd_iters = 1000;

  /// L_{alpha,l} per subdomain, [wetting, nonwetting]; the nonwetting
  /// entry is ignored on Richards subdomains.
  std::vector<std::array<double, 2>> l_weights;

  double lambda_w = 0.75;
  double lambda_nw = 0.75;
  /// Per-interface overrides keyed by the unordered pair (min, max);
  /// values are [wetting, nonwetting]. Symmetry is by construction.
  std::map<std::pair<int, int>, std::array<double, 2>> lambda_override;

  bool gravity_on = false;
  GravityCoupling coupling = GravityCoupling::IncludeGravityFlux;
  StoppingNorm stopping_norm = StoppingNorm::L2;
  LinearMethod linear_method = LinearMethod::GmresIlu;
  LinearSolveOptions linear;
  int quadrature_degree = 4;

  /// User estimate of sup |grad(p + z)| for the time step conditions.
  double m_estimate = 10.0;

  int threads = 0;  // 0: one thread per subdomain-phase equation
  bool record_subsequent = false;
  std::vector<int> solve_order;  // optional equation permutation (diagnostics)

  double lambda(Phase phase, int l, int k) const;
  double l_weight(Phase phase, int l) const;
  void validate(const std::vector<bool>& subdomain_is_richards) const;
};

}  // namespace ldd

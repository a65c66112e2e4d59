#pragma once

#include <cstdint>
#include <functional>
#include <string>

namespace ldd {

enum class Phase { Wetting, Nonwetting };

std::string to_string(Phase phase);

struct MaterialParams {
  double porosity = 0.2;        // Phi_l in (0,1)
  double permeability = 0.01;   // isotropic k_{i,l}
  double mu_w = 1.0;            // viscosity per phase
  double mu_nw = 0.02;
  double rho_w = 997.0;         // density per phase
  double rho_nw = 1.225;
  double gravity = 9.81;        // magnitude g >= 0

  double viscosity(Phase phase) const { return phase == Phase::Wetting ? mu_w : mu_nw; }
  double density(Phase phase) const { return phase == Phase::Wetting ? rho_w : rho_nw; }

  void validate() const;  // throws std::invalid_argument
};

/// Relative permeabilities as functions of the wetting saturation and
/// the saturation-capillary pressure relation, with analytic derivative
/// handles and declared Lipschitz/positivity constants.
struct ConstitutiveCurves {
  std::string family;
  std::function<double(double)> rel_perm_w;       // increasing on [0,1]
  std::function<double(double)> rel_perm_nw;      // decreasing on [0,1]
  std::function<double(double)> drel_perm_w_ds;
  std::function<double(double)> drel_perm_nw_ds;
  std::function<double(double)> saturation_of_pc;  // total, values in (0,1]
  std::function<double(double)> dsaturation_dpc;
  std::function<double(double)> pc_of_saturation;  // analytic inverse for pc >= 0

  // Declared constants on the evaluation range (relative permeabilities
  // and S; mobility constants scale with k_i / mu).
  double lipschitz_S = 0.0;
  double lipschitz_kw = 0.0;
  double lipschitz_knw = 0.0;
};

/// Table-style power law: k_w = s^q, k_nw = (1-s)^q and
/// S(p_c) = (1+p_c)^(-1/q) for p_c >= 0, S = 1 otherwise.
ConstitutiveCurves power_law_curves(int exponent);

/// Unit mobilities with constant saturation 1/2; diagnostics only.
ConstitutiveCurves unit_curves();

/// S(p_c); total function with values in (0,1].
double saturation(const ConstitutiveCurves& curves, double pc);

/// Phase mobility k_{i,l} k_alpha(s) / mu_alpha. Saturations outside
/// [0,1] are clamped and counted (see clamp_count).
double mobility(const MaterialParams& params, const ConstitutiveCurves& curves, Phase phase,
                double s);
double mobility_derivative_ds(const MaterialParams& params, const ConstitutiveCurves& curves,
                              Phase phase, double s);

/// Number of saturation clamps since the last reset.
std::uint64_t clamp_count();
void reset_clamp_count();

struct ConstantsReport {
  double L_S = 0.0;      // max |dS/dpc| sampled over the pc range of [s_min, s_max]
  double L_kw = 0.0;     // max mobility slope, wetting
  double L_knw = 0.0;    // max mobility slope, nonwetting
  double m_floor = 0.0;  // min mobility over range and phases
};

/// Dense-grid sampled constants (>= 10^4 points).
ConstantsReport constants_report(const MaterialParams& params, const ConstitutiveCurves& curves,
                                 double s_min, double s_max);

}  // namespace ldd

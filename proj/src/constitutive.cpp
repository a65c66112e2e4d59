#include "ldd/constitutive.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ldd {

namespace {

std::atomic<std::uint64_t> g_clamp_count{0};

}  // namespace

std::string to_string(Phase phase) { return phase == Phase::Wetting ? "w" : "nw"; }

void MaterialParams::validate() const {
  if (!(porosity > 0.0 && porosity < 1.0)) throw std::invalid_argument("porosity must be in (0,1)");
  if (!(permeability > 0.0)) throw std::invalid_argument("permeability must be positive");
  if (!(mu_w > 0.0 && mu_nw > 0.0)) throw std::invalid_argument("viscosities must be positive");
  if (!(rho_w > 0.0 && rho_nw > 0.0)) throw std::invalid_argument("densities must be positive");
  if (!(gravity >= 0.0)) throw std::invalid_argument("gravity must be nonnegative");
}

ConstitutiveCurves power_law_curves(int exponent) {
  if (exponent < 1) throw std::invalid_argument("power law exponent must be >= 1");
  const double q = exponent;
  ConstitutiveCurves c;
  c.family = "power" + std::to_string(exponent);
  c.rel_perm_w = [q](double s) { return std::pow(s, q); };
  c.rel_perm_nw = [q](double s) { return std::pow(1.0 - s, q); };
  c.drel_perm_w_ds = [q](double s) { return q * std::pow(s, q - 1.0); };
  c.drel_perm_nw_ds = [q](double s) { return -q * std::pow(1.0 - s, q - 1.0); };
  c.saturation_of_pc = [q](double pc) { return pc < 0.0 ? 1.0 : std::pow(1.0 + pc, -1.0 / q); };
  c.dsaturation_dpc = [q](double pc) {
    return pc < 0.0 ? 0.0 : -(1.0 / q) * std::pow(1.0 + pc, -1.0 / q - 1.0);
  };
  c.pc_of_saturation = [q](double s) { return std::pow(s, -q) - 1.0; };
  c.lipschitz_S = 1.0 / q;
  c.lipschitz_kw = q;
  c.lipschitz_knw = q;
  return c;
}

ConstitutiveCurves unit_curves() {
  ConstitutiveCurves c;
  c.family = "unit";
  c.rel_perm_w = [](double) { return 1.0; };
  c.rel_perm_nw = [](double) { return 1.0; };
  c.drel_perm_w_ds = [](double) { return 0.0; };
  c.drel_perm_nw_ds = [](double) { return 0.0; };
  c.saturation_of_pc = [](double) { return 0.5; };
  c.dsaturation_dpc = [](double) { return 0.0; };
  c.pc_of_saturation = [](double) { return 0.0; };
  return c;
}

double saturation(const ConstitutiveCurves& curves, double pc) {
  return curves.saturation_of_pc(pc);
}

namespace {

double clamp_saturation(double s) {
  if (s < 0.0 || s > 1.0) {
    g_clamp_count.fetch_add(1, std::memory_order_relaxed);
    return std::clamp(s, 0.0, 1.0);
  }
  return s;
}

}  // namespace

double mobility(const MaterialParams& params, const ConstitutiveCurves& curves, Phase phase,
                double s) {
  s = clamp_saturation(s);
  const double rel =
      phase == Phase::Wetting ? curves.rel_perm_w(s) : curves.rel_perm_nw(s);
  return params.permeability * rel / params.viscosity(phase);
}

double mobility_derivative_ds(const MaterialParams& params, const ConstitutiveCurves& curves,
                              Phase phase, double s) {
  s = clamp_saturation(s);
  const double drel =
      phase == Phase::Wetting ? curves.drel_perm_w_ds(s) : curves.drel_perm_nw_ds(s);
  return params.permeability * drel / params.viscosity(phase);
}

std::uint64_t clamp_count() { return g_clamp_count.load(std::memory_order_relaxed); }
void reset_clamp_count() { g_clamp_count.store(0, std::memory_order_relaxed); }

ConstantsReport constants_report(const MaterialParams& params, const ConstitutiveCurves& curves,
                                 double s_min, double s_max) {
  if (!(0.0 <= s_min && s_min < s_max && s_max <= 1.0))
    throw std::invalid_argument("invalid saturation range");
  constexpr int kSamples = 20000;
  ConstantsReport report;
  report.m_floor = std::numeric_limits<double>::max();

  double prev_w = 0.0, prev_nw = 0.0, prev_s = 0.0;
  for (int i = 0; i <= kSamples; ++i) {
    const double s = s_min + (s_max - s_min) * i / kSamples;
    const double mw = mobility(params, curves, Phase::Wetting, s);
    const double mnw = mobility(params, curves, Phase::Nonwetting, s);
    report.m_floor = std::min({report.m_floor, mw, mnw});
    if (i > 0) {
      const double ds = s - prev_s;
      report.L_kw = std::max(report.L_kw, std::abs(mw - prev_w) / ds);
      report.L_knw = std::max(report.L_knw, std::abs(mnw - prev_nw) / ds);
    }
    prev_w = mw;
    prev_nw = mnw;
    prev_s = s;
  }

  // The pc range corresponding to [s_min, s_max]; |dS/dpc| peaks at the
  // low-pc end for the power law so sampling a capped range is enough.
  const double pc_lo = std::max(0.0, curves.pc_of_saturation(std::min(1.0, s_max)));
  double pc_hi = s_min > 0.0 ? curves.pc_of_saturation(s_min) : 0.0;
  if (!(pc_hi > pc_lo) || !std::isfinite(pc_hi)) pc_hi = pc_lo + 100.0;
  pc_hi = std::min(pc_hi, pc_lo + 1e6);
  double prev_sat = saturation(curves, pc_lo);
  for (int i = 1; i <= kSamples; ++i) {
    const double pc = pc_lo + (pc_hi - pc_lo) * i / kSamples;
    const double sat = saturation(curves, pc);
    report.L_S = std::max(report.L_S, std::abs(sat - prev_sat) / ((pc_hi - pc_lo) / kSamples));
    prev_sat = sat;
  }
  // Sharpen with the analytic slope at the range ends when available.
  if (curves.dsaturation_dpc) {
    report.L_S = std::max(report.L_S, std::abs(curves.dsaturation_dpc(pc_lo)));
    report.L_S = std::max(report.L_S, std::abs(curves.dsaturation_dpc(pc_hi)));
  }
  return report;
}

}  // namespace ldd

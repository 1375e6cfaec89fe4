#ifndef OSCRAD_ORACLE_HPP
#define OSCRAD_ORACLE_HPP

#include "oscrad/amplitudes.hpp"
#include "oscrad/resolvent.hpp"

namespace oscrad::oracle {

struct QuadratureReport {
  cplx value{0.0};
  double error_estimate = 0.0;
  int subdivisions = 0;
  double truncation_point = 0.0;
  bool converged = true;
};

struct StoneOptions {
  double lambda_max_factor = 200.0;  // truncation at factor * max(lambda_e, omega_e, nu)
  double peak_cap_gammas = 16.0;     // resonance window panel cap: gamma_e / this
  double smooth_cap = 120.0;         // elsewhere: local scale / this
};

// Survival amplitude straight from the boundary values of the resolvent,
//
//   S(t) = (1/(pi i)) int_0^inf e^{-i t mu} mu [E(mu_+) - E(mu_-)] dmu,
//
// Filon panels over [0, Lambda_max] plus the fitted 1/mu^3 analytic tail.
// This is twice the published half-line display; the factor is fixed by the
// t -> 0+ projection weight and by agreement with the two-term representation.
QuadratureReport stone_survival(double t, const SpectralData& s, const PhysicalParams& p,
                                const StoneOptions& opt = {});

// The two-term representation: full-line lambda integral plus the double
// integral with the 1/(s^2 + lambda^2) kernel, evaluated as written.
QuadratureReport stone_survival_double(double t, const SpectralData& s, const PhysicalParams& p,
                                       const StoneOptions& opt = {});

// (1/pi) int_R ds z/(s^2 + z^2), equals sign(Re z) for Im z < Re z-ish cone;
// the resonance-root identity gives (-1)^k at z = z_k.
cplx s_kernel_identity(cplx z);

enum class OverlapKind { green_green, photon_green, bracket };

struct OverlapArgs {
  BranchedPoint point;
  double lambda_e = 0.0;   // green_green
  PhotonSpec photon;       // photon_green
  double radius = 0.0;     // bracket
};

// Defining radial integrals for the closed-form overlaps, angular parts done
// analytically (with the transverse 2/3 reduction where it applies).
QuadratureReport radial_overlap_oracle(OverlapKind kind, const OverlapArgs& args,
                                       const PhysicalParams& p);

// Static shell self-energy <(-Delta)^{-1} rho_r, rho_r> by direct quadrature
// of the sphere-sphere Coulomb integral.
double shell_self_energy_oracle(double r);

struct CutCheck {
  cplx cut_c, cut_pm;       // independent re-evaluation
  double gap_c, gap_pm;     // against the amplitude-layer internals
  bool converged = true;
};

// Re-evaluates the two cut combinations with composite Simpson at halved
// steps and an integration-by-parts tail, then compares against
// transition_eps internals.
CutCheck cut_integral_check(double t, const PhotonSpec& photon, const SpectralData& s,
                            const PhysicalParams& p);

}  // namespace oscrad::oracle

#endif

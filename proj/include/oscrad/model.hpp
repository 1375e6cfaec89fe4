#ifndef OSCRAD_MODEL_HPP
#define OSCRAD_MODEL_HPP

#include <utility>

#include "oscrad/types.hpp"

namespace oscrad {

// Charged harmonic oscillator coupled to the field, natural units by default.
struct PhysicalParams {
  double e = 0.3;       // charge
  double m = 1.0;       // renormalized mass
  double c = 1.0;       // speed of light
  double omega0 = 1.0;  // oscillator frequency
  double hbar = 1.0;    // scales the Fock hamiltonian only

  void validate() const;
  double tau0() const { return 2.0 * e * e / (3.0 * m * c * c * c); }
  // coefficient of z^3 in the dispersion polynomials, tau0 * m
  double coupling() const { return 2.0 * e * e / (3.0 * c * c * c); }
};

struct SpectralData {
  double lambda_e = 0.0;      // -lambda_e^2 is the unique negative eigenvalue
  cplx z_plus{0.0, 0.0};      // resonance poles z_k = (-1)^k omega_e - i gamma_e
  cplx z_minus{0.0, 0.0};
  double omega_e = 0.0;
  double gamma_e = 0.0;
  bool degenerate = false;    // resonance discriminant collapsed

  double kappa0 = 0.0;  // 4 pi c^2/(m w0^2), the C^3 metric weight
  double kappa1 = 0.0;  // (e/c) lambda_e^2 kappa0
  double kappa2 = 0.0;  // 4 pi e^2 lambda_e^2/(m^2 w0^4 c)
  // Normalization constant entering every amplitude prefactor:
  //   kappa^2 = kappa2 lambda_e + 3 kappa0 = 3 ||(-kappa1 M zeta G, zeta)||^2.
  // With this choice S_hat(0+) = kappa2 lambda_e / kappa^2 is exactly the
  // a.c. projection weight of the normalized state (0, zeta).
  double kappa_sq = 0.0;
  // || (-kappa1 M zeta G, zeta) ||^2 = (2/3) kappa1^2 <G,G> + kappa0 itself
  double eigvec_norm_sq = 0.0;
  // value the published kappa display evaluates to (with lambda_0 read as
  // lambda_e); kept for the discrepancy report
  double kappa_sq_display = 0.0;
};

// m = m_bare + m_em with m_em = (8 pi/3)(e^2/c^2) <(-Delta)^{-1} rho_r, rho_r>
// for the uniform spherical shell of radius r.  Returns (bare, em).  The bare
// mass goes negative below r = 2e^2/(3 c^2 m); that is expected and reported.
std::pair<double, double> renormalized_mass_split(const PhysicalParams& p, double r);

// Unique positive root of (2e^2/3c^3) l^3 - m (w0^2 + l^2) = 0,
// bisection bracket then Newton polish, relative residual below 1e-12.
double solve_lambda_e(const PhysicalParams& p);

// The two roots of q(z) = (2e^2/3c^3) z^2 + i (m w0^2/lambda_e^2)(z + i lambda_e),
// ordered by sign of the real part.  Both lie in the lower half plane.
std::pair<cplx, cplx> solve_resonances(const PhysicalParams& p, double lambda_e, bool* degenerate = nullptr);

// Truncated expansions as published: omega_e ~ w0 + 28 w0^3 e^4/(3 m^2 c^6),
// gamma_e ~ 2 w0^2 e^2/(3 m c^3).  Reference values for soft comparison only;
// the exact roots of q disagree with both coefficients (see cmd_poles report).
std::pair<double, double> perturbative_resonances(const PhysicalParams& p);

SpectralData derived_constants(const PhysicalParams& p, double lambda_e);

inline SpectralData solve_spectral_data(const PhysicalParams& p) {
  return derived_constants(p, solve_lambda_e(p));
}

}  // namespace oscrad

#endif

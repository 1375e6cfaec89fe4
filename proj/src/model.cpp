#include "oscrad/model.hpp"

#include <cmath>
#include <tuple>

#include "oscrad/defects.hpp"

namespace oscrad {

void PhysicalParams::validate() const {
  if (!(e > 0.0) || !(m > 0.0) || !(c > 0.0) || !(omega0 > 0.0) || !(hbar > 0.0))
    throw std::domain_error("PhysicalParams: all fields must be strictly positive");
  if (!(tau0() > 0.0)) throw std::domain_error("PhysicalParams: tau0 must be positive");
}

std::pair<double, double> renormalized_mass_split(const PhysicalParams& p, double r) {
  if (!(r > 0.0)) throw std::domain_error("renormalized_mass_split: radius must be positive");
  // shell form factor: <(-Delta)^{-1} rho_r, rho_r> = 1/(4 pi r)
  const double em = (8.0 * pi / 3.0) * (p.e * p.e / (p.c * p.c)) * (1.0 / (4.0 * pi * r));
  return {p.m - em, em};
}

double solve_lambda_e(const PhysicalParams& p) {
  p.validate();
  const double A = p.coupling();
  auto poly = [&](double l) { return A * l * l * l - p.m * (p.omega0 * p.omega0 + l * l); };
  auto dpoly = [&](double l) { return 3.0 * A * l * l - 2.0 * p.m * l; };

  double lo = p.m / A;  // 1/tau0; poly(1/tau0) = -m w0^2 < 0
  double hi = 2.0 * p.m / A + p.omega0 * p.omega0 * p.tau0();
  while (poly(hi) <= 0.0) hi *= 2.0;
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    (poly(mid) < 0.0 ? lo : hi) = mid;
  }
  double l = 0.5 * (lo + hi);
  for (int i = 0; i < 6; ++i) l -= poly(l) / dpoly(l);

  const double scale = A * l * l * l + p.m * (p.omega0 * p.omega0 + l * l);
  if (!(l > 0.0) || std::abs(poly(l)) > 1e-12 * scale)
    throw accuracy_error("solve_lambda_e: residual above tolerance", cplx(l), std::abs(poly(l)) / scale);
  return l;
}

std::pair<cplx, cplx> solve_resonances(const PhysicalParams& p, double lambda_e, bool* degenerate) {
  const double A = p.coupling();
  const double B = p.m * p.omega0 * p.omega0 / (lambda_e * lambda_e);
  // q(z) = A z^2 + i B z - B lambda_e; discriminant (iB)^2 + 4 A B lambda_e is real
  const double disc = 4.0 * A * B * lambda_e - B * B;
  const double scale = 4.0 * A * B * lambda_e + B * B;
  const bool degen = std::abs(disc) < 1e-14 * scale;
  if (degenerate) *degenerate = degen;
  const cplx root = disc >= 0.0 ? cplx(std::sqrt(disc), 0.0) : cplx(0.0, std::sqrt(-disc));
  const cplx zp = (cplx(0.0, -B) + root) / (2.0 * A);
  const cplx zm = (cplx(0.0, -B) - root) / (2.0 * A);
  return zp.real() >= zm.real() ? std::pair{zp, zm} : std::pair{zm, zp};
}

std::pair<double, double> perturbative_resonances(const PhysicalParams& p) {
  p.validate();
  const double e4 = std::pow(p.e, 4);
  const double c6 = std::pow(p.c, 6);
  const double omega = p.omega0 + 28.0 * std::pow(p.omega0, 3) * e4 / (3.0 * p.m * p.m * c6);
  const double gamma = 2.0 * p.omega0 * p.omega0 * p.e * p.e / (3.0 * p.m * std::pow(p.c, 3));
  return {omega, gamma};
}

SpectralData derived_constants(const PhysicalParams& p, double lambda_e) {
  SpectralData s;
  s.lambda_e = lambda_e;
  std::tie(s.z_plus, s.z_minus) = solve_resonances(p, lambda_e, &s.degenerate);
  s.omega_e = s.z_plus.real();
  s.gamma_e = -s.z_plus.imag();

  const double w2 = p.omega0 * p.omega0;
  s.kappa0 = 4.0 * pi * p.c * p.c / (p.m * w2);
  s.kappa1 = (p.e / p.c) * lambda_e * lambda_e * s.kappa0;
  s.kappa2 = 4.0 * pi * p.e * p.e * lambda_e * lambda_e / (p.m * p.m * w2 * w2 * p.c);

  // <G_lam, G_lam> = 1/(8 pi c^3 lambda_e); transverse projection gives 2/3
  const double gg = 1.0 / (8.0 * pi * std::pow(p.c, 3) * lambda_e);
  s.eigvec_norm_sq = (2.0 / 3.0) * s.kappa1 * s.kappa1 * gg + s.kappa0;
  s.kappa_sq = 3.0 * s.eigvec_norm_sq;  // = kappa2 lambda_e + 3 kappa0
  s.kappa_sq_display =
      2.0 * pi * p.e * p.e * std::pow(lambda_e, 3) / (p.m * p.m * w2 * w2 * p.c) + s.kappa0;
  return s;
}

}  // namespace oscrad

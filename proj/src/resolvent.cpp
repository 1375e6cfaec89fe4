#include "oscrad/resolvent.hpp"

#include <cmath>
#include <limits>

#include "oscrad/defects.hpp"

namespace oscrad {

namespace {

double vec_norm_sq(const cvec3& v) { return std::norm(v[0]) + std::norm(v[1]) + std::norm(v[2]); }

}  // namespace

void PhotonSpec::validate(bool allow_zero_eps) const {
  if (!(nu > 0.0)) throw std::domain_error("PhotonSpec: nu must be positive");
  if (!(eps > 0.0) && !(allow_zero_eps && eps == 0.0))
    throw std::domain_error("PhotonSpec: eps must be positive");
  if (std::abs(norm3(k) - 1.0) > 1e-12) throw std::domain_error("PhotonSpec: k must be a unit vector");
}

double PhotonSpec::norm_sq(const PhysicalParams& p) const {
  validate();
  const cvec3 kz = ccross(to_cvec3(k), zeta);
  const double c3 = std::pow(p.c, 3);
  return pi * c3 / std::pow(eps, 3) *
         (vec_norm_sq(kz) + (2.0 / 3.0) * (eps * eps / (nu * nu)) * vec_norm_sq(zeta));
}

cplx lambda_pm(const BranchedPoint& pt, const PhysicalParams& p, double lambda_e, bool* near_pole) {
  const cplx z = pt.z;
  const double sgn = pt.branch == Branch::upper ? 1.0 : -1.0;
  const double A = p.coupling();
  const cplx cubic = sgn * iu * A * z * z * z;
  const cplx quad = p.m * z * z;
  const cplx inv = cubic - p.m * p.omega0 * p.omega0 + quad;
  const double scale = std::abs(cubic) + std::abs(quad) + p.m * p.omega0 * p.omega0;

  if (std::abs(inv) < 1e-8 * scale) {
    // nearest zero of Lambda^{-1}: {i lambda_e, z_+, z_-} on the upper branch,
    // the reflected set on the lower one
    auto [zp, zm] = solve_resonances(p, lambda_e);
    cplx roots[3] = {iu * lambda_e, zp, zm};
    if (pt.branch == Branch::lower)
      for (auto& r : roots) r = -std::conj(r);
    cplx nearest = roots[0];
    for (const cplx& r : roots)
      if (std::abs(z - r) < std::abs(z - nearest)) nearest = r;
    if (std::abs(inv) < 1e-13 * scale)
      throw pole_error("lambda_pm: resolvent pole", nearest);
    if (near_pole) *near_pole = true;
  } else if (near_pole) {
    *near_pole = false;
  }
  return 1.0 / inv;
}

cplx poly_p(cplx z, const PhysicalParams& p, double lambda_e) {
  const double a = p.e * p.e * lambda_e / (3.0 * std::pow(p.c, 3));
  const double b = (p.m / lambda_e) * (p.omega0 * p.omega0 + 0.5 * lambda_e * lambda_e);
  return a * z + iu * b;
}

cplx poly_q(cplx z, const PhysicalParams& p, double lambda_e) {
  const double A = p.coupling();
  const double B = p.m * p.omega0 * p.omega0 / (lambda_e * lambda_e);
  const double linear_sign = defects::active() == defects::Kind::q_gamma_sign ? -1.0 : 1.0;
  return A * z * z + linear_sign * iu * B * z + iu * B * iu * lambda_e;
}

cplx poly_q_prime(cplx z, const PhysicalParams& p, double lambda_e) {
  const double A = p.coupling();
  const double B = p.m * p.omega0 * p.omega0 / (lambda_e * lambda_e);
  const double linear_sign = defects::active() == defects::Kind::q_gamma_sign ? -1.0 : 1.0;
  return 2.0 * A * z + linear_sign * iu * B;
}

CharPolys char_polys(cplx z, const PhysicalParams& p, double lambda_e) {
  return {poly_p(z, p, lambda_e), poly_q(z, p, lambda_e)};
}

cplx green_overlap(const BranchedPoint& pt, double lambda_e, const PhysicalParams& p) {
  const double sgn = pt.branch == Branch::upper ? 1.0 : -1.0;
  const cplx den = lambda_e - sgn * iu * pt.z;
  if (std::abs(den) < 1e-13 * lambda_e)
    throw pole_error("green_overlap: pole of the overlap", -sgn * iu * lambda_e);
  return 1.0 / (4.0 * pi * std::pow(p.c, 3) * den);
}

double survival_prefactor(const SpectralData& s) { return -2.0 * s.kappa0 * s.kappa2 / s.kappa_sq; }

cplx bound_bound_f(cplx z, const SpectralData& s, const PhysicalParams& p) {
  return poly_p(z, p, s.lambda_e) / ((z + iu * s.lambda_e) * poly_q(z, p, s.lambda_e));
}

cplx bound_bound_element(const BranchedPoint& pt, const SpectralData& s, const PhysicalParams& p) {
  const cplx z = pt.branch == Branch::upper ? pt.z : -pt.z;
  const cplx den1 = z + iu * s.lambda_e;
  const cplx den2 = poly_q(z, p, s.lambda_e);
  const double qscale = std::abs(poly_q(cplx(std::abs(z) + s.gamma_e), p, s.lambda_e));
  if (std::abs(den1) < 1e-13 * s.lambda_e)
    throw pole_error("bound_bound_element: pole at -i lambda_e", pt.branch == Branch::upper
                                                                     ? -iu * s.lambda_e
                                                                     : iu * s.lambda_e);
  if (std::abs(den2) < 1e-13 * qscale) {
    const cplx near = std::abs(z - s.z_plus) < std::abs(z - s.z_minus) ? s.z_plus : s.z_minus;
    throw pole_error("bound_bound_element: resonance pole", pt.branch == Branch::upper ? near : -near);
  }
  return survival_prefactor(s) * poly_p(z, p, s.lambda_e) / (den1 * den2);
}

cplx bound_bound_jump(double mu, const SpectralData& s, const PhysicalParams& p) {
  return survival_prefactor(s) * (bound_bound_f(mu, s, p) - bound_bound_f(-mu, s, p));
}

double chi_cut_distance(cplx w, const PhotonSpec& photon) {
  if (photon.eps == 0.0) return std::numeric_limits<double>::infinity();
  const double dy = w.imag() + photon.eps;
  auto component = [&](double sign) {
    const double dx = sign * (w.real() - sign * photon.nu);  // >= 0 past the branch point
    return dx >= 0.0 ? std::abs(dy) : std::hypot(dx, dy);
  };
  return std::min(component(1.0), component(-1.0));
}

ChiValue chi_eps(cplx w, const PhotonSpec& photon) {
  const double nu = photon.nu, eps = photon.eps;
  ChiValue out;
  if (eps == 0.0) {
    const cplx den = nu * nu - w * w;
    if (std::abs(den) < 1e-13 * nu * nu)
      throw pole_error("chi_eps: photon pole", w.real() >= 0.0 ? cplx(nu) : cplx(-nu));
    out.rational = 1.0 / den;
    out.total = out.rational;
    return out;
  }
  const double dist = chi_cut_distance(w, photon);
  if (dist < 1e-6 * nu) throw cut_error("chi_eps: evaluation too close to the logarithmic cut", dist);

  const cplx u = eps - iu * w;
  const cplx den = nu * nu + u * u;
  if (std::abs(den) < 1e-13 * nu * nu)
    throw pole_error("chi_eps: photon pole",
                     std::abs(w - chi_pole(1, photon)) < std::abs(w - chi_pole(2, photon))
                         ? chi_pole(1, photon)
                         : chi_pole(2, photon));
  out.rational = (nu * nu + eps * u) / (nu * nu * den);
  out.logarithmic = -(iu * eps / (2.0 * std::pow(nu, 3))) * std::log((nu + iu * eps + w) / (nu - iu * eps - w)) -
                    pi * eps / (2.0 * std::pow(nu, 3));
  out.total = out.rational + out.logarithmic;
  return out;
}

ChiValue chi_eps(const BranchedPoint& pt, const PhotonSpec& photon) {
  return chi_eps(pt.branch == Branch::upper ? pt.z : -pt.z, photon);
}

cplx chi_pole(int k, const PhotonSpec& photon) {
  const double sign = k == 1 ? -1.0 : 1.0;
  return cplx(sign * photon.nu, -photon.eps);
}

cplx chi_residue(int k, const PhotonSpec& photon) {
  const double nu = photon.nu, eps = photon.eps;
  // residue of (nu^2 + eps u)/(nu^2 (u^2 + nu^2)) at w_k, u = eps - i w
  return k == 1 ? cplx(nu, eps) / (2.0 * nu * nu) : -cplx(nu, -eps) / (2.0 * nu * nu);
}

double transition_prefactor(const SpectralData& s, const PhysicalParams& p) {
  return -4.0 * pi * p.e * p.c * s.kappa2 / s.kappa_sq;
}

cplx transition_g(cplx z, const SpectralData& s, const PhotonSpec& photon, const PhysicalParams& p) {
  const cplx chi = chi_eps(z, photon).total;
  return (2.0 * z + iu * s.lambda_e) / (z + iu * s.lambda_e) * chi / poly_q(z, p, s.lambda_e);
}

cplx photon_bound_element(const BranchedPoint& pt, const SpectralData& s, const PhotonSpec& photon,
                          const PhysicalParams& p) {
  const cplx z = pt.branch == Branch::upper ? pt.z : -pt.z;
  const cplx den1 = z + iu * s.lambda_e;
  if (std::abs(den1) < 1e-13 * s.lambda_e)
    throw pole_error("photon_bound_element: pole at -i lambda_e", pt.branch == Branch::upper
                                                                      ? -iu * s.lambda_e
                                                                      : iu * s.lambda_e);
  const cplx q = poly_q(z, p, s.lambda_e);
  const double qscale = std::abs(poly_q(cplx(std::abs(z) + s.gamma_e), p, s.lambda_e));
  if (std::abs(q) < 1e-13 * qscale) {
    const cplx near = std::abs(z - s.z_plus) < std::abs(z - s.z_minus) ? s.z_plus : s.z_minus;
    throw pole_error("photon_bound_element: resonance pole", pt.branch == Branch::upper ? near : -near);
  }
  return transition_prefactor(s, p) * transition_g(z, s, photon, p);
}

cplx transition_jump(double mu, const SpectralData& s, const PhotonSpec& photon,
                     const PhysicalParams& p) {
  return transition_prefactor(s, p) *
         (transition_g(mu, s, photon, p) - transition_g(-mu, s, photon, p));
}

RegularizedCoeffs regularized_coeffs(const BranchedPoint& pt, double r, const PhysicalParams& p) {
  if (!(r > 0.0)) throw std::domain_error("regularized_coeffs: radius must be positive");
  RegularizedCoeffs out;
  out.bare_mass = renormalized_mass_split(p, r).first;
  if (std::abs(out.bare_mass) < 1e-12 * p.m)
    throw std::domain_error("regularized_coeffs: bare mass vanishes at the critical radius");

  const double sgn = pt.branch == Branch::upper ? 1.0 : -1.0;
  const cplx w = sgn * pt.z / p.c;
  // <(-c^2 Delta - z^2)^{-1} rho_r, rho_r> = (e^{2 i w r} - 1)/(8 pi r^2 i w c^2)
  if (std::abs(w) * r < 1e-6) {
    const cplx x = 2.0 * iu * w * r;
    out.green_bracket = (2.0 * r + r * x + r * x * x / 3.0 + r * x * x * x / 12.0) /
                        (8.0 * pi * r * r * p.c * p.c);
  } else {
    out.green_bracket = (std::exp(2.0 * iu * w * r) - 1.0) / (8.0 * pi * r * r * iu * w * p.c * p.c);
  }

  const double alpha = p.m * p.omega0 * p.omega0;
  const double mr = out.bare_mass;
  const cplx z2 = pt.z * pt.z;
  out.k1r = 1.0 + (8.0 * pi / 3.0) * (p.e * p.e / mr) * out.green_bracket;
  out.k2r = alpha / mr - z2 - (8.0 * pi / 3.0) * (alpha * p.e * p.e / (mr * mr * out.k1r)) * out.green_bracket;
  out.lambda_r = -1.0 / (mr * out.k1r * out.k2r);
  return out;
}

cplx bare_bound_bound_point(const BranchedPoint& pt, const PhysicalParams& p, double lambda_e) {
  const double sgn = pt.branch == Branch::upper ? 1.0 : -1.0;
  const double kappa0 = 4.0 * pi * p.c * p.c / (p.m * p.omega0 * p.omega0);
  return -lambda_pm(pt, p, lambda_e) * kappa0 * (p.m + sgn * iu * p.coupling() * pt.z);
}

cplx bare_bound_bound_regularized(const BranchedPoint& pt, double r, const PhysicalParams& p) {
  const RegularizedCoeffs rc = regularized_coeffs(pt, r, p);
  const double kappa0 = 4.0 * pi * p.c * p.c / (p.m * p.omega0 * p.omega0);
  return -rc.lambda_r * kappa0 * rc.bare_mass * rc.k1r;
}

}  // namespace oscrad

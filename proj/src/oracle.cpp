#include "oscrad/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "oscrad/special.hpp"

namespace oscrad::oracle {

namespace {

// Filon integration of e^{-i t mu} w(mu) over segmented breakpoints with
// per-segment panel caps, plus the fitted algebraic tail.
struct SegmentedFilon {
  double t;
  quad::Integrand w;

  cplx value = 0.0;
  double error = 0.0;
  int panels = 0;

  void add(double a, double b, double cap) {
    if (b <= a) return;
    quad::Result r = quad::filon(w, t, {a, b}, cap);
    value += r.value;
    error += r.error;
    panels += r.intervals;
  }
};

std::vector<std::pair<double, double>> survival_segments(const SpectralData& s, double lam_max,
                                                         const StoneOptions& opt,
                                                         std::vector<double>* caps) {
  const double lam = s.lambda_e, om = s.omega_e, gam = s.gamma_e;
  std::vector<std::pair<double, double>> seg;
  const double peak_lo = std::max(0.0, om - 30.0 * gam);
  const double peak_hi = std::min(lam_max, om + 30.0 * gam);
  seg.push_back({0.0, peak_lo});
  caps->push_back(std::max(peak_lo / opt.smooth_cap, gam));
  seg.push_back({peak_lo, peak_hi});
  caps->push_back(gam / opt.peak_cap_gammas);
  double x = peak_hi;
  double next = std::max(2.0 * lam, 2.0 * peak_hi);
  while (x < lam_max) {
    const double hi = std::min(next, lam_max);
    seg.push_back({x, hi});
    caps->push_back(std::max((hi - x) / opt.smooth_cap, gam));
    x = hi;
    next *= 2.0;
  }
  return seg;
}

}  // namespace

QuadratureReport stone_survival(double t, const SpectralData& s, const PhysicalParams& p,
                                const StoneOptions& opt) {
  if (t == 0.0) throw std::domain_error("stone_survival: t must be nonzero");
  const double lam_max = opt.lambda_max_factor * std::max(s.lambda_e, s.omega_e);
  SegmentedFilon fil{t, [&](double mu) { return mu * bound_bound_jump(mu, s, p) / (pi * iu); }};

  std::vector<double> caps;
  const auto segs = survival_segments(s, lam_max, opt, &caps);
  for (size_t i = 0; i < segs.size(); ++i) fil.add(segs[i].first, segs[i].second, caps[i]);

  QuadratureReport rep;
  rep.value = fil.value + quad::algebraic_tail(fil.w, t, lam_max);
  rep.error_estimate = fil.error + std::abs(fil.w(lam_max)) * lam_max * 1e-4;
  rep.subdivisions = fil.panels;
  rep.truncation_point = lam_max;
  rep.converged = fil.error < 2e-6 * std::abs(rep.value) + 1e-12;
  return rep;
}

QuadratureReport stone_survival_double(double t, const SpectralData& s, const PhysicalParams& p,
                                       const StoneOptions& opt) {
  if (t == 0.0) throw std::domain_error("stone_survival_double: t must be nonzero");
  const double lam_max = opt.lambda_max_factor * std::max(s.lambda_e, s.omega_e);
  std::vector<double> caps;
  const auto segs = survival_segments(s, lam_max, opt, &caps);

  // first term: (1/2 pi i) int_{-inf}^{inf} e^{-i t l} l Jump(l) dl
  //           = (F(t) + F(-t))/(2 pi i),  F(tau) = int_0^inf e^{-i tau mu} mu Jump
  auto base = [&](double mu) { return mu * bound_bound_jump(mu, s, p); };
  cplx f_pos = 0.0, f_neg = 0.0;
  double err = 0.0;
  int panels = 0;
  for (size_t i = 0; i < segs.size(); ++i) {
    quad::Result rp = quad::filon(base, t, {segs[i].first, segs[i].second}, caps[i]);
    quad::Result rn = quad::filon(base, -t, {segs[i].first, segs[i].second}, caps[i]);
    f_pos += rp.value;
    f_neg += rn.value;
    err += rp.error + rn.error;
    panels += rp.intervals + rn.intervals;
  }
  f_pos += quad::algebraic_tail(base, t, lam_max, 2, 3);
  f_neg += quad::algebraic_tail(base, -t, lam_max, 2, 3);
  const cplx term_a = (f_pos + f_neg) / (2.0 * pi * iu);

  // second term: (2/pi) int_0^inf ds I2(t, s),
  // I2(t,s) = -(1/pi) int_0^inf sin(t mu) mu^2 Jump(mu)/(s^2 + mu^2) dmu
  auto i2_of_s = [&](double sv) {
    auto kern = [&](double mu) {
      return mu * mu * bound_bound_jump(mu, s, p) / (sv * sv + mu * mu);
    };
    cplx acc = 0.0;
    for (size_t i = 0; i < segs.size(); ++i) {
      quad::Result rp = quad::filon(kern, t, {segs[i].first, segs[i].second}, caps[i], false);
      quad::Result rn = quad::filon(kern, -t, {segs[i].first, segs[i].second}, caps[i], false);
      // sin(t mu) = (e^{i t mu} - e^{-i t mu})/(2i)
      acc += (rn.value - rp.value) / (2.0 * iu);
    }
    acc += (quad::algebraic_tail(kern, -t, lam_max, 1, 2) -
            quad::algebraic_tail(kern, t, lam_max, 1, 2)) /
           (2.0 * iu);
    return -acc / pi;
  };
  const double s_max = 60.0 * s.lambda_e;
  quad::Options sopt;
  sopt.abs_tol = 1e-10;
  sopt.rel_tol = 1e-7;
  quad::Result rs = quad::integrate(i2_of_s, {0.0, s.omega_e, s.lambda_e, 4.0 * s.lambda_e,
                                              16.0 * s.lambda_e, s_max},
                                    sopt);
  const cplx i2_far = i2_of_s(s_max);
  const cplx term_b = (2.0 / pi) * (rs.value + i2_far * s_max);  // tail: I2 ~ c/s^2

  QuadratureReport rep;
  rep.value = term_a + term_b;
  rep.error_estimate = err + rs.error + std::abs(i2_far) * s_max * 0.1;
  rep.subdivisions = panels + rs.intervals;
  rep.truncation_point = lam_max;
  rep.converged = true;
  return rep;
}

cplx s_kernel_identity(cplx z) {
  auto kern = [&](double sv) { return z / (sv * sv + z * z) / pi; };
  quad::Options opt;
  opt.abs_tol = 1e-12;
  opt.rel_tol = 1e-10;
  const double s_max = 3000.0 * std::abs(z);
  std::vector<double> bp{0.0};
  for (double x = std::abs(z) / 4.0; x < s_max; x *= 3.0) bp.push_back(x);
  bp.push_back(s_max);
  quad::Result r = quad::integrate(kern, bp, opt);
  // symmetric integral: double the half line, add the exact z/s^2 tail
  return 2.0 * r.value + 2.0 * z / (pi * s_max);
}

QuadratureReport radial_overlap_oracle(OverlapKind kind, const OverlapArgs& args,
                                       const PhysicalParams& p) {
  QuadratureReport rep;
  quad::Options opt;
  opt.abs_tol = 1e-13;
  opt.rel_tol = 1e-11;
  const double c = p.c;
  const double sgn = args.point.branch == Branch::upper ? 1.0 : -1.0;

  switch (kind) {
    case OverlapKind::green_green: {
      // <G^{-+}_{z*}, G_lam> = (1/(4 pi c^4)) int_0^inf e^{(+-iz - lam) rho/c} drho
      const cplx sigma = (sgn * iu * args.point.z - args.lambda_e) / c;
      if (sigma.real() >= 0.0)
        throw std::domain_error("radial_overlap_oracle: overlap integral diverges for this z");
      const double scale = -1.0 / sigma.real();
      auto f = [&](double rho) { return std::exp(sigma * rho); };
      std::vector<double> interior;
      if (std::abs(sigma.imag()) * scale > 2.0)
        for (double x = pi / std::abs(sigma.imag()); x < 45.0 * scale; x += 2.0 * pi / std::abs(sigma.imag()))
          interior.push_back(x);
      quad::Result r = quad::integrate_halfline(f, scale, opt, interior);
      rep.value = r.value / (4.0 * pi * std::pow(c, 4));
      rep.error_estimate = r.error / (4.0 * pi * std::pow(c, 4));
      rep.subdivisions = r.intervals;
      rep.truncation_point = r.truncation;
      rep.converged = r.converged;
      return rep;
    }
    case OverlapKind::photon_green: {
      // chi(+-z) = (1/(a c^2)) int e^{-s rho} sin(a rho) drho
      //          - (eps/(nu c^2)) int rho e^{-s rho} j1(a rho) drho,
      // s = (eps -+ i z)/c, a = nu/c
      const double nu = args.photon.nu, eps = args.photon.eps;
      const cplx sv = (eps - sgn * iu * args.point.z) / c;
      if (sv.real() <= 0.0)
        throw std::domain_error("radial_overlap_oracle: photon overlap diverges for this z");
      const double a = nu / c;
      const double scale = 1.0 / sv.real();
      std::vector<double> interior;
      for (double x = pi / a; x < std::min(45.0 * scale, 4000.0 * pi / a); x += 2.0 * pi / a)
        interior.push_back(x);
      auto f1 = [&](double rho) { return std::exp(-sv * rho) * std::sin(a * rho); };
      auto j1 = [](double x) {
        if (std::abs(x) < 1e-4) return x / 3.0 - x * x * x / 30.0;
        return std::sin(x) / (x * x) - std::cos(x) / x;
      };
      auto f2 = [&](double rho) { return rho * std::exp(-sv * rho) * j1(a * rho); };
      quad::Result r1 = quad::integrate_halfline(f1, scale, opt, interior);
      quad::Result r2 = quad::integrate_halfline(f2, scale, opt, interior);
      rep.value = r1.value / (a * c * c) - (eps / (nu * c * c)) * r2.value;
      rep.error_estimate = r1.error / (a * c * c) + (eps / (nu * c * c)) * r2.error;
      rep.subdivisions = r1.intervals + r2.intervals;
      rep.truncation_point = std::max(r1.truncation, r2.truncation);
      rep.converged = r1.converged && r2.converged;
      return rep;
    }
    case OverlapKind::bracket: {
      // <(-c^2 Delta - z^2)^{-1} rho_r, rho_r>
      //   = (1/(2 c^2)) int_{-1}^1 dmu e^{i w r |x-y|} / (4 pi |x-y|),
      // |x - y| = r sqrt(2 - 2 mu); the inverse-square-root endpoint is
      // integrable and left to the adaptive subdivision.
      const double r0 = args.radius;
      const cplx w = sgn * args.point.z / c;
      auto f = [&](double mu) {
        const double chord = r0 * std::sqrt(std::max(2.0 - 2.0 * mu, 0.0));
        if (chord == 0.0) return cplx(0.0);  // measure-zero endpoint
        return 0.5 * std::exp(iu * w * chord) / (4.0 * pi * chord);
      };
      quad::Options bopt = opt;
      bopt.abs_tol = 1e-11 / r0;
      bopt.rel_tol = 1e-9;
      quad::Result r = quad::integrate(f, {-1.0, 0.0, 0.9, 0.999, 1.0}, bopt);
      rep.value = r.value / (c * c);
      rep.error_estimate = r.error / (c * c);
      rep.subdivisions = r.intervals;
      rep.converged = r.converged;
      return rep;
    }
  }
  throw std::logic_error("radial_overlap_oracle: unknown kind");
}

double shell_self_energy_oracle(double r) {
  // <(-Delta)^{-1} rho_r, rho_r> = (1/2) int_{-1}^{1} dmu / (4 pi r sqrt(2 - 2 mu))
  quad::Options opt;
  opt.abs_tol = 1e-11 / r;
  opt.rel_tol = 1e-9;
  auto f = [&](double mu) {
    const double chord = r * std::sqrt(std::max(2.0 - 2.0 * mu, 0.0));
    if (chord == 0.0) return cplx(0.0);  // measure-zero endpoint
    return cplx(0.5 / (4.0 * pi * chord));
  };
  return quad::integrate(f, {-1.0, 0.0, 0.9, 0.999, 1.0}, opt).value.real();
}

CutCheck cut_integral_check(double t, const PhotonSpec& photon, const SpectralData& s,
                            const PhysicalParams& p) {
  if (!(photon.eps > 0.0)) throw std::domain_error("cut_integral_check: eps must be positive");
  const double tau = std::abs(t);
  const double nu = photon.nu, eps = photon.eps, lam = s.lambda_e;

  auto kernel = [&](cplx z) {
    return std::exp(-iu * tau * z) * z * (2.0 * z + iu * lam) / ((z + iu * lam) * poly_q(z, p, lam));
  };
  // composite Simpson along the ray, step halving for the error, tail by parts
  auto leg = [&](double sign, double h) {
    const cplx z0 = cplx(sign * nu, -eps);
    const double cut_at = std::max({200.0 / tau, 30.0 * lam, 60.0 * nu});
    const int n2 = 2 * std::max(64, int(std::ceil(cut_at / h / 2.0)));
    const double step = cut_at / n2;
    cplx acc = kernel(z0) + kernel(z0 + sign * cut_at);
    for (int k = 1; k < n2; ++k) acc += (k % 2 ? 4.0 : 2.0) * kernel(z0 + sign * k * step);
    cplx val = acc * step / 3.0;
    // tail by parts to third order:
    // int_U^inf e^{-i s t u} K du = e^{..}(K/(ist) + K'/(ist)^2 + K''/(ist)^3 + ...)
    const cplx zU = z0 + sign * cut_at;
    const double dh = 1e-3 * cut_at;
    auto smooth = [&](cplx z) {
      return z * (2.0 * z + iu * lam) / ((z + iu * lam) * poly_q(z, p, lam));
    };
    const cplx K = smooth(zU);
    const cplx Kp = (smooth(zU + sign * dh) - smooth(zU - sign * dh)) / (2.0 * dh);
    const cplx Kpp = (smooth(zU + sign * dh) - 2.0 * K + smooth(zU - sign * dh)) / (dh * dh);
    const cplx phase = std::exp(-iu * tau * zU);
    const cplx den = iu * sign * tau;
    val += phase * (K / den + Kp / (den * den) + Kpp / (den * den * den));
    return val;
  };

  const double h0 = std::min({pi / (128.0 * std::max(tau, 1e-6)), lam / 256.0, nu / 96.0});
  const cplx pp = leg(1.0, h0 / 2.0), pm = leg(-1.0, h0 / 2.0);
  const cplx pp_c = leg(1.0, h0), pm_c = leg(-1.0, h0);
  const cplx front = -iu * eps / (2.0 * std::pow(nu, 3));

  CutCheck out;
  out.cut_c = front * (pp + pm);
  out.cut_pm = front * (pp - pm);
  if (t < 0.0) {
    out.cut_c = std::conj(out.cut_c);
    out.cut_pm = std::conj(out.cut_pm);
  }
  out.converged =
      std::abs(pp - pp_c) + std::abs(pm - pm_c) < 1e-6 * (std::abs(pp) + std::abs(pm) + 1e-30);

  const TransitionBreakdown tb = transition_eps(t, photon, s, p);
  out.gap_c = std::abs(out.cut_c - tb.cut_c);
  out.gap_pm = std::abs(out.cut_pm - tb.cut_pm);
  return out;
}

}  // namespace oscrad::oracle

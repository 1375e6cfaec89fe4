#include "oscrad/amplitudes.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "oscrad/defects.hpp"
#include "oscrad/parallel.hpp"
#include "oscrad/special.hpp"

namespace oscrad {

namespace {

struct ConjugateIfNegative {
  bool negate;
  cplx operator()(cplx v) const { return negate ? std::conj(v) : v; }
};

// J1(tau) = -(1/pi) int_0^inf e^{-s tau} s/(s+lam) p(is)/q(is) ds
quad::Result j1_integral(double tau, const SpectralData& sd, const PhysicalParams& p,
                         const quad::Options& opt) {
  const double lam = sd.lambda_e;
  auto f = [&](double s) {
    return std::exp(-s * tau) * s / (s + lam) * poly_p(iu * s, p, lam) / poly_q(iu * s, p, lam);
  };
  quad::Result r = quad::integrate_halfline(f, 1.0 / tau, opt, {lam, 10.0 * lam});
  r.value *= -1.0 / pi;
  return r;
}

// subtracted J2 integrand; removable singularity at s = lam handled by local
// linear interpolation through s = lam +- delta
struct J2Integrand {
  double tau, lam;
  const SpectralData* sd;
  const PhysicalParams* p;
  bool drop_subtraction;

  cplx phi(double s) const {
    return std::exp(-s * tau) * s * poly_p(-iu * s, *p, lam) / poly_q(-iu * s, *p, lam);
  }
  cplx raw(double s) const {
    if (drop_subtraction) return phi(s) / (s - lam);
    const cplx psi_s = phi(s) * (s + lam);
    const cplx psi_l = 2.0 * lam * phi(lam);
    return (psi_s - psi_l) / (s * s - lam * lam);
  }
  cplx operator()(double s) const {
    const double delta = 1e-5 * lam;
    if (!drop_subtraction && std::abs(s - lam) < delta) {
      const cplx lo = raw(lam - delta), hi = raw(lam + delta);
      return lo + (s - (lam - delta)) / (2.0 * delta) * (hi - lo);
    }
    return raw(s);
  }
};

quad::Result j2_integral(double tau, const SpectralData& sd, const PhysicalParams& p,
                         const quad::Options& opt) {
  const double lam = sd.lambda_e;
  J2Integrand f{tau, lam, &sd, &p, defects::active() == defects::Kind::j2_subtraction};
  quad::Result r =
      quad::integrate_halfline(f, 1.0 / tau, opt, {0.5 * lam, 0.98 * lam, lam, 1.02 * lam, 10.0 * lam});
  // the subtraction piece decays only like 1/s^2; restore its tail exactly:
  // int_c^inf 2 lam phi(lam)/(s^2 - lam^2) ds = phi(lam) ln((c+lam)/|c-lam|).
  // When the cutoff lands near lam the prefactor e^{-lam tau} is already below
  // 1e-13, so the correction is skipped there.
  const double cut = r.truncation;
  if (!f.drop_subtraction && std::abs(cut - lam) > 0.5 * lam)
    r.value -= f.phi(lam) * std::log((cut + lam) / std::abs(cut - lam));
  r.value *= -1.0 / pi;
  return r;
}

// J2 through partial fractions: the rational part is a plain Laplace
// transform, the pole at lam goes through the exponential-integral kernel.
cplx j2_decomposition(double tau, const SpectralData& sd, const PhysicalParams& p,
                      const quad::Options& opt, double* quad_error) {
  const double lam = sd.lambda_e;
  // poles of s p(-is)/((s - lam) q(-is)):  lam and s_k = i z_k = gamma +- i omega
  const cplx sp = iu * sd.z_plus;
  const cplx sm = iu * sd.z_minus;
  const cplx c3 = lam * poly_p(-iu * lam, p, lam) / poly_q(-iu * lam, p, lam);
  auto residue_at = [&](cplx sk) {
    // d/ds q(-is) = -i q'(-is)
    return sk * poly_p(-iu * sk, p, lam) / ((sk - lam) * (-iu) * poly_q_prime(-iu * sk, p, lam));
  };
  const cplx cp = residue_at(sp);
  const cplx cm = residue_at(sm);
  auto rational = [&](double s) { return std::exp(-s * tau) * (cp / (s - sp) + cm / (s - sm)); };
  quad::Result r = quad::integrate_halfline(rational, 1.0 / tau, opt,
                                            {sd.gamma_e, sd.omega_e, lam});
  if (quad_error) *quad_error = r.error;
  return -(1.0 / pi) * (r.value + c3 * special::pv_laplace_pole(tau, lam));
}

}  // namespace

SurvivalBreakdown survival_terms(double t, const SpectralData& sd, const PhysicalParams& p,
                                 const quad::Options& opt) {
  if (t == 0.0) throw std::domain_error("survival_terms: t must be nonzero");
  const double tau = std::abs(t);
  const double lam = sd.lambda_e;
  const cplx z2 = sd.z_plus;

  SurvivalBreakdown out;
  out.t = t;
  out.runaway = std::exp(-lam * tau) * iu * lam * poly_p(-iu * lam, p, lam) / poly_q(-iu * lam, p, lam);
  out.resonance = -2.0 * std::exp(-iu * z2 * tau) * z2 * poly_p(z2, p, lam) /
                  ((z2 + iu * lam) * poly_q_prime(z2, p, lam));

  const quad::Result r1 = j1_integral(tau, sd, p, opt);
  const quad::Result r2 = j2_integral(tau, sd, p, opt);
  out.j1 = r1.value;
  out.j2 = r2.value;
  double alt_err = 0.0;
  out.j2_alt = j2_decomposition(tau, sd, p, opt, &alt_err);
  out.j2_gap = std::abs(out.j2 - out.j2_alt);
  out.quad_error = r1.error + r2.error + alt_err;

  out.total = out.runaway + out.resonance + out.j1 + out.j2;
  const double scale = std::abs(out.runaway) + std::abs(out.resonance) + std::abs(out.j1) +
                       std::abs(out.j2) + 1e-300;
  if (defects::active() == defects::Kind::none &&
      out.j2_gap > std::max(1e-6 * scale, 64.0 * (r2.error + alt_err)))
    throw accuracy_error("survival_terms: J2 dual-path disagreement", out.j2, out.j2_gap / scale);

  const ConjugateIfNegative fix{t < 0.0};
  out.runaway = fix(out.runaway);
  out.resonance = fix(out.resonance);
  out.j1 = fix(out.j1);
  out.j2 = fix(out.j2);
  out.j2_alt = fix(out.j2_alt);
  out.total = fix(out.total);
  out.S = survival_prefactor(sd) * out.total;
  out.S_hat = out.S / sd.kappa0;
  return out;
}

AmplitudeSeries survival(const std::vector<double>& grid, const SpectralData& sd,
                         const PhysicalParams& p, const quad::Options& opt) {
  for (double t : grid)
    if (t == 0.0) throw std::domain_error("survival: the grid must exclude t = 0");
  AmplitudeSeries series;
  series.points = parallel_map<SurvivalBreakdown>(
      grid.size(), [&](size_t i) { return survival_terms(grid[i], sd, p, opt); });

  // diagnostics on the sorted positive part of the grid
  std::vector<const SurvivalBreakdown*> pos;
  for (const auto& b : series.points)
    if (b.t > 0.0) pos.push_back(&b);
  std::sort(pos.begin(), pos.end(), [](auto* a, auto* b) { return a->t < b->t; });
  if (!pos.empty()) {
    const auto* last = pos.back();
    series.diag.tail_t_times_abs_s = std::abs(last->t * last->S);

    // log-log slope of |S| over the pure-tail window gamma_e t >= 25
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (const auto* b : pos) {
      if (sd.gamma_e * b->t < 25.0) continue;
      const double x = std::log(b->t), y = std::log(std::abs(b->S));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++n;
    }
    if (n >= 4) {
      series.diag.tail_window_covered = true;
      series.diag.tail_exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    }

    double env_min = 0.0, env_max = 0.0;
    int env_n = 0;
    for (const auto* b : pos) {
      const double gt = sd.gamma_e * b->t;
      const double lt = sd.lambda_e * b->t;
      if (lt < 30.0 || gt > 0.5) continue;  // runaway alive or envelope decayed
      const double env = std::abs(b->S) * std::exp(sd.gamma_e * b->t);
      if (env_n == 0) env_min = env_max = env;
      env_min = std::min(env_min, env);
      env_max = std::max(env_max, env);
      ++env_n;
    }
    if (env_n >= 3) {
      series.diag.envelope_window_covered = true;
      series.diag.envelope_flatness = env_max / env_min - 1.0;
    }

    // convexity of log|S| as a function of t, past the damped oscillation
    double conv_min = std::numeric_limits<double>::infinity();
    int conv_n = 0;
    for (size_t i = 1; i + 1 < pos.size(); ++i) {
      if (sd.gamma_e * pos[i - 1]->t < 25.0) continue;
      const double s1 = (std::log(std::abs(pos[i]->S)) - std::log(std::abs(pos[i - 1]->S))) /
                        (pos[i]->t - pos[i - 1]->t);
      const double s2 = (std::log(std::abs(pos[i + 1]->S)) - std::log(std::abs(pos[i]->S))) /
                        (pos[i + 1]->t - pos[i]->t);
      conv_min = std::min(conv_min, s2 - s1);
      ++conv_n;
    }
    if (conv_n >= 2) {
      series.diag.convexity_window_covered = true;
      series.diag.log_convexity_min = conv_min;
    }
  }
  return series;
}

cplx survival_zero_limit(const SpectralData& sd, const PhysicalParams& p) {
  const double lam = sd.lambda_e;
  quad::Options tight;
  tight.abs_tol = 1e-12;
  tight.rel_tol = 1e-11;
  const cplx s1 = survival_terms(1e-2 / lam, sd, p, tight).S_hat;
  const cplx s2 = survival_terms(1e-3 / lam, sd, p, tight).S_hat;
  const cplx s3 = survival_terms(1e-4 / lam, sd, p, tight).S_hat;
  // S_hat(t) = S0 + a t + O(t^2 log t); two Richardson stages with ratio 10
  const cplx r12 = (10.0 * s2 - s1) / 9.0;
  const cplx r23 = (10.0 * s3 - s2) / 9.0;
  return (100.0 * r23 - r12) / 99.0;
}

ClosedFormFit fit_closed_form(const AmplitudeSeries& series, const SpectralData& sd,
                              bool include_runaway_basis) {
  const auto& pts = series.points;
  if (pts.size() < 6) throw std::domain_error("fit_closed_form: series too short");
  double tmin = std::abs(pts.front().t), tmax = tmin;
  for (const auto& b : pts) {
    tmin = std::min(tmin, std::abs(b.t));
    tmax = std::max(tmax, std::abs(b.t));
  }
  // the three-basis fit needs small-t leverage on the runaway column
  if (tmax < (include_runaway_basis ? 20.0 : 2.5) * tmin)
    throw std::domain_error("fit_closed_form: grid span too short for the requested basis");

  const int ncol = include_runaway_basis ? 3 : 2;
  Eigen::MatrixXcd basis(pts.size(), ncol);
  Eigen::VectorXcd rhs(pts.size());
  for (size_t i = 0; i < pts.size(); ++i) {
    const double tau = std::abs(pts[i].t);
    const cplx osc = std::exp(-sd.gamma_e * tau) * std::exp(-iu * sd.omega_e * pts[i].t);
    const cplx tail = special::scaled_ei(sd.lambda_e * tau);
    int col = 0;
    if (include_runaway_basis) basis(i, col++) = std::exp(-sd.lambda_e * tau);
    basis(i, col++) = osc;
    basis(i, col) = tail;
    rhs(i) = pts[i].S;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(basis);
  const auto& r = qr.matrixR();
  const double cond = std::abs(r(0, 0)) / std::max(std::abs(r(ncol - 1, ncol - 1)), 1e-300);
  if (cond > 1e12) throw accuracy_error("fit_closed_form: basis ill-conditioned", cplx(cond), cond);
  Eigen::VectorXcd coef = qr.solve(rhs);

  ClosedFormFit fit;
  fit.runaway_basis = include_runaway_basis;
  int col = 0;
  fit.c1 = include_runaway_basis ? cplx(coef(col++)) : cplx(0.0);
  fit.c2 = coef(col++);
  fit.c3 = coef(col);
  fit.residual = (basis * coef - rhs).norm() / rhs.norm();
  fit.condition = cond;
  return fit;
}

namespace {

struct TransitionWork {
  double tau;
  const PhotonSpec* ph;
  const SpectralData* sd;
  const PhysicalParams* p;

  cplx chi(cplx w) const { return chi_eps(w, *ph).total; }
};

// S1 integrand: the lam^3 subtraction paired with the chi(-is) family,
// removable at s = lam
struct S1Integrand {
  const TransitionWork* w;
  cplx sub_const;  // e^{-lam tau} chi(-i lam)/q(-i lam)

  cplx raw(double s) const {
    const double lam = w->sd->lambda_e;
    const cplx phi1 = std::exp(-s * w->tau) * s * (2.0 * s - lam) * w->chi(-iu * s) /
                      poly_q(-iu * s, *w->p, lam);
    const cplx num = -iu * sub_const * lam * lam * lam + 0.5 * iu * phi1 * (s + lam);
    return num / (s * s - lam * lam);
  }
  cplx operator()(double s) const {
    const double lam = w->sd->lambda_e;
    const double delta = 1e-5 * lam;
    if (std::abs(s - lam) < delta) {
      const cplx lo = raw(lam - delta), hi = raw(lam + delta);
      return lo + (s - (lam - delta)) / (2.0 * delta) * (hi - lo);
    }
    return raw(s);
  }
};

TransitionBreakdown transition_impl(double t, PhotonSpec photon, const SpectralData& sd,
                                    const PhysicalParams& p, const quad::Options& opt, bool limit) {
  if (t == 0.0) throw std::domain_error("transition: t must be nonzero");
  if (limit) photon.eps = 0.0;
  photon.validate(/*allow_zero_eps=*/limit);
  const double tau = std::abs(t);
  const double lam = sd.lambda_e;
  const double nu = photon.nu, eps = photon.eps;

  TransitionBreakdown out;
  out.t = t;
  TransitionWork w{tau, &photon, &sd, &p};

  const cplx chi_run = w.chi(-iu * lam);
  const cplx q_run = poly_q(-iu * lam, p, lam);
  out.runaway = std::exp(-lam * tau) * lam * lam * chi_run / q_run;

  const cplx z2 = sd.z_plus;
  out.resonance = -2.0 * std::exp(-iu * z2 * tau) * z2 * (2.0 * z2 + iu * lam) * w.chi(z2) /
                  ((z2 + iu * lam) * poly_q_prime(z2, p, lam));

  const cplx w2 = limit ? cplx(nu, 0.0) : chi_pole(2, photon);
  const cplx r2 = limit ? cplx(-1.0 / (2.0 * nu), 0.0) : chi_residue(2, photon);
  out.photon_pole = -2.0 * std::exp(-iu * w2 * tau) * w2 * (2.0 * w2 + iu * lam) * r2 /
                    ((w2 + iu * lam) * poly_q(w2, p, lam));

  // s-integrals
  S1Integrand s1{&w, std::exp(-lam * tau) * chi_run / q_run};
  quad::Result rs1 = quad::integrate_halfline(s1, 1.0 / tau, opt,
                                              {nu, 0.5 * lam, 0.98 * lam, lam, 1.02 * lam, 10.0 * lam});
  // algebraic tail of the lam^3 subtraction piece, as in J2
  if (std::abs(rs1.truncation - lam) > 0.5 * lam)
    rs1.value += -iu * s1.sub_const * lam * lam * lam * (0.5 / lam) *
                 std::log((rs1.truncation + lam) / std::abs(rs1.truncation - lam));
  out.s_integral_1 = (2.0 / pi) * rs1.value;

  auto s2f = [&](double s) {
    return std::exp(-s * tau) * s * (2.0 * s + lam) * w.chi(iu * s) / ((s + lam) * poly_q(iu * s, p, lam));
  };
  quad::Result rs2 = quad::integrate_halfline(s2f, 1.0 / tau, opt, {nu, lam, 10.0 * lam});
  out.s_integral_2 = -(iu / pi) * rs2.value;
  out.quad_error = rs1.error + rs2.error;

  // dual path for the singular s-integral: window-excision principal value of
  // the un-subtracted integrand (the lam^3 piece integrates to zero in the
  // principal-value sense)
  {
    auto numerator = [&](double s) {
      return 0.5 * iu * std::exp(-s * tau) * s * (2.0 * s - lam) * w.chi(-iu * s) /
             poly_q(-iu * s, p, lam);
    };
    quad::Result pv = quad::pv_halfline(numerator, lam, 1.0 / tau, opt);
    const cplx alt = (2.0 / pi) * pv.value;
    out.s1_dual_gap = std::abs(alt - out.s_integral_1);
    out.quad_error += pv.error;
  }

  // cut integrals along z = +-nu +- u - i eps, u in (0, inf)
  if (!limit) {
    auto cut_kernel = [&](cplx z) {
      return z * (2.0 * z + iu * lam) / ((z + iu * lam) * poly_q(z, p, lam));
    };
    auto cut_leg = [&](double sign) {
      const cplx z0 = cplx(sign * nu, -eps);
      auto smooth = [&](double u) { return cut_kernel(z0 + sign * u); };
      // oscillatory in u with frequency tau (phase e^{-i t z} = const * e^{-i t sign u})
      const double cut_at = std::max({60.0 / tau, 40.0 * lam, 60.0 * nu});
      std::vector<double> bp{0.0, nu, lam, 5.0 * lam, cut_at};
      std::sort(bp.begin(), bp.end());
      bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
      bp.erase(std::remove_if(bp.begin(), bp.end(), [&](double x) { return x > cut_at; }), bp.end());
      if (bp.back() != cut_at) bp.push_back(cut_at);
      quad::Result r = quad::filon(smooth, sign * tau, bp, std::min(nu, lam) / 16.0);
      // the kernel decays like 1/u along the ray
      cplx tail = quad::algebraic_tail([&](double u) { return smooth(u); }, sign * tau, cut_at, 1, 2);
      return std::exp(-iu * tau * z0) * (r.value + tail);
    };
    const cplx pplus = cut_leg(1.0);
    const cplx pminus = cut_leg(-1.0);
    const cplx front = -iu * eps / (2.0 * std::pow(nu, 3));
    out.cut_c = front * (pplus + pminus);
    out.cut_pm = front * (pplus - pminus);
  }

  out.total = out.runaway + out.resonance + out.photon_pole + out.s_integral_1 + out.s_integral_2 +
              out.cut_c + out.cut_pm;
  if (t < 0.0) {
    for (cplx* v : {&out.runaway, &out.resonance, &out.photon_pole, &out.s_integral_1,
                    &out.s_integral_2, &out.cut_c, &out.cut_pm, &out.total})
      *v = std::conj(*v);
  }
  out.A = transition_prefactor(sd, p) * out.total;
  out.A_hat = limit ? cplx(0.0) : out.A / (std::sqrt(photon.norm_sq(p)) * std::sqrt(sd.kappa0));
  return out;
}

}  // namespace

TransitionBreakdown transition_eps(double t, const PhotonSpec& photon, const SpectralData& sd,
                                   const PhysicalParams& p, const quad::Options& opt) {
  if (std::abs(photon.nu - sd.omega_e) < 1e-6 * sd.omega_e)
    throw std::domain_error("transition_eps: nu collides with the resonance, refine quadrature");
  return transition_impl(t, photon, sd, p, opt, false);
}

TransitionBreakdown transition_limit_point(double t, const PhotonSpec& photon, const SpectralData& sd,
                                           const PhysicalParams& p, const quad::Options& opt) {
  return transition_impl(t, photon, sd, p, opt, true);
}

TransitionSeries transition_series(const std::vector<double>& grid, const PhotonSpec& photon,
                                   const SpectralData& sd, const PhysicalParams& p, bool limit,
                                   const quad::Options& opt) {
  TransitionSeries out;
  out.points = parallel_map<TransitionBreakdown>(grid.size(), [&](size_t i) {
    return limit ? transition_limit_point(grid[i], photon, sd, p, opt)
                 : transition_eps(grid[i], photon, sd, p, opt);
  });
  return out;
}

cplx transition_c3(const PhotonSpec& photon, const SpectralData& sd, const PhysicalParams& p) {
  const double nu = photon.nu, lam = sd.lambda_e;
  const cplx coeff = (2.0 * nu + iu * lam) / ((nu + iu * lam) * poly_q(nu, p, lam));
  return transition_prefactor(sd, p) * coeff;
}

cplx geometric_factor(const vec3& k, const cvec3& zeta1, const cvec3& zeta2) {
  const cvec3 cr = ccross(conj3(zeta1), zeta2);
  return k[0] * cr[0] + k[1] * cr[1] + k[2] * cr[2];
}

cplx permanent(const std::vector<cplx>& matrix, int n) {
  if (n < 0 || int(matrix.size()) != n * n) throw std::domain_error("permanent: bad dimensions");
  if (n > 12) throw std::domain_error("permanent: n > 12 not supported");
  if (n == 0) return 1.0;
  // Ryser: perm = (-1)^n sum_{S != 0} (-1)^|S| prod_i sum_{j in S} a_ij
  std::vector<cplx> rowsum(n, cplx(0.0));
  cplx total = 0.0;
  unsigned gray = 0;
  double sign = 1.0;
  const unsigned full = (1u << n) - 1u;
  for (unsigned k = 1; k <= full; ++k) {
    const unsigned next = k ^ (k >> 1);
    const unsigned changed = gray ^ next;
    int j = 0;
    while (!((changed >> j) & 1u)) ++j;
    const double dir = (next & changed) ? 1.0 : -1.0;
    for (int i = 0; i < n; ++i) rowsum[i] += dir * matrix[size_t(i) * n + j];
    gray = next;
    sign = -sign;  // parity of |S| flips with each Gray step
    cplx prod = 1.0;
    for (int i = 0; i < n; ++i) prod *= rowsum[i];
    total += sign * prod;
  }
  const double front = (n % 2 == 0) ? 1.0 : -1.0;
  return front * total;
}

FockAmplitude fock_amplitude(const std::vector<cvec3>& initial_levels,
                             const std::vector<PhotonSpec>& final_photons,
                             const std::vector<cvec3>& final_levels, double t,
                             const SpectralData& sd, const PhysicalParams& p,
                             const quad::Options& opt) {
  FockAmplitude out;
  const int n = int(initial_levels.size());
  if (int(final_photons.size() + final_levels.size()) != n) {
    out.raw = out.permanent_sum = out.normalized = 0.0;
    out.sector_match = false;
    return out;
  }
  if (n == 0) {
    out.raw = out.permanent_sum = out.normalized = 1.0;
    return out;
  }

  const cplx S = survival_terms(t, sd, p, opt).S;
  std::vector<cplx> M(size_t(n) * n);
  const int nph = int(final_photons.size());
  for (int i = 0; i < nph; ++i) {
    const PhotonSpec& ph = final_photons[i];
    const cplx A = (ph.eps > 0.0 ? transition_eps(t, ph, sd, p, opt)
                                 : transition_limit_point(t, ph, sd, p, opt))
                       .A;
    for (int j = 0; j < n; ++j)
      M[size_t(i) * n + j] = A * geometric_factor(ph.k, ph.zeta, initial_levels[j]);
  }
  for (int i = 0; i < int(final_levels.size()); ++i)
    for (int j = 0; j < n; ++j)
      M[size_t(nph + i) * n + j] = S * cdot(final_levels[i], initial_levels[j]);

  double nfact = 1.0;
  for (int k = 2; k <= n; ++k) nfact *= k;
  out.permanent_sum = permanent(M, n);
  out.raw = out.permanent_sum / nfact;

  // ||S_n(x_1 x ... x x_n)||^2 = perm(Gram)/n!; photon-level cross overlaps
  // vanish exactly, distinct photons are treated as orthogonal, so the Gram
  // permanent factorizes into the level block times prod ||phi^eps||^2.
  auto level_gram_perm = [&](const std::vector<cvec3>& levels) {
    const int m = int(levels.size());
    if (m == 0) return 1.0;
    std::vector<cplx> gram(size_t(m) * m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) gram[size_t(i) * m + j] = sd.kappa0 * cdot(levels[i], levels[j]);
    return permanent(gram, m).real();
  };
  double fin_norm_sq = level_gram_perm(final_levels) / nfact;
  for (const auto& ph : final_photons) fin_norm_sq *= ph.eps > 0.0 ? ph.norm_sq(p) : 1.0;
  const double ini_norm_sq = level_gram_perm(initial_levels) / nfact;
  out.normalized = out.raw / std::sqrt(ini_norm_sq * fin_norm_sq);
  return out;
}

}  // namespace oscrad

#include "oscrad/verify.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <random>

#include "oscrad/amplitudes.hpp"
#include "oscrad/oracle.hpp"
#include "oscrad/special.hpp"
#include "oscrad/wavetoy.hpp"

namespace oscrad::verify {

namespace {

using Check = std::function<CheckResult()>;

CheckResult run_guarded(const std::string& name, const Check& body) {
  try {
    CheckResult r = body();
    r.name = name;
    return r;
  } catch (const std::exception& ex) {
    CheckResult r;
    r.name = name;
    r.pass = false;
    r.gap = std::numeric_limits<double>::infinity();
    r.note = std::string("exception: ") + ex.what();
    return r;
  }
}

double linfit_slope(const std::vector<double>& logx, const std::vector<double>& logy) {
  const size_t n = logx.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += logx[i];
    sy += logy[i];
    sxx += logx[i] * logx[i];
    sxy += logx[i] * logy[i];
  }
  return (double(n) * sxy - sx * sy) / (double(n) * sxx - sx * sx);
}

}  // namespace

std::vector<CheckResult> run_all(const PhysicalParams& p, const PhotonSpec& photon,
                                 const VerifyOptions& opt) {
  std::vector<CheckResult> out;
  const SpectralData sd = solve_spectral_data(p);
  auto add = [&](const std::string& name, const Check& body) {
    out.push_back(run_guarded(name, body));
  };

  add("lambda_cubic_residual", [&] {
    CheckResult r;
    r.tolerance = 1e-12;
    r.gap = 0.0;
    for (double e : {0.01, 0.03, 0.1, 0.3}) {
      PhysicalParams q = p;
      q.e = e;
      const double lam = solve_lambda_e(q);
      const double A = q.coupling();
      const double res = std::abs(A * lam * lam * lam - q.m * (q.omega0 * q.omega0 + lam * lam));
      const double scale = A * lam * lam * lam;
      r.gap = std::max(r.gap, res / scale);
    }
    r.pass = r.gap < r.tolerance;
    return r;
  });

  add("root_set_factorization", [&] {
    // {i lambda_e, z_+, z_-} must be the zero set of Lambda_+^{-1}
    CheckResult r;
    r.tolerance = 1e-10;
    const double A = p.coupling();
    auto inv = [&](cplx z) { return iu * A * z * z * z - p.m * (p.omega0 * p.omega0 - z * z); };
    const double scale = A * std::pow(sd.lambda_e, 3) * p.m;
    r.gap = 0.0;
    for (cplx z : {iu * sd.lambda_e, sd.z_plus, sd.z_minus})
      r.gap = std::max(r.gap, std::abs(inv(z)) / scale);
    r.pass = r.gap < r.tolerance;
    return r;
  });

  add("green_overlap_oracle", [&] {
    CheckResult r;
    r.tolerance = 1e-8;
    r.gap = 0.0;
    for (cplx z : {cplx(1.0, 0.5), cplx(-0.4, 1.3), cplx(0.0, 2.0)}) {
      const BranchedPoint pt{z, Branch::upper};
      const cplx closed = green_overlap(pt, sd.lambda_e, p);
      oracle::OverlapArgs args;
      args.point = pt;
      args.lambda_e = sd.lambda_e;
      const cplx direct = oracle::radial_overlap_oracle(oracle::OverlapKind::green_green, args, p).value;
      r.gap = std::max(r.gap, std::abs(closed - direct) / std::abs(closed));
    }
    r.pass = r.gap < r.tolerance;
    return r;
  });

  add("chi_overlap_oracle", [&] {
    CheckResult r;
    r.tolerance = 1e-8;
    r.gap = 0.0;
    for (cplx z : {cplx(0.4, 0.9), cplx(-0.7, 1.2), cplx(0.0, 0.5), cplx(1.9, 0.8), cplx(0.3, 2.4)}) {
      const BranchedPoint pt{z, Branch::upper};
      const cplx closed = chi_eps(pt, photon).total;
      oracle::OverlapArgs args;
      args.point = pt;
      args.photon = photon;
      const cplx direct = oracle::radial_overlap_oracle(oracle::OverlapKind::photon_green, args, p).value;
      r.gap = std::max(r.gap, std::abs(closed - direct) / std::abs(closed));
    }
    r.pass = r.gap < r.tolerance;
    return r;
  });

  add("bracket_oracle", [&] {
    CheckResult r;
    r.tolerance = 1e-7;
    const double radius = 0.37;
    const BranchedPoint pt{cplx(1.0, 0.5), Branch::upper};
    const cplx closed = regularized_coeffs(pt, radius, p).green_bracket;
    oracle::OverlapArgs args;
    args.point = pt;
    args.radius = radius;
    const cplx direct = oracle::radial_overlap_oracle(oracle::OverlapKind::bracket, args, p).value;
    const double rel = std::abs(closed - direct) / std::abs(closed);
    // static case against the exact shell self-energy
    const double stat = oracle::shell_self_energy_oracle(1.0);
    const double stat_rel = std::abs(stat - 1.0 / (4.0 * pi)) * 4.0 * pi;
    r.gap = std::max(rel, stat_rel);
    r.pass = r.gap < r.tolerance;
    return r;
  });

  add("regularized_point_limit", [&] {
    CheckResult r;
    const BranchedPoint pt{cplx(1.0, 1.0), Branch::upper};
    const cplx k1m_limit = p.m + iu * p.coupling() * pt.z;
    const cplx lam_limit = lambda_pm(pt, p, sd.lambda_e);
    std::vector<double> lr, le1, le2;
    for (double radius : {1e-2, 1e-3, 1e-4}) {
      const RegularizedCoeffs rc = regularized_coeffs(pt, radius, p);
      lr.push_back(std::log(radius));
      le1.push_back(std::log(std::abs(rc.k1r * rc.bare_mass - k1m_limit)));
      le2.push_back(std::log(std::abs(rc.lambda_r - lam_limit)));
    }
    const double s1 = linfit_slope(lr, le1);
    const double s2 = linfit_slope(lr, le2);
    r.tolerance = 0.15;
    r.gap = std::max(std::abs(s1 - 1.0), std::abs(s2 - 1.0));
    r.pass = r.gap < r.tolerance;
    r.note = "k1 m_r slope " + std::to_string(s1) + ", Lambda^r slope " + std::to_string(s2);
    return r;
  });

  add("shell_mass_split", [&] {
    CheckResult r;
    r.tolerance = 1e-9;
    const double em = renormalized_mass_split(p, 1.0).second;
    const double expected = 2.0 * p.e * p.e / (3.0 * p.c * p.c);
    const double oracle_em =
        (8.0 * pi / 3.0) * (p.e * p.e / (p.c * p.c)) * oracle::shell_self_energy_oracle(1.0);
    r.gap = std::max(std::abs(em - expected) / expected, std::abs(em - oracle_em) / expected);
    r.pass = r.gap < r.tolerance;
    return r;
  });

  add("pv_vs_exponential_integral", [&] {
    CheckResult r;
    r.tolerance = 1e-8;
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> ut(0.01, 10.0), ul(0.5, 50.0);
    r.gap = 0.0;
    for (int i = 0; i < 20; ++i) {
      const double t = ut(rng), lam = ul(rng);
      const double a = special::pv_laplace_pole(t, lam);
      const double b = special::pv_laplace_pole_quadrature(t, lam);
      r.gap = std::max(r.gap, std::abs(a - b) / (1.0 + std::abs(a)));
    }
    r.pass = r.gap < r.tolerance;
    return r;
  });

  add("scaled_ei_derivative", [&] {
    // d/dx [e^x scaled_ei(x)] = e^x / x, checked scaled by e^{-x}
    CheckResult r;
    r.tolerance = 1e-6;
    r.gap = 0.0;
    for (double x = 1.0; x <= 50.0; x += 3.5) {
      const double h = 1e-5 * x;
      const double d = (special::ei(x + h) - special::ei(x - h)) / (2.0 * h);
      r.gap = std::max(r.gap, std::abs(d - std::exp(x) / x) / (std::exp(x) / x));
    }
    r.pass = r.gap < r.tolerance;
    return r;
  });

  add("j2_dual_path", [&] {
    CheckResult r;
    r.tolerance = 1e-7;
    r.gap = 0.0;
    for (double t : {0.01, 0.05, 0.2, 1.0, 3.0, 10.0}) {
      const SurvivalBreakdown b = survival_terms(t, sd, p);
      const double scale = std::abs(b.runaway) + std::abs(b.resonance) + std::abs(b.j1) +
                           std::abs(b.j2) + 1e-300;
      r.gap = std::max(r.gap, b.j2_gap / scale);
    }
    r.pass = r.gap < r.tolerance;
    return r;
  });

  add("stone_agreement", [&] {
    CheckResult r;
    r.tolerance = 1e-5;
    r.gap = 0.0;
    const std::vector<double> ts =
        opt.stone_points >= 3 ? std::vector<double>{0.5, 1.0, 5.0} : std::vector<double>{1.0};
    for (double t : ts) {
      const cplx closed = survival_terms(t, sd, p).S;
      const cplx stone = oracle::stone_survival(t, sd, p).value;
      r.gap = std::max(r.gap, std::abs(closed - stone) / std::abs(closed));
    }
    r.pass = r.gap < r.tolerance;
    return r;
  });

  add("stone_double_agreement", [&] {
    CheckResult r;
    r.tolerance = 1e-4;
    r.gap = 0.0;
    for (double t : {0.5, 1.0, 5.0}) {
      const cplx one = oracle::stone_survival(t, sd, p).value;
      const cplx two = oracle::stone_survival_double(t, sd, p).value;
      r.gap = std::max(r.gap, std::abs(one - two) / std::abs(one));
    }
    r.pass = r.gap < r.tolerance;
    return r;
  });

  add("s_kernel_identity", [&] {
    CheckResult r;
    r.tolerance = 1e-6;
    const cplx k2v = oracle::s_kernel_identity(sd.z_plus);
    const cplx k1v = oracle::s_kernel_identity(sd.z_minus);
    r.gap = std::max(std::abs(k2v - 1.0), std::abs(k1v + 1.0));
    r.pass = r.gap < r.tolerance;
    return r;
  });

  add("projection_weight", [&] {
    CheckResult r;
    r.tolerance = 1e-3;
    const cplx w = survival_zero_limit(sd, p);
    const double target = sd.kappa2 * sd.lambda_e / sd.kappa_sq;
    r.gap = std::abs(w - target) / target;
    r.pass = r.gap < r.tolerance && w.real() > 0.0 && w.real() <= 1.0 + 1e-9;
    r.note = "S_hat(0+) = " + std::to_string(w.real());
    return r;
  });

  add("hermiticity", [&] {
    CheckResult r;
    r.tolerance = 1e-10;
    r.gap = 0.0;
    for (double t : {0.3, 0.9, 2.0, 4.0, 7.0}) {
      const cplx plus = survival_terms(t, sd, p).S;
      const cplx minus = survival_terms(-t, sd, p).S;
      r.gap = std::max(r.gap, std::abs(minus - std::conj(plus)) / std::abs(plus));
    }
    // independent path: the Stone integral evaluated at negative t
    const cplx sp = oracle::stone_survival(1.0, sd, p).value;
    const cplx sm = oracle::stone_survival(-1.0, sd, p).value;
    const double oracle_gap = std::abs(sm - std::conj(sp)) / std::abs(sp);
    r.gap = std::max(r.gap, oracle_gap * 1e-4);  // quadrature-level agreement
    r.pass = r.gap < r.tolerance && oracle_gap < 1e-5;
    return r;
  });

  add("contractivity", [&] {
    CheckResult r;
    r.tolerance = 1e-6;
    const double s0 = sd.kappa2 * sd.lambda_e / sd.kappa_sq;
    double worst = 0.0;
    for (int i = 0; i < 25; ++i) {
      const double lt = 0.1 * std::pow(600.0, i / 24.0);
      const double t = lt / sd.lambda_e;
      worst = std::max(worst, std::abs(survival_terms(t, sd, p).S_hat) - s0);
    }
    r.gap = worst;
    r.pass = worst < r.tolerance;
    return r;
  });

  add("cut_consistency", [&] {
    CheckResult r;
    r.tolerance = 1e-6;
    PhotonSpec ph = photon;
    ph.eps = 0.01 * ph.nu;
    const oracle::CutCheck cc = oracle::cut_integral_check(1.0, ph, sd, p);
    const double scale = std::abs(cc.cut_c) + std::abs(cc.cut_pm) + 1e-30;
    r.gap = (cc.gap_c + cc.gap_pm) / scale;
    r.pass = r.gap < r.tolerance && cc.converged;
    return r;
  });

  add("cut_eps_slope", [&] {
    CheckResult r;
    r.tolerance = 0.2;
    std::vector<double> le, lc;
    for (double fe : {1e-1, 1e-2, 1e-3}) {
      PhotonSpec ph = photon;
      ph.eps = fe * ph.nu;
      const TransitionBreakdown tb = transition_eps(1.0, ph, sd, p);
      le.push_back(std::log(ph.eps));
      lc.push_back(std::log(std::abs(tb.cut_c + tb.cut_pm)));
    }
    const double slope = linfit_slope(le, lc);
    r.gap = std::abs(slope - 1.0);
    r.pass = r.gap < r.tolerance;
    r.note = "cut slope " + std::to_string(slope);
    return r;
  });

  add("transition_eps_ladder", [&] {
    CheckResult r;
    r.tolerance = 1e-3;
    r.gap = 0.0;
    for (double t : {1.0, 5.0}) {
      const cplx a0 = transition_limit_point(t, photon, sd, p).A;
      PhotonSpec ph = photon;
      ph.eps = 1e-4 * ph.nu;
      const cplx aeps = transition_eps(t, ph, sd, p).A;
      r.gap = std::max(r.gap, std::abs(aeps - a0) / std::abs(a0));
    }
    r.pass = r.gap < r.tolerance;
    return r;
  });

  add("wavetoy_batch", [&] {
    CheckResult r;
    r.tolerance = 1e-12;
    std::mt19937_64 rng(opt.seed + 1);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < opt.wavetoy_systems; ++trial) {
      const int n = 2 + int(rng() % 5);
      Eigen::MatrixXd raw(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) raw(i, j) = gauss(rng);
      Eigen::MatrixXd b = 0.5 * (raw + raw.transpose());
      b += (b.cwiseAbs().rowwise().sum().maxCoeff() + 0.5) * Eigen::MatrixXd::Identity(n, n);
      const wavetoy::WaveToySystem sys = wavetoy::build_system(b);
      worst = std::max(worst, sys.g_skewness_residual / (1.0 + sys.B.squaredNorm()));
      worst = std::max(worst, sys.j_square_residual / (1.0 + sys.B.norm()));
      Eigen::VectorXd x(2 * n);
      for (int i = 0; i < 2 * n; ++i) x(i) = gauss(rng);
      const double t = 0.1 + 3.0 * std::abs(gauss(rng));
      worst = std::max(worst,
                       std::abs(sys.g_norm(wavetoy::propagate(sys, t, x)) - sys.g_norm(x)) / sys.g_norm(x));
      worst = std::max(worst, wavetoy::conjugation_check(sys, t, x) / sys.g_norm(x));
      const Eigen::VectorXd xt = wavetoy::propagate(sys, 0.7, wavetoy::propagate(sys, t, x));
      worst = std::max(worst,
                       (xt - wavetoy::propagate(sys, t + 0.7, x)).norm() / x.norm());
    }
    r.gap = worst;
    r.pass = worst < r.tolerance;
    return r;
  });

  add("wavetoy_stone_gap", [&] {
    CheckResult r;
    r.tolerance = 1e-2;
    Eigen::MatrixXd b(3, 3);
    b << 1.3, 0.2, 0.0, 0.2, 2.1, -0.3, 0.0, -0.3, 0.9;
    const wavetoy::WaveToySystem sys = wavetoy::build_system(b);
    Eigen::VectorXd x(6);
    x << 0.4, -0.2, 0.8, 0.1, 0.5, -0.7;
    const double a = 50.0 * sys.beigs.cwiseAbs().maxCoeff();
    const auto sc = wavetoy::stone_formula_check(sys, 1.4, a, 1e-3, x, x);
    r.gap = sc.gap / x.squaredNorm();
    r.pass = r.gap < r.tolerance;
    return r;
  });

  add("fock_identities", [&] {
    CheckResult r;
    r.tolerance = 1e-12;
    std::mt19937_64 rng(opt.seed + 2);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const int n = 3;
    wavetoy::TruncatedFock fock(n, 4);
    // random unitary from a hermitian generator
    Eigen::MatrixXcd h(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) h(i, j) = cplx(gauss(rng), gauss(rng));
    h = (h + h.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    const Eigen::MatrixXcd u = es.eigenvectors() *
                               (iu * es.eigenvalues().cast<cplx>().array()).exp().matrix().asDiagonal() *
                               es.eigenvectors().adjoint();
    double worst = 0.0;
    for (int k = 1; k <= 3; ++k) {
      std::vector<Eigen::VectorXcd> psi, phi;
      for (int j = 0; j < k; ++j) {
        Eigen::VectorXcd a(n), bb(n);
        for (int i = 0; i < n; ++i) {
          a(i) = cplx(gauss(rng), gauss(rng));
          bb(i) = cplx(gauss(rng), gauss(rng));
        }
        psi.push_back(a);
        phi.push_back(bb);
      }
      worst = std::max(worst, wavetoy::fock_functoriality_check(fock, u, psi, phi));
    }
    // sector preservation through the evolution generated by dGamma
    const Eigen::MatrixXcd dg = fock.dgamma(h);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> esd(dg);
    const Eigen::MatrixXcd evolution =
        esd.eigenvectors() *
        (-iu * 0.37 * esd.eigenvalues().cast<cplx>().array()).exp().matrix().asDiagonal() *
        esd.eigenvectors().adjoint();
    double cross = 0.0;
    for (int i = 0; i < fock.dim(); ++i)
      for (int j = 0; j < fock.dim(); ++j)
        if (fock.sector_of(i) != fock.sector_of(j)) cross = std::max(cross, std::abs(evolution(i, j)));
    worst = std::max(worst, cross * 1e2);  // sector leakage weighted into the same gap
    r.gap = worst;
    r.pass = worst < r.tolerance && cross < 1e-14;
    r.note = "sector leakage " + std::to_string(cross);
    return r;
  });

  return out;
}

}  // namespace oscrad::verify

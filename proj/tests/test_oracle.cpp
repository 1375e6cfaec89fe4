#include <doctest.h>

#include <cmath>

#include "oscrad/oracle.hpp"

using namespace oscrad;

namespace {

PhysicalParams natural() {
  PhysicalParams p;
  p.e = 0.3;
  return p;
}

}  // namespace

TEST_CASE("Stone oracle agrees with the closed form across the grid") {
  const PhysicalParams p = natural();
  const SpectralData s = solve_spectral_data(p);
  for (double lt : {0.1, 1.0, 5.0, 16.7, 50.0, 100.0}) {
    const double t = lt / s.lambda_e;
    const cplx closed = survival_terms(t, s, p).S;
    const oracle::QuadratureReport rep = oracle::stone_survival(t, s, p);
    CHECK(std::abs(closed - rep.value) < 1e-5 * std::abs(closed));
    CHECK(rep.converged);
  }
}

TEST_CASE("Stone oracle frozen reference at t = 1") {
  const PhysicalParams p = natural();
  const SpectralData s = solve_spectral_data(p);
  const oracle::QuadratureReport rep = oracle::stone_survival(1.0, s, p);
  CHECK(rep.value.real() == doctest::Approx(6.2871087058).epsilon(2e-6));
  CHECK(rep.value.imag() == doctest::Approx(-10.3413169133).epsilon(2e-6));
}

TEST_CASE("Stone oracle t -> 0+ recovers the projection weight") {
  const PhysicalParams p = natural();
  const SpectralData s = solve_spectral_data(p);
  const double lam = s.lambda_e;
  auto shat = [&](double t) { return oracle::stone_survival(t, s, p).value / s.kappa0; };
  const cplx s1 = shat(1e-2 / lam), s2 = shat(1e-3 / lam), s3 = shat(1e-4 / lam);
  const cplx r12 = (10.0 * s2 - s1) / 9.0;
  const cplx r23 = (10.0 * s3 - s2) / 9.0;
  const cplx extrap = (100.0 * r23 - r12) / 99.0;
  const double target = s.kappa2 * s.lambda_e / s.kappa_sq;
  CHECK(std::abs(extrap - target) < 1e-3 * target);
}

TEST_CASE("doubling the truncation changes the Stone value by less than its error") {
  const PhysicalParams p = natural();
  const SpectralData s = solve_spectral_data(p);
  oracle::StoneOptions near, far;
  far.lambda_max_factor = 400.0;
  const oracle::QuadratureReport a = oracle::stone_survival(1.0, s, p, near);
  const oracle::QuadratureReport b = oracle::stone_survival(1.0, s, p, far);
  CHECK(std::abs(a.value - b.value) < 4.0 * (a.error_estimate + 1e-12));
  CHECK(b.truncation_point == doctest::Approx(2.0 * a.truncation_point));
}

TEST_CASE("the two representations of the evolution agree") {
  const PhysicalParams p = natural();
  const SpectralData s = solve_spectral_data(p);
  for (double t : {0.5, 1.0, 5.0}) {
    const cplx one = oracle::stone_survival(t, s, p).value;
    const cplx two = oracle::stone_survival_double(t, s, p).value;
    CHECK(std::abs(one - two) < 1e-4 * std::abs(one));
  }
}

TEST_CASE("Stone oracle is hermitian in t") {
  const PhysicalParams p = natural();
  const SpectralData s = solve_spectral_data(p);
  const cplx plus = oracle::stone_survival(1.0, s, p).value;
  const cplx minus = oracle::stone_survival(-1.0, s, p).value;
  CHECK(std::abs(minus - std::conj(plus)) < 1e-6 * std::abs(plus));
}

TEST_CASE("s-kernel identity at the resonance roots") {
  const PhysicalParams p = natural();
  const SpectralData s = solve_spectral_data(p);
  CHECK(std::abs(oracle::s_kernel_identity(s.z_plus) - 1.0) < 1e-6);
  CHECK(std::abs(oracle::s_kernel_identity(s.z_minus) + 1.0) < 1e-6);
  // the s-integrand is even: the identity also holds with conjugated roots
  CHECK(std::abs(oracle::s_kernel_identity(-std::conj(s.z_minus)) - 1.0) < 1e-6);
}

TEST_CASE("radial oracle static anchors") {
  const PhysicalParams p = natural();
  const double lam = solve_lambda_e(p);

  oracle::OverlapArgs gg;
  gg.point = {cplx(0.0), Branch::upper};
  gg.lambda_e = lam;
  CHECK(oracle::radial_overlap_oracle(oracle::OverlapKind::green_green, gg, p).value.real() ==
        doctest::Approx(1.0 / (4.0 * pi * lam)).epsilon(1e-10));

  oracle::OverlapArgs br;
  br.point = {cplx(0.0, 1e-14), Branch::upper};
  br.radius = 1.0;
  CHECK(oracle::radial_overlap_oracle(oracle::OverlapKind::bracket, br, p).value.real() ==
        doctest::Approx(1.0 / (4.0 * pi)).epsilon(1e-7));

  CHECK(oracle::shell_self_energy_oracle(2.0) == doctest::Approx(1.0 / (8.0 * pi)).epsilon(1e-7));
}

TEST_CASE("cut integral check against the amplitude internals") {
  const PhysicalParams p = natural();
  const SpectralData s = solve_spectral_data(p);
  PhotonSpec ph;
  ph.nu = 1.3;
  ph.eps = 0.013;
  const oracle::CutCheck cc = oracle::cut_integral_check(1.0, ph, s, p);
  const double scale = std::abs(cc.cut_c) + std::abs(cc.cut_pm);
  CHECK(cc.converged);
  CHECK(cc.gap_c + cc.gap_pm < 1e-6 * scale);

  // t-reversal branch consistency
  const oracle::CutCheck cm = oracle::cut_integral_check(-1.0, ph, s, p);
  CHECK(std::abs(cm.cut_c - std::conj(cc.cut_c)) < 1e-9 * scale);
  CHECK(std::abs(cm.cut_pm - std::conj(cc.cut_pm)) < 1e-9 * scale);

  // vanishing as eps -> 0 with slope one, through the independent evaluator
  std::vector<double> le, lc;
  for (double fe : {1e-1, 1e-2, 1e-3}) {
    PhotonSpec q = ph;
    q.eps = fe * q.nu;
    const oracle::CutCheck c = oracle::cut_integral_check(1.0, q, s, p);
    le.push_back(std::log(q.eps));
    lc.push_back(std::log(std::abs(c.cut_c + c.cut_pm)));
  }
  const double slope = (lc[2] - lc[0]) / (le[2] - le[0]);
  CHECK(slope == doctest::Approx(1.0).epsilon(0.2));
}

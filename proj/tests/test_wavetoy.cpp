#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "oscrad/amplitudes.hpp"
#include "oscrad/wavetoy.hpp"

using namespace oscrad;
using wavetoy::TruncatedFock;
using wavetoy::WaveToySystem;

namespace {

Eigen::MatrixXd random_symmetric(std::mt19937_64& rng, int n, double floor_shift) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd raw(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) raw(i, j) = g(rng);
  Eigen::MatrixXd b = 0.5 * (raw + raw.transpose());
  b += (b.cwiseAbs().rowwise().sum().maxCoeff() + floor_shift) * Eigen::MatrixXd::Identity(n, n);
  return b;
}

Eigen::MatrixXcd random_unitary(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXcd h(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) h(i, j) = cplx(g(rng), g(rng));
  h = (h + h.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  return es.eigenvectors() *
         (iu * es.eigenvalues().cast<cplx>().array()).exp().matrix().asDiagonal() *
         es.eigenvectors().adjoint();
}

}  // namespace

TEST_CASE("identity system: W and G blocks") {
  const WaveToySystem sys = wavetoy::build_system(Eigen::MatrixXd::Identity(2, 2));
  Eigen::MatrixXd expect = Eigen::MatrixXd::Zero(4, 4);
  expect.topRightCorner(2, 2) = Eigen::MatrixXd::Identity(2, 2);
  expect.bottomLeftCorner(2, 2) = -Eigen::MatrixXd::Identity(2, 2);
  CHECK((sys.W - expect).norm() < 1e-15);
  CHECK((sys.G - Eigen::MatrixXd::Identity(4, 4)).norm() < 1e-15);
}

TEST_CASE("diagonal system invariants") {
  Eigen::MatrixXd b = Eigen::Vector3d(1.0, 2.0, 3.0).asDiagonal();
  const WaveToySystem sys = wavetoy::build_system(b);
  CHECK(sys.g_skewness_residual < 1e-14);
  CHECK(sys.j_square_residual < 1e-14);
}

TEST_CASE("construction guards") {
  Eigen::MatrixXd bad(2, 2);
  bad << 0.0, 1.0, -1.0, 0.0;  // antisymmetric
  CHECK_THROWS_AS(wavetoy::build_system(bad), std::domain_error);
  Eigen::MatrixXd sing(2, 2);
  sing << 1.0, 1.0, 1.0, 1.0;  // eigenvalue zero
  CHECK_THROWS_AS(wavetoy::build_system(sing), std::domain_error);
}

TEST_CASE("randomized batch: invariants, isometry, conjugation, group law") {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + int(rng() % 5);
    const WaveToySystem sys = wavetoy::build_system(random_symmetric(rng, n, 0.5));
    CHECK(sys.g_skewness_residual < 1e-12 * (1.0 + sys.B.squaredNorm()));
    CHECK(sys.j_square_residual < 1e-12 * (1.0 + sys.B.norm()));

    Eigen::VectorXd x(2 * n);
    for (int i = 0; i < 2 * n; ++i) x(i) = g(rng);
    const double t = 0.1 + 3.0 * std::abs(g(rng));

    // t = 0 is the identity
    CHECK((wavetoy::propagate(sys, 0.0, x) - x).norm() < 1e-14 * x.norm());
    // G-norm conservation
    CHECK(std::abs(sys.g_norm(wavetoy::propagate(sys, t, x)) - sys.g_norm(x)) <
          1e-12 * sys.g_norm(x));
    // Schroedinger conjugation
    CHECK(wavetoy::conjugation_check(sys, t, x) < 1e-12 * sys.g_norm(x));
    // group law
    const Eigen::VectorXd two_step = wavetoy::propagate(sys, 0.6, wavetoy::propagate(sys, t, x));
    CHECK((two_step - wavetoy::propagate(sys, t + 0.6, x)).norm() < 1e-12 * x.norm());
  }
}

TEST_CASE("second derivative matches the wave equation") {
  std::mt19937_64 rng(7);
  const WaveToySystem sys = wavetoy::build_system(random_symmetric(rng, 4, 0.8));
  Eigen::VectorXd x(8);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int i = 0; i < 8; ++i) x(i) = g(rng);
  const double t = 0.9;
  // central differences of phi(t) against -B^2 phi(t), refining h
  std::vector<double> hs{1e-2, 5e-3, 2.5e-3}, errs;
  for (double h : hs) {
    const Eigen::VectorXd mid = wavetoy::propagate(sys, t, x).head(4);
    const Eigen::VectorXd hi = wavetoy::propagate(sys, t + h, x).head(4);
    const Eigen::VectorXd lo = wavetoy::propagate(sys, t - h, x).head(4);
    const Eigen::VectorXd acc = (hi - 2.0 * mid + lo) / (h * h);
    errs.push_back((acc + sys.B * sys.B * mid).norm());
  }
  const double slope = std::log(errs[2] / errs[0]) / std::log(hs[2] / hs[0]);
  CHECK(slope == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("harmonic special case: B = omega0 I is a rotation") {
  const double w0 = 1.7;
  const WaveToySystem sys = wavetoy::build_system(w0 * Eigen::MatrixXd::Identity(2, 2));
  Eigen::VectorXd x(4);
  x << 1.0, -0.3, 0.2, 0.9;
  const double t = 0.77;
  const Eigen::VectorXd y = wavetoy::propagate(sys, t, x);
  // phi(t) = cos(w0 t) phi + sin(w0 t)/w0 phidot
  CHECK(y(0) == doctest::Approx(std::cos(w0 * t) * 1.0 + std::sin(w0 * t) / w0 * 0.2).epsilon(1e-13));
  CHECK(wavetoy::conjugation_check(sys, t, x) < 1e-13);
}

TEST_CASE("Stone formula check: gap shrinks with eps and localizes on eigenvectors") {
  Eigen::MatrixXd b(3, 3);
  b << 1.3, 0.2, 0.0, 0.2, 2.1, -0.3, 0.0, -0.3, 0.9;
  const WaveToySystem sys = wavetoy::build_system(b);
  Eigen::VectorXd x(6);
  x << 0.4, -0.2, 0.8, 0.1, 0.5, -0.7;
  const double a = 50.0 * sys.beigs.cwiseAbs().maxCoeff();

  const auto c1 = wavetoy::stone_formula_check(sys, 1.4, a, 1e-3, x, x);
  CHECK(c1.gap < 1e-2 * x.squaredNorm());
  const auto c2 = wavetoy::stone_formula_check(sys, 1.4, a, 5e-4, x, x);
  CHECK(c2.gap < 0.7 * c1.gap);  // approximately halves with eps

  CHECK_THROWS_AS(wavetoy::stone_formula_check(sys, 1.0, 0.5, 1e-3, x, x), std::domain_error);

  // eigenvector state: the spectral measure localizes at its eigenvalue
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sys.B);
  const double beta = es.eigenvalues()(1);
  Eigen::VectorXd ev(6);
  ev.head(3) = es.eigenvectors().col(1);
  ev.tail(3) = beta * es.eigenvectors().col(1);  // i-eigenmode of the flow
  const cplx iw_eval = iu * cplx(0.0, 1.0);
  (void)iw_eval;
  const auto on = wavetoy::stone_formula_check(sys, 0.0, a, 1e-3, ev, ev);
  // at t = 0 the integral reproduces <ev, ev>_G concentrated near lambda = -beta
  CHECK(std::abs(on.approx - on.exact) < 1e-2 * ev.squaredNorm() * (1.0 + beta * beta));
}

TEST_CASE("truncated Fock: commutation relation below the truncation") {
  TruncatedFock fock(3, 4);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::VectorXcd f(3), h(3);
  for (int i = 0; i < 3; ++i) {
    f(i) = cplx(g(rng), g(rng));
    h(i) = cplx(g(rng), g(rng));
  }
  const Eigen::MatrixXcd comm = fock.annihilation(f) * fock.creation(h) -
                                fock.creation(h) * fock.annihilation(f);
  const cplx expect = f.dot(h);  // [a(f), a*(h)] = <f, h>
  // exact on sectors strictly below the truncation level
  for (int i = 0; i < fock.dim(); ++i) {
    if (fock.sector_of(i) >= fock.max_particles()) continue;
    for (int j = 0; j < fock.dim(); ++j) {
      if (fock.sector_of(j) >= fock.max_particles()) continue;
      const cplx want = (i == j) ? expect : cplx(0.0);
      CHECK(std::abs(comm(i, j) - want) < 1e-13 * (1.0 + std::abs(expect)));
    }
  }
}

TEST_CASE("functoriality: permanents against the lifted unitary") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g(0.0, 1.0);
  TruncatedFock fock(3, 4);
  const Eigen::MatrixXcd u = random_unitary(rng, 3);

  // n = 1 reduces to the one-particle matrix element
  Eigen::VectorXcd psi(3), phi(3);
  for (int i = 0; i < 3; ++i) {
    psi(i) = cplx(g(rng), g(rng));
    phi(i) = cplx(g(rng), g(rng));
  }
  CHECK(wavetoy::fock_functoriality_check(fock, u, {psi}, {phi}) < 1e-13);

  // n = 2 with the identity and orthonormal vectors: the Gram permanent
  Eigen::VectorXcd e1 = Eigen::VectorXcd::Zero(3), e2 = Eigen::VectorXcd::Zero(3);
  e1(0) = 1.0;
  e2(1) = 1.0;
  CHECK(wavetoy::fock_functoriality_check(fock, Eigen::MatrixXcd::Identity(3, 3), {e1, e2},
                                          {e1, e2}) < 1e-14);

  // n = 3 random states against the brute-force permutation sum: the check
  // itself compares to perm/n!, run it across sectors
  for (int k = 1; k <= 3; ++k) {
    std::vector<Eigen::VectorXcd> a, b;
    for (int j = 0; j < k; ++j) {
      Eigen::VectorXcd va(3), vb(3);
      for (int i = 0; i < 3; ++i) {
        va(i) = cplx(g(rng), g(rng));
        vb(i) = cplx(g(rng), g(rng));
      }
      a.push_back(va);
      b.push_back(vb);
    }
    CHECK(wavetoy::fock_functoriality_check(fock, u, a, b) < 1e-12);
  }
}

TEST_CASE("dGamma: sector eigenvalues are sums of one-particle eigenvalues") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g(0.0, 1.0);
  const int n = 3;
  Eigen::MatrixXcd h(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) h(i, j) = cplx(g(rng), g(rng));
  h = (h + h.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  const Eigen::VectorXd ev = es.eigenvalues();

  TruncatedFock fock(n, 3);
  const Eigen::MatrixXcd dg = fock.dgamma(h);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> esd(dg);

  // expected multiset: all sums of k eigenvalues with repetition, k <= 3
  std::vector<double> expected;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      expected.push_back(ev(i) + ev(j));
      for (int k = j; k < n; ++k) expected.push_back(ev(i) + ev(j) + ev(k));
    }
  expected.push_back(0.0);  // vacuum
  for (int i = 0; i < n; ++i) expected.push_back(ev(i));
  std::sort(expected.begin(), expected.end());
  Eigen::VectorXd got = esd.eigenvalues();
  std::vector<double> gotv(got.data(), got.data() + got.size());
  std::sort(gotv.begin(), gotv.end());
  REQUIRE(gotv.size() == expected.size());
  for (size_t i = 0; i < gotv.size(); ++i)
    CHECK(gotv[i] == doctest::Approx(expected[i]).epsilon(1e-11));
}

TEST_CASE("sector preservation of the lifted evolution") {
  std::mt19937_64 rng(29);
  TruncatedFock fock(3, 4);
  const Eigen::MatrixXcd u = random_unitary(rng, 3);
  const Eigen::MatrixXcd gu = fock.gamma(u);
  double cross = 0.0;
  for (int i = 0; i < fock.dim(); ++i)
    for (int j = 0; j < fock.dim(); ++j)
      if (fock.sector_of(i) != fock.sector_of(j)) cross = std::max(cross, std::abs(gu(i, j)));
  CHECK(cross < 1e-14);

  // Gamma(U) from permanents must equal exp(-i dGamma(H)) with U = e^{-iH}
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXcd h(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) h(i, j) = cplx(g(rng), g(rng));
  h = (h + h.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  const Eigen::MatrixXcd u2 = es.eigenvectors() *
                              (-iu * es.eigenvalues().cast<cplx>().array()).exp().matrix().asDiagonal() *
                              es.eigenvectors().adjoint();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> esd(fock.dgamma(h));
  const Eigen::MatrixXcd lifted =
      esd.eigenvectors() *
      (-iu * esd.eigenvalues().cast<cplx>().array()).exp().matrix().asDiagonal() *
      esd.eigenvectors().adjoint();
  CHECK((fock.gamma(u2) - lifted).norm() < 1e-11 * lifted.norm());
}

TEST_CASE("Weyl relation on truncated coherent states") {
  TruncatedFock fock(2, 6);
  Eigen::VectorXcd f(2), g(2);
  f << cplx(0.21, -0.11), cplx(0.05, 0.17);
  g << cplx(-0.14, 0.08), cplx(0.19, 0.02);
  const auto check = wavetoy::weyl_relation_check(fock, f, g);
  CHECK(check.residual < std::max(check.truncation_bound, 1e-12));
  CHECK(check.residual < 1e-6);  // small amplitudes, deep truncation

  // larger amplitudes: the reported truncation bound grows accordingly
  Eigen::VectorXcd f2 = 4.0 * f, g2 = 4.0 * g;
  const auto loose = wavetoy::weyl_relation_check(fock, f2, g2);
  CHECK(loose.truncation_bound > check.truncation_bound);
  CHECK(loose.residual < loose.truncation_bound);
}

#include "oscrad/wavetoy.hpp"

#include <algorithm>
#include <cmath>

#include "oscrad/amplitudes.hpp"
#include "oscrad/quadrature.hpp"

namespace oscrad::wavetoy {

double WaveToySystem::g_inner(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
  return x.dot(G * y);
}

double WaveToySystem::g_norm(const Eigen::VectorXd& x) const { return std::sqrt(g_inner(x, x)); }

WaveToySystem build_system(const Eigen::MatrixXd& B) {
  const int n = int(B.rows());
  if (B.cols() != n) throw std::domain_error("build_system: B must be square");
  if ((B - B.transpose()).norm() > 1e-12 * (1.0 + B.norm()))
    throw std::domain_error("build_system: B must be symmetric");

  WaveToySystem sys;
  sys.n = n;
  sys.B = 0.5 * (B + B.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sys.B);
  sys.beigs = es.eigenvalues();
  sys.bvecs = es.eigenvectors();
  if (sys.beigs.cwiseAbs().minCoeff() <= 1e-10 * sys.B.norm())
    throw std::domain_error("build_system: B is numerically singular");

  const Eigen::MatrixXd B2 = sys.B * sys.B;
  sys.W = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  sys.W.topRightCorner(n, n) = Eigen::MatrixXd::Identity(n, n);
  sys.W.bottomLeftCorner(n, n) = -B2;
  sys.G = Eigen::MatrixXd::Identity(2 * n, 2 * n);
  sys.G.topLeftCorner(n, n) = B2;

  sys.g_skewness_residual = (sys.G * sys.W + sys.W.transpose() * sys.G).norm();

  // J(phi, phidot) = (-B^{-1} phidot, B phi)
  const Eigen::MatrixXd Binv = sys.bvecs * sys.beigs.cwiseInverse().asDiagonal() * sys.bvecs.transpose();
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  J.topRightCorner(n, n) = -Binv;
  J.bottomLeftCorner(n, n) = sys.B;
  sys.j_square_residual = (J * J + Eigen::MatrixXd::Identity(2 * n, 2 * n)).norm();
  return sys;
}

Eigen::VectorXd propagate(const WaveToySystem& sys, double t, const Eigen::VectorXd& state) {
  const int n = sys.n;
  if (state.size() != 2 * n) throw std::domain_error("propagate: bad state dimension");
  const Eigen::VectorXd phi = sys.bvecs.transpose() * state.head(n);
  const Eigen::VectorXd pdot = sys.bvecs.transpose() * state.tail(n);
  Eigen::VectorXd out_phi(n), out_dot(n);
  for (int i = 0; i < n; ++i) {
    const double b = sys.beigs(i);
    const double cb = std::cos(t * b), sb = std::sin(t * b);
    out_phi(i) = cb * phi(i) + sb / b * pdot(i);
    out_dot(i) = -b * sb * phi(i) + cb * pdot(i);
  }
  Eigen::VectorXd out(2 * n);
  out.head(n) = sys.bvecs * out_phi;
  out.tail(n) = sys.bvecs * out_dot;
  return out;
}

double conjugation_check(const WaveToySystem& sys, double t, const Eigen::VectorXd& state) {
  const int n = sys.n;
  // C x = B phi + i phidot; e^{-itB}; C^{-1} y = (B^{-1} Re y, Im y)
  const Eigen::VectorXcd cx =
      (sys.B * state.head(n)).cast<cplx>() + iu * state.tail(n).cast<cplx>();
  const Eigen::VectorXcd rot = sys.bvecs.cast<cplx>() *
                               ((-iu * t * sys.beigs.cast<cplx>().array()).exp() *
                                (sys.bvecs.transpose().cast<cplx>() * cx).array())
                                   .matrix();
  Eigen::VectorXd back(2 * n);
  const Eigen::VectorXd re = rot.real(), im = rot.imag();
  back.head(n) = sys.bvecs * (sys.beigs.cwiseInverse().asDiagonal() * (sys.bvecs.transpose() * re));
  back.tail(n) = im;
  return sys.g_norm(propagate(sys, t, state) - back);
}

StoneCheck stone_formula_check(const WaveToySystem& sys, double t, double a, double eps,
                               const Eigen::VectorXd& x1, const Eigen::VectorXd& x2) {
  if (!(a > sys.beigs.cwiseAbs().maxCoeff()))
    throw std::domain_error("stone_formula_check: a must exceed ||B||");
  const int n2 = 2 * sys.n;
  const Eigen::MatrixXcd iW = iu * sys.W.cast<cplx>();
  const Eigen::VectorXcd rhs = x2.cast<cplx>();
  const Eigen::VectorXcd g_x1 = (sys.G * x1).cast<cplx>();

  auto integrand = [&](double lam) {
    const Eigen::MatrixXcd mp = iW - cplx(lam, eps) * Eigen::MatrixXcd::Identity(n2, n2);
    const Eigen::MatrixXcd mm = iW - cplx(lam, -eps) * Eigen::MatrixXcd::Identity(n2, n2);
    const Eigen::VectorXcd diff = mp.partialPivLu().solve(rhs) - mm.partialPivLu().solve(rhs);
    return std::exp(cplx(0.0, -t * lam)) * g_x1.dot(diff);
  };
  // peaks of width eps at the eigenvalues +-beta_j
  std::vector<double> bp{-a};
  std::vector<double> peaks;
  for (int i = 0; i < sys.n; ++i) {
    peaks.push_back(sys.beigs(i));
    peaks.push_back(-sys.beigs(i));
  }
  std::sort(peaks.begin(), peaks.end());
  for (double pk : peaks) {
    for (double w : {-50.0 * eps, -5.0 * eps, 0.0, 5.0 * eps, 50.0 * eps}) {
      const double x = pk + w;
      if (x > -a && x < a) bp.push_back(x);
    }
  }
  bp.push_back(a);
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());

  quad::Options opt;
  opt.abs_tol = 1e-8;
  opt.rel_tol = 1e-7;
  const quad::Result r = quad::integrate(integrand, bp, opt);

  StoneCheck out;
  out.approx = r.value / (2.0 * pi * iu);
  out.exact = sys.g_inner(x1, propagate(sys, t, x2));
  out.gap = std::abs(out.approx - out.exact);
  return out;
}

TruncatedFock::TruncatedFock(int n, int max_particles) : n_(n), nmax_(max_particles) {
  if (n < 1 || max_particles < 0) throw std::domain_error("TruncatedFock: bad dimensions");
  std::vector<int> m(size_t(n), 0);
  first_of_sector_.assign(size_t(nmax_) + 2, 0);
  for (int k = 0; k <= nmax_; ++k) {
    first_of_sector_[size_t(k)] = int(occ_.size());
    // enumerate occupations with sum k in lexicographic order
    std::fill(m.begin(), m.end(), 0);
    m[0] = k;
    while (true) {
      occ_.push_back(m);
      sector_.push_back(k);
      if (k == 0) break;
      // next composition of k into n parts
      int i = n - 2;
      while (i >= 0 && m[size_t(i)] == 0) --i;
      if (i < 0) break;
      --m[size_t(i)];
      int rest = k;
      for (int j = 0; j <= i; ++j) rest -= m[size_t(j)];
      for (int j = i + 1; j < n; ++j) m[size_t(j)] = 0;
      m[size_t(i) + 1] = rest;
    }
  }
  first_of_sector_[size_t(nmax_) + 1] = int(occ_.size());
}

int TruncatedFock::sector_dim(int k) const {
  return first_of_sector_[size_t(k) + 1] - first_of_sector_[size_t(k)];
}

int TruncatedFock::index_of(const std::vector<int>& m) const {
  int k = 0;
  for (int v : m) k += v;
  for (int i = first_of_sector_[size_t(k)]; i < first_of_sector_[size_t(k) + 1]; ++i)
    if (occ_[size_t(i)] == m) return i;
  return -1;
}

Eigen::MatrixXcd TruncatedFock::creation(const Eigen::VectorXcd& f) const {
  Eigen::MatrixXcd op = Eigen::MatrixXcd::Zero(dim(), dim());
  for (int col = 0; col < dim(); ++col) {
    if (sector_[size_t(col)] == nmax_) continue;  // truncated away
    std::vector<int> m = occ_[size_t(col)];
    for (int i = 0; i < n_; ++i) {
      if (f(i) == cplx(0.0)) continue;
      ++m[size_t(i)];
      const int row = index_of(m);
      op(row, col) += f(i) * std::sqrt(double(m[size_t(i)]));
      --m[size_t(i)];
    }
  }
  return op;
}

Eigen::MatrixXcd TruncatedFock::annihilation(const Eigen::VectorXcd& f) const {
  return creation(f).adjoint();
}

Eigen::MatrixXcd TruncatedFock::segal_field(const Eigen::VectorXcd& f) const {
  const Eigen::MatrixXcd c = creation(f);
  return (c + c.adjoint()) / std::sqrt(2.0);
}

Eigen::MatrixXcd TruncatedFock::weyl(const Eigen::VectorXcd& f) const {
  const Eigen::MatrixXcd s = segal_field(f);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(s);
  const Eigen::VectorXcd phases = (iu * es.eigenvalues().cast<cplx>().array()).exp();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

Eigen::MatrixXcd TruncatedFock::gamma(const Eigen::MatrixXcd& u) const {
  // <m| Gamma(U) |m'> = per(U[m, m']) / sqrt(m! m'!) within each sector
  Eigen::MatrixXcd op = Eigen::MatrixXcd::Zero(dim(), dim());
  auto fact = [](int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
  };
  for (int row = 0; row < dim(); ++row) {
    for (int col = 0; col < dim(); ++col) {
      if (sector_[size_t(row)] != sector_[size_t(col)]) continue;
      const int k = sector_[size_t(row)];
      if (k == 0) {
        op(row, col) = 1.0;
        continue;
      }
      const auto& mr = occ_[size_t(row)];
      const auto& mc = occ_[size_t(col)];
      std::vector<int> rows, cols;
      for (int i = 0; i < n_; ++i) {
        rows.insert(rows.end(), size_t(mr[size_t(i)]), i);
        cols.insert(cols.end(), size_t(mc[size_t(i)]), i);
      }
      std::vector<cplx> sub(size_t(k) * k);
      for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) sub[size_t(a) * k + b] = u(rows[size_t(a)], cols[size_t(b)]);
      double norm = 1.0;
      for (int i = 0; i < n_; ++i) norm *= fact(mr[size_t(i)]) * fact(mc[size_t(i)]);
      op(row, col) = permanent(sub, k) / std::sqrt(norm);
    }
  }
  return op;
}

Eigen::MatrixXcd TruncatedFock::dgamma(const Eigen::MatrixXcd& h) const {
  Eigen::MatrixXcd op = Eigen::MatrixXcd::Zero(dim(), dim());
  for (int col = 0; col < dim(); ++col) {
    std::vector<int> m = occ_[size_t(col)];
    for (int j = 0; j < n_; ++j) {
      if (m[size_t(j)] == 0) continue;
      const double sj = std::sqrt(double(m[size_t(j)]));
      --m[size_t(j)];
      for (int i = 0; i < n_; ++i) {
        ++m[size_t(i)];
        const int row = index_of(m);
        op(row, col) += h(i, j) * sj * std::sqrt(double(m[size_t(i)]));
        --m[size_t(i)];
      }
      ++m[size_t(j)];
    }
  }
  return op;
}

Eigen::VectorXcd TruncatedFock::symmetric_vector(const std::vector<Eigen::VectorXcd>& factors) const {
  const int k = int(factors.size());
  if (k > nmax_) throw std::domain_error("symmetric_vector: sector above truncation");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim());
  v(0) = 1.0;  // vacuum
  for (const auto& f : factors) v = creation(f) * v;
  double fct = 1.0;
  for (int i = 2; i <= k; ++i) fct *= i;
  return v / std::sqrt(fct);
}

double fock_functoriality_check(const TruncatedFock& fock, const Eigen::MatrixXcd& u,
                                const std::vector<Eigen::VectorXcd>& psi,
                                const std::vector<Eigen::VectorXcd>& phi) {
  if (psi.size() != phi.size()) throw std::domain_error("fock_functoriality_check: size mismatch");
  const int k = int(psi.size());
  const Eigen::VectorXcd vpsi = fock.symmetric_vector(psi);
  const Eigen::VectorXcd vphi = fock.symmetric_vector(phi);
  const cplx lhs = vpsi.dot(fock.gamma(u) * vphi);  // Eigen dot conjugates the left factor

  std::vector<cplx> m(size_t(k) * k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) m[size_t(i) * k + j] = psi[size_t(i)].dot(u * phi[size_t(j)]);
  double fct = 1.0;
  for (int i = 2; i <= k; ++i) fct *= i;
  const cplx rhs = permanent(m, k) / fct;
  return std::abs(lhs - rhs);
}

WeylCheck weyl_relation_check(const TruncatedFock& fock, const Eigen::VectorXcd& f,
                              const Eigen::VectorXcd& g) {
  const cplx inner = f.dot(g);  // conjugate-linear in f
  const cplx phase = std::exp(0.5 * iu * inner.imag());
  Eigen::VectorXcd vac = Eigen::VectorXcd::Zero(fock.dim());
  vac(0) = 1.0;
  const Eigen::VectorXcd lhs = fock.weyl(f + g) * vac;
  const Eigen::VectorXcd rhs = phase * (fock.weyl(f) * (fock.weyl(g) * vac));

  WeylCheck out;
  out.residual = (lhs - rhs).norm();
  const double amp = f.norm() + g.norm();
  double fct = 1.0;
  for (int i = 2; i <= fock.max_particles() + 1; ++i) fct *= i;
  out.truncation_bound =
      4.0 * std::exp(amp * amp) * std::pow(amp, fock.max_particles() + 1) / std::sqrt(fct);
  return out;
}

}  // namespace oscrad::wavetoy

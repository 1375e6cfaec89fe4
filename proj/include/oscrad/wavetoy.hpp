#ifndef OSCRAD_WAVETOY_HPP
#define OSCRAD_WAVETOY_HPP

#include <Eigen/Dense>
#include <vector>

#include "oscrad/types.hpp"

namespace oscrad::wavetoy {

// Finite-dimensional wave system: B symmetric injective on R^n, phase space
// R^{2n} with metric G = diag(B^2, I), generator W(phi, phidot) =
// (phidot, -B^2 phi), complex structure J(phi, phidot) = (-B^{-1} phidot, B phi),
// and the unitary C(phi, phidot) = B phi + i phidot onto C^n.
struct WaveToySystem {
  int n = 0;
  Eigen::MatrixXd B;
  Eigen::MatrixXd W;  // 2n x 2n
  Eigen::MatrixXd G;  // 2n x 2n metric
  Eigen::VectorXd beigs;
  Eigen::MatrixXd bvecs;  // B = bvecs diag(beigs) bvecs^T

  double g_skewness_residual = 0.0;  // ||G W + W^T G||
  double j_square_residual = 0.0;    // ||J^2 + 1||

  double g_inner(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;
  double g_norm(const Eigen::VectorXd& x) const;
};

WaveToySystem build_system(const Eigen::MatrixXd& B);

// e^{tW} state through the eigendecomposition of B:
// (cos(tB) phi + B^{-1} sin(tB) phidot, -B sin(tB) phi + cos(tB) phidot)
Eigen::VectorXd propagate(const WaveToySystem& sys, double t, const Eigen::VectorXd& state);

// || e^{tW} x - C^{-1} e^{-itB} C x ||_G
double conjugation_check(const WaveToySystem& sys, double t, const Eigen::VectorXd& state);

// Mollified truncated Stone formula against the exact propagator element:
//   approx = (1/2 pi i) int_{-a}^{a} e^{-i t l}
//              <x1, [(iW - (l+i eps))^{-1} - (iW - (l-i eps))^{-1}] x2>_G dl
//   exact  = <x1, e^{tW} x2>_G
struct StoneCheck {
  cplx approx;
  double exact;
  double gap;
};
StoneCheck stone_formula_check(const WaveToySystem& sys, double t, double a, double eps,
                               const Eigen::VectorXd& x1, const Eigen::VectorXd& x2);

// Bosonic Fock space over C^n truncated at N particles, occupation basis.
class TruncatedFock {
 public:
  TruncatedFock(int n, int max_particles);

  int modes() const { return n_; }
  int max_particles() const { return nmax_; }
  int dim() const { return int(occ_.size()); }
  int sector_of(int index) const { return sector_[size_t(index)]; }
  int sector_dim(int k) const;

  Eigen::MatrixXcd creation(const Eigen::VectorXcd& f) const;
  Eigen::MatrixXcd annihilation(const Eigen::VectorXcd& f) const;
  Eigen::MatrixXcd segal_field(const Eigen::VectorXcd& f) const;  // (C(f) + C(f)*)/sqrt(2)
  Eigen::MatrixXcd weyl(const Eigen::VectorXcd& f) const;         // e^{i S(f)}
  Eigen::MatrixXcd gamma(const Eigen::MatrixXcd& u) const;        // functorial lift, per sector
  Eigen::MatrixXcd dgamma(const Eigen::MatrixXcd& h) const;       // sum h_ij a*_i a_j

  // vacuum-based symmetric vector S_k(f_1 x ... x f_k) = prod a*(f_i) /sqrt(k!) |0>
  Eigen::VectorXcd symmetric_vector(const std::vector<Eigen::VectorXcd>& factors) const;

 private:
  int n_, nmax_;
  std::vector<std::vector<int>> occ_;  // occupation numbers per basis state
  std::vector<int> sector_;
  std::vector<int> first_of_sector_;
  int index_of(const std::vector<int>& m) const;
};

// | <S_k(x psi), Gamma(U) S_k(x phi)> - perm(<psi_i, U phi_j>)/k! |
double fock_functoriality_check(const TruncatedFock& fock, const Eigen::MatrixXcd& u,
                                const std::vector<Eigen::VectorXcd>& psi,
                                const std::vector<Eigen::VectorXcd>& phi);

// Weyl relation W(f+g) = e^{(i/2) Im<f,g>} W(f) W(g) on the vacuum, with the
// truncation tail reported alongside the measured residual.
struct WeylCheck {
  double residual;
  double truncation_bound;
};
WeylCheck weyl_relation_check(const TruncatedFock& fock, const Eigen::VectorXcd& f,
                              const Eigen::VectorXcd& g);

}  // namespace oscrad::wavetoy

#endif

#ifndef OSCRAD_RESOLVENT_HPP
#define OSCRAD_RESOLVENT_HPP

#include "oscrad/model.hpp"
#include "oscrad/types.hpp"

namespace oscrad {

enum class Branch { upper, lower };

// A point z together with the resolvent branch it is evaluated on.  Boundary
// values lambda_{+-} on the real axis are reached by setting z real and
// choosing the branch (upper for lambda_+, lower for lambda_-).
struct BranchedPoint {
  cplx z;
  Branch branch = Branch::upper;
};

struct PhotonSpec {
  double nu = 1.0;    // photon frequency
  double eps = 0.01;  // regularization frequency, 0 only in limit operations
  vec3 k{0.0, 0.0, 1.0};
  cvec3 zeta{cplx(0.0), cplx(1.0), cplx(0.0)};

  void validate(bool allow_zero_eps = false) const;
  // || phi^eps ||^2 = (pi c^3/eps^3) (|k ^ zeta|^2 + (2/3)(eps/nu)^2 |zeta|^2)
  double norm_sq(const PhysicalParams& p) const;
};

struct ChiValue {
  cplx rational{0.0};
  cplx logarithmic{0.0};  // includes the branch constant -pi eps/(2 nu^3)
  cplx total{0.0};
};

// Lambda_{+-}(z) = 1/(+-i (2e^2/3c^3) z^3 - m (w0^2 - z^2)).
// Throws pole_error within 1e-13 (relative) of a zero of the denominator;
// sets *near_pole at 1e-8.
cplx lambda_pm(const BranchedPoint& pt, const PhysicalParams& p, double lambda_e,
               bool* near_pole = nullptr);

// p(z) = (e^2 lambda_e/3c^3) z + i (m/lambda_e)(w0^2 + lambda_e^2/2)
// q(z) = (2e^2/3c^3) z^2 + i (m w0^2/lambda_e^2)(z + i lambda_e)
struct CharPolys {
  cplx p, q;
};
CharPolys char_polys(cplx z, const PhysicalParams& p, double lambda_e);
cplx poly_p(cplx z, const PhysicalParams& p, double lambda_e);
cplx poly_q(cplx z, const PhysicalParams& p, double lambda_e);
cplx poly_q_prime(cplx z, const PhysicalParams& p, double lambda_e);

// <G^{-+}_{z*}, G_{lambda_e}> = 1/(4 pi c^3 (lambda_e -+ i z)), upper branch
// taking the minus sign.  The upper-branch pole sits at z = -i lambda_e (the
// boundary of the continuation), the lower-branch one at z = +i lambda_e.
cplx green_overlap(const BranchedPoint& pt, double lambda_e, const PhysicalParams& p);

// Scalar factor of <(0,zeta1), (L_e - z^2)^{-1} (0,zeta2)^+> with the
// zeta1* . zeta2 geometry stripped:
//   upper branch  -(2 kappa0 kappa2/kappa^2) f(z),
//   lower branch  -(2 kappa0 kappa2/kappa^2) f(-z),
// f(z) = p(z) / ((z + i lambda_e) q(z)).
cplx bound_bound_element(const BranchedPoint& pt, const SpectralData& s, const PhysicalParams& p);
cplx bound_bound_f(cplx z, const SpectralData& s, const PhysicalParams& p);
// jump across the spectrum at real mu > 0: element(mu_+) - element(mu_-)
cplx bound_bound_jump(double mu, const SpectralData& s, const PhysicalParams& p);
double survival_prefactor(const SpectralData& s);  // -2 kappa0 kappa2 / kappa^2

// chi^eps as a single analytic function on C minus the cut
//   C = { +-nu + u - i eps : +-u >= 0 },
// continued from <phi^eps, G_w^+> in the upper half plane:
//   chi(w) = (nu^2 + eps u)/(nu^2 (u^2 + nu^2))
//            - (i eps/(2 nu^3)) Log((nu + i eps + w)/(nu - i eps - w))
//            - pi eps/(2 nu^3),            u = eps - i w.
// The lower-branch boundary value is chi(-w).  eps = 0 collapses to the
// rational nu-even limit 1/(nu^2 - w^2).
ChiValue chi_eps(cplx w, const PhotonSpec& photon);
ChiValue chi_eps(const BranchedPoint& pt, const PhotonSpec& photon);
double chi_cut_distance(cplx w, const PhotonSpec& photon);
// residues of the rational part at w_k = (-1)^k nu - i eps, k = 1, 2
cplx chi_pole(int k, const PhotonSpec& photon);
cplx chi_residue(int k, const PhotonSpec& photon);

// Scalar factor of <(phi1^eps,0), (L_e - z^2)^{-1} (0,zeta2)^+> with the
// k.(zeta1* ^ zeta2) geometry stripped:
//   upper branch  -(4 pi e c kappa2/kappa^2) g(z),
//   lower branch  -(4 pi e c kappa2/kappa^2) g(-z),
// g(z) = ((2z + i lambda_e)/(z + i lambda_e)) chi(z)/q(z).
cplx photon_bound_element(const BranchedPoint& pt, const SpectralData& s, const PhotonSpec& photon,
                          const PhysicalParams& p);
cplx transition_g(cplx z, const SpectralData& s, const PhotonSpec& photon, const PhysicalParams& p);
cplx transition_jump(double mu, const SpectralData& s, const PhotonSpec& photon, const PhysicalParams& p);
double transition_prefactor(const SpectralData& s, const PhysicalParams& p);  // -4 pi e c kappa2/kappa^2

// Finite-radius resolvent coefficients for the shell form factor.
struct RegularizedCoeffs {
  cplx k1r, k2r, lambda_r;
  cplx green_bracket;  // <(-c^2 Delta - z^2)^{-1} rho_r, rho_r>
  double bare_mass;
};
// k1^r = 1 + (8 pi/3)(e^2/m_r) <(-c^2 Delta - z^2)^{-1} rho_r, rho_r>
// k2^r = alpha/m_r - z^2 - (8 pi/3)(alpha e^2/(m_r^2 k1^r)) <...>
// Lambda^r = -1/(m_r k1^r k2^r),  alpha = m w0^2.
// As r -> 0:  k1^r m_r -> m +- i (2e^2/3c^3) z,  Lambda^r -> Lambda_{+-}(z),
// each with O(r) error.
RegularizedCoeffs regularized_coeffs(const BranchedPoint& pt, double r, const PhysicalParams& p);

// Bare (unprojected) bound-bound scalars used for the point-limit checks:
//   point limit:  -Lambda_{+-}(z) kappa0 (m +- i (2e^2/3c^3) z)
//   finite r:     -Lambda^r(z) kappa0 m_r k1^r
cplx bare_bound_bound_point(const BranchedPoint& pt, const PhysicalParams& p, double lambda_e);
cplx bare_bound_bound_regularized(const BranchedPoint& pt, double r, const PhysicalParams& p);

}  // namespace oscrad

#endif

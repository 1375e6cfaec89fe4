#ifndef OSCRAD_AMPLITUDES_HPP
#define OSCRAD_AMPLITUDES_HPP

#include <vector>

#include "oscrad/quadrature.hpp"
#include "oscrad/resolvent.hpp"

namespace oscrad {

// One-particle survival amplitude S(t) = -(2 kappa0 kappa2/kappa^2) I(t),
// term by term.  For t > 0
//
//   I(t) =  e^{-lam t} i lam p(-i lam)/q(-i lam)                    (runaway)
//         - 2 e^{-i z2 t} z2 p(z2)/((z2 + i lam) q'(z2))            (resonance)
//         - (1/pi) int_0^inf e^{-st} s/(s+lam) p(is)/q(is) ds       (J1)
//         - (1/pi) int_0^inf [ e^{-st} s p(-is)/((s-lam) q(-is))
//                  - 2 e^{-lam t} lam^2 p(-i lam)/((s^2-lam^2) q(-i lam)) ] ds   (J2)
//
// and I(-t) = conj(I(t)) termwise.  The signs are fixed against the Stone
// oracle; the published +-t decorations are not reliable.
struct SurvivalBreakdown {
  double t = 0.0;
  cplx runaway, resonance, j1, j2;
  cplx j2_alt;       // J2 through the pole decomposition + exponential-integral kernel
  double j2_gap = 0.0;
  cplx total;        // I(t)
  cplx S;            // amplitude, first-argument-conjugate convention
  cplx S_hat;        // S / kappa0
  double quad_error = 0.0;
};

SurvivalBreakdown survival_terms(double t, const SpectralData& s, const PhysicalParams& p,
                                 const quad::Options& opt = {});

struct SeriesDiagnostics {
  double tail_t_times_abs_s = 0.0;   // |t S(t)| at the last grid point
  double tail_exponent = 0.0;        // log-log slope of |S| over the top decade
  bool tail_window_covered = false;
  double envelope_flatness = 0.0;    // max/min of |S| e^{gamma t} - 1 over the window
  bool envelope_window_covered = false;
  // minimal slope increase of log|S| in t over consecutive triples with
  // gamma_e t >= 25 (where the damped oscillation is dead and interference
  // beats cannot mask the convexity of the tail)
  double log_convexity_min = 0.0;
  bool convexity_window_covered = false;
};

struct AmplitudeSeries {
  std::vector<SurvivalBreakdown> points;
  SeriesDiagnostics diag;
};

AmplitudeSeries survival(const std::vector<double>& grid, const SpectralData& s,
                         const PhysicalParams& p, const quad::Options& opt = {});

// Extrapolated S_hat(0+) (Richardson over lambda_e t in {1e-2, 1e-3, 1e-4});
// equals the a.c. projection weight kappa2 lambda_e / kappa^2.
cplx survival_zero_limit(const SpectralData& s, const PhysicalParams& p);

// Least-squares fit of S(t) onto the fixed basis
//   { e^{-lam|t|},  e^{-gamma|t|} e^{-i omega t},  e^{-lam|t|} Ei(lam|t|) }
// with the exponents taken from SpectralData.
struct ClosedFormFit {
  cplx c1, c2, c3;
  double residual = 0.0;     // ||basis c - S|| / ||S||
  double condition = 0.0;
  bool runaway_basis = true; // false when fitted with the c2, c3 basis only
};
ClosedFormFit fit_closed_form(const AmplitudeSeries& series, const SpectralData& s,
                              bool include_runaway_basis = true);

// Transition amplitude A^eps(t) = -(4 pi e c kappa2/kappa^2) I^eps(t); the
// breakdown mirrors the residue assembly: runaway and resonance terms, the
// photon pole w2 = nu - i eps, the two s-integral families and the two cut
// combinations (over C, and over C+ minus C-).  eps = 0 drops the cuts and
// turns the photon term into a pure oscillation.
struct TransitionBreakdown {
  double t = 0.0;
  cplx runaway, resonance, photon_pole;
  cplx s_integral_1, s_integral_2;
  cplx cut_c, cut_pm;
  cplx total;           // I^eps(t)
  cplx A;
  cplx A_hat;           // A / (||phi^eps|| sqrt(kappa0)); 0 when eps = 0
  double s1_dual_gap = 0.0;
  double quad_error = 0.0;
};

TransitionBreakdown transition_eps(double t, const PhotonSpec& photon, const SpectralData& s,
                                   const PhysicalParams& p, const quad::Options& opt = {});
// eps = 0 closed form (Theorem-level limit of the regularized amplitude)
TransitionBreakdown transition_limit_point(double t, const PhotonSpec& photon, const SpectralData& s,
                                           const PhysicalParams& p, const quad::Options& opt = {});

struct TransitionSeries {
  std::vector<TransitionBreakdown> points;
};
TransitionSeries transition_series(const std::vector<double>& grid, const PhotonSpec& photon,
                                   const SpectralData& s, const PhysicalParams& p, bool limit,
                                   const quad::Options& opt = {});

// coefficient of the pure e^{-i nu t} oscillation in the eps = 0 amplitude
cplx transition_c3(const PhotonSpec& photon, const SpectralData& s, const PhysicalParams& p);

// k . (zeta1* ^ zeta2), the geometric factor of every photon-level element
cplx geometric_factor(const vec3& k, const cvec3& zeta1, const cvec3& zeta2);

// Permanent by Ryser inclusion-exclusion with Gray-code updates, n <= 12.
cplx permanent(const std::vector<cplx>& matrix, int n);

// Multi-particle amplitude between the n-level state built on initial_levels
// and a final state of photons plus levels.  Sector mismatch gives exact 0.
struct FockAmplitude {
  cplx raw;            // perm(M)/n!, the overlap of 1/n!-symmetrized states
  cplx permanent_sum;  // perm(M), the bare permutation sum
  cplx normalized;     // raw divided by the state norms (distinct photons
                       // treated as orthogonal)
  bool sector_match = true;
};
FockAmplitude fock_amplitude(const std::vector<cvec3>& initial_levels,
                             const std::vector<PhotonSpec>& final_photons,
                             const std::vector<cvec3>& final_levels, double t,
                             const SpectralData& s, const PhysicalParams& p,
                             const quad::Options& opt = {});

}  // namespace oscrad

#endif

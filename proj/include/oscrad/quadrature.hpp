#ifndef OSCRAD_QUADRATURE_HPP
#define OSCRAD_QUADRATURE_HPP

#include <functional>
#include <vector>

#include "oscrad/types.hpp"

namespace oscrad::quad {

struct Options {
  double abs_tol = 1e-9;
  double rel_tol = 1e-8;
  int max_intervals = 40000;
};

struct Result {
  cplx value{0.0, 0.0};
  double error = 0.0;       // absolute error estimate
  int evaluations = 0;
  int intervals = 0;
  double truncation = 0.0;  // where an infinite range was cut, 0 if finite
  bool converged = true;

  Result& operator+=(const Result& o) {
    value += o.value;
    error += o.error;
    evaluations += o.evaluations;
    intervals += o.intervals;
    truncation = std::max(truncation, o.truncation);
    converged = converged && o.converged;
    return *this;
  }
};

using Integrand = std::function<cplx(double)>;

// Adaptive Gauss-Kronrod (G7, K15) on a finite interval.
Result integrate(const Integrand& f, double a, double b, const Options& opt = {});

// Same, with interior breakpoints honoured as initial panel edges.
Result integrate(const Integrand& f, const std::vector<double>& breakpoints, const Options& opt = {});

// int_0^inf f, f decaying exponentially with the given scale (f ~ e^{-s/scale}).
// The range is cut where the exponential bound drops below the tolerance.
Result integrate_halfline(const Integrand& f, double decay_scale, const Options& opt = {},
                          const std::vector<double>& interior = {});

// P.V. int_0^inf f(s)/(s - pole) ds for smooth f with exponential decay.
// Symmetric window [pole-delta, pole+delta] excluded, its contribution
// restored analytically to first order as 2*delta*f'(pole).
Result pv_halfline(const Integrand& f, double pole, double decay_scale, const Options& opt = {});

// Oscillatory integral  int_a^b e^{-i t x} w(x) dx  by Filon-Simpson panels:
// w is interpolated quadratically on each panel and the moments
// int s^k e^{-i theta s} ds are used in closed form.  Panel edges are the
// supplied breakpoints refined so that  t * panel <= pi/4  and panel <= max_panel.
// The error estimate comes from re-evaluation with halved panels.
Result filon(const Integrand& w, double t, const std::vector<double>& breakpoints, double max_panel,
             bool estimate_error = true);

// I_n(t, L) = int_L^inf e^{-i t x} x^{-n} dx, n >= 1, t != 0  (exact, via E1).
cplx oscillatory_tail_moment(int n, double t, double cut);

// Tail of int_L^inf e^{-i t x} w(x) dx for w ~ c/x^n1 + d/x^n2, with the two
// coefficients fitted from samples of w at {L, 1.25 L, 1.5625 L}.
cplx algebraic_tail(const Integrand& w, double t, double cut, int n1 = 3, int n2 = 4);

}  // namespace oscrad::quad

#endif

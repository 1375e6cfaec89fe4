#ifndef OSCRAD_SPECIAL_HPP
#define OSCRAD_SPECIAL_HPP

#include "oscrad/types.hpp"

namespace oscrad::special {

// Exponential integral Ei(x) = -P.V. int_{-x}^inf e^{-u}/u du, x > 0.
//
// Power series for x <= 40,
//
//   Ei(x) = gamma + ln x + sum_{k>=1} x^k / (k k!)
//
// asymptotic expansion with optimal truncation above,
//
//   Ei(x) ~ e^x/x (1 + 1/x + 2!/x^2 + ...)
//
// The two branches cross-validate on x in [30, 50].
double ei(double x);

// e^{-x} Ei(x), overflow-free for any x up to ~1e6.
double scaled_ei(double x);

// E_1(z) = int_z^inf e^{-u}/u du on the principal branch, |arg z| < pi.
// Series for small |z|, modified-Lentz continued fraction otherwise.
cplx e1(cplx z);

// P.V. int_0^inf e^{-st}/(s - lambda) ds  =  -e^{-lambda t} Ei(lambda t)
double pv_laplace_pole(double t, double lambda);

// Second evaluation path for pv_laplace_pole: symmetric-window quadrature
// around the pole, window contribution expanded analytically to first order.
double pv_laplace_pole_quadrature(double t, double lambda);

// int_0^inf e^{-st}/(s - w) ds = e^{-wt} E1(-wt) for complex w off [0,inf).
cplx laplace_pole(double t, cplx w);

}  // namespace oscrad::special

#endif

#include "oscrad/special.hpp"

#include <cmath>
#include <limits>

#include "oscrad/quadrature.hpp"

namespace oscrad::special {

namespace {

constexpr double kSeriesSwitch = 40.0;

// gamma + ln x + sum x^k/(k k!); all terms positive, no cancellation.
double ei_series(double x) {
  double sum = 0.0;
  double term = 1.0;
  for (int k = 1; k < 400; ++k) {
    term *= x / k;
    const double add = term / k;
    sum += add;
    if (add < 1e-17 * sum) break;
  }
  return euler_gamma + std::log(x) + sum;
}

// sum_{k>=0} k!/x^k, truncated at the smallest term.
double ei_asymptotic_factor(double x) {
  double sum = 1.0;
  double term = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double next = term * k / x;
    if (next >= term) break;  // series started diverging
    term = next;
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum;
}

cplx e1_series(cplx z) {
  cplx sum = 0.0;
  cplx term = 1.0;
  for (int k = 1; k < 200; ++k) {
    term *= -z / double(k);
    const cplx add = -term / double(k);
    sum += add;
    if (std::abs(add) < 1e-18 * (1.0 + std::abs(sum))) break;
  }
  return -euler_gamma - std::log(z) + sum;
}

// E1(z) = e^{-z} / (z + 1 - 1/(z + 3 - 4/(z + 5 - 9/(...))))
cplx e1_continued_fraction(cplx z) {
  const double tiny = 1e-300;
  cplx b = z + 1.0;
  cplx c = 1.0 / tiny;
  cplx d = 1.0 / b;
  cplx h = d;
  for (int k = 1; k < 500; ++k) {
    const cplx a = -double(k) * double(k);
    b += 2.0;
    d = a * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + a / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const cplx delta = c * d;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return h * std::exp(-z);
}

}  // namespace

double ei(double x) {
  if (!(x > 0.0)) throw std::domain_error("ei: argument must be positive");
  if (x <= kSeriesSwitch) return ei_series(x);
  return std::exp(x) / x * ei_asymptotic_factor(x);
}

double scaled_ei(double x) {
  if (!(x > 0.0)) throw std::domain_error("scaled_ei: argument must be positive");
  if (x <= kSeriesSwitch) return std::exp(-x) * ei_series(x);
  return ei_asymptotic_factor(x) / x;
}

cplx e1(cplx z) {
  if (z == cplx(0.0)) throw std::domain_error("e1: argument must be nonzero");
  if (z.real() < 0.0 && std::abs(z.imag()) < 1e-14 * std::abs(z.real()))
    throw std::domain_error("e1: argument on the negative real cut");
  if (std::abs(z) <= 3.5) return e1_series(z);
  return e1_continued_fraction(z);
}

double pv_laplace_pole(double t, double lambda) {
  if (!(t > 0.0)) throw std::domain_error("pv_laplace_pole: t must be positive");
  if (!(lambda > 0.0)) throw std::domain_error("pv_laplace_pole: lambda must be positive");
  return -scaled_ei(lambda * t);
}

double pv_laplace_pole_quadrature(double t, double lambda) {
  if (!(t > 0.0)) throw std::domain_error("pv_laplace_pole_quadrature: t must be positive");
  auto numerator = [t](double s) { return cplx(std::exp(-s * t)); };
  const quad::Result r = quad::pv_halfline(numerator, lambda, /*decay_scale=*/1.0 / t);
  return r.value.real();
}

cplx laplace_pole(double t, cplx w) {
  if (!(t > 0.0)) throw std::domain_error("laplace_pole: t must be positive");
  return std::exp(-w * t) * e1(-w * t);
}

}  // namespace oscrad::special

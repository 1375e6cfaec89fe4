#include <doctest.h>

#include <cmath>

#include "oscrad/special.hpp"

using namespace oscrad;

namespace {

// independent power-series oracle: Ei(x) = gamma + ln x + sum x^k/(k k!)
double ei_series_oracle(double x) {
  long double sum = 0.0L, term = 1.0L;
  for (int k = 1; k < 500; ++k) {
    term *= x / k;
    sum += term / k;
    if (term / k < 1e-20L * sum) break;
  }
  return double(sum) + euler_gamma + std::log(x);
}

}  // namespace

TEST_CASE("exponential integral against the series oracle") {
  // frozen from the series oracle
  CHECK(special::ei(1.0) == doctest::Approx(1.8951178163559368).epsilon(1e-14));
  for (double x : {1e-8, 1e-3, 0.5, 1.0, 7.0, 25.0, 39.0}) {
    CHECK(special::ei(x) == doctest::Approx(ei_series_oracle(x)).epsilon(1e-13));
  }
}

TEST_CASE("exponential integral small-argument limit") {
  // x -> 0+: Ei(x) - ln(x) -> gamma
  for (double x : {1e-6, 1e-9, 1e-12}) {
    CHECK(special::ei(x) - std::log(x) == doctest::Approx(euler_gamma).epsilon(1e-6));
  }
}

TEST_CASE("exponential integral large-argument asymptotics") {
  // e^{-x} Ei(x) x -> 1
  CHECK(special::scaled_ei(1e4) * 1e4 == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(special::scaled_ei(1e6) * 1e6 == doctest::Approx(1.0).epsilon(1e-5));
  // x = 100: within 2 percent of 1/x
  CHECK(special::scaled_ei(100.0) == doctest::Approx(0.01).epsilon(0.02));
}

TEST_CASE("branch crossover band agrees between series and asymptotics") {
  // the two evaluation branches overlap on [30, 50]
  for (double x = 30.0; x <= 50.0; x += 2.0) {
    const double series = ei_series_oracle(x);
    const double engine = special::ei(x);
    CHECK(engine == doctest::Approx(series).epsilon(x < 40.0 ? 1e-13 : 5e-12));
  }
}

TEST_CASE("scaled_ei has no overflow and decays monotonically past its hump") {
  CHECK(std::isfinite(special::scaled_ei(1e6)));
  CHECK(special::scaled_ei(1.0) == doctest::Approx(0.69717488323506607).epsilon(1e-12));
  // the dense grid scan shows a single maximum near x ~ 1.35 (where
  // Ei(x) = e^x/x), then strict decay
  CHECK(special::scaled_ei(1.35) > special::scaled_ei(1.0));
  double prev = special::scaled_ei(2.0);
  for (double x = 2.0 * 1.4; x < 400.0; x *= 1.4) {
    const double cur = special::scaled_ei(x);
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("pv kernel equals the scaled exponential integral") {
  CHECK(special::pv_laplace_pole(1.0, 1.0) == doctest::Approx(-0.69717488323506607).epsilon(1e-12));
  // lambda t -> infinity: value ~ -1/(lambda t)
  CHECK(special::pv_laplace_pole(100.0, 50.0) * 5000.0 == doctest::Approx(-1.0).epsilon(1e-3));
}

TEST_CASE("pv quadrature path agrees with the closed form") {
  for (auto [t, lam] : {std::pair{1.0, 1.0}, {0.1, 16.726240027301062}, {2.5, 0.7}}) {
    const double a = special::pv_laplace_pole(t, lam);
    const double b = special::pv_laplace_pole_quadrature(t, lam);
    CHECK(std::abs(a - b) < 1e-8 * (1.0 + std::abs(a)));
  }
}

TEST_CASE("pv domain errors") {
  CHECK_THROWS_AS(special::pv_laplace_pole(-1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(special::pv_laplace_pole(0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(special::ei(0.0), std::domain_error);
  CHECK_THROWS_AS(special::ei(-2.0), std::domain_error);
}

TEST_CASE("complex E1: series region against reflection and real values") {
  // E1(1) frozen from the series
  CHECK(special::e1(cplx(1.0, 0.0)).real() == doctest::Approx(0.21938393439552026).epsilon(1e-13));
  for (cplx z : {cplx(0.5, 1.0), cplx(2.0, -3.0), cplx(-1.0, 2.0)}) {
    const cplx a = special::e1(z);
    const cplx b = std::conj(special::e1(std::conj(z)));
    CHECK(std::abs(a - b) < 1e-14 * (1.0 + std::abs(a)));
  }
}

TEST_CASE("complex E1: continued fraction matches the series in the overlap") {
  // |z| around the switch radius: both branches must agree
  for (double arg : {0.3, 1.2, -1.4, 2.6}) {
    const cplx z4 = std::polar(3.4, arg);
    const cplx z5 = std::polar(3.6, arg);
    // numerical derivative consistency across the switch: E1'(z) = -e^{-z}/z
    const cplx num = (special::e1(z5) - special::e1(z4)) / (z5 - z4);
    const cplx zm = std::polar(3.5, arg);
    CHECK(std::abs(num + std::exp(-zm) / zm) < 2e-2 * std::abs(std::exp(-zm) / zm));
  }
  // direct overlap comparison slightly inside/outside the radius; the series
  // side carries ~e^{|z|} cancellation, so modest relative agreement is the
  // honest expectation here
  const cplx z = std::polar(3.5 - 1e-9, 0.7);
  const cplx w = std::polar(3.5 + 1e-9, 0.7);
  CHECK(std::abs(special::e1(z) - special::e1(w)) < 1e-8 * std::abs(special::e1(z)));
}

TEST_CASE("laplace_pole reproduces the half-line Laplace integral with complex pole") {
  // int_0^inf e^{-st}/(s-w) ds at w = gamma + i omega, cross-checked by the
  // complex-pole quadrature
  const cplx w(0.03, 1.0);
  const double t = 1.7;
  const cplx closed = special::laplace_pole(t, w);
  // crude trapezoid oracle with fine steps (integrand is smooth, pole off axis)
  cplx acc = 0.0;
  const double h = 1e-4;
  for (double s = 0.5 * h; s < 60.0; s += h) acc += std::exp(-s * t) / (s - w) * h;
  CHECK(std::abs(closed - acc) < 5e-5 * std::abs(closed));
}

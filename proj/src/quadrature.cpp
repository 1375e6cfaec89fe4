#include "oscrad/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "oscrad/special.hpp"

namespace oscrad::quad {

namespace {

// QUADPACK qk15 nodes and weights (positive half).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b;
  cplx value;
  double error;
};

Panel kronrod15(const Integrand& f, double a, double b) {
  const double hlgth = 0.5 * (b - a);
  const double centr = 0.5 * (a + b);
  cplx resg = 0.0, resk = 0.0;
  double resabs = 0.0;
  cplx fv[15];
  for (int j = 0; j < 7; ++j) {
    const double absc = hlgth * kXgk[j];
    fv[j] = f(centr - absc);
    fv[14 - j] = f(centr + absc);
  }
  fv[7] = f(centr);
  for (int j = 0; j < 7; ++j) {
    resk += kWgk[j] * (fv[j] + fv[14 - j]);
    resabs += kWgk[j] * (std::abs(fv[j]) + std::abs(fv[14 - j]));
  }
  resk += kWgk[7] * fv[7];
  resabs += kWgk[7] * std::abs(fv[7]);
  for (int j = 0; j < 3; ++j) resg += kWg[j] * (fv[2 * j + 1] + fv[13 - 2 * j]);
  resg += kWg[3] * fv[7];

  const cplx reskh = resk * 0.5;
  double resasc = kWgk[7] * std::abs(fv[7] - reskh);
  for (int j = 0; j < 7; ++j) resasc += kWgk[j] * (std::abs(fv[j] - reskh) + std::abs(fv[14 - j] - reskh));
  resasc *= std::abs(hlgth);

  double err = std::abs(resk - resg) * std::abs(hlgth);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  return {a, b, resk * hlgth, err};
}

struct PanelCmp {
  bool operator()(const Panel& x, const Panel& y) const { return x.error < y.error; }
};

}  // namespace

Result integrate(const Integrand& f, const std::vector<double>& breakpoints, const Options& opt) {
  Result res;
  std::priority_queue<Panel, std::vector<Panel>, PanelCmp> heap;
  cplx total = 0.0;
  double toterr = 0.0;
  for (size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (breakpoints[i] == breakpoints[i + 1]) continue;
    Panel p = kronrod15(f, breakpoints[i], breakpoints[i + 1]);
    total += p.value;
    toterr += p.error;
    heap.push(p);
    res.evaluations += 15;
  }
  while (!heap.empty() && int(heap.size()) < opt.max_intervals) {
    const double goal = std::max(opt.abs_tol, opt.rel_tol * std::abs(total));
    if (toterr <= goal) break;
    Panel worst = heap.top();
    if (worst.error <= 0.25 * goal / double(heap.size() + 1)) break;
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {  // interval exhausted at machine precision
      toterr -= worst.error;
      continue;
    }
    Panel left = kronrod15(f, worst.a, mid);
    Panel right = kronrod15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    toterr += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    res.evaluations += 30;
  }
  res.value = total;
  res.error = toterr;
  res.intervals = int(heap.size());
  res.converged = toterr <= std::max(opt.abs_tol, opt.rel_tol * std::abs(total)) * 4.0 + 1e-300;
  return res;
}

Result integrate(const Integrand& f, double a, double b, const Options& opt) {
  return integrate(f, std::vector<double>{a, b}, opt);
}

Result integrate_halfline(const Integrand& f, double decay_scale, const Options& opt,
                          const std::vector<double>& interior) {
  const double cut = 45.0 * decay_scale;
  std::vector<double> pts{0.0};
  for (double x : interior)
    if (x > 0.0 && x < cut) pts.push_back(x);
  for (double x = decay_scale; x < cut; x *= 4.0) pts.push_back(x);
  pts.push_back(cut);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  Result r = integrate(f, pts, opt);
  r.truncation = cut;
  r.error += std::abs(f(cut)) * decay_scale;  // tail bound, integrand ~ e^{-s/scale}
  return r;
}

Result pv_halfline(const Integrand& f, double pole, double decay_scale, const Options& opt) {
  const double delta = 1e-4 * pole;
  const double cut = pole + 45.0 * decay_scale;
  std::vector<double> left{0.0, pole * 0.5, pole - 16.0 * delta, pole - delta};
  std::vector<double> right{pole + delta, pole + 16.0 * delta, std::min(2.0 * pole, cut)};
  for (double x = 2.0 * pole; x < cut; x *= 4.0) right.push_back(x);
  right.push_back(cut);
  std::sort(right.begin(), right.end());
  right.erase(std::unique(right.begin(), right.end()), right.end());

  auto g = [&](double s) { return f(s) / (s - pole); };
  Result r = integrate(g, left, opt);
  r += integrate(g, right, opt);
  // window [pole-delta, pole+delta]: P.V. int f(s)/(s-pole) = 2 delta f'(pole) + O(delta^3)
  const double h = 0.5 * delta;
  const cplx fprime = (f(pole + h) - f(pole - h)) / (2.0 * h);
  r.value += 2.0 * delta * fprime;
  r.error += std::abs(fprime) * delta * delta;  // window truncation, generous
  r.error += std::abs(f(cut)) / std::max(cut - pole, pole) * decay_scale;
  r.truncation = cut;
  return r;
}

namespace {

// Moments M_k(theta) = int_{-1}^{1} s^k e^{-i theta s} ds, k = 0, 1, 2.
void filon_moments(double theta, cplx& m0, cplx& m1, cplx& m2) {
  if (std::abs(theta) < 0.2) {
    const double t2 = theta * theta;
    m0 = 2.0 * (1.0 - t2 / 6.0 + t2 * t2 / 120.0 - t2 * t2 * t2 / 5040.0);
    m1 = cplx(0.0, -2.0) * (theta / 3.0 - theta * t2 / 30.0 + theta * t2 * t2 / 840.0);
    m2 = 2.0 * (1.0 / 3.0 - t2 / 10.0 + t2 * t2 / 168.0 - t2 * t2 * t2 / 6480.0);
    return;
  }
  const double s = std::sin(theta), c = std::cos(theta);
  m0 = 2.0 * s / theta;
  m1 = cplx(0.0, 2.0) * (theta * c - s) / (theta * theta);
  m2 = 2.0 * ((theta * theta - 2.0) * s + 2.0 * theta * c) / (theta * theta * theta);
}

cplx filon_pass(const std::vector<double>& edges, const std::vector<cplx>& fedge,
                const Integrand& w, double t, int* evals) {
  cplx total = 0.0;
  for (size_t i = 0; i + 1 < edges.size(); ++i) {
    const double a = edges[i], b = edges[i + 1];
    const double h = 0.5 * (b - a), xc = 0.5 * (a + b);
    const cplx f0 = fedge[i], f1 = fedge[i + 1];
    const cplx fm = w(xc);
    ++*evals;
    const cplx c0 = fm, c1 = 0.5 * (f1 - f0), c2 = 0.5 * (f1 + f0) - fm;
    cplx m0, m1, m2;
    filon_moments(t * h, m0, m1, m2);
    total += h * std::exp(cplx(0.0, -t * xc)) * (c0 * m0 + c1 * m1 + c2 * m2);
  }
  return total;
}

std::vector<double> refine_edges(const std::vector<double>& breakpoints, double t, double max_panel) {
  double cap = max_panel;
  if (t != 0.0) cap = std::min(cap, (pi / 4.0) / std::abs(t));
  std::vector<double> edges;
  for (size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    const double a = breakpoints[i], b = breakpoints[i + 1];
    if (b <= a) continue;
    const int n = std::max(1, int(std::ceil((b - a) / cap)));
    for (int j = 0; j < n; ++j) edges.push_back(a + (b - a) * double(j) / n);
  }
  edges.push_back(breakpoints.back());
  return edges;
}

}  // namespace

Result filon(const Integrand& w, double t, const std::vector<double>& breakpoints, double max_panel,
             bool estimate_error) {
  Result res;
  std::vector<double> edges = refine_edges(breakpoints, t, max_panel);
  std::vector<cplx> fe(edges.size());
  for (size_t i = 0; i < edges.size(); ++i) fe[i] = w(edges[i]);
  res.evaluations += int(edges.size());
  const cplx coarse = filon_pass(edges, fe, w, t, &res.evaluations);

  if (!estimate_error) {
    res.value = coarse;
    res.intervals = int(edges.size()) - 1;
    return res;
  }
  // halved panels
  std::vector<double> edges2;
  edges2.reserve(2 * edges.size());
  for (size_t i = 0; i + 1 < edges.size(); ++i) {
    edges2.push_back(edges[i]);
    edges2.push_back(0.5 * (edges[i] + edges[i + 1]));
  }
  edges2.push_back(edges.back());
  std::vector<cplx> fe2(edges2.size());
  for (size_t i = 0; i < edges2.size(); ++i) fe2[i] = w(edges2[i]);
  res.evaluations += int(edges2.size());
  const cplx fine = filon_pass(edges2, fe2, w, t, &res.evaluations);

  res.value = fine;
  res.error = std::abs(fine - coarse);
  res.intervals = int(edges2.size()) - 1;
  return res;
}

cplx oscillatory_tail_moment(int n, double t, double cut) {
  if (n < 1) throw std::domain_error("oscillatory_tail_moment: n >= 1 required");
  if (t == 0.0) {
    if (n == 1) throw std::domain_error("oscillatory_tail_moment: n = 1 diverges at t = 0");
    return std::pow(cut, 1 - n) / double(n - 1);
  }
  cplx In = special::e1(cplx(0.0, t * cut));
  const cplx phase = std::exp(cplx(0.0, -t * cut));
  for (int k = 1; k < n; ++k) In = (phase * std::pow(cut, -k) - cplx(0.0, t) * In) / double(k);
  return In;
}

cplx algebraic_tail(const Integrand& w, double t, double cut, int n1, int n2) {
  const double x0 = cut, x1 = 1.25 * cut, x2 = 1.5625 * cut;
  const cplx w0 = w(x0), w1 = w(x1), w2 = w(x2);
  double a11 = 0, a12 = 0, a22 = 0;
  cplx b1 = 0, b2 = 0;
  for (auto [x, wx] : {std::pair{x0, w0}, {x1, w1}, {x2, w2}}) {
    const double p1 = std::pow(x, -n1), p2 = std::pow(x, -n2);
    a11 += p1 * p1;
    a12 += p1 * p2;
    a22 += p2 * p2;
    b1 += p1 * wx;
    b2 += p2 * wx;
  }
  const double det = a11 * a22 - a12 * a12;
  const cplx cn1 = (a22 * b1 - a12 * b2) / det;
  const cplx cn2 = (a11 * b2 - a12 * b1) / det;
  return cn1 * oscillatory_tail_moment(n1, t, cut) + cn2 * oscillatory_tail_moment(n2, t, cut);
}

}  // namespace oscrad::quad

#pragma once

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "cbdi/common.hpp"

namespace cbdi {

// Finite interval, endpoint singularities allowed.
template <class F>
double integrate_finite(F&& f, double a, double b, double tol = 1e-10) {
  if (!(b > a)) return 0.0;
  thread_local boost::math::quadrature::tanh_sinh<double> integrator;
  return integrator.integrate(f, a, b, tol);
}

// Semi-infinite interval (a, inf), integrand decaying at infinity.
template <class F>
double integrate_upper(F&& f, double a, double tol = 1e-10) {
  thread_local boost::math::quadrature::exp_sinh<double> integrator;
  return integrator.integrate(f, a, kInf, tol);
}

// Finite interval split at interior breakpoints (jump discontinuities of the
// integrand, e.g. atoms of a tail function).
template <class F>
double integrate_split(F&& f, double a, double b, const std::vector<double>& breaks,
                       double tol = 1e-10) {
  std::vector<double> pts;
  pts.push_back(a);
  for (double p : breaks)
    if (p > a && p < b) pts.push_back(p);
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  double total = 0.0;
  for (size_t i = 0; i + 1 < pts.size(); ++i)
    total += integrate_finite(f, pts[i], pts[i + 1], tol);
  return total;
}

// Adaptive Gauss-Kronrod for complex-valued integrands on [a, b].
template <class F>
std::complex<double> integrate_complex(F&& f, double a, double b, double tol = 1e-10,
                                       int max_levels = 15) {
  using boost::math::quadrature::gauss_kronrod;
  struct Seg { double a, b; int depth; };
  std::complex<double> total{0.0, 0.0};
  std::vector<Seg> stack{{a, b, 0}};
  while (!stack.empty()) {
    Seg s = stack.back();
    stack.pop_back();
    double err = 0.0;
    auto re = gauss_kronrod<double, 15>::integrate(
        [&](double x) { return f(x).real(); }, s.a, s.b, 0, 0, &err);
    double err_i = 0.0;
    auto im = gauss_kronrod<double, 15>::integrate(
        [&](double x) { return f(x).imag(); }, s.a, s.b, 0, 0, &err_i);
    double scale = std::max(1.0, std::abs(total));
    if ((err + err_i) < tol * scale || s.depth >= max_levels) {
      total += std::complex<double>(re, im);
    } else {
      double m = 0.5 * (s.a + s.b);
      stack.push_back({s.a, m, s.depth + 1});
      stack.push_back({m, s.b, s.depth + 1});
    }
  }
  return total;
}

}  // namespace cbdi

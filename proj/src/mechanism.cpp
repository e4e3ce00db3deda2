#include "cbdi/mechanism.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>

#include "cbdi/quadrature.hpp"

namespace cbdi {

namespace {

constexpr double kExpCut = 45.0;  // e^{-45} ~ 3e-20, below double noise

std::vector<double> scaled_breaks(const JumpMeasure& m, double scale, double lo,
                                  double hi) {
  std::vector<double> d;
  m.discontinuities(d);
  std::vector<double> out;
  for (double v : d) {
    double t = v * scale;
    if (t > lo && t < hi && std::isfinite(t)) out.push_back(t);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// kernel * tail product with a log-space fallback where the power-law tail
// overflows at subnormal arguments (tanh_sinh probes points ~1e-308 from the
// endpoint)
double tail_product(double kernel, double tail_value, double u, double e0,
                    double c0) {
  if (std::isfinite(tail_value)) return kernel * tail_value;
  if (!(kernel > 0) || !(c0 > 0)) return 0.0;
  double lg = std::log(kernel) + std::log(c0) - e0 * std::log(u);
  return std::exp(lg);
}

// complex integral over (0, hi] of f with geometric panel refinement toward 0
// (handles integrable algebraic singularities at the origin)
template <class F>
Cplx integrate_complex_to_zero(F&& f, double hi, double tol) {
  Cplx total{0, 0};
  double b = hi;
  for (int k = 0; k < 64; ++k) {
    double a = b * 0.25;
    Cplx piece = integrate_complex(f, a, b, tol);
    total += piece;
    if (std::abs(piece) < tol * std::max(1.0, std::abs(total)) && k > 4) break;
    b = a;
  }
  return total;
}

}  // namespace

// ---------------------------------------------------------------------------
// JumpMeasure integral evaluators
// ---------------------------------------------------------------------------

double JumpMeasure::bernstein_integral(double x) const {
  if (x == 0.0 || is_null()) return 0.0;
  if (const auto* st = std::get_if<StableTail>(&desc_)) {
    const double sg = st->index;
    if (sg >= 1.0) return kInf;
    return st->intensity * boost::math::tgamma(1.0 - sg) / sg * std::pow(x, sg);
  }
  if (const auto* sm = std::get_if<Sum>(&desc_)) {
    double acc = 0.0;
    for (const auto& p : sm->parts) acc += p.bernstein_integral(x);
    return acc;
  }
  if (const auto* fa = std::get_if<FiniteAtoms>(&desc_)) {
    double acc = 0.0;
    for (const auto& [u, m] : fa->atoms) acc += m * (1.0 - std::exp(-u * x));
    return acc;
  }
  if (tail_at_zero().exponent >= 1.0 - 1e-12 && moment1_between(0.0, 1.0) == kInf)
    return kInf;
  // int (1-e^{-ux}) pi(du) = int_0^inf e^{-t} tail(t/x) dt
  const auto az = tail_at_zero();
  auto f = [&](double t) {
    if (!(t > 0)) return 0.0;
    double u = t / x;
    return tail_product(std::exp(-t), tail_open(u), u, az.exponent, az.constant);
  };
  auto breaks = scaled_breaks(*this, x, 0.0, kExpCut);
  double acc = integrate_split(f, 0.0, 1.0, breaks, 1e-12);
  acc += integrate_split(f, 1.0, kExpCut, breaks, 1e-12);
  return acc;
}

Cplx JumpMeasure::bernstein_integral(Cplx s) const {
  if (is_null()) return {0.0, 0.0};
  if (const auto* st = std::get_if<StableTail>(&desc_)) {
    const double sg = st->index;
    if (sg >= 1.0) return {kInf, 0.0};
    return st->intensity * boost::math::tgamma(1.0 - sg) / sg * std::pow(s, sg);
  }
  if (const auto* sm = std::get_if<Sum>(&desc_)) {
    Cplx acc{0, 0};
    for (const auto& p : sm->parts) acc += p.bernstein_integral(s);
    return acc;
  }
  if (const auto* fa = std::get_if<FiniteAtoms>(&desc_)) {
    Cplx acc{0, 0};
    for (const auto& [u, m] : fa->atoms) acc += m * (1.0 - std::exp(-u * s));
    return acc;
  }
  // s * int_0^U e^{-us} tail(u) du
  const double U = std::min(kExpCut / s.real(), max_support());
  std::vector<double> d;
  discontinuities(d);
  auto f = [&](double u) { return std::exp(-u * s) * tail_open(u); };
  Cplx acc = integrate_complex_to_zero(f, std::min(1.0, U), 1e-12);
  double a = std::min(1.0, U);
  std::vector<double> pts{a};
  for (double v : d)
    if (v > a && v < U) pts.push_back(v);
  pts.push_back(U);
  std::sort(pts.begin(), pts.end());
  for (size_t i = 0; i + 1 < pts.size(); ++i)
    acc += integrate_complex(f, pts[i], pts[i + 1], 1e-12);
  return s * acc;
}

double JumpMeasure::sigma_integral(double x) const {
  if (x == 0.0 || is_null()) return 0.0;
  if (const auto* st = std::get_if<StableTail>(&desc_)) {
    const double sg = st->index;
    if (sg <= 1.0) return kInf;  // mean above 1 diverges
    return st->intensity * boost::math::tgamma(2.0 - sg) / (sg * (sg - 1.0)) *
           std::pow(x, sg);
  }
  if (const auto* sm = std::get_if<Sum>(&desc_)) {
    double acc = 0.0;
    for (const auto& p : sm->parts) acc += p.sigma_integral(x);
    return acc;
  }
  if (const auto* fa = std::get_if<FiniteAtoms>(&desc_)) {
    double acc = 0.0;
    for (const auto& [u, m] : fa->atoms)
      acc += m * (std::expm1(-u * x) + u * x);
    return acc;
  }
  double tail_int = integral_tail_above(kExpCut / x);
  if (std::isinf(tail_int)) return kInf;
  // int (e^{-ux}-1+ux) pi(du) = int_0^inf (1-e^{-t}) tail(t/x) dt
  const auto az = tail_at_zero();
  auto f = [&](double t) {
    if (!(t > 0)) return 0.0;
    double u = t / x;
    return tail_product(-std::expm1(-t), tail_open(u), u, az.exponent, az.constant);
  };
  auto breaks = scaled_breaks(*this, x, 0.0, kExpCut);
  double acc = integrate_split(f, 0.0, 1.0, breaks, 1e-12);
  acc += integrate_split(f, 1.0, kExpCut, breaks, 1e-12);
  return acc + x * tail_int;
}

Cplx JumpMeasure::sigma_integral(Cplx s) const {
  if (is_null()) return {0.0, 0.0};
  if (const auto* st = std::get_if<StableTail>(&desc_)) {
    const double sg = st->index;
    if (sg <= 1.0) return {kInf, 0.0};
    return st->intensity * boost::math::tgamma(2.0 - sg) / (sg * (sg - 1.0)) *
           std::pow(s, sg);
  }
  if (const auto* sm = std::get_if<Sum>(&desc_)) {
    Cplx acc{0, 0};
    for (const auto& p : sm->parts) acc += p.sigma_integral(s);
    return acc;
  }
  if (const auto* fa = std::get_if<FiniteAtoms>(&desc_)) {
    Cplx acc{0, 0};
    for (const auto& [u, m] : fa->atoms) acc += m * (std::exp(-u * s) - 1.0 + u * s);
    return acc;
  }
  const double U = std::min(kExpCut / s.real(), max_support());
  std::vector<double> d;
  discontinuities(d);
  auto f = [&](double u) { return (1.0 - std::exp(-u * s)) * tail_open(u); };
  Cplx acc = integrate_complex_to_zero(f, std::min(1.0, U), 1e-12);
  double a = std::min(1.0, U);
  std::vector<double> pts{a};
  for (double v : d)
    if (v > a && v < U) pts.push_back(v);
  pts.push_back(U);
  std::sort(pts.begin(), pts.end());
  for (size_t i = 0; i + 1 < pts.size(); ++i)
    acc += integrate_complex(f, pts[i], pts[i + 1], 1e-12);
  acc += integral_tail_above(U);
  return s * acc;
}

double JumpMeasure::compensated_integral(double x) const {
  if (x == 0.0 || is_null()) return 0.0;
  if (const auto* st = std::get_if<StableTail>(&desc_)) {
    const double sg = st->index;
    const double C = st->intensity;
    if (sg < 1.0)
      return -C * boost::math::tgamma(1.0 - sg) / sg * std::pow(x, sg) +
             x * moment1_between(0.0, 1.0);
    if (sg > 1.0)
      return C * boost::math::tgamma(2.0 - sg) / (sg * (sg - 1.0)) * std::pow(x, sg) -
             x * moment1_between(1.0, kInf);
    // sigma == 1: fall through to the generic split
  }
  if (const auto* sm = std::get_if<Sum>(&desc_)) {
    double acc = 0.0;
    for (const auto& p : sm->parts) acc += p.compensated_integral(x);
    return acc;
  }
  if (const auto* fa = std::get_if<FiniteAtoms>(&desc_)) {
    double acc = 0.0;
    for (const auto& [u, m] : fa->atoms)
      acc += m * (std::expm1(-u * x) + (u <= 1.0 ? u * x : 0.0));
    return acc;
  }
  // small part over (0,1]: x int_0^1 (1-e^{-xs}) (tail(s) - tail_open(1)) ds
  const double t1 = tail_open(1.0);
  const auto az = tail_at_zero();
  std::vector<double> d;
  discontinuities(d);
  std::vector<double> b01;
  for (double v : d)
    if (v > 0 && v < 1) b01.push_back(v);
  auto fs = [&](double sv) {
    if (!(sv > 0)) return 0.0;
    double tv = tail(sv);
    if (std::isfinite(tv)) return -std::expm1(-x * sv) * (tv - t1);
    return tail_product(-std::expm1(-x * sv), tv, sv, az.exponent, az.constant);
  };
  double small = x * integrate_split(fs, 0.0, 1.0, b01, 1e-12);
  // large part over (1,inf): (1-e^{-x}) tail_open(1) + x int_1^inf e^{-xs} tail_open(s) ds
  const double hi = std::min(1.0 + kExpCut / x, max_support());
  std::vector<double> b1;
  for (double v : d)
    if (v > 1 && v < hi) b1.push_back(v);
  auto fl = [&](double sv) { return std::exp(-x * sv) * tail_open(sv); };
  double large = -std::expm1(-x) * t1;
  if (hi > 1.0) large += x * integrate_split(fl, 1.0, hi, b1, 1e-12);
  return small - large;
}

Cplx JumpMeasure::compensated_integral(Cplx s) const {
  if (is_null()) return {0.0, 0.0};
  if (const auto* st = std::get_if<StableTail>(&desc_)) {
    const double sg = st->index;
    const double C = st->intensity;
    if (sg < 1.0)
      return -C * boost::math::tgamma(1.0 - sg) / sg * std::pow(s, sg) +
             s * moment1_between(0.0, 1.0);
    if (sg > 1.0)
      return C * boost::math::tgamma(2.0 - sg) / (sg * (sg - 1.0)) * std::pow(s, sg) -
             s * moment1_between(1.0, kInf);
  }
  if (const auto* sm = std::get_if<Sum>(&desc_)) {
    Cplx acc{0, 0};
    for (const auto& p : sm->parts) acc += p.compensated_integral(s);
    return acc;
  }
  if (const auto* fa = std::get_if<FiniteAtoms>(&desc_)) {
    Cplx acc{0, 0};
    for (const auto& [u, m] : fa->atoms)
      acc += m * (std::exp(-u * s) - 1.0 + (u <= 1.0 ? u * s : Cplx{0, 0}));
    return acc;
  }
  // generic: sigma part on (0,1] minus bernstein part on (1,inf)
  const double t1 = tail_open(1.0);
  std::vector<double> d;
  discontinuities(d);
  auto fsmall = [&](double u) {
    return (1.0 - std::exp(-u * s)) * (tail(u) - t1);
  };
  Cplx small = integrate_complex_to_zero(fsmall, 1.0, 1e-12);
  const double U = std::min(1.0 + kExpCut / s.real(), max_support());
  auto flarge = [&](double u) { return std::exp(-u * s) * tail_open(u); };
  Cplx large = -(std::exp(-s) - 1.0) * t1;
  if (U > 1.0) {
    std::vector<double> pts{1.0};
    for (double v : d)
      if (v > 1 && v < U) pts.push_back(v);
    pts.push_back(U);
    std::sort(pts.begin(), pts.end());
    Cplx tailint{0, 0};
    for (size_t i = 0; i + 1 < pts.size(); ++i)
      tailint += integrate_complex(flarge, pts[i], pts[i + 1], 1e-12);
    large += s * tailint;
  }
  return s * small - large;
}

// ---------------------------------------------------------------------------
// Mechanism
// ---------------------------------------------------------------------------

Mechanism::Mechanism(JumpMeasure jumps, double a, double gamma, double lambda)
    : jumps_(std::move(jumps)), a_(a), gamma_(gamma), lambda_(lambda) {}

double Mechanism::operator()(double x) const {
  return a_ * x * x - gamma_ * x - lambda_ + jumps_.compensated_integral(x);
}

Cplx Mechanism::operator()(Cplx s) const {
  return a_ * s * s - gamma_ * s - lambda_ + jumps_.compensated_integral(s);
}

double Mechanism::derivative(double x) const {
  const double h = std::min(1e-4 * std::max(x, 1.0), x / 4);
  if (h <= 0) {  // one-sided at the origin
    const double h2 = 1e-7;
    return ((*this)(h2) - (*this)(0.0)) / h2;
  }
  const auto& f = *this;
  return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h);
}

double Mechanism::derivative_at_zero() const {
  double m1 = jumps_.moment1_between(1.0, kInf);
  if (std::isinf(m1)) return -kInf;
  return -gamma_ - m1;
}

bool Mechanism::is_zero() const {
  return a_ == 0 && gamma_ == 0 && lambda_ == 0 && jumps_.is_null();
}

Mechanism make_mechanism(JumpMeasure jumps, double a, double gamma, double lambda) {
  if (a < 0) throw NegativeParameter("diffusion coefficient a < 0");
  if (lambda < 0) throw NegativeParameter("killing rate lambda < 0");
  jumps.validate();
  Mechanism m(std::move(jumps), a, gamma, lambda);
  // convexity spot check
  const double xs[] = {0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 32.0};
  for (size_t i = 0; i + 2 < std::size(xs); ++i) {
    double l = m(xs[i]), c = m(xs[i + 1]), r = m(xs[i + 2]);
    double chord = (l * (xs[i + 2] - xs[i + 1]) + r * (xs[i + 1] - xs[i])) /
                   (xs[i + 2] - xs[i]);
    if (c > chord + 1e-9 * (1.0 + std::abs(r)))
      throw InvalidLevyMeasure("constructed function fails convexity check");
  }
  return m;
}

Mechanism shift(const Mechanism& m, double c) {
  return Mechanism(m.jumps(), m.a(), m.gamma() + c, m.lambda());
}

Mechanism truncate(const Mechanism& m, double n) {
  if (!(n >= 1.0)) throw NegativeParameter("truncation level must be >= 1");
  return Mechanism(JumpMeasure::truncated(m.jumps(), n, m.lambda()), m.a(),
                   m.gamma(), 0.0);
}

Mechanism operator+(const Mechanism& l, const Mechanism& r) {
  return Mechanism(JumpMeasure::sum({l.jumps(), r.jumps()}), l.a() + r.a(),
                   l.gamma() + r.gamma(), l.lambda() + r.lambda());
}

Mechanism pure_diffusion(double a) {
  return make_mechanism(JumpMeasure::null(), a, 0.0, 0.0);
}

Mechanism linear_mechanism(double b) {
  return make_mechanism(JumpMeasure::null(), 0.0, -b, 0.0);
}

Mechanism killing_mechanism(double lambda) {
  return make_mechanism(JumpMeasure::null(), 0.0, 0.0, lambda);
}

Mechanism stable_branching(double C, double sigma) {
  if (!(C > 0)) throw NegativeParameter("stable constant must be > 0");
  if (sigma == 2.0) return pure_diffusion(C);
  if (!(sigma > 1.0) || !(sigma < 2.0))
    throw NegativeParameter("stable branching exponent must lie in (1,2]");
  const double ct = C * sigma * (sigma - 1.0) / boost::math::tgamma(2.0 - sigma);
  const double gamma = -ct / (sigma - 1.0);
  return Mechanism(JumpMeasure::stable_tail(ct, sigma), 0.0, gamma, 0.0);
}

Mechanism stable_bernstein(double c, double alpha) {
  if (!(c > 0)) throw NegativeParameter("stable constant must be > 0");
  if (alpha == 1.0) return linear_mechanism(-c);
  if (!(alpha > 0.0) || !(alpha < 1.0))
    throw NegativeParameter("bernstein exponent must lie in (0,1]");
  const double ct = c * alpha / boost::math::tgamma(1.0 - alpha);
  const double gamma = ct / (1.0 - alpha);
  return Mechanism(JumpMeasure::stable_tail(ct, alpha), 0.0, gamma, 0.0);
}

// ---------------------------------------------------------------------------
// Decomposition
// ---------------------------------------------------------------------------

double SigmaForm::operator()(double x) const {
  return a * x * x + d * x + eta.sigma_integral(x);
}

Cplx SigmaForm::operator()(Cplx s) const {
  return a * s * s + d * s + eta.sigma_integral(s);
}

double SigmaForm::derivative(double x) const {
  const double h = std::min(1e-4 * std::max(x, 1.0), x / 4);
  const auto& f = *this;
  if (h <= 0) return d;
  return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h);
}

bool SigmaForm::is_zero() const { return a == 0 && d == 0 && eta.is_null(); }

PowerAsymp SigmaForm::behavior_at_infinity() const {
  std::vector<PowerAsymp> cands;
  if (a > 0) cands.push_back({2.0, a, true});
  double lin = d;
  bool lin_exact = true;
  if (!eta.is_null()) {
    auto t0 = eta.tail_at_zero();
    if (t0.exponent > 1.0 + 1e-9 && t0.exponent < 2.0) {
      cands.push_back({t0.exponent,
                       t0.constant * boost::math::tgamma(2.0 - t0.exponent) /
                           (t0.exponent - 1.0),
                       t0.exact});
    } else if (std::abs(t0.exponent - 1.0) <= 1e-9) {
      cands.push_back({1.0, kInf, false});  // critical exponent
    } else {
      double m1 = eta.moment1_between(0.0, kInf);
      if (std::isinf(m1))
        cands.push_back({1.0, kInf, false});
      else {
        lin += m1;
        lin_exact = lin_exact && t0.exact;
      }
    }
  }
  if (lin > 0 || cands.empty()) cands.push_back({1.0, lin, lin_exact});
  PowerAsymp best{-kInf, 0.0, true};
  for (const auto& c : cands) {
    if (c.exponent > best.exponent + 1e-9)
      best = c;
    else if (std::abs(c.exponent - best.exponent) <= 1e-9) {
      best.constant += c.constant;
      best.exact = best.exact && c.exact;
    }
  }
  return best;
}

double BernsteinPart::operator()(double x) const {
  return beta * x + lambda + nu.bernstein_integral(x);
}

Cplx BernsteinPart::operator()(Cplx s) const {
  return beta * s + lambda + nu.bernstein_integral(s);
}

double BernsteinPart::derivative(double x) const {
  const double h = std::min(1e-4 * std::max(x, 1.0), x / 4);
  const auto& f = *this;
  if (h <= 0) return beta;
  return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h);
}

bool BernsteinPart::is_zero() const {
  return beta == 0 && lambda == 0 && nu.is_null();
}

PowerAsymp BernsteinPart::behavior_at_zero() const {
  std::vector<PowerAsymp> cands;
  if (lambda > 0) cands.push_back({0.0, lambda, true});
  double lin = beta;
  bool lin_exact = true;
  if (!nu.is_null()) {
    auto ti = nu.tail_at_infinity();
    if (ti.exponent < 1.0 - 1e-9) {
      cands.push_back({ti.exponent,
                       ti.constant * boost::math::tgamma(1.0 - ti.exponent),
                       ti.exact});
    } else if (std::abs(ti.exponent - 1.0) <= 1e-9) {
      cands.push_back({1.0, kInf, false});  // critical exponent
    } else {
      double m1 = nu.moment1_between(0.0, kInf);
      if (std::isinf(m1))
        cands.push_back({1.0, kInf, false});
      else {
        lin += m1;
        lin_exact = lin_exact && ti.exact;
      }
    }
  }
  if (lin > 0 || cands.empty()) cands.push_back({1.0, lin, lin_exact});
  PowerAsymp best{kInf, 0.0, true};
  for (const auto& c : cands) {
    if (c.exponent < best.exponent - 1e-9)
      best = c;
    else if (std::abs(c.exponent - best.exponent) <= 1e-9) {
      best.constant += c.constant;
      best.exact = best.exact && c.exact;
    }
  }
  return best;
}

Decomposition canonical_decomposition(const Mechanism& m) {
  Decomposition dec;
  const JumpMeasure& pi = m.jumps();
  // pure (-Phi) Bernstein form: Psi <= 0
  if (m.a() == 0) {
    double m1b = pi.moment1_between(0.0, 1.0);
    if (std::isfinite(m1b)) {
      double beta_eff = m.gamma() - m1b;
      if (beta_eff >= -1e-13) {
        dec.phi.beta = std::max(beta_eff, 0.0);
        dec.phi.lambda = m.lambda();
        dec.phi.nu = pi;
        return dec;
      }
    }
  }
  // pure Sigma form: Psi >= 0 with no killing
  if (m.lambda() == 0) {
    double m1a = pi.moment1_between(1.0, kInf);
    if (std::isfinite(m1a)) {
      double d_eff = -m.gamma() - m1a;
      if (d_eff >= -1e-13) {
        dec.sigma.a = m.a();
        dec.sigma.d = std::max(d_eff, 0.0);
        dec.sigma.eta = pi;
        return dec;
      }
    }
  }
  // canonical split at u = 1
  dec.sigma.a = m.a();
  dec.sigma.d = std::max(-m.gamma(), 0.0);
  if (!pi.is_null()) {
    dec.sigma.eta = JumpMeasure::restricted(pi, 0.0, 1.0);
    dec.phi.nu = JumpMeasure::restricted(pi, 1.0, kInf);
  }
  dec.phi.beta = std::max(m.gamma(), 0.0);
  dec.phi.lambda = m.lambda();
  return dec;
}

// ---------------------------------------------------------------------------
// Largest zero and classification
// ---------------------------------------------------------------------------

double largest_zero(const Mechanism& m) {
  if (m.is_zero()) return kInf;  // Psi == 0: never strictly positive
  const double dz = m.derivative_at_zero();
  if (m.lambda() == 0 && dz >= 0) return 0.0;

  double lo = 0.0;  // Psi(lo) <= 0
  double hi = 1.0;
  bool bracketed = false;
  for (; hi <= 1e12; hi *= 2) {
    if (m(hi) > 0) {
      bracketed = true;
      break;
    }
    lo = hi;
  }
  if (!bracketed) {
    if (m.derivative(1e12) < 0) return kInf;
    for (; hi <= 1e100; hi *= 4) {
      if (m(hi) > 0) {
        bracketed = true;
        break;
      }
      lo = hi;
      if (m.derivative(hi) <= 0) return kInf;
    }
    if (!bracketed) return kInf;
  }
  if (lo == 0.0) lo = 1e-300;
  for (int it = 0; it < 200 && hi - lo > 1e-10 * hi; ++it) {
    double mid = (lo > 0 && hi / lo > 4.0) ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
    if (m(mid) <= 0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

MechanismClass classify_mechanism(const Mechanism& m) {
  double rho = largest_zero(m);
  if (rho == 0.0) {
    double dz = m.derivative_at_zero();
    return {dz > 0 ? MechanismClassKind::Subcritical : MechanismClassKind::Critical,
            0.0};
  }
  if (std::isinf(rho)) return {MechanismClassKind::Immortal, kInf};
  return {MechanismClassKind::SupercriticalChangingSign, rho};
}

// ---------------------------------------------------------------------------
// Integral conditions
// ---------------------------------------------------------------------------

Trichotomy integral_condition(ConditionKind kind, const Decomposition& d) {
  Trichotomy t;
  if (kind == ConditionKind::H1) {
    const BernsteinPart& phi = d.phi;
    if (phi.is_zero()) {
      t.v = Trichotomy::V::Infinite;
      t.reason = "Phi == 0; 1/0 = inf convention";
      return t;
    }
    PowerAsymp p = phi.behavior_at_zero();
    if (p.exponent < 1.0 - 1e-9) {
      t.v = Trichotomy::V::Finite;
      t.value = integrate_finite([&](double u) { return 1.0 / phi(u); }, 0.0, 1.0,
                                 1e-9);
      t.reason = "endpoint exponent < 1";
    } else if (p.exact && std::isfinite(p.constant) && p.constant > 0) {
      t.v = Trichotomy::V::Infinite;
      t.reason = "Phi ~ c*u near 0, log divergence";
    } else {
      t.v = Trichotomy::V::Inconclusive;
      t.reason = "critical endpoint exponent 1 for Phi at 0";
    }
    return t;
  }
  // H2
  const SigmaForm& sg = d.sigma;
  if (sg.is_zero()) {
    t.v = Trichotomy::V::Infinite;
    t.reason = "Sigma == 0; 1/0 = inf convention";
    return t;
  }
  PowerAsymp q = sg.behavior_at_infinity();
  if (q.exponent > 1.0 + 1e-9) {
    t.v = Trichotomy::V::Finite;
    t.value = integrate_upper([&](double u) { return 1.0 / sg(u); }, 1.0, 1e-9);
    t.reason = "growth exponent > 1";
  } else if (q.exact && std::isfinite(q.constant) && q.constant > 0) {
    t.v = Trichotomy::V::Infinite;
    t.reason = "Sigma ~ d*u at infinity, log divergence";
  } else {
    t.v = Trichotomy::V::Inconclusive;
    t.reason = "critical growth exponent 1 for Sigma at infinity";
  }
  return t;
}

Trichotomy integral_condition(ConditionKind kind, const Mechanism& m) {
  return integral_condition(kind, canonical_decomposition(m));
}

Trichotomy condition_ji(const Mechanism& psi, const Mechanism& psi_hat) {
  Trichotomy t;
  Decomposition dh = canonical_decomposition(psi_hat);
  if (dh.sigma.is_zero())
    throw DegenerateMechanism("(JI): Sigma_hat == 0, integral is ill-posed");
  PowerAsymp q = dh.sigma.behavior_at_infinity();
  auto ti = psi.jumps().tail_at_infinity();
  const double num_exp = std::max(0.0, 1.0 - ti.exponent);  // 1 + u*pibar(u)
  if (q.exponent - num_exp > 1.0 + 1e-9) {
    t.v = Trichotomy::V::Finite;
    const auto& pi = psi.jumps();
    t.value = integrate_upper(
        [&](double u) { return (1.0 + u * pi.tail(u)) / dh.sigma(u); }, 1.0, 1e-9);
    t.reason = "exponent gap > 1";
  } else if (q.exponent - num_exp < 1.0 - 1e-9) {
    t.v = Trichotomy::V::Infinite;
    t.reason = "exponent gap < 1";
  } else {
    t.v = Trichotomy::V::Inconclusive;
    t.reason = "critical exponent gap in (JI)";
  }
  return t;
}

}  // namespace cbdi

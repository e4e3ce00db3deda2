#pragma once

#include <complex>
#include <memory>
#include <utility>
#include <variant>
#include <vector>

#include "cbdi/common.hpp"

namespace cbdi {

// A Levy measure on (0, infinity) given by a parametric descriptor. Analytic
// formulas only ever consume the measure through its tail, its partial
// moments and restricted sampling, so those are the interfaces every family
// implements.
class JumpMeasure {
 public:
  struct Null {};

  // density C * u^{-1-sigma} du, sigma in (0,2)
  struct StableTail {
    double intensity;
    double index;
  };

  // atoms (location u_i > 0, mass m_i > 0), kept sorted by location
  struct FiniteAtoms {
    std::vector<std::pair<double, double>> atoms;
  };

  // nonincreasing tail pi([u,inf)) sampled on a log grid, power-law
  // extrapolation with declared exponents below/above the grid:
  // pi([u,inf)) ~ t_first*(u/u_first)^{-exp_zero} as u -> 0, and
  // pi([u,inf)) ~ t_last*(u/u_last)^{-exp_inf} as u -> inf.
  struct TabulatedTail {
    std::vector<double> log_u;
    std::vector<double> log_tail;
    double exp_zero;
    double exp_inf;
  };

  // inner restricted to (0, level) plus an atom at `level` of mass
  // inner([level,inf)) + extra_mass (mechanism-level truncation folds the
  // killing rate into extra_mass)
  struct Truncated {
    std::shared_ptr<const JumpMeasure> inner;
    double level;
    double extra_mass;
  };

  // inner restricted to (lo, hi]
  struct Restricted {
    std::shared_ptr<const JumpMeasure> inner;
    double lo;
    double hi;
  };

  struct Sum {
    std::vector<JumpMeasure> parts;
  };

  JumpMeasure() : desc_(Null{}) {}

  static JumpMeasure null() { return JumpMeasure(); }
  static JumpMeasure stable_tail(double intensity, double index);
  static JumpMeasure atoms(std::vector<std::pair<double, double>> atoms);
  static JumpMeasure tabulated(std::vector<double> u, std::vector<double> tail,
                               double exp_zero, double exp_inf);
  static JumpMeasure truncated(const JumpMeasure& inner, double level,
                               double extra_mass = 0.0);
  static JumpMeasure restricted(const JumpMeasure& inner, double lo, double hi);
  static JumpMeasure sum(std::vector<JumpMeasure> parts);

  bool is_null() const;

  // pi([u, inf)) and pi((u, inf)) for u > 0
  double tail(double u) const;
  double tail_open(double u) const;
  double mass_between(double lo, double hi) const;  // pi((lo, hi])

  // partial moments; may return +inf when divergent
  double moment1_between(double lo, double hi) const;  // int_(lo,hi] u pi(du)
  double moment2_below(double c) const;                // int_(0,c] u^2 pi(du)
  // int_A^inf pi([s,inf)) ds; +inf when the mean above A diverges
  double integral_tail_above(double a) const;

  // upper end of the support; +inf when unbounded
  double max_support() const;

  // Tail behavior pi([u,inf)) ~ constant * u^{-exponent} toward an endpoint.
  // `exact` marks closed-form parametric knowledge (vs declared/interpolated).
  struct TailAsymp {
    double exponent = 0.0;
    double constant = 0.0;
    bool exact = false;
  };
  TailAsymp tail_at_zero() const;
  TailAsymp tail_at_infinity() const;

  // Inverse-tail sample of pi restricted to (eps, inf), normalized.
  // `next_uniform` must yield iid U(0,1).
  template <class URng>
  double sample_above(double eps, URng&& next_uniform) const;

  // Locations where the tail jumps (atoms, truncation levels) - quadrature
  // split points.
  void discontinuities(std::vector<double>& out) const;

  void validate() const;  // throws InvalidLevyMeasure / NegativeParameter

  // int (1 - e^{-ux}) pi(du); +inf when int (1^u) pi diverges
  double bernstein_integral(double x) const;
  std::complex<double> bernstein_integral(std::complex<double> s) const;
  // int (e^{-ux} - 1 + ux) pi(du); +inf when int (u^u^2) pi diverges
  double sigma_integral(double x) const;
  std::complex<double> sigma_integral(std::complex<double> s) const;
  // int (e^{-ux} - 1 + ux 1_{u<=1}) pi(du)
  double compensated_integral(double x) const;
  std::complex<double> compensated_integral(std::complex<double> s) const;

 private:
  using Desc = std::variant<Null, StableTail, FiniteAtoms, TabulatedTail,
                            Truncated, Restricted, Sum>;
  explicit JumpMeasure(Desc d) : desc_(std::move(d)) {}

  double quantile_above(double eps, double q) const;  // tail inversion

  Desc desc_;
};

template <class URng>
double JumpMeasure::sample_above(double eps, URng&& next_uniform) const {
  if (const auto* s = std::get_if<Sum>(&desc_)) {
    double total = tail_open(eps);
    double pick = next_uniform() * total;
    double acc = 0.0;
    for (size_t i = 0; i < s->parts.size(); ++i) {
      acc += s->parts[i].tail_open(eps);
      if (pick <= acc || i + 1 == s->parts.size())
        return s->parts[i].sample_above(eps, next_uniform);
    }
  }
  return quantile_above(eps, next_uniform());
}

}  // namespace cbdi

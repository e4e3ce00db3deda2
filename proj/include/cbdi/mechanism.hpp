#pragma once

#include <complex>
#include <string>

#include "cbdi/jump_measure.hpp"

namespace cbdi {

using Cplx = std::complex<double>;

// Levy-Khintchine function by its quadruplet:
//   Psi(x) = a x^2 - gamma x - lambda + int (e^{-ux} - 1 + ux 1_{u<=1}) pi(du)
class Mechanism {
 public:
  Mechanism() = default;  // Psi == 0
  Mechanism(JumpMeasure jumps, double a, double gamma, double lambda);

  double a() const { return a_; }
  double gamma() const { return gamma_; }
  double lambda() const { return lambda_; }
  const JumpMeasure& jumps() const { return jumps_; }

  double operator()(double x) const;
  Cplx operator()(Cplx s) const;  // Re s > 0

  double derivative(double x) const;       // numeric, x > 0
  double derivative_at_zero() const;       // in [-inf, inf)
  bool is_zero() const;

 private:
  JumpMeasure jumps_;
  double a_ = 0.0;
  double gamma_ = 0.0;
  double lambda_ = 0.0;
};

Mechanism make_mechanism(JumpMeasure jumps, double a, double gamma, double lambda);
Mechanism shift(const Mechanism& m, double c);       // Psi_{-c}: x -> Psi(x) - c x
Mechanism truncate(const Mechanism& m, double n);    // Psi^n, jumps above n folded
Mechanism operator+(const Mechanism& l, const Mechanism& r);

// Factories for the families the paper works with.
Mechanism pure_diffusion(double a);                  // Psi(x) = a x^2
Mechanism linear_mechanism(double b);                // Psi(x) = b x
Mechanism killing_mechanism(double lambda);          // Psi(x) = -lambda
// Psi(x) = C x^sigma, sigma in (1,2]; sigma == 2 is the diffusion case
Mechanism stable_branching(double C, double sigma);
// Psi(x) = -c x^alpha, alpha in (0,1]; alpha == 1 is the pure-drift case
Mechanism stable_bernstein(double c, double alpha);

// Power behavior f(x) ~ constant * x^exponent toward an endpoint.
struct PowerAsymp {
  double exponent = 0.0;
  double constant = 0.0;
  bool exact = false;
};

// Sigma(x) = a x^2 + d x + int (e^{-ux} - 1 + ux) eta(du)
struct SigmaForm {
  double a = 0.0;
  double d = 0.0;
  JumpMeasure eta;

  double operator()(double x) const;
  Cplx operator()(Cplx s) const;
  double derivative(double x) const;
  bool is_zero() const;
  PowerAsymp behavior_at_infinity() const;
};

// Phi(x) = beta x + int (1 - e^{-ux}) nu(du) + lambda
struct BernsteinPart {
  double beta = 0.0;
  double lambda = 0.0;
  JumpMeasure nu;

  double operator()(double x) const;
  Cplx operator()(Cplx s) const;
  double derivative(double x) const;
  bool is_zero() const;
  PowerAsymp behavior_at_zero() const;
};

struct Decomposition {
  SigmaForm sigma;
  BernsteinPart phi;
};

// Canonical split eta = pi|(0,1], nu = pi|(1,inf), d = gamma^-, beta = gamma^+.
// Mechanisms exactly representable in pure Sigma- or pure (-Phi)-form are
// returned unsplit so that e.g. Psi = -x^alpha yields (Sigma == 0, Phi = x^alpha).
Decomposition canonical_decomposition(const Mechanism& m);

enum class MechanismClassKind {
  Subcritical,
  Critical,
  SupercriticalChangingSign,
  Immortal,
};

struct MechanismClass {
  MechanismClassKind kind;
  double rho;  // largest zero, in [0, inf]
};

double largest_zero(const Mechanism& m);
MechanismClass classify_mechanism(const Mechanism& m);

// Trichotomy of an improper-integral condition.
struct Trichotomy {
  enum class V { Finite, Infinite, Inconclusive };
  V v = V::Inconclusive;
  double value = 0.0;  // the integral when Finite
  std::string reason;

  bool finite() const { return v == V::Finite; }
  bool infinite() const { return v == V::Infinite; }
  bool inconclusive() const { return v == V::Inconclusive; }
};

enum class ConditionKind { H1, H2 };

// H1: int_0^1 du/Phi(u); H2: int_1^inf du/Sigma(u). Decided by
// endpoint-exponent analysis first, quadrature for the finite value.
Trichotomy integral_condition(ConditionKind kind, const Decomposition& d);
Trichotomy integral_condition(ConditionKind kind, const Mechanism& m);
// (JI): int_1^inf (1 + u pibar(u)) / Sigma_hat(u) du with pi the jump measure
// of psi and Sigma_hat the competition part of psi_hat.
Trichotomy condition_ji(const Mechanism& psi, const Mechanism& psi_hat);

}  // namespace cbdi

#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace cbdi {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidLevyMeasure : Error { using Error::Error; };
struct NegativeParameter : Error { using Error::Error; };
struct DegenerateMechanism : Error { using Error::Error; };
struct NotSubcritical : Error { using Error::Error; };
struct FiniteVariation : Error { using Error::Error; };
struct NoDensityKnown : Error { using Error::Error; };
struct CompetitionTooWeak : Error { using Error::Error; };
struct CooperationTooWeak : Error { using Error::Error; };
struct NotRegularlyVarying : Error { using Error::Error; };
struct UnstableStep : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct ValidationError : Error { using Error::Error; };

// Neumaier-compensated accumulator. Reductions over paths are done in index
// order so results do not depend on thread scheduling.
class CompensatedSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      c_ += (sum_ - t) + x;
    else
      c_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + c_; }

 private:
  double sum_ = 0.0;
  double c_ = 0.0;
};

// Geometric grid from lo to hi with `per_decade` points per decade,
// endpoints included.
inline std::vector<double> geometric_grid(double lo, double hi, int per_decade) {
  std::vector<double> g;
  if (!(lo > 0) || !(hi > lo) || per_decade < 1) return g;
  const double decades = std::log10(hi / lo);
  const int n = std::max(2, static_cast<int>(std::ceil(decades * per_decade)) + 1);
  g.reserve(n);
  for (int i = 0; i < n; ++i)
    g.push_back(lo * std::pow(10.0, decades * i / (n - 1)));
  g.back() = hi;
  return g;
}

inline bool nearly_equal(double a, double b, double rel, double abs_tol = 0.0) {
  return std::abs(a - b) <= abs_tol + rel * std::max(std::abs(a), std::abs(b));
}

}  // namespace cbdi

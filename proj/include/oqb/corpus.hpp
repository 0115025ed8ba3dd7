#pragma once

// Function models, Lebesgue norms of f'' and the reference integrator that
// every other module treats as ground truth.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace oqb {

/// Closed interval [a, b] with a < b.
class Interval {
 public:
  /// Throws InvalidArgument unless both ends are finite and a < b.
  Interval(double a, double b);

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double width() const noexcept { return b_ - a_; }
  double midpoint() const noexcept { return 0.5 * (a_ + b_); }
  bool contains(double t) const noexcept { return a_ <= t && t <= b_; }

  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  double a_;
  double b_;
};

/// Which Lebesgue norm of f'' a bound consumes.
class NormVariant {
 public:
  enum class Kind { Sup, Lp, L1 };

  static NormVariant sup() noexcept { return NormVariant(Kind::Sup, 0.0); }
  static NormVariant l1() noexcept { return NormVariant(Kind::L1, 1.0); }
  /// Requires p > 1 (finite).
  static NormVariant lp(double p);

  /// Accepts "sup", "linf", "l1", "l2", "l3", "lp:<p>" (case-insensitive).
  static NormVariant parse(std::string_view text);

  Kind kind() const noexcept { return kind_; }
  /// Exponent p; only meaningful for Lp.
  double p() const noexcept { return p_; }
  /// Hoelder conjugate q = p / (p - 1); only meaningful for Lp.
  double q() const noexcept { return p_ / (p_ - 1.0); }

  /// Stable label used in reports: "Linf", "L1", "Lp(2)".
  std::string name() const;

  friend bool operator==(const NormVariant&, const NormVariant&) = default;

 private:
  NormVariant(Kind kind, double p) noexcept : kind_(kind), p_(p) {}

  Kind kind_;
  double p_;
};

/// The four variants the harness sweeps by default.
std::vector<NormVariant> default_variants();

using RealFn = std::function<double(double)>;

/// A C^2 test function with explicit derivative evaluators.
///
/// Evaluators must be stateless; models are shared across threads.
struct FunctionModel {
  std::string id;
  RealFn f;
  RealFn f1;
  RealFn f2;
  /// Optional exact value of the integral of f over [lo, hi].
  std::function<double(double lo, double hi)> exact_integral;
  /// Optional exact norm of f'' over an interval.
  std::function<double(const Interval&, const NormVariant&)> exact_norm;
};

inline constexpr double kDefaultTolPerUnitLength = 1e-10;
inline constexpr int kDefaultMaxDepth = 60;

/// 1e-10 times the interval width.
double default_tolerance(const Interval& iv) noexcept;

/// Adaptive Gauss-Kronrod 7/15 integration of g over iv.
///
/// A subinterval is accepted when |K15 - G7| is at most tol scaled by the
/// subinterval's share of the total width (or at the roundoff floor).
/// Deterministic: subintervals are summed left to right.
/// Throws NonFinite on any NaN/inf evaluation and NoConvergence once
/// max_depth bisections are exhausted.
double reference_integrate(const RealFn& g, const Interval& iv, double tol,
                           int max_depth = kDefaultMaxDepth);

/// Same as above, but the range is first split at every breakpoint inside
/// (a, b). Breakpoints outside the open interval are ignored.
double reference_integrate(const RealFn& g, const Interval& iv,
                           std::span<const double> breakpoints, double tol,
                           int max_depth = kDefaultMaxDepth);

/// Integral of f over iv: exact antiderivative when the model has one,
/// reference integration otherwise.
double integrate_model(const FunctionModel& fm, const Interval& iv);

inline constexpr int kSupSamples = 4097;
inline constexpr int kGoldenIterations = 60;

/// Heuristic maximum of g over iv: dense equispaced sampling followed by
/// golden-section refinement on the bracket around the best sample.
/// Not a rigorous global optimizer.
double sampled_max(const RealFn& g, const Interval& iv, int samples = kSupSamples,
                   int golden_iterations = kGoldenIterations);

/// ||f''|| over iv in the requested variant. Uses fm.exact_norm when present.
double norm_f2(const FunctionModel& fm, const Interval& iv, const NormVariant& v);

/// ∫ |f''|^p over iv (the p-th power of the Lp norm), p >= 1.
double norm_f2_power(const FunctionModel& fm, const Interval& iv, double p);

struct Range {
  double lo;
  double hi;
};

/// Range [min f'', max f''] over iv, by the same sampling machinery.
Range f2_range(const FunctionModel& fm, const Interval& iv);

/// t², t³, eᵗ, sin 3t, 1/(1+t²), log(1+t) and a linear model.
std::vector<FunctionModel> default_corpus();

/// Looks a model up in the static registry. Throws InvalidArgument.
const FunctionModel& find_model(std::string_view id);

/// Ids of every registered model, in registry order.
std::vector<std::string> model_ids();

/// Outcome of checking a model's derivative and integral evaluators.
struct ModelCheck {
  bool ok = true;
  double max_f1_error = 0.0;
  double max_f2_error = 0.0;
  double integral_error = 0.0;
  std::string message;
};

/// Compares f1, f2 against central differences at `points` random interior
/// points (relative error <= 1e-6, step proportional to cbrt(eps)) and
/// exact_integral against the reference integrator (<= 1e-10 relative).
ModelCheck check_model(const FunctionModel& fm, const Interval& iv, int points = 100,
                       std::uint64_t seed = 0x5eed);

}  // namespace oqb

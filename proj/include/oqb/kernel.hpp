#pragma once

// Peano-type kernels for the weighted two-mean deviation and their exact
// piecewise-polynomial statistics.
//
// With c1 = a + h(b-a)/2 and c2 = b - h(b-a)/2 the main kernel is
//
//   P(x,t) = alpha / ((alpha+beta)(x-a)) * (t - c1)^2 / 2   for a <= t <= x
//   P(x,t) = beta  / ((alpha+beta)(b-x)) * (t - c2)^2 / 2   for x <  t <= b
//
// and every bound downstream consumes the exact statistics computed here.

#include <span>
#include <utility>
#include <vector>

#include "oqb/corpus.hpp"

namespace oqb {

/// Non-negative weights on the two partial integral means, not both zero.
class Weights {
 public:
  Weights(double alpha, double beta);

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  double sum() const noexcept { return alpha_ + beta_; }

  friend bool operator==(const Weights&, const Weights&) = default;

 private:
  double alpha_;
  double beta_;
};

/// (interval, weights, h, x) with h in [0, 1] and x in the admissible range
/// [a + h(b-a)/2, b - h(b-a)/2], kept 1e-9(b-a) away from both endpoints.
class KernelConfig {
 public:
  static constexpr double kInteriorMargin = 1e-9;

  /// Throws InvalidArgument when any invariant fails.
  KernelConfig(Interval iv, Weights w, double h, double x);

  /// Admissible x range for (iv, h), interior margin included.
  static Range admissible_x(const Interval& iv, double h);

  const Interval& interval() const noexcept { return iv_; }
  const Weights& weights() const noexcept { return w_; }
  double h() const noexcept { return h_; }
  double x() const noexcept { return x_; }

  /// h(b-a)/2, the distance of each vertex from its endpoint.
  double offset() const noexcept { return h_ * iv_.width() / 2.0; }
  /// a + h(b-a)/2
  double left_vertex() const noexcept { return iv_.a() + offset(); }
  /// b - h(b-a)/2
  double right_vertex() const noexcept { return iv_.b() - offset(); }

  /// Weight of the left branch, alpha / ((alpha+beta)(x-a)).
  double left_scale() const noexcept { return w_.alpha() / (w_.sum() * (x_ - iv_.a())); }
  /// Weight of the right branch, beta / ((alpha+beta)(b-x)).
  double right_scale() const noexcept { return w_.beta() / (w_.sum() * (iv_.b() - x_)); }

 private:
  Interval iv_;
  Weights w_;
  double h_;
  double x_;
};

/// Main quadratic kernel with offset h. Throws OutOfDomain for t outside [a, b].
double kernel_main_eval(const KernelConfig& cfg, double t);

/// First-degree kernel: same branch weights, (t - c1) and (t - c2) instead of
/// the halved squares.
double kernel_linear_eval(const KernelConfig& cfg, double t);

/// Quadratic kernel without offset: (t-a)^2 and (t-b)^2 branches. Ignores cfg.h().
double kernel_quadratic_eval(const KernelConfig& cfg, double t);

/// Exact statistics of the main kernel over [a, b].
struct KernelStats {
  double integral = 0.0;         ///< ∫ P
  double abs_integral = 0.0;     ///< ∫ |P|  (equals integral: P >= 0)
  double square_integral = 0.0;  ///< ∫ P²
  double sup = 0.0;              ///< sup P over [a, b]
  double inf = 0.0;              ///< inf P over [a, b]
  double mean = 0.0;             ///< M(P; a, b)
  /// (q, ∫|P|^q) for each q requested.
  std::vector<std::pair<double, double>> q_moments;

  /// ∫|P|^q for a q passed to kernel_stats. Throws InvalidArgument otherwise.
  double q_integral(double q) const;
};

/// ∫ |P|^q over [a, b] in closed form, q >= 1.
double kernel_q_moment(const KernelConfig& cfg, double q);

/// All statistics in closed form. Each q must be >= 1.
KernelStats kernel_stats(const KernelConfig& cfg, std::span<const double> q_list = {});

/// The printed closed form claimed for sup P, evaluated as written.
/// Audit only; bounds use KernelStats::sup.
double kernel_sup_paper(const KernelConfig& cfg);

/// The printed closed form claimed for inf P, evaluated as written.
/// Audit only; bounds use KernelStats::inf.
double kernel_inf_paper(const KernelConfig& cfg);

/// ∫ |p|^q of the first-degree kernel, q >= 1 (closed form).
double linear_kernel_abs_moment(const KernelConfig& cfg, double q);

/// sup |p| of the first-degree kernel.
double linear_kernel_sup_abs(const KernelConfig& cfg);

}  // namespace oqb

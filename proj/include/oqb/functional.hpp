#pragma once

// Deviation functionals: the Ostrowski deviation, the two-mean deviation with
// and without offset, and the Chebyshev functional.

#include <span>

#include "oqb/corpus.hpp"
#include "oqb/kernel.hpp"

namespace oqb {

/// M(f; a, b) = (1/(b-a)) ∫ f.
double integral_mean(const FunctionModel& fm, const Interval& iv);
double integral_mean(const RealFn& g, const Interval& iv, std::span<const double> breakpoints = {});

/// f(x) - M(f; a, b). Requires x in [a, b].
double deviation_s(const FunctionModel& fm, const Interval& iv, double x);

/// f(x) - [alpha M(f;a,x) + beta M(f;x,b)] / (alpha + beta). Requires a < x < b.
double tau_cerone(const FunctionModel& fm, const Interval& iv, const Weights& w, double x);

/// The five additive blocks of the boundary form of tau.
struct TauBreakdown {
  double total = 0.0;
  double term_fprime_x = 0.0;          ///< coefficient block times f'(x)
  double term_f_x = 0.0;               ///< coefficient block times f(x)
  double term_endpoints_f = 0.0;       ///< h(b-a)/2 block on f(a), f(b)
  double term_endpoints_fprime = 0.0;  ///< h²(b-a)²/8 block on f'(a), f'(b)
  double term_means = 0.0;             ///< alpha M(f;a,x) + beta M(f;x,b) block

  /// total equals the sum of the five blocks within 1e-12 of the largest block.
  bool consistent() const noexcept;
};

/// tau(x; alpha, beta) from f, f' at x and the endpoints and the two partial means.
TauBreakdown tau_main(const FunctionModel& fm, const KernelConfig& cfg);

/// ∫ P(x,t) f''(t) dt by the reference integrator, split at t = x.
double tau_via_kernel(const FunctionModel& fm, const KernelConfig& cfg);

/// Same value as tau_main, with the right-hand mean rewritten through
/// sigma(x) = (b-a)/(b-x) and the full mean M(f; a, b).
double tau_alternate(const FunctionModel& fm, const KernelConfig& cfg);

/// Offset-free form: ½(α+β)⁻¹[α(x-a) - β(b-x)] f'(x) - f(x)
///                   + (α+β)⁻¹[α M(f;a,x) + β M(f;x,b)].
/// Equals ∫ kernel_quadratic_eval · f''. Ignores cfg.h().
double tau_quadratic_form(const FunctionModel& fm, const KernelConfig& cfg);

/// Signed expression equal to ∫ kernel_linear_eval · f' (first-degree kernel).
double tau_linear_form(const FunctionModel& fm, const KernelConfig& cfg);

/// T(f, g) = M(fg) - M(f) M(g) over iv.
double chebyshev_t(const RealFn& f, const RealFn& g, const Interval& iv,
                   std::span<const double> breakpoints = {});

/// (f'(b) - f'(a)) / (b - a).
double secant_slope_kappa(const FunctionModel& fm, const Interval& iv);

}  // namespace oqb

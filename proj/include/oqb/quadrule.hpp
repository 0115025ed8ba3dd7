#pragma once

// Certified quadrature from the midpoint-family rule
//   ∫f ≈ (b-a)[(1-h) f(A) + (h/2)(f(a) + f(b)) - h²(b-a)/8 (f'(b) - f'(a))],
// with error bounds taken from the exact kernel statistics.

#include "oqb/corpus.hpp"
#include "oqb/error.hpp"

namespace oqb {

struct QuadratureCertificate {
  double estimate = 0.0;
  double error_bound = 0.0;  ///< certified |estimate - ∫f|
  NormVariant norm_used = NormVariant::sup();
  double norm_value = 0.0;  ///< max over panels of ||f''||
  int n_panels = 0;
  double h = 0.0;
};

inline constexpr int kMaxAdaptivePanels = 1 << 16;

/// Adaptive refinement ran out of panels before meeting the target.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, QuadratureCertificate best)
      : Error(what), best_(best) {}
  const QuadratureCertificate& best() const noexcept { return best_; }

 private:
  QuadratureCertificate best_;
};

/// One panel over iv. Requires h in [0, 1].
QuadratureCertificate single_panel(const FunctionModel& fm, const Interval& iv, double h,
                                   const NormVariant& variant);

/// n_panels equal panels; estimates and bounds summed in ascending order.
QuadratureCertificate composite(const FunctionModel& fm, const Interval& iv, int n_panels,
                                double h, const NormVariant& variant);

/// Bisects the panel with the largest bound (leftmost on ties) until the
/// summed bound is at most target_error. Throws BudgetExceeded past
/// kMaxAdaptivePanels panels (or max_panels when smaller).
QuadratureCertificate adaptive(const FunctionModel& fm, const Interval& iv, double target_error,
                               double h, const NormVariant& variant,
                               int max_panels = kMaxAdaptivePanels);

}  // namespace oqb

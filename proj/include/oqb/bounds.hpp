#pragma once

// Certified bounds on |tau| from the exact kernel statistics, the printed
// closed forms kept for audit, and the perturbed (Chebyshev/Gruss) bounds.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "oqb/corpus.hpp"
#include "oqb/kernel.hpp"

namespace oqb {

/// One norm variant's bound on |tau| at a configuration.
struct BoundReport {
  NormVariant variant = NormVariant::sup();
  double tau = 0.0;
  double norm_value = 0.0;    ///< ||f''|| in this variant
  double oracle_bound = 0.0;  ///< ||f''|| times the exact kernel factor
  std::optional<double> paper_bound;
  double slack = 0.0;            ///< oracle_bound - |tau|
  double sharpness_ratio = 0.0;  ///< |tau| / oracle_bound, 0 when the bound is 0
  std::optional<double> paper_discrepancy;  ///< paper_bound - oracle_bound
};

/// Kernel factor multiplying ||f''||: ∫|P| (sup norm), (∫|P|^q)^{1/q} (Lp),
/// sup |P| (L1).
double oracle_kernel_factor(const KernelConfig& cfg, const NormVariant& variant);

/// Bound report with tau from the boundary form and ||f''|| from norm_f2.
BoundReport bound_oracle(const FunctionModel& fm, const KernelConfig& cfg,
                         const NormVariant& variant);

/// Same, from a precomputed tau and norm value (the sweep reuses both).
BoundReport bound_oracle(const KernelConfig& cfg, const NormVariant& variant, double tau,
                         double norm_value);

/// The printed three-norm right-hand side at general h, evaluated as written.
/// Audit only.
double bound_paper_theorem2(const KernelConfig& cfg, double norm_value,
                            const NormVariant& variant);

/// Identifiers of the printed special cases.
enum class CatalogCase {
  Ostrowski,
  Montgomery,
  Cerone,
  LinearKernel,
  QuadraticKernel,
  General,
  OffsetOne,
  OffsetOneMid,
  OffsetHalf,
  OffsetHalfMid,
  OffsetHalfThreeQuarter,
  MidpointFamily,
};

std::string_view case_id(CatalogCase c) noexcept;
/// Throws UnknownCase.
CatalogCase parse_case(std::string_view id);
std::vector<CatalogCase> all_catalog_cases();

/// Free parameters for a catalog evaluation. Parameters a case fixes are
/// overridden (see CatalogValue).
struct CatalogArgs {
  Interval iv;
  Weights w;
  double h = 0.0;
  double x = 0.0;
  NormVariant variant = NormVariant::sup();
  double norm = 1.0;  ///< ||f'|| for first-derivative cases, ||f''|| otherwise
};

/// A printed value together with the configuration it was evaluated at.
struct CatalogValue {
  double value = 0.0;
  int derivative_order = 2;  ///< 1: bounds via ||f'||, 2: via ||f''||
  double h = 0.0;
  double x = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
};

/// Evaluates the printed bound of `c` verbatim.
/// Throws InvalidArgument when the case has no form for args.variant.
CatalogValue bound_catalog(CatalogCase c, const CatalogArgs& args);
CatalogValue bound_catalog(std::string_view id, const CatalogArgs& args);

/// Exact kernel factor matching a catalog value's configuration and order:
/// first-degree kernel factors for order 1, main-kernel factors for order 2.
double catalog_oracle_factor(const CatalogValue& v, const Interval& iv, const NormVariant& variant);

/// ¼ (Φ - φ)(Γ - γ). Requires φ <= Φ and γ <= Γ.
double gruss_bound(double phi_low, double phi_cap, double gamma_low, double gamma_cap);

/// (b-a)²/12 ||f'||∞ ||g'||∞. Requires non-negative sup norms.
double chebyshev_bound(double f1_sup, double g1_sup, const Interval& iv);

/// f''-dependent inputs of the perturbed bound, per (model, interval).
struct CurvatureSummary {
  double kappa = 0.0;              ///< (f'(b) - f'(a)) / (b - a)
  double l2_squared = 0.0;         ///< ||f''||₂²
  double centered_variance = 0.0;  ///< M((f'' - kappa)²)
  Range range{0.0, 0.0};           ///< [min f'', max f'']
};

CurvatureSummary summarize_curvature(const FunctionModel& fm, const Interval& iv);

struct PerturbedReport {
  double lhs = 0.0;          ///< |tau - (b-a) M(P) kappa|
  double n_of_x = 0.0;       ///< T(P, P)^{1/2}
  double bound_first = 0.0;  ///< (b-a) N(x) T(f'', f'')^{1/2}
  double bound_gruss = 0.0;  ///< (b-a) ¼ (Φ - φ)(Γ - γ)
  double phi_cap = 0.0;
  double phi_low = 0.0;
  double gamma_low = 0.0;
  double gamma_cap = 0.0;
  double kappa = 0.0;
  /// ||f''||₂²/(b-a) - kappa², clamped at 0 for rounding-level negatives.
  double variance = 0.0;
};

PerturbedReport perturbed_bound(const FunctionModel& fm, const KernelConfig& cfg);
/// From a precomputed tau and curvature summary. Throws Error when the
/// variance radicand is below -1e-12 (scaled).
PerturbedReport perturbed_bound(const KernelConfig& cfg, double tau, const CurvatureSummary& c);

/// The printed N(x) expression, square-rooted with clamping at 0. Audit only.
double n_of_x_paper(const KernelConfig& cfg);

}  // namespace oqb

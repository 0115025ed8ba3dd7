#pragma once

// The deviation identity applied to a probability density on [a, b]:
// certified enclosures of the CDF F(x), the reliability R(x) = 1 - F(x), and
// the expectation identity ∫F = b - E(X).

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "oqb/corpus.hpp"
#include "oqb/kernel.hpp"

namespace oqb {

struct PdfModel {
  FunctionModel base;  ///< f is the density; f1 and f2 its derivatives
  Interval support;
  std::function<double(double)> cdf_exact;  ///< may be empty
  std::optional<double> mean_exact;
};

/// Throws InvalidArgument unless f, f1, f2 are set, the density is
/// non-negative at 1025 equispaced points and integrates to 1 within 1e-8.
void validate_pdf(const PdfModel& pm);

/// uniform, beta22, texp (e^{-t} normalized on [0,1]), raised_cosine.
const std::vector<PdfModel>& density_registry();
const PdfModel& find_density(std::string_view id);
std::vector<std::string> density_ids();

/// F(x): cdf_exact when present, otherwise the integral of the density.
double cdf_value(const PdfModel& pm, double x);

/// (α+β)(x-a)(b-x) τ written through F(x). cfg.interval() must be the support.
double cdf_lhs(const PdfModel& pm, const KernelConfig& cfg);

/// (α+β)(x-a)(b-x) times the oracle bound on |τ|.
double cdf_bound(const PdfModel& pm, const KernelConfig& cfg, const NormVariant& variant);

struct CdfEnclosure {
  double x = 0.0;
  double center = 0.0;
  double radius = 0.0;
  NormVariant variant = NormVariant::sup();
};

/// Encloses F(x) by solving the identity for F with the residual set to zero.
/// Throws SingularCoefficient when |α(b-x) - β(x-a)| < 1e-9 (α+β)(b-a).
CdfEnclosure cdf_enclosure(const PdfModel& pm, const KernelConfig& cfg,
                           const NormVariant& variant);

/// Enclosure of R(x) = 1 - F(x): center 1 - F-center, same radius.
CdfEnclosure reliability(const PdfModel& pm, const KernelConfig& cfg, const NormVariant& variant);

/// b - ∫ₐᵇ F(u) du, which equals E(X).
double expectation_from_cdf(const PdfModel& pm);

}  // namespace oqb

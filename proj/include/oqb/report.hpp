#pragma once

// Sweep harness: grid generation, the verification sweep, the printed-formula
// audit and deterministic JSON/CSV serialization.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "oqb/bounds.hpp"
#include "oqb/cdfapp.hpp"
#include "oqb/corpus.hpp"
#include "oqb/functional.hpp"
#include "oqb/kernel.hpp"
#include "oqb/quadrule.hpp"

namespace oqb {

inline constexpr const char* kReportVersion = "1.0.0";

struct SweepGrid {
  std::vector<Interval> intervals;
  std::vector<double> h_values;
  std::vector<Weights> weight_pairs;
  int x_count = 9;
  std::vector<NormVariant> variants;

  /// [0,1] and [-0.5,2]; h in {0, .25, .5, .75, 1}; weights (1,0), (0,1),
  /// (1,1), (2,1), (1,3); 9 points of x; Linf, Lp(2), Lp(3), L1.
  static SweepGrid default_grid();
  /// A reduced grid for quick runs: [0,1], h in {0, .5, 1}, weights (1,1), (2,1).
  static SweepGrid small_grid();
  /// "default" or "small". Throws InvalidArgument.
  static SweepGrid named(std::string_view name);

  /// x values for one (interval, h): x_count points equispaced in the
  /// admissible range shrunk by a relative margin of 1e-6; only A at h = 1.
  std::vector<double> x_values(const Interval& iv, double h) const;

  /// Every configuration, interval-major, then h, weights, x.
  std::vector<KernelConfig> configs() const;

  /// Text that fixes the grid exactly; its FNV-1a hash goes into the report.
  std::string canonical() const;
};

std::uint64_t fnv1a64(std::string_view text) noexcept;

struct IdentityRow {
  std::string model;
  KernelConfig cfg;
  double tau_main = 0.0;
  double tau_kernel = 0.0;
  double residual = 0.0;  ///< |tau_main - tau_kernel| / max(1, |tau_main|)
  bool pass = true;
};

struct BoundRow {
  std::string model;
  KernelConfig cfg;
  BoundReport report;
  bool pass = true;
};

struct PerturbedRow {
  std::string model;
  KernelConfig cfg;
  PerturbedReport report;
  bool pass = true;
};

enum class Verdict { Agree, Disagree };

struct AuditRow {
  std::string eq_id;
  KernelConfig cfg;
  std::string variant;  ///< norm label, or sup_P / inf_P / N for kernel statistics
  double oracle = 0.0;
  double paper = 0.0;
  double rel_gap = 0.0;
  Verdict verdict = Verdict::Agree;
};

inline constexpr double kAgreeThreshold = 1e-9;

/// |paper - oracle| / min(|paper|, |oracle|); 0 when both vanish, +inf when
/// exactly one does.
double relative_gap(double paper, double oracle) noexcept;

struct Summary {
  std::size_t configs = 0;  ///< kernel configurations in the grid
  std::size_t cases = 0;    ///< model x configuration pairs
  std::size_t violations = 0;
  double max_sharpness = 0.0;
  /// Bound rows with sharpness above 1 + 1e-9. Not violations: near the ends
  /// of a zero-weight branch tau is O(1e-13) and carries O(1e-16) rounding.
  std::size_t sharpness_exceedances = 0;
  double max_identity_residual = 0.0;
  std::size_t audit_disagreements = 0;
};

struct VerificationReport {
  std::string version = kReportVersion;
  std::uint64_t grid_hash = 0;
  std::vector<std::string> corpus_ids;
  std::vector<IdentityRow> identity;
  std::vector<BoundRow> bounds;
  std::vector<PerturbedRow> perturbed;
  std::vector<AuditRow> audit;
  Summary summary;
};

struct VerifyOptions {
  unsigned threads = 0;  ///< 0 = hardware concurrency
  bool inject_violation = false;
};

/// Worker count from OQB_THREADS (0 or unset = auto).
unsigned threads_from_env();

/// Full sweep: identity, four bounds and the perturbed chain per case, plus
/// the audit. Rows are in grid order (config-major, then model) regardless of
/// the thread count.
VerificationReport run_verify(const SweepGrid& grid, const std::vector<FunctionModel>& corpus,
                              const VerifyOptions& opts = {});

/// One row per (configuration, printed formula). Norm values are 1, so rows
/// compare kernel factors.
std::vector<AuditRow> run_audit(const SweepGrid& grid);

/// Report as ordered JSON. The run header (timestamp) is added only when given.
nlohmann::ordered_json to_json(const VerificationReport& r,
                               const std::optional<std::string>& timestamp = std::nullopt);

/// Deterministic serialization: insertion-ordered keys, two-space indent,
/// floats as %.16e, non-finite floats as null, LF line endings.
std::string dump_json(const nlohmann::ordered_json& j);

/// The report with the run header removed, serialized.
std::string report_body(const nlohmann::ordered_json& j);

/// %.16e; "inf", "-inf" or "nan" for non-finite values.
std::string format_real(double v);

std::string audit_csv(const std::vector<AuditRow>& rows);

nlohmann::ordered_json to_json(const QuadratureCertificate& c);
nlohmann::ordered_json to_json(const CdfEnclosure& e);
nlohmann::ordered_json to_json(const TauBreakdown& t);
nlohmann::ordered_json to_json(const BoundReport& b);
nlohmann::ordered_json to_json(const PerturbedReport& p);

}  // namespace oqb

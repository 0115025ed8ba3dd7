#include "oqb/report.hpp"

#include <algorithm>
#include <atomic>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <limits>
#include <sstream>
#include <thread>

#include "oqb/error.hpp"

namespace oqb {

using nlohmann::ordered_json;

SweepGrid SweepGrid::default_grid() {
  SweepGrid g;
  g.intervals = {Interval(0.0, 1.0), Interval(-0.5, 2.0)};
  g.h_values = {0.0, 0.25, 0.5, 0.75, 1.0};
  g.weight_pairs = {Weights(1, 0), Weights(0, 1), Weights(1, 1), Weights(2, 1), Weights(1, 3)};
  g.x_count = 9;
  g.variants = default_variants();
  return g;
}

SweepGrid SweepGrid::small_grid() {
  SweepGrid g;
  g.intervals = {Interval(0.0, 1.0)};
  g.h_values = {0.0, 0.5, 1.0};
  g.weight_pairs = {Weights(1, 1), Weights(2, 1)};
  g.x_count = 3;
  g.variants = default_variants();
  return g;
}

SweepGrid SweepGrid::named(std::string_view name) {
  if (name == "default") return default_grid();
  if (name == "small") return small_grid();
  throw InvalidArgument("unknown grid '" + std::string(name) + "' (expected default or small)");
}

std::vector<double> SweepGrid::x_values(const Interval& iv, double h) const {
  if (h == 1.0 || x_count <= 1) return {iv.midpoint()};
  const Range r = KernelConfig::admissible_x(iv, h);
  const double margin = 1e-6 * iv.width();
  const double lo = r.lo + margin;
  const double hi = r.hi - margin;
  if (!(lo < hi)) return {iv.midpoint()};
  std::vector<double> xs;
  xs.reserve(static_cast<std::size_t>(x_count));
  for (int i = 0; i < x_count; ++i) {
    xs.push_back(i + 1 == x_count ? hi : lo + (hi - lo) * i / (x_count - 1));
  }
  return xs;
}

std::vector<KernelConfig> SweepGrid::configs() const {
  std::vector<KernelConfig> out;
  for (const Interval& iv : intervals) {
    for (double h : h_values) {
      const std::vector<double> xs = x_values(iv, h);
      for (const Weights& w : weight_pairs) {
        for (double x : xs) out.emplace_back(iv, w, h, x);
      }
    }
  }
  return out;
}

std::string SweepGrid::canonical() const {
  std::string s = "intervals:";
  for (const Interval& iv : intervals) s += "[" + format_real(iv.a()) + "," + format_real(iv.b()) + "]";
  s += ";h:";
  for (double h : h_values) s += format_real(h) + ",";
  s += ";weights:";
  for (const Weights& w : weight_pairs) {
    s += "(" + format_real(w.alpha()) + "," + format_real(w.beta()) + ")";
  }
  s += ";x_count:" + std::to_string(x_count) + ";variants:";
  for (const NormVariant& v : variants) s += v.name() + ",";
  return s;
}

std::uint64_t fnv1a64(std::string_view text) noexcept {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

double relative_gap(double paper, double oracle) noexcept {
  const double denom = std::min(std::abs(paper), std::abs(oracle));
  const double diff = std::abs(paper - oracle);
  if (diff == 0.0) return 0.0;
  if (denom == 0.0) return std::numeric_limits<double>::infinity();
  return diff / denom;
}

unsigned threads_from_env() {
  const char* env = std::getenv("OQB_THREADS");
  if (env == nullptr || *env == '\0') return 0;
  char* end = nullptr;
  const unsigned long v = std::strtoul(env, &end, 10);
  if (end == env || *end != '\0') throw InvalidArgument("OQB_THREADS must be a non-negative integer");
  return static_cast<unsigned>(std::min<unsigned long>(v, 1024));
}

namespace {

// Runs job(i) for i in [0, n) on up to `threads` workers. The first failure
// by index is rethrown after all workers finish.
template <typename Job>
void parallel_for(std::size_t n, unsigned threads, Job job) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        job(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

struct ModelCache {
  std::vector<double> norms;  // per grid variant
  CurvatureSummary curvature;
};

struct CaseResult {
  std::vector<IdentityRow> identity;
  std::vector<BoundRow> bounds;
  std::vector<PerturbedRow> perturbed;
};

double kernel_n_of_x(const KernelConfig& cfg) {
  const KernelStats ks = kernel_stats(cfg);
  const double len = cfg.interval().width();
  return std::sqrt(std::max(0.0, ks.square_integral / len - ks.mean * ks.mean));
}

AuditRow make_row(std::string eq_id, const KernelConfig& cfg, std::string variant, double oracle,
                  double paper) {
  const double gap = relative_gap(paper, oracle);
  return {std::move(eq_id), cfg, std::move(variant), oracle, paper, gap,
          gap <= kAgreeThreshold ? Verdict::Agree : Verdict::Disagree};
}

void add_catalog_row(std::vector<AuditRow>& rows, CatalogCase c, const Interval& iv,
                     const Weights& w, double h, double x, const NormVariant& v) {
  const CatalogValue cv = bound_catalog(c, CatalogArgs{iv, w, h, x, v, 1.0});
  const KernelConfig cfg(iv, Weights(cv.alpha, cv.beta), cv.h, cv.x);
  rows.push_back(make_row(std::string(case_id(c)), cfg, v.name(),
                          catalog_oracle_factor(cv, iv, v), cv.value));
}

}  // namespace

std::vector<AuditRow> run_audit(const SweepGrid& grid) {
  std::vector<AuditRow> rows;
  for (const Interval& iv : grid.intervals) {
    for (double h : grid.h_values) {
      const std::vector<double> xs = grid.x_values(iv, h);
      for (std::size_t wi = 0; wi < grid.weight_pairs.size(); ++wi) {
        const Weights& w = grid.weight_pairs[wi];
        for (double x : xs) {
          const KernelConfig cfg(iv, w, h, x);
          for (const NormVariant& v : grid.variants) {
            rows.push_back(make_row("general", cfg, v.name(), oracle_kernel_factor(cfg, v),
                                    bound_paper_theorem2(cfg, 1.0, v)));
          }
          const KernelStats ks = kernel_stats(cfg);
          rows.push_back(make_row("sup_P", cfg, "sup_P", ks.sup, kernel_sup_paper(cfg)));
          rows.push_back(make_row("inf_P", cfg, "inf_P", ks.inf, kernel_inf_paper(cfg)));
          rows.push_back(make_row("n_of_x", cfg, "N", kernel_n_of_x(cfg), n_of_x_paper(cfg)));

          for (const NormVariant& v : grid.variants) {
            add_catalog_row(rows, CatalogCase::LinearKernel, iv, w, h, x, v);
            if (h == 0.0) {
              add_catalog_row(rows, CatalogCase::QuadraticKernel, iv, w, h, x, v);
              add_catalog_row(rows, CatalogCase::Cerone, iv, w, h, x, v);
              // The Montgomery-kernel cases do not depend on the weights.
              if (wi == 0) {
                add_catalog_row(rows, CatalogCase::Montgomery, iv, w, h, x, v);
                if (v.kind() == NormVariant::Kind::Sup) {
                  add_catalog_row(rows, CatalogCase::Ostrowski, iv, w, h, x, v);
                }
              }
            }
            if (h == 0.5) add_catalog_row(rows, CatalogCase::OffsetHalf, iv, w, h, x, v);
            if (h == 1.0) add_catalog_row(rows, CatalogCase::OffsetOne, iv, w, h, x, v);
          }
        }
      }
    }
    // Specializations fixed per interval.
    for (const NormVariant& v : grid.variants) {
      for (const Weights& w : grid.weight_pairs) {
        add_catalog_row(rows, CatalogCase::OffsetOneMid, iv, w, 1.0, iv.midpoint(), v);
      }
      add_catalog_row(rows, CatalogCase::OffsetHalfMid, iv, Weights(1, 1), 0.5, iv.midpoint(), v);
      add_catalog_row(rows, CatalogCase::OffsetHalfThreeQuarter, iv, Weights(1, 1), 0.5,
                      (iv.a() + 3.0 * iv.b()) / 4.0, v);
      for (double h : grid.h_values) {
        add_catalog_row(rows, CatalogCase::MidpointFamily, iv, Weights(1, 1), h, iv.midpoint(), v);
      }
    }
  }
  return rows;
}

VerificationReport run_verify(const SweepGrid& grid, const std::vector<FunctionModel>& corpus,
                              const VerifyOptions& opts) {
  if (corpus.empty()) throw InvalidArgument("run_verify needs a non-empty corpus");
  const std::vector<KernelConfig> configs = grid.configs();
  if (configs.empty()) throw InvalidArgument("run_verify needs a non-empty grid");

  VerificationReport rep;
  rep.grid_hash = fnv1a64(grid.canonical());
  for (const auto& fm : corpus) rep.corpus_ids.push_back(fm.id);

  // Norms and curvature data per (model, interval).
  const std::size_t n_iv = grid.intervals.size();
  std::vector<ModelCache> cache(corpus.size() * n_iv);
  parallel_for(cache.size(), opts.threads, [&](std::size_t k) {
    const FunctionModel& fm = corpus[k / n_iv];
    const Interval& iv = grid.intervals[k % n_iv];
    ModelCache& mc = cache[k];
    for (const NormVariant& v : grid.variants) mc.norms.push_back(norm_f2(fm, iv, v));
    mc.curvature = summarize_curvature(fm, iv);
  });
  auto interval_index = [&](const Interval& iv) {
    return static_cast<std::size_t>(
        std::find(grid.intervals.begin(), grid.intervals.end(), iv) - grid.intervals.begin());
  };

  std::vector<CaseResult> results(configs.size());
  parallel_for(configs.size(), opts.threads, [&](std::size_t c) {
    const KernelConfig& cfg = configs[c];
    const std::size_t ivi = interval_index(cfg.interval());
    CaseResult& out = results[c];
    for (std::size_t m = 0; m < corpus.size(); ++m) {
      const FunctionModel& fm = corpus[m];
      const ModelCache& mc = cache[m * n_iv + ivi];

      const TauBreakdown tb = tau_main(fm, cfg);
      const double tk = tau_via_kernel(fm, cfg);
      const double residual = std::abs(tb.total - tk) / std::max(1.0, std::abs(tb.total));
      out.identity.push_back(
          {fm.id, cfg, tb.total, tk, residual, residual <= 1e-8 && tb.consistent()});

      for (std::size_t vi = 0; vi < grid.variants.size(); ++vi) {
        BoundReport br = bound_oracle(cfg, grid.variants[vi], tb.total, mc.norms[vi]);
        const bool ok = br.slack >= -1e-12 * std::max(1.0, br.oracle_bound);
        out.bounds.push_back({fm.id, cfg, br, ok});
      }

      const PerturbedReport pr = perturbed_bound(cfg, tb.total, mc.curvature);
      const double scale = std::max(1.0, pr.bound_gruss);
      const bool ok =
          pr.lhs <= pr.bound_first + 1e-9 * scale && pr.bound_first <= pr.bound_gruss + 1e-9 * scale;
      out.perturbed.push_back({fm.id, cfg, pr, ok});
    }
  });

  for (auto& r : results) {
    std::move(r.identity.begin(), r.identity.end(), std::back_inserter(rep.identity));
    std::move(r.bounds.begin(), r.bounds.end(), std::back_inserter(rep.bounds));
    std::move(r.perturbed.begin(), r.perturbed.end(), std::back_inserter(rep.perturbed));
  }
  rep.audit = run_audit(grid);

  if (opts.inject_violation && !rep.identity.empty()) {
    IdentityRow& row = rep.identity.front();
    row.tau_kernel += 1.0;
    row.residual = std::abs(row.tau_main - row.tau_kernel) / std::max(1.0, std::abs(row.tau_main));
    row.pass = false;
  }

  Summary& s = rep.summary;
  s.configs = configs.size();
  s.cases = configs.size() * corpus.size();
  for (const auto& r : rep.identity) {
    s.violations += r.pass ? 0 : 1;
    s.max_identity_residual = std::max(s.max_identity_residual, r.residual);
  }
  for (const auto& r : rep.bounds) {
    s.violations += r.pass ? 0 : 1;
    s.max_sharpness = std::max(s.max_sharpness, r.report.sharpness_ratio);
    s.sharpness_exceedances += r.report.sharpness_ratio > 1.0 + 1e-9 ? 1 : 0;
  }
  for (const auto& r : rep.perturbed) s.violations += r.pass ? 0 : 1;
  for (const auto& r : rep.audit) s.audit_disagreements += r.verdict == Verdict::Disagree ? 1 : 0;
  return rep;
}

// ---- serialization ----

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

namespace {

void put_config(ordered_json& j, const KernelConfig& cfg) {
  j["a"] = cfg.interval().a();
  j["b"] = cfg.interval().b();
  j["h"] = cfg.h();
  j["alpha"] = cfg.weights().alpha();
  j["beta"] = cfg.weights().beta();
  j["x"] = cfg.x();
}

ordered_json optional_real(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

void dump_into(std::string& out, const ordered_json& j, int depth) {
  const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(depth + 1) * 2, ' ');
  switch (j.type()) {
    case ordered_json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += inner;
        out += ordered_json(it.key()).dump();
        out += ": ";
        dump_into(out, it.value(), depth + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case ordered_json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += ",\n";
        first = false;
        out += inner;
        dump_into(out, e, depth + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case ordered_json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? format_real(v) : "null";
      return;
    }
    default:
      out += j.dump();
      return;
  }
}

}  // namespace

std::string dump_json(const ordered_json& j) {
  std::string out;
  dump_into(out, j, 0);
  out += "\n";
  return out;
}

std::string report_body(const ordered_json& j) {
  ordered_json body = j;
  if (body.is_object()) body.erase("run");
  return dump_json(body);
}

ordered_json to_json(const TauBreakdown& t) {
  ordered_json j;
  j["total"] = t.total;
  j["term_fprime_x"] = t.term_fprime_x;
  j["term_f_x"] = t.term_f_x;
  j["term_endpoints_f"] = t.term_endpoints_f;
  j["term_endpoints_fprime"] = t.term_endpoints_fprime;
  j["term_means"] = t.term_means;
  return j;
}

ordered_json to_json(const BoundReport& b) {
  ordered_json j;
  j["variant"] = b.variant.name();
  j["tau"] = b.tau;
  j["norm"] = b.norm_value;
  j["oracle_bound"] = b.oracle_bound;
  j["paper_bound"] = optional_real(b.paper_bound);
  j["slack"] = b.slack;
  j["sharpness_ratio"] = b.sharpness_ratio;
  j["paper_discrepancy"] = optional_real(b.paper_discrepancy);
  return j;
}

ordered_json to_json(const PerturbedReport& p) {
  ordered_json j;
  j["lhs"] = p.lhs;
  j["n_of_x"] = p.n_of_x;
  j["bound_first"] = p.bound_first;
  j["bound_gruss"] = p.bound_gruss;
  j["phi_cap"] = p.phi_cap;
  j["phi_low"] = p.phi_low;
  j["gamma_low"] = p.gamma_low;
  j["gamma_cap"] = p.gamma_cap;
  j["kappa"] = p.kappa;
  j["variance"] = p.variance;
  return j;
}

ordered_json to_json(const QuadratureCertificate& c) {
  ordered_json j;
  j["estimate"] = c.estimate;
  j["error_bound"] = c.error_bound;
  j["norm_used"] = c.norm_used.name();
  j["norm_value"] = c.norm_value;
  j["n_panels"] = c.n_panels;
  j["h"] = c.h;
  return j;
}

ordered_json to_json(const CdfEnclosure& e) {
  ordered_json j;
  j["x"] = e.x;
  j["center"] = e.center;
  j["radius"] = e.radius;
  j["variant"] = e.variant.name();
  return j;
}

ordered_json to_json(const VerificationReport& r, const std::optional<std::string>& timestamp) {
  ordered_json j;
  if (timestamp) j["run"] = {{"timestamp", *timestamp}};

  char hash[24];
  std::snprintf(hash, sizeof hash, "%016" PRIx64, r.grid_hash);
  ordered_json meta;
  meta["version"] = r.version;
  meta["grid_hash"] = hash;
  meta["corpus_ids"] = r.corpus_ids;
  j["meta"] = meta;

  ordered_json identity = ordered_json::array();
  for (const auto& row : r.identity) {
    ordered_json e;
    e["model"] = row.model;
    put_config(e, row.cfg);
    e["tau_main"] = row.tau_main;
    e["tau_kernel"] = row.tau_kernel;
    e["residual"] = row.residual;
    e["pass"] = row.pass;
    identity.push_back(std::move(e));
  }
  j["identity"] = std::move(identity);

  ordered_json bounds = ordered_json::array();
  for (const auto& row : r.bounds) {
    ordered_json e;
    e["model"] = row.model;
    put_config(e, row.cfg);
    const ordered_json body = to_json(row.report);
    for (auto it = body.begin(); it != body.end(); ++it) e[it.key()] = it.value();
    e["pass"] = row.pass;
    bounds.push_back(std::move(e));
  }
  j["bounds"] = std::move(bounds);

  ordered_json perturbed = ordered_json::array();
  for (const auto& row : r.perturbed) {
    ordered_json e;
    e["model"] = row.model;
    put_config(e, row.cfg);
    const ordered_json body = to_json(row.report);
    for (auto it = body.begin(); it != body.end(); ++it) e[it.key()] = it.value();
    e["pass"] = row.pass;
    perturbed.push_back(std::move(e));
  }
  j["perturbed"] = std::move(perturbed);

  ordered_json audit = ordered_json::array();
  for (const auto& row : r.audit) {
    ordered_json e;
    e["eq_id"] = row.eq_id;
    put_config(e, row.cfg);
    e["variant"] = row.variant;
    e["oracle"] = row.oracle;
    e["paper"] = row.paper;
    e["rel_gap"] = row.rel_gap;
    e["verdict"] = row.verdict == Verdict::Agree ? "Agree" : "Disagree";
    audit.push_back(std::move(e));
  }
  j["audit"] = std::move(audit);

  ordered_json summary;
  summary["configs"] = r.summary.configs;
  summary["cases"] = r.summary.cases;
  summary["violations"] = r.summary.violations;
  summary["max_sharpness"] = r.summary.max_sharpness;
  summary["sharpness_exceedances"] = r.summary.sharpness_exceedances;
  summary["max_identity_residual"] = r.summary.max_identity_residual;
  summary["audit_disagreements"] = r.summary.audit_disagreements;
  j["summary"] = summary;
  return j;
}

std::string audit_csv(const std::vector<AuditRow>& rows) {
  std::string out = "eq_id,a,b,h,alpha,beta,x,variant,oracle,paper,rel_gap,verdict\n";
  for (const auto& r : rows) {
    const KernelConfig& c = r.cfg;
    out += r.eq_id + "," + format_real(c.interval().a()) + "," + format_real(c.interval().b()) +
           "," + format_real(c.h()) + "," + format_real(c.weights().alpha()) + "," +
           format_real(c.weights().beta()) + "," + format_real(c.x()) + "," + r.variant + "," +
           format_real(r.oracle) + "," + format_real(r.paper) + "," + format_real(r.rel_gap) +
           "," + (r.verdict == Verdict::Agree ? "Agree" : "Disagree") + "\n";
  }
  return out;
}

}  // namespace oqb

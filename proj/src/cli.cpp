#include "oqb/cli.hpp"

#include <CLI11.hpp>

#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "oqb/cdfapp.hpp"
#include "oqb/error.hpp"
#include "oqb/functional.hpp"
#include "oqb/quadrule.hpp"
#include "oqb/report.hpp"

namespace oqb {

namespace {

using nlohmann::ordered_json;

struct Options {
  std::string fn = "sq";
  double a = 0.0;
  double b = 1.0;
  std::optional<double> x;
  double h = 0.0;
  double alpha = 1.0;
  double beta = 1.0;
  std::string variant;
  std::optional<double> target;
  std::optional<int> panels;
  std::string grid = "default";
  std::string corpus = "default";
  std::string out;
  bool inject_violation = false;
  std::string density = "beta22";
  int x_count = 9;
};

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidArgument("cannot open output file " + path);
  f << text;
  if (!f) throw Error("failed writing " + path);
}

KernelConfig make_config(const Options& o) {
  const Interval iv(o.a, o.b);
  return KernelConfig(iv, Weights(o.alpha, o.beta), o.h, o.x.value_or(iv.midpoint()));
}

void put_config(ordered_json& j, const KernelConfig& cfg) {
  j["a"] = cfg.interval().a();
  j["b"] = cfg.interval().b();
  j["h"] = cfg.h();
  j["alpha"] = cfg.weights().alpha();
  j["beta"] = cfg.weights().beta();
  j["x"] = cfg.x();
}

std::vector<FunctionModel> select_corpus(const std::string& spec) {
  if (spec == "default") return default_corpus();
  std::vector<FunctionModel> out;
  std::stringstream ss(spec);
  std::string id;
  while (std::getline(ss, id, ',')) {
    if (!id.empty()) out.push_back(find_model(id));
  }
  if (out.empty()) throw InvalidArgument("empty corpus selection");
  return out;
}

int cmd_tau(const Options& o, std::ostream& out) {
  const FunctionModel& fm = find_model(o.fn);
  const KernelConfig cfg = make_config(o);
  ordered_json j;
  j["model"] = fm.id;
  put_config(j, cfg);
  j["tau"] = to_json(tau_main(fm, cfg));
  j["tau_kernel"] = tau_via_kernel(fm, cfg);
  out << dump_json(j);
  return 0;
}

int cmd_bounds(const Options& o, std::ostream& out) {
  const FunctionModel& fm = find_model(o.fn);
  const KernelConfig cfg = make_config(o);
  std::vector<NormVariant> variants =
      o.variant.empty() ? default_variants() : std::vector{NormVariant::parse(o.variant)};
  ordered_json j;
  j["model"] = fm.id;
  put_config(j, cfg);
  ordered_json rows = ordered_json::array();
  for (const auto& v : variants) rows.push_back(to_json(bound_oracle(fm, cfg, v)));
  j["bounds"] = std::move(rows);
  j["perturbed"] = to_json(perturbed_bound(fm, cfg));
  out << dump_json(j);
  return 0;
}

int cmd_verify(const Options& o, std::ostream& out, std::ostream& err) {
  VerifyOptions vo;
  vo.threads = threads_from_env();
  vo.inject_violation = o.inject_violation;
  const VerificationReport rep =
      run_verify(SweepGrid::named(o.grid), select_corpus(o.corpus), vo);
  emit(dump_json(to_json(rep, utc_timestamp())), o.out, out);
  err << "cases " << rep.summary.cases << ", violations " << rep.summary.violations
      << ", max sharpness " << format_real(rep.summary.max_sharpness)
      << ", audit disagreements " << rep.summary.audit_disagreements << "\n";
  return rep.summary.violations == 0 ? 0 : 1;
}

int cmd_audit(const Options& o, std::ostream& out) {
  emit(audit_csv(run_audit(SweepGrid::named(o.grid))), o.out, out);
  return 0;
}

int cmd_integrate(const Options& o, std::ostream& out, std::ostream& err) {
  const FunctionModel& fm = find_model(o.fn);
  const Interval iv(o.a, o.b);
  const NormVariant v = o.variant.empty() ? NormVariant::sup() : NormVariant::parse(o.variant);
  if (o.target && o.panels) throw InvalidArgument("--target and --panels are exclusive");
  ordered_json j;
  j["model"] = fm.id;
  j["a"] = iv.a();
  j["b"] = iv.b();
  int code = 0;
  if (o.target) {
    j["target"] = *o.target;
    try {
      j["certificate"] = to_json(adaptive(fm, iv, *o.target, o.h, v));
      j["budget_exceeded"] = false;
    } catch (const BudgetExceeded& e) {
      err << e.what() << "\n";
      j["certificate"] = to_json(e.best());
      j["budget_exceeded"] = true;
      code = 1;
    }
  } else {
    j["certificate"] = to_json(composite(fm, iv, o.panels.value_or(1), o.h, v));
  }
  if (fm.exact_integral) j["exact"] = fm.exact_integral(iv.a(), iv.b());
  out << dump_json(j);
  return code;
}

int cmd_cdf(const Options& o, std::ostream& out) {
  const PdfModel& pm = find_density(o.density);
  const NormVariant v = o.variant.empty() ? NormVariant::sup() : NormVariant::parse(o.variant);
  const Weights w(o.alpha, o.beta);
  SweepGrid g;
  g.x_count = o.x_count;
  ordered_json j;
  j["density"] = pm.base.id;
  j["a"] = pm.support.a();
  j["b"] = pm.support.b();
  j["h"] = o.h;
  j["alpha"] = w.alpha();
  j["beta"] = w.beta();
  j["variant"] = v.name();
  j["expectation"] = expectation_from_cdf(pm);
  ordered_json rows = ordered_json::array();
  for (double x : g.x_values(pm.support, o.h)) {
    const KernelConfig cfg(pm.support, w, o.h, x);
    ordered_json row;
    try {
      row = to_json(cdf_enclosure(pm, cfg, v));
    } catch (const SingularCoefficient&) {
      row["x"] = x;
      row["center"] = nullptr;
      row["radius"] = nullptr;
      row["variant"] = v.name();
      row["singular"] = true;
    }
    if (pm.cdf_exact) row["exact"] = pm.cdf_exact(x);
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  out << dump_json(j);
  return 0;
}

void add_config_options(CLI::App* app, Options& o) {
  app->add_option("--fn", o.fn, "function model id")->capture_default_str();
  app->add_option("--a", o.a, "left end")->capture_default_str();
  app->add_option("--b", o.b, "right end")->capture_default_str();
  app->add_option("--x", o.x, "evaluation point (default: midpoint)");
  app->add_option("--h", o.h, "offset in [0, 1]")->capture_default_str();
  app->add_option("--alpha", o.alpha, "left weight")->capture_default_str();
  app->add_option("--beta", o.beta, "right weight")->capture_default_str();
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Certified bounds for the two-mean Ostrowski deviation", "oqb"};
  // -h is taken by the offset option.
  app.set_help_flag("--help", "print this help message and exit");
  app.require_subcommand(1);

  auto* tau = app.add_subcommand("tau", "tau breakdown for one configuration");
  add_config_options(tau, o);

  auto* bounds = app.add_subcommand("bounds", "bound reports for one configuration");
  add_config_options(bounds, o);
  bounds->add_option("--variant", o.variant, "sup | l1 | l2 | l3 | lp:<p> (default: all)");

  auto* verify = app.add_subcommand("verify", "full sweep, JSON report");
  verify->add_option("--grid", o.grid, "default | small")->capture_default_str();
  verify->add_option("--corpus", o.corpus, "default or comma-separated model ids")
      ->capture_default_str();
  verify->add_option("--out", o.out, "output file (default: stdout)");
  verify->add_flag("--inject-violation", o.inject_violation, "seed one failing row (testing)");

  auto* audit = app.add_subcommand("audit", "printed formulas against the oracle, CSV");
  audit->add_option("--grid", o.grid, "default | small")->capture_default_str();
  audit->add_option("--out", o.out, "output file (default: stdout)");

  auto* integrate = app.add_subcommand("integrate", "certified quadrature");
  integrate->add_option("--fn", o.fn, "function model id")->capture_default_str();
  integrate->add_option("--a", o.a, "left end")->capture_default_str();
  integrate->add_option("--b", o.b, "right end")->capture_default_str();
  integrate->add_option("--h", o.h, "offset in [0, 1]")->capture_default_str();
  integrate->add_option("--variant", o.variant, "norm of f'' (default: sup)");
  integrate->add_option("--target", o.target, "adaptive mode: target error bound");
  integrate->add_option("--panels", o.panels, "composite mode: number of equal panels");

  auto* cdf = app.add_subcommand("cdf", "CDF enclosures over an x grid");
  cdf->add_option("--density", o.density, "uniform | beta22 | texp | raised_cosine")
      ->capture_default_str();
  cdf->add_option("--h", o.h, "offset in [0, 1]")->capture_default_str();
  cdf->add_option("--alpha", o.alpha, "left weight")->capture_default_str();
  cdf->add_option("--beta", o.beta, "right weight")->capture_default_str();
  cdf->add_option("--variant", o.variant, "norm of f'' (default: sup)");
  cdf->add_option("--x-count", o.x_count, "number of x points")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*tau) return cmd_tau(o, out);
    if (*bounds) return cmd_bounds(o, out);
    if (*verify) return cmd_verify(o, out, err);
    if (*audit) return cmd_audit(o, out);
    if (*integrate) return cmd_integrate(o, out, err);
    if (*cdf) return cmd_cdf(o, out);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const UnknownCase& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const OutOfDomain& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace oqb

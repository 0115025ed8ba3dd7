#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "oqb/error.hpp"
#include "oqb/report.hpp"

using namespace oqb;
using nlohmann::ordered_json;

namespace {

std::vector<FunctionModel> small_corpus() {
  return {find_model("lin"), find_model("sq"), find_model("exp")};
}

const AuditRow* find_row(const std::vector<AuditRow>& rows, std::string_view id, double h,
                         std::string_view variant) {
  for (const auto& r : rows) {
    if (r.eq_id == id && r.cfg.h() == h && r.variant == variant) return &r;
  }
  return nullptr;
}

}  // namespace

TEST(Grid, DefaultShape) {
  const SweepGrid g = SweepGrid::default_grid();
  EXPECT_EQ(g.intervals.size(), 2u);
  EXPECT_EQ(g.h_values, (std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0}));
  EXPECT_EQ(g.weight_pairs.size(), 5u);
  EXPECT_EQ(g.x_count, 9);
  EXPECT_EQ(g.variants.size(), 4u);
  EXPECT_EQ(g.configs().size(), 370u);
}

TEST(Grid, PointsAreAdmissibleSortedAndInside) {
  const SweepGrid g = SweepGrid::default_grid();
  for (const auto& iv : g.intervals) {
    for (double h : g.h_values) {
      const auto xs = g.x_values(iv, h);
      if (h == 1.0) {
        ASSERT_EQ(xs.size(), 1u);
        EXPECT_EQ(xs[0], iv.midpoint());
        continue;
      }
      ASSERT_EQ(xs.size(), 9u);
      const Range r = KernelConfig::admissible_x(iv, h);
      for (std::size_t i = 0; i < xs.size(); ++i) {
        EXPECT_GT(xs[i], r.lo);
        EXPECT_LT(xs[i], r.hi);
        if (i > 0) EXPECT_LT(xs[i - 1], xs[i]);
      }
    }
  }
  // Construction validates every configuration.
  EXPECT_NO_THROW(g.configs());
}

TEST(Grid, DeterministicAndHashed) {
  EXPECT_EQ(SweepGrid::default_grid().canonical(), SweepGrid::default_grid().canonical());
  EXPECT_NE(SweepGrid::default_grid().canonical(), SweepGrid::small_grid().canonical());
  const auto a = SweepGrid::default_grid().configs();
  const auto b = SweepGrid::named("default").configs();
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].x(), b[i].x());
    EXPECT_EQ(a[i].h(), b[i].h());
  }
  EXPECT_THROW(SweepGrid::named("huge"), InvalidArgument);
}

TEST(Hash, Fnv1aVectors) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(fnv1a64("foobar"), 0x85944171f73967e8ULL);
}

TEST(RelativeGap, Cases) {
  EXPECT_EQ(relative_gap(0.0, 0.0), 0.0);
  EXPECT_TRUE(std::isinf(relative_gap(0.0, 1.0)));
  EXPECT_TRUE(std::isinf(relative_gap(2.0, 0.0)));
  EXPECT_DOUBLE_EQ(relative_gap(1.0 / 192.0, 1.0 / 96.0), 1.0);
  EXPECT_DOUBLE_EQ(relative_gap(-1.0, 1.0), 2.0);
  EXPECT_EQ(relative_gap(3.0, 3.0), 0.0);
}

TEST(Format, Reals) {
  EXPECT_EQ(format_real(1.0), "1.0000000000000000e+00");
  EXPECT_EQ(format_real(-0.125), "-1.2500000000000000e-01");
  EXPECT_EQ(format_real(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(format_real(-std::numeric_limits<double>::infinity()), "-inf");
  EXPECT_EQ(format_real(std::nan("")), "nan");
  const double third = 1.0 / 3.0;
  EXPECT_EQ(std::stod(format_real(third)), third);
}

TEST(Json, DumpIsStableAndRoundTrips) {
  ordered_json j;
  j["z"] = 0.1;
  j["a"] = std::vector<double>{1.0, -2.5e-300, std::numeric_limits<double>::infinity()};
  j["n"] = 3;
  j["s"] = "text";
  j["b"] = true;
  const std::string text = dump_json(j);
  EXPECT_LT(text.find("\"z\""), text.find("\"a\""));
  EXPECT_NE(text.find("1.0000000000000001e-01"), std::string::npos);
  EXPECT_NE(text.find("null"), std::string::npos);
  EXPECT_EQ(text.find('\r'), std::string::npos);
  EXPECT_EQ(dump_json(ordered_json::parse(text)), text);
}

TEST(Verify, SmallRunPasses) {
  const VerificationReport r = run_verify(SweepGrid::small_grid(), small_corpus());
  const std::size_t configs = SweepGrid::small_grid().configs().size();
  EXPECT_EQ(r.summary.configs, configs);
  EXPECT_EQ(r.summary.cases, configs * 3);
  EXPECT_EQ(r.identity.size(), configs * 3);
  EXPECT_EQ(r.bounds.size(), configs * 3 * 4);
  EXPECT_EQ(r.perturbed.size(), configs * 3);
  EXPECT_EQ(r.summary.violations, 0u);
  EXPECT_NEAR(r.summary.max_sharpness, 1.0, 1e-10);
  EXPECT_LE(r.summary.max_identity_residual, 1e-8);
  EXPECT_EQ(r.corpus_ids, (std::vector<std::string>{"lin", "sq", "exp"}));
  EXPECT_EQ(r.grid_hash, fnv1a64(SweepGrid::small_grid().canonical()));
  // Config-major, then model.
  EXPECT_EQ(r.identity[0].model, "lin");
  EXPECT_EQ(r.identity[1].model, "sq");
  EXPECT_EQ(r.identity[3].cfg.x(), r.identity[4].cfg.x());
  for (const auto& row : r.identity) {
    if (row.model == "lin") EXPECT_LE(std::abs(row.tau_main), 1e-12);
  }
}

TEST(Verify, InjectedViolationIsCounted) {
  VerifyOptions opts;
  opts.inject_violation = true;
  const VerificationReport r = run_verify(SweepGrid::small_grid(), small_corpus(), opts);
  EXPECT_EQ(r.summary.violations, 1u);
  EXPECT_FALSE(r.identity[0].pass);
}

TEST(Verify, ThreadCountDoesNotChangeOutput) {
  VerifyOptions one;
  one.threads = 1;
  VerifyOptions four;
  four.threads = 4;
  const auto corpus = default_corpus();
  const std::string a = report_body(to_json(run_verify(SweepGrid::small_grid(), corpus, one)));
  const std::string b = report_body(to_json(run_verify(SweepGrid::small_grid(), corpus, four)));
  EXPECT_EQ(a, b);
}

TEST(Verify, ReportSchemaRoundTrips) {
  const VerificationReport r = run_verify(SweepGrid::small_grid(), small_corpus());
  const ordered_json j = to_json(r, std::string("2026-01-01T00:00:00Z"));
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  EXPECT_EQ(keys, (std::vector<std::string>{"run", "meta", "identity", "bounds", "perturbed", "audit",
                                            "summary"}));
  const std::string text = dump_json(j);
  EXPECT_EQ(dump_json(ordered_json::parse(text)), text);
  const std::string body = report_body(j);
  EXPECT_EQ(body.find("timestamp"), std::string::npos);
  EXPECT_EQ(body, dump_json(to_json(r)));
  const ordered_json parsed = ordered_json::parse(body);
  EXPECT_EQ(parsed["meta"]["version"], kReportVersion);
  EXPECT_EQ(parsed["summary"]["violations"], 0);
  EXPECT_EQ(parsed["bounds"].size(), r.bounds.size());
}

TEST(Audit, ZeroOffsetGeneralRowsAgree) {
  const auto rows = run_audit(SweepGrid::default_grid());
  std::size_t general_h0 = 0;
  for (const auto& r : rows) {
    EXPECT_EQ(r.verdict == Verdict::Agree, r.rel_gap <= kAgreeThreshold) << r.eq_id;
    if (r.eq_id == "general" && r.cfg.h() == 0.0) {
      ++general_h0;
      EXPECT_EQ(r.verdict, Verdict::Agree) << r.variant << " x=" << r.cfg.x();
    }
  }
  // 2 intervals x 5 weight pairs x 9 points x 4 variants.
  EXPECT_EQ(general_h0, 360u);
}

TEST(Audit, KnownDisagreementsAreFlagged) {
  const auto rows = run_audit(SweepGrid::default_grid());
  const AuditRow* half = find_row(rows, "offset_half_mid", 0.5, "Linf");
  ASSERT_NE(half, nullptr);
  EXPECT_EQ(half->verdict, Verdict::Disagree);
  EXPECT_NEAR(half->rel_gap, 1.0, 1e-9);

  const AuditRow* full = find_row(rows, "midpoint_family", 1.0, "Linf");
  ASSERT_NE(full, nullptr);
  EXPECT_EQ(full->verdict, Verdict::Disagree);
  EXPECT_EQ(full->paper, 0.0);
  EXPECT_GT(full->oracle, 0.0);

  const AuditRow* zero = find_row(rows, "midpoint_family", 0.0, "Linf");
  ASSERT_NE(zero, nullptr);
  EXPECT_EQ(zero->verdict, Verdict::Agree);

  std::set<std::string> ids;
  for (const auto& r : rows) ids.insert(r.eq_id);
  for (const char* id : {"general", "sup_P", "inf_P", "n_of_x", "linear_kernel", "quadratic_kernel",
                         "cerone", "montgomery", "ostrowski", "offset_half", "offset_one",
                         "offset_one_mid", "offset_half_mid", "offset_half_three_quarter",
                         "midpoint_family"}) {
    EXPECT_TRUE(ids.count(id)) << id;
  }
}

TEST(Audit, DoesNotAffectVerification) {
  const auto corpus = small_corpus();
  const VerificationReport r = run_verify(SweepGrid::small_grid(), corpus);
  EXPECT_GT(r.summary.audit_disagreements, 0u);
  EXPECT_EQ(r.summary.violations, 0u);
  std::size_t disagree = 0;
  for (const auto& a : r.audit) disagree += a.verdict == Verdict::Disagree;
  EXPECT_EQ(disagree, r.summary.audit_disagreements);
}

TEST(Audit, CsvLayout) {
  const auto rows = run_audit(SweepGrid::small_grid());
  const std::string csv = audit_csv(rows);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "eq_id,a,b,h,alpha,beta,x,variant,oracle,paper,rel_gap,verdict");
  std::size_t count = 0;
  while (std::getline(in, line)) {
    ++count;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 11) << line;
  }
  EXPECT_EQ(count, rows.size());
  EXPECT_EQ(csv.find('\r'), std::string::npos);
  EXPECT_EQ(audit_csv(rows), csv);
}

TEST(Serialization, CertificateAndEnclosure) {
  QuadratureCertificate c;
  c.estimate = 1.5;
  c.error_bound = std::numeric_limits<double>::infinity();
  c.n_panels = 3;
  const std::string text = dump_json(to_json(c));
  EXPECT_NE(text.find("\"error_bound\": null"), std::string::npos);
  EXPECT_NE(text.find("\"n_panels\": 3"), std::string::npos);
  CdfEnclosure e;
  e.x = 0.5;
  e.variant = NormVariant::lp(3.0);
  const ordered_json je = to_json(e);
  EXPECT_EQ(je["variant"], NormVariant::lp(3.0).name());
}

TEST(Threads, FromEnvironment) {
  ::setenv("OQB_THREADS", "3", 1);
  EXPECT_EQ(threads_from_env(), 3u);
  ::setenv("OQB_THREADS", "0", 1);
  EXPECT_EQ(threads_from_env(), 0u);
  ::unsetenv("OQB_THREADS");
}

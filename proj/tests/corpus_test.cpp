#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "oqb/corpus.hpp"
#include "oqb/error.hpp"
#include "test_support.hpp"

using namespace oqb;

TEST(Interval, RejectsDegenerateAndNonFinite) {
  EXPECT_THROW(Interval(1.0, 1.0), InvalidArgument);
  EXPECT_THROW(Interval(2.0, 1.0), InvalidArgument);
  EXPECT_THROW(Interval(0.0, std::numeric_limits<double>::infinity()), InvalidArgument);
  EXPECT_THROW(Interval(std::nan(""), 1.0), InvalidArgument);
  const Interval iv(-1.0, 3.0);
  EXPECT_EQ(iv.width(), 4.0);
  EXPECT_EQ(iv.midpoint(), 1.0);
}

TEST(NormVariant, ParseAndConjugate) {
  EXPECT_EQ(NormVariant::parse("sup"), NormVariant::sup());
  EXPECT_EQ(NormVariant::parse("LINF"), NormVariant::sup());
  EXPECT_EQ(NormVariant::parse("l1"), NormVariant::l1());
  EXPECT_EQ(NormVariant::parse("l2"), NormVariant::lp(2.0));
  EXPECT_EQ(NormVariant::parse("lp:1.5"), NormVariant::lp(1.5));
  EXPECT_DOUBLE_EQ(NormVariant::lp(3.0).q(), 1.5);
  EXPECT_EQ(NormVariant::lp(2.0).name(), "Lp(2)");
  EXPECT_EQ(NormVariant::sup().name(), "Linf");
  EXPECT_THROW(NormVariant::lp(1.0), InvalidArgument);
  EXPECT_THROW(NormVariant::parse("l0"), InvalidArgument);
  EXPECT_EQ(default_variants().size(), 4u);
}

TEST(ReferenceIntegrate, KnownValues) {
  const Interval unit(0.0, 1.0);
  EXPECT_EQ(reference_integrate([](double) { return 1.0; }, unit, 1e-10), 1.0);
  EXPECT_NEAR(reference_integrate([](double t) { return t * t; }, unit, 1e-10), 1.0 / 3.0, 1e-10);
  EXPECT_NEAR(reference_integrate([](double t) { return std::exp(t); }, unit, 1e-10),
              std::numbers::e - 1.0, 1e-10);
}

TEST(ReferenceIntegrate, Deterministic) {
  const auto g = [](double t) { return std::sin(7.0 * t) / (1.0 + t * t); };
  const Interval iv(-1.0, 2.5);
  EXPECT_EQ(reference_integrate(g, iv, 1e-12), reference_integrate(g, iv, 1e-12));
}

TEST(ReferenceIntegrate, Errors) {
  const Interval unit(0.0, 1.0);
  EXPECT_THROW(reference_integrate([](double) { return std::nan(""); }, unit, 1e-10), NonFinite);
  EXPECT_THROW(reference_integrate([](double t) { return t < 0.3 ? 0.0 : 1.0; }, unit, 1e-15, 3),
               NoConvergence);
}

TEST(ReferenceIntegrate, Breakpoints) {
  const auto g = [](double t) { return std::abs(t - 0.3); };
  const double split[] = {0.3, 5.0};
  EXPECT_NEAR(reference_integrate(g, Interval(0.0, 1.0), split, 1e-13), 0.045 + 0.245, 1e-13);
}

TEST(ReferenceIntegrate, LinearOnRandomCorpusPairs) {
  prop::ConfigGen gen(11);
  const auto corpus = default_corpus();
  for (int k = 0; k < 60; ++k) {
    const auto& f = corpus[static_cast<std::size_t>(k) % corpus.size()].f;
    const auto& g = corpus[static_cast<std::size_t>(k * 3 + 1) % corpus.size()].f;
    const double ca = gen.uniform(-3.0, 3.0);
    const double cb = gen.uniform(-3.0, 3.0);
    const Interval iv = gen.corpus_interval();
    const double tol = 1e-12 * iv.width();
    const double lhs = reference_integrate([&](double t) { return ca * f(t) + cb * g(t); }, iv, tol);
    const double rhs = ca * reference_integrate(f, iv, tol) + cb * reference_integrate(g, iv, tol);
    EXPECT_LE(std::abs(lhs - rhs), 1e-9 * std::max(1.0, std::abs(rhs))) << k;
  }
}

TEST(ReferenceIntegrate, AdditiveOverSubintervals) {
  prop::ConfigGen gen(12);
  for (const auto& fm : default_corpus()) {
    for (int k = 0; k < 10; ++k) {
      const Interval iv = gen.corpus_interval();
      const double c = gen.uniform(iv.a(), iv.b());
      const double tol = default_tolerance(iv);
      const double whole = reference_integrate(fm.f, iv, tol);
      const double parts = reference_integrate(fm.f, Interval(iv.a(), c), tol) +
                           reference_integrate(fm.f, Interval(c, iv.b()), tol);
      EXPECT_NEAR(whole, parts, 2.0 * tol) << fm.id;
    }
  }
}

TEST(Corpus, RegistryContents) {
  const auto ids = model_ids();
  ASSERT_GE(ids.size(), 6u);
  EXPECT_EQ(find_model("sq").f(0.5), 0.25);
  EXPECT_NEAR(find_model("exp").exact_integral(0.0, 1.0), std::numbers::e - 1.0, 1e-15);
  EXPECT_THROW(find_model("nope"), InvalidArgument);
}

TEST(Corpus, EveryModelPassesDerivativeAndIntegralChecks) {
  for (const auto& fm : default_corpus()) {
    for (const Interval iv : {Interval(0.0, 1.0), Interval(-0.5, 2.0), Interval(0.25, 0.2501)}) {
      const ModelCheck mc = check_model(fm, iv);
      EXPECT_TRUE(mc.ok) << fm.id << ": " << mc.message;
    }
  }
}

TEST(Corpus, ExactIntegralsStableOnShortIntervals) {
  for (const auto& fm : default_corpus()) {
    if (!fm.exact_integral) continue;
    const double lo = 0.7;
    const double hi = lo + 1e-6;
    const double mean = fm.exact_integral(lo, hi) / (hi - lo);
    // Midpoint rule is accurate to (hi-lo)^2 |f''| / 24 here.
    EXPECT_NEAR(mean, fm.f(0.5 * (lo + hi)), 1e-12) << fm.id;
  }
}

TEST(NormF2, Examples) {
  const Interval unit(0.0, 1.0);
  const auto& sq = find_model("sq");
  EXPECT_DOUBLE_EQ(norm_f2(sq, unit, NormVariant::sup()), 2.0);
  EXPECT_DOUBLE_EQ(norm_f2(sq, unit, NormVariant::lp(2.0)), 2.0);

  FunctionModel sine;
  sine.id = "sin";
  sine.f = [](double t) { return std::sin(t); };
  sine.f1 = [](double t) { return std::cos(t); };
  sine.f2 = [](double t) { return -std::sin(t); };
  EXPECT_NEAR(norm_f2(sine, Interval(0.0, std::numbers::pi), NormVariant::l1()), 2.0, 1e-10);
  EXPECT_NEAR(norm_f2(sine, Interval(0.0, std::numbers::pi), NormVariant::sup()), 1.0, 1e-12);
}

TEST(NormF2, ExactOverridesMatchComputedNorms) {
  const std::vector<NormVariant> variants = {NormVariant::sup(), NormVariant::l1(),
                                             NormVariant::lp(1.5), NormVariant::lp(2.0),
                                             NormVariant::lp(3.0)};
  for (const auto& fm : default_corpus()) {
    if (!fm.exact_norm) continue;
    FunctionModel plain = fm;
    plain.exact_norm = nullptr;
    for (const Interval iv : {Interval(0.0, 1.0), Interval(-0.5, 2.0)}) {
      for (const auto& v : variants) {
        const double exact = norm_f2(fm, iv, v);
        const double computed = norm_f2(plain, iv, v);
        EXPECT_LE(std::abs(exact - computed), 1e-8 * std::max(1.0, exact))
            << fm.id << " " << v.name();
      }
    }
  }
}

TEST(NormF2, SupIsUpperEnvelope) {
  prop::ConfigGen gen(13);
  for (const auto& fm : default_corpus()) {
    const Interval iv = gen.corpus_interval();
    const double sup = norm_f2(fm, iv, NormVariant::sup());
    for (int i = 0; i <= 1000; ++i) {
      const double t = iv.a() + iv.width() * i / 1000.0;
      EXPECT_LE(std::abs(fm.f2(t)), sup * (1.0 + 1e-8) + 1e-300) << fm.id << " t=" << t;
    }
  }
}

TEST(NormF2, ConstantCurvatureLp) {
  const auto& sq = find_model("sq");
  FunctionModel plain = sq;
  plain.exact_norm = nullptr;
  const Interval iv(-0.5, 2.0);
  for (double p : {1.5, 2.0, 3.0}) {
    const double want = 2.0 * std::pow(iv.width(), 1.0 / p);
    EXPECT_LE(prop::rel_diff(norm_f2(plain, iv, NormVariant::lp(p)), want), 1e-10) << p;
  }
  EXPECT_LE(prop::rel_diff(norm_f2(plain, iv, NormVariant::l1()), 2.0 * iv.width()), 1e-10);
}

TEST(F2Range, ExpOnUnit) {
  const Range r = f2_range(find_model("exp"), Interval(0.0, 1.0));
  EXPECT_NEAR(r.lo, 1.0, 1e-12);
  EXPECT_NEAR(r.hi, std::numbers::e, 1e-12);
}

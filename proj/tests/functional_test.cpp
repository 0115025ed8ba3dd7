#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oqb/error.hpp"
#include "oqb/functional.hpp"
#include "oqb/report.hpp"
#include "test_support.hpp"

using namespace oqb;

namespace {

const Interval kUnit(0.0, 1.0);

FunctionModel constant_model(double c) {
  FunctionModel m;
  m.id = "const";
  m.f = [c](double) { return c; };
  m.f1 = [](double) { return 0.0; };
  m.f2 = [](double) { return 0.0; };
  m.exact_integral = [c](double lo, double hi) { return c * (hi - lo); };
  return m;
}

double largest_term(const TauBreakdown& t) {
  return std::max({std::abs(t.term_fprime_x), std::abs(t.term_f_x), std::abs(t.term_endpoints_f),
                   std::abs(t.term_endpoints_fprime), std::abs(t.term_means)});
}

}  // namespace

TEST(IntegralMean, Examples) {
  EXPECT_DOUBLE_EQ(integral_mean(constant_model(3.5), Interval(-2.0, 7.0)), 3.5);
  EXPECT_DOUBLE_EQ(integral_mean(find_model("lin"), kUnit),
                   find_model("lin").exact_integral(0.0, 1.0));
  EXPECT_NEAR(integral_mean(find_model("sq"), Interval(0.0, 0.5)), 1.0 / 12.0, 1e-16);
  EXPECT_NEAR(integral_mean([](double t) { return t; }, kUnit), 0.5, 1e-15);
}

TEST(DeviationS, Examples) {
  EXPECT_EQ(deviation_s(constant_model(2.0), kUnit, 0.3), 0.0);
  EXPECT_NEAR(deviation_s(find_model("sq"), kUnit, 0.0), -1.0 / 3.0, 1e-16);
  EXPECT_THROW(deviation_s(find_model("sq"), kUnit, 1.5), InvalidArgument);
}

TEST(TauCerone, Examples) {
  EXPECT_NEAR(tau_cerone(constant_model(4.0), kUnit, Weights(2, 1), 0.3), 0.0, 1e-15);
  FunctionModel t = constant_model(0.0);
  t.f = [](double s) { return s; };
  t.exact_integral = [](double lo, double hi) { return (hi - lo) * (hi + lo) / 2.0; };
  EXPECT_NEAR(tau_cerone(t, Interval(-1.0, 3.0), Weights(1, 1), 1.0), 0.0, 1e-15);
  EXPECT_NEAR(tau_cerone(find_model("sq"), kUnit, Weights(1, 1), 0.5), -1.0 / 12.0, 1e-15);
  EXPECT_THROW(tau_cerone(find_model("sq"), kUnit, Weights(1, 1), 0.0), InvalidArgument);
}

TEST(TauMain, Examples) {
  const auto& sq = find_model("sq");
  const TauBreakdown t = tau_main(sq, KernelConfig(kUnit, Weights(1, 1), 0.0, 0.5));
  EXPECT_NEAR(t.total, 1.0 / 12.0, 1e-15);
  EXPECT_TRUE(t.consistent());

  const KernelConfig left_only(kUnit, Weights(1, 0), 0.0, 0.5);
  EXPECT_NEAR(tau_main(sq, left_only).total, 2.0 * kernel_stats(left_only).integral, 1e-15);

  EXPECT_NEAR(tau_via_kernel(sq, KernelConfig(kUnit, Weights(1, 1), 0.0, 0.5)), 1.0 / 12.0, 1e-14);
}

TEST(TauMain, IdentityWithKernelFormOverSweep) {
  const SweepGrid grid = SweepGrid::default_grid();
  const auto corpus = default_corpus();
  std::size_t cases = 0;
  for (const auto& cfg : grid.configs()) {
    for (const auto& fm : corpus) {
      const TauBreakdown tb = tau_main(fm, cfg);
      ASSERT_TRUE(tb.consistent());
      const double tk = tau_via_kernel(fm, cfg);
      EXPECT_LE(std::abs(tb.total - tk), 1e-8 * std::max(1.0, std::abs(tb.total)))
          << fm.id << " h=" << cfg.h() << " x=" << cfg.x();
      ++cases;
    }
  }
  EXPECT_GE(cases, 500u);
}

TEST(TauMain, IdentityOnRandomConfigs) {
  prop::ConfigGen gen(31);
  const auto corpus = default_corpus();
  for (const auto& cfg : gen.configs(150, true)) {
    for (const auto& fm : corpus) {
      const double tm = tau_main(fm, cfg).total;
      EXPECT_LE(std::abs(tm - tau_via_kernel(fm, cfg)), 1e-8 * std::max(1.0, std::abs(tm)))
          << fm.id;
    }
  }
}

TEST(TauMain, AnnihilatesConstantsAndLinears) {
  prop::ConfigGen gen(32);
  const auto& lin = find_model("lin");
  for (const auto& cfg : gen.configs(200)) {
    const double c = gen.uniform(-5.0, 5.0);
    const TauBreakdown tc = tau_main(constant_model(c), cfg);
    EXPECT_LE(std::abs(tc.total), 1e-13 * std::max(1.0, largest_term(tc))) << c;
    const TauBreakdown tl = tau_main(lin, cfg);
    EXPECT_LE(std::abs(tl.total), 1e-11 * std::max(1.0, largest_term(tl)));
    EXPECT_EQ(tau_via_kernel(lin, cfg), 0.0);
  }
}

TEST(TauMain, ReducesToOffsetFreeFormAtZeroOffset) {
  prop::ConfigGen gen(33);
  for (const auto& fm : default_corpus()) {
    for (int k = 0; k < 40; ++k) {
      const Interval iv = gen.corpus_interval();
      const Range r = KernelConfig::admissible_x(iv, 0.0);
      const KernelConfig cfg(iv, gen.weights(), 0.0, gen.uniform(r.lo, r.hi));
      const TauBreakdown tb = tau_main(fm, cfg);
      EXPECT_EQ(tb.term_endpoints_fprime, 0.0);
      EXPECT_EQ(std::abs(tb.term_endpoints_f), 0.0);
      EXPECT_LE(std::abs(tb.total - tau_quadratic_form(fm, cfg)), 1e-12 * largest_term(tb))
          << fm.id;
    }
  }
}

TEST(TauAlternate, MatchesBoundaryForm) {
  prop::ConfigGen gen(34);
  for (const auto& fm : default_corpus()) {
    for (const auto& cfg : gen.configs(40, true)) {
      const TauBreakdown tb = tau_main(fm, cfg);
      EXPECT_LE(std::abs(tau_alternate(fm, cfg) - tb.total), 1e-12 * largest_term(tb)) << fm.id;
    }
  }
  const KernelConfig left_only(kUnit, Weights(1, 0), 0.3, 0.4);
  EXPECT_EQ(tau_alternate(find_model("exp"), left_only), tau_main(find_model("exp"), left_only).total);
  EXPECT_NEAR(tau_alternate(constant_model(2.0), left_only), 0.0, 1e-14);
}

TEST(TauLinearForm, MatchesFirstDegreeKernel) {
  prop::ConfigGen gen(35);
  for (const auto& fm : default_corpus()) {
    for (const auto& cfg : gen.configs(30, true)) {
      const double split[] = {cfg.x()};
      const double via_kernel = reference_integrate(
          [&](double t) { return kernel_linear_eval(cfg, t) * fm.f1(t); }, cfg.interval(), split,
          1e-13 * cfg.interval().width());
      EXPECT_LE(std::abs(tau_linear_form(fm, cfg) - via_kernel), 1e-10) << fm.id;
    }
  }
}

TEST(TauLinearForm, ZeroOffsetIsCeroneDeviation) {
  prop::ConfigGen gen(36);
  for (const auto& fm : default_corpus()) {
    const Interval iv = gen.corpus_interval();
    const KernelConfig cfg(iv, gen.weights(), 0.0, gen.uniform(iv.a() + 0.1 * iv.width(), iv.b() - 0.1 * iv.width()));
    EXPECT_NEAR(tau_linear_form(fm, cfg), tau_cerone(fm, iv, cfg.weights(), cfg.x()), 1e-13)
        << fm.id;
  }
}

TEST(Chebyshev, ExamplesAndProperties) {
  const auto id = [](double t) { return t; };
  const auto neg = [](double t) { return -t; };
  const auto one = [](double) { return 1.0; };
  EXPECT_NEAR(chebyshev_t(id, id, kUnit), 1.0 / 12.0, 1e-15);
  EXPECT_NEAR(chebyshev_t(id, neg, kUnit), -1.0 / 12.0, 1e-15);
  EXPECT_NEAR(chebyshev_t(id, one, kUnit), 0.0, 1e-16);

  prop::ConfigGen gen(37);
  const auto corpus = default_corpus();
  for (int k = 0; k < 30; ++k) {
    const auto& f = corpus[static_cast<std::size_t>(k) % corpus.size()].f;
    const auto& g = corpus[static_cast<std::size_t>(k + 2) % corpus.size()].f;
    const Interval iv = gen.corpus_interval();
    EXPECT_EQ(chebyshev_t(f, g, iv), chebyshev_t(g, f, iv));
    EXPECT_GE(chebyshev_t(f, f, iv), -1e-15);
  }
}

TEST(Chebyshev, GrussLinkWithKernel) {
  prop::ConfigGen gen(38);
  for (const auto& fm : default_corpus()) {
    for (const auto& cfg : gen.configs(15, true)) {
      const double len = cfg.interval().width();
      const double split[] = {cfg.x()};
      const double t = chebyshev_t([&](double s) { return kernel_main_eval(cfg, s); }, fm.f2,
                                   cfg.interval(), split);
      const double rhs =
          tau_via_kernel(fm, cfg) - len * kernel_stats(cfg).mean * secant_slope_kappa(fm, cfg.interval());
      EXPECT_LE(std::abs(len * t - rhs), 1e-9 * std::max(1.0, std::abs(rhs))) << fm.id;
    }
  }
}

TEST(SecantSlope, Examples) {
  EXPECT_EQ(secant_slope_kappa(find_model("sq"), Interval(-0.5, 2.0)), 2.0);
  EXPECT_EQ(secant_slope_kappa(find_model("lin"), kUnit), 0.0);
  EXPECT_NEAR(secant_slope_kappa(find_model("exp"), kUnit), std::numbers::e - 1.0, 1e-15);
}

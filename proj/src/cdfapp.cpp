#include "oqb/cdfapp.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "oqb/bounds.hpp"
#include "oqb/error.hpp"

namespace oqb {

namespace {

using std::numbers::pi;

double lp_of_constant(double c, const Interval& iv, const NormVariant& v) {
  switch (v.kind()) {
    case NormVariant::Kind::Sup:
      return std::abs(c);
    case NormVariant::Kind::L1:
      return std::abs(c) * iv.width();
    case NormVariant::Kind::Lp:
      return std::abs(c) * std::pow(iv.width(), 1.0 / v.p());
  }
  return 0.0;
}

PdfModel make_uniform() {
  FunctionModel fm;
  fm.id = "uniform";
  fm.f = [](double) { return 1.0; };
  fm.f1 = [](double) { return 0.0; };
  fm.f2 = [](double) { return 0.0; };
  fm.exact_integral = [](double lo, double hi) { return hi - lo; };
  fm.exact_norm = [](const Interval&, const NormVariant&) { return 0.0; };
  return {fm, Interval(0.0, 1.0), [](double x) { return x; }, 0.5};
}

PdfModel make_beta22() {
  FunctionModel fm;
  fm.id = "beta22";
  fm.f = [](double t) { return 6.0 * t * (1.0 - t); };
  fm.f1 = [](double t) { return 6.0 - 12.0 * t; };
  fm.f2 = [](double) { return -12.0; };
  fm.exact_integral = [](double lo, double hi) {
    return (hi - lo) * (3.0 * (hi + lo) - 2.0 * (hi * hi + hi * lo + lo * lo));
  };
  fm.exact_norm = [](const Interval& iv, const NormVariant& v) {
    return lp_of_constant(12.0, iv, v);
  };
  return {fm, Interval(0.0, 1.0), [](double x) { return x * x * (3.0 - 2.0 * x); }, 0.5};
}

PdfModel make_truncated_exponential() {
  static const double c = 1.0 / -std::expm1(-1.0);
  FunctionModel fm;
  fm.id = "texp";
  fm.f = [](double t) { return c * std::exp(-t); };
  fm.f1 = [](double t) { return -c * std::exp(-t); };
  fm.f2 = [](double t) { return c * std::exp(-t); };
  fm.exact_integral = [](double lo, double hi) {
    return -c * std::exp(-lo) * std::expm1(lo - hi);
  };
  fm.exact_norm = [](const Interval& iv, const NormVariant& v) {
    switch (v.kind()) {
      case NormVariant::Kind::Sup:
        return c * std::exp(-iv.a());
      case NormVariant::Kind::L1:
        return -c * std::exp(-iv.a()) * std::expm1(-iv.width());
      case NormVariant::Kind::Lp: {
        const double p = v.p();
        return c * std::pow(-std::exp(-p * iv.a()) * std::expm1(-p * iv.width()) / p, 1.0 / p);
      }
    }
    return 0.0;
  };
  return {fm, Interval(0.0, 1.0), [](double x) { return -c * std::expm1(-x); },
          c * (1.0 - 2.0 * std::exp(-1.0))};
}

PdfModel make_raised_cosine() {
  FunctionModel fm;
  fm.id = "raised_cosine";
  fm.f = [](double t) { return 1.0 - std::cos(2.0 * pi * t); };
  fm.f1 = [](double t) { return 2.0 * pi * std::sin(2.0 * pi * t); };
  fm.f2 = [](double t) { return 4.0 * pi * pi * std::cos(2.0 * pi * t); };
  fm.exact_integral = [](double lo, double hi) {
    return (hi - lo) - (std::sin(2.0 * pi * hi) - std::sin(2.0 * pi * lo)) / (2.0 * pi);
  };
  return {fm, Interval(0.0, 1.0),
          [](double x) { return x - std::sin(2.0 * pi * x) / (2.0 * pi); }, 0.5};
}

void require_support(const PdfModel& pm, const KernelConfig& cfg) {
  if (!(cfg.interval() == pm.support)) {
    throw InvalidArgument("configuration interval must equal the density support");
  }
}

// Terms of the scaled identity that do not involve F(x).
double free_terms(const PdfModel& pm, const KernelConfig& cfg) {
  const FunctionModel& fm = pm.base;
  const double a = cfg.interval().a();
  const double b = cfg.interval().b();
  const double x = cfg.x();
  const double len = b - a;
  const double h = cfg.h();
  const double wl = cfg.weights().alpha() / (x - a);
  const double wr = cfg.weights().beta() / (b - x);
  const double dl = x - cfg.left_vertex();
  const double dr = x - cfg.right_vertex();
  const double inner = 0.5 * (wl * dl * dl - wr * dr * dr) * fm.f1(x) -
                       (wl * dl - wr * dr) * fm.f(x) -
                       (h * len / 2.0) * (wl * fm.f(a) + wr * fm.f(b)) +
                       (h * h * len * len / 8.0) * (wr * fm.f1(b) - wl * fm.f1(a));
  return (x - a) * (b - x) * inner + cfg.weights().beta() * (x - a);
}

double f_coefficient(const KernelConfig& cfg) {
  const double a = cfg.interval().a();
  const double b = cfg.interval().b();
  const double x = cfg.x();
  return cfg.weights().alpha() * (b - x) - cfg.weights().beta() * (x - a);
}

}  // namespace

void validate_pdf(const PdfModel& pm) {
  const FunctionModel& fm = pm.base;
  if (!fm.f || !fm.f1 || !fm.f2) throw InvalidArgument("density model needs f, f1 and f2");
  const double a = pm.support.a();
  const double len = pm.support.width();
  constexpr int kSamples = 1025;
  for (int i = 0; i < kSamples; ++i) {
    const double t = i + 1 == kSamples ? pm.support.b() : a + len * i / (kSamples - 1);
    const double v = fm.f(t);
    if (!(v >= 0.0)) {
      std::ostringstream os;
      os << "density " << fm.id << " is negative or non-finite at t = " << t;
      throw InvalidArgument(os.str());
    }
  }
  const double mass = reference_integrate(fm.f, pm.support, 1e-12 * len);
  if (std::abs(mass - 1.0) > 1e-8) {
    std::ostringstream os;
    os << "density " << fm.id << " integrates to " << mass;
    throw InvalidArgument(os.str());
  }
}

const std::vector<PdfModel>& density_registry() {
  static const std::vector<PdfModel> registry = [] {
    std::vector<PdfModel> r{make_uniform(), make_beta22(), make_truncated_exponential(),
                            make_raised_cosine()};
    for (const auto& pm : r) validate_pdf(pm);
    return r;
  }();
  return registry;
}

const PdfModel& find_density(std::string_view id) {
  for (const auto& pm : density_registry()) {
    if (pm.base.id == id) return pm;
  }
  throw InvalidArgument("unknown density '" + std::string(id) + "'");
}

std::vector<std::string> density_ids() {
  std::vector<std::string> out;
  for (const auto& pm : density_registry()) out.push_back(pm.base.id);
  return out;
}

double cdf_value(const PdfModel& pm, double x) {
  if (pm.cdf_exact) return pm.cdf_exact(x);
  if (x <= pm.support.a()) return 0.0;
  if (x >= pm.support.b()) return 1.0;
  return integrate_model(pm.base, Interval(pm.support.a(), x));
}

double cdf_lhs(const PdfModel& pm, const KernelConfig& cfg) {
  require_support(pm, cfg);
  return free_terms(pm, cfg) + f_coefficient(cfg) * cdf_value(pm, cfg.x());
}

double cdf_bound(const PdfModel& pm, const KernelConfig& cfg, const NormVariant& variant) {
  require_support(pm, cfg);
  const double a = cfg.interval().a();
  const double b = cfg.interval().b();
  const double x = cfg.x();
  const double norm = norm_f2(pm.base, cfg.interval(), variant);
  return cfg.weights().sum() * (x - a) * (b - x) * norm * oracle_kernel_factor(cfg, variant);
}

CdfEnclosure cdf_enclosure(const PdfModel& pm, const KernelConfig& cfg,
                           const NormVariant& variant) {
  require_support(pm, cfg);
  const double coef = f_coefficient(cfg);
  if (std::abs(coef) < 1e-9 * cfg.weights().sum() * cfg.interval().width()) {
    std::ostringstream os;
    os << "coefficient of F(x) vanishes at x = " << cfg.x() << " (alpha(b-x) = beta(x-a))";
    throw SingularCoefficient(os.str());
  }
  CdfEnclosure e;
  e.x = cfg.x();
  e.variant = variant;
  e.center = -free_terms(pm, cfg) / coef;
  e.radius = cdf_bound(pm, cfg, variant) / std::abs(coef);
  return e;
}

CdfEnclosure reliability(const PdfModel& pm, const KernelConfig& cfg,
                         const NormVariant& variant) {
  CdfEnclosure e = cdf_enclosure(pm, cfg, variant);
  e.center = 1.0 - e.center;
  return e;
}

double expectation_from_cdf(const PdfModel& pm) {
  const double len = pm.support.width();
  const double area =
      reference_integrate([&](double u) { return cdf_value(pm, u); }, pm.support, 1e-12 * len);
  return pm.support.b() - area;
}

}  // namespace oqb

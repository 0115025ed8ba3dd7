#include "oqb/functional.hpp"

#include <algorithm>
#include <cmath>

#include "oqb/error.hpp"

namespace oqb {

namespace {

// Tolerance for integrals that feed identity checks.
double tight_tolerance(const Interval& iv) { return 1e-12 * iv.width(); }

double partial_mean(const FunctionModel& fm, double lo, double hi) {
  return integrate_model(fm, Interval(lo, hi)) / (hi - lo);
}

}  // namespace

double integral_mean(const FunctionModel& fm, const Interval& iv) {
  return integrate_model(fm, iv) / iv.width();
}

double integral_mean(const RealFn& g, const Interval& iv, std::span<const double> breakpoints) {
  return reference_integrate(g, iv, breakpoints, tight_tolerance(iv)) / iv.width();
}

double deviation_s(const FunctionModel& fm, const Interval& iv, double x) {
  if (!iv.contains(x)) throw InvalidArgument("deviation_s requires x in [a, b]");
  return fm.f(x) - integral_mean(fm, iv);
}

double tau_cerone(const FunctionModel& fm, const Interval& iv, const Weights& w, double x) {
  if (!(iv.a() < x && x < iv.b())) throw InvalidArgument("tau_cerone requires a < x < b");
  const double means =
      w.alpha() * partial_mean(fm, iv.a(), x) + w.beta() * partial_mean(fm, x, iv.b());
  return fm.f(x) - means / w.sum();
}

bool TauBreakdown::consistent() const noexcept {
  const double sum =
      term_fprime_x + term_f_x + term_endpoints_f + term_endpoints_fprime + term_means;
  const double largest = std::max({std::abs(term_fprime_x), std::abs(term_f_x),
                                   std::abs(term_endpoints_f), std::abs(term_endpoints_fprime),
                                   std::abs(term_means)});
  return std::abs(total - sum) <= 1e-12 * largest;
}

TauBreakdown tau_main(const FunctionModel& fm, const KernelConfig& cfg) {
  const double a = cfg.interval().a();
  const double b = cfg.interval().b();
  const double x = cfg.x();
  const double len = b - a;
  const double h = cfg.h();
  const double al = cfg.weights().alpha();
  const double be = cfg.weights().beta();
  const double s = cfg.weights().sum();
  const double dl = x - cfg.left_vertex();   // x - c1 >= 0
  const double dr = x - cfg.right_vertex();  // x - c2 <= 0
  const double wl = al / (x - a);
  const double wr = be / (b - x);

  TauBreakdown out;
  out.term_fprime_x = (wl * dl * dl - wr * dr * dr) / (2.0 * s) * fm.f1(x);
  out.term_f_x = -(wl * dl - wr * dr) / s * fm.f(x);
  out.term_endpoints_f = -(h * len / 2.0) * (wl * fm.f(a) + wr * fm.f(b)) / s;
  out.term_endpoints_fprime = (h * h * len * len / 8.0) * (wr * fm.f1(b) - wl * fm.f1(a)) / s;
  double means = 0.0;
  if (al > 0.0) means += al * partial_mean(fm, a, x);
  if (be > 0.0) means += be * partial_mean(fm, x, b);
  out.term_means = means / s;
  out.total = out.term_fprime_x + out.term_f_x + out.term_endpoints_f +
              out.term_endpoints_fprime + out.term_means;
  return out;
}

double tau_via_kernel(const FunctionModel& fm, const KernelConfig& cfg) {
  const auto& f2 = fm.f2;
  const double split[] = {cfg.x()};
  return reference_integrate([&](double t) { return kernel_main_eval(cfg, t) * f2(t); },
                             cfg.interval(), split, tight_tolerance(cfg.interval()));
}

double tau_alternate(const FunctionModel& fm, const KernelConfig& cfg) {
  const TauBreakdown head = tau_main(fm, cfg);
  const double a = cfg.interval().a();
  const double b = cfg.interval().b();
  const double x = cfg.x();
  const double sigma = (b - a) / (b - x);
  const double share = cfg.weights().beta() * sigma / cfg.weights().sum();
  const double tail =
      (1.0 - share) * partial_mean(fm, a, x) + share * integral_mean(fm, cfg.interval());
  return head.term_fprime_x + head.term_f_x + head.term_endpoints_f +
         head.term_endpoints_fprime + tail;
}

double tau_quadratic_form(const FunctionModel& fm, const KernelConfig& cfg) {
  const double a = cfg.interval().a();
  const double b = cfg.interval().b();
  const double x = cfg.x();
  const double al = cfg.weights().alpha();
  const double be = cfg.weights().beta();
  const double s = cfg.weights().sum();
  double means = 0.0;
  if (al > 0.0) means += al * partial_mean(fm, a, x);
  if (be > 0.0) means += be * partial_mean(fm, x, b);
  return (al * (x - a) - be * (b - x)) / (2.0 * s) * fm.f1(x) - fm.f(x) + means / s;
}

double tau_linear_form(const FunctionModel& fm, const KernelConfig& cfg) {
  const double a = cfg.interval().a();
  const double b = cfg.interval().b();
  const double x = cfg.x();
  const double s = cfg.weights().sum();
  const double wl = cfg.weights().alpha() / (x - a);
  const double wr = cfg.weights().beta() / (b - x);
  const double dl = x - cfg.left_vertex();
  const double dr = x - cfg.right_vertex();
  double integrals = 0.0;
  if (wl > 0.0) integrals += wl * integrate_model(fm, Interval(a, x));
  if (wr > 0.0) integrals += wr * integrate_model(fm, Interval(x, b));
  return (wl * dl - wr * dr) / s * fm.f(x) +
         cfg.offset() * (wl * fm.f(a) + wr * fm.f(b)) / s - integrals / s;
}

double chebyshev_t(const RealFn& f, const RealFn& g, const Interval& iv,
                   std::span<const double> breakpoints) {
  const double mfg = integral_mean([&](double t) { return f(t) * g(t); }, iv, breakpoints);
  return mfg - integral_mean(f, iv, breakpoints) * integral_mean(g, iv, breakpoints);
}

double secant_slope_kappa(const FunctionModel& fm, const Interval& iv) {
  return (fm.f1(iv.b()) - fm.f1(iv.a())) / iv.width();
}

}  // namespace oqb

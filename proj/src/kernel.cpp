#include "oqb/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "oqb/error.hpp"
#include "oqb/numeric.hpp"

namespace oqb {

Weights::Weights(double alpha, double beta) : alpha_(alpha), beta_(beta) {
  if (!std::isfinite(alpha) || !std::isfinite(beta) || alpha < 0.0 || beta < 0.0) {
    throw InvalidArgument("weights must be finite and non-negative");
  }
  if (!(alpha + beta > 0.0)) throw InvalidArgument("weights must not both be zero");
}

Range KernelConfig::admissible_x(const Interval& iv, double h) {
  const double half = h * iv.width() / 2.0;
  const double margin = kInteriorMargin * iv.width();
  return {std::max(iv.a() + half, iv.a() + margin), std::min(iv.b() - half, iv.b() - margin)};
}

KernelConfig::KernelConfig(Interval iv, Weights w, double h, double x)
    : iv_(iv), w_(w), h_(h), x_(x) {
  if (!std::isfinite(h) || h < 0.0 || h > 1.0) throw InvalidArgument("h must lie in [0, 1]");
  if (!std::isfinite(x)) throw InvalidArgument("x must be finite");
  const Range r = admissible_x(iv, h);
  // a + h(b-a)/2 and b - h(b-a)/2 may round apart by a few ulps at h = 1.
  const double slack =
      4.0 * std::numeric_limits<double>::epsilon() *
      std::max({std::abs(iv.a()), std::abs(iv.b()), iv.width()});
  const double margin = kInteriorMargin * iv.width();
  if (x < iv.a() + margin || x > iv.b() - margin || x < r.lo - slack || x > r.hi + slack) {
    std::ostringstream os;
    os << "x = " << x << " is outside the admissible range [" << r.lo << ", " << r.hi
       << "] for h = " << h;
    throw InvalidArgument(os.str());
  }
}

namespace {

void require_in_domain(const KernelConfig& cfg, double t) {
  if (!(cfg.interval().contains(t))) {
    std::ostringstream os;
    os << "t = " << t << " lies outside [" << cfg.interval().a() << ", " << cfg.interval().b()
       << "]";
    throw OutOfDomain(os.str());
  }
}

// ∫ |t - c|^k dt from lo to hi.
double abs_power_integral(double lo, double hi, double c, double k) {
  return (signed_pow(hi - c, k + 1.0) - signed_pow(lo - c, k + 1.0)) / (k + 1.0);
}

}  // namespace

double kernel_main_eval(const KernelConfig& cfg, double t) {
  require_in_domain(cfg, t);
  if (t <= cfg.x()) {
    const double d = t - cfg.left_vertex();
    return cfg.left_scale() * 0.5 * d * d;
  }
  const double d = t - cfg.right_vertex();
  return cfg.right_scale() * 0.5 * d * d;
}

double kernel_linear_eval(const KernelConfig& cfg, double t) {
  require_in_domain(cfg, t);
  if (t <= cfg.x()) return cfg.left_scale() * (t - cfg.left_vertex());
  return cfg.right_scale() * (t - cfg.right_vertex());
}

double kernel_quadratic_eval(const KernelConfig& cfg, double t) {
  require_in_domain(cfg, t);
  if (t <= cfg.x()) {
    const double d = t - cfg.interval().a();
    return cfg.left_scale() * 0.5 * d * d;
  }
  const double d = t - cfg.interval().b();
  return cfg.right_scale() * 0.5 * d * d;
}

double KernelStats::q_integral(double q) const {
  for (const auto& [qq, value] : q_moments) {
    if (qq == q) return value;
  }
  throw InvalidArgument("q-moment was not requested from kernel_stats");
}

double kernel_q_moment(const KernelConfig& cfg, double q) {
  if (!(q >= 1.0) || !std::isfinite(q)) throw InvalidArgument("kernel moment order must be >= 1");
  const double a = cfg.interval().a();
  const double b = cfg.interval().b();
  const double x = cfg.x();
  const double kl = 0.5 * cfg.left_scale();
  const double kr = 0.5 * cfg.right_scale();
  double total = 0.0;
  if (kl > 0.0) {
    total += std::pow(kl, q) * abs_power_integral(a, x, cfg.left_vertex(), 2.0 * q);
  }
  if (kr > 0.0) {
    total += std::pow(kr, q) * abs_power_integral(x, b, cfg.right_vertex(), 2.0 * q);
  }
  return total;
}

KernelStats kernel_stats(const KernelConfig& cfg, std::span<const double> q_list) {
  KernelStats s;
  s.integral = kernel_q_moment(cfg, 1.0);
  s.abs_integral = s.integral;
  s.square_integral = kernel_q_moment(cfg, 2.0);
  s.mean = s.integral / cfg.interval().width();
  for (double q : q_list) s.q_moments.emplace_back(q, kernel_q_moment(cfg, q));

  // Each branch is a scaled parabola whose vertex lies inside its branch, so
  // the extrema are among the branch endpoints and the vertices.
  const double a = cfg.interval().a();
  const double b = cfg.interval().b();
  const double x = cfg.x();
  const double kl = 0.5 * cfg.left_scale();
  const double kr = 0.5 * cfg.right_scale();
  const double c1 = cfg.left_vertex();
  const double c2 = cfg.right_vertex();
  const double candidates[] = {kl * (a - c1) * (a - c1), kl * (x - c1) * (x - c1),
                               kr * (x - c2) * (x - c2), kr * (b - c2) * (b - c2)};
  s.sup = *std::max_element(std::begin(candidates), std::end(candidates));
  s.inf = *std::min_element(std::begin(candidates), std::end(candidates));
  if (a <= c1 && c1 <= x) s.inf = std::min(s.inf, 0.0);
  if (x <= c2 && c2 <= b) s.inf = std::min(s.inf, 0.0);
  return s;
}

double kernel_sup_paper(const KernelConfig& cfg) {
  const double a = cfg.interval().a();
  const double b = cfg.interval().b();
  const double x = cfg.x();
  const double h = cfg.h();
  const double al = cfg.weights().alpha();
  const double be = cfg.weights().beta();
  const double len = b - a;
  const double hh = h * h * len / 2.0;
  const double sym = al * (x - a) + be * (b - x) - h * len * (al + be) +
                     hh * (al / (x - a) + be / (b - x));
  const double skew =
      be * (b - x) - al * (x - a) + h * len * (al - be) + hh * (be / (b - x) - al / (x - a));
  return (sym + std::abs(skew)) / (4.0 * (al + be));
}

double kernel_inf_paper(const KernelConfig& cfg) {
  const double a = cfg.interval().a();
  const double b = cfg.interval().b();
  const double x = cfg.x();
  const double h = cfg.h();
  const double al = cfg.weights().alpha();
  const double be = cfg.weights().beta();
  const double len = b - a;
  const double l = al / (x - a);
  const double r = be / (b - x);
  return h * h * len * len / (8.0 * (al + be)) * (l + r - std::abs(l - r));
}

double linear_kernel_abs_moment(const KernelConfig& cfg, double q) {
  if (!(q >= 1.0) || !std::isfinite(q)) throw InvalidArgument("kernel moment order must be >= 1");
  const double kl = cfg.left_scale();
  const double kr = cfg.right_scale();
  double total = 0.0;
  if (kl > 0.0) {
    total += std::pow(kl, q) *
             abs_power_integral(cfg.interval().a(), cfg.x(), cfg.left_vertex(), q);
  }
  if (kr > 0.0) {
    total += std::pow(kr, q) *
             abs_power_integral(cfg.x(), cfg.interval().b(), cfg.right_vertex(), q);
  }
  return total;
}

double linear_kernel_sup_abs(const KernelConfig& cfg) {
  const double a = cfg.interval().a();
  const double b = cfg.interval().b();
  const double x = cfg.x();
  const double left = cfg.left_scale() *
                      std::max(std::abs(a - cfg.left_vertex()), std::abs(x - cfg.left_vertex()));
  const double right = cfg.right_scale() * std::max(std::abs(x - cfg.right_vertex()),
                                                    std::abs(b - cfg.right_vertex()));
  return std::max(left, right);
}

}  // namespace oqb

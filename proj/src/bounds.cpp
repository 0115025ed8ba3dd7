#include "oqb/bounds.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "oqb/error.hpp"
#include "oqb/functional.hpp"
#include "oqb/numeric.hpp"

namespace oqb {

double oracle_kernel_factor(const KernelConfig& cfg, const NormVariant& variant) {
  switch (variant.kind()) {
    case NormVariant::Kind::Sup:
      return kernel_q_moment(cfg, 1.0);
    case NormVariant::Kind::Lp: {
      const double q = variant.q();
      return std::pow(kernel_q_moment(cfg, q), 1.0 / q);
    }
    case NormVariant::Kind::L1:
      return kernel_stats(cfg).sup;
  }
  return 0.0;
}

BoundReport bound_oracle(const KernelConfig& cfg, const NormVariant& variant, double tau,
                         double norm_value) {
  BoundReport r;
  r.variant = variant;
  r.tau = tau;
  r.norm_value = norm_value;
  r.oracle_bound = norm_value * oracle_kernel_factor(cfg, variant);
  r.paper_bound = bound_paper_theorem2(cfg, norm_value, variant);
  r.slack = r.oracle_bound - std::abs(tau);
  r.sharpness_ratio = r.oracle_bound > 0.0 ? std::abs(tau) / r.oracle_bound : 0.0;
  r.paper_discrepancy = *r.paper_bound - r.oracle_bound;
  return r;
}

BoundReport bound_oracle(const FunctionModel& fm, const KernelConfig& cfg,
                         const NormVariant& variant) {
  return bound_oracle(cfg, variant, tau_main(fm, cfg).total,
                      norm_f2(fm, cfg.interval(), variant));
}

namespace {

// Shorthand for the quantities the printed forms are written in.
struct Sym {
  double a, b, x, h, al, be, len, mid, off, q;

  Sym(const Interval& iv, double alpha, double beta, double h_, double x_, const NormVariant& v)
      : a(iv.a()),
        b(iv.b()),
        x(x_),
        h(h_),
        al(alpha),
        be(beta),
        len(iv.width()),
        mid(iv.midpoint()),
        off(h_ * iv.width() / 2.0),
        q(v.kind() == NormVariant::Kind::Lp ? v.q() : 1.0) {}

  double c1() const { return a + off; }
  double c2() const { return b - off; }
  double root(double s) const { return signed_pow(s, 1.0 / q); }
  double qth(double s) const { return std::pow(s, q); }
};

[[noreturn]] void no_form(CatalogCase c, const NormVariant& v) {
  throw InvalidArgument("case " + std::string(case_id(c)) + " has no " + v.name() + " form");
}

// Printed general-h bracket for the sup-norm case (also the printed ∫P).
double printed_cubic_bracket(const Sym& s) {
  const double h3 = s.off * s.off * s.off;
  return s.al / (s.x - s.a) * (signed_pow(s.x - s.c1(), 3.0) + h3) -
         s.be / (s.b - s.x) * (h3 + signed_pow(s.x - s.c2(), 3.0));
}

double general_rhs(const Sym& s, const NormVariant& v, double n) {
  switch (v.kind()) {
    case NormVariant::Kind::Sup:
      return printed_cubic_bracket(s) * n / (6.0 * (s.al + s.be));
    case NormVariant::Kind::Lp: {
      const double e = 2.0 * s.q + 1.0;
      const double neg_off = signed_pow(s.h * (s.a - s.b) / 2.0, e);
      const double bracket =
          s.qth(s.al) / s.qth(s.x - s.a) * (signed_pow(s.x - s.c1(), e) - neg_off) +
          s.qth(s.be) / s.qth(s.b - s.x) * (neg_off - signed_pow(s.x - s.c2(), e));
      return s.root(bracket) * n / (2.0 * std::pow(e, 1.0 / s.q) * (s.al + s.be));
    }
    case NormVariant::Kind::L1: {
      const double hh = s.h * s.h * s.len / 2.0;
      const double sym = s.al * (s.x - s.a) + s.be * (s.b - s.x) - s.h * s.len * (s.al + s.be) +
                         hh * (s.al / (s.x - s.a) + s.be / (s.b - s.x));
      const double skew = s.be * (s.b - s.x) - s.al * (s.x - s.a) + s.h * s.len * (s.al - s.be) +
                          hh * (s.be / (s.b - s.x) - s.al / (s.x - s.a));
      return (sym + std::abs(skew)) * n / (4.0 * (s.al + s.be));
    }
  }
  return 0.0;
}

}  // namespace

double bound_paper_theorem2(const KernelConfig& cfg, double norm_value,
                            const NormVariant& variant) {
  const Sym s(cfg.interval(), cfg.weights().alpha(), cfg.weights().beta(), cfg.h(), cfg.x(),
              variant);
  return general_rhs(s, variant, norm_value);
}

namespace {

constexpr std::array<std::pair<CatalogCase, std::string_view>, 12> kCaseIds = {{
    {CatalogCase::Ostrowski, "ostrowski"},
    {CatalogCase::Montgomery, "montgomery"},
    {CatalogCase::Cerone, "cerone"},
    {CatalogCase::LinearKernel, "linear_kernel"},
    {CatalogCase::QuadraticKernel, "quadratic_kernel"},
    {CatalogCase::General, "general"},
    {CatalogCase::OffsetOne, "offset_one"},
    {CatalogCase::OffsetOneMid, "offset_one_mid"},
    {CatalogCase::OffsetHalf, "offset_half"},
    {CatalogCase::OffsetHalfMid, "offset_half_mid"},
    {CatalogCase::OffsetHalfThreeQuarter, "offset_half_three_quarter"},
    {CatalogCase::MidpointFamily, "midpoint_family"},
}};

}  // namespace

std::string_view case_id(CatalogCase c) noexcept {
  for (const auto& [k, id] : kCaseIds) {
    if (k == c) return id;
  }
  return "?";
}

CatalogCase parse_case(std::string_view id) {
  for (const auto& [k, name] : kCaseIds) {
    if (name == id) return k;
  }
  throw UnknownCase("unknown catalog case '" + std::string(id) + "'");
}

std::vector<CatalogCase> all_catalog_cases() {
  std::vector<CatalogCase> out;
  for (const auto& [k, id] : kCaseIds) out.push_back(k);
  return out;
}

CatalogValue bound_catalog(std::string_view id, const CatalogArgs& args) {
  return bound_catalog(parse_case(id), args);
}

CatalogValue bound_catalog(CatalogCase c, const CatalogArgs& args) {
  const Interval& iv = args.iv;
  const NormVariant& v = args.variant;
  const double n = args.norm;
  CatalogValue out;
  out.h = args.h;
  out.x = args.x;
  out.alpha = args.w.alpha();
  out.beta = args.w.beta();

  switch (c) {
    case CatalogCase::Ostrowski:
    case CatalogCase::Montgomery: {
      // Montgomery kernel: the first-degree kernel at h = 0 with weights (x-a, b-x).
      out.derivative_order = 1;
      out.h = 0.0;
      out.alpha = args.x - iv.a();
      out.beta = iv.b() - args.x;
      const Sym s(iv, out.alpha, out.beta, 0.0, args.x, v);
      const double sq = (s.len / 2.0) * (s.len / 2.0) + (s.x - s.mid) * (s.x - s.mid);
      if (c == CatalogCase::Ostrowski) {
        if (v.kind() != NormVariant::Kind::Sup) no_form(c, v);
        out.value = sq * n / s.len;
        return out;
      }
      switch (v.kind()) {
        case NormVariant::Kind::Sup:
          out.value = sq * n / s.len;
          break;
        case NormVariant::Kind::Lp:
          out.value = s.root((std::pow(s.x - s.a, s.q + 1.0) + std::pow(s.b - s.x, s.q + 1.0)) /
                             (s.q + 1.0)) *
                      n / s.len;
          break;
        case NormVariant::Kind::L1:
          out.value = (s.len / 2.0 + std::abs(s.x - s.mid)) * n / s.len;
          break;
      }
      return out;
    }

    case CatalogCase::Cerone: {
      out.derivative_order = 1;
      out.h = 0.0;
      const Sym s(iv, out.alpha, out.beta, 0.0, args.x, v);
      switch (v.kind()) {
        case NormVariant::Kind::Sup:
          out.value = (s.al * (s.x - s.a) + s.be * (s.b - s.x)) * n / (2.0 * (s.al + s.be));
          break;
        case NormVariant::Kind::Lp:
          out.value = s.root(s.qth(s.al) * (s.x - s.a) + s.qth(s.be) * (s.b - s.x)) * n /
                      ((s.al + s.be) * std::pow(s.q + 1.0, 1.0 / s.q));
          break;
        case NormVariant::Kind::L1:
          out.value = 0.5 * (1.0 + std::abs(s.al - s.be) / (s.al + s.be)) * n;
          break;
      }
      return out;
    }

    case CatalogCase::LinearKernel: {
      out.derivative_order = 1;
      const Sym s(iv, out.alpha, out.beta, out.h, args.x, v);
      switch (v.kind()) {
        case NormVariant::Kind::Sup: {
          const double l = s.c1() - (s.a + s.x) / 2.0;
          const double r = s.c2() - (s.x + s.b) / 2.0;
          out.value = (s.al / (s.x - s.a) * ((s.x - s.a) * (s.x - s.a) / 4.0 + l * l) +
                       s.be / (s.b - s.x) * ((s.b - s.x) * (s.b - s.x) / 4.0 + r * r)) *
                      n / (s.al + s.be);
          break;
        }
        case NormVariant::Kind::Lp: {
          const double e = s.q + 1.0;
          const double neg_off = signed_pow(s.h * (s.a - s.b) / 2.0, e);
          const double bracket =
              s.qth(s.al) / s.qth(s.x - s.a) * (signed_pow(s.x - s.c1(), e) - neg_off) +
              s.qth(s.be) / s.qth(s.b - s.x) *
                  (signed_pow(s.b - (s.x + s.off), e) - neg_off);
          out.value = s.root(bracket) * n / (std::pow(e, 1.0 / s.q) * (s.al + s.be));
          break;
        }
        case NormVariant::Kind::L1: {
          const double prod = (s.x - s.a) * (s.b - s.x);
          const double sym =
              (s.al + s.be) - s.off * (s.al * (s.b - s.x) + s.be * (s.x - s.a)) / prod;
          const double skew =
              (s.al - s.be) + s.off * (s.be * (s.x - s.a) - s.al * (s.b - s.x)) / prod;
          out.value = (sym + std::abs(skew)) * n / (2.0 * (s.al + s.be));
          break;
        }
      }
      return out;
    }

    case CatalogCase::QuadraticKernel: {
      out.h = 0.0;
      const Sym s(iv, out.alpha, out.beta, 0.0, args.x, v);
      const double dl = s.x - s.a;
      const double dr = s.b - s.x;
      switch (v.kind()) {
        case NormVariant::Kind::Sup:
          out.value = (s.al * dl * dl + s.be * dr * dr) * n / (6.0 * (s.al + s.be));
          break;
        case NormVariant::Kind::Lp:
          out.value = s.root(s.qth(s.al) * std::pow(dl, s.q + 1.0) +
                             s.qth(s.be) * std::pow(dr, s.q + 1.0)) /
                      std::pow(2.0 * s.q + 1.0, 1.0 / s.q) * n / (2.0 * (s.al + s.be));
          break;
        case NormVariant::Kind::L1:
          out.value = (s.al * dl + s.be * dr + std::abs(s.al * dl - s.be * dr)) * n /
                      (4.0 * (s.al + s.be));
          break;
      }
      return out;
    }

    case CatalogCase::General: {
      const Sym s(iv, out.alpha, out.beta, out.h, args.x, v);
      out.value = general_rhs(s, v, n);
      return out;
    }

    case CatalogCase::OffsetOne: {
      out.h = 1.0;
      const Sym s(iv, out.alpha, out.beta, 1.0, args.x, v);
      const double half3 = std::pow(s.len / 2.0, 3.0);
      const double dx3 = signed_pow(s.x - s.mid, 3.0);
      switch (v.kind()) {
        case NormVariant::Kind::Sup:
          out.value = (s.al / (s.x - s.a) * (dx3 + half3) - s.be / (s.b - s.x) * (half3 + dx3)) *
                      n / (6.0 * (s.al + s.be));
          break;
        case NormVariant::Kind::Lp: {
          const double e = 2.0 * s.q + 1.0;
          const double neg_half = signed_pow((s.a - s.b) / 2.0, e);
          const double dxe = signed_pow(s.x - s.mid, e);
          const double bracket = (dxe - neg_half) / s.qth(s.x - s.a) +
                                 (neg_half - dxe) / s.qth(s.b - s.x);
          out.value = s.root(bracket) / std::pow(e, 1.0 / s.q) * 0.25 * n;
          break;
        }
        case NormVariant::Kind::L1: {
          const double sym = s.al * (s.x - s.a) + s.be * (s.b - s.x) - s.len * (s.al + s.be) +
                             s.len / 2.0 * (s.al / (s.x - s.a) + s.be / (s.b - s.x));
          const double skew = s.be * (s.b - s.x) - s.al * (s.x - s.a) + s.len * (s.al - s.be) +
                              s.len / 2.0 * (s.be / (s.b - s.x) - s.al / (s.x - s.a));
          out.value = (sym + std::abs(skew)) * n / (4.0 * (s.al + s.be));
          break;
        }
      }
      return out;
    }

    case CatalogCase::OffsetOneMid: {
      out.h = 1.0;
      out.x = iv.midpoint();
      const Sym s(iv, out.alpha, out.beta, 1.0, out.x, v);
      switch (v.kind()) {
        case NormVariant::Kind::Sup:
          out.value = s.len * s.len / 24.0 * (s.al - s.be) / (s.al + s.be) * n;
          break;
        case NormVariant::Kind::Lp: {
          const double e = 2.0 * s.q + 1.0;
          const double neg_half = signed_pow((s.a - s.b) / 2.0, e);
          const double bracket = s.qth(s.be) / s.qth(s.len) * neg_half -
                                 s.qth(s.al) / s.qth(s.len) * neg_half;
          out.value = s.root(bracket) / std::pow(e, 1.0 / s.q) / (s.al + s.be) * n;
          break;
        }
        case NormVariant::Kind::L1: {
          const double k = 1.0 - (s.a - s.b) / 2.0;
          out.value = (k + std::abs((s.be - s.al) / (s.al + s.be) * k)) * n / 4.0;
          break;
        }
      }
      return out;
    }

    case CatalogCase::OffsetHalf: {
      out.h = 0.5;
      const Sym s(iv, out.alpha, out.beta, 0.5, args.x, v);
      const double quarter = s.len / 4.0;
      switch (v.kind()) {
        case NormVariant::Kind::Sup: {
          const double q3 = quarter * quarter * quarter;
          out.value = (s.al / (s.x - s.a) * (signed_pow(s.x - (s.a + quarter), 3.0) + q3) -
                       s.be / (s.b - s.x) * (q3 + signed_pow(s.x - (s.b - quarter), 3.0))) *
                      n / (6.0 * (s.al + s.be));
          break;
        }
        case NormVariant::Kind::Lp: {
          const double e = 2.0 * s.q + 1.0;
          const double neg_q = signed_pow((s.a - s.b) / 4.0, e);
          const double bracket =
              s.qth(s.al) / s.qth(s.x - s.a) * (signed_pow(s.x - (s.a + quarter), e) - neg_q) +
              s.qth(s.be) / s.qth(s.b - s.x) * (neg_q - signed_pow(s.x - (s.b - quarter), e));
          out.value = s.root(bracket) * n / (2.0 * std::pow(e, 1.0 / s.q) * (s.al + s.be));
          break;
        }
        case NormVariant::Kind::L1: {
          const double sym = s.al * (s.x - s.a) + s.be * (s.b - s.x) -
                             0.5 * s.len * (s.al + s.be) +
                             s.len / 8.0 * (s.al / (s.x - s.a) + s.be / (s.b - s.x));
          const double skew = s.be * (s.b - s.x) - s.al * (s.x - s.a) +
                              0.5 * s.len * (s.al - s.be) +
                              s.len / 8.0 * (s.be / (s.b - s.x) - s.al / (s.x - s.a));
          out.value = (sym + std::abs(skew)) * n / (4.0 * (s.al + s.be));
          break;
        }
      }
      return out;
    }

    case CatalogCase::OffsetHalfMid: {
      out.h = 0.5;
      out.x = iv.midpoint();
      out.alpha = out.beta = 1.0;
      const Sym s(iv, 1.0, 1.0, 0.5, out.x, v);
      switch (v.kind()) {
        case NormVariant::Kind::Sup:
          out.value = s.len * s.len * n / 192.0;
          break;
        case NormVariant::Kind::Lp: {
          const double e = 2.0 * s.q + 1.0;
          const double bracket = signed_pow(s.len, e) - signed_pow(s.a - s.b, e);
          out.value = s.root(bracket) * n /
                      (16.0 * s.len * std::pow(2.0, 2.0 / s.q) * std::pow(e, 1.0 / s.q));
          break;
        }
        case NormVariant::Kind::L1:
          out.value = s.len * n / 16.0;
          break;
      }
      return out;
    }

    case CatalogCase::OffsetHalfThreeQuarter: {
      out.h = 0.5;
      out.x = (iv.a() + 3.0 * iv.b()) / 4.0;
      out.alpha = out.beta = 1.0;
      const Sym s(iv, 1.0, 1.0, 0.5, out.x, v);
      switch (v.kind()) {
        case NormVariant::Kind::Sup:
          out.value = s.len * s.len * n / 96.0;
          break;
        case NormVariant::Kind::Lp: {
          const double e = 2.0 * s.q + 1.0;
          const double neg_q = signed_pow((s.a - s.b) / 4.0, e);
          const double bracket =
              (signed_pow(s.len / 2.0, e) - neg_q) / std::pow(3.0, s.q) + neg_q;
          out.value = s.root(bracket) * n / (s.len * std::pow(e, 1.0 / s.q));
          break;
        }
        case NormVariant::Kind::L1:
          out.value = (2.0 / 3.0 + std::abs(s.len / 2.0 - 1.0 / 3.0)) * n / 8.0;
          break;
      }
      return out;
    }

    case CatalogCase::MidpointFamily: {
      out.x = iv.midpoint();
      out.alpha = out.beta = 1.0;
      const Sym s(iv, 1.0, 1.0, args.h, out.x, v);
      const double h = args.h;
      switch (v.kind()) {
        case NormVariant::Kind::Sup:
          out.value = std::pow(1.0 - h, 3.0) * s.len * s.len / 24.0 * n;
          break;
        case NormVariant::Kind::Lp: {
          const double e = 2.0 * s.q + 1.0;
          const double scale = std::pow(2.0, s.q) / s.qth(s.len);
          const double inner = signed_pow(s.len / 2.0 * (1.0 - h), e);
          const double neg_off = signed_pow(h * (s.a - s.b) / 2.0, e);
          const double bracket = scale * (inner - neg_off) + scale * (neg_off - inner);
          out.value = s.root(bracket) * n / (4.0 * std::pow(e, 1.0 / s.q));
          break;
        }
        case NormVariant::Kind::L1:
          out.value = (s.len * (1.0 - 2.0 * h) + 2.0 * h * h) * n / 8.0;
          break;
      }
      return out;
    }
  }
  throw UnknownCase("unhandled catalog case");
}

double catalog_oracle_factor(const CatalogValue& v, const Interval& iv,
                             const NormVariant& variant) {
  const KernelConfig cfg(iv, Weights(v.alpha, v.beta), v.h, v.x);
  if (v.derivative_order == 2) return oracle_kernel_factor(cfg, variant);
  switch (variant.kind()) {
    case NormVariant::Kind::Sup:
      return linear_kernel_abs_moment(cfg, 1.0);
    case NormVariant::Kind::Lp: {
      const double q = variant.q();
      return std::pow(linear_kernel_abs_moment(cfg, q), 1.0 / q);
    }
    case NormVariant::Kind::L1:
      return linear_kernel_sup_abs(cfg);
  }
  return 0.0;
}

double gruss_bound(double phi_low, double phi_cap, double gamma_low, double gamma_cap) {
  if (!(phi_low <= phi_cap) || !(gamma_low <= gamma_cap)) {
    throw InvalidArgument("gruss_bound requires phi_low <= phi_cap and gamma_low <= gamma_cap");
  }
  return 0.25 * (phi_cap - phi_low) * (gamma_cap - gamma_low);
}

double chebyshev_bound(double f1_sup, double g1_sup, const Interval& iv) {
  if (!(f1_sup >= 0.0) || !(g1_sup >= 0.0)) {
    throw InvalidArgument("chebyshev_bound requires non-negative sup norms");
  }
  return iv.width() * iv.width() / 12.0 * f1_sup * g1_sup;
}

CurvatureSummary summarize_curvature(const FunctionModel& fm, const Interval& iv) {
  CurvatureSummary c;
  c.kappa = secant_slope_kappa(fm, iv);
  c.l2_squared = norm_f2_power(fm, iv, 2.0);
  const auto& f2 = fm.f2;
  const double kappa = c.kappa;
  c.centered_variance = reference_integrate(
                            [&](double t) {
                              const double d = f2(t) - kappa;
                              return d * d;
                            },
                            iv, 1e-12 * iv.width()) /
                        iv.width();
  c.range = f2_range(fm, iv);
  return c;
}

PerturbedReport perturbed_bound(const KernelConfig& cfg, double tau, const CurvatureSummary& c) {
  const double len = cfg.interval().width();
  const KernelStats ks = kernel_stats(cfg);

  PerturbedReport r;
  r.kappa = c.kappa;
  r.lhs = std::abs(tau - ks.integral * c.kappa);
  r.n_of_x = std::sqrt(std::max(0.0, ks.square_integral / len - ks.mean * ks.mean));

  const double m2 = c.l2_squared / len;
  const double radicand = m2 - c.kappa * c.kappa;
  if (radicand < -1e-12 * std::max(1.0, m2)) {
    std::ostringstream os;
    os << "variance of f'' is negative (" << radicand << "); norm or slope is inconsistent";
    throw Error(os.str());
  }
  r.variance = std::max(0.0, radicand);
  // Same quantity as the radicand (M(f'') = kappa), computed without the
  // cancellation that leaves ~1e-8 noise under the square root.
  r.bound_first = len * r.n_of_x * std::sqrt(std::max(0.0, c.centered_variance));

  r.phi_cap = ks.sup;
  r.phi_low = ks.inf;
  r.gamma_low = c.range.lo;
  r.gamma_cap = c.range.hi;
  r.bound_gruss = len * gruss_bound(r.phi_low, r.phi_cap, r.gamma_low, r.gamma_cap);
  return r;
}

PerturbedReport perturbed_bound(const FunctionModel& fm, const KernelConfig& cfg) {
  return perturbed_bound(cfg, tau_main(fm, cfg).total, summarize_curvature(fm, cfg.interval()));
}

double n_of_x_paper(const KernelConfig& cfg) {
  const Sym s(cfg.interval(), cfg.weights().alpha(), cfg.weights().beta(), cfg.h(), cfg.x(),
              NormVariant::sup());
  const double sum = s.al + s.be;
  const double h5 = std::pow(s.off, 5.0);
  const double quartic =
      (s.al * s.al / ((s.x - s.a) * (s.x - s.a)) * (signed_pow(s.x - s.c1(), 5.0) + h5) +
       s.be * s.be / ((s.b - s.x) * (s.b - s.x)) * (h5 - signed_pow(s.x - s.c2(), 5.0))) /
      (20.0 * sum * sum);
  const double mean_term = printed_cubic_bracket(s) / (6.0 * s.len * sum);
  return std::sqrt(std::max(0.0, quartic - mean_term * mean_term));
}

}  // namespace oqb

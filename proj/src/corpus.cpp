#include "oqb/corpus.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "oqb/error.hpp"
#include "oqb/numeric.hpp"

namespace oqb {

Interval::Interval(double a, double b) : a_(a), b_(b) {
  if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) {
    std::ostringstream os;
    os << "interval requires finite a < b, got [" << a << ", " << b << "]";
    throw InvalidArgument(os.str());
  }
}

NormVariant NormVariant::lp(double p) {
  if (!std::isfinite(p) || !(p > 1.0)) {
    throw InvalidArgument("Lp norm requires finite p > 1");
  }
  return NormVariant(Kind::Lp, p);
}

NormVariant NormVariant::parse(std::string_view text) {
  std::string s(text);
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (s == "sup" || s == "linf") return sup();
  if (s == "l1") return l1();
  std::string_view digits;
  if (s.rfind("lp:", 0) == 0) {
    digits = std::string_view(s).substr(3);
  } else if (s.size() > 1 && s[0] == 'l') {
    digits = std::string_view(s).substr(1);
  } else {
    throw InvalidArgument("unknown norm variant '" + std::string(text) + "'");
  }
  double p = 0.0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), p);
  if (ec != std::errc() || ptr != digits.data() + digits.size()) {
    throw InvalidArgument("unknown norm variant '" + std::string(text) + "'");
  }
  return lp(p);
}

std::string NormVariant::name() const {
  switch (kind_) {
    case Kind::Sup:
      return "Linf";
    case Kind::L1:
      return "L1";
    case Kind::Lp:
      break;
  }
  std::ostringstream os;
  os << "Lp(" << p_ << ")";
  return os.str();
}

std::vector<NormVariant> default_variants() {
  return {NormVariant::sup(), NormVariant::lp(2.0), NormVariant::lp(3.0), NormVariant::l1()};
}

double default_tolerance(const Interval& iv) noexcept {
  return kDefaultTolPerUnitLength * iv.width();
}

namespace {

// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1].
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

double checked(const RealFn& g, double t) {
  const double v = g(t);
  if (!std::isfinite(v)) {
    std::ostringstream os;
    os << "integrand is not finite at t = " << t;
    throw NonFinite(os.str());
  }
  return v;
}

struct Gk15 {
  double kronrod;
  double gauss;
  double abs_sum;
};

Gk15 gk15(const RealFn& g, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = checked(g, center);
  double resk = fc * kWgk[7];
  double resg = fc * kWg[3];
  double resabs = std::abs(resk);
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = checked(g, center - dx);
    const double f2 = checked(g, center + dx);
    resk += kWgk[j] * (f1 + f2);
    resabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
  }
  return {resk * half, resg * half, resabs * std::abs(half)};
}

struct AdaptiveState {
  const RealFn& g;
  double tol_per_width;
  int max_depth;
};

double integrate_piece(const AdaptiveState& st, double lo, double hi, int depth) {
  const Gk15 r = gk15(st.g, lo, hi);
  const double err = std::abs(r.kronrod - r.gauss);
  const double local_tol = st.tol_per_width * (hi - lo);
  const double roundoff = 50.0 * std::numeric_limits<double>::epsilon() * r.abs_sum;
  if (err <= local_tol || err <= roundoff) return r.kronrod;
  if (depth >= st.max_depth) {
    std::ostringstream os;
    os << "reference integrator exceeded depth " << st.max_depth << " near [" << lo << ", " << hi
       << "]";
    throw NoConvergence(os.str());
  }
  const double mid = 0.5 * (lo + hi);
  if (!(lo < mid && mid < hi)) return r.kronrod;  // cannot split further in floating point
  const double left = integrate_piece(st, lo, mid, depth + 1);
  const double right = integrate_piece(st, mid, hi, depth + 1);
  return left + right;
}

}  // namespace

double reference_integrate(const RealFn& g, const Interval& iv, double tol, int max_depth) {
  if (!(tol > 0.0)) throw InvalidArgument("integration tolerance must be positive");
  const AdaptiveState st{g, tol / iv.width(), max_depth};
  return integrate_piece(st, iv.a(), iv.b(), 0);
}

double reference_integrate(const RealFn& g, const Interval& iv, std::span<const double> breakpoints,
                           double tol, int max_depth) {
  if (!(tol > 0.0)) throw InvalidArgument("integration tolerance must be positive");
  std::vector<double> cuts{iv.a()};
  std::vector<double> inner;
  for (double c : breakpoints) {
    if (iv.a() < c && c < iv.b()) inner.push_back(c);
  }
  std::sort(inner.begin(), inner.end());
  inner.erase(std::unique(inner.begin(), inner.end()), inner.end());
  cuts.insert(cuts.end(), inner.begin(), inner.end());
  cuts.push_back(iv.b());

  const AdaptiveState st{g, tol / iv.width(), max_depth};
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    total += integrate_piece(st, cuts[i], cuts[i + 1], 0);
  }
  return total;
}

double integrate_model(const FunctionModel& fm, const Interval& iv) {
  if (fm.exact_integral) return fm.exact_integral(iv.a(), iv.b());
  return reference_integrate(fm.f, iv, default_tolerance(iv));
}

double sampled_max(const RealFn& g, const Interval& iv, int samples, int golden_iterations) {
  if (samples < 2) throw InvalidArgument("sampled_max needs at least two samples");
  const double a = iv.a();
  const double step = iv.width() / (samples - 1);
  int best = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    const double t = (i == samples - 1) ? iv.b() : a + step * i;
    const double v = checked(g, t);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }

  double lo = a + step * std::max(best - 1, 0);
  double hi = (best + 1 >= samples - 1) ? iv.b() : a + step * (best + 1);
  constexpr double kInvPhi = 0.6180339887498948482;
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double g1 = checked(g, x1);
  double g2 = checked(g, x2);
  for (int it = 0; it < golden_iterations; ++it) {
    if (g1 < g2) {
      lo = x1;
      x1 = x2;
      g1 = g2;
      x2 = lo + kInvPhi * (hi - lo);
      g2 = checked(g, x2);
    } else {
      hi = x2;
      x2 = x1;
      g2 = g1;
      x1 = hi - kInvPhi * (hi - lo);
      g1 = checked(g, x1);
    }
  }
  return std::max({best_value, g1, g2});
}

double norm_f2_power(const FunctionModel& fm, const Interval& iv, double p) {
  if (!(p >= 1.0)) throw InvalidArgument("norm exponent must be >= 1");
  if (fm.exact_norm) {
    const NormVariant v = (p == 1.0) ? NormVariant::l1() : NormVariant::lp(p);
    const double n = fm.exact_norm(iv, v);
    if (!std::isfinite(n)) throw NonFinite("exact norm of f'' is not finite for " + fm.id);
    return std::pow(n, p);
  }
  const auto& f2 = fm.f2;
  if (p == 1.0) {
    return reference_integrate([&](double t) { return std::abs(f2(t)); }, iv,
                               default_tolerance(iv));
  }
  return reference_integrate([&](double t) { return std::pow(std::abs(f2(t)), p); }, iv,
                             default_tolerance(iv));
}

double norm_f2(const FunctionModel& fm, const Interval& iv, const NormVariant& v) {
  if (fm.exact_norm) {
    const double n = fm.exact_norm(iv, v);
    if (!std::isfinite(n)) throw NonFinite("exact norm of f'' is not finite for " + fm.id);
    return n;
  }
  switch (v.kind()) {
    case NormVariant::Kind::Sup: {
      const auto& f2 = fm.f2;
      return sampled_max([&](double t) { return std::abs(f2(t)); }, iv);
    }
    case NormVariant::Kind::L1:
      return norm_f2_power(fm, iv, 1.0);
    case NormVariant::Kind::Lp:
      return std::pow(norm_f2_power(fm, iv, v.p()), 1.0 / v.p());
  }
  return 0.0;
}

Range f2_range(const FunctionModel& fm, const Interval& iv) {
  const auto& f2 = fm.f2;
  const double hi = sampled_max(f2, iv);
  const double lo = -sampled_max([&](double t) { return -f2(t); }, iv);
  return {lo, hi};
}

namespace {

double lp_from_power(double power, double p) { return std::pow(power, 1.0 / p); }

FunctionModel make_linear() {
  FunctionModel m;
  m.id = "lin";
  m.f = [](double t) { return 2.0 * t + 1.0; };
  m.f1 = [](double) { return 2.0; };
  m.f2 = [](double) { return 0.0; };
  m.exact_integral = [](double lo, double hi) { return (hi - lo) * (hi + lo + 1.0); };
  m.exact_norm = [](const Interval&, const NormVariant&) { return 0.0; };
  return m;
}

FunctionModel make_square() {
  FunctionModel m;
  m.id = "sq";
  m.f = [](double t) { return t * t; };
  m.f1 = [](double t) { return 2.0 * t; };
  m.f2 = [](double) { return 2.0; };
  m.exact_integral = [](double lo, double hi) {
    return (hi - lo) * (hi * hi + hi * lo + lo * lo) / 3.0;
  };
  m.exact_norm = [](const Interval& iv, const NormVariant& v) {
    switch (v.kind()) {
      case NormVariant::Kind::Sup:
        return 2.0;
      case NormVariant::Kind::L1:
        return 2.0 * iv.width();
      case NormVariant::Kind::Lp:
        break;
    }
    return 2.0 * std::pow(iv.width(), 1.0 / v.p());
  };
  return m;
}

FunctionModel make_cube() {
  FunctionModel m;
  m.id = "cube";
  m.f = [](double t) { return t * t * t; };
  m.f1 = [](double t) { return 3.0 * t * t; };
  m.f2 = [](double t) { return 6.0 * t; };
  m.exact_integral = [](double lo, double hi) {
    return (hi - lo) * (hi + lo) * (hi * hi + lo * lo) / 4.0;
  };
  m.exact_norm = [](const Interval& iv, const NormVariant& v) {
    const double a = iv.a();
    const double b = iv.b();
    switch (v.kind()) {
      case NormVariant::Kind::Sup:
        return 6.0 * std::max(std::abs(a), std::abs(b));
      case NormVariant::Kind::L1:
        return 3.0 * (signed_pow(b, 2.0) - signed_pow(a, 2.0));
      case NormVariant::Kind::Lp:
        break;
    }
    const double p = v.p();
    const double power =
        std::pow(6.0, p) * (signed_pow(b, p + 1.0) - signed_pow(a, p + 1.0)) / (p + 1.0);
    return lp_from_power(power, p);
  };
  return m;
}

FunctionModel make_exp() {
  FunctionModel m;
  m.id = "exp";
  m.f = [](double t) { return std::exp(t); };
  m.f1 = m.f;
  m.f2 = m.f;
  m.exact_integral = [](double lo, double hi) { return std::exp(lo) * std::expm1(hi - lo); };
  m.exact_norm = [](const Interval& iv, const NormVariant& v) {
    const double a = iv.a();
    const double b = iv.b();
    switch (v.kind()) {
      case NormVariant::Kind::Sup:
        return std::exp(b);
      case NormVariant::Kind::L1:
        return std::exp(a) * std::expm1(b - a);
      case NormVariant::Kind::Lp:
        break;
    }
    const double p = v.p();
    return lp_from_power(std::exp(p * a) * std::expm1(p * (b - a)) / p, p);
  };
  return m;
}

FunctionModel make_sin3() {
  FunctionModel m;
  m.id = "sin3";
  m.f = [](double t) { return std::sin(3.0 * t); };
  m.f1 = [](double t) { return 3.0 * std::cos(3.0 * t); };
  m.f2 = [](double t) { return -9.0 * std::sin(3.0 * t); };
  m.exact_integral = [](double lo, double hi) {
    // cos(3lo) - cos(3hi) = 2 sin(3(lo+hi)/2) sin(3(hi-lo)/2)
    return 2.0 * std::sin(1.5 * (lo + hi)) * std::sin(1.5 * (hi - lo)) / 3.0;
  };
  return m;
}

FunctionModel make_runge() {
  FunctionModel m;
  m.id = "runge";
  m.f = [](double t) { return 1.0 / (1.0 + t * t); };
  m.f1 = [](double t) {
    const double d = 1.0 + t * t;
    return -2.0 * t / (d * d);
  };
  m.f2 = [](double t) {
    const double d = 1.0 + t * t;
    return (6.0 * t * t - 2.0) / (d * d * d);
  };
  m.exact_integral = [](double lo, double hi) {
    // atan(hi) - atan(lo) without cancellation for nearby arguments
    return std::atan2(hi - lo, 1.0 + hi * lo);
  };
  return m;
}

FunctionModel make_log1p() {
  FunctionModel m;
  m.id = "log1p";
  m.f = [](double t) { return t > -1.0 ? std::log1p(t) : std::numeric_limits<double>::quiet_NaN(); };
  m.f1 = [](double t) { return 1.0 / (1.0 + t); };
  m.f2 = [](double t) {
    const double d = 1.0 + t;
    return -1.0 / (d * d);
  };
  m.exact_integral = [](double lo, double hi) {
    // (1+t)log(1+t) - t differenced without cancellation.
    const double u = 1.0 + lo;
    const double d = hi - lo;
    return d * (std::log1p(hi) - 1.0) + u * std::log1p(d / u);
  };
  m.exact_norm = [](const Interval& iv, const NormVariant& v) {
    const double ua = 1.0 + iv.a();
    const double ub = 1.0 + iv.b();
    if (!(ua > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    switch (v.kind()) {
      case NormVariant::Kind::Sup:
        return 1.0 / (ua * ua);
      case NormVariant::Kind::L1:
        return (ub - ua) / (ua * ub);
      case NormVariant::Kind::Lp:
        break;
    }
    const double p = v.p();
    const double power = (std::pow(ua, 1.0 - 2.0 * p) - std::pow(ub, 1.0 - 2.0 * p)) / (2.0 * p - 1.0);
    return lp_from_power(power, p);
  };
  return m;
}

const std::vector<FunctionModel>& registry() {
  static const std::vector<FunctionModel> models = {
      make_square(), make_cube(), make_exp(),   make_sin3(),
      make_runge(),  make_log1p(), make_linear()};
  return models;
}

}  // namespace

std::vector<FunctionModel> default_corpus() { return registry(); }

const FunctionModel& find_model(std::string_view id) {
  for (const auto& m : registry()) {
    if (m.id == id) return m;
  }
  throw InvalidArgument("unknown function model '" + std::string(id) + "'");
}

std::vector<std::string> model_ids() {
  std::vector<std::string> ids;
  for (const auto& m : registry()) ids.push_back(m.id);
  return ids;
}

ModelCheck check_model(const FunctionModel& fm, const Interval& iv, int points,
                       std::uint64_t seed) {
  ModelCheck out;
  const double step_scale = std::cbrt(std::numeric_limits<double>::epsilon());
  const double margin = 0.01 * iv.width();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pick(iv.a() + margin, iv.b() - margin);

  const auto central = [](const RealFn& g, double t, double h) {
    return (g(t + h) - g(t - h)) / (2.0 * h);
  };
  for (int i = 0; i < points; ++i) {
    const double t = pick(rng);
    const double h = step_scale * std::max(1.0, std::abs(t));
    const double d1 = fm.f1(t);
    const double d2 = fm.f2(t);
    const double e1 = std::abs(d1 - central(fm.f, t, h)) / std::max(1.0, std::abs(d1));
    const double e2 = std::abs(d2 - central(fm.f1, t, h)) / std::max(1.0, std::abs(d2));
    if (!std::isfinite(e1) || !std::isfinite(e2)) {
      out.ok = false;
      out.message = "non-finite derivative check for " + fm.id;
      return out;
    }
    out.max_f1_error = std::max(out.max_f1_error, e1);
    out.max_f2_error = std::max(out.max_f2_error, e2);
  }
  if (out.max_f1_error > 1e-6) {
    out.ok = false;
    out.message += fm.id + ": f1 disagrees with central differences of f; ";
  }
  if (out.max_f2_error > 1e-6) {
    out.ok = false;
    out.message += fm.id + ": f2 disagrees with central differences of f1; ";
  }
  if (fm.exact_integral) {
    const double ref = reference_integrate(fm.f, iv, 1e-12 * iv.width());
    const double exact = fm.exact_integral(iv.a(), iv.b());
    out.integral_error = std::abs(exact - ref) / std::max(1.0, std::abs(ref));
    if (!(out.integral_error <= 1e-10)) {
      out.ok = false;
      out.message += fm.id + ": exact_integral disagrees with the reference integrator; ";
    }
  }
  return out;
}

}  // namespace oqb

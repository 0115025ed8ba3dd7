#include "oqb/quadrule.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <tuple>
#include <vector>

#include "oqb/bounds.hpp"
#include "oqb/kernel.hpp"

namespace oqb {

namespace {

void require_offset(double h) {
  if (!std::isfinite(h) || h < 0.0 || h > 1.0) throw InvalidArgument("h must lie in [0, 1]");
}

struct Panel {
  double lo;
  double hi;
  QuadratureCertificate cert;
};

QuadratureCertificate sum_panels(std::vector<Panel> panels, double h, const NormVariant& v) {
  std::sort(panels.begin(), panels.end(),
            [](const Panel& l, const Panel& r) { return l.lo < r.lo; });
  QuadratureCertificate out;
  out.norm_used = v;
  out.h = h;
  out.n_panels = static_cast<int>(panels.size());
  for (const Panel& p : panels) {
    out.estimate += p.cert.estimate;
    out.error_bound += p.cert.error_bound;
    out.norm_value = std::max(out.norm_value, p.cert.norm_value);
  }
  return out;
}

}  // namespace

QuadratureCertificate single_panel(const FunctionModel& fm, const Interval& iv, double h,
                                   const NormVariant& variant) {
  require_offset(h);
  const double a = iv.a();
  const double b = iv.b();
  const double len = iv.width();
  const double mid = iv.midpoint();

  QuadratureCertificate c;
  c.h = h;
  c.n_panels = 1;
  c.norm_used = variant;
  double mean = (1.0 - h) * fm.f(mid);
  if (h > 0.0) {
    mean += 0.5 * h * (fm.f(a) + fm.f(b)) - h * h * len / 8.0 * (fm.f1(b) - fm.f1(a));
  }
  c.estimate = len * mean;
  c.norm_value = norm_f2(fm, iv, variant);
  const KernelConfig cfg(iv, Weights(1.0, 1.0), h, mid);
  c.error_bound = c.norm_value == 0.0 ? 0.0 : len * c.norm_value * oracle_kernel_factor(cfg, variant);
  return c;
}

QuadratureCertificate composite(const FunctionModel& fm, const Interval& iv, int n_panels,
                                double h, const NormVariant& variant) {
  if (n_panels < 1) throw InvalidArgument("composite requires at least one panel");
  require_offset(h);
  std::vector<Panel> panels;
  panels.reserve(static_cast<std::size_t>(n_panels));
  const double step = iv.width() / n_panels;
  for (int i = 0; i < n_panels; ++i) {
    const double lo = iv.a() + step * i;
    const double hi = i + 1 == n_panels ? iv.b() : iv.a() + step * (i + 1);
    panels.push_back({lo, hi, single_panel(fm, Interval(lo, hi), h, variant)});
  }
  return sum_panels(std::move(panels), h, variant);
}

QuadratureCertificate adaptive(const FunctionModel& fm, const Interval& iv, double target_error,
                               double h, const NormVariant& variant, int max_panels) {
  if (!(target_error > 0.0) || !std::isfinite(target_error)) {
    throw InvalidArgument("target_error must be positive and finite");
  }
  require_offset(h);
  max_panels = std::clamp(max_panels, 1, kMaxAdaptivePanels);

  std::vector<Panel> panels;
  // (-error, lo, index): largest error first, leftmost on ties.
  std::set<std::tuple<double, double, std::size_t>> queue;
  auto push = [&](double lo, double hi) {
    panels.push_back({lo, hi, single_panel(fm, Interval(lo, hi), h, variant)});
    const std::size_t idx = panels.size() - 1;
    queue.emplace(-panels[idx].cert.error_bound, lo, idx);
  };
  push(iv.a(), iv.b());

  double running = panels[0].cert.error_bound;
  for (;;) {
    if (running <= target_error) {
      // Confirm with the order-fixed sum; the running total is only a guide.
      QuadratureCertificate cur = sum_panels(panels, h, variant);
      if (cur.error_bound <= target_error) return cur;
    }
    if (static_cast<int>(panels.size()) >= max_panels) {
      QuadratureCertificate cur = sum_panels(panels, h, variant);
      std::ostringstream os;
      os << "adaptive quadrature reached " << cur.n_panels << " panels with error bound "
         << cur.error_bound << " > target " << target_error;
      throw BudgetExceeded(os.str(), cur);
    }
    const auto top = *queue.begin();
    queue.erase(queue.begin());
    const std::size_t idx = std::get<2>(top);
    const double lo = panels[idx].lo;
    const double hi = panels[idx].hi;
    const double mid = 0.5 * (lo + hi);
    if (!(lo < mid && mid < hi)) {
      throw BudgetExceeded("adaptive quadrature cannot bisect a panel further",
                           sum_panels(panels, h, variant));
    }
    running -= panels[idx].cert.error_bound;
    panels[idx] = {lo, mid, single_panel(fm, Interval(lo, mid), h, variant)};
    queue.emplace(-panels[idx].cert.error_bound, lo, idx);
    running += panels[idx].cert.error_bound;
    push(mid, hi);
    running += panels.back().cert.error_bound;
  }
}

}  // namespace oqb

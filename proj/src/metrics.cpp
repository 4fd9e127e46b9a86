#include "bandcov/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "bandcov/moments.hpp"

namespace bandcov {

StepCDF::StepCDF(std::vector<double> points, std::vector<double> masses) {
  if (points.empty() || points.size() != masses.size())
    throw std::invalid_argument("StepCDF: need matching nonempty points and masses");
  std::vector<size_t> idx(points.size());
  std::iota(idx.begin(), idx.end(), size_t{0});
  std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return points[a] < points[b]; });

  double total = 0.0;
  for (size_t k : idx) {
    if (!(masses[k] > 0.0) || !std::isfinite(points[k]))
      throw std::invalid_argument("StepCDF: masses must be positive and points finite");
    if (!x_.empty() && points[k] == x_.back()) {
      total += masses[k];
      c_.back() = total;
    } else {
      total += masses[k];
      x_.push_back(points[k]);
      c_.push_back(total);
    }
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw std::invalid_argument("StepCDF: masses must sum to 1");
  for (double& c : c_) c /= total;  // remove rounding drift; c_ ends exactly at 1
  c_.back() = 1.0;
}

StepCDF StepCDF::from_samples(std::vector<double> samples) {
  if (samples.empty()) throw std::invalid_argument("StepCDF: no samples");
  std::vector<double> masses(samples.size(), 1.0 / static_cast<double>(samples.size()));
  return StepCDF(std::move(samples), std::move(masses));
}

double StepCDF::operator()(double x) const {
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  if (it == x_.begin()) return 0.0;
  return c_[static_cast<size_t>(it - x_.begin()) - 1];
}

double StepCDF::left_limit(double x) const {
  auto it = std::lower_bound(x_.begin(), x_.end(), x);
  if (it == x_.begin()) return 0.0;
  return c_[static_cast<size_t>(it - x_.begin()) - 1];
}

double kolmogorov_distance(const StepCDF& f, const StepCDF& g) {
  const auto& xf = f.points();
  const auto& xg = g.points();
  size_t i = 0, j = 0;
  double cf = 0.0, cg = 0.0, best = 0.0;
  while (i < xf.size() || j < xg.size()) {
    double x;
    if (j == xg.size() || (i < xf.size() && xf[i] <= xg[j]))
      x = xf[i];
    else
      x = xg[j];
    while (i < xf.size() && xf[i] == x) cf = f.cumulative()[i++];
    while (j < xg.size() && xg[j] == x) cg = g.cumulative()[j++];
    best = std::max(best, std::abs(cf - cg));
  }
  return best;
}

namespace {

// one-sided check: F(a) <= G(a + eps) + eps at every jump a of F
bool dominated_within(const StepCDF& f, const StepCDF& g, double eps) {
  const auto& xs = f.points();
  const auto& cs = f.cumulative();
  for (size_t k = 0; k < xs.size(); ++k)
    if (cs[k] > g(xs[k] + eps) + eps) return false;
  return true;
}

bool levy_ok(const StepCDF& f, const StepCDF& g, double eps) {
  return dominated_within(f, g, eps) && dominated_within(g, f, eps);
}

}  // namespace

double levy_distance(const StepCDF& f, const StepCDF& g) {
  double hi = kolmogorov_distance(f, g);
  if (hi == 0.0 || levy_ok(f, g, 0.0)) return 0.0;
  double lo = 0.0;
  while (hi - lo > 1e-12) {
    double mid = 0.5 * (lo + hi);
    if (levy_ok(f, g, mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

std::vector<MomentRow> moment_report(std::span<const double> empirical, double gamma) {
  std::vector<MomentRow> rows;
  rows.reserve(empirical.size());
  for (size_t k = 0; k < empirical.size(); ++k) {
    int l = static_cast<int>(k) + 1;
    MomentPolynomial poly = limit_moment_polynomial(l);
    MomentRow row;
    row.order = l;
    row.empirical = empirical[k];
    row.theory_d_over_n = poly.at(gamma);
    row.theory_2d_over_n = poly.at(2.0 * gamma);
    row.rel_err_d_over_n = row.empirical / row.theory_d_over_n - 1.0;
    row.rel_err_2d_over_n = row.empirical / row.theory_2d_over_n - 1.0;
    rows.push_back(row);
  }
  return rows;
}

std::string format_moment_report(const std::vector<MomentRow>& rows) {
  std::ostringstream os;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%3s %14s %14s %14s %11s %11s\n", "l", "empirical",
                "m(d/n)", "m(2d/n)", "err(d/n)", "err(2d/n)");
  os << buf;
  for (const MomentRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%3d %14.8g %14.8g %14.8g %+10.4f%% %+10.4f%%\n",
                  r.order, r.empirical, r.theory_d_over_n, r.theory_2d_over_n,
                  100.0 * r.rel_err_d_over_n, 100.0 * r.rel_err_2d_over_n);
    os << buf;
  }
  return os.str();
}

std::string moment_report_csv(const std::vector<MomentRow>& rows) {
  std::ostringstream os;
  os << "l,empirical,theory_d_over_n,theory_2d_over_n,rel_err_d_over_n,rel_err_2d_over_n\n";
  char buf[200];
  for (const MomentRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.order,
                  r.empirical, r.theory_d_over_n, r.theory_2d_over_n, r.rel_err_d_over_n,
                  r.rel_err_2d_over_n);
    os << buf;
  }
  return os.str();
}

}  // namespace bandcov

#pragma once

#include <span>
#include <string>
#include <vector>

namespace bandcov {

// Right-continuous step CDF with finitely many jumps; total mass 1.
class StepCDF {
 public:
  StepCDF() = default;
  // points need not be sorted; duplicate points merge their masses.
  StepCDF(std::vector<double> points, std::vector<double> masses);
  static StepCDF from_samples(std::vector<double> samples);

  double operator()(double x) const;   // P(X <= x)
  double left_limit(double x) const;   // P(X < x)

  const std::vector<double>& points() const { return x_; }
  const std::vector<double>& cumulative() const { return c_; }

 private:
  std::vector<double> x_;
  std::vector<double> c_;
};

// sup_x |F(x) - G(x)|, evaluated exactly over the merged jump set.
double kolmogorov_distance(const StepCDF& f, const StepCDF& g);

// inf{eps > 0 : F(x-eps)-eps <= G(x) <= F(x+eps)+eps for all x}, found by
// bisection to absolute tolerance 1e-12.  Never exceeds the Kolmogorov
// distance.
double levy_distance(const StepCDF& f, const StepCDF& g);

// Side-by-side comparison of empirical moments with the limiting moment
// polynomial under the two bandwidth-ratio conventions: evaluated at
// gamma = d/n and at 2*gamma = 2d/n.
struct MomentRow {
  int order = 0;
  double empirical = 0.0;
  double theory_d_over_n = 0.0;
  double theory_2d_over_n = 0.0;
  double rel_err_d_over_n = 0.0;
  double rel_err_2d_over_n = 0.0;
};

std::vector<MomentRow> moment_report(std::span<const double> empirical, double gamma);
std::string format_moment_report(const std::vector<MomentRow>& rows);  // aligned text
std::string moment_report_csv(const std::vector<MomentRow>& rows);

}  // namespace bandcov

// Acceptance gate: ten end-to-end checks over the whole library, one
// pass/fail line each.  Run with no arguments for the full battery or pass
// criterion numbers to run a subset, e.g. `bandcov_acceptance 7 9`.
//
// Tolerances and sizes are pinned here on purpose; loosening them is a
// library regression, not a test tweak.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bandcov/combinatorics.hpp"
#include "bandcov/linalg.hpp"
#include "bandcov/metrics.hpp"
#include "bandcov/moments.hpp"
#include "bandcov/oracle.hpp"
#include "bandcov/rng.hpp"
#include "bandcov/simulate.hpp"

using namespace bandcov;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double elapsed_s(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

BigRational rabs(const BigRational& v) { return v < 0 ? BigRational(-v) : v; }

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

// ---- 1. restricted composition counts ------------------------------------

Outcome criterion_compositions() {
  auto t0 = std::chrono::steady_clock::now();
  long long cells = 0, mismatches = 0;
  for (long long n = 1; n <= 24; ++n)
    for (int k = 1; k <= 6; ++k)
      for (long long m = 1; m <= 8; ++m) {
        ++cells;
        long long seen = 0;
        enumerate_restricted_compositions(n, k, m, [&](const std::vector<int>&) { ++seen; });
        if (BigInt(seen) != count_restricted_compositions(n, k, m)) ++mismatches;
        // reflection symmetry of the closed form
        if (count_restricted_compositions(n, k, m) !=
            count_restricted_compositions(k * (m + 1) - n, k, m))
          ++mismatches;
      }
  double sec = elapsed_s(t0);
  Outcome o;
  o.pass = mismatches == 0 && sec < 1.0;
  o.detail = fmt("%lld cells, %lld mismatches, %.3f s (limit 1 s)", cells, mismatches, sec);
  return o;
}

// ---- 2. plane tree census and walk codec ----------------------------------

Outcome criterion_tree_census() {
  auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  long long total = 0;
  for (int l = 1; l <= 12; ++l) {
    std::map<int, BigInt> by_r;
    long long count = 0;
    bool codec_ok = true;
    enumerate_plane_trees(l, [&](const PlaneTree& t) {
      ++count;
      ++by_r[t.excess()];
      if (tree_from_walk(canonical_walk(t)) != t) codec_ok = false;
    });
    total += count;
    BigInt catalan = binomial(2 * l, l) / (l + 1);
    if (BigInt(count) != catalan) ok = false;
    for (int r = 0; r < l; ++r) {
      BigInt want = binomial(l, r) * binomial(l - 1, r) / (r + 1);
      BigInt got = by_r.count(r) ? by_r[r] : BigInt(0);
      if (got != want) ok = false;
    }
    if (!codec_ok) ok = false;
  }
  double sec = elapsed_s(t0);
  Outcome o;
  o.pass = ok && sec < 10.0;
  o.detail = fmt("%lld trees through l=12, roundtrip on all, %.2f s (limit 10 s)", total, sec);
  return o;
}

// ---- 3. degree-factor limit of composition counts --------------------------

Outcome criterion_degree_factor_limit() {
  bool ok = true;
  double worst_final = 0.0;
  for (int D = 2; D <= 5; ++D) {
    BigRational c = degree_factor(D);
    double prev = 1e300;
    for (long long d : {100LL, 1000LL, 10000LL}) {
      BigInt dpow = 1;
      for (int e = 0; e < D - 1; ++e) dpow *= d;
      BigRational ratio = BigRational(count_restricted_compositions(D * d, D, 2 * d)) /
                          (c * BigRational(dpow));
      double dev = std::abs(static_cast<double>(ratio) - 1.0);
      if (!(dev < prev)) ok = false;  // monotone approach along the d grid
      prev = dev;
      if (d == 10000) {
        if (!(dev <= 0.01)) ok = false;
        worst_final = std::max(worst_final, dev);
      }
    }
  }
  Outcome o;
  o.pass = ok;
  o.detail = fmt("worst |ratio-1| at d=1e4: %.2e (limit 1e-2), monotone in d", worst_final);
  return o;
}

// ---- 4. exact-moment oracle and the d/n-vs-2d/n convention -----------------

Outcome criterion_moment_convention() {
  bool ok = true;

  // the first three limiting polynomials, coefficient-exact
  const std::vector<std::vector<BigRational>> want = {{1}, {1, 2}, {1, 6, 3}};
  for (int l = 1; l <= 3; ++l)
    if (limit_moment_polynomial(l).coeffs != want[static_cast<size_t>(l - 1)]) ok = false;

  const std::vector<BigRational> rademacher{1, 1, 1, 1};
  const std::vector<BigRational> normal{1, 3, 15, 105};  // E X^{2h}
  const BigRational half(1, 2);
  const BigRational at_half = limit_moment_polynomial(2).at(half);  // 2
  const BigRational at_one = limit_moment_polynomial(2).at(BigRational(1));  // 3

  // scaled copies of the small (8,8,4) grid: gamma fixed at 1/2, sizes grow
  auto second_order_errs = [&](int p, int n, int d) {
    BigRational m = exact_expected_moment(p, n, d, 2, rademacher);
    return std::pair<BigRational, BigRational>{rabs(m - at_half), rabs(m - at_one)};
  };
  BigRational prev(-1);
  double final_gap = 0.0;
  for (int t : {2, 4, 8}) {
    auto [eg, ey] = second_order_errs(2 * t, 2 * t, t);
    if (!(eg < ey)) ok = false;                    // d/n convention wins
    if (prev >= 0 && !(eg < prev)) ok = false;     // and the gap shrinks
    prev = eg;
    final_gap = static_cast<double>(eg);
  }
  // a second family with d/p -> 0, where the gap vanishes entirely
  prev = -1;
  for (int t : {1, 2, 3}) {
    auto [eg, ey] = second_order_errs(4 * t * t, 2 * t, t);
    if (!(eg < ey)) ok = false;
    if (prev >= 0 && !(eg < prev)) ok = false;
    prev = eg;
  }
  // normal entries at the pinned size, same verdict
  {
    BigRational m = exact_expected_moment(8, 8, 4, 2, normal);
    if (!(rabs(m - at_half) < rabs(m - at_one))) ok = false;
  }
  // third order: gamma value 19/4 versus doubled-ratio value 10
  {
    const BigRational p3_half = limit_moment_polynomial(3).at(half);
    const BigRational p3_one = limit_moment_polynomial(3).at(BigRational(1));
    for (auto [p, n, d] : {std::array<int, 3>{8, 8, 4}, std::array<int, 3>{16, 4, 2}}) {
      BigRational m = exact_expected_moment(p, n, d, 3, rademacher);
      if (!(rabs(m - p3_half) < rabs(m - p3_one))) ok = false;
    }
  }

  Outcome o;
  o.pass = ok;
  o.detail = fmt("m2 gap at (16,16,8): %.4f toward 2, both families shrinking, d/n wins at every size",
                 final_gap);
  return o;
}

// ---- shared Monte Carlo run for 5, 6 and 9 ---------------------------------

struct McRun {
  SimulationConfig cfg;
  std::vector<SpectralSample> samples;
  double seconds = 0.0;
};

const McRun& reference_run() {
  static const McRun run = [] {
    McRun r;
    r.cfg.p = 2000;
    r.cfg.n = 1000;
    r.cfg.d = 100;
    r.cfg.dist = EntryDistribution::Normal;
    r.cfg.replicates = 5;
    r.cfg.seed = 20260814;
    RunOptions opt;
    opt.lmax = 4;
    opt.eigenvalues = true;
    auto t0 = std::chrono::steady_clock::now();
    r.samples = run_ensemble(r.cfg, opt);
    r.seconds = elapsed_s(t0);
    return r;
  }();
  return run;
}

Outcome criterion_mc_moments() {
  const McRun& run = reference_run();
  std::vector<double> avg = averaged_moments(run.samples);
  bool ok = run.seconds < 120.0;
  double errs[4] = {0, 0, 0, 0};
  for (int l = 1; l <= 4; ++l) {
    double theory = limit_moment_polynomial(l).at(0.1);
    errs[l - 1] = std::abs(avg[static_cast<size_t>(l - 1)] - theory) / theory;
    if (!(errs[l - 1] <= 0.03)) ok = false;
  }
  Outcome o;
  o.pass = ok;
  o.detail = fmt("rel err m1..m4: %.2e %.2e %.2e %.2e (limit 3e-2), %.1f s (limit 120 s)",
                 errs[0], errs[1], errs[2], errs[3], run.seconds);
  return o;
}

// ---- 6. support bound -------------------------------------------------------

Outcome criterion_support() {
  const McRun& run = reference_run();
  double lo = 1e300, hi = -1e300;
  for (const SpectralSample& s : run.samples) {
    lo = std::min(lo, s.eigenvalues.front());
    hi = std::max(hi, s.eigenvalues.back());
  }
  double y = 2.0 * run.cfg.d / run.cfg.n;
  double bound = support_bound(y) * 1.15;
  Outcome o;
  o.pass = hi <= bound;
  o.detail = fmt("max eig %.4f <= %.4f = (1+sqrt(%.1f))^2 * 1.15; min eig %.3e (reported only)",
                 hi, bound, y, lo);
  return o;
}

// ---- 7. band eigensolver against a dense reference --------------------------

Outcome criterion_eigensolver() {
  SplitMix64 g(99);
  bool ok = true;
  double worst_eig = 0.0, worst_tr = 0.0;
  for (int rep = 0; rep < 50; ++rep) {
    int p = 2 + static_cast<int>(g.next() % 49);  // 2..50
    int d = static_cast<int>(g.next() % static_cast<std::uint64_t>(p));
    BandedSymmetricMatrix s(p, d);
    for (int i = 0; i < p; ++i)
      for (int j = std::max(0, i - d); j <= i; ++j)
        s.set(i, j, 2.0 * g.uniform01() - 1.0);

    Eigen::MatrixXd a(p, p);
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j) a(i, j) = s.at(i, j);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);

    std::vector<double> ev = eigenvalues(s);
    double scale = std::max(1.0, std::max(std::abs(es.eigenvalues()(0)),
                                          std::abs(es.eigenvalues()(p - 1))));
    double sum = 0.0;
    for (int i = 0; i < p; ++i) {
      double rel = std::abs(ev[static_cast<size_t>(i)] - es.eigenvalues()(i)) / scale;
      worst_eig = std::max(worst_eig, rel);
      if (!(rel <= 1e-8)) ok = false;
      sum += ev[static_cast<size_t>(i)];
    }
    double tr_gap = std::abs(sum - s.trace());
    worst_tr = std::max(worst_tr, tr_gap / p);
    if (!(tr_gap <= 1e-8 * p)) ok = false;
  }
  Outcome o;
  o.pass = ok;
  o.detail = fmt("50 matrices p<=50: worst eig dev %.2e (limit 1e-8), worst trace gap/p %.2e",
                 worst_eig, worst_tr);
  return o;
}

// ---- 8. leading term of the banded labelled census --------------------------

Outcome criterion_leading_term() {
  const std::vector<int> path{1, 1, 0};  // two edges, one sample vertex of degree 2
  bool ok = true;
  double fitted = 0.0;
  std::map<int, double> dev_at_120;
  for (int p : {60, 120})
    for (int d : {3, 6, 12}) {
      auto census = brute_count_banded_trees(p, 3, d, 2);
      BigInt count = census.count(path) ? census[path] : BigInt(0);
      BigInt lead = banded_class_size_leading(p, 3, d, {2}, 1);
      double dev = std::abs(static_cast<double>(BigRational(count, lead)) - 1.0);
      if (!(dev <= 1.0 / d)) ok = false;  // C pinned at 1
      fitted = std::max(fitted, d * dev);
      if (p == 120) dev_at_120[d] = dev;
    }
  // deviation shrinks with d once p dominates d^2 (p = 120 covers d = 12)
  if (!(dev_at_120[3] > dev_at_120[6] && dev_at_120[6] > dev_at_120[12])) ok = false;
  Outcome o;
  o.pass = ok;
  o.detail = fmt("|count/leading - 1| <= %.3f/d over p in {60,120}, d in {3,6,12}; "
                 "decreasing in d at p=120", fitted);
  return o;
}

// ---- 9. distance metrics -----------------------------------------------------

Outcome criterion_metrics() {
  bool ok = true;

  StepCDF e01 = StepCDF::from_samples({0, 1});
  StepCDF e02 = StepCDF::from_samples({0, 2});
  if (kolmogorov_distance(e01, e02) != 0.5) ok = false;
  StepCDF d0 = StepCDF::from_samples({0});
  StepCDF d1 = StepCDF::from_samples({1});
  if (kolmogorov_distance(d0, d1) != 1.0) ok = false;
  StepCDF same = StepCDF::from_samples({1, 2, 2, 5});
  if (kolmogorov_distance(same, same) != 0.0) ok = false;
  if (levy_distance(same, same) != 0.0) ok = false;

  // delta_0 vs delta_{1/2}: 0.5, validated against the grid oracle
  StepCDF dh = StepCDF::from_samples({0.5});
  double lv = levy_distance(d0, dh);
  if (std::abs(lv - 0.5) > 1e-9) ok = false;
  if (std::abs(brute_levy(d0, dh, 1.0 / 1024) - lv) > 1.0 / 1024 + 1e-9) ok = false;

  // d_L <= d_K on random pairs
  SplitMix64 g(1234);
  double worst_excess = 0.0;
  for (int rep = 0; rep < 1000; ++rep) {
    auto draw = [&] {
      std::vector<double> v(1 + g.next() % 8);
      for (double& x : v) x = 4.0 * g.uniform01() - 2.0;
      return StepCDF::from_samples(std::move(v));
    };
    StepCDF f = draw(), h = draw();
    double dl = levy_distance(f, h), dk = kolmogorov_distance(f, h);
    worst_excess = std::max(worst_excess, dl - dk);
    if (dl > dk + 1e-12) ok = false;
  }

  // ESD stability between two independent large replicates
  const McRun& run = reference_run();
  double dk_rep = kolmogorov_distance(StepCDF::from_samples(run.samples[0].eigenvalues),
                                      StepCDF::from_samples(run.samples[1].eigenvalues));
  if (!(dk_rep <= 0.05)) ok = false;

  Outcome o;
  o.pass = ok;
  o.detail = fmt("hand values exact, max d_L - d_K = %.1e over 1000 pairs, replicate d_K %.4f "
                 "(limit 0.05)", worst_excess, dk_rep);
  return o;
}

// ---- 10. desk-scale histogram reproduction -----------------------------------

Outcome criterion_figures() {
  namespace fs = std::filesystem;
  bool ok = true;
  std::string detail;
  fs::create_directories("acceptance_fig");

  struct FigCase {
    int n;
    std::uint64_t seed;
    const char* stem;
  };
  for (const FigCase& fc : {FigCase{360, 31003, "hist_ratio_one_third"},
                            FigCase{180, 31006, "hist_ratio_two_thirds"}}) {
    SimulationConfig cfg;
    cfg.p = 1000;
    cfg.n = fc.n;
    cfg.d = 60;
    cfg.dist = EntryDistribution::Normal;
    cfg.replicates = 5;
    cfg.seed = fc.seed;
    RunOptions opt;
    opt.lmax = 4;
    opt.eigenvalues = true;
    std::vector<SpectralSample> samples = run_ensemble(cfg, opt);

    // moments of the pooled spectrum against the limit at gamma = d/n
    double gamma = static_cast<double>(cfg.d) / cfg.n;
    std::vector<double> pooled;
    for (const SpectralSample& s : samples)
      pooled.insert(pooled.end(), s.eigenvalues.begin(), s.eigenvalues.end());
    double worst = 0.0;
    for (int l = 1; l <= 4; ++l) {
      double m = 0.0;
      for (double x : pooled) m += std::pow(x, l);
      m /= static_cast<double>(pooled.size());
      double theory = limit_moment_polynomial(l).at(gamma);
      double rel = std::abs(m - theory) / theory;
      worst = std::max(worst, rel);
      if (!(rel <= 0.05)) ok = false;
    }

    Histogram h = pooled_histogram(samples, 80);
    double mass = 0.0;
    for (size_t b = 0; b + 1 < h.edges.size(); ++b)
      mass += h.density[b] * (h.edges[b + 1] - h.edges[b]);
    if (std::abs(mass - 1.0) > 1e-9) ok = false;

    std::string inv = fmt("bandcov simulate --p 1000 --n %d --d 60 --dist normal --reps 5 "
                          "--seed %llu --lmax 4 --eig --bins 80 --out acceptance_fig",
                          fc.n, static_cast<unsigned long long>(fc.seed));
    std::ofstream csv("acceptance_fig/" + std::string(fc.stem) + ".csv");
    write_histogram_csv(csv, h, inv);
    std::ofstream js("acceptance_fig/" + std::string(fc.stem) + ".json");
    write_histogram_json(js, h, inv);
    if (!csv || !js) ok = false;

    detail += fmt("%sn=%d: worst rel err %.2e", detail.empty() ? "" : "; ", fc.n, worst);
  }
  Outcome o;
  o.pass = ok;
  o.detail = detail + " (limit 5e-2), histograms under acceptance_fig/";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  struct Entry {
    int id;
    const char* name;
    Outcome (*fn)();
  };
  const Entry entries[] = {
      {1, "restricted composition counts vs exhaustive enumeration", criterion_compositions},
      {2, "plane tree census and walk codec, l <= 12", criterion_tree_census},
      {3, "degree-factor limit of composition counts", criterion_degree_factor_limit},
      {4, "exact moments and the d/n bandwidth convention", criterion_moment_convention},
      {5, "Monte Carlo moment convergence at p=2000", criterion_mc_moments},
      {6, "spectrum inside the Marchenko-Pastur support bound", criterion_support},
      {7, "band eigensolver against dense reference", criterion_eigensolver},
      {8, "leading term of the banded labelled census", criterion_leading_term},
      {9, "Kolmogorov and Levy distances", criterion_metrics},
      {10, "desk-scale spectral histograms", criterion_figures},
  };

  std::set<int> selected;
  for (int a = 1; a < argc; ++a) selected.insert(std::atoi(argv[a]));

  int failed = 0, ran = 0;
  for (const Entry& e : entries) {
    if (!selected.empty() && !selected.count(e.id)) continue;
    ++ran;
    Outcome o;
    try {
      o = e.fn();
    } catch (const std::exception& ex) {
      o.pass = false;
      o.detail = std::string("exception: ") + ex.what();
    }
    std::printf("[%s] %2d %s (%s)\n", o.pass ? "PASS" : "FAIL", e.id, e.name, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d/%d criteria passed\n", ran - failed, ran);
  return failed == 0 ? 0 : 1;
}

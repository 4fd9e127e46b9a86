// Command line front end: moment tables, tree censuses, Monte Carlo
// spectra, and oracle cross-checks.
//
// Exit codes: 0 success, 1 verification failure, 2 usage, 3 budget or cap
// exceeded, 4 numerical failure.

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bandcov/combinatorics.hpp"
#include "bandcov/errors.hpp"
#include "bandcov/linalg.hpp"
#include "bandcov/metrics.hpp"
#include "bandcov/moments.hpp"
#include "bandcov/oracle.hpp"
#include "bandcov/rng.hpp"
#include "bandcov/simulate.hpp"
#include "bandcov/version.hpp"

namespace {

using bandcov::BigInt;
using bandcov::BigRational;

// cpp_int's string constructor treats a leading 0 as octal, so parse the
// decimal digits by hand.
BigInt parse_decimal_int(const std::string& s) {
  size_t start = 0;
  bool neg = false;
  if (start < s.size() && (s[start] == '+' || s[start] == '-')) neg = s[start++] == '-';
  if (start == s.size()) throw std::invalid_argument("bad integer: '" + s + "'");
  BigInt v = 0;
  for (size_t k = start; k < s.size(); ++k) {
    if (s[k] < '0' || s[k] > '9') throw std::invalid_argument("bad integer: '" + s + "'");
    v = v * 10 + (s[k] - '0');
  }
  return neg ? BigInt(-v) : v;
}

BigRational parse_ratio(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty ratio");
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    BigInt num = parse_decimal_int(s.substr(0, slash));
    BigInt den = parse_decimal_int(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("ratio with zero denominator: " + s);
    return BigRational(num, den);
  }
  auto dot = s.find('.');
  if (dot == std::string::npos) return BigRational(parse_decimal_int(s));
  BigInt whole = parse_decimal_int(s.substr(0, dot) + s.substr(dot + 1));
  BigInt den = 1;
  for (size_t k = dot + 1; k < s.size(); ++k) den *= 10;
  return BigRational(whole, den);
}

std::string join_invocation(int argc, char** argv) {
  std::ostringstream os;
  for (int i = 0; i < argc; ++i) {
    if (i) os << ' ';
    os << argv[i];
  }
  return os.str();
}

std::string rat_str(const BigRational& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

std::string num_str(const BigRational& r, bool exact) {
  if (exact) return rat_str(r);
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", static_cast<double>(r));
  return buf;
}

// ---------------------------------------------------------------- moments

struct MomentsArgs {
  int lmax = 0;
  std::string gamma_str, y_str;
  bool exact = false;
  std::string csv_path;
};

int run_moments(const MomentsArgs& args, const std::string& invocation) {
  if (args.gamma_str.empty() == args.y_str.empty()) {
    std::cerr << "moments: give exactly one of --gamma or --y\n";
    return 2;
  }
  BigRational gamma = args.gamma_str.empty() ? parse_ratio(args.y_str) / 2
                                             : parse_ratio(args.gamma_str);
  if (gamma < 0) {
    std::cerr << "moments: ratio must be nonnegative\n";
    return 2;
  }
  BigRational doubled = gamma * 2;

  std::vector<bandcov::MomentPolynomial> polys;
  for (int l = 1; l <= args.lmax; ++l) polys.push_back(bandcov::limit_moment_polynomial(l));

  std::cout << "# limiting spectral moments; half-bandwidth ratio gamma = d/n = "
            << rat_str(gamma) << "\n";
  std::cout << "l  m(gamma)  m(2*gamma)  coefficients(ascending in gamma)\n";
  for (const auto& poly : polys) {
    std::cout << poly.order << "  " << num_str(poly.at(gamma), args.exact) << "  "
              << num_str(poly.at(doubled), args.exact) << "  ";
    for (size_t r = 0; r < poly.coeffs.size(); ++r) {
      if (r) std::cout << ';';
      std::cout << rat_str(poly.coeffs[r]);
    }
    std::cout << '\n';
  }

  if (!args.csv_path.empty()) {
    std::ofstream out(args.csv_path, std::ios::binary);
    if (!out) {
      std::cerr << "moments: cannot open " << args.csv_path << '\n';
      return 2;
    }
    out << "# " << bandcov::kToolName << ' ' << bandcov::kVersion << '\n';
    out << "# invocation: " << invocation << '\n';
    out << "l,coefficients,value\n";
    for (const auto& poly : polys) {
      out << poly.order << ',';
      for (size_t r = 0; r < poly.coeffs.size(); ++r) {
        if (r) out << ';';
        out << rat_str(poly.coeffs[r]);
      }
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", static_cast<double>(poly.at(gamma)));
      out << ',' << buf << '\n';
    }
  }
  return 0;
}

// ------------------------------------------------------------------ trees

int run_trees(int l, bool json) {
  if (l < 1 || l > 14) {  // enumeration cap; Catalan(14) is already ~2.7M trees
    std::cerr << "trees: --l must be in 1..14\n";
    return 2;
  }
  std::vector<BigRational> factor(static_cast<size_t>(l) + 1);
  for (int D = 1; D <= l; ++D) factor[static_cast<size_t>(D)] = bandcov::degree_factor(D);

  long long idx = 0;
  bandcov::enumerate_plane_trees(l, [&](const bandcov::PlaneTree& t) {
    if (json) {
      std::cout << bandcov::tree_to_json_line(t) << '\n';
      return;
    }
    BigRational w = 1;
    for (int deg : t.degree_profile()) w *= factor[static_cast<size_t>(deg)];
    std::cout << idx++ << "  cc=";
    for (size_t i = 0; i < t.child_counts.size(); ++i) {
      if (i) std::cout << ',';
      std::cout << t.child_counts[i];
    }
    std::cout << "  r=" << t.excess() << "  profile=";
    std::vector<int> prof = t.degree_profile();
    for (size_t i = 0; i < prof.size(); ++i) {
      if (i) std::cout << ',';
      std::cout << prof[i];
    }
    std::cout << "  weight=" << rat_str(w) << "*g^" << t.excess() << '\n';
  });
  return 0;
}

// --------------------------------------------------------------- simulate

struct SimulateArgs {
  bandcov::SimulationConfig cfg;
  bandcov::RunOptions opt;
  std::string dist = "normal";
  std::string out_dir;
  int bins = 100;
};

int run_simulate(SimulateArgs& args, const std::string& invocation) {
  args.cfg.dist = bandcov::parse_distribution(args.dist);
  std::vector<bandcov::SpectralSample> samples = bandcov::run_ensemble(args.cfg, args.opt);

  namespace fs = std::filesystem;
  fs::create_directories(args.out_dir);
  {
    std::ofstream os(fs::path(args.out_dir) / "ensemble.csv", std::ios::binary);
    bandcov::write_ensemble_csv(os, args.cfg, samples, invocation);
  }
  {
    std::ofstream os(fs::path(args.out_dir) / "ensemble.json", std::ios::binary);
    bandcov::write_ensemble_json(os, args.cfg, samples, invocation);
  }
  if (args.opt.eigenvalues) {
    bandcov::Histogram h = bandcov::pooled_histogram(samples, args.bins);
    {
      std::ofstream os(fs::path(args.out_dir) / "histogram.csv", std::ios::binary);
      bandcov::write_histogram_csv(os, h, invocation);
    }
    {
      std::ofstream os(fs::path(args.out_dir) / "histogram.json", std::ios::binary);
      bandcov::write_histogram_json(os, h, invocation);
    }
  }

  double gamma = static_cast<double>(args.cfg.d) / args.cfg.n;
  std::cout << "p=" << args.cfg.p << " n=" << args.cfg.n << " d=" << args.cfg.d
            << " dist=" << to_string(args.cfg.dist) << " replicates=" << args.cfg.replicates
            << " seed=" << args.cfg.seed << " gamma=d/n=" << gamma << '\n';
  double total_s = 0.0;
  for (const auto& s : samples) total_s += s.seconds;
  std::cout << "replicates done in " << total_s << " s total\n\n";
  std::vector<double> mean = bandcov::averaged_moments(samples);
  std::cout << bandcov::format_moment_report(bandcov::moment_report(mean, gamma));
  if (args.opt.eigenvalues) {
    double lo = samples.front().eigenvalues.front(), hi = lo;
    for (const auto& s : samples) {
      lo = std::min(lo, s.eigenvalues.front());
      hi = std::max(hi, s.eigenvalues.back());
    }
    std::cout << "\nspectrum range [" << lo << ", " << hi << "], reference edge (1+sqrt(2g))^2 = "
              << bandcov::support_bound(2.0 * gamma) << '\n';
  }
  std::cout << "wrote " << args.out_dir << "/ensemble.{csv,json}";
  if (args.opt.eigenvalues) std::cout << " and histogram.{csv,json}";
  std::cout << '\n';
  return 0;
}

// ----------------------------------------------------------------- verify

struct Check {
  std::string name;
  bool ok;
  std::string detail;
};

void report(std::vector<Check>& all, const std::string& name, bool ok,
            const std::string& detail = "") {
  all.push_back({name, ok, detail});
  std::cout << (ok ? "[PASS] " : "[FAIL] ") << name;
  if (!detail.empty()) std::cout << "  (" << detail << ")";
  std::cout << '\n';
}

int run_verify(const std::string& suite) {
  const bool full = suite == "full";
  std::vector<Check> checks;

  {  // closed-form composition counts against direct enumeration
    int nmax = full ? 24 : 14, kmax = full ? 6 : 4, mmax = full ? 8 : 5;
    bool ok = true;
    long long triples = 0;
    for (int k = 1; k <= kmax && ok; ++k)
      for (int m = 1; m <= mmax && ok; ++m)
        for (int n = 0; n <= nmax && ok; ++n) {
          long long cnt = 0;
          bandcov::enumerate_restricted_compositions(
              n, k, m,
              [&](const std::vector<int>& parts) {
                long long sum = 0;
                for (int v : parts) {
                  if (v < 1 || v > m) ok = false;
                  sum += v;
                }
                if (sum != n) ok = false;
                ++cnt;
              });
          if (BigInt(cnt) != bandcov::count_restricted_compositions(n, k, m)) ok = false;
          if (bandcov::count_restricted_compositions(n, k, m) !=
              bandcov::count_restricted_compositions(static_cast<long long>(k) * (m + 1) - n, k, m))
            ok = false;  // reflection symmetry
          ++triples;
        }
    report(checks, "compositions: closed form matches enumeration", ok,
           std::to_string(triples) + " triples");
  }

  {  // tree census sizes, per-r counts, and the walk codec
    int lmax = full ? 10 : 7;
    bool ok = true;
    for (int l = 1; l <= lmax && ok; ++l) {
      BigInt total = 0;
      std::vector<BigInt> by_r(static_cast<size_t>(l), BigInt(0));
      bandcov::enumerate_plane_trees(l, [&](const bandcov::PlaneTree& t) {
        ++total;
        ++by_r[static_cast<size_t>(t.excess())];
        if (bandcov::tree_from_walk(bandcov::canonical_walk(t)) != t) ok = false;
      });
      if (total != bandcov::binomial(2 * l, l) / (l + 1)) ok = false;
      for (int r = 0; r < l; ++r)
        if (by_r[static_cast<size_t>(r)] != bandcov::narayana_count(l, r)) ok = false;
    }
    report(checks, "trees: census sizes and walk codec round trip", ok,
           "l <= " + std::to_string(lmax));
  }

  {  // labelled census against the unbanded brute-force walk count
    bool ok = true;
    std::vector<std::array<int, 3>> shapes = {{3, 3, 2}, {4, 3, 3}, {3, 4, 3}};
    if (full) shapes.push_back({4, 4, 3});
    for (auto [p, n, l] : shapes) {
      auto census = bandcov::brute_count_banded_trees(p, n, p - 1, l);
      BigInt total = 0;
      for (const auto& [cc, cnt] : census) total += cnt;
      if (total != bandcov::count_ordered_trees(p, n, l)) ok = false;
    }
    report(checks, "trees: labelled census matches brute-force walks", ok);
  }

  {  // degree factors are the leading composition-count coefficients
    long long d = full ? 10000 : 1000;
    double tol = full ? 0.01 : 0.02;
    bool ok = true;
    double worst = 0.0;
    for (int D = 2; D <= 5; ++D) {
      BigRational ratio(bandcov::count_restricted_compositions(D * d, D, 2 * d));
      for (int t = 0; t < D - 1; ++t) ratio /= d;
      double rel = std::abs(static_cast<double>(ratio / bandcov::degree_factor(D)) - 1.0);
      worst = std::max(worst, rel);
      if (rel > tol) ok = false;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "worst rel dev %.2e at d=%lld", worst, d);
    report(checks, "degree factors: composition-count leading term", ok, buf);
  }

  {  // exact moment oracle against a hand-derived second moment
    bool ok = true;
    std::vector<BigRational> rademacher{1, 1, 1, 1};
    std::vector<BigRational> normal{1, 3, 15, 105};  // E X^{2h}
    for (auto [p, n, d] : std::vector<std::array<int, 3>>{{6, 4, 1}, {8, 4, 2}, {9, 5, 2}}) {
      BigRational expect =
          1 + BigRational(2LL * d * p - static_cast<long long>(d) * (d + 1),
                          static_cast<long long>(n) * p);
      if (bandcov::exact_expected_moment(p, n, d, 2, rademacher) != expect) ok = false;
      if (bandcov::exact_expected_moment(p, n, d, 2, normal) != expect + BigRational(2, n))
        ok = false;
      if (bandcov::exact_expected_moment(p, n, d, 1, rademacher) != 1) ok = false;
    }
    report(checks, "moment oracle: exact second moment matches hand formula", ok);
  }

  {  // gamma = d/n beats 2d/n as the argument of the limit polynomial
    bool ok = true;
    bandcov::MomentPolynomial p2 = bandcov::limit_moment_polynomial(2);
    std::vector<BigRational> rademacher{1, 1};
    double prev = 1e9;
    for (int t : {1, 2, 3}) {
      int p = 4 * t, n = 2 * t, d = t;  // gamma = 1/2 along the family
      double em = static_cast<double>(bandcov::exact_expected_moment(p, n, d, 2, rademacher));
      double err_half = std::abs(em - p2.at(0.5));
      double err_full = std::abs(em - p2.at(1.0));
      if (!(err_half < err_full)) ok = false;
      if (!(err_half < prev)) ok = false;
      prev = err_half;
    }
    report(checks, "moment oracle: d/n convention wins at second order", ok);
  }

  {  // Levy distance against the definition on a grid
    const double step = 1.0 / 512.0;
    bool ok = true;
    auto agree = [&](const bandcov::StepCDF& f, const bandcov::StepCDF& g) {
      double exact = bandcov::levy_distance(f, g);
      double brute = bandcov::brute_levy(f, g, step);
      if (std::abs(exact - brute) > step + 1e-9) ok = false;
      if (exact > bandcov::kolmogorov_distance(f, g) + 1e-12) ok = false;
    };
    bandcov::StepCDF d0({0.0}, {1.0});
    bandcov::StepCDF dhalf({0.5}, {1.0});
    agree(d0, dhalf);
    agree(bandcov::StepCDF::from_samples({1, 2, 3}), bandcov::StepCDF::from_samples({1, 2}));
    bandcov::SplitMix64 g(7);
    for (int rep = 0; rep < (full ? 40 : 10); ++rep) {
      std::vector<double> a, b;
      for (int k = 0; k < 8; ++k) {
        a.push_back(static_cast<double>(g.next() % 16) / 16.0);
        b.push_back(static_cast<double>(g.next() % 16) / 16.0);
      }
      agree(bandcov::StepCDF::from_samples(a), bandcov::StepCDF::from_samples(b));
    }
    report(checks, "metrics: Levy distance matches grid definition", ok);
  }

  int failed = 0;
  for (const Check& c : checks) failed += c.ok ? 0 : 1;
  std::cout << (failed == 0 ? "all checks passed" : std::to_string(failed) + " check(s) FAILED")
            << '\n';
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"banded sample covariance spectra: moments, trees, simulation"};
  app.set_version_flag("--version", std::string(bandcov::kToolName) + " " + bandcov::kVersion);
  app.require_subcommand(1);
  std::string invocation = join_invocation(argc, argv);

  MomentsArgs margs;
  CLI::App* cmd_moments = app.add_subcommand("moments", "limiting moment table");
  cmd_moments->add_option("--lmax", margs.lmax, "highest moment order")
      ->required()
      ->check(CLI::Range(1, 14));
  cmd_moments->add_option("--gamma", margs.gamma_str, "half-bandwidth ratio d/n (decimal or a/b)");
  cmd_moments->add_option("--y", margs.y_str, "full-bandwidth ratio 2d/n (decimal or a/b)");
  cmd_moments->add_flag("--exact", margs.exact, "print exact fractions");
  cmd_moments->add_option("--csv", margs.csv_path, "also write a CSV file");

  int trees_l = 0;
  bool trees_json = false;
  CLI::App* cmd_trees = app.add_subcommand("trees", "canonical tree census with weights");
  cmd_trees->add_option("--l", trees_l, "edge count")->required();
  cmd_trees->add_flag("--json", trees_json, "one JSON object per tree");

  SimulateArgs sargs;
  CLI::App* cmd_sim = app.add_subcommand("simulate", "Monte Carlo banded covariance spectra");
  cmd_sim->add_option("--p", sargs.cfg.p, "matrix dimension")->required()->check(CLI::PositiveNumber);
  cmd_sim->add_option("--n", sargs.cfg.n, "samples per replicate")->required()->check(CLI::PositiveNumber);
  cmd_sim->add_option("--d", sargs.cfg.d, "half-bandwidth (0 keeps the diagonal only)")
      ->required()
      ->check(CLI::NonNegativeNumber);
  cmd_sim->add_option("--dist", sargs.dist, "normal|rademacher|uniform")
      ->check(CLI::IsMember({"normal", "rademacher", "uniform"}));
  cmd_sim->add_option("--reps", sargs.cfg.replicates, "replicates")->check(CLI::PositiveNumber);
  cmd_sim->add_option("--seed", sargs.cfg.seed, "RNG seed");
  cmd_sim->add_option("--lmax", sargs.opt.lmax, "moment orders to record")->check(CLI::Range(1, 12));
  cmd_sim->add_flag("--eig", sargs.opt.eigenvalues, "extract eigenvalues too");
  cmd_sim->add_option("--bins", sargs.bins, "histogram bins")->check(CLI::PositiveNumber);
  cmd_sim->add_option("--out", sargs.out_dir, "output directory")->required();
  cmd_sim->add_option("--threads", sargs.opt.threads, "worker threads (0 = auto)");
  cmd_sim->add_option("--budget", sargs.opt.work_budget, "work cap on p*n*d*reps");

  std::string suite = "fast";
  CLI::App* cmd_verify = app.add_subcommand("verify", "oracle cross-checks");
  cmd_verify->add_option("--suite", suite, "fast|full")->check(CLI::IsMember({"fast", "full"}));

  // defaults for simulate
  sargs.cfg.seed = 12345;
  sargs.cfg.replicates = 1;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (cmd_moments->parsed()) return run_moments(margs, invocation);
    if (cmd_trees->parsed()) return run_trees(trees_l, trees_json);
    if (cmd_sim->parsed()) return run_simulate(sargs, invocation);
    if (cmd_verify->parsed()) return run_verify(suite);
  } catch (const bandcov::BudgetExceeded& e) {
    std::cerr << "budget: " << e.what() << '\n';
    return 3;
  } catch (const bandcov::CapExceeded& e) {
    std::cerr << "cap: " << e.what() << '\n';
    return 3;
  } catch (const bandcov::ConvergenceFailure& e) {
    std::cerr << "numerical: " << e.what() << '\n';
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage: " << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "usage: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }
  return 2;
}

#include "bandcov/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "bandcov/errors.hpp"
#include "bandcov/rng.hpp"
#include "bandcov/version.hpp"

namespace bandcov {

EntryDistribution parse_distribution(const std::string& name) {
  if (name == "normal") return EntryDistribution::Normal;
  if (name == "rademacher") return EntryDistribution::Rademacher;
  if (name == "uniform") return EntryDistribution::Uniform;
  throw std::invalid_argument("unknown distribution: " + name);
}

std::string to_string(EntryDistribution dist) {
  switch (dist) {
    case EntryDistribution::Normal: return "normal";
    case EntryDistribution::Rademacher: return "rademacher";
    case EntryDistribution::Uniform: return "uniform";
  }
  return "?";
}

namespace {

void check_config(const SimulationConfig& cfg) {
  if (cfg.p < 1 || cfg.n < 1 || cfg.replicates < 1)
    throw std::invalid_argument("simulation config: p, n, replicates must be >= 1");
  if (cfg.d < 0) throw std::invalid_argument("simulation config: d must be >= 0");
}

constexpr double kTwoPi = 6.28318530717958647692;
constexpr double kSqrt12 = 3.46410161513775458705;

}  // namespace

DataMatrix generate(const SimulationConfig& cfg, int replicate) {
  check_config(cfg);
  if (replicate < 0 || replicate >= cfg.replicates)
    throw std::invalid_argument("generate: replicate out of range");
  DataMatrix x(cfg.p, cfg.n);
  SplitMix64 g(stream_seed(cfg.seed, static_cast<std::uint64_t>(replicate)));
  const size_t total = x.a.size();
  switch (cfg.dist) {
    case EntryDistribution::Normal: {
      // Box-Muller, pairwise
      for (size_t t = 0; t < total; t += 2) {
        double u = g.uniform01();
        double v = g.uniform01();
        double rad = std::sqrt(-2.0 * std::log(u));
        x.a[t] = rad * std::cos(kTwoPi * v);
        if (t + 1 < total) x.a[t + 1] = rad * std::sin(kTwoPi * v);
      }
      break;
    }
    case EntryDistribution::Rademacher:
      for (size_t t = 0; t < total; ++t) x.a[t] = (g.next() >> 63) ? 1.0 : -1.0;
      break;
    case EntryDistribution::Uniform:
      for (size_t t = 0; t < total; ++t)
        x.a[t] = kSqrt12 * (static_cast<double>(g.next() >> 11) * 0x1.0p-53 - 0.5);
      break;
  }
  return x;
}

std::vector<SpectralSample> run_ensemble(const SimulationConfig& cfg, const RunOptions& opt) {
  check_config(cfg);
  if (opt.lmax < 1) throw std::invalid_argument("run_ensemble: lmax >= 1 required");
  double work = static_cast<double>(cfg.p) * cfg.n * cfg.d * cfg.replicates;
  if (work > opt.work_budget)
    throw BudgetExceeded("run_ensemble: p*n*d*replicates exceeds the work budget");

  const int workers = std::max(1, std::min(resolve_threads(opt.threads), cfg.replicates));
  const int inner = std::max(1, resolve_threads(opt.threads) / workers);

  std::vector<SpectralSample> out(static_cast<size_t>(cfg.replicates));
  std::atomic<int> cursor{0};
  std::mutex err_mutex;
  std::string err_what;
  int err_kind = 0;  // 1 convergence, 2 other
  int err_index = 0;

  auto body = [&]() {
    for (;;) {
      int rep = cursor.fetch_add(1);
      if (rep >= cfg.replicates) return;
      auto t0 = std::chrono::steady_clock::now();
      try {
        DataMatrix x = generate(cfg, rep);
        BandedSymmetricMatrix s = banded_gram(x, cfg.d, inner);
        SpectralSample& sample = out[static_cast<size_t>(rep)];
        sample.replicate = rep;
        sample.moments = trace_powers(s, opt.lmax);
        for (double& m : sample.moments) m /= cfg.p;
        if (opt.eigenvalues) sample.eigenvalues = eigenvalues(s);
      } catch (const ConvergenceFailure& e) {
        std::lock_guard<std::mutex> lk(err_mutex);
        if (err_kind == 0) {
          err_kind = 1;
          err_what = std::string(e.what()) + " (replicate " + std::to_string(rep) + ")";
          err_index = e.index;
        }
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lk(err_mutex);
        if (err_kind == 0) {
          err_kind = 2;
          err_what = e.what();
        }
      }
      out[static_cast<size_t>(rep)].seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
  };

  if (workers == 1) {
    body();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int t = 0; t < workers; ++t) pool.emplace_back(body);
    for (auto& th : pool) th.join();
  }
  if (err_kind == 1) throw ConvergenceFailure(err_what, err_index);
  if (err_kind == 2) throw std::runtime_error(err_what);
  return out;
}

Histogram pooled_histogram(const std::vector<SpectralSample>& samples, int bins) {
  if (bins < 1) throw std::invalid_argument("pooled_histogram: bins >= 1 required");
  std::vector<double> pool;
  for (const SpectralSample& s : samples)
    pool.insert(pool.end(), s.eigenvalues.begin(), s.eigenvalues.end());
  if (pool.empty())
    throw std::invalid_argument("pooled_histogram: no eigenvalues (run with eigenvalues on)");

  auto [mn, mx] = std::minmax_element(pool.begin(), pool.end());
  double lo = *mn, hi = *mx;
  if (lo == hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double width = (hi - lo) / bins;
  Histogram h;
  h.edges.resize(static_cast<size_t>(bins) + 1);
  for (int b = 0; b <= bins; ++b) h.edges[static_cast<size_t>(b)] = lo + width * b;
  h.edges.back() = hi;
  h.density.assign(static_cast<size_t>(bins), 0.0);
  for (double x : pool) {
    int b = std::min(bins - 1, static_cast<int>((x - lo) / width));
    b = std::max(0, b);
    h.density[static_cast<size_t>(b)] += 1.0;
  }
  const double norm = 1.0 / (static_cast<double>(pool.size()) * width);
  for (double& v : h.density) v *= norm;
  return h;
}

std::vector<double> averaged_moments(const std::vector<SpectralSample>& samples) {
  if (samples.empty()) throw std::invalid_argument("averaged_moments: no samples");
  std::vector<double> mean(samples.front().moments.size(), 0.0);
  for (const SpectralSample& s : samples) {
    if (s.moments.size() != mean.size())
      throw std::invalid_argument("averaged_moments: ragged moment vectors");
    for (size_t k = 0; k < mean.size(); ++k) mean[k] += s.moments[k];
  }
  for (double& v : mean) v /= static_cast<double>(samples.size());
  return mean;
}

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_header(std::ostream& os, const std::string& invocation) {
  os << "# " << kToolName << ' ' << kVersion << '\n';
  os << "# invocation: " << invocation << '\n';
}

}  // namespace

void write_ensemble_csv(std::ostream& os, const SimulationConfig& cfg,
                        const std::vector<SpectralSample>& samples,
                        const std::string& invocation) {
  write_header(os, invocation);
  os << "# p=" << cfg.p << " n=" << cfg.n << " d=" << cfg.d << " dist=" << to_string(cfg.dist)
     << " replicates=" << cfg.replicates << " seed=" << cfg.seed << '\n';
  size_t lmax = samples.empty() ? 0 : samples.front().moments.size();
  os << "replicate";
  for (size_t l = 1; l <= lmax; ++l) os << ",m" << l;
  os << '\n';
  for (const SpectralSample& s : samples) {
    os << s.replicate;
    for (double m : s.moments) os << ',' << fmt17(m);
    os << '\n';
  }
}

void write_ensemble_json(std::ostream& os, const SimulationConfig& cfg,
                         const std::vector<SpectralSample>& samples,
                         const std::string& invocation) {
  nlohmann::ordered_json j;
  j["tool"] = kToolName;
  j["version"] = kVersion;
  j["invocation"] = invocation;
  j["config"] = {{"p", cfg.p},       {"n", cfg.n},
                 {"d", cfg.d},       {"dist", to_string(cfg.dist)},
                 {"replicates", cfg.replicates}, {"seed", cfg.seed}};
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const SpectralSample& s : samples) {
    nlohmann::ordered_json row;
    row["replicate"] = s.replicate;
    row["moments"] = s.moments;
    arr.push_back(std::move(row));
  }
  j["samples"] = std::move(arr);
  os << j.dump(2) << '\n';
}

void write_histogram_csv(std::ostream& os, const Histogram& h, const std::string& invocation) {
  write_header(os, invocation);
  os << "bin_left,bin_right,density\n";
  for (size_t b = 0; b < h.density.size(); ++b)
    os << fmt17(h.edges[b]) << ',' << fmt17(h.edges[b + 1]) << ',' << fmt17(h.density[b]) << '\n';
}

void write_histogram_json(std::ostream& os, const Histogram& h, const std::string& invocation) {
  nlohmann::ordered_json j;
  j["tool"] = kToolName;
  j["version"] = kVersion;
  j["invocation"] = invocation;
  j["edges"] = h.edges;
  j["density"] = h.density;
  os << j.dump(2) << '\n';
}

}  // namespace bandcov

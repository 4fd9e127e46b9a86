#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "bandcov/linalg.hpp"

namespace bandcov {

enum class EntryDistribution { Normal, Rademacher, Uniform };

EntryDistribution parse_distribution(const std::string& name);
std::string to_string(EntryDistribution dist);

struct SimulationConfig {
  int p = 0;            // matrix dimension
  int n = 0;            // samples per replicate
  int d = 0;            // half-bandwidth; 0 keeps the diagonal only
  EntryDistribution dist = EntryDistribution::Normal;
  int replicates = 1;
  std::uint64_t seed = 0;
};

struct SpectralSample {
  int replicate = 0;
  std::vector<double> moments;      // moments[j] = p^{-1} tr(S^{j+1})
  std::vector<double> eigenvalues;  // ascending; empty unless requested
  double seconds = 0.0;             // wall time, in-memory diagnostic only
};

struct RunOptions {
  int lmax = 8;
  bool eigenvalues = false;
  int threads = 0;             // 0: BANDCOV_THREADS or hardware count
  double work_budget = 2e11;   // cap on p*n*d*replicates
};

// Entry matrix for one replicate; entries are i.i.d. mean 0, variance 1.
// Bit-reproducible: depends only on (seed, replicate) and the shape.
DataMatrix generate(const SimulationConfig& cfg, int replicate);

// All replicates; output is bit-identical for a fixed config regardless of
// the thread count.  Throws BudgetExceeded over budget and ConvergenceFailure
// (annotated with the replicate) if the eigensolver fails.
std::vector<SpectralSample> run_ensemble(const SimulationConfig& cfg, const RunOptions& opt);

struct Histogram {
  std::vector<double> edges;    // bins+1 edges spanning the pooled range
  std::vector<double> density;  // normalized: sum(density * width) == 1
};

// Equal-width histogram of all eigenvalues pooled across samples.
Histogram pooled_histogram(const std::vector<SpectralSample>& samples, int bins);

// Mean of each moment order across replicates.
std::vector<double> averaged_moments(const std::vector<SpectralSample>& samples);

// Deterministic writers.  Every file starts with '# <tool> <version>' and
// '# invocation: <argv>' comment lines; numbers use '.' decimals and '\n'
// line ends, so repeated runs are byte-identical.
void write_ensemble_csv(std::ostream& os, const SimulationConfig& cfg,
                        const std::vector<SpectralSample>& samples,
                        const std::string& invocation);
void write_ensemble_json(std::ostream& os, const SimulationConfig& cfg,
                         const std::vector<SpectralSample>& samples,
                         const std::string& invocation);
void write_histogram_csv(std::ostream& os, const Histogram& h, const std::string& invocation);
void write_histogram_json(std::ostream& os, const Histogram& h, const std::string& invocation);

}  // namespace bandcov

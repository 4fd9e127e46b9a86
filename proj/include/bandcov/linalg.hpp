#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace bandcov {

// Row-major p x n data matrix (rows are variables, columns are samples).
struct DataMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> a;

  DataMatrix() = default;
  DataMatrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0) {}

  double& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  double at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }
  const double* row(int i) const { return a.data() + static_cast<size_t>(i) * cols; }
};

// Symmetric p x p matrix with entries only for |i-j| <= d, stored by
// subdiagonals: diag(j)[i] = A(i+j, i).
class BandedSymmetricMatrix {
 public:
  BandedSymmetricMatrix(int p, int d);

  int dim() const { return p_; }
  int bandwidth() const { return d_; }

  double at(int i, int j) const;
  void set(int i, int j, double v);  // requires |i-j| <= d

  double* diag(int j) { return b_.data() + static_cast<size_t>(j) * p_; }
  const double* diag(int j) const { return b_.data() + static_cast<size_t>(j) * p_; }

  double trace() const;

 private:
  int p_, d_;
  std::vector<double> b_;  // (d+1) * p, zero padded at diagonal tails
};

// S = (1/n) X X' restricted to the band |i-j| <= d.  d is clamped to p-1,
// so any d >= p-1 gives the plain sample covariance.  threads = 0 picks
// BANDCOV_THREADS or the hardware count.
BandedSymmetricMatrix banded_gram(const DataMatrix& x, int d, int threads = 0);

std::vector<double> matvec(const BandedSymmetricMatrix& s, std::span<const double> v);

// tr(S^l), unnormalized.  Uses banded matrix powers while l*d < p and the
// eigenvalue route otherwise.
double trace_power(const BandedSymmetricMatrix& s, int l);
// tr(S^l) for l = 1..lmax in one pass (shared intermediate powers).
std::vector<double> trace_powers(const BandedSymmetricMatrix& s, int lmax);

// All eigenvalues, ascending.  Givens reduction of the band to tridiagonal
// form followed by implicit-shift QL; throws ConvergenceFailure if any
// eigenvalue needs more than 50 sweeps.
std::vector<double> eigenvalues(const BandedSymmetricMatrix& s);

struct TraceEstimate {
  double value = 0.0;
  double std_error = 0.0;
  int probes = 0;
};

// Rademacher-probe estimate of tr(S^l) with its sample standard error.
TraceEstimate hutchinson_trace(const BandedSymmetricMatrix& s, int l, int probes,
                               std::uint64_t seed);

// Thread-count resolution used across the library: explicit value wins,
// else the BANDCOV_THREADS environment variable, else hardware concurrency.
int resolve_threads(int requested);

}  // namespace bandcov

#include "bandcov/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <thread>

#include "bandcov/errors.hpp"
#include "bandcov/rng.hpp"

namespace bandcov {

BandedSymmetricMatrix::BandedSymmetricMatrix(int p, int d) : p_(p), d_(d) {
  if (p < 1 || d < 0 || d > p - 1)
    throw std::invalid_argument("BandedSymmetricMatrix: need p >= 1 and 0 <= d <= p-1");
  b_.assign(static_cast<size_t>(d + 1) * p, 0.0);
}

double BandedSymmetricMatrix::at(int i, int j) const {
  if (i < 0 || j < 0 || i >= p_ || j >= p_)
    throw std::out_of_range("BandedSymmetricMatrix::at");
  if (i < j) std::swap(i, j);
  if (i - j > d_) return 0.0;
  return b_[static_cast<size_t>(i - j) * p_ + j];
}

void BandedSymmetricMatrix::set(int i, int j, double v) {
  if (i < 0 || j < 0 || i >= p_ || j >= p_)
    throw std::out_of_range("BandedSymmetricMatrix::set");
  if (i < j) std::swap(i, j);
  if (i - j > d_) throw std::out_of_range("BandedSymmetricMatrix::set outside band");
  b_[static_cast<size_t>(i - j) * p_ + j] = v;
}

double BandedSymmetricMatrix::trace() const {
  const double* d0 = diag(0);
  double t = 0.0;
  for (int i = 0; i < p_; ++i) t += d0[i];
  return t;
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("BANDCOV_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

BandedSymmetricMatrix banded_gram(const DataMatrix& x, int d, int threads) {
  if (x.rows < 1 || x.cols < 1) throw std::invalid_argument("banded_gram: empty data");
  if (d < 0) throw std::invalid_argument("banded_gram: d >= 0 required");
  const int p = x.rows, n = x.cols;
  const int dd = std::min(d, p - 1);
  BandedSymmetricMatrix s(p, dd);

  int nt = std::min(resolve_threads(threads), p);
  auto work = [&](int lo, int hi) {
    for (int i = lo; i < hi; ++i) {
      const double* ri = x.row(i);
      for (int j = 0; j <= dd && i + j < p; ++j) {
        const double* rj = x.row(i + j);
        double acc = 0.0;
        for (int t = 0; t < n; ++t) acc += ri[t] * rj[t];
        s.diag(j)[i] = acc / n;
      }
    }
  };
  if (nt <= 1) {
    work(0, p);
  } else {
    std::vector<std::thread> pool;
    int chunk = (p + nt - 1) / nt;
    for (int t = 0; t < nt; ++t) {
      int lo = t * chunk, hi = std::min(p, lo + chunk);
      if (lo < hi) pool.emplace_back(work, lo, hi);
    }
    for (auto& th : pool) th.join();
  }
  return s;
}

std::vector<double> matvec(const BandedSymmetricMatrix& s, std::span<const double> v) {
  const int p = s.dim(), d = s.bandwidth();
  if (static_cast<int>(v.size()) != p) throw std::invalid_argument("matvec: size mismatch");
  std::vector<double> y(static_cast<size_t>(p), 0.0);
  const double* d0 = s.diag(0);
  for (int i = 0; i < p; ++i) y[i] = d0[i] * v[i];
  for (int j = 1; j <= d; ++j) {
    const double* dj = s.diag(j);
    for (int i = 0; i + j < p; ++i) {
      y[i + j] += dj[i] * v[i];
      y[i] += dj[i] * v[i + j];
    }
  }
  return y;
}

namespace {

// General banded matrix with full row windows: row i holds columns
// [i-bw, i+bw] contiguously (out-of-range slots stay zero).  Used for the
// intermediate powers in trace computations.
struct RowBand {
  int p = 0, bw = 0;
  std::vector<double> a;

  RowBand(int p_, int bw_)
      : p(p_), bw(bw_), a(static_cast<size_t>(p_) * (2 * bw_ + 1), 0.0) {}

  int width() const { return 2 * bw + 1; }
  double* row(int i) { return a.data() + static_cast<size_t>(i) * width(); }
  const double* row(int i) const { return a.data() + static_cast<size_t>(i) * width(); }
};

RowBand to_row_band(const BandedSymmetricMatrix& s) {
  RowBand r(s.dim(), s.bandwidth());
  const int p = s.dim(), d = s.bandwidth();
  for (int j = 0; j <= d; ++j) {
    const double* dj = s.diag(j);
    for (int i = 0; i + j < p; ++i) {
      r.row(i + j)[-j + r.bw] = dj[i];
      r.row(i)[j + r.bw] = dj[i];
    }
  }
  return r;
}

// R = P * S where S is the base band matrix; R must be zeroed with
// bw = min(P.bw + S.bw, p-1).
void band_multiply(const RowBand& pm, const RowBand& sm, RowBand& r) {
  const int p = pm.p;
  for (int i = 0; i < p; ++i) {
    const double* prow = pm.row(i);
    double* rrow = r.row(i);
    int mlo = std::max(0, i - pm.bw), mhi = std::min(p - 1, i + pm.bw);
    for (int m = mlo; m <= mhi; ++m) {
      double v = prow[m - i + pm.bw];
      if (v == 0.0) continue;
      const double* srow = sm.row(m);
      int jlo = std::max(0, m - sm.bw), jhi = std::min(p - 1, m + sm.bw);
      double* rdst = rrow + (jlo - i + r.bw);
      const double* ssrc = srow + (jlo - m + sm.bw);
      for (int j = 0; j <= jhi - jlo; ++j) rdst[j] += v * ssrc[j];
    }
  }
}

// <A, B> restricted to overlapping row windows = tr(A * B) for symmetric A, B.
double band_inner(const RowBand& a, const RowBand& b) {
  const int p = a.p;
  const RowBand& small = a.bw <= b.bw ? a : b;
  const RowBand& big = a.bw <= b.bw ? b : a;
  double acc = 0.0;
  for (int i = 0; i < p; ++i) {
    const double* srow = small.row(i);
    const double* brow = big.row(i);
    int tlo = std::max(-small.bw, -i), thi = std::min(small.bw, p - 1 - i);
    for (int t = tlo; t <= thi; ++t)
      acc += srow[t + small.bw] * brow[t + big.bw];
  }
  return acc;
}

std::vector<double> power_sums_from_eigs(const std::vector<double>& eig, int lmax) {
  std::vector<double> out(static_cast<size_t>(lmax), 0.0);
  for (double x : eig) {
    double acc = 1.0;
    for (int l = 1; l <= lmax; ++l) {
      acc *= x;
      out[static_cast<size_t>(l - 1)] += acc;
    }
  }
  return out;
}

}  // namespace

std::vector<double> trace_powers(const BandedSymmetricMatrix& s, int lmax) {
  if (lmax < 1) throw std::invalid_argument("trace_powers: lmax >= 1 required");
  const int p = s.dim(), d = s.bandwidth();
  std::vector<double> out(static_cast<size_t>(lmax), 0.0);
  out[0] = s.trace();
  if (lmax == 1) return out;

  // band-power route for the orders it can serve; eigenvalues for the rest
  int lband = lmax;
  while (lband >= 2 && static_cast<long long>(lband) * d >= p) --lband;

  if (lband >= 2) {
    RowBand base = to_row_band(s);
    std::vector<RowBand> pow;  // pow[k] = S^{k+1}
    pow.push_back(base);
    int need = (lband + 1) / 2;
    for (int k = 2; k <= need; ++k) {
      const RowBand& prev = pow.back();
      RowBand next(p, std::min(prev.bw + d, p - 1));
      band_multiply(prev, base, next);
      pow.push_back(std::move(next));
    }
    for (int l = 2; l <= lband; ++l) {
      int a = (l + 1) / 2, b = l - a;
      out[static_cast<size_t>(l - 1)] =
          band_inner(pow[static_cast<size_t>(a - 1)], pow[static_cast<size_t>(b - 1)]);
    }
  }
  if (lband < lmax) {
    std::vector<double> ps = power_sums_from_eigs(eigenvalues(s), lmax);
    for (int l = std::max(2, lband + 1); l <= lmax; ++l)
      out[static_cast<size_t>(l - 1)] = ps[static_cast<size_t>(l - 1)];
  }
  return out;
}

double trace_power(const BandedSymmetricMatrix& s, int l) {
  if (l < 1) throw std::invalid_argument("trace_power: l >= 1 required");
  if (l == 1) return s.trace();
  if (static_cast<long long>(l) * s.bandwidth() >= s.dim())
    return power_sums_from_eigs(eigenvalues(s), l)[static_cast<size_t>(l - 1)];
  return trace_powers(s, l)[static_cast<size_t>(l - 1)];
}

namespace {

// One Givens rotation in the plane (q, q+1) applied to the banded matrix
// held in w (w[t] is the t-th subdiagonal of half-bandwidth bw storage).
// The pair (A(q,col), A(q+1,col)) is rotated so that A(q+1,col) vanishes;
// for chase steps that entry lives outside the band and is passed in as
// *target.  Returns the fill-in created at (q+bw+1, q), or 0 past the edge.
double apply_rotation(std::vector<std::vector<double>>& w, int p, int bw, int q,
                      int col, double cs, double sn, double* target) {
  // pivot pair
  double a = w[q - col][col];
  double t = target ? *target : w[q + 1 - col][col];
  w[q - col][col] = cs * a + sn * t;
  if (target)
    *target = 0.0;
  else
    w[q + 1 - col][col] = 0.0;

  // remaining row pairs (A(q,c), A(q+1,c)) for col < c < q
  for (int c = col + 1; c < q; ++c) {
    double x = w[q - c][c], y = w[q + 1 - c][c];
    w[q - c][c] = cs * x + sn * y;
    w[q + 1 - c][c] = cs * y - sn * x;
  }

  // 2x2 diagonal block
  {
    double x = w[0][q], y = w[1][q], z = w[0][q + 1];
    w[0][q] = cs * cs * x + 2.0 * cs * sn * y + sn * sn * z;
    w[0][q + 1] = sn * sn * x - 2.0 * cs * sn * y + cs * cs * z;
    w[1][q] = cs * sn * (z - x) + (cs * cs - sn * sn) * y;
  }

  // column pairs (A(r,q), A(r,q+1)) for q+1 < r <= q+bw
  for (int r = q + 2; r <= std::min(p - 1, q + bw); ++r) {
    double x = w[r - q][q], y = w[r - q - 1][q + 1];
    w[r - q][q] = cs * x + sn * y;
    w[r - q - 1][q + 1] = cs * y - sn * x;
  }

  // fill-in just below the band
  if (q + bw + 1 <= p - 1) {
    double y = w[bw][q + 1];
    w[bw][q + 1] = cs * y;
    return sn * y;
  }
  return 0.0;
}

// Reduce the band to tridiagonal form by eliminating one subdiagonal at a
// time, chasing each fill-in off the edge (Schwarz 1968; EISPACK bandr).
void band_to_tridiagonal(std::vector<std::vector<double>>& w, int p, int d) {
  for (int b = d; b >= 2; --b) {
    for (int c = 0; c + b <= p - 1; ++c) {
      double t = w[b][c];
      if (t == 0.0) continue;
      int col = c, q = c + b - 1;
      double* target = nullptr;  // first elimination target is in band
      double bulge = 0.0;
      while (true) {
        double a = w[q - col][col];
        double tv = target ? *target : w[b][col];
        double r = std::hypot(a, tv);
        if (r == 0.0) {
          if (target) *target = 0.0;
          break;
        }
        double nb = apply_rotation(w, p, b, q, col, a / r, tv / r, target);
        if (q + b + 1 > p - 1 || nb == 0.0) break;
        bulge = nb;
        col = q;
        q = col + b;
        target = &bulge;
      }
    }
  }
}

// Implicit-shift QL for a symmetric tridiagonal matrix, eigenvalues only.
// Classic tql1 recurrences; dv holds the diagonal, ev[i] couples dv[i] and
// dv[i+1].  Deflation when |e| <= eps * (|d_i| + |d_{i+1}|), at most 50
// sweeps per eigenvalue.
void tridiagonal_ql(std::vector<double>& dv, std::vector<double>& ev) {
  const int n = static_cast<int>(dv.size());
  const double eps = std::numeric_limits<double>::epsilon();
  ev.resize(static_cast<size_t>(n), 0.0);
  ev[static_cast<size_t>(n - 1)] = 0.0;

  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        double dd = std::abs(dv[m]) + std::abs(dv[m + 1]);
        if (std::abs(ev[m]) <= eps * dd) break;
      }
      if (m != l) {
        if (iter++ == 50)
          throw ConvergenceFailure("tridiagonal QL: no convergence at eigenvalue index " +
                                       std::to_string(l),
                                   l);
        double g = (dv[l + 1] - dv[l]) / (2.0 * ev[l]);
        double r = std::hypot(g, 1.0);
        g = dv[m] - dv[l] + ev[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, pp = 0.0;
        int i;
        for (i = m - 1; i >= l; --i) {
          double f = s * ev[i];
          double b = c * ev[i];
          r = std::hypot(f, g);
          ev[i + 1] = r;
          if (r == 0.0) {  // underflow recovery: split the problem
            dv[i + 1] -= pp;
            ev[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = dv[i + 1] - pp;
          r = (dv[i] - g) * s + 2.0 * c * b;
          pp = s * r;
          dv[i + 1] = g + pp;
          g = c * r - b;
        }
        if (r == 0.0 && i >= l) continue;
        dv[l] -= pp;
        ev[l] = g;
        ev[m] = 0.0;
      }
    } while (m != l);
  }
}

}  // namespace

std::vector<double> eigenvalues(const BandedSymmetricMatrix& s) {
  const int p = s.dim(), d = s.bandwidth();
  std::vector<std::vector<double>> w(static_cast<size_t>(d + 1),
                                     std::vector<double>(static_cast<size_t>(p), 0.0));
  for (int j = 0; j <= d; ++j) {
    const double* dj = s.diag(j);
    std::copy(dj, dj + (p - j), w[static_cast<size_t>(j)].begin());
  }
  if (d >= 2) band_to_tridiagonal(w, p, d);

  std::vector<double> dv = w[0];
  std::vector<double> ev = d >= 1 ? w[1] : std::vector<double>(static_cast<size_t>(p), 0.0);
  if (p == 1) return {dv[0]};
  tridiagonal_ql(dv, ev);
  std::sort(dv.begin(), dv.end());
  return dv;
}

TraceEstimate hutchinson_trace(const BandedSymmetricMatrix& s, int l, int probes,
                               std::uint64_t seed) {
  if (l < 1) throw std::invalid_argument("hutchinson_trace: l >= 1 required");
  if (probes < 2) throw std::invalid_argument("hutchinson_trace: probes >= 2 required");
  const int p = s.dim();
  std::vector<double> draws(static_cast<size_t>(probes), 0.0);
  std::vector<double> z(static_cast<size_t>(p));
  for (int k = 0; k < probes; ++k) {
    SplitMix64 g(stream_seed(seed, static_cast<std::uint64_t>(k)));
    for (int i = 0; i < p; ++i) z[static_cast<size_t>(i)] = (g.next() >> 63) ? 1.0 : -1.0;
    std::vector<double> y(z);
    for (int rep = 0; rep < l; ++rep) y = matvec(s, y);
    double acc = 0.0;
    for (int i = 0; i < p; ++i) acc += z[static_cast<size_t>(i)] * y[static_cast<size_t>(i)];
    draws[static_cast<size_t>(k)] = acc;
  }
  TraceEstimate est;
  est.probes = probes;
  for (double v : draws) est.value += v;
  est.value /= probes;
  double ss = 0.0;
  for (double v : draws) ss += (v - est.value) * (v - est.value);
  est.std_error = std::sqrt(ss / (static_cast<double>(probes) * (probes - 1)));
  return est;
}

}  // namespace bandcov

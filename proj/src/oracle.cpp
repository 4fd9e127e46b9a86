#include "bandcov/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>

#include "bandcov/errors.hpp"

namespace bandcov {

namespace {

void check_tuple_budget(int p, int n, int l, double budget, const char* who) {
  if (p < 1 || n < 1 || l < 1) throw std::invalid_argument(std::string(who) + ": bad sizes");
  double work = std::pow(static_cast<double>(p) * n, l);
  if (work > budget) throw BudgetExceeded(std::string(who) + ": (p*n)^l exceeds budget");
}

// Visits every cyclic row tuple (i_0..i_{l-1}) in [0,p) with
// |i_s - i_{s+1}| <= d around the cycle.
template <typename Fn>
void banded_cycle_rec(int p, int d, int l, int pos, std::vector<int>& iv, const Fn& fn) {
  if (pos == l) {
    if (std::abs(iv[static_cast<size_t>(l - 1)] - iv[0]) <= d) fn(iv);
    return;
  }
  int lo = pos == 0 ? 0 : std::max(0, iv[static_cast<size_t>(pos - 1)] - d);
  int hi = pos == 0 ? p - 1 : std::min(p - 1, iv[static_cast<size_t>(pos - 1)] + d);
  for (int v = lo; v <= hi; ++v) {
    iv[static_cast<size_t>(pos)] = v;
    banded_cycle_rec(p, d, l, pos + 1, iv, fn);
  }
}

template <typename Fn>
void for_each_banded_cycle(int p, int d, int l, const Fn& fn) {
  std::vector<int> iv(static_cast<size_t>(l), 0);
  banded_cycle_rec(p, d, l, 0, iv, fn);
}

}  // namespace

BigRational exact_expected_moment(int p, int n, int d, int l,
                                  const std::vector<BigRational>& even_moments,
                                  double budget) {
  check_tuple_budget(p, n, l, budget, "exact_expected_moment");
  if (static_cast<int>(even_moments.size()) < l)
    throw std::invalid_argument("exact_expected_moment: need even moments up to order 2l");

  // entry multiset per tuple; counts grouped by the multiset of half
  // multiplicities so the rational products happen once per group
  std::map<std::vector<int>, std::uint64_t> groups;
  std::vector<std::pair<int, int>> entries(static_cast<size_t>(2 * l));
  std::vector<int> halves;
  halves.reserve(static_cast<size_t>(2 * l));

  for_each_banded_cycle(p, d, l, [&](const std::vector<int>& iv) {
    std::vector<int> kv(static_cast<size_t>(l), 0);
    while (true) {
      // entry (i_s, k_s) and (i_{s+1}, k_s) for every matrix step
      for (int s = 0; s < l; ++s) {
        entries[static_cast<size_t>(2 * s)] = {iv[static_cast<size_t>(s)],
                                               kv[static_cast<size_t>(s)]};
        entries[static_cast<size_t>(2 * s + 1)] = {iv[static_cast<size_t>((s + 1) % l)],
                                                   kv[static_cast<size_t>(s)]};
      }
      std::sort(entries.begin(), entries.end());
      halves.clear();
      bool odd = false;
      for (size_t a = 0; a < entries.size();) {
        size_t b = a;
        while (b < entries.size() && entries[b] == entries[a]) ++b;
        size_t cnt = b - a;
        if (cnt % 2 != 0) {
          odd = true;
          break;
        }
        halves.push_back(static_cast<int>(cnt / 2));
        a = b;
      }
      if (!odd) {
        std::sort(halves.begin(), halves.end());
        ++groups[halves];
      }
      // odometer over sample tuples
      int pos = l - 1;
      while (pos >= 0 && ++kv[static_cast<size_t>(pos)] == n) kv[static_cast<size_t>(pos--)] = 0;
      if (pos < 0) break;
    }
  });

  BigRational total = 0;
  for (const auto& [halves_key, cnt] : groups) {
    BigRational prod = 1;
    for (int h : halves_key) prod *= even_moments[static_cast<size_t>(h - 1)];
    total += prod * BigRational(BigInt(cnt));
  }
  BigInt denom = p;
  for (int s = 0; s < l; ++s) denom *= n;
  return total / BigRational(denom);
}

namespace {

// Canonical tree of the walk when its distinct steps form a tree with all
// l edges crossed exactly twice; empty child_counts otherwise.
std::vector<int> exact_tree_shape(const std::vector<int>& iv, const std::vector<int>& kv) {
  const int l = static_cast<int>(iv.size());
  // map labels to dense vertex ids; rows first, then samples
  std::vector<int> vw(static_cast<size_t>(2 * l));
  std::vector<std::pair<int, int>> seen;  // (parity, label) -> id by scan
  seen.reserve(static_cast<size_t>(2 * l));
  auto id_of = [&](int parity, int label) {
    std::pair<int, int> key{parity, label};
    for (size_t t = 0; t < seen.size(); ++t)
      if (seen[t] == key) return static_cast<int>(t);
    seen.push_back(key);
    return static_cast<int>(seen.size()) - 1;
  };
  for (int s = 0; s < l; ++s) {
    vw[static_cast<size_t>(2 * s)] = id_of(0, iv[static_cast<size_t>(s)]);
    vw[static_cast<size_t>(2 * s + 1)] = id_of(1, kv[static_cast<size_t>(s)]);
  }
  int nv = static_cast<int>(seen.size());
  if (nv != l + 1) return {};

  std::vector<std::pair<int, int>> edges(static_cast<size_t>(2 * l));
  for (int s = 0; s < 2 * l; ++s) {
    int a = vw[static_cast<size_t>(s)], b = vw[static_cast<size_t>((s + 1) % (2 * l))];
    edges[static_cast<size_t>(s)] = std::minmax(a, b);
  }
  std::sort(edges.begin(), edges.end());
  int ne = 0;
  for (size_t s = 0; s < edges.size(); ++s)
    if (s == 0 || edges[s] != edges[s - 1]) ++ne;
  if (ne != l) return {};  // some edge crossed more than twice

  // first-visit children give the canonical plane tree
  std::vector<int> parent(static_cast<size_t>(nv), -2);
  std::vector<std::vector<int>> ch(static_cast<size_t>(nv));
  parent[static_cast<size_t>(vw[0])] = -1;
  int cur = vw[0];
  for (int s = 1; s < 2 * l; ++s) {
    int v = vw[static_cast<size_t>(s)];
    if (parent[static_cast<size_t>(v)] == -2) {
      parent[static_cast<size_t>(v)] = cur;
      ch[static_cast<size_t>(cur)].push_back(v);
    }
    cur = v;
  }
  std::vector<int> cc;
  cc.reserve(static_cast<size_t>(nv));
  std::vector<std::pair<int, size_t>> stack{{vw[0], 0}};
  cc.push_back(static_cast<int>(ch[static_cast<size_t>(vw[0])].size()));
  while (!stack.empty()) {
    auto& [v, idx] = stack.back();
    if (idx < ch[static_cast<size_t>(v)].size()) {
      int c = ch[static_cast<size_t>(v)][idx++];
      cc.push_back(static_cast<int>(ch[static_cast<size_t>(c)].size()));
      stack.emplace_back(c, 0);
    } else {
      stack.pop_back();
    }
  }
  return cc;
}

}  // namespace

std::map<std::vector<int>, BigInt> brute_count_banded_trees(int p, int n, int d, int l,
                                                            double budget) {
  check_tuple_budget(p, n, l, budget, "brute_count_banded_trees");
  std::map<std::vector<int>, BigInt> census;
  for_each_banded_cycle(p, d, l, [&](const std::vector<int>& iv) {
    std::vector<int> kv(static_cast<size_t>(l), 0);
    while (true) {
      std::vector<int> shape = exact_tree_shape(iv, kv);
      if (!shape.empty()) ++census[shape];
      int pos = l - 1;
      while (pos >= 0 && ++kv[static_cast<size_t>(pos)] == n) kv[static_cast<size_t>(pos--)] = 0;
      if (pos < 0) break;
    }
  });
  return census;
}

double brute_levy(const StepCDF& f, const StepCDF& g, double eps_step) {
  if (!(eps_step > 0.0)) throw std::invalid_argument("brute_levy: eps_step > 0 required");
  std::vector<double> xs = f.points();
  xs.insert(xs.end(), g.points().begin(), g.points().end());

  for (double eps = 0.0; eps <= 1.0 + eps_step; eps += eps_step) {
    bool ok = true;
    for (size_t a = 0; ok && a < xs.size(); ++a) {
      // breakpoints of the sandwich conditions sit at jumps and shifted jumps
      for (double x : {xs[a], xs[a] - eps, xs[a] + eps}) {
        if (g(x) > f(x + eps) + eps || f(x) > g(x + eps) + eps ||
            g(x) < f(x - eps) - eps || f(x) < g(x - eps) - eps) {
          ok = false;
          break;
        }
      }
    }
    if (ok) return eps;
  }
  return 1.0;  // Levy distance never exceeds 1
}

}  // namespace bandcov

#pragma once

#include <map>
#include <vector>

#include "bandcov/combinatorics.hpp"
#include "bandcov/metrics.hpp"
#include "bandcov/moments.hpp"

namespace bandcov {

// Expected l-th averaged spectral moment E[p^{-1} tr(S^l)] of the banded
// Gram matrix S = (1/n) X X' restricted to |i-j| <= d, for i.i.d. entries
// with the given even moments (odd moments zero, unit variance implied by
// even_moments[0] = 1 not being assumed; pass the law's actual moments).
// even_moments[h-1] = E X^{2h}, needed for h up to l.  Computed by full
// expansion over all index tuples in exact rational arithmetic; throws
// BudgetExceeded when (p*n)^l exceeds the budget.
BigRational exact_expected_moment(int p, int n, int d, int l,
                                  const std::vector<BigRational>& even_moments,
                                  double budget = 16777216.0);

// Census of closed alternating walks with l matrix steps whose distinct
// steps form a tree with every edge crossed exactly twice, row labels in
// [p] with the band constraint |i_s - i_{s+1}| <= d, sample labels in [n].
// Keyed by the canonical tree shape (preorder child counts).
std::map<std::vector<int>, BigInt> brute_count_banded_trees(int p, int n, int d, int l,
                                                            double budget = 1e8);

// Levy distance straight from the definition, scanning an eps grid of the
// given step; returns the first grid value that satisfies the sandwich at
// every breakpoint.  Accurate to +eps_step.
double brute_levy(const StepCDF& f, const StepCDF& g, double eps_step);

}  // namespace bandcov

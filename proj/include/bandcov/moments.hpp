#pragma once

#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "bandcov/combinatorics.hpp"

namespace bandcov {

using BigRational = boost::multiprecision::cpp_rational;

// c_D: leading coefficient of F(D*d, D, 2d) as a polynomial in d, i.e.
// F(D*d, D, 2d) = c_D d^{D-1} + O(d^{D-2}).  Closed form
//   c_D = sum_{j : D > 2j} (-1)^j D (D-2j)^{D-1} / (j! (D-j)!).
BigRational degree_factor(int D);

// m_l(gamma) = sum_r a_r gamma^r with a_r = sum over plane trees with l
// edges and r+1 row vertices of the product of degree factors over the
// tree's sample vertices.  gamma is the half-bandwidth over sample count.
struct MomentPolynomial {
  int order = 0;
  std::vector<BigRational> coeffs;  // coeffs[r] multiplies gamma^r

  BigRational at(const BigRational& gamma) const;
  double at(double gamma) const;
};

MomentPolynomial limit_moment_polynomial(int l, int cap = 14);

// Leading term of the labelled census of banded walks on a tree with the
// given sample-degree profile: p * n^{l-r} * prod_D F(D*d, D, 2*d).
// r must equal (sum of profile) - (profile length).  Requires d >= l and
// p > 2*l*d; throws RegimeViolation otherwise.
BigInt banded_class_size_leading(long long p, long long n, long long d,
                                 const std::vector<int>& profile, int r);

// l-th moment of the Marchenko-Pastur law with ratio y (unit variance).
BigRational mp_moment(int l, const BigRational& y);

// Upper edge (1 + sqrt(y))^2 of the Marchenko-Pastur law; the limiting
// spectra studied here are supported strictly inside it.
double support_bound(double y);

}  // namespace bandcov

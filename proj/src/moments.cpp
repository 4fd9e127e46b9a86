#include "bandcov/moments.hpp"

#include <cmath>
#include <stdexcept>

#include "bandcov/errors.hpp"

namespace bandcov {

namespace {

BigInt factorial(int n) {
  BigInt r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

BigInt ipow(BigInt base, int e) {
  BigInt r = 1;
  while (e-- > 0) r *= base;
  return r;
}

}  // namespace

BigRational degree_factor(int D) {
  if (D < 1) throw std::invalid_argument("degree_factor: D >= 1 required");
  BigRational c = 0;
  for (int j = 0; 2 * j < D; ++j) {
    BigRational term(BigInt(D) * ipow(D - 2 * j, D - 1),
                     factorial(j) * factorial(D - j));
    if (j % 2 == 0)
      c += term;
    else
      c -= term;
  }
  return c;
}

BigRational MomentPolynomial::at(const BigRational& gamma) const {
  BigRational acc = 0;
  for (size_t r = coeffs.size(); r-- > 0;) acc = acc * gamma + coeffs[r];
  return acc;
}

double MomentPolynomial::at(double gamma) const {
  double acc = 0;
  for (size_t r = coeffs.size(); r-- > 0;)
    acc = acc * gamma + static_cast<double>(coeffs[r]);
  return acc;
}

MomentPolynomial limit_moment_polynomial(int l, int cap) {
  if (l < 1) throw std::invalid_argument("limit_moment_polynomial: l >= 1 required");
  std::vector<BigRational> factor(static_cast<size_t>(l) + 1);
  for (int D = 1; D <= l; ++D) factor[D] = degree_factor(D);

  MomentPolynomial poly;
  poly.order = l;
  poly.coeffs.assign(static_cast<size_t>(l), BigRational(0));
  enumerate_plane_trees(
      l,
      [&](const PlaneTree& t) {
        BigRational w = 1;
        for (int deg : t.degree_profile()) w *= factor[deg];
        poly.coeffs[static_cast<size_t>(t.excess())] += w;
      },
      cap);
  return poly;
}

BigInt banded_class_size_leading(long long p, long long n, long long d,
                                 const std::vector<int>& profile, int r) {
  if (profile.empty()) throw std::invalid_argument("banded_class_size_leading: empty profile");
  long long l = 0;
  for (int deg : profile) {
    if (deg < 1) throw std::invalid_argument("banded_class_size_leading: degrees must be >= 1");
    l += deg;
  }
  if (r != l - static_cast<long long>(profile.size()))
    throw std::invalid_argument("banded_class_size_leading: r inconsistent with profile");
  if (d < l || p <= 2 * l * d)
    throw RegimeViolation("banded_class_size_leading: requires d >= l and p > 2*l*d");

  BigInt out = p;
  out *= ipow(BigInt(n), static_cast<int>(l) - r);
  for (int deg : profile)
    out *= count_restricted_compositions(static_cast<long long>(deg) * d, deg, 2 * d);
  return out;
}

BigRational mp_moment(int l, const BigRational& y) {
  if (l < 1) throw std::invalid_argument("mp_moment: l >= 1 required");
  BigRational acc = 0;
  BigRational yp = 1;
  for (int r = 0; r <= l - 1; ++r) {
    acc += BigRational(narayana_count(l, r)) * yp;
    yp *= y;
  }
  return acc;
}

double support_bound(double y) {
  if (!(y >= 0)) throw std::invalid_argument("support_bound: y >= 0 required");
  double s = 1.0 + std::sqrt(y);
  return s * s;
}

}  // namespace bandcov

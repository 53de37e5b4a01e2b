#pragma once

#include <vector>

#include "wittdiff/errors.hpp"
#include "wittdiff/fq.hpp"

namespace wittdiff {

// The exact integers binom(p,j)/p for j = 1..p-1; throws unless p is prime.
// C_p(X,Y) = (X^p + Y^p - (X+Y)^p)/p = -sum_j (binom(p,j)/p) X^(p-j) Y^j.
std::vector<long long> cp_int_coeffs(long p);

// Evaluates C_p(x, y) in any commutative ring whose elements support
// operator+, operator* and scaled_by_int. Symmetric in x and y.
template <class T>
T cp_eval(const T& x, const T& y, long p) {
  const std::vector<long long> c = cp_int_coeffs(p);
  std::vector<T> xp, yp;  // xp[k] = x^(k+1)
  xp.reserve(static_cast<size_t>(p - 1));
  yp.reserve(static_cast<size_t>(p - 1));
  xp.push_back(x);
  yp.push_back(y);
  for (long k = 2; k <= p - 1; ++k) {
    xp.push_back(xp.back() * x);
    yp.push_back(yp.back() * y);
  }
  T acc = (xp[static_cast<size_t>(p - 2)] * yp[0]).scaled_by_int(-c[0]);
  for (long j = 2; j <= p - 1; ++j) {
    acc = acc + (xp[static_cast<size_t>(p - 1 - j)] * yp[static_cast<size_t>(j - 1)])
                    .scaled_by_int(-c[static_cast<size_t>(j - 1)]);
  }
  return acc;
}

}  // namespace wittdiff

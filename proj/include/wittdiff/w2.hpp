#pragma once

#include <string>

#include "wittdiff/cp.hpp"
#include "wittdiff/fq.hpp"

namespace wittdiff {

// Element of W2(F_q): length-2 p-typical Witt coordinates (w0, w1).
// With (a0,a1)+(b0,b1) = (a0+b0, a1+b1+C_p(a0,b0)) and
// (a0,a1)*(b0,b1) = (a0b0, a0^p b1 + b0^p a1).
class W2Elem {
 public:
  W2Elem() = default;
  W2Elem(FqElem w0, FqElem w1);

  const FqElem& w0() const { return w0_; }
  const FqElem& w1() const { return w1_; }
  const FqPtr& field() const { return w0_.field(); }
  bool valid() const { return w0_.valid(); }
  bool is_zero() const { return w0_.is_zero() && w1_.is_zero(); }
  bool is_one() const { return w0_.is_one() && w1_.is_zero(); }
  bool is_unit() const { return !w0_.is_zero(); }
  // Lies in pW2, i.e. of the form (0, b).
  bool is_p_divisible() const { return w0_.is_zero(); }

  W2Elem operator+(const W2Elem& o) const;
  W2Elem operator-(const W2Elem& o) const;
  W2Elem operator*(const W2Elem& o) const;
  W2Elem operator-() const;
  W2Elem& operator+=(const W2Elem& o) { return *this = *this + o; }
  W2Elem& operator*=(const W2Elem& o) { return *this = *this * o; }
  bool operator==(const W2Elem& o) const;
  bool operator!=(const W2Elem& o) const { return !(*this == o); }

  W2Elem pow(long long e) const;
  W2Elem inverse() const;  // requires is_unit
  W2Elem scaled_by_int(long long n) const;

  // p * (*this) = (0, w0^p).
  W2Elem times_p() const;
  // For (0, b): the unique x0 in F_q with p*(x0, *) = (0, b), namely b^(1/p).
  // Throws unless is_p_divisible().
  FqElem div_p_exact() const;

  std::string str() const;

 private:
  FqElem w0_, w1_;
};

W2Elem w2_zero(const FqPtr& f);
W2Elem w2_one(const FqPtr& f);
W2Elem w2_from_int(const FqPtr& f, long long n);
// Teichmueller-style lift (a, 0).
W2Elem w2_teich(const FqElem& a);

inline W2Elem coeff_one(const W2Elem& sample) {
  return W2Elem(sample.field()->one(), sample.field()->zero());
}

// The Witt Frobenius (a0, a1) -> (a0^p, a1^p); identity for m = 1.
W2Elem frobenius_w2(const W2Elem& r);

// c * (phi(r) - r^p)/p, the exact division by p happening in W2.
// For m = 1 this is theta_{p,c}(r) = c (r - r^p)/p under the Z/p^2 bijection.
FqElem base_delta(const W2Elem& r, const FqElem& c);

// For m = 1 only: the ring isomorphism W2(F_p) <-> Z/p^2 given by
// (a0, a1) -> tau(a0) + p*a1, tau(a) = (integer lift of a)^p mod p^2.
long w2_to_zp2(const W2Elem& r);
W2Elem w2_from_zp2(const FqPtr& f, long n);

}  // namespace wittdiff

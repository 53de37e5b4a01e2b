#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "wittdiff/errors.hpp"

namespace wittdiff {

class Fq;
class FqElem;
using FqPtr = std::shared_ptr<const Fq>;

// Element of F_q, q = p^m: a residue of degree < m modulo the field's
// irreducible modulus, coefficients in canonical range [0, p).
class FqElem {
 public:
  static constexpr int kMaxDeg = 8;

  FqElem() = default;

  const FqPtr& field() const { return f_; }
  bool valid() const { return f_ != nullptr; }
  bool is_zero() const;
  bool is_one() const;
  int32_t coeff(int i) const { return c_[static_cast<size_t>(i)]; }

  FqElem operator+(const FqElem& o) const;
  FqElem operator-(const FqElem& o) const;
  FqElem operator*(const FqElem& o) const;
  FqElem operator/(const FqElem& o) const;
  FqElem operator-() const;
  FqElem& operator+=(const FqElem& o) { return *this = *this + o; }
  FqElem& operator-=(const FqElem& o) { return *this = *this - o; }
  FqElem& operator*=(const FqElem& o) { return *this = *this * o; }
  bool operator==(const FqElem& o) const;
  bool operator!=(const FqElem& o) const { return !(*this == o); }

  FqElem pow(long long e) const;
  FqElem inverse() const;
  FqElem frobenius() const;  // a -> a^p
  FqElem pth_root() const;   // inverse of frobenius (a -> a^(p^(m-1)))
  FqElem scaled_by_int(long long n) const;

  std::string str() const;

 private:
  FqPtr f_;
  std::array<int32_t, kMaxDeg> c_{};
  friend class Fq;
};

// The finite field F_q with a fixed monic irreducible modulus over Z/p.
// Immutable after construction; elements hold a shared_ptr back to it.
class Fq : public std::enable_shared_from_this<Fq> {
 public:
  // Default modulus: the monic degree-m polynomial with the smallest
  // base-p digit encoding of its low coefficients that is irreducible.
  static FqPtr make(long p, int m = 1);
  // modulus_low = c_0..c_{m-1} of the monic modulus x^m + sum c_i x^i.
  static FqPtr make(long p, const std::vector<long>& modulus_low);

  long p() const { return p_; }
  int m() const { return m_; }
  long q() const { return q_; }
  const std::vector<long>& modulus_low() const { return mod_; }

  FqElem zero() const;
  FqElem one() const;
  FqElem from_int(long long n) const;
  FqElem from_coeffs(const std::vector<long long>& c) const;
  FqElem gen() const;  // residue class of x for m >= 2; one() for m = 1
  FqElem element(long idx) const;       // base-p digits of idx, idx in [0, q)
  long index(const FqElem& a) const;    // inverse of element()
  FqElem random(std::mt19937_64& rng) const;

  bool same_field(const Fq& o) const;

 private:
  Fq(long p, int m, std::vector<long> mod);

  long p_;
  int m_;
  long q_;
  std::vector<long> mod_;  // c_0..c_{m-1}

  friend class FqElem;
};

// Throws StructuralError unless a and b belong to the same field.
void require_same_field(const FqElem& a, const FqElem& b);

// The multiplicative unit of the ring `sample` lives in (ADL hook for generic code).
inline FqElem coeff_one(const FqElem& sample) { return sample.field()->one(); }

bool is_prime(long n);

}  // namespace wittdiff

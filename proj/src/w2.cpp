#include "wittdiff/w2.hpp"

#include <map>
#include <mutex>

namespace wittdiff {

std::vector<long long> cp_int_coeffs(long p) {
  static std::mutex mu;
  static std::map<long, std::vector<long long>> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(p);
    if (it != cache.end()) return it->second;
  }
  if (!is_prime(p)) throw StructuralError("cp_int_coeffs: p must be prime, got " + std::to_string(p));
  // binom(p, j) built by the factorial-free product formula, divided by p exactly
  std::vector<long long> out;
  out.reserve(static_cast<size_t>(p - 1));
  long long b = 1;  // binom(p, j)
  for (long j = 1; j <= p - 1; ++j) {
    b = b * (p - j + 1) / j;  // exact at every step
    out.push_back(b / p);
  }
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(p, out);
  return out;
}

W2Elem::W2Elem(FqElem w0, FqElem w1) : w0_(std::move(w0)), w1_(std::move(w1)) {
  require_same_field(w0_, w1_);
}

W2Elem W2Elem::operator+(const W2Elem& o) const {
  require_same_field(w0_, o.w0_);
  long p = field()->p();
  return W2Elem(w0_ + o.w0_, w1_ + o.w1_ + cp_eval(w0_, o.w0_, p));
}

W2Elem W2Elem::operator-() const {
  // valid for odd p: C_p(a, -a) = 0
  return W2Elem(-w0_, -w1_);
}

W2Elem W2Elem::operator-(const W2Elem& o) const { return *this + (-o); }

W2Elem W2Elem::operator*(const W2Elem& o) const {
  require_same_field(w0_, o.w0_);
  long p = field()->p();
  return W2Elem(w0_ * o.w0_, w0_.pow(p) * o.w1_ + o.w0_.pow(p) * w1_);
}

bool W2Elem::operator==(const W2Elem& o) const { return w0_ == o.w0_ && w1_ == o.w1_; }

W2Elem W2Elem::pow(long long e) const {
  if (e < 0) return inverse().pow(-e);
  W2Elem r = w2_one(field());
  W2Elem b = *this;
  while (e > 0) {
    if (e & 1) r = r * b;
    b = b * b;
    e >>= 1;
  }
  return r;
}

W2Elem W2Elem::inverse() const {
  if (!is_unit()) throw StructuralError("W2Elem: inverse of a non-unit");
  long p = field()->p();
  FqElem i0 = w0_.inverse();
  return W2Elem(i0, -(w1_ * i0.pow(2 * p)));
}

W2Elem W2Elem::scaled_by_int(long long n) const {
  return w2_from_int(field(), n) * *this;
}

W2Elem W2Elem::times_p() const {
  long p = field()->p();
  return W2Elem(field()->zero(), w0_.pow(p));
}

FqElem W2Elem::div_p_exact() const {
  if (!is_p_divisible())
    throw StructuralError("W2Elem: exact division by p of an element not in pW2");
  return w1_.pth_root();
}

std::string W2Elem::str() const {
  if (!valid()) return "<invalid>";
  if (field()->m() == 1) return std::to_string(w2_to_zp2(*this));
  return "(" + w0_.str() + "," + w1_.str() + ")";
}

W2Elem w2_zero(const FqPtr& f) { return W2Elem(f->zero(), f->zero()); }
W2Elem w2_one(const FqPtr& f) { return W2Elem(f->one(), f->zero()); }

W2Elem w2_teich(const FqElem& a) { return W2Elem(a, a.field()->zero()); }

W2Elem w2_from_int(const FqPtr& f, long long n) {
  long long p2 = f->p() * f->p();
  long long r = n % p2;
  if (r < 0) r += p2;
  // binary doubling over Witt addition
  W2Elem acc = w2_zero(f);
  W2Elem b = w2_one(f);
  while (r > 0) {
    if (r & 1) acc = acc + b;
    b = b + b;
    r >>= 1;
  }
  return acc;
}

W2Elem frobenius_w2(const W2Elem& r) {
  return W2Elem(r.w0().frobenius(), r.w1().frobenius());
}

FqElem base_delta(const W2Elem& r, const FqElem& c) {
  long p = r.field()->p();
  W2Elem d = frobenius_w2(r) - r.pow(p);
  return c * d.div_p_exact();
}

long w2_to_zp2(const W2Elem& r) {
  if (r.field()->m() != 1) throw StructuralError("w2_to_zp2: defined only for m = 1");
  long p = r.field()->p();
  long a0 = r.w0().coeff(0), a1 = r.w1().coeff(0);
  long tau = 1;
  for (long i = 0; i < p; ++i) tau = tau * a0 % (p * p);
  return (tau + p * a1) % (p * p);
}

W2Elem w2_from_zp2(const FqPtr& f, long n) {
  if (f->m() != 1) throw StructuralError("w2_from_zp2: defined only for m = 1");
  return w2_from_int(f, n);
}

}  // namespace wittdiff

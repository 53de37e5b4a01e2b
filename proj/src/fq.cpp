#include "wittdiff/fq.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace wittdiff {

bool is_prime(long n) {
  if (n < 2) return false;
  for (long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

namespace {

// Dense univariate arithmetic over Z/p, used only for modulus handling.
using UPoly = std::vector<long>;  // c[i] = coefficient of x^i, trailing zeros trimmed

void utrim(UPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

UPoly umul_mod(const UPoly& a, const UPoly& b, const UPoly& f, long p) {
  if (a.empty() || b.empty()) return {};
  UPoly r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  // reduce mod monic f
  long df = static_cast<long>(f.size()) - 1;
  for (long i = static_cast<long>(r.size()) - 1; i >= df; --i) {
    long c = r[static_cast<size_t>(i)];
    if (c == 0) continue;
    r[static_cast<size_t>(i)] = 0;
    for (long j = 0; j < df; ++j)
      r[static_cast<size_t>(i - df + j)] =
          ((r[static_cast<size_t>(i - df + j)] - c * f[static_cast<size_t>(j)]) % p + p) % p;
  }
  utrim(r);
  return r;
}

UPoly upow_mod(UPoly base, long long e, const UPoly& f, long p) {
  UPoly r{1};
  while (e > 0) {
    if (e & 1) r = umul_mod(r, base, f, p);
    base = umul_mod(base, base, f, p);
    e >>= 1;
  }
  return r;
}

UPoly ugcd(UPoly a, UPoly b, long p) {
  auto inv_mod = [p](long x) {
    long r = 1, e = p - 2, bse = ((x % p) + p) % p;
    while (e) {
      if (e & 1) r = r * bse % p;
      bse = bse * bse % p;
      e >>= 1;
    }
    return r;
  };
  utrim(a);
  utrim(b);
  while (!b.empty()) {
    // a mod b with b made monic on the fly
    long lb = b.back();
    long ilb = inv_mod(lb);
    while (a.size() >= b.size()) {
      long c = a.back() * ilb % p;
      size_t off = a.size() - b.size();
      for (size_t j = 0; j < b.size(); ++j) a[off + j] = ((a[off + j] - c * b[j]) % p + p) % p;
      utrim(a);
      if (a.empty()) break;
    }
    std::swap(a, b);
  }
  return a;
}

// Monic f of degree m >= 1 over Z/p; full irreducibility test:
// x^(p^m) = x mod f, and gcd(x^(p^(m/r)) - x, f) = 1 for prime r | m.
bool irreducible(const UPoly& f, long p) {
  long m = static_cast<long>(f.size()) - 1;
  if (m < 1) return false;
  if (m == 1) return true;
  UPoly x{0, 1};
  // x^(p^m) mod f
  UPoly t = x;
  for (long i = 0; i < m; ++i) t = upow_mod(t, p, f, p);
  UPoly diff = t;
  diff.resize(std::max<size_t>(diff.size(), 2), 0);
  diff[1] = ((diff[1] - 1) % p + p) % p;
  utrim(diff);
  if (!diff.empty()) return false;
  for (long r = 2; r <= m; ++r) {
    if (m % r != 0 || !is_prime(r)) continue;
    UPoly u = x;
    for (long i = 0; i < m / r; ++i) u = upow_mod(u, p, f, p);
    UPoly d = u;
    d.resize(std::max<size_t>(d.size(), 2), 0);
    d[1] = ((d[1] - 1) % p + p) % p;
    utrim(d);
    UPoly g = ugcd(d, f, p);
    if (g.size() != 1) return false;
  }
  return true;
}

}  // namespace

Fq::Fq(long p, int m, std::vector<long> mod) : p_(p), m_(m), mod_(std::move(mod)) {
  q_ = 1;
  for (int i = 0; i < m_; ++i) q_ *= p_;
}

FqPtr Fq::make(long p, int m) {
  if (!is_prime(p)) throw StructuralError("Fq: p must be prime, got " + std::to_string(p));
  if (p == 2) throw StructuralError("Fq: p = 2 is not supported (odd primes only)");
  if (m < 1 || m > FqElem::kMaxDeg)
    throw StructuralError("Fq: extension degree m out of supported range");
  // smallest base-p encoding of the low coefficients that gives an irreducible monic poly
  long qm = 1;
  for (int i = 0; i < m; ++i) qm *= p;
  for (long enc = 0; enc < qm; ++enc) {
    std::vector<long> low(static_cast<size_t>(m));
    long t = enc;
    for (int i = 0; i < m; ++i) {
      low[static_cast<size_t>(i)] = t % p;
      t /= p;
    }
    UPoly f(low.begin(), low.end());
    f.push_back(1);
    if (irreducible(f, p)) return make(p, low);
  }
  throw StructuralError("Fq: no irreducible modulus found");  // unreachable
}

FqPtr Fq::make(long p, const std::vector<long>& modulus_low) {
  if (!is_prime(p)) throw StructuralError("Fq: p must be prime, got " + std::to_string(p));
  if (p == 2) throw StructuralError("Fq: p = 2 is not supported (odd primes only)");
  int m = static_cast<int>(modulus_low.size());
  if (m < 1 || m > FqElem::kMaxDeg)
    throw StructuralError("Fq: extension degree m out of supported range");
  std::vector<long> low(modulus_low);
  for (auto& c : low) c = ((c % p) + p) % p;
  UPoly f(low.begin(), low.end());
  f.push_back(1);
  if (!irreducible(f, p))
    throw StructuralError("Fq: supplied modulus is not irreducible over Z/" + std::to_string(p));
  return FqPtr(new Fq(p, m, std::move(low)));
}

bool Fq::same_field(const Fq& o) const {
  return this == &o || (p_ == o.p_ && m_ == o.m_ && mod_ == o.mod_);
}

void require_same_field(const FqElem& a, const FqElem& b) {
  if (!a.valid() || !b.valid()) throw StructuralError("FqElem: uninitialized element");
  if (!a.field()->same_field(*b.field()))
    throw StructuralError("FqElem: elements belong to different fields");
}

FqElem Fq::zero() const {
  FqElem e;
  e.f_ = shared_from_this();
  return e;
}

FqElem Fq::one() const { return from_int(1); }

FqElem Fq::from_int(long long n) const {
  FqElem e = zero();
  long long r = n % p_;
  if (r < 0) r += p_;
  e.c_[0] = static_cast<int32_t>(r);
  return e;
}

FqElem Fq::from_coeffs(const std::vector<long long>& c) const {
  if (static_cast<int>(c.size()) > m_) throw StructuralError("Fq::from_coeffs: too many coefficients");
  FqElem e = zero();
  for (size_t i = 0; i < c.size(); ++i) {
    long long r = c[i] % p_;
    if (r < 0) r += p_;
    e.c_[i] = static_cast<int32_t>(r);
  }
  return e;
}

FqElem Fq::gen() const {
  if (m_ == 1) return one();
  FqElem e = zero();
  e.c_[1] = 1;
  return e;
}

FqElem Fq::element(long idx) const {
  FqElem e = zero();
  for (int i = 0; i < m_; ++i) {
    e.c_[static_cast<size_t>(i)] = static_cast<int32_t>(idx % p_);
    idx /= p_;
  }
  return e;
}

long Fq::index(const FqElem& a) const {
  long idx = 0;
  for (int i = m_ - 1; i >= 0; --i) idx = idx * p_ + a.c_[static_cast<size_t>(i)];
  return idx;
}

FqElem Fq::random(std::mt19937_64& rng) const {
  return element(static_cast<long>(rng() % static_cast<unsigned long long>(q_)));
}

bool FqElem::is_zero() const {
  if (!f_) throw StructuralError("FqElem: uninitialized element");
  for (int i = 0; i < f_->m(); ++i)
    if (c_[static_cast<size_t>(i)] != 0) return false;
  return true;
}

bool FqElem::is_one() const {
  if (!f_) throw StructuralError("FqElem: uninitialized element");
  if (c_[0] != 1) return false;
  for (int i = 1; i < f_->m(); ++i)
    if (c_[static_cast<size_t>(i)] != 0) return false;
  return true;
}

FqElem FqElem::operator+(const FqElem& o) const {
  require_same_field(*this, o);
  FqElem r = *this;
  long p = f_->p();
  for (int i = 0; i < f_->m(); ++i)
    r.c_[static_cast<size_t>(i)] = static_cast<int32_t>((r.c_[static_cast<size_t>(i)] + o.c_[static_cast<size_t>(i)]) % p);
  return r;
}

FqElem FqElem::operator-() const {
  if (!f_) throw StructuralError("FqElem: uninitialized element");
  FqElem r = *this;
  long p = f_->p();
  for (int i = 0; i < f_->m(); ++i)
    r.c_[static_cast<size_t>(i)] = static_cast<int32_t>(((p - r.c_[static_cast<size_t>(i)]) % p));
  return r;
}

FqElem FqElem::operator-(const FqElem& o) const { return *this + (-o); }

FqElem FqElem::operator*(const FqElem& o) const {
  require_same_field(*this, o);
  long p = f_->p();
  int m = f_->m();
  FqElem r = f_->zero();
  if (m == 1) {
    r.c_[0] = static_cast<int32_t>((static_cast<long long>(c_[0]) * o.c_[0]) % p);
    return r;
  }
  std::array<long long, 2 * kMaxDeg> t{};
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      t[static_cast<size_t>(i + j)] += static_cast<long long>(c_[static_cast<size_t>(i)]) * o.c_[static_cast<size_t>(j)];
  const auto& mod = f_->modulus_low();
  for (int i = 2 * m - 2; i >= m; --i) {
    long long c = t[static_cast<size_t>(i)] % p;
    if (c == 0) continue;
    t[static_cast<size_t>(i)] = 0;
    for (int j = 0; j < m; ++j)
      t[static_cast<size_t>(i - m + j)] -= c * mod[static_cast<size_t>(j)];
  }
  for (int i = 0; i < m; ++i) {
    long long v = t[static_cast<size_t>(i)] % p;
    if (v < 0) v += p;
    r.c_[static_cast<size_t>(i)] = static_cast<int32_t>(v);
  }
  return r;
}

FqElem FqElem::pow(long long e) const {
  if (!f_) throw StructuralError("FqElem: uninitialized element");
  if (e < 0) return inverse().pow(-e);
  FqElem r = f_->one();
  FqElem b = *this;
  while (e > 0) {
    if (e & 1) r = r * b;
    b = b * b;
    e >>= 1;
  }
  return r;
}

FqElem FqElem::inverse() const {
  if (is_zero()) throw StructuralError("FqElem: division by zero");
  return pow(f_->q() - 2);
}

FqElem FqElem::operator/(const FqElem& o) const { return *this * o.inverse(); }

FqElem FqElem::frobenius() const { return pow(f_->p()); }

FqElem FqElem::pth_root() const {
  long long e = 1;
  for (int i = 0; i < f_->m() - 1; ++i) e *= f_->p();
  return pow(e);
}

FqElem FqElem::scaled_by_int(long long n) const {
  if (!f_) throw StructuralError("FqElem: uninitialized element");
  long long r = n % f_->p();
  if (r < 0) r += f_->p();
  return *this * f_->from_int(r);
}

bool FqElem::operator==(const FqElem& o) const {
  require_same_field(*this, o);
  for (int i = 0; i < f_->m(); ++i)
    if (c_[static_cast<size_t>(i)] != o.c_[static_cast<size_t>(i)]) return false;
  return true;
}

std::string FqElem::str() const {
  if (!f_) return "<invalid>";
  if (f_->m() == 1) return std::to_string(c_[0]);
  std::ostringstream os;
  bool first = true;
  for (int i = f_->m() - 1; i >= 0; --i) {
    int32_t c = c_[static_cast<size_t>(i)];
    if (c == 0) continue;
    if (!first) os << "+";
    first = false;
    if (i == 0) {
      os << c;
    } else {
      if (c != 1) os << c << "*";
      os << "t";
      if (i > 1) os << "^" << i;
    }
  }
  if (first) os << "0";
  return os.str();
}

}  // namespace wittdiff

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "wittdiff/errors.hpp"

namespace wittdiff {

enum class MonomialOrder { Grevlex, Lex };

struct Monomial {
  std::vector<uint16_t> e;

  explicit Monomial(int nvars = 0) : e(static_cast<size_t>(nvars), 0) {}
  int nvars() const { return static_cast<int>(e.size()); }
  long deg() const {
    long d = 0;
    for (auto x : e) d += x;
    return d;
  }
  bool is_one() const {
    for (auto x : e)
      if (x) return false;
    return true;
  }
  bool divides(const Monomial& o) const {
    for (size_t i = 0; i < e.size(); ++i)
      if (e[i] > o.e[i]) return false;
    return true;
  }
  Monomial operator*(const Monomial& o) const {
    Monomial r = *this;
    for (size_t i = 0; i < e.size(); ++i) {
      long s = static_cast<long>(r.e[i]) + o.e[i];
      if (s > 60000) throw StructuralError("Monomial: exponent overflow");
      r.e[i] = static_cast<uint16_t>(s);
    }
    return r;
  }
  // quotient *this / o; caller must ensure o.divides(*this)
  Monomial operator/(const Monomial& o) const {
    Monomial r = *this;
    for (size_t i = 0; i < e.size(); ++i) r.e[i] = static_cast<uint16_t>(r.e[i] - o.e[i]);
    return r;
  }
  bool operator==(const Monomial& o) const { return e == o.e; }
  bool operator!=(const Monomial& o) const { return e != o.e; }
};

// -1 / 0 / +1 for a < b / a == b / a > b in the given order.
inline int mono_cmp(const Monomial& a, const Monomial& b, MonomialOrder ord) {
  if (ord == MonomialOrder::Grevlex) {
    long da = a.deg(), db = b.deg();
    if (da != db) return da < db ? -1 : 1;
    for (int i = a.nvars() - 1; i >= 0; --i) {
      int d = static_cast<int>(a.e[static_cast<size_t>(i)]) - static_cast<int>(b.e[static_cast<size_t>(i)]);
      if (d != 0) return d > 0 ? -1 : 1;  // rightmost nonzero difference negative => bigger
    }
    return 0;
  }
  for (int i = 0; i < a.nvars(); ++i) {
    int d = static_cast<int>(a.e[static_cast<size_t>(i)]) - static_cast<int>(b.e[static_cast<size_t>(i)]);
    if (d != 0) return d > 0 ? 1 : -1;
  }
  return 0;
}

struct MonoLess {
  MonomialOrder ord;
  bool operator()(const Monomial& a, const Monomial& b) const { return mono_cmp(a, b, ord) < 0; }
};

// Sparse multivariate polynomial with coefficients in C (FqElem or W2Elem).
// Terms are kept sorted descending in the fixed monomial order; no zero terms.
template <class C>
class MPoly {
 public:
  struct Term {
    Monomial m;
    C c;
  };

  MPoly() : nvars_(-1), ord_(MonomialOrder::Grevlex) {}
  MPoly(int nvars, MonomialOrder ord) : nvars_(nvars), ord_(ord) {}

  static MPoly zero(int nvars, MonomialOrder ord) { return MPoly(nvars, ord); }
  static MPoly constant(int nvars, MonomialOrder ord, const C& c) {
    MPoly r(nvars, ord);
    if (!c.is_zero()) r.terms_.push_back({Monomial(nvars), c});
    return r;
  }
  static MPoly variable(int nvars, MonomialOrder ord, int idx, const C& one) {
    MPoly r(nvars, ord);
    Monomial m(nvars);
    m.e[static_cast<size_t>(idx)] = 1;
    r.terms_.push_back({m, one});
    return r;
  }
  static MPoly monomial(int nvars, MonomialOrder ord, const Monomial& m, const C& c) {
    MPoly r(nvars, ord);
    if (!c.is_zero()) r.terms_.push_back({m, c});
    return r;
  }

  int nvars() const { return nvars_; }
  MonomialOrder order() const { return ord_; }
  bool is_zero() const { return terms_.empty(); }
  size_t num_terms() const { return terms_.size(); }
  const std::vector<Term>& terms() const { return terms_; }
  const Term& leading() const {
    if (terms_.empty()) throw StructuralError("MPoly: leading term of zero");
    return terms_.front();
  }
  long deg() const {
    long d = -1;
    for (const auto& t : terms_) d = std::max(d, t.m.deg());
    return d;
  }
  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_[0].m.is_one());
  }
  // constant coefficient (the coefficient of the monomial 1); needs a zero to return
  C constant_coeff(const C& zero) const {
    for (const auto& t : terms_)
      if (t.m.is_one()) return t.c;
    return zero;
  }
  C coeff_of(const Monomial& m, const C& zero) const {
    for (const auto& t : terms_)
      if (t.m == m) return t.c;
    return zero;
  }

  MPoly operator+(const MPoly& o) const {
    check_compat(o);
    MPoly r(nvars_, ord_);
    r.terms_.reserve(terms_.size() + o.terms_.size());
    size_t i = 0, j = 0;
    while (i < terms_.size() && j < o.terms_.size()) {
      int c = mono_cmp(terms_[i].m, o.terms_[j].m, ord_);
      if (c > 0) {
        r.terms_.push_back(terms_[i++]);
      } else if (c < 0) {
        r.terms_.push_back(o.terms_[j++]);
      } else {
        C s = terms_[i].c + o.terms_[j].c;
        if (!s.is_zero()) r.terms_.push_back({terms_[i].m, s});
        ++i;
        ++j;
      }
    }
    for (; i < terms_.size(); ++i) r.terms_.push_back(terms_[i]);
    for (; j < o.terms_.size(); ++j) r.terms_.push_back(o.terms_[j]);
    return r;
  }

  MPoly operator-() const {
    MPoly r = *this;
    for (auto& t : r.terms_) t.c = -t.c;
    return r;
  }

  MPoly operator-(const MPoly& o) const { return *this + (-o); }

  MPoly operator*(const MPoly& o) const {
    check_compat(o);
    std::map<Monomial, C, MonoLess> acc{MonoLess{ord_}};
    for (const auto& a : terms_)
      for (const auto& b : o.terms_) {
        Monomial m = a.m * b.m;
        C c = a.c * b.c;
        auto it = acc.find(m);
        if (it == acc.end()) {
          if (!c.is_zero()) acc.emplace(m, c);
        } else {
          it->second = it->second + c;
          if (it->second.is_zero()) acc.erase(it);
        }
      }
    return from_map(nvars_, ord_, acc);
  }

  MPoly scaled(const C& c) const {
    MPoly r(nvars_, ord_);
    if (c.is_zero()) return r;
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) {
      C x = t.c * c;
      if (!x.is_zero()) r.terms_.push_back({t.m, x});
    }
    return r;
  }

  MPoly scaled_by_int(long long n) const {
    MPoly r(nvars_, ord_);
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) {
      C x = t.c.scaled_by_int(n);
      if (!x.is_zero()) r.terms_.push_back({t.m, x});
    }
    return r;
  }

  MPoly times_monomial(const Monomial& m, const C& c) const {
    MPoly r(nvars_, ord_);
    if (c.is_zero()) return r;
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) {
      C x = t.c * c;
      if (!x.is_zero()) r.terms_.push_back({t.m * m, x});
    }
    return r;
  }

  MPoly pow(long long e) const {
    if (e < 0) throw StructuralError("MPoly: negative exponent");
    if (nvars_ < 0) throw StructuralError("MPoly: uninitialized");
    if (e == 0) {
      if (terms_.empty()) throw StructuralError("MPoly: 0^0 has no coefficient context");
      return constant(nvars_, ord_, coeff_one(terms_[0].c));
    }
    MPoly r;
    bool have = false;
    MPoly b = *this;
    while (true) {
      if (e & 1) {
        r = have ? r * b : b;
        have = true;
      }
      e >>= 1;
      if (!e) break;
      b = b * b;
    }
    return r;
  }

  bool operator==(const MPoly& o) const {
    check_compat(o);
    if (terms_.size() != o.terms_.size()) return false;
    for (size_t i = 0; i < terms_.size(); ++i)
      if (terms_[i].m != o.terms_[i].m || !(terms_[i].c == o.terms_[i].c)) return false;
    return true;
  }
  bool operator!=(const MPoly& o) const { return !(*this == o); }

  // Applies f to every coefficient, keeping monomials; drops zeros.
  template <class C2, class F>
  MPoly<C2> map_coeffs(F f) const {
    MPoly<C2> r(nvars_, ord_);
    for (const auto& t : terms_) {
      C2 c = f(t.c);
      if (!c.is_zero()) r.add_term(t.m, c);
    }
    return r;
  }

  // Substitutes images[i] for variable i, mapping coefficients through f.
  // All images must share one shape (nvars/order of the target ring).
  template <class C2, class F>
  MPoly<C2> substituted(const std::vector<MPoly<C2>>& images, F f) const {
    if (static_cast<int>(images.size()) != nvars_)
      throw StructuralError("MPoly: substitution image count mismatch");
    int tn;
    MonomialOrder to;
    if (!images.empty()) {
      tn = images[0].nvars();
      to = images[0].order();
    } else {
      tn = 0;
      to = ord_;
    }
    MPoly<C2> acc(tn, to);
    for (const auto& t : terms_) {
      MPoly<C2> term = MPoly<C2>::constant(tn, to, f(t.c));
      for (int i = 0; i < nvars_; ++i) {
        uint16_t e = t.m.e[static_cast<size_t>(i)];
        if (e) term = term * images[static_cast<size_t>(i)].pow(e);
      }
      acc = acc + term;
    }
    return acc;
  }

  // Internal/raw: append a term assumed not already present; re-sorts lazily.
  void add_term(const Monomial& m, const C& c) {
    if (c.is_zero()) return;
    terms_.push_back({m, c});
    normalize();
  }

 private:
  static MPoly from_map(int nvars, MonomialOrder ord, const std::map<Monomial, C, MonoLess>& m) {
    MPoly r(nvars, ord);
    r.terms_.reserve(m.size());
    for (auto it = m.rbegin(); it != m.rend(); ++it) r.terms_.push_back({it->first, it->second});
    return r;
  }

  void check_compat(const MPoly& o) const {
    if (nvars_ != o.nvars_ || ord_ != o.ord_)
      throw StructuralError("MPoly: mixing polynomials from different rings");
  }

  void normalize() {
    std::sort(terms_.begin(), terms_.end(), [this](const Term& a, const Term& b) {
      return mono_cmp(a.m, b.m, ord_) > 0;
    });
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (auto& t : terms_) {
      if (!out.empty() && out.back().m == t.m) {
        out.back().c = out.back().c + t.c;
        if (out.back().c.is_zero()) out.pop_back();
      } else if (!t.c.is_zero()) {
        out.push_back(std::move(t));
      }
    }
    terms_ = std::move(out);
  }

  int nvars_;
  MonomialOrder ord_;
  std::vector<Term> terms_;
};

// ---- parsing ----

// Minimal expression AST shared by the F_q and W2 polynomial parsers.
struct PolyAst {
  enum Kind { Int, Var, Add, Sub, Mul, Pow, Neg } kind;
  long long ival = 0;          // Int
  int var = -1;                // Var
  long long exp = 0;           // Pow
  std::unique_ptr<PolyAst> a, b;
};

// Parses the polynomial grammar: integer coefficients, declared variables,
// + - * ^ and parentheses; the name `p` denotes the prime constant.
// Throws ParseError with line/column on malformed input.
std::unique_ptr<PolyAst> parse_poly_ast(const std::string& text, const std::vector<std::string>& vars);

// Rewrites the reserved `p` nodes into integer literals of the given prime.
void resolve_prime_constant(PolyAst& root, long p);

template <class C, class FromInt>
MPoly<C> eval_poly_ast(const PolyAst& n, int nvars, MonomialOrder ord, const C& one, FromInt from_int) {
  using P = MPoly<C>;
  switch (n.kind) {
    case PolyAst::Int:
      return P::constant(nvars, ord, from_int(n.ival));
    case PolyAst::Var:
      return P::variable(nvars, ord, n.var, one);
    case PolyAst::Add:
      return eval_poly_ast(*n.a, nvars, ord, one, from_int) + eval_poly_ast(*n.b, nvars, ord, one, from_int);
    case PolyAst::Sub:
      return eval_poly_ast(*n.a, nvars, ord, one, from_int) - eval_poly_ast(*n.b, nvars, ord, one, from_int);
    case PolyAst::Mul:
      return eval_poly_ast(*n.a, nvars, ord, one, from_int) * eval_poly_ast(*n.b, nvars, ord, one, from_int);
    case PolyAst::Pow:
      return eval_poly_ast(*n.a, nvars, ord, one, from_int).pow(n.exp);
    case PolyAst::Neg:
      return -eval_poly_ast(*n.a, nvars, ord, one, from_int);
  }
  throw StructuralError("eval_poly_ast: bad node");
}

template <class C>
std::string poly_str(const MPoly<C>& f, const std::vector<std::string>& vars) {
  if (f.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : f.terms()) {
    if (!first) os << " + ";
    first = false;
    std::string cs = t.c.str();
    bool unit = t.c.is_one();
    bool printed = false;
    if (!unit || t.m.is_one()) {
      bool needs_parens = cs.find('+') != std::string::npos;
      if (needs_parens) os << "(" << cs << ")";
      else os << cs;
      printed = true;
    }
    for (int i = 0; i < t.m.nvars(); ++i) {
      uint16_t e = t.m.e[static_cast<size_t>(i)];
      if (!e) continue;
      if (printed) os << "*";
      os << vars[static_cast<size_t>(i)];
      if (e > 1) os << "^" << e;
      printed = true;
    }
  }
  return os.str();
}

}  // namespace wittdiff

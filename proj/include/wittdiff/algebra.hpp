#pragma once

#include <atomic>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "wittdiff/groebner.hpp"
#include "wittdiff/w2.hpp"

namespace wittdiff {

using W2Poly = MPoly<W2Elem>;

class FqAlgebra;
class FPAlgebra;
using FqAlgebraPtr = std::shared_ptr<const FqAlgebra>;
using FPAlgebraPtr = std::shared_ptr<const FPAlgebra>;

// Finitely presented algebra over F_q: F_q[vars]/(gens), with a Groebner
// basis giving canonical normal forms on the staircase monomials.
class FqAlgebra : public std::enable_shared_from_this<FqAlgebra> {
 public:
  static FqAlgebraPtr make(const FqPtr& field, std::vector<std::string> vars,
                           std::vector<FqPoly> gens,
                           MonomialOrder ord = MonomialOrder::Grevlex);

  const FqPtr& field() const { return field_; }
  int nvars() const { return static_cast<int>(vars_.size()); }
  const std::vector<std::string>& vars() const { return vars_; }
  const std::vector<FqPoly>& gens() const { return gens_; }
  const GroebnerBasis& gb() const { return gb_; }
  MonomialOrder order() const { return ord_; }

  FqPoly nf(const FqPoly& f) const;
  bool is_zero(const FqPoly& f) const { return nf(f).is_zero(); }
  FqPoly zero() const { return FqPoly(nvars(), ord_); }
  FqPoly one() const { return FqPoly::constant(nvars(), ord_, field_->one()); }
  FqPoly from_int(long long n) const { return FqPoly::constant(nvars(), ord_, field_->from_int(n)); }
  FqPoly from_scalar(const FqElem& c) const { return FqPoly::constant(nvars(), ord_, c); }
  FqPoly var(int i) const { return FqPoly::variable(nvars(), ord_, i, field_->one()); }

  FqPoly parse(const std::string& text) const;
  std::string str(const FqPoly& f) const { return poly_str(f, vars_); }

  std::vector<Monomial> staircase(long maxdeg) const { return gb_.staircase(maxdeg); }
  // random normal-form element supported on the staircase up to maxdeg
  FqPoly random_element(std::mt19937_64& rng, long maxdeg) const;

  // Geometric smoothness of Spec over F_q by the Jacobian criterion; the
  // presentation is assumed to be a complete intersection (nonzero gens).
  bool jacobian_smooth() const;

  bool same_ring(const FqAlgebra& o) const;

 private:
  FqAlgebra() = default;
  FqPtr field_;
  std::vector<std::string> vars_;
  std::vector<FqPoly> gens_;
  MonomialOrder ord_ = MonomialOrder::Grevlex;
  GroebnerBasis gb_;
};

// d/d(var) over F_q.
FqPoly fq_partial(const FqPoly& f, int var);

struct LocalizationStep {
  W2Poly s;      // the inverted element, in the enlarged variable set
  int inv_var;   // index of the adjoined inverse variable
};

// Finitely presented flat algebra over W2(F_q): W2[vars]/(gens), with its
// mod-p reduction A0 and a W2-lifted Groebner normal form. Flatness is
// certified at construction by an exact syzygy-based p-torsion test.
class FPAlgebra : public std::enable_shared_from_this<FPAlgebra> {
 public:
  static FPAlgebraPtr make(const FqPtr& field, std::vector<std::string> vars,
                           std::vector<W2Poly> gens,
                           MonomialOrder ord = MonomialOrder::Grevlex,
                           bool require_flat = true);

  const FqPtr& field() const { return field_; }
  int nvars() const { return static_cast<int>(vars_.size()); }
  const std::vector<std::string>& vars() const { return vars_; }
  const std::vector<W2Poly>& gens() const { return gens_; }
  MonomialOrder order() const { return ord_; }
  const FqAlgebraPtr& mod_p() const { return a0_; }
  bool flat() const { return flat_; }
  bool smooth() const;  // flat + Jacobian-smooth reduction
  const std::vector<LocalizationStep>& history() const { return history_; }
  const std::vector<W2Poly>& lifted_gb() const { return lifted_gb_; }

  // Canonical two-stage normal form: n0 + p*lift(n1) with n0, n1 reduced
  // against the mod-p Groebner basis. Detects zero exactly when flat.
  W2Poly normal_form(const W2Poly& e) const;
  bool is_zero(const W2Poly& e) const { return normal_form(e).is_zero(); }

  W2Poly zero() const { return W2Poly(nvars(), ord_); }
  W2Poly one() const { return W2Poly::constant(nvars(), ord_, w2_one(field_)); }
  W2Poly from_int(long long n) const { return W2Poly::constant(nvars(), ord_, w2_from_int(field_, n)); }
  W2Poly from_scalar(const W2Elem& c) const { return W2Poly::constant(nvars(), ord_, c); }
  W2Poly var(int i) const { return W2Poly::variable(nvars(), ord_, i, w2_one(field_)); }
  int var_index(const std::string& name) const;

  W2Poly parse(const std::string& text) const;
  std::string str(const W2Poly& f) const { return poly_str(f, vars_); }

  // coefficientwise maps between levels
  FqPoly reduce0(const W2Poly& e) const;          // w0 parts
  W2Poly lift0(const FqPoly& f) const;            // c -> (c, 0)
  FqPoly div_p(const W2Poly& e) const;            // (0,b) -> b^(1/p); throws if not p-divisible
  W2Poly times_p_lift(const FqPoly& f) const;     // c -> (0, c^p), i.e. p * lift0(f)

  // Adjoins a fresh inverse of s; throws DegenerateLocalizationError when s
  // vanishes in A0. The new variable is named <var>_inv for a plain variable
  // s, s<k>_inv otherwise.
  FPAlgebraPtr localize(const W2Poly& s) const;

  bool same_ring(const FPAlgebra& o) const;

 private:
  FPAlgebra() = default;
  FqPtr field_;
  std::vector<std::string> vars_;
  std::vector<W2Poly> gens_;
  MonomialOrder ord_ = MonomialOrder::Grevlex;
  FqAlgebraPtr a0_;
  std::vector<W2Poly> lifted_gb_;  // aligned with a0_->gb().g, each in the W2 ideal
  bool flat_ = false;
  mutable std::atomic<int> smooth_cache_{-1};  // -1 unknown, else 0/1
  std::vector<LocalizationStep> history_;
};

// R-algebra homomorphism between finitely presented W2-algebras, given by
// variable images; generators are checked to map to zero at construction.
struct AlgebraHom {
  FPAlgebraPtr src, dst;
  std::vector<W2Poly> images;

  AlgebraHom(FPAlgebraPtr s, FPAlgebraPtr d, std::vector<W2Poly> imgs, bool verify = true);

  W2Poly apply(const W2Poly& e) const;
  // (*this) after g: src of g, dst of *this
  AlgebraHom compose(const AlgebraHom& g) const;
  static AlgebraHom identity(const FPAlgebraPtr& a);
};

// Same at the F_q level.
struct FqAlgebraHom {
  FqAlgebraPtr src, dst;
  std::vector<FqPoly> images;

  FqAlgebraHom() = default;
  FqAlgebraHom(FqAlgebraPtr s, FqAlgebraPtr d, std::vector<FqPoly> imgs, bool verify = true);

  FqPoly apply(const FqPoly& e) const;
  FqAlgebraHom compose(const FqAlgebraHom& g) const;
  static FqAlgebraHom identity(const FqAlgebraPtr& a);
};

// Reduction of a W2-level hom to the F_q level.
FqAlgebraHom reduce_hom(const AlgebraHom& h);

}  // namespace wittdiff

#pragma once

#include <optional>

#include "wittdiff/differentials.hpp"

namespace wittdiff {

// Element (x0, x1) of the interpolated ring U_c(D0), tagged with its c.
// Addition corrects by c*C_p(x0, y0); multiplication is c-independent.
struct UCElem {
  FqAlgebraPtr D0;
  FqPoly x0, x1;
  FqPoly c;
};

UCElem uc_make(const FqAlgebraPtr& D0, FqPoly x0, FqPoly x1, FqPoly c);
UCElem uc_zero(const FqAlgebraPtr& D0, const FqPoly& c);
UCElem uc_one(const FqAlgebraPtr& D0, const FqPoly& c);

UCElem uc_add(const UCElem& a, const UCElem& b);
UCElem uc_mul(const UCElem& a, const UCElem& b);
UCElem uc_neg(const UCElem& a);
bool uc_eq(const UCElem& a, const UCElem& b);

// r * (1,0) = (r0, c * (phi(r) - r^p)/p); a ring homomorphism from W2.
UCElem uc_scalar(const W2Elem& r, const FqAlgebraPtr& D0, const FqPoly& c);

// h_e(x0, x1) = (x0, e x1): U_c(D0) -> U_{ce}(D0).
UCElem rescale_hom(const FqPoly& e, const UCElem& a);

// Total p-derivation of A into D0 with delta p = c, structure map f, and
// variable values gen_values; the ideal-relation check runs at construction.
struct TotalDerivation {
  FPAlgebraPtr A;
  DiffModule M;  // omega_tot(A), used to expand delta of arbitrary elements
  FqAlgebraPtr D0;
  FqAlgebraHom f;  // A0 -> D0
  FqPoly c;
  std::vector<FqPoly> gen_values;
};

TotalDerivation make_total_derivation(const FPAlgebraPtr& A, FqAlgebraHom f, FqPoly c,
                                      std::vector<FqPoly> gen_values);

// delta(a), computed through the universal expansion.
FqPoly derivation_eval(const TotalDerivation& d, const W2Poly& a);

// The R-algebra homomorphism a -> (f(pi0(a)), delta a) into U_c(D0).
struct UCHom {
  TotalDerivation d;
  UCElem apply(const W2Poly& a) const;
};

UCHom derivation_to_hom(TotalDerivation d);
// Reads the derivation back off the homomorphism and revalidates it.
TotalDerivation hom_to_derivation(const UCHom& h);

// Lifts d along g: A -> B when B is a polynomial extension of A (new
// variables get the supplied hom values, default (0,0)) or an iterated
// localization of A (unique lift). Throws UnsupportedMapError otherwise.
struct NewVarValue {
  FqPoly f_value;
  FqPoly delta_value;
};
TotalDerivation lift_derivation(const TotalDerivation& d, const FPAlgebraPtr& B,
                                const std::vector<NewVarValue>& new_var_values = {});

// Inverse of a unit of an F_q-algebra found by a staircase-bounded linear
// solve; nullopt when no inverse exists within the bound.
std::optional<FqPoly> try_invert(const FqAlgebraPtr& A0, const FqPoly& u, long degree_bound = -1);

}  // namespace wittdiff

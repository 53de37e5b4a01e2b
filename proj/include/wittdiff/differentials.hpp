#pragma once

#include <optional>

#include "wittdiff/algebra.hpp"
#include "wittdiff/linalg.hpp"

namespace wittdiff {

// Element of the module of total p-differentials of A, expressed as an
// A0-coefficient vector against the generators [d p, d x_1, ..., d x_n]
// (index 0 is the d p coordinate). Coefficients are kept in normal form.
struct DiffElem {
  std::vector<FqPoly> coeffs;

  bool is_zero() const {
    for (const auto& c : coeffs)
      if (!c.is_zero()) return false;
    return true;
  }
};

// Presentation of the total p-differential module of a flat W2-algebra:
// n+1 generators and one relation row per ideal generator of A, each row
// obtained by expanding the total differential of that generator.
struct DiffModule {
  FPAlgebraPtr A;
  std::vector<DiffElem> relations;

  int ngens() const { return A->nvars() + 1; }
  DiffElem zero_elem() const {
    return DiffElem{std::vector<FqPoly>(static_cast<size_t>(ngens()), A->mod_p()->zero())};
  }
  DiffElem normalize(DiffElem e) const;
  DiffElem add(const DiffElem& a, const DiffElem& b) const;
  DiffElem sub(const DiffElem& a, const DiffElem& b) const;
  DiffElem scale(const FqPoly& c, const DiffElem& a) const;
};

DiffModule omega_tot(const FPAlgebraPtr& A);

// Expands d^tot of a polynomial as an A0-combination of the generators,
// folding the sum rule over the given term sequence. dtot_expand uses the
// canonical descending term order; the _terms variant exposes the fold for
// order-independence checks.
DiffElem dtot_expand(const DiffModule& M, const W2Poly& a);
DiffElem dtot_expand_terms(const DiffModule& M,
                           const std::vector<std::pair<Monomial, W2Elem>>& terms);

// Membership of a coefficient vector in the A0-span of the relation rows,
// decided by a linear solve with multipliers up to the degree bound
// (default derived from the generator degrees). Equality of DiffElems as
// module elements is in_relation_span of their difference.
bool in_relation_span(const DiffModule& M, const DiffElem& v, long degree_bound = -1);

// alpha(x) = x d p; beta drops the d p coordinate, landing in the
// presentation of F*Omega^1 (generators F*dx_i).
DiffElem alpha(const DiffModule& M, const FqPoly& x);
std::vector<FqPoly> beta(const DiffModule& M, const DiffElem& e);
// Relation rows of the F*Omega^1 presentation (beta of the module relations).
std::vector<std::vector<FqPoly>> fstar_relations(const DiffModule& M);

// Left inverse h of alpha: h(d p) = 1, h(d x_i) = values[i], with every
// relation row r satisfying sum r_i values_i = 0.
struct Splitting {
  std::vector<FqPoly> values;  // length n+1, values[0] = 1

  FqPoly apply(const DiffModule& M, const DiffElem& e) const;
};

struct SplittingSearch {
  long bound_used = 0;
  bool doubled = false;
};

// Solves the affine-linear system for a splitting with unknowns supported on
// the staircase up to degree_bound (default 2p*(max generator degree) + 2,
// doubling once on failure). nullopt = Absent at the bound.
std::optional<Splitting> find_splitting(const DiffModule& M, long degree_bound = -1,
                                        SplittingSearch* info = nullptr);

// Frobenius lift on A: semilinear endomorphism given by variable images,
// reducing to x -> x^p mod p and restricting to the Witt Frobenius on W2.
struct FrobLift {
  FPAlgebraPtr A;
  std::vector<W2Poly> images;

  W2Poly apply(const W2Poly& e) const;
};

// Builds a verified lift from variable images; throws LiftError when the
// images fail the mod-p condition or do not kill the ideal.
FrobLift make_frob_lift(const FPAlgebraPtr& A, std::vector<W2Poly> images);

FrobLift splitting_to_frobenius(const DiffModule& M, const Splitting& h);
Splitting frobenius_to_splitting(const DiffModule& M, const FrobLift& phi);

// Pullback of total differentials along an R-algebra hom f: A -> B, as the
// matrix of generator images; apply() maps a B0-coefficient vector against
// the A-generators (an element of Omega_A tensor B0) into Omega_B.
struct DtotPullback {
  const DiffModule* src = nullptr;
  const DiffModule* dst = nullptr;
  FqAlgebraHom f0;                  // reduction of the hom
  std::vector<DiffElem> gen_images; // length n_A + 1, in dst

  DiffElem apply(const std::vector<FqPoly>& dst_coeffs) const;
  // push a source element: coefficients mapped through f0 first
  DiffElem push(const DiffElem& e) const;
};

DtotPullback make_pullback(const AlgebraHom& f, const DiffModule& src, const DiffModule& dst);

// Verifies that every source relation maps into the B0-span of the target
// relations, searching multipliers up to the degree bound; throws
// StructuralError on failure.
void check_pullback_relations(const DtotPullback& pb, long degree_bound = -1);

// Extends a splitting along the extra localization steps of M_loc (whose
// algebra must be an iterated localization of M_src's); unique.
Splitting extend_splitting(const DiffModule& M_src, const Splitting& h, const DiffModule& M_loc);

}  // namespace wittdiff

#pragma once

#include "wittdiff/witt_interp.hpp"

namespace wittdiff {

// The biring Q_c = (Z/p)[e, eta] representing U_c: coaddition and
// comultiplication land in Q_c (x) Q_c, realized as the free polynomial ring
// on (e(x)1, 1(x)e, eta(x)1, 1(x)eta) in that variable order.
struct Biring {
  FqPtr field;  // F_p (m = 1)
  FqElem c;

  // 2-variable polynomials in (e, eta)
  FqPoly e() const { return FqPoly::variable(2, MonomialOrder::Grevlex, 0, field->one()); }
  FqPoly eta() const { return FqPoly::variable(2, MonomialOrder::Grevlex, 1, field->one()); }
};

Biring make_biring(const FqPtr& field, const FqElem& c);

using TensorElem = FqPoly;  // 4 variables: eL, eR, etaL, etaR

// Ring homomorphisms Q_c -> Q_c (x) Q_c extending the generator formulas.
TensorElem coadd(const Biring& Q, const FqPoly& q);
TensorElem comul(const Biring& Q, const FqPoly& q);
// Additive antipode as an endomorphism of Q_c (the eta-correction is
// computed symbolically from the coaddition; it vanishes for odd p).
FqPoly antipode_add(const Biring& Q, const FqPoly& q);
// Counits: evaluation at the additive (0,0) and multiplicative (1,0) points.
FqElem counit_add(const Biring& Q, const FqPoly& q);
FqElem counit_mul(const Biring& Q, const FqPoly& q);

// A point of the represented functor: a homomorphism Q_c -> D0, determined
// by the images of e and eta (Q_c is free, so there is nothing to check).
struct BiringPoint {
  FqAlgebraPtr D0;
  FqPoly image_e, image_eta;
};

BiringPoint make_point(const FqAlgebraPtr& D0, FqPoly image_e, FqPoly image_eta);

enum class PointOp { Add, Mul };
BiringPoint point_ops(const Biring& Q, const BiringPoint& f, const BiringPoint& g, PointOp which);
BiringPoint point_antipode(const Biring& Q, const BiringPoint& f);

// The Z/p^2-algebra structure map a -> (a mod p, theta_c(a)); m = 1 only.
BiringPoint beta_structure(const Biring& Q, const W2Elem& a, const FqAlgebraPtr& D0);

// The representation isomorphism Hom(Q_c, D0) -> U_c(D0), f -> (f(e), f(eta)).
UCElem point_to_uc(const Biring& Q, const BiringPoint& f);

}  // namespace wittdiff

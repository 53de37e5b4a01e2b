#include "wittdiff/biring.hpp"

namespace wittdiff {

namespace {

constexpr auto kOrd = MonomialOrder::Grevlex;

TensorElem tvar(const Biring& Q, int i) {
  return TensorElem::variable(4, kOrd, i, Q.field->one());
}

// generator images of the coaddition: variable order (eL, eR, etaL, etaR)
std::vector<TensorElem> coadd_images(const Biring& Q) {
  long p = Q.field->p();
  TensorElem de = tvar(Q, 0) + tvar(Q, 1);
  TensorElem dh = tvar(Q, 2) + tvar(Q, 3);
  // - c * sum_j (1/p) binom(p,j) eL^(p-j) eR^j
  auto coeffs = cp_int_coeffs(p);
  for (long j = 1; j <= p - 1; ++j) {
    TensorElem term = tvar(Q, 0).pow(p - j) * tvar(Q, 1).pow(j);
    dh = dh - term.scaled(Q.c.scaled_by_int(coeffs[static_cast<size_t>(j - 1)]));
  }
  return {de, dh};
}

std::vector<TensorElem> comul_images(const Biring& Q) {
  long p = Q.field->p();
  TensorElem de = tvar(Q, 0) * tvar(Q, 1);
  TensorElem dh = tvar(Q, 0).pow(p) * tvar(Q, 3) + tvar(Q, 2) * tvar(Q, 1).pow(p);
  return {de, dh};
}

}  // namespace

Biring make_biring(const FqPtr& field, const FqElem& c) {
  if (field->m() != 1) throw StructuralError("Biring: defined over F_p (m = 1)");
  require_same_field(c, field->zero());
  return Biring{field, c};
}

TensorElem coadd(const Biring& Q, const FqPoly& q) {
  return q.substituted(coadd_images(Q), [](const FqElem& x) { return x; });
}

TensorElem comul(const Biring& Q, const FqPoly& q) {
  return q.substituted(comul_images(Q), [](const FqElem& x) { return x; });
}

FqPoly antipode_add(const Biring& Q, const FqPoly& q) {
  long p = Q.field->p();
  // S(e) = -e; S(eta) = -eta + c * (sum_j (1/p)binom(p,j) (-1)^(p-j)) e^p,
  // forced by evaluating the coaddition against the additive counit.
  auto coeffs = cp_int_coeffs(p);
  FqElem k = Q.field->zero();
  for (long j = 1; j <= p - 1; ++j) {
    long long sign = ((p - j) % 2 == 0) ? 1 : -1;
    k = k + Q.field->from_int(sign * (coeffs[static_cast<size_t>(j - 1)] % p));
  }
  FqPoly se = -Q.e();
  FqPoly sh = -Q.eta() + Q.e().pow(p).scaled(Q.c * k);
  return q.substituted(std::vector<FqPoly>{se, sh}, [](const FqElem& x) { return x; });
}

FqElem counit_add(const Biring& Q, const FqPoly& q) {
  return q.coeff_of(Monomial(2), Q.field->zero());
}

FqElem counit_mul(const Biring& Q, const FqPoly& q) {
  FqElem acc = Q.field->zero();
  for (const auto& t : q.terms())
    if (t.m.e[1] == 0) acc = acc + t.c;  // eta -> 0, e -> 1
  return acc;
}

BiringPoint make_point(const FqAlgebraPtr& D0, FqPoly image_e, FqPoly image_eta) {
  return BiringPoint{D0, D0->nf(image_e), D0->nf(image_eta)};
}

BiringPoint point_ops(const Biring& Q, const BiringPoint& f, const BiringPoint& g, PointOp which) {
  if (!f.D0->same_ring(*g.D0)) throw StructuralError("point_ops: targets differ");
  if (!f.D0->field()->same_field(*Q.field))
    throw StructuralError("point_ops: target is not an algebra over the biring's prime field");
  auto imgs = which == PointOp::Add ? coadd_images(Q) : comul_images(Q);
  std::vector<FqPoly> at{f.image_e, g.image_e, f.image_eta, g.image_eta};
  auto embed = [](const FqElem& x) { return x; };
  FqPoly e_img = imgs[0].substituted(at, embed);
  FqPoly h_img = imgs[1].substituted(at, embed);
  return make_point(f.D0, e_img, h_img);
}

BiringPoint point_antipode(const Biring& Q, const BiringPoint& f) {
  FqPoly se = antipode_add(Q, Q.e());
  FqPoly sh = antipode_add(Q, Q.eta());
  std::vector<FqPoly> at{f.image_e, f.image_eta};
  auto embed = [](const FqElem& x) { return x; };
  return make_point(f.D0, se.substituted(at, embed), sh.substituted(at, embed));
}

BiringPoint beta_structure(const Biring& Q, const W2Elem& a, const FqAlgebraPtr& D0) {
  if (a.field()->m() != 1) throw StructuralError("beta_structure: defined over Z/p^2 (m = 1)");
  FqElem theta = base_delta(a, Q.c);
  return make_point(D0, D0->from_scalar(a.w0()), D0->from_scalar(theta));
}

UCElem point_to_uc(const Biring& Q, const BiringPoint& f) {
  return uc_make(f.D0, f.image_e, f.image_eta, f.D0->from_scalar(Q.c));
}

}  // namespace wittdiff

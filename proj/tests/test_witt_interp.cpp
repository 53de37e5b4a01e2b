#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "wittdiff/witt_interp.hpp"

using namespace wittdiff;

namespace {

FqAlgebraPtr mkfq(const FqPtr& f, std::vector<std::string> vars, std::vector<std::string> gens) {
  auto tmp = FqAlgebra::make(f, vars, {});
  std::vector<FqPoly> gs;
  for (const auto& s : gens) gs.push_back(tmp->parse(s));
  return FqAlgebra::make(f, vars, gs);
}

UCElem rand_uc(const FqAlgebraPtr& D0, const FqPoly& c, std::mt19937_64& rng, long maxdeg) {
  return uc_make(D0, D0->random_element(rng, maxdeg), D0->random_element(rng, maxdeg), c);
}

}  // namespace

TEST_CASE("uc_add / uc_mul examples") {
  auto f3 = Fq::make(3);
  auto D = mkfq(f3, {}, {});  // D0 = F_3
  FqPoly c2 = D->from_int(2);
  // (1,0)+(1,0) = (2, 2) over c = 2 since C_3(1,1) = 1
  UCElem s = uc_add(uc_one(D, c2), uc_one(D, c2));
  CHECK(s.x0 == D->from_int(2));
  CHECK(s.x1 == D->from_int(2));
  // additive unit
  std::mt19937_64 rng(2);
  for (int i = 0; i < 30; ++i) {
    UCElem x = rand_uc(D, c2, rng, 0);
    CHECK(uc_eq(uc_add(x, uc_zero(D, c2)), x));
    CHECK(uc_eq(uc_mul(x, uc_one(D, c2)), x));
  }
  // c = 0 over F_3[t]: (t,0)*(t,1) = (t^2, t^3)
  auto Dt = mkfq(f3, {"t"}, {});
  FqPoly c0 = Dt->zero();
  UCElem a = uc_make(Dt, Dt->parse("t"), Dt->zero(), c0);
  UCElem b = uc_make(Dt, Dt->parse("t"), Dt->one(), c0);
  UCElem m = uc_mul(a, b);
  CHECK(m.x0 == Dt->parse("t^2"));
  CHECK(m.x1 == Dt->parse("t^3"));
  // mixing different c is an error
  CHECK_THROWS_AS(uc_add(uc_one(D, c2), uc_one(D, D->from_int(1))), StructuralError);

  // c = 0: the second coordinate is plainly additive, and the module
  // structure on it is twisted by Frobenius
  for (int i = 0; i < 100; ++i) {
    UCElem a = rand_uc(Dt, c0, rng, 2), b2 = rand_uc(Dt, c0, rng, 2);
    CHECK(uc_add(a, b2).x1 == Dt->nf(a.x1 + b2.x1));
    CHECK(uc_mul(a, b2).x1 == Dt->nf(a.x0.is_zero() ? Dt->zero() : a.x0.pow(3) * b2.x1) +
                                  Dt->nf(b2.x0.is_zero() ? Dt->zero() : b2.x0.pow(3) * a.x1));
  }
}

TEST_CASE("U_1 agrees with W2 exhaustively over F_3") {
  auto f3 = Fq::make(3);
  auto D = mkfq(f3, {}, {});
  FqPoly c1 = D->one();
  for (long a0 = 0; a0 < 3; ++a0)
    for (long a1 = 0; a1 < 3; ++a1)
      for (long b0 = 0; b0 < 3; ++b0)
        for (long b1 = 0; b1 < 3; ++b1) {
          W2Elem wa(f3->from_int(a0), f3->from_int(a1));
          W2Elem wb(f3->from_int(b0), f3->from_int(b1));
          UCElem ua = uc_make(D, D->from_int(a0), D->from_int(a1), c1);
          UCElem ub = uc_make(D, D->from_int(b0), D->from_int(b1), c1);
          W2Elem ws = wa + wb;
          UCElem us = uc_add(ua, ub);
          CHECK(us.x0 == D->from_scalar(ws.w0()));
          CHECK(us.x1 == D->from_scalar(ws.w1()));
          W2Elem wm = wa * wb;
          UCElem um = uc_mul(ua, ub);
          CHECK(um.x0 == D->from_scalar(wm.w0()));
          CHECK(um.x1 == D->from_scalar(wm.w1()));
        }
}

TEST_CASE("kernel I: I^2 = 0 and pI = 0, exhaustively") {
  auto f3 = Fq::make(3);
  auto D = mkfq(f3, {}, {});
  for (long cval = 0; cval < 3; ++cval) {
    FqPoly c = D->from_int(cval);
    UCElem pelt = uc_scalar(w2_from_int(f3, 3), D, c);
    for (long x1 = 0; x1 < 3; ++x1)
      for (long y1 = 0; y1 < 3; ++y1) {
        UCElem i1 = uc_make(D, D->zero(), D->from_int(x1), c);
        UCElem i2 = uc_make(D, D->zero(), D->from_int(y1), c);
        CHECK(uc_eq(uc_mul(i1, i2), uc_zero(D, c)));
        CHECK(uc_eq(uc_mul(pelt, i1), uc_zero(D, c)));
      }
  }
}

TEST_CASE("uc_scalar") {
  auto f3 = Fq::make(3);
  auto f5 = Fq::make(5);
  auto D = mkfq(f3, {}, {});
  auto D5 = mkfq(f5, {}, {});
  // r = p -> (0, c)
  for (long cval = 0; cval < 3; ++cval) {
    UCElem e = uc_scalar(w2_from_int(f3, 3), D, D->from_int(cval));
    CHECK(e.x0.is_zero());
    CHECK(e.x1 == D->from_int(cval));
  }
  // r = 1 -> (1, 0)
  CHECK(uc_eq(uc_scalar(w2_one(f3), D, D->from_int(2)), uc_one(D, D->from_int(2))));
  // p = 5, c = 1, r = 2 -> (2, 4)
  UCElem e = uc_scalar(w2_from_int(f5, 2), D5, D5->one());
  CHECK(e.x0 == D5->from_int(2));
  CHECK(e.x1 == D5->from_int(4));
  // ring homomorphism W2 -> U_c, and p^2 * 1 = 0
  auto f9 = Fq::make(3);
  std::mt19937_64 rng(5);
  auto Dt = mkfq(f3, {"t"}, {"t^3"});
  FqPoly c = Dt->parse("t + 1");
  for (int i = 0; i < 300; ++i) {
    W2Elem r(f9->random(rng), f9->random(rng));
    W2Elem s(f9->random(rng), f9->random(rng));
    CHECK(uc_eq(uc_scalar(r + s, Dt, c), uc_add(uc_scalar(r, Dt, c), uc_scalar(s, Dt, c))));
    CHECK(uc_eq(uc_scalar(r * s, Dt, c), uc_mul(uc_scalar(r, Dt, c), uc_scalar(s, Dt, c))));
  }
  CHECK(uc_eq(uc_scalar(w2_from_int(f3, 9), Dt, c), uc_zero(Dt, c)));
}

TEST_CASE("U_c ring axioms over F_3[t]/(t^3) for several c") {
  auto f3 = Fq::make(3);
  auto Dt = mkfq(f3, {"t"}, {"t^3"});
  std::mt19937_64 rng(6);
  for (const char* cs : {"0", "1", "2", "t"}) {
    FqPoly c = Dt->parse(cs);
    for (int i = 0; i < 250; ++i) {
      UCElem a = rand_uc(Dt, c, rng, 2), b = rand_uc(Dt, c, rng, 2), d = rand_uc(Dt, c, rng, 2);
      CHECK(uc_eq(uc_add(a, b), uc_add(b, a)));
      CHECK(uc_eq(uc_add(uc_add(a, b), d), uc_add(a, uc_add(b, d))));
      CHECK(uc_eq(uc_mul(a, b), uc_mul(b, a)));
      CHECK(uc_eq(uc_mul(uc_mul(a, b), d), uc_mul(a, uc_mul(b, d))));
      CHECK(uc_eq(uc_mul(a, uc_add(b, d)), uc_add(uc_mul(a, b), uc_mul(a, d))));
      CHECK(uc_eq(uc_add(a, uc_neg(a)), uc_zero(Dt, c)));
    }
  }
}

TEST_CASE("rescale_hom") {
  auto f3 = Fq::make(3);
  auto Dt = mkfq(f3, {"t"}, {"t^3"});
  FqPoly c = Dt->parse("2");
  std::mt19937_64 rng(77);
  // e = 1: identity; e = 0: projection onto U_0
  for (int i = 0; i < 20; ++i) {
    UCElem a = rand_uc(Dt, c, rng, 2);
    UCElem r1 = rescale_hom(Dt->one(), a);
    CHECK(r1.x0 == a.x0);
    CHECK(r1.x1 == a.x1);
    CHECK(r1.c == a.c);
    UCElem r0 = rescale_hom(Dt->zero(), a);
    CHECK(r0.x1.is_zero());
    CHECK(r0.c.is_zero());
  }
  // ring homomorphism U_c -> U_{ce} on 500 random triples
  for (int i = 0; i < 500; ++i) {
    FqPoly e = Dt->random_element(rng, 2);
    UCElem a = rand_uc(Dt, c, rng, 2), b = rand_uc(Dt, c, rng, 2);
    CHECK(uc_eq(rescale_hom(e, uc_add(a, b)), uc_add(rescale_hom(e, a), rescale_hom(e, b))));
    CHECK(uc_eq(rescale_hom(e, uc_mul(a, b)), uc_mul(rescale_hom(e, a), rescale_hom(e, b))));
    CHECK(uc_eq(rescale_hom(e, uc_one(Dt, c)), uc_one(Dt, Dt->nf(c * e))));
  }
}

TEST_CASE("derivation_to_hom") {
  auto f3 = Fq::make(3);
  auto A = FPAlgebra::make(f3, {"x"}, {});
  auto Dt = mkfq(f3, {"t"}, {});
  // f(x) = t, delta x = t, c = 1
  FqAlgebraHom f(A->mod_p(), Dt, {Dt->parse("t")});
  auto d = make_total_derivation(A, f, Dt->one(), {Dt->parse("t")});
  auto h = derivation_to_hom(d);

  // image of x^2 is (f(x)^2, 2 f(x)^3 t)
  UCElem ix2 = h.apply(A->parse("x^2"));
  CHECK(ix2.x0 == Dt->parse("t^2"));
  CHECK(ix2.x1 == Dt->parse("2*t^4"));

  // image of p is (0, c)
  UCElem ip = h.apply(A->parse("p"));
  CHECK(ip.x0.is_zero());
  CHECK(ip.x1 == Dt->one());

  // R-algebra homomorphism on random pairs
  std::mt19937_64 rng(8);
  auto rand_poly = [&] {
    W2Poly r = A->zero();
    for (int k = 0; k <= 4; ++k) {
      Monomial m(1);
      m.e[0] = static_cast<uint16_t>(k);
      r.add_term(m, W2Elem(f3->random(rng), f3->random(rng)));
    }
    return r;
  };
  for (int i = 0; i < 200; ++i) {
    W2Poly a = rand_poly(), b = rand_poly();
    CHECK(uc_eq(h.apply(a + b), uc_add(h.apply(a), h.apply(b))));
    CHECK(uc_eq(h.apply(a * b), uc_mul(h.apply(a), h.apply(b))));
  }

  // zero derivation with c = 0 is the Frobenius-twisted reduction
  auto d0 = make_total_derivation(A, FqAlgebraHom(A->mod_p(), Dt, {Dt->parse("t")}),
                                  Dt->zero(), {Dt->zero()});
  auto h0 = derivation_to_hom(d0);
  for (int i = 0; i < 100; ++i) {
    W2Poly a = rand_poly(), b = rand_poly();
    CHECK(h0.apply(a).x1.is_zero());
    CHECK(uc_eq(h0.apply(a * b), uc_mul(h0.apply(a), h0.apply(b))));
  }

  // round trip hom -> derivation
  auto d2 = hom_to_derivation(h);
  CHECK(d2.c == d.c);
  CHECK(d2.gen_values[0] == d.gen_values[0]);
  CHECK(d2.f.images[0] == d.f.images[0]);

  // invalid derivation data is rejected: on W2[x]/(x^2 - p) the relation
  // forces 2 f(x)^3 delta(x) = c
  auto B = FPAlgebra::make(f3, {"x"},
                           {FPAlgebra::make(f3, {"x"}, {})->parse("x^2 - p")});
  auto DB = mkfq(f3, {}, {});
  CHECK_THROWS_AS(make_total_derivation(B, FqAlgebraHom(B->mod_p(), DB, {DB->zero()}),
                                        DB->one(), {DB->zero()}),
                  DerivationError);
  // but delta p = 0, f(x) = 0, delta x = anything is fine: relation reads 0 = 0
  auto ok = make_total_derivation(B, FqAlgebraHom(B->mod_p(), DB, {DB->zero()}),
                                  DB->zero(), {DB->from_int(2)});
  CHECK(derivation_eval(ok, B->parse("x^2")).is_zero());
}

TEST_CASE("lift_derivation: localization") {
  auto f3 = Fq::make(3);
  auto A = FPAlgebra::make(f3, {"x"}, {});
  auto B = A->localize(A->parse("x"));
  auto B0 = B->mod_p();
  // D0 = B0, f = inclusion, delta x = u = x^2
  FqAlgebraHom f(A->mod_p(), B0, {B0->parse("x")});
  auto d = make_total_derivation(A, f, B0->one(), {B0->parse("x^2")});
  auto lifted = lift_derivation(d, B);
  // delta(x_inv) = -u x_inv^{2p} = -x^2 x_inv^6 = -x_inv^4
  CHECK(lifted.gen_values[1] == B0->nf(B0->parse("-x_inv^4")));
  CHECK(lifted.f.images[1] == B0->nf(B0->parse("x_inv")));
  // restricting back gives delta_A
  CHECK(lifted.gen_values[0] == B0->parse("x^2"));
  // delta(x * x_inv) = delta(1) = 0
  CHECK(derivation_eval(lifted, B->parse("x*x_inv")).is_zero());

  // uniqueness: any derivation on B extending d has the same values
  auto direct = make_total_derivation(
      B, FqAlgebraHom(B0, B0, {B0->parse("x"), B0->parse("x_inv")}), B0->one(),
      {B0->parse("x^2"), B0->nf(B0->parse("-x_inv^4"))});
  std::mt19937_64 rng(19);
  for (int i = 0; i < 100; ++i) {
    W2Poly e = B->normal_form([&] {
      W2Poly r = B->zero();
      auto mons = B0->staircase(4);
      for (const auto& m : mons)
        if (rng() % 2) r.add_term(m, W2Elem(f3->random(rng), f3->random(rng)));
      return r;
    }());
    CHECK(derivation_eval(lifted, e) == derivation_eval(direct, e));
  }
}

TEST_CASE("lift_derivation: polynomial extension and unsupported maps") {
  auto f3 = Fq::make(3);
  auto A = FPAlgebra::make(f3, {"x"}, {});
  auto B = FPAlgebra::make(f3, {"x", "y"}, {});
  auto Dt = mkfq(f3, {"t"}, {});
  FqAlgebraHom f(A->mod_p(), Dt, {Dt->parse("t")});
  auto d = make_total_derivation(A, f, Dt->one(), {Dt->parse("t^2")});

  auto lifted = lift_derivation(d, B);
  CHECK(lifted.gen_values[0] == Dt->parse("t^2"));
  CHECK(lifted.gen_values[1].is_zero());
  CHECK(lifted.f.images[1].is_zero());
  // default-zero choice is overridable
  auto lifted2 = lift_derivation(d, B, {NewVarValue{Dt->parse("t"), Dt->parse("1 + t")}});
  CHECK(lifted2.gen_values[1] == Dt->parse("1 + t"));
  // restriction back along x agrees
  CHECK(derivation_eval(lifted2, B->parse("x^2")) == derivation_eval(d, A->parse("x^2")));

  auto C = FPAlgebra::make(f3, {"z"}, {});
  CHECK_THROWS_AS(lift_derivation(d, C), UnsupportedMapError);
}

TEST_CASE("try_invert") {
  auto f3 = Fq::make(3);
  auto G = mkfq(f3, {"x", "x_inv"}, {"x*x_inv - 1"});
  auto inv = try_invert(G, G->parse("x^3"));
  REQUIRE(inv.has_value());
  CHECK(G->nf(*inv * G->parse("x^3")) == G->one());
  auto Dt = mkfq(f3, {"t"}, {"t^3"});
  CHECK(try_invert(Dt, Dt->parse("t")) == std::nullopt);
  auto u = try_invert(Dt, Dt->parse("1 + t"));
  REQUIRE(u.has_value());
  CHECK(Dt->nf(*u * Dt->parse("1 + t")) == Dt->one());
}

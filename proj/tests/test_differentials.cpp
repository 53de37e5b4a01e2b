#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>

#include "wittdiff/differentials.hpp"

using namespace wittdiff;

namespace {

FPAlgebraPtr mk(const FqPtr& f, std::vector<std::string> vars, std::vector<std::string> gens) {
  auto tmp = FPAlgebra::make(f, vars, {});
  std::vector<W2Poly> gs;
  for (const auto& s : gens) gs.push_back(tmp->parse(s));
  return FPAlgebra::make(f, vars, gs);
}

W2Poly rand_w2_elem(const FPAlgebraPtr& A, std::mt19937_64& rng, long maxdeg) {
  auto f = A->field();
  W2Poly r = A->zero();
  auto mons = A->mod_p()->staircase(maxdeg);
  for (const auto& m : mons)
    if (rng() % 3 == 0) r.add_term(m, W2Elem(f->random(rng), f->random(rng)));
  return A->normal_form(r);
}

DiffElem M_add3(const DiffModule& M, const DiffElem& a, const DiffElem& b, const DiffElem& c) {
  return M.add(M.add(a, b), c);
}

}  // namespace

TEST_CASE("dtot_expand basic examples") {
  auto f3 = Fq::make(3);
  auto A = mk(f3, {"x"}, {});
  auto M = omega_tot(A);
  auto A0 = A->mod_p();

  // d(x^2) = 2 x^p dx
  DiffElem d = dtot_expand(M, A->parse("x^2"));
  CHECK(d.coeffs[0].is_zero());
  CHECK(d.coeffs[1] == A0->parse("2*x^3"));

  // d(r) = base_delta(r, 1) d p for every scalar r in W2(F_3)
  for (long n = 0; n < 9; ++n) {
    DiffElem dr = dtot_expand(M, A->from_int(n));
    CHECK(dr.coeffs[1].is_zero());
    CHECK(dr.coeffs[0] ==
          A0->from_scalar(base_delta(w2_from_int(f3, n), f3->one())));
  }

  // p = 5: d(2x) = 2 dx + 4 x^5 dp
  auto f5 = Fq::make(5);
  auto B = mk(f5, {"x"}, {});
  auto MB = omega_tot(B);
  DiffElem d2x = dtot_expand(MB, B->parse("2*x"));
  CHECK(d2x.coeffs[0] == B->mod_p()->parse("4*x^5"));
  CHECK(d2x.coeffs[1] == B->mod_p()->parse("2"));
}

TEST_CASE("dtot_expand satisfies the three defining rules") {
  auto f3 = Fq::make(3);
  long p = 3;
  std::mt19937_64 rng(42);

  // free algebra: the module is free, so the rules hold as exact vectors
  auto F = mk(f3, {"x", "y"}, {});
  auto MF = omega_tot(F);
  auto F0 = F->mod_p();
  for (int i = 0; i < 120; ++i) {
    W2Poly a = rand_w2_elem(F, rng, 4), b = rand_w2_elem(F, rng, 4);
    DiffElem lhs = dtot_expand(MF, a + b);
    DiffElem rhs = M_add3(MF, dtot_expand(MF, a), dtot_expand(MF, b),
                          MF.scale(F0->nf(cp_eval(F->reduce0(a), F->reduce0(b), p)),
                                   alpha(MF, F0->one())));
    CHECK(MF.sub(lhs, rhs).is_zero());
    DiffElem lhs2 = dtot_expand(MF, a * b);
    FqPoly a0p = F0->nf(F->reduce0(a).is_zero() ? F0->zero() : F->reduce0(a).pow(p));
    FqPoly b0p = F0->nf(F->reduce0(b).is_zero() ? F0->zero() : F->reduce0(b).pow(p));
    DiffElem rhs2 = MF.add(MF.scale(b0p, dtot_expand(MF, a)), MF.scale(a0p, dtot_expand(MF, b)));
    CHECK(MF.sub(lhs2, rhs2).is_zero());
  }

  // quotient algebra: representatives may differ by relations, so compare
  // as module elements
  auto A = mk(f3, {"x", "y"}, {"x*y - 1"});
  auto M = omega_tot(A);
  auto A0 = A->mod_p();
  for (int i = 0; i < 40; ++i) {
    W2Poly a = rand_w2_elem(A, rng, 4), b = rand_w2_elem(A, rng, 4);
    DiffElem lhs = dtot_expand(M, A->normal_form(a + b));
    DiffElem rhs = M.add(dtot_expand(M, a), dtot_expand(M, b));
    rhs = M.add(rhs, M.scale(A0->nf(cp_eval(A0->nf(A->reduce0(a)), A0->nf(A->reduce0(b)), p)),
                             alpha(M, A0->one())));
    CHECK(in_relation_span(M, M.sub(lhs, rhs)));
    DiffElem lhs2 = dtot_expand(M, A->normal_form(a * b));
    FqPoly a0p = A0->nf(A->reduce0(a).is_zero() ? A0->zero() : A->reduce0(a).pow(p));
    FqPoly b0p = A0->nf(A->reduce0(b).is_zero() ? A0->zero() : A->reduce0(b).pow(p));
    DiffElem rhs2 = M.add(M.scale(b0p, dtot_expand(M, a)), M.scale(a0p, dtot_expand(M, b)));
    CHECK(in_relation_span(M, M.sub(lhs2, rhs2)));
  }

  // (3) scalars, exhaustive
  for (long n = 0; n < 9; ++n) {
    DiffElem dr = dtot_expand(M, A->from_int(n));
    CHECK(dr.coeffs[0] == A0->from_scalar(base_delta(w2_from_int(f3, n), f3->one())));
    CHECK(dr.coeffs[1].is_zero());
    CHECK(dr.coeffs[2].is_zero());
  }
}

TEST_CASE("dtot_expand is independent of term order") {
  auto f3 = Fq::make(3);
  auto A = mk(f3, {"x", "y"}, {"x*y - 1"});
  auto M = omega_tot(A);
  std::mt19937_64 rng(7);
  for (int i = 0; i < 40; ++i) {
    W2Poly a = rand_w2_elem(A, rng, 5);
    std::vector<std::pair<Monomial, W2Elem>> terms;
    for (const auto& t : a.terms()) terms.emplace_back(t.m, t.c);
    DiffElem ref = dtot_expand(M, a);
    for (int s = 0; s < 3; ++s) {
      std::shuffle(terms.begin(), terms.end(), rng);
      DiffElem alt = dtot_expand_terms(M, terms);
      CHECK(M.sub(ref, alt).is_zero());
    }
  }
}

TEST_CASE("omega_tot presentations") {
  auto f3 = Fq::make(3);
  // free polynomial algebras: free of rank n+1
  for (int n = 1; n <= 3; ++n) {
    std::vector<std::string> vars;
    for (int i = 0; i < n; ++i) vars.push_back("x" + std::to_string(i + 1));
    auto A = mk(f3, vars, {});
    auto M = omega_tot(A);
    CHECK(M.ngens() == n + 1);
    CHECK(M.relations.empty());
  }

  auto T = mk(f3, {"x", "y"}, {"x*y - 1"});
  auto MT = omega_tot(T);
  REQUIRE(MT.relations.size() == 1);
  CHECK(MT.relations[0].coeffs[0].is_zero());
  CHECK(MT.relations[0].coeffs[1] == T->mod_p()->parse("y^3"));
  CHECK(MT.relations[0].coeffs[2] == T->mod_p()->parse("x^3"));

  auto B = mk(f3, {"x"}, {"x^2 - p"});
  auto MB = omega_tot(B);
  REQUIRE(MB.relations.size() == 1);
  CHECK(MB.relations[0].coeffs[0] == B->mod_p()->parse("-1"));
  CHECK(MB.relations[0].coeffs[1] == B->mod_p()->parse("2*x^3"));

  // non-flat presentations are rejected
  auto R = FPAlgebra::make(f3, {"x"}, {}, MonomialOrder::Grevlex);
  auto NF_ = FPAlgebra::make(f3, {"x"}, {R->parse("p*x")}, MonomialOrder::Grevlex, false);
  CHECK_THROWS_AS(omega_tot(NF_), FlatnessError);
}

TEST_CASE("alpha and beta") {
  auto f3 = Fq::make(3);
  auto A = mk(f3, {"x", "y"}, {"x*y - 1"});
  auto M = omega_tot(A);
  std::mt19937_64 rng(9);
  for (int i = 0; i < 30; ++i) {
    FqPoly x = A->mod_p()->random_element(rng, 4);
    auto bx = beta(M, alpha(M, x));
    for (const auto& c : bx) CHECK(c.is_zero());
  }
  DiffElem dx = dtot_expand(M, A->var(0));
  auto b = beta(M, dx);
  CHECK(b[0] == A->mod_p()->one());
  CHECK(b[1].is_zero());
}

TEST_CASE("F*Omega^1 relations are the p-th-powered Jacobian rows") {
  auto f3 = Fq::make(3);
  for (auto spec : {std::pair<std::vector<std::string>, std::string>{{"x", "y"}, "x*y - 1"},
                    {{"x", "y"}, "y^2 - x^3 + x"}}) {
    auto A = mk(f3, spec.first, {spec.second});
    auto M = omega_tot(A);
    auto A0 = A->mod_p();
    auto rows = fstar_relations(M);
    REQUIRE(rows.size() == 1);
    FqPoly g0 = A->reduce0(A->gens()[0]);
    for (int i = 0; i < A->nvars(); ++i) {
      FqPoly jac = fq_partial(g0, i);
      FqPoly jacp = A0->nf(jac.is_zero() ? A0->zero() : jac.pow(3));
      CHECK(A0->nf(rows[0][static_cast<size_t>(i)] - jacp).is_zero());
    }
  }
}

TEST_CASE("relation span meets the d p line only at zero (exactness)") {
  auto f3 = Fq::make(3);
  auto A = mk(f3, {"x", "y"}, {"y^2 - x^3 + x"});
  auto M = omega_tot(A);
  auto A0 = A->mod_p();
  std::mt19937_64 rng(29);
  for (int i = 0; i < 50; ++i) {
    FqPoly mu = A0->random_element(rng, 4);
    DiffElem v = M.scale(mu, M.relations[0]);
    bool beta_zero = true;
    for (size_t k = 1; k < v.coeffs.size(); ++k) beta_zero = beta_zero && v.coeffs[k].is_zero();
    if (beta_zero) CHECK(v.coeffs[0].is_zero());
  }
}

TEST_CASE("find_splitting") {
  auto f3 = Fq::make(3);
  // free: trivial splitting
  auto A = mk(f3, {"x", "y"}, {});
  auto MA = omega_tot(A);
  auto hA = find_splitting(MA);
  REQUIRE(hA.has_value());
  CHECK(hA->values[0] == A->mod_p()->one());
  CHECK(hA->values[1].is_zero());
  CHECK(hA->values[2].is_zero());

  // torus: a splitting exists (u = 0 works)
  auto T = mk(f3, {"x", "y"}, {"x*y - 1"});
  auto MT = omega_tot(T);
  auto hT = find_splitting(MT);
  REQUIRE(hT.has_value());
  for (const auto& r : MT.relations) CHECK(hT->apply(MT, r).is_zero());

  // W2[x]/(x^2 - p): obstruction 2x^3 u = 1 unsolvable in F_3[x]/(x^2)
  auto B = mk(f3, {"x"}, {"x^2 - p"});
  auto MB = omega_tot(B);
  CHECK_FALSE(find_splitting(MB).has_value());
  for (long bound : {4L, 8L, 20L, 40L}) CHECK_FALSE(find_splitting(MB, bound).has_value());
}

TEST_CASE("splitting <-> frobenius round trips") {
  auto f3 = Fq::make(3);
  auto A = mk(f3, {"x"}, {});
  auto M = omega_tot(A);
  // h = (1, 0) on the free algebra: phi(x) = x^p
  Splitting triv{{A->mod_p()->one(), A->mod_p()->zero()}};
  FrobLift phi = splitting_to_frobenius(M, triv);
  CHECK(phi.images[0] == A->normal_form(A->parse("x^3")));
  CHECK(phi.apply(A->parse("x + 1")) == A->parse("x^3 + 1"));

  // random round trips h -> phi -> h on the free algebra
  std::mt19937_64 rng(13);
  for (int i = 0; i < 50; ++i) {
    Splitting h{{A->mod_p()->one(), A->mod_p()->random_element(rng, 4)}};
    FrobLift ph = splitting_to_frobenius(M, h);
    Splitting back = frobenius_to_splitting(M, ph);
    CHECK(back.values[1] == h.values[1]);
    FrobLift again = splitting_to_frobenius(M, back);
    CHECK(again.images[0] == ph.images[0]);
  }

  // G_m: x -> x^3, x_inv -> x_inv^3 is a valid lift with zero splitting
  auto G = A->localize(A->parse("x"));
  auto MG = omega_tot(G);
  FrobLift phig = make_frob_lift(G, {G->parse("x^3"), G->parse("x_inv^3")});
  CHECK(G->is_zero(phig.apply(G->parse("x*x_inv - 1"))));
  Splitting hg = frobenius_to_splitting(MG, phig);
  CHECK(hg.values[1].is_zero());
  CHECK(hg.values[2].is_zero());

  // invalid lifts are rejected
  CHECK_THROWS_AS(make_frob_lift(A, {A->parse("x^2")}), LiftError);
  CHECK_THROWS_AS(make_frob_lift(A, {A->parse("x^3 + x")}), LiftError);
}

TEST_CASE("torsor structure of splittings") {
  auto f3 = Fq::make(3);
  auto T = mk(f3, {"x", "y"}, {"x*y - 1"});
  auto M = omega_tot(T);
  auto A0 = T->mod_p();
  auto h = find_splitting(M);
  REQUIRE(h.has_value());
  // psi = (0, x^3 t, -y^3 t) kills the relation row (0, y^3, x^3)
  FqPoly t = A0->parse("x + 2");
  Splitting h2{{A0->one(), A0->nf(h->values[1] + A0->parse("x^3") * t),
                A0->nf(h->values[2] - A0->parse("y^3") * t)}};
  for (const auto& r : M.relations) CHECK(h2.apply(M, r).is_zero());
  // difference kills d p and all relations: a functional on F*Omega^1
  FqPoly d0 = A0->nf(h2.values[0] - h->values[0]);
  CHECK(d0.is_zero());
  // both give verified Frobenius lifts
  auto p1 = splitting_to_frobenius(M, *h);
  auto p2 = splitting_to_frobenius(M, h2);
  CHECK_FALSE(p1.images[0] == p2.images[0]);
}

TEST_CASE("pullbacks") {
  auto f3 = Fq::make(3);
  auto A = mk(f3, {"x"}, {});
  auto G = A->localize(A->parse("x"));
  auto MA = omega_tot(A);
  auto MG = omega_tot(G);

  // identity pullback is the identity matrix
  auto idA = AlgebraHom::identity(A);
  auto pid = make_pullback(idA, MA, MA);
  CHECK(pid.gen_images[0].coeffs[0] == A->mod_p()->one());
  CHECK(pid.gen_images[1].coeffs[1] == A->mod_p()->one());
  CHECK(pid.gen_images[1].coeffs[0].is_zero());

  // inclusion A -> A[1/x]: d x -> d x
  AlgebraHom inc(A, G, {G->parse("x")});
  auto pinc = make_pullback(inc, MA, MG);
  CHECK(pinc.gen_images[1].coeffs[1] == G->mod_p()->one());
  CHECK(pinc.gen_images[1].coeffs[0].is_zero());
  CHECK(pinc.gen_images[1].coeffs[2].is_zero());
  check_pullback_relations(pinc);

  // composite pullback equals pullback of composite
  auto B = mk(f3, {"u"}, {});
  AlgebraHom g1(B, A, {A->parse("x^2 + p")});
  AlgebraHom g2 = inc.compose(g1);
  auto MB = omega_tot(B);
  auto p1 = make_pullback(g1, MB, MA);
  auto p2 = make_pullback(g2, MB, MG);
  std::mt19937_64 rng(21);
  for (int i = 0; i < 30; ++i) {
    DiffElem e = MB.zero_elem();
    e.coeffs[0] = B->mod_p()->random_element(rng, 3);
    e.coeffs[1] = B->mod_p()->random_element(rng, 3);
    DiffElem via1 = pinc.push(p1.push(e));
    DiffElem via2 = p2.push(e);
    CHECK(MG.sub(via1, via2).is_zero());
  }

  // localized torus keeps its relation in the span
  auto T = mk(f3, {"x", "y"}, {"x*y - 1"});
  auto TL = T->localize(T->parse("x"));
  AlgebraHom incT(T, TL, {TL->parse("x"), TL->parse("y")});
  auto MT = omega_tot(T);
  auto MTL = omega_tot(TL);
  auto pT = make_pullback(incT, MT, MTL);
  check_pullback_relations(pT);
}

TEST_CASE("pullback along an invalid map is flagged") {
  auto f3 = Fq::make(3);
  auto T = mk(f3, {"x", "y"}, {"x*y - 1"});
  auto F = mk(f3, {"x", "y"}, {});
  // not a homomorphism: the torus relation does not map to zero in W2[x,y]
  AlgebraHom bogus(T, F, {F->parse("x"), F->parse("y")}, /*verify=*/false);
  auto MT = omega_tot(T);
  auto MF = omega_tot(F);
  auto pb = make_pullback(bogus, MT, MF);
  CHECK_THROWS_AS(check_pullback_relations(pb), StructuralError);
}

TEST_CASE("extend_splitting across localizations") {
  auto f3 = Fq::make(3);
  auto A = mk(f3, {"x"}, {});
  auto MA = omega_tot(A);
  auto G = A->localize(A->parse("x"));
  auto MG = omega_tot(G);

  // delta x = u, with u = x^2: the unique extension sends d x_inv to -u x_inv^6
  Splitting h{{A->mod_p()->one(), A->mod_p()->parse("x^2")}};
  Splitting ext = extend_splitting(MA, h, MG);
  CHECK(ext.values[1] == G->mod_p()->parse("x^2"));
  CHECK(ext.values[2] == G->mod_p()->nf(G->mod_p()->parse("-x^2*x_inv^6")));
  // -x^2 x_inv^6 = -x_inv^4 in the localization
  CHECK(ext.values[2] == G->mod_p()->nf(G->mod_p()->parse("-x_inv^4")));

  // extension commutes with the frobenius correspondence
  FrobLift phiA = splitting_to_frobenius(MA, h);
  FrobLift phiG = splitting_to_frobenius(MG, ext);
  CHECK(phiG.apply(G->parse("x")) == G->normal_form(
            phiA.apply(A->parse("x")).substituted(
                std::vector<W2Poly>{G->parse("x")}, [](const W2Elem& c) { return c; })));

  // double localization
  auto G2 = G->localize(G->parse("x_inv"));
  auto MG2 = omega_tot(G2);
  Splitting ext2 = extend_splitting(MA, h, MG2);
  for (const auto& r : MG2.relations) CHECK(ext2.apply(MG2, r).is_zero());
}

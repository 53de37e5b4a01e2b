#include "wittdiff/differentials.hpp"

namespace wittdiff {

DiffElem DiffModule::normalize(DiffElem e) const {
  const auto& A0 = A->mod_p();
  for (auto& c : e.coeffs) c = A0->nf(c);
  return e;
}

DiffElem DiffModule::add(const DiffElem& a, const DiffElem& b) const {
  DiffElem r = a;
  for (size_t i = 0; i < r.coeffs.size(); ++i)
    r.coeffs[i] = A->mod_p()->nf(r.coeffs[i] + b.coeffs[i]);
  return r;
}

DiffElem DiffModule::sub(const DiffElem& a, const DiffElem& b) const {
  DiffElem r = a;
  for (size_t i = 0; i < r.coeffs.size(); ++i)
    r.coeffs[i] = A->mod_p()->nf(r.coeffs[i] - b.coeffs[i]);
  return r;
}

DiffElem DiffModule::scale(const FqPoly& c, const DiffElem& a) const {
  DiffElem r = a;
  for (auto& x : r.coeffs) x = A->mod_p()->nf(x * c);
  return r;
}

namespace {

// d^tot of a single term c*M: base_delta(c,1) * pi(M)^p on the d p
// coordinate plus pi(c)^p times the iterated product-rule expansion of M.
DiffElem term_diff(const DiffModule& Mod, const W2Elem& c, const Monomial& mono) {
  const auto& A = Mod.A;
  const auto& A0 = A->mod_p();
  const long p = A->field()->p();
  const int n = A->nvars();
  DiffElem out = Mod.zero_elem();

  // D(x_1^{a_1} ... x_n^{a_n}) by folding D(UV) = D(U) pi(V)^p + pi(U)^p D(V)
  std::vector<FqPoly> vecD(static_cast<size_t>(n + 1), A0->zero());
  FqPoly U = A0->one();
  for (int i = 0; i < n; ++i) {
    uint16_t a = mono.e[static_cast<size_t>(i)];
    if (!a) continue;
    FqPoly xi = A0->var(i);
    FqPoly V = A0->nf(xi.pow(a));
    // D(x_i^a) = a x_i^{p(a-1)} e_i
    FqPoly DVi = A0->nf(xi.pow(static_cast<long long>(p) * (a - 1)).scaled_by_int(a));
    FqPoly Vp = A0->nf(V.pow(p));
    FqPoly Up = A0->nf(U.pow(p));
    for (auto& d : vecD) d = A0->nf(d * Vp);
    vecD[static_cast<size_t>(i + 1)] = A0->nf(vecD[static_cast<size_t>(i + 1)] + Up * DVi);
    U = A0->nf(U * V);
  }

  FqElem c0p = c.w0().pow(p);
  for (size_t k = 0; k < vecD.size(); ++k) out.coeffs[k] = A0->nf(vecD[k].scaled(c0p));

  // coefficient rule: d(c) = base_delta(c, 1) d p, weighted by pi(M)^p
  FqElem bd = base_delta(c, A->field()->one());
  if (!bd.is_zero()) {
    FqPoly Mp = A0->nf(FqPoly::monomial(n, A->order(), mono, A->field()->one()).pow(p));
    out.coeffs[0] = A0->nf(out.coeffs[0] + Mp.scaled(bd));
  }
  return out;
}

}  // namespace

DiffElem dtot_expand_terms(const DiffModule& M,
                           const std::vector<std::pair<Monomial, W2Elem>>& terms) {
  const auto& A = M.A;
  const auto& A0 = A->mod_p();
  const long p = A->field()->p();
  DiffElem acc = M.zero_elem();
  W2Poly partial = A->zero();
  bool first = true;
  for (const auto& [mono, c] : terms) {
    if (c.is_zero()) continue;
    W2Poly term = W2Poly::monomial(A->nvars(), A->order(), mono, c);
    if (!first) {
      FqPoly s0 = A0->nf(A->reduce0(partial));
      FqPoly t0 = A0->nf(A->reduce0(term));
      if (!s0.is_zero() && !t0.is_zero()) {
        FqPoly corr = A0->nf(cp_eval(s0, t0, p));
        acc.coeffs[0] = A0->nf(acc.coeffs[0] + corr);
      }
    }
    acc = M.add(acc, term_diff(M, c, mono));
    partial = A->normal_form(partial + term);
    first = false;
  }
  return acc;
}

DiffElem dtot_expand(const DiffModule& M, const W2Poly& a) {
  if (a.nvars() != M.A->nvars() || a.order() != M.A->order())
    throw StructuralError("dtot_expand: polynomial from a different ring");
  std::vector<std::pair<Monomial, W2Elem>> terms;
  terms.reserve(a.num_terms());
  for (const auto& t : a.terms()) terms.emplace_back(t.m, t.c);
  return dtot_expand_terms(M, terms);
}

DiffModule omega_tot(const FPAlgebraPtr& A) {
  if (!A->flat()) throw FlatnessError("omega_tot: algebra lacks a flatness certificate");
  DiffModule M;
  M.A = A;
  for (const auto& g : A->gens()) M.relations.push_back(dtot_expand(M, g));
  return M;
}

bool in_relation_span(const DiffModule& M, const DiffElem& v, long degree_bound) {
  if (v.is_zero()) return true;
  if (M.relations.empty()) return false;
  const auto& A0 = M.A->mod_p();
  if (degree_bound < 0) {
    long maxdeg = 1;
    for (const auto& g : M.A->gens()) maxdeg = std::max(maxdeg, g.deg());
    for (const auto& c : v.coeffs) maxdeg = std::max(maxdeg, c.deg());
    degree_bound = 2 * M.A->field()->p() * maxdeg + 4;
  }
  auto mons = A0->staircase(degree_bound);
  AffineSystem sys(M.A->field());
  std::vector<std::vector<int>> ids(M.relations.size());
  for (size_t j = 0; j < M.relations.size(); ++j)
    for (size_t k = 0; k < mons.size(); ++k) ids[j].push_back(sys.add_unknown());
  for (int coord = 0; coord < M.ngens(); ++coord) {
    sys.add_poly_const(coord, -v.coeffs[static_cast<size_t>(coord)]);
    for (size_t j = 0; j < M.relations.size(); ++j) {
      const auto& rel = M.relations[j].coeffs[static_cast<size_t>(coord)];
      if (rel.is_zero()) continue;
      for (size_t k = 0; k < mons.size(); ++k) {
        FqPoly coeff = A0->nf(rel.times_monomial(mons[k], M.A->field()->one()));
        if (!coeff.is_zero()) sys.add_poly_term(coord, coeff, ids[j][k]);
      }
    }
  }
  return sys.solve().has_value();
}

DiffElem alpha(const DiffModule& M, const FqPoly& x) {
  DiffElem e = M.zero_elem();
  e.coeffs[0] = M.A->mod_p()->nf(x);
  return e;
}

std::vector<FqPoly> beta(const DiffModule& M, const DiffElem& e) {
  (void)M;
  return std::vector<FqPoly>(e.coeffs.begin() + 1, e.coeffs.end());
}

std::vector<std::vector<FqPoly>> fstar_relations(const DiffModule& M) {
  std::vector<std::vector<FqPoly>> out;
  for (const auto& r : M.relations) out.push_back(beta(M, r));
  return out;
}

FqPoly Splitting::apply(const DiffModule& M, const DiffElem& e) const {
  const auto& A0 = M.A->mod_p();
  FqPoly acc = A0->zero();
  for (size_t k = 0; k < e.coeffs.size(); ++k) acc = acc + e.coeffs[k] * values[k];
  return A0->nf(acc);
}

std::optional<Splitting> find_splitting(const DiffModule& M, long degree_bound,
                                        SplittingSearch* info) {
  const auto& A = M.A;
  const auto& A0 = A->mod_p();
  const int n = A->nvars();

  bool defaulted = degree_bound < 0;
  if (defaulted) {
    long maxdeg = 0;
    for (const auto& g : A->gens()) maxdeg = std::max(maxdeg, g.deg());
    degree_bound = 2 * A->field()->p() * maxdeg + 2;
  }

  auto attempt = [&](long bound) -> std::optional<Splitting> {
    Splitting h;
    h.values.assign(static_cast<size_t>(n + 1), A0->zero());
    h.values[0] = A0->one();
    if (M.relations.empty()) return h;

    auto mons = A0->staircase(bound);
    AffineSystem sys(A->field());
    std::vector<std::vector<int>> ids(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
      for (size_t k = 0; k < mons.size(); ++k)
        ids[static_cast<size_t>(i)].push_back(sys.add_unknown());
    for (size_t j = 0; j < M.relations.size(); ++j) {
      const auto& r = M.relations[j].coeffs;
      int scope = static_cast<int>(j);
      sys.add_poly_const(scope, r[0]);
      for (int i = 0; i < n; ++i) {
        if (r[static_cast<size_t>(i + 1)].is_zero()) continue;
        for (size_t k = 0; k < mons.size(); ++k) {
          FqPoly coeff =
              A0->nf(r[static_cast<size_t>(i + 1)].times_monomial(mons[k], A->field()->one()));
          if (!coeff.is_zero()) sys.add_poly_term(scope, coeff, ids[static_cast<size_t>(i)][k]);
        }
      }
    }
    auto sol = sys.solve();
    if (!sol) return std::nullopt;
    auto vals = sys.decode(sol->particular);
    int idx = 0;
    for (int i = 0; i < n; ++i) {
      FqPoly u = A0->zero();
      for (size_t k = 0; k < mons.size(); ++k) {
        FqElem c = vals[static_cast<size_t>(idx++)];
        if (!c.is_zero()) u.add_term(mons[k], c);
      }
      h.values[static_cast<size_t>(i + 1)] = A0->nf(u);
    }
    return h;
  };

  auto res = attempt(degree_bound);
  if (info) {
    info->bound_used = degree_bound;
    info->doubled = false;
  }
  if (!res && defaulted) {
    res = attempt(2 * degree_bound);
    if (info) {
      info->bound_used = 2 * degree_bound;
      info->doubled = true;
    }
  }
  return res;
}

W2Poly FrobLift::apply(const W2Poly& e) const {
  if (e.nvars() != A->nvars() || e.order() != A->order())
    throw StructuralError("FrobLift::apply: polynomial from a different ring");
  return A->normal_form(e.substituted(images, [](const W2Elem& c) { return frobenius_w2(c); }));
}

FrobLift make_frob_lift(const FPAlgebraPtr& A, std::vector<W2Poly> images) {
  if (static_cast<int>(images.size()) != A->nvars())
    throw LiftError("make_frob_lift: image count does not match the variables");
  FrobLift phi{A, std::move(images)};
  for (auto& im : phi.images) im = A->normal_form(im);
  const auto& A0 = A->mod_p();
  for (int i = 0; i < A->nvars(); ++i) {
    FqPoly red = A->reduce0(phi.images[static_cast<size_t>(i)]);
    FqPoly expect = A0->nf(A0->var(i).pow(A->field()->p()));
    if (!A0->is_zero(red - expect))
      throw LiftError("make_frob_lift: image of a variable does not reduce to x^p");
  }
  for (const auto& g : A->gens())
    if (!A->is_zero(phi.apply(g)))
      throw LiftError("make_frob_lift: images do not kill an ideal generator");
  return phi;
}

FrobLift splitting_to_frobenius(const DiffModule& M, const Splitting& h) {
  const auto& A = M.A;
  std::vector<W2Poly> images;
  images.reserve(static_cast<size_t>(A->nvars()));
  for (int i = 0; i < A->nvars(); ++i) {
    W2Poly xp = A->normal_form(A->var(i).pow(A->field()->p()));
    images.push_back(A->normal_form(xp + A->times_p_lift(h.values[static_cast<size_t>(i + 1)])));
  }
  return make_frob_lift(A, std::move(images));
}

Splitting frobenius_to_splitting(const DiffModule& M, const FrobLift& phi) {
  const auto& A = M.A;
  if (!A->same_ring(*phi.A)) throw StructuralError("frobenius_to_splitting: wrong algebra");
  Splitting h;
  h.values.assign(static_cast<size_t>(A->nvars() + 1), A->mod_p()->zero());
  h.values[0] = A->mod_p()->one();
  for (int i = 0; i < A->nvars(); ++i) {
    W2Poly d = A->normal_form(phi.images[static_cast<size_t>(i)] -
                              A->normal_form(A->var(i).pow(A->field()->p())));
    for (const auto& t : d.terms())
      if (!t.c.is_p_divisible())
        throw LiftError("frobenius_to_splitting: phi(x) - x^p is not divisible by p");
    h.values[static_cast<size_t>(i + 1)] = A->mod_p()->nf(A->div_p(d));
  }
  for (const auto& r : M.relations)
    if (!h.apply(M, r).is_zero())
      throw LiftError("frobenius_to_splitting: recovered values violate a relation");
  return h;
}

DiffElem DtotPullback::apply(const std::vector<FqPoly>& dst_coeffs) const {
  DiffElem acc = dst->zero_elem();
  for (size_t k = 0; k < gen_images.size(); ++k) {
    if (dst_coeffs[k].is_zero()) continue;
    acc = dst->add(acc, dst->scale(dst_coeffs[k], gen_images[k]));
  }
  return acc;
}

DiffElem DtotPullback::push(const DiffElem& e) const {
  std::vector<FqPoly> mapped;
  mapped.reserve(e.coeffs.size());
  for (const auto& c : e.coeffs) mapped.push_back(f0.apply(c));
  return apply(mapped);
}

DtotPullback make_pullback(const AlgebraHom& f, const DiffModule& src, const DiffModule& dst) {
  if (!f.src->same_ring(*src.A) || !f.dst->same_ring(*dst.A))
    throw StructuralError("make_pullback: hom endpoints do not match the modules");
  DtotPullback pb;
  pb.src = &src;
  pb.dst = &dst;
  pb.f0 = reduce_hom(f);
  // d p -> d p; d x_i -> d^tot(f(x_i))
  DiffElem dp = dst.zero_elem();
  dp.coeffs[0] = dst.A->mod_p()->one();
  pb.gen_images.push_back(dp);
  for (const auto& im : f.images) pb.gen_images.push_back(dtot_expand(dst, im));
  return pb;
}

void check_pullback_relations(const DtotPullback& pb, long degree_bound) {
  for (const auto& r : pb.src->relations)
    if (!in_relation_span(*pb.dst, pb.push(r), degree_bound))
      throw StructuralError(
          "pullback: a relation is not mapped into the relation span (invalid hom or bound too small)");
}

Splitting extend_splitting(const DiffModule& M_src, const Splitting& h, const DiffModule& M_loc) {
  const auto& A = M_src.A;
  const auto& L = M_loc.A;
  const auto& L0 = L->mod_p();
  if (L->history().size() <= A->history().size() || L->nvars() <= A->nvars())
    throw StructuralError("extend_splitting: target is not a further localization of the source");
  const int n_src = A->nvars();
  const long p = A->field()->p();

  auto extend_poly = [&](const FqPoly& f) {
    FqPoly r(L->nvars(), L->order());
    for (const auto& t : f.terms()) {
      Monomial m(L->nvars());
      for (int i = 0; i < n_src; ++i) m.e[static_cast<size_t>(i)] = t.m.e[static_cast<size_t>(i)];
      r.add_term(m, t.c);
    }
    return L0->nf(r);
  };

  Splitting out;
  out.values.assign(static_cast<size_t>(L->nvars() + 1), L0->zero());
  out.values[0] = L0->one();
  for (int i = 1; i <= n_src; ++i)
    out.values[static_cast<size_t>(i)] = extend_poly(h.values[static_cast<size_t>(i)]);

  // Each extra localization step determines the value on its inverse
  // variable: in the relation row of s*s_inv - 1 the d s_inv coefficient is
  // s0^p, with inverse s_inv^p, so
  //   h(d s_inv) = -s_inv^p * (row_0 + sum_{earlier k} row_k h(d x_k)).
  size_t first_new = A->history().size();
  for (size_t step = first_new; step < L->history().size(); ++step) {
    const auto& st = L->history()[step];
    size_t rel_index = L->gens().size() - (L->history().size() - step);
    const auto& row = M_loc.relations[rel_index].coeffs;
    FqPoly known = row[0];
    for (int k = 1; k <= st.inv_var; ++k)
      known = known + row[static_cast<size_t>(k)] * out.values[static_cast<size_t>(k)];
    FqPoly sinv_p = L0->nf(L0->var(st.inv_var).pow(p));
    out.values[static_cast<size_t>(st.inv_var + 1)] = L0->nf(-(sinv_p * known));
  }

  for (const auto& r : M_loc.relations)
    if (!out.apply(M_loc, r).is_zero())
      throw LiftError("extend_splitting: extended values violate a relation");
  return out;
}

}  // namespace wittdiff

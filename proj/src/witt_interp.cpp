#include "wittdiff/witt_interp.hpp"

namespace wittdiff {

namespace {

void require_compatible(const UCElem& a, const UCElem& b) {
  if (!a.D0->same_ring(*b.D0))
    throw StructuralError("UCElem: elements live over different rings");
  if (!(a.c == b.c)) throw StructuralError("UCElem: mixing different interpolation parameters c");
}

}  // namespace

UCElem uc_make(const FqAlgebraPtr& D0, FqPoly x0, FqPoly x1, FqPoly c) {
  return UCElem{D0, D0->nf(x0), D0->nf(x1), D0->nf(c)};
}

UCElem uc_zero(const FqAlgebraPtr& D0, const FqPoly& c) {
  return uc_make(D0, D0->zero(), D0->zero(), c);
}

UCElem uc_one(const FqAlgebraPtr& D0, const FqPoly& c) {
  return uc_make(D0, D0->one(), D0->zero(), c);
}

UCElem uc_add(const UCElem& a, const UCElem& b) {
  require_compatible(a, b);
  long p = a.D0->field()->p();
  FqPoly corr = a.D0->nf(cp_eval(a.x0, b.x0, p) * a.c);
  return uc_make(a.D0, a.x0 + b.x0, a.x1 + b.x1 + corr, a.c);
}

UCElem uc_mul(const UCElem& a, const UCElem& b) {
  require_compatible(a, b);
  long p = a.D0->field()->p();
  FqPoly x0p = a.D0->nf(a.x0.is_zero() ? a.D0->zero() : a.x0.pow(p));
  FqPoly y0p = a.D0->nf(b.x0.is_zero() ? a.D0->zero() : b.x0.pow(p));
  return uc_make(a.D0, a.x0 * b.x0, x0p * b.x1 + y0p * a.x1, a.c);
}

UCElem uc_neg(const UCElem& a) { return uc_make(a.D0, -a.x0, -a.x1, a.c); }

bool uc_eq(const UCElem& a, const UCElem& b) {
  require_compatible(a, b);
  return a.x0 == b.x0 && a.x1 == b.x1;
}

UCElem uc_scalar(const W2Elem& r, const FqAlgebraPtr& D0, const FqPoly& c) {
  FqPoly r0 = D0->from_scalar(r.w0());
  FqPoly d = D0->from_scalar(base_delta(r, r.field()->one()));
  return uc_make(D0, r0, D0->nf(c * d), c);
}

UCElem rescale_hom(const FqPoly& e, const UCElem& a) {
  return uc_make(a.D0, a.x0, a.D0->nf(a.x1 * e), a.D0->nf(a.c * e));
}

TotalDerivation make_total_derivation(const FPAlgebraPtr& A, FqAlgebraHom f, FqPoly c,
                                      std::vector<FqPoly> gen_values) {
  if (!f.src->same_ring(*A->mod_p()))
    throw StructuralError("make_total_derivation: structure map must start at A0");
  if (static_cast<int>(gen_values.size()) != A->nvars())
    throw StructuralError("make_total_derivation: one value per variable required");
  TotalDerivation d;
  d.A = A;
  d.M = omega_tot(A);
  d.D0 = f.dst;
  d.f = std::move(f);
  d.c = d.D0->nf(c);
  d.gen_values = std::move(gen_values);
  for (auto& v : d.gen_values) v = d.D0->nf(v);
  // delta of every ideal generator must vanish
  for (size_t j = 0; j < d.M.relations.size(); ++j) {
    const auto& r = d.M.relations[j].coeffs;
    FqPoly acc = d.D0->nf(d.f.apply(r[0]) * d.c);
    for (int i = 0; i < A->nvars(); ++i)
      acc = acc + d.f.apply(r[static_cast<size_t>(i + 1)]) * d.gen_values[static_cast<size_t>(i)];
    if (!d.D0->is_zero(acc))
      throw DerivationError("total p-derivation violates ideal generator #" + std::to_string(j));
  }
  return d;
}

FqPoly derivation_eval(const TotalDerivation& d, const W2Poly& a) {
  DiffElem e = dtot_expand(d.M, a);
  FqPoly acc = d.D0->nf(d.f.apply(e.coeffs[0]) * d.c);
  for (int i = 0; i < d.A->nvars(); ++i)
    acc = acc + d.f.apply(e.coeffs[static_cast<size_t>(i + 1)]) * d.gen_values[static_cast<size_t>(i)];
  return d.D0->nf(acc);
}

UCElem UCHom::apply(const W2Poly& a) const {
  FqPoly first = d.f.apply(d.A->mod_p()->nf(d.A->reduce0(a)));
  return uc_make(d.D0, first, derivation_eval(d, a), d.c);
}

UCHom derivation_to_hom(TotalDerivation d) { return UCHom{std::move(d)}; }

TotalDerivation hom_to_derivation(const UCHom& h) {
  const auto& A = h.d.A;
  UCElem at_p = h.apply(A->from_int(A->field()->p()));
  std::vector<FqPoly> f_imgs, vals;
  for (int i = 0; i < A->nvars(); ++i) {
    UCElem at_x = h.apply(A->var(i));
    f_imgs.push_back(at_x.x0);
    vals.push_back(at_x.x1);
  }
  FqAlgebraHom f(A->mod_p(), h.d.D0, std::move(f_imgs));
  return make_total_derivation(A, std::move(f), at_p.x1, std::move(vals));
}

std::optional<FqPoly> try_invert(const FqAlgebraPtr& A0, const FqPoly& u, long degree_bound) {
  if (degree_bound < 0) {
    long maxdeg = 1;
    for (const auto& g : A0->gens()) maxdeg = std::max(maxdeg, g.deg());
    degree_bound = 2 * A0->field()->p() * maxdeg + 2 + u.deg();
  }
  FqPoly un = A0->nf(u);
  if (un.is_zero()) return std::nullopt;
  if (un.is_constant()) return A0->from_scalar(un.leading().c.inverse());
  auto mons = A0->staircase(degree_bound);
  AffineSystem sys(A0->field());
  std::vector<int> ids;
  for (size_t k = 0; k < mons.size(); ++k) ids.push_back(sys.add_unknown());
  for (size_t k = 0; k < mons.size(); ++k) {
    FqPoly coeff = A0->nf(un.times_monomial(mons[k], A0->field()->one()));
    if (!coeff.is_zero()) sys.add_poly_term(0, coeff, ids[k]);
  }
  sys.add_poly_const(0, -A0->one());
  auto sol = sys.solve();
  if (!sol) return std::nullopt;
  auto vals = sys.decode(sol->particular);
  FqPoly z = A0->zero();
  for (size_t k = 0; k < mons.size(); ++k)
    if (!vals[k].is_zero()) z.add_term(mons[k], vals[k]);
  return A0->nf(z);
}

TotalDerivation lift_derivation(const TotalDerivation& d, const FPAlgebraPtr& B,
                                const std::vector<NewVarValue>& new_var_values) {
  const auto& A = d.A;
  const long p = A->field()->p();
  if (!A->field()->same_field(*B->field()))
    throw UnsupportedMapError("lift_derivation: base fields differ");
  const int nA = A->nvars(), nB = B->nvars();
  if (nB < nA) throw UnsupportedMapError("lift_derivation: target has fewer variables");
  for (int i = 0; i < nA; ++i)
    if (A->vars()[static_cast<size_t>(i)] != B->vars()[static_cast<size_t>(i)])
      throw UnsupportedMapError("lift_derivation: target variables do not extend the source");

  auto extendw2 = [&](const W2Poly& f) {
    W2Poly r(nB, B->order());
    for (const auto& t : f.terms()) {
      Monomial m(nB);
      for (int i = 0; i < nA; ++i) m.e[static_cast<size_t>(i)] = t.m.e[static_cast<size_t>(i)];
      r.add_term(m, t.c);
    }
    return r;
  };

  // localization case: history strictly extends and the generators match
  size_t extra_steps = 0;
  if (B->history().size() > A->history().size() &&
      B->gens().size() == A->gens().size() + (B->history().size() - A->history().size())) {
    extra_steps = B->history().size() - A->history().size();
    for (size_t j = 0; j < A->gens().size(); ++j)
      if (B->gens()[j] != extendw2(A->gens()[j])) {
        extra_steps = 0;
        break;
      }
  }

  if (extra_steps > 0) {
    std::vector<FqPoly> f_imgs, vals;
    for (int i = 0; i < nA; ++i) {
      f_imgs.push_back(d.f.images[static_cast<size_t>(i)]);
      vals.push_back(d.gen_values[static_cast<size_t>(i)]);
    }
    size_t first_new = A->history().size();
    for (size_t step = first_new; step < B->history().size(); ++step) {
      const auto& st = B->history()[step];
      // evaluate f and delta on s, which involves only earlier variables
      FqAlgebraHom f_partial(
          FqAlgebra::make(B->field(), std::vector<std::string>(B->vars().begin(),
                                                               B->vars().begin() + st.inv_var),
                          {}, B->order()),
          d.D0, std::vector<FqPoly>(f_imgs.begin(), f_imgs.begin() + st.inv_var),
          /*verify=*/false);
      FqPoly s0(st.inv_var, B->order());
      for (const auto& t : st.s.terms()) {
        if (t.c.w0().is_zero()) continue;
        Monomial m(st.inv_var);
        for (int i = 0; i < st.inv_var; ++i) m.e[static_cast<size_t>(i)] = t.m.e[static_cast<size_t>(i)];
        s0.add_term(m, t.c.w0());
      }
      FqPoly fs = d.D0->nf(f_partial.apply(s0));
      auto inv = try_invert(d.D0, fs);
      if (!inv)
        throw UnsupportedMapError("lift_derivation: localized element is not invertible in D0");
      // delta(s) through the expansion in the source module of this step
      // using the current values; computed against B via linearity:
      // delta(s) = sum over built values; reuse derivation data on A side by
      // building a temporary derivation over the prefix is overkill: since s
      // involves only variables with known values, expand in B directly later.
      f_imgs.push_back(d.D0->nf(*inv));
      vals.push_back(d.D0->zero());  // placeholder, fixed below
    }
    // build with placeholder values then repair the inverse-variable deltas in
    // history order using delta(s s_inv) = 0:
    //   delta(s_inv) = -f(s_inv)^p * f(s_inv)^p ... = -(f(s)^-p)(f(s_inv0)^p is f(s)^-p)
    // concretely: delta(s_inv) = -f(s_inv)^{2p} * delta(s) with delta(1) = 0.
    FqAlgebraHom fB(B->mod_p(), d.D0, f_imgs, /*verify=*/false);
    DiffModule MB = omega_tot(B);
    for (size_t step = first_new; step < B->history().size(); ++step) {
      const auto& st = B->history()[step];
      size_t rel_index = B->gens().size() - (B->history().size() - step);
      const auto& row = MB.relations[rel_index].coeffs;
      // row: c0 d p + sum_k row_k d x_k + s0^p d s_inv = 0 pushed through (f, delta)
      FqPoly acc = d.D0->nf(fB.apply(row[0]) * d.c);
      for (int k = 0; k < st.inv_var; ++k)
        acc = acc + fB.apply(row[static_cast<size_t>(k + 1)]) * vals[static_cast<size_t>(k)];
      FqPoly fsinv_p = d.D0->nf(fB.images[static_cast<size_t>(st.inv_var)].pow(p));
      vals[static_cast<size_t>(st.inv_var)] = d.D0->nf(-(fsinv_p * acc));
    }
    return make_total_derivation(B, FqAlgebraHom(B->mod_p(), d.D0, std::move(f_imgs)),
                                 d.c, std::move(vals));
  }

  // polynomial extension case: same generators, extra free variables
  if (B->gens().size() != A->gens().size())
    throw UnsupportedMapError("lift_derivation: unsupported map shape");
  for (size_t j = 0; j < A->gens().size(); ++j)
    if (B->gens()[j] != extendw2(A->gens()[j]))
      throw UnsupportedMapError("lift_derivation: unsupported map shape");
  const int extra = nB - nA;
  if (static_cast<int>(new_var_values.size()) > extra)
    throw StructuralError("lift_derivation: too many new-variable values");
  std::vector<FqPoly> f_imgs(d.f.images.begin(), d.f.images.end());
  std::vector<FqPoly> vals = d.gen_values;
  for (int i = 0; i < extra; ++i) {
    if (i < static_cast<int>(new_var_values.size())) {
      f_imgs.push_back(new_var_values[static_cast<size_t>(i)].f_value);
      vals.push_back(new_var_values[static_cast<size_t>(i)].delta_value);
    } else {
      f_imgs.push_back(d.D0->zero());
      vals.push_back(d.D0->zero());
    }
  }
  return make_total_derivation(B, FqAlgebraHom(B->mod_p(), d.D0, std::move(f_imgs)),
                               d.c, std::move(vals));
}

}  // namespace wittdiff

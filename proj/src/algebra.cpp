#include "wittdiff/algebra.hpp"

#include <functional>
#include <set>

namespace wittdiff {

namespace {

void check_var_names(const std::vector<std::string>& vars) {
  std::set<std::string> seen;
  for (const auto& v : vars) {
    if (v.empty()) throw StructuralError("empty variable name");
    if (v == "p") throw StructuralError("variable name 'p' is reserved for the prime constant");
    if (!seen.insert(v).second) throw StructuralError("duplicate variable name '" + v + "'");
  }
}

}  // namespace

FqAlgebraPtr FqAlgebra::make(const FqPtr& field, std::vector<std::string> vars,
                             std::vector<FqPoly> gens, MonomialOrder ord) {
  check_var_names(vars);
  auto a = std::shared_ptr<FqAlgebra>(new FqAlgebra());
  a->field_ = field;
  a->vars_ = std::move(vars);
  a->ord_ = ord;
  for (auto& g : gens)
    if (g.nvars() != static_cast<int>(a->vars_.size()) || g.order() != ord)
      throw StructuralError("FqAlgebra: generator shape mismatch");
  a->gens_ = std::move(gens);
  a->gb_ = buchberger(a->gens_, a->nvars(), ord, field);
  return a;
}

FqPoly FqAlgebra::nf(const FqPoly& f) const {
  if (f.nvars() != nvars() || f.order() != ord_)
    throw StructuralError("FqAlgebra::nf: polynomial from a different ring");
  return gb_.nf(f);
}

FqPoly FqAlgebra::parse(const std::string& text) const {
  auto ast = parse_poly_ast(text, vars_);
  resolve_prime_constant(*ast, field_->p());
  FqPoly raw = eval_poly_ast(
      *ast, nvars(), ord_, field_->one(),
      [this](long long n) { return field_->from_int(n); });
  return nf(raw);
}

FqPoly FqAlgebra::random_element(std::mt19937_64& rng, long maxdeg) const {
  auto mons = staircase(maxdeg);
  FqPoly r = zero();
  for (const auto& m : mons) {
    // keep the polynomials sparse-ish
    if (rng() % 3 == 0) {
      FqElem c = field_->random(rng);
      if (!c.is_zero()) r.add_term(m, c);
    }
  }
  return r;
}

bool FqAlgebra::jacobian_smooth() const {
  std::vector<FqPoly> nzgens;
  for (const auto& g : gens_)
    if (!g.is_zero()) nzgens.push_back(g);
  const int r = static_cast<int>(nzgens.size());
  const int n = nvars();
  if (r == 0) return true;  // affine space
  if (r > n) return false;
  // Jacobian rows
  std::vector<std::vector<FqPoly>> jac(static_cast<size_t>(r));
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < n; ++j) jac[static_cast<size_t>(i)].push_back(fq_partial(nzgens[static_cast<size_t>(i)], j));
  // all r x r minors, by column subsets
  std::vector<FqPoly> ideal = nzgens;
  std::vector<int> cols(static_cast<size_t>(r));
  std::function<void(int, int)> choose = [&](int start, int k) {
    if (k == r) {
      // Laplace expansion determinant of the r x r submatrix
      std::function<FqPoly(std::vector<int>, std::vector<int>)> det =
          [&](std::vector<int> rws, std::vector<int> cls) -> FqPoly {
        if (rws.size() == 1)
          return jac[static_cast<size_t>(rws[0])][static_cast<size_t>(cls[0])];
        FqPoly acc = zero();
        for (size_t k2 = 0; k2 < cls.size(); ++k2) {
          FqPoly minor_val;
          std::vector<int> sub_rows(rws.begin() + 1, rws.end());
          std::vector<int> sub_cols;
          for (size_t t = 0; t < cls.size(); ++t)
            if (t != k2) sub_cols.push_back(cls[t]);
          minor_val = det(sub_rows, sub_cols);
          FqPoly term = jac[static_cast<size_t>(rws[0])][static_cast<size_t>(cls[k2])] * minor_val;
          acc = (k2 % 2 == 0) ? acc + term : acc - term;
        }
        return acc;
      };
      std::vector<int> rws(static_cast<size_t>(r));
      for (int i = 0; i < r; ++i) rws[static_cast<size_t>(i)] = i;
      ideal.push_back(det(rws, cols));
      return;
    }
    for (int c = start; c < n; ++c) {
      cols[static_cast<size_t>(k)] = c;
      choose(c + 1, k + 1);
    }
  };
  choose(0, 0);
  auto gb = buchberger(ideal, n, ord_, field_);
  for (const auto& g : gb.g)
    if (!g.is_zero() && g.leading().m.is_one()) return true;
  return false;
}

bool FqAlgebra::same_ring(const FqAlgebra& o) const {
  if (this == &o) return true;
  if (!field_->same_field(*o.field_)) return false;
  if (vars_ != o.vars_ || ord_ != o.ord_) return false;
  if (gens_.size() != o.gens_.size()) return false;
  for (size_t i = 0; i < gens_.size(); ++i)
    if (gens_[i] != o.gens_[i]) return false;
  return true;
}

FqPoly fq_partial(const FqPoly& f, int var) {
  FqPoly r(f.nvars(), f.order());
  for (const auto& t : f.terms()) {
    uint16_t e = t.m.e[static_cast<size_t>(var)];
    if (!e) continue;
    Monomial m = t.m;
    m.e[static_cast<size_t>(var)] = static_cast<uint16_t>(e - 1);
    FqElem c = t.c.scaled_by_int(e);
    if (!c.is_zero()) r.add_term(m, c);
  }
  return r;
}

FPAlgebraPtr FPAlgebra::make(const FqPtr& field, std::vector<std::string> vars,
                             std::vector<W2Poly> gens, MonomialOrder ord, bool require_flat) {
  check_var_names(vars);
  auto a = std::shared_ptr<FPAlgebra>(new FPAlgebra());
  a->field_ = field;
  a->vars_ = std::move(vars);
  a->ord_ = ord;
  for (auto& g : gens)
    if (g.nvars() != static_cast<int>(a->vars_.size()) || g.order() != ord)
      throw StructuralError("FPAlgebra: generator shape mismatch");
  a->gens_ = std::move(gens);

  // mod-p reduction and its Groebner basis
  std::vector<FqPoly> gens0;
  gens0.reserve(a->gens_.size());
  for (const auto& g : a->gens_) gens0.push_back(a->reduce0(g));
  a->a0_ = FqAlgebra::make(field, a->vars_, gens0, ord);

  // lift each Groebner basis element into the W2 ideal via its cofactors
  const auto& gb = a->a0_->gb();
  a->lifted_gb_.reserve(gb.g.size());
  for (size_t i = 0; i < gb.g.size(); ++i) {
    W2Poly G = a->zero();
    for (size_t j = 0; j < a->gens_.size(); ++j) {
      if (gb.from_gens[i][j].is_zero()) continue;
      G = G + a->lift0(gb.from_gens[i][j]) * a->gens_[j];
    }
    if (a->reduce0(G) != gb.g[i])
      throw StructuralError("FPAlgebra: lifted basis element does not reduce correctly");
    a->lifted_gb_.push_back(std::move(G));
  }

  // exact flatness certificate: for every generator tau of Syz(gens mod p),
  // (sum lift(tau_j) gens_j) / p must lie in the mod-p ideal
  a->flat_ = true;
  for (const auto& tau : gb.gen_syzygies()) {
    W2Poly w = a->zero();
    for (size_t j = 0; j < a->gens_.size(); ++j) {
      if (tau[j].is_zero()) continue;
      w = w + a->lift0(tau[j]) * a->gens_[j];
    }
    FqPoly t = a->div_p(w);
    if (!a->a0_->is_zero(t)) {
      a->flat_ = false;
      break;
    }
  }
  if (require_flat && !a->flat_)
    throw FlatnessError("FPAlgebra: presentation has p-torsion (not flat over W2)");
  return a;
}

int FPAlgebra::var_index(const std::string& name) const {
  for (size_t i = 0; i < vars_.size(); ++i)
    if (vars_[i] == name) return static_cast<int>(i);
  throw StructuralError("FPAlgebra: unknown variable '" + name + "'");
}

FqPoly FPAlgebra::reduce0(const W2Poly& e) const {
  return e.map_coeffs<FqElem>([](const W2Elem& c) { return c.w0(); });
}

W2Poly FPAlgebra::lift0(const FqPoly& f) const {
  return f.map_coeffs<W2Elem>([](const FqElem& c) { return w2_teich(c); });
}

FqPoly FPAlgebra::div_p(const W2Poly& e) const {
  return e.map_coeffs<FqElem>([](const W2Elem& c) { return c.div_p_exact(); });
}

W2Poly FPAlgebra::times_p_lift(const FqPoly& f) const {
  auto zero = field_->zero();
  return f.map_coeffs<W2Elem>([&](const FqElem& c) { return W2Elem(zero, c.frobenius()); });
}

W2Poly FPAlgebra::normal_form(const W2Poly& e) const {
  if (e.nvars() != nvars() || e.order() != ord_)
    throw StructuralError("FPAlgebra::normal_form: polynomial from a different ring");
  const auto& gb = a0_->gb();
  // stage 1: divide the reduction, subtract the lifted combination
  auto div1 = poly_divide(reduce0(e), gb.g);
  W2Poly r = e;
  for (size_t i = 0; i < gb.g.size(); ++i) {
    if (div1.quotients[i].is_zero()) continue;
    r = r - lift0(div1.quotients[i]) * lifted_gb_[i];
  }
  r = r - lift0(div1.remainder);
  // stage 2: the remainder is exactly p-divisible; reduce the quotient again
  FqPoly s = div_p(r);
  FqPoly n1 = gb.nf(s);
  return lift0(div1.remainder) + times_p_lift(n1);
}

bool FPAlgebra::smooth() const {
  if (smooth_cache_ < 0) smooth_cache_ = (flat_ && a0_->jacobian_smooth()) ? 1 : 0;
  return smooth_cache_ == 1;
}

W2Poly FPAlgebra::parse(const std::string& text) const {
  auto ast = parse_poly_ast(text, vars_);
  resolve_prime_constant(*ast, field_->p());
  W2Poly raw = eval_poly_ast(
      *ast, nvars(), ord_, w2_one(field_),
      [this](long long n) { return w2_from_int(field_, n); });
  return normal_form(raw);
}

FPAlgebraPtr FPAlgebra::localize(const W2Poly& s) const {
  if (a0_->is_zero(reduce0(s)))
    throw DegenerateLocalizationError("localize: element vanishes in the mod-p reduction");
  // name the inverse variable
  std::string base = "s_inv";
  if (s.num_terms() == 1 && s.leading().c.is_one() && s.leading().m.deg() == 1) {
    for (int i = 0; i < nvars(); ++i)
      if (s.leading().m.e[static_cast<size_t>(i)] == 1) base = vars_[static_cast<size_t>(i)] + "_inv";
  }
  std::string name = base;
  int suffix = 2;
  auto taken = [&](const std::string& n) {
    for (const auto& v : vars_)
      if (v == n) return true;
    return false;
  };
  while (taken(name)) name = base + std::to_string(suffix++);

  std::vector<std::string> nv = vars_;
  nv.push_back(name);
  const int n2 = static_cast<int>(nv.size());
  auto extend = [&](const W2Poly& f) {
    W2Poly r(n2, ord_);
    for (const auto& t : f.terms()) {
      Monomial m(n2);
      for (int i = 0; i < nvars(); ++i) m.e[static_cast<size_t>(i)] = t.m.e[static_cast<size_t>(i)];
      r.add_term(m, t.c);
    }
    return r;
  };
  std::vector<W2Poly> ng;
  ng.reserve(gens_.size() + 1);
  for (const auto& g : gens_) ng.push_back(extend(g));
  W2Poly s_ext = extend(s);
  W2Poly rel = s_ext * W2Poly::variable(n2, ord_, n2 - 1, w2_one(field_)) -
               W2Poly::constant(n2, ord_, w2_one(field_));
  ng.push_back(rel);

  auto loc = make(field_, nv, ng, ord_, /*require_flat=*/true);
  auto* mut = const_cast<FPAlgebra*>(loc.get());
  mut->history_ = history_;
  for (auto& st : mut->history_) st.s = extend(st.s);
  mut->history_.push_back(LocalizationStep{s_ext, n2 - 1});
  return loc;
}

bool FPAlgebra::same_ring(const FPAlgebra& o) const {
  if (this == &o) return true;
  if (!field_->same_field(*o.field_)) return false;
  if (vars_ != o.vars_ || ord_ != o.ord_) return false;
  if (gens_.size() != o.gens_.size()) return false;
  for (size_t i = 0; i < gens_.size(); ++i)
    if (gens_[i] != o.gens_[i]) return false;
  return true;
}

AlgebraHom::AlgebraHom(FPAlgebraPtr s, FPAlgebraPtr d, std::vector<W2Poly> imgs, bool verify)
    : src(std::move(s)), dst(std::move(d)), images(std::move(imgs)) {
  if (static_cast<int>(images.size()) != src->nvars())
    throw StructuralError("AlgebraHom: image count does not match source variables");
  for (auto& im : images) im = dst->normal_form(im);
  if (verify) {
    for (const auto& g : src->gens()) {
      W2Poly img = g.substituted(images, [](const W2Elem& c) { return c; });
      if (!dst->is_zero(img))
        throw StructuralError("AlgebraHom: a source relation does not map to zero");
    }
  }
}

W2Poly AlgebraHom::apply(const W2Poly& e) const {
  if (e.nvars() != src->nvars() || e.order() != src->order())
    throw StructuralError("AlgebraHom::apply: polynomial not in the source ring");
  return dst->normal_form(e.substituted(images, [](const W2Elem& c) { return c; }));
}

AlgebraHom AlgebraHom::compose(const AlgebraHom& g) const {
  if (!g.dst->same_ring(*src)) throw StructuralError("AlgebraHom::compose: rings do not match");
  std::vector<W2Poly> imgs;
  imgs.reserve(g.images.size());
  for (const auto& im : g.images) imgs.push_back(apply(im));
  return AlgebraHom(g.src, dst, std::move(imgs), /*verify=*/false);
}

AlgebraHom AlgebraHom::identity(const FPAlgebraPtr& a) {
  std::vector<W2Poly> imgs;
  for (int i = 0; i < a->nvars(); ++i) imgs.push_back(a->var(i));
  return AlgebraHom(a, a, std::move(imgs), /*verify=*/false);
}

FqAlgebraHom::FqAlgebraHom(FqAlgebraPtr s, FqAlgebraPtr d, std::vector<FqPoly> imgs, bool verify)
    : src(std::move(s)), dst(std::move(d)), images(std::move(imgs)) {
  if (static_cast<int>(images.size()) != src->nvars())
    throw StructuralError("FqAlgebraHom: image count does not match source variables");
  for (auto& im : images) im = dst->nf(im);
  if (verify) {
    for (const auto& g : src->gens()) {
      FqPoly img = g.substituted(images, [](const FqElem& c) { return c; });
      if (!dst->is_zero(img))
        throw StructuralError("FqAlgebraHom: a source relation does not map to zero");
    }
  }
}

FqPoly FqAlgebraHom::apply(const FqPoly& e) const {
  if (e.nvars() != src->nvars() || e.order() != src->order())
    throw StructuralError("FqAlgebraHom::apply: polynomial not in the source ring");
  return dst->nf(e.substituted(images, [](const FqElem& c) { return c; }));
}

FqAlgebraHom FqAlgebraHom::compose(const FqAlgebraHom& g) const {
  if (!g.dst->same_ring(*src)) throw StructuralError("FqAlgebraHom::compose: rings do not match");
  std::vector<FqPoly> imgs;
  imgs.reserve(g.images.size());
  for (const auto& im : g.images) imgs.push_back(apply(im));
  return FqAlgebraHom(g.src, dst, std::move(imgs), /*verify=*/false);
}

FqAlgebraHom FqAlgebraHom::identity(const FqAlgebraPtr& a) {
  std::vector<FqPoly> imgs;
  for (int i = 0; i < a->nvars(); ++i) imgs.push_back(a->var(i));
  return FqAlgebraHom(a, a, std::move(imgs), /*verify=*/false);
}

FqAlgebraHom reduce_hom(const AlgebraHom& h) {
  std::vector<FqPoly> imgs;
  imgs.reserve(h.images.size());
  for (const auto& im : h.images) imgs.push_back(h.dst->mod_p()->nf(h.dst->reduce0(im)));
  return FqAlgebraHom(h.src->mod_p(), h.dst->mod_p(), std::move(imgs), /*verify=*/false);
}

}  // namespace wittdiff

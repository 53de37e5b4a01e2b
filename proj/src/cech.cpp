#include "wittdiff/cech.hpp"

#include <algorithm>
#include <sstream>

namespace wittdiff {

namespace {

W2Poly embed_into(const FPAlgebraPtr& big, const W2Poly& f, int src_nvars) {
  W2Poly r(big->nvars(), big->order());
  for (const auto& t : f.terms()) {
    Monomial m(big->nvars());
    for (int i = 0; i < src_nvars; ++i) m.e[static_cast<size_t>(i)] = t.m.e[static_cast<size_t>(i)];
    r.add_term(m, t.c);
  }
  return r;
}

// Membership in the F_q-span of the F*Omega^1 relation rows.
bool fstar_in_span(const DiffModule& M, const std::vector<FqPoly>& v, long degree_bound = -1) {
  bool zero = true;
  for (const auto& c : v) zero = zero && c.is_zero();
  if (zero) return true;
  auto rows = fstar_relations(M);
  std::vector<std::vector<FqPoly>> nzrows;
  for (auto& r : rows) {
    bool rz = true;
    for (const auto& c : r) rz = rz && c.is_zero();
    if (!rz) nzrows.push_back(std::move(r));
  }
  if (nzrows.empty()) return false;
  const auto& A0 = M.A->mod_p();
  if (degree_bound < 0) {
    long maxdeg = 1;
    for (const auto& g : M.A->gens()) maxdeg = std::max(maxdeg, g.deg());
    for (const auto& c : v) maxdeg = std::max(maxdeg, c.deg());
    degree_bound = 2 * M.A->field()->p() * maxdeg + 4;
  }
  auto mons = A0->staircase(degree_bound);
  AffineSystem sys(M.A->field());
  std::vector<std::vector<int>> ids(nzrows.size());
  for (size_t j = 0; j < nzrows.size(); ++j)
    for (size_t k = 0; k < mons.size(); ++k) ids[j].push_back(sys.add_unknown());
  for (size_t coord = 0; coord < v.size(); ++coord) {
    sys.add_poly_const(static_cast<int>(coord), -v[coord]);
    for (size_t j = 0; j < nzrows.size(); ++j) {
      const auto& rel = nzrows[j][coord];
      if (rel.is_zero()) continue;
      for (size_t k = 0; k < mons.size(); ++k) {
        FqPoly coeff = A0->nf(rel.times_monomial(mons[k], M.A->field()->one()));
        if (!coeff.is_zero()) sys.add_poly_term(static_cast<int>(coord), coeff, ids[j][k]);
      }
    }
  }
  return sys.solve().has_value();
}

// Functional (values on F* generators) applied to the beta part of an
// expansion.
FqPoly eval_functional_beta(const DiffModule& M, const std::vector<FqPoly>& values,
                            const DiffElem& e) {
  const auto& A0 = M.A->mod_p();
  FqPoly acc = A0->zero();
  for (size_t k = 0; k + 1 < e.coeffs.size(); ++k)
    acc = acc + e.coeffs[k + 1] * values[k];
  return A0->nf(acc);
}

std::vector<FqPoly> strip_dp(const Splitting& h) {
  return std::vector<FqPoly>(h.values.begin() + 1, h.values.end());
}

}  // namespace

int GluedScheme::chart_index(const std::string& name) const {
  for (size_t i = 0; i < charts_.size(); ++i)
    if (charts_[i].name == name) return static_cast<int>(i);
  throw InputError("unknown chart '" + name + "'");
}

const Overlap& GluedScheme::overlap_at(int i, int j) const {
  for (const auto& ov : overlaps_)
    if (ov.i == i && ov.j == j) return ov;
  throw StructuralError("no overlap between charts " + std::to_string(i) + " and " +
                        std::to_string(j));
}

GluedScheme GluedScheme::build(std::vector<std::pair<std::string, FPAlgebraPtr>> charts,
                               const std::vector<OverlapSpec>& overlaps,
                               const std::vector<TripleSpec>& triples) {
  if (charts.empty()) throw InputError("a glued scheme needs at least one chart");
  if (charts.size() > 3) throw InputError("covers with more than 3 charts are not supported");
  GluedScheme S;
  for (auto& [name, A] : charts) {
    Chart c;
    c.name = name;
    c.A = A;
    c.M = omega_tot(A);
    S.charts_.push_back(std::move(c));
  }
  for (const auto& spec_in : overlaps) {
    OverlapSpec spec = spec_in;
    int i = S.chart_index(spec.chart_i);
    int j = S.chart_index(spec.chart_j);
    if (i == j) throw InputError("overlap of a chart with itself");
    if (i > j) {
      std::swap(i, j);
      std::swap(spec.chart_i, spec.chart_j);
      std::swap(spec.s_i, spec.s_j);
      std::swap(spec.to_i, spec.to_j);
    }
    const auto& Ai = S.charts_[static_cast<size_t>(i)].A;
    const auto& Aj = S.charts_[static_cast<size_t>(j)].A;
    auto O = Ai->localize(Ai->parse(spec.s_i));
    auto Oo = Aj->localize(Aj->parse(spec.s_j));

    auto images_from = [](const FPAlgebraPtr& src, const FPAlgebraPtr& dst,
                          const std::map<std::string, std::string>& table) {
      std::vector<W2Poly> imgs;
      for (const auto& v : src->vars()) {
        auto it = table.find(v);
        if (it == table.end())
          throw InputError("overlap transition is missing the image of '" + v + "'");
        imgs.push_back(dst->parse(it->second));
      }
      return imgs;
    };
    AlgebraHom fwd(Oo, O, images_from(Oo, O, spec.to_i));
    AlgebraHom bwd(O, Oo, images_from(O, Oo, spec.to_j));
    std::vector<W2Poly> rho_i_imgs, rho_j_imgs;
    for (int k = 0; k < Ai->nvars(); ++k) rho_i_imgs.push_back(O->var(k));
    for (int k = 0; k < Aj->nvars(); ++k) rho_j_imgs.push_back(fwd.images[static_cast<size_t>(k)]);
    Overlap ov(AlgebraHom(Ai, O, std::move(rho_i_imgs)),
               AlgebraHom(Aj, O, std::move(rho_j_imgs)), std::move(fwd), std::move(bwd));
    ov.i = i;
    ov.j = j;
    ov.O = O;
    ov.O_other = Oo;
    ov.M = omega_tot(O);
    ov.M_other = omega_tot(Oo);
    S.overlaps_.push_back(std::move(ov));
  }
  for (const auto& tr : triples) {
    int i = S.chart_index(tr.chart_i);
    int j = S.chart_index(tr.chart_j);
    int k = S.chart_index(tr.chart_k);
    if (!(i < j && j < k)) throw InputError("triple charts must be given in ascending order");
    const auto& ov_ij = S.overlap_at(i, j);
    const auto& ov_ik = S.overlap_at(i, k);
    const auto& ov_jk = S.overlap_at(j, k);
    auto T = ov_ij.O->localize(ov_ij.O->parse(tr.extra_loc));
    std::vector<W2Poly> inc;
    for (int v = 0; v < ov_ij.O->nvars(); ++v) inc.push_back(T->var(v));
    auto timages = [&](const FPAlgebraPtr& src, const std::map<std::string, std::string>& table,
                       const char* which) {
      std::vector<W2Poly> imgs;
      for (const auto& v : src->vars()) {
        auto it = table.find(v);
        if (it == table.end())
          throw InputError(std::string("triple data is missing the ") + which +
                           " image of '" + v + "'");
        imgs.push_back(T->parse(it->second));
      }
      return imgs;
    };
    TripleOverlap t3(AlgebraHom(ov_ij.O, T, std::move(inc)),
                     AlgebraHom(ov_ik.O, T, timages(ov_ik.O, tr.from_ik, "O_ik")),
                     AlgebraHom(ov_jk.O, T, timages(ov_jk.O, tr.from_jk, "O_jk")));
    t3.i = i;
    t3.j = j;
    t3.k = k;
    t3.T = T;
    const auto& Ai = S.charts_[static_cast<size_t>(i)].A;
    for (int v = 0; v < Ai->nvars(); ++v) {
      auto it = tr.pre_jk.find(Ai->vars()[static_cast<size_t>(v)]);
      if (it == tr.pre_jk.end())
        throw InputError("triple data is missing pre_jk for chart variable '" +
                         Ai->vars()[static_cast<size_t>(v)] + "'");
      W2Poly pre = ov_jk.O->parse(it->second);
      W2Poly back = t3.from_jk.apply(pre);
      W2Poly expect = T->normal_form(embed_into(T, Ai->var(v), Ai->nvars()));
      if (!T->is_zero(back - expect))
        throw InputError("pre_jk image of '" + Ai->vars()[static_cast<size_t>(v)] +
                         "' does not map back to the variable");
      t3.pre_jk.push_back(std::move(pre));
    }
    S.triples_.push_back(std::move(t3));
  }
  return S;
}

long GluedScheme::default_window() const {
  long maxdeg = 1;
  for (const auto& c : charts_)
    for (const auto& g : c.A->gens()) maxdeg = std::max(maxdeg, g.deg());
  for (const auto& ov : overlaps_) {
    for (const auto& g : ov.O->gens()) maxdeg = std::max(maxdeg, g.deg());
    for (const auto& g : ov.O_other->gens()) maxdeg = std::max(maxdeg, g.deg());
  }
  return 2 * field()->p() * maxdeg + 4;
}

std::vector<std::string> GluedScheme::glue_check() const {
  std::vector<std::string> report;
  for (const auto& c : charts_) {
    if (!c.A->flat()) throw GluingError("chart '" + c.name + "' is not flat over W2");
    if (!c.A->smooth()) throw GluingError("chart '" + c.name + "' fails the Jacobian criterion");
    report.push_back("chart " + c.name + ": flat and smooth");
  }
  for (const auto& ov : overlaps_) {
    const auto& ni = charts_[static_cast<size_t>(ov.i)].name;
    const auto& nj = charts_[static_cast<size_t>(ov.j)].name;
    std::string tag = "overlap (" + ni + "," + nj + ")";
    if (!ov.O->smooth() || !ov.O_other->smooth())
      throw GluingError(tag + ": localized ring fails the Jacobian criterion");
    for (int v = 0; v < ov.O->nvars(); ++v) {
      W2Poly round = ov.fwd.apply(ov.bwd.apply(ov.O->var(v)));
      if (!ov.O->is_zero(round - ov.O->var(v)))
        throw GluingError(tag + ": fwd(bwd(" + ov.O->vars()[static_cast<size_t>(v)] +
                          ")) is not the identity");
    }
    for (int v = 0; v < ov.O_other->nvars(); ++v) {
      W2Poly round = ov.bwd.apply(ov.fwd.apply(ov.O_other->var(v)));
      if (!ov.O_other->is_zero(round - ov.O_other->var(v)))
        throw GluingError(tag + ": bwd(fwd(" + ov.O_other->vars()[static_cast<size_t>(v)] +
                          ")) is not the identity");
    }
    // the transition must carry total differentials isomorphically
    auto pf = make_pullback(ov.fwd, ov.M_other, ov.M);
    auto pb = make_pullback(ov.bwd, ov.M, ov.M_other);
    try {
      check_pullback_relations(pf);
      check_pullback_relations(pb);
    } catch (const StructuralError& e) {
      throw GluingError(tag + ": " + std::string(e.what()));
    }
    for (int g = 0; g < ov.M.ngens(); ++g) {
      DiffElem round = pf.push(pb.gen_images[static_cast<size_t>(g)]);
      DiffElem unit = ov.M.zero_elem();
      unit.coeffs[static_cast<size_t>(g)] = ov.O->mod_p()->one();
      if (!in_relation_span(ov.M, ov.M.sub(round, unit)))
        throw GluingError(tag + ": pullback round trip is not the identity on differentials");
    }
    report.push_back(tag + ": transitions invert, differentials glue");
  }
  for (const auto& t3 : triples_) {
    const auto& ov_ij = overlap_at(t3.i, t3.j);
    const auto& ov_ik = overlap_at(t3.i, t3.k);
    const auto& ov_jk = overlap_at(t3.j, t3.k);
    const auto& Ai = charts_[static_cast<size_t>(t3.i)].A;
    const auto& Aj = charts_[static_cast<size_t>(t3.j)].A;
    const auto& Ak = charts_[static_cast<size_t>(t3.k)].A;
    for (int v = 0; v < Ai->nvars(); ++v) {
      W2Poly a = t3.from_ij.apply(ov_ij.rho_i.apply(Ai->var(v)));
      W2Poly b = t3.from_ik.apply(ov_ik.rho_i.apply(Ai->var(v)));
      if (!t3.T->is_zero(a - b)) throw GluingError("triple: chart-i variable routes disagree");
    }
    for (int v = 0; v < Aj->nvars(); ++v) {
      W2Poly a = t3.from_ij.apply(ov_ij.rho_j.apply(Aj->var(v)));
      W2Poly b = t3.from_jk.apply(ov_jk.rho_i.apply(Aj->var(v)));
      if (!t3.T->is_zero(a - b)) throw GluingError("triple: chart-j variable routes disagree");
    }
    for (int v = 0; v < Ak->nvars(); ++v) {
      W2Poly a = t3.from_ik.apply(ov_ik.rho_j.apply(Ak->var(v)));
      W2Poly b = t3.from_jk.apply(ov_jk.rho_j.apply(Ak->var(v)));
      if (!t3.T->is_zero(a - b)) throw GluingError("triple: chart-k variable routes disagree");
    }
    report.push_back("triple overlap: transition cocycle holds");
  }
  return report;
}

CechClass CechClass::negate() const {
  CechClass r = *this;
  for (auto& [k, v] : r.chart_values)
    for (auto& c : v) c = -c;
  for (auto& [k, v] : r.pair_values)
    for (auto& c : v) c = -c;
  return r;
}

bool CechClass::is_zero() const {
  for (const auto& [k, v] : chart_values)
    for (const auto& c : v)
      if (!c.is_zero()) return false;
  for (const auto& [k, v] : pair_values)
    for (const auto& c : v)
      if (!c.is_zero()) return false;
  return true;
}

CechClass cech_add(const GluedScheme& S, const CechClass& a, const CechClass& b) {
  if (a.degree != b.degree || a.sheaf != b.sheaf)
    throw StructuralError("cech_add: mixing cochains of different type");
  CechClass r = a;
  for (auto& [key, v] : r.pair_values) {
    auto it = b.pair_values.find(key);
    if (it == b.pair_values.end()) continue;
    const auto& O0 = S.overlap_at(key.first, key.second).O->mod_p();
    for (size_t t = 0; t < v.size(); ++t) v[t] = O0->nf(v[t] + it->second[t]);
  }
  for (auto& [key, v] : r.chart_values) {
    auto it = b.chart_values.find(key);
    if (it == b.chart_values.end()) continue;
    const auto& A0 = S.charts()[static_cast<size_t>(key)].A->mod_p();
    for (size_t t = 0; t < v.size(); ++t) v[t] = A0->nf(v[t] + it->second[t]);
  }
  return r;
}

Restriction build_restriction(const GluedScheme& S, const Overlap& ov, bool side_i, int dp_value) {
  const Chart& chart = S.charts()[static_cast<size_t>(side_i ? ov.i : ov.j)];
  const FPAlgebraPtr& L = side_i ? ov.O : ov.O_other;
  const DiffModule& ML = side_i ? ov.M : ov.M_other;
  const auto& L0 = L->mod_p();
  const long p = L->field()->p();
  const int n_chart = chart.A->nvars();
  const int nL = L->nvars();

  Restriction r;
  r.C.assign(static_cast<size_t>(nL), L0->zero());
  r.R.assign(static_cast<size_t>(nL),
             std::vector<FqPoly>(static_cast<size_t>(n_chart), L0->zero()));
  for (int m = 0; m < n_chart; ++m) r.R[static_cast<size_t>(m)][static_cast<size_t>(m)] = L0->one();

  size_t first_new = chart.A->history().size();
  for (size_t step = first_new; step < L->history().size(); ++step) {
    const auto& st = L->history()[step];
    size_t rel_index = L->gens().size() - (L->history().size() - step);
    const auto& row = ML.relations[rel_index].coeffs;
    FqPoly sinv_p = L0->nf(L0->var(st.inv_var).pow(p));
    FqPoly cacc = row[0].scaled_by_int(dp_value);
    std::vector<FqPoly> racc(static_cast<size_t>(n_chart), L0->zero());
    for (int l = 0; l < st.inv_var; ++l) {
      const auto& rl = row[static_cast<size_t>(l + 1)];
      if (rl.is_zero()) continue;
      cacc = cacc + rl * r.C[static_cast<size_t>(l)];
      for (int m = 0; m < n_chart; ++m)
        racc[static_cast<size_t>(m)] =
            racc[static_cast<size_t>(m)] + rl * r.R[static_cast<size_t>(l)][static_cast<size_t>(m)];
    }
    r.C[static_cast<size_t>(st.inv_var)] = L0->nf(-(sinv_p * cacc));
    for (int m = 0; m < n_chart; ++m)
      r.R[static_cast<size_t>(st.inv_var)][static_cast<size_t>(m)] =
          L0->nf(-(sinv_p * racc[static_cast<size_t>(m)]));
  }

  if (side_i) {
    r.chi = reduce_hom(ov.rho_i);
    return r;
  }

  // transport to O through the transition iso: the value on an O-generator z
  // is dp_value*c_0 + sum_k c_k v_k where d^tot(bwd(z)) = sum_k c_k (gens).
  const auto& O0 = ov.O->mod_p();
  FqAlgebraHom fwd0 = reduce_hom(ov.fwd);
  Restriction out;
  const int nO = ov.O->nvars();
  out.C.assign(static_cast<size_t>(nO), O0->zero());
  out.R.assign(static_cast<size_t>(nO),
               std::vector<FqPoly>(static_cast<size_t>(n_chart), O0->zero()));
  for (int l = 0; l < nO; ++l) {
    W2Poly b = ov.bwd.apply(ov.O->var(l));
    DiffElem d = dtot_expand(ML, b);
    FqPoly cacc = d.coeffs[0].scaled_by_int(dp_value);
    std::vector<FqPoly> racc(static_cast<size_t>(n_chart), L0->zero());
    for (int k = 0; k < nL; ++k) {
      const auto& ck = d.coeffs[static_cast<size_t>(k + 1)];
      if (ck.is_zero()) continue;
      cacc = cacc + ck * r.C[static_cast<size_t>(k)];
      for (int m = 0; m < n_chart; ++m)
        racc[static_cast<size_t>(m)] =
            racc[static_cast<size_t>(m)] + ck * r.R[static_cast<size_t>(k)][static_cast<size_t>(m)];
    }
    out.C[static_cast<size_t>(l)] = fwd0.apply(L0->nf(cacc));
    for (int m = 0; m < n_chart; ++m)
      out.R[static_cast<size_t>(l)][static_cast<size_t>(m)] = fwd0.apply(L0->nf(racc[static_cast<size_t>(m)]));
  }
  out.chi = reduce_hom(ov.rho_j);
  return out;
}

std::vector<FqPoly> apply_restriction(const Restriction& r, const std::vector<FqPoly>& values) {
  const auto& O0 = r.chi.dst;
  std::vector<FqPoly> out;
  out.reserve(r.C.size());
  for (size_t l = 0; l < r.C.size(); ++l) {
    FqPoly acc = r.C[l];
    for (size_t m = 0; m < values.size(); ++m) {
      if (r.R[l][m].is_zero() || values[m].is_zero()) continue;
      acc = acc + r.R[l][m] * r.chi.apply(values[m]);
    }
    out.push_back(O0->nf(acc));
  }
  return out;
}

ChartSplittings compute_chart_splittings(const GluedScheme& S, long bound) {
  ChartSplittings out;
  out.bound = bound;
  for (const auto& c : S.charts()) {
    auto h = find_splitting(c.M, bound);
    if (!h)
      throw GluingError("chart '" + c.name +
                        "' has no splitting at the bound (chart-level obstruction)");
    out.h.push_back(std::move(*h));
  }
  return out;
}

CechClass kodaira_spencer(const GluedScheme& S, long window, const ChartSplittings* given) {
  if (window < 0) window = S.default_window();
  ChartSplittings local;
  const ChartSplittings* hs = given;
  if (!hs) {
    local = compute_chart_splittings(S);
    hs = &local;
  }
  CechClass out;
  out.degree = 1;
  out.sheaf = Sheaf::HomFOmega;
  out.window = window;
  for (const auto& ov : S.overlaps()) {
    auto Ri = build_restriction(S, ov, /*side_i=*/true, /*dp_value=*/1);
    auto Rj = build_restriction(S, ov, /*side_i=*/false, /*dp_value=*/1);
    auto vi = apply_restriction(Ri, strip_dp(hs->h[static_cast<size_t>(ov.i)]));
    auto vj = apply_restriction(Rj, strip_dp(hs->h[static_cast<size_t>(ov.j)]));
    std::vector<FqPoly> vals;
    const auto& O0 = ov.O->mod_p();
    for (size_t l = 0; l < vi.size(); ++l) vals.push_back(O0->nf(vj[l] - vi[l]));
    // s_ij is a functional on F*Omega^1 and must kill its relations
    for (const auto& row : fstar_relations(ov.M)) {
      FqPoly acc = O0->zero();
      for (size_t l = 0; l < vals.size(); ++l) acc = acc + row[l] * vals[l];
      if (!O0->is_zero(acc))
        throw LiftError("kodaira_spencer: cocycle does not kill the F*Omega relations");
    }
    out.pair_values[{ov.i, ov.j}] = std::move(vals);
  }
  return out;
}

namespace {

FrobLift extend_frob(const FPAlgebraPtr& src, const FrobLift& phi, const FPAlgebraPtr& loc) {
  const long p = loc->field()->p();
  std::vector<W2Poly> images;
  for (int i = 0; i < src->nvars(); ++i)
    images.push_back(
        loc->normal_form(embed_into(loc, phi.images[static_cast<size_t>(i)], src->nvars())));
  size_t first_new = src->history().size();
  for (size_t step = first_new; step < loc->history().size(); ++step) {
    const auto& st = loc->history()[step];
    W2Poly s_here = embed_into(loc, st.s, st.inv_var);
    std::vector<W2Poly> partial = images;
    for (int k = static_cast<int>(partial.size()); k < loc->nvars(); ++k)
      partial.push_back(loc->var(k));  // later vars do not occur in s
    W2Poly phis = loc->normal_form(
        s_here.substituted(partial, [](const W2Elem& c) { return frobenius_w2(c); }));
    W2Poly sp = loc->normal_form(s_here.pow(p));
    W2Poly diff = loc->normal_form(phis - sp);
    for (const auto& t : diff.terms())
      if (!t.c.is_p_divisible())
        throw LiftError("extend_frob: phi(s) - s^p is not divisible by p");
    FqPoly w = loc->mod_p()->nf(loc->div_p(diff));
    FqPoly sinv2p = loc->mod_p()->nf(loc->mod_p()->var(st.inv_var).pow(2 * p));
    W2Poly img = loc->normal_form(loc->var(st.inv_var).pow(p) -
                                  loc->times_p_lift(loc->mod_p()->nf(sinv2p * w)));
    images.push_back(std::move(img));
  }
  return make_frob_lift(loc, std::move(images));
}

}  // namespace

CechClass deligne_illusie(const GluedScheme& S, const std::vector<FrobLift>& lifts, long window) {
  if (window < 0) window = S.default_window();
  if (lifts.size() != S.charts().size())
    throw InputError("deligne_illusie: one Frobenius lift per chart required");
  CechClass out;
  out.degree = 1;
  out.sheaf = Sheaf::HomFOmega;
  out.window = window;
  for (const auto& ov : S.overlaps()) {
    FrobLift phi_i =
        extend_frob(S.charts()[static_cast<size_t>(ov.i)].A, lifts[static_cast<size_t>(ov.i)], ov.O);
    FrobLift phi_j = extend_frob(S.charts()[static_cast<size_t>(ov.j)].A,
                                 lifts[static_cast<size_t>(ov.j)], ov.O_other);
    std::vector<W2Poly> timgs;
    for (int v = 0; v < ov.O->nvars(); ++v)
      timgs.push_back(ov.fwd.apply(phi_j.apply(ov.bwd.apply(ov.O->var(v)))));
    FrobLift phi_jT = make_frob_lift(ov.O, std::move(timgs));
    std::vector<FqPoly> vals;
    const auto& O0 = ov.O->mod_p();
    for (int v = 0; v < ov.O->nvars(); ++v) {
      W2Poly diff = ov.O->normal_form(phi_i.images[static_cast<size_t>(v)] -
                                      phi_jT.images[static_cast<size_t>(v)]);
      for (const auto& t : diff.terms())
        if (!t.c.is_p_divisible())
          throw LiftError("deligne_illusie: difference of lifts is not divisible by p");
      vals.push_back(O0->nf(ov.O->div_p(diff)));
    }
    // the factoring through the differential: kills the F*Omega relations
    for (const auto& row : fstar_relations(ov.M)) {
      FqPoly acc = O0->zero();
      for (size_t l = 0; l < vals.size(); ++l) acc = acc + row[l] * vals[l];
      if (!O0->is_zero(acc))
        throw LiftError("deligne_illusie: c_ij does not factor through the differential");
    }
    out.pair_values[{ov.i, ov.j}] = std::move(vals);
  }
  return out;
}

CechClass cech_d0(const GluedScheme& S, const CechClass& t) {
  if (t.degree != 0) throw StructuralError("cech_d0: needs a degree-0 cochain");
  CechClass out;
  out.degree = 1;
  out.sheaf = t.sheaf;
  out.window = t.window;
  for (const auto& ov : S.overlaps()) {
    const auto& O0 = ov.O->mod_p();
    const auto& ti = t.chart_values.at(ov.i);
    const auto& tj = t.chart_values.at(ov.j);
    std::vector<FqPoly> vals;
    if (t.sheaf == Sheaf::O) {
      FqAlgebraHom ri = reduce_hom(ov.rho_i), rj = reduce_hom(ov.rho_j);
      vals.push_back(O0->nf(rj.apply(tj[0]) - ri.apply(ti[0])));
    } else if (t.sheaf == Sheaf::HomFOmega) {
      auto Ri = build_restriction(S, ov, true, /*dp_value=*/0);
      auto Rj = build_restriction(S, ov, false, /*dp_value=*/0);
      auto vi = apply_restriction(Ri, ti);
      auto vj = apply_restriction(Rj, tj);
      for (size_t l = 0; l < vi.size(); ++l) vals.push_back(O0->nf(vj[l] - vi[l]));
    } else {
      throw StructuralError("cech_d0: unsupported sheaf");
    }
    out.pair_values[{ov.i, ov.j}] = std::move(vals);
  }
  return out;
}

std::optional<CechClass> coboundary_witness(const GluedScheme& S, const CechClass& xi,
                                            long window) {
  if (xi.degree != 1) throw StructuralError("coboundary_witness: needs a 1-cochain");
  if (xi.sheaf != Sheaf::O && xi.sheaf != Sheaf::HomFOmega)
    throw StructuralError("coboundary_witness: unsupported sheaf");
  AffineSystem sys(S.field());

  struct ChartUnknowns {
    std::vector<Monomial> mons;
    std::vector<std::vector<int>> ids;
  };
  std::vector<ChartUnknowns> unk(S.charts().size());
  for (size_t ci = 0; ci < S.charts().size(); ++ci) {
    const auto& chart = S.charts()[ci];
    int slots = xi.sheaf == Sheaf::O ? 1 : chart.A->nvars();
    unk[ci].mons = chart.A->mod_p()->staircase(window);
    unk[ci].ids.resize(static_cast<size_t>(slots));
    for (int s = 0; s < slots; ++s)
      for (size_t k = 0; k < unk[ci].mons.size(); ++k)
        unk[ci].ids[static_cast<size_t>(s)].push_back(sys.add_unknown());
  }

  if (xi.sheaf == Sheaf::HomFOmega) {
    for (size_t ci = 0; ci < S.charts().size(); ++ci) {
      const auto& chart = S.charts()[ci];
      const auto& A0 = chart.A->mod_p();
      auto rows = fstar_relations(chart.M);
      for (size_t j = 0; j < rows.size(); ++j) {
        int scope = static_cast<int>(ci) * 100 + static_cast<int>(j);
        for (int s = 0; s < chart.A->nvars(); ++s) {
          if (rows[j][static_cast<size_t>(s)].is_zero()) continue;
          for (size_t k = 0; k < unk[ci].mons.size(); ++k) {
            FqPoly coeff = A0->nf(
                rows[j][static_cast<size_t>(s)].times_monomial(unk[ci].mons[k], S.field()->one()));
            if (!coeff.is_zero())
              sys.add_poly_term(scope, coeff, unk[ci].ids[static_cast<size_t>(s)][k]);
          }
        }
      }
    }
  }

  int ov_idx = 0;
  for (const auto& ov : S.overlaps()) {
    const auto& O0 = ov.O->mod_p();
    const auto& target = xi.pair_values.at({ov.i, ov.j});
    if (xi.sheaf == Sheaf::O) {
      int scope = 1000000 + ov_idx;
      FqAlgebraHom ri = reduce_hom(ov.rho_i), rj = reduce_hom(ov.rho_j);
      for (int side = 0; side < 2; ++side) {
        int ci = side ? ov.j : ov.i;
        const auto& rh = side ? rj : ri;
        int sign = side ? 1 : -1;
        for (size_t k = 0; k < unk[static_cast<size_t>(ci)].mons.size(); ++k) {
          FqPoly mon = FqPoly::monomial(S.charts()[static_cast<size_t>(ci)].A->nvars(),
                                        MonomialOrder::Grevlex,
                                        unk[static_cast<size_t>(ci)].mons[k], S.field()->one());
          FqPoly coeff = O0->nf(rh.apply(mon));
          if (coeff.is_zero()) continue;
          sys.add_poly_term(scope, sign > 0 ? coeff : -coeff,
                            unk[static_cast<size_t>(ci)].ids[0][k]);
        }
      }
      sys.add_poly_const(scope, -target[0]);
    } else {
      auto Ri = build_restriction(S, ov, true, 0);
      auto Rj = build_restriction(S, ov, false, 0);
      for (int l = 0; l < ov.O->nvars(); ++l) {
        int scope = 1000000 + ov_idx * 100 + l;
        for (int side = 0; side < 2; ++side) {
          const auto& R = side ? Rj : Ri;
          int ci = side ? ov.j : ov.i;
          int sign = side ? 1 : -1;
          for (int m = 0; m < S.charts()[static_cast<size_t>(ci)].A->nvars(); ++m) {
            if (R.R[static_cast<size_t>(l)][static_cast<size_t>(m)].is_zero()) continue;
            for (size_t k = 0; k < unk[static_cast<size_t>(ci)].mons.size(); ++k) {
              FqPoly mon = FqPoly::monomial(S.charts()[static_cast<size_t>(ci)].A->nvars(),
                                            MonomialOrder::Grevlex,
                                            unk[static_cast<size_t>(ci)].mons[k],
                                            S.field()->one());
              FqPoly coeff =
                  O0->nf(R.R[static_cast<size_t>(l)][static_cast<size_t>(m)] * R.chi.apply(mon));
              if (coeff.is_zero()) continue;
              sys.add_poly_term(scope, sign > 0 ? coeff : -coeff,
                                unk[static_cast<size_t>(ci)].ids[static_cast<size_t>(m)][k]);
            }
          }
        }
        sys.add_poly_const(scope, -target[static_cast<size_t>(l)]);
      }
    }
    ++ov_idx;
  }

  auto sol = sys.solve();
  if (!sol) return std::nullopt;
  auto vals = sys.decode(sol->particular);

  CechClass w;
  w.degree = 0;
  w.sheaf = xi.sheaf;
  w.window = window;
  for (size_t ci = 0; ci < S.charts().size(); ++ci) {
    const auto& chart = S.charts()[ci];
    std::vector<FqPoly> tv;
    for (const auto& slot : unk[ci].ids) {
      FqPoly f = chart.A->mod_p()->zero();
      for (size_t k = 0; k < unk[ci].mons.size(); ++k) {
        FqElem c = vals[static_cast<size_t>(slot[k])];
        if (!c.is_zero()) f.add_term(unk[ci].mons[k], c);
      }
      tv.push_back(chart.A->mod_p()->nf(f));
    }
    w.chart_values[static_cast<int>(ci)] = std::move(tv);
  }

  // exact verification of the witness
  CechClass d0w = cech_d0(S, w);
  for (const auto& ov : S.overlaps()) {
    const auto& got = d0w.pair_values.at({ov.i, ov.j});
    const auto& want = xi.pair_values.at({ov.i, ov.j});
    const auto& O0 = ov.O->mod_p();
    for (size_t l = 0; l < got.size(); ++l)
      if (!O0->nf(got[l] - want[l]).is_zero())
        throw StructuralError("coboundary_witness: internal verification failed");
  }
  return w;
}

CompareResult classes_equal_up_to_sign(const GluedScheme& S, const CechClass& k1,
                                       const CechClass& k2, long window) {
  if (k1.sheaf != k2.sheaf || k1.degree != 1 || k2.degree != 1)
    throw StructuralError("classes_equal_up_to_sign: need two 1-cochains in the same sheaf");
  if (k1.window != k2.window)
    throw StructuralError("classes_equal_up_to_sign: windows differ");
  if (window < 0) window = k1.window;
  CechClass target = cech_add(S, k1, k2);
  CompareResult res;
  auto zero_witness = [&] {
    CechClass w;
    w.degree = 0;
    w.sheaf = k1.sheaf;
    w.window = window;
    for (size_t ci = 0; ci < S.charts().size(); ++ci) {
      int slots = k1.sheaf == Sheaf::O ? 1 : S.charts()[ci].A->nvars();
      w.chart_values[static_cast<int>(ci)] =
          std::vector<FqPoly>(static_cast<size_t>(slots), S.charts()[ci].A->mod_p()->zero());
    }
    return w;
  };
  if (target.is_zero()) {
    res.equal = true;
    res.stabilized = true;
    res.window = window;
    res.witness = zero_witness();
    return res;
  }
  auto w1 = coboundary_witness(S, target, window);
  if (w1) {
    res.equal = true;
    res.stabilized = true;
    res.window = window;
    res.witness = std::move(*w1);
    return res;
  }
  auto w2 = coboundary_witness(S, target, window + 2);
  if (w2) {
    // the verdict flipped as the window grew: flag the window as too small
    res.equal = true;
    res.stabilized = false;
    res.window = window + 2;
    res.witness = std::move(*w2);
    return res;
  }
  res.equal = false;
  res.stabilized = true;
  res.window = window;
  return res;
}

bool is_global_fomega_section(const GluedScheme& S, const CechClass& omega) {
  if (omega.degree != 0 || omega.sheaf != Sheaf::FOmega)
    throw StructuralError("expected a degree-0 family of F*Omega sections");
  for (const auto& ov : S.overlaps()) {
    const auto& O0 = ov.O->mod_p();
    auto Pi = make_pullback(ov.rho_i, S.charts()[static_cast<size_t>(ov.i)].M, ov.M);
    auto Pj = make_pullback(ov.rho_j, S.charts()[static_cast<size_t>(ov.j)].M, ov.M);
    auto push_section = [&](const DtotPullback& P, int ci, const std::vector<FqPoly>& w) {
      std::vector<FqPoly> out(static_cast<size_t>(ov.O->nvars()), O0->zero());
      for (int m = 0; m < S.charts()[static_cast<size_t>(ci)].A->nvars(); ++m) {
        FqPoly wm = P.f0.apply(w[static_cast<size_t>(m)]);
        if (wm.is_zero()) continue;
        for (int l = 0; l < ov.O->nvars(); ++l)
          out[static_cast<size_t>(l)] =
              out[static_cast<size_t>(l)] +
              wm * P.gen_images[static_cast<size_t>(m + 1)].coeffs[static_cast<size_t>(l + 1)];
      }
      for (auto& c : out) c = O0->nf(c);
      return out;
    };
    auto vi = push_section(Pi, ov.i, omega.chart_values.at(ov.i));
    auto vj = push_section(Pj, ov.j, omega.chart_values.at(ov.j));
    std::vector<FqPoly> diff;
    for (size_t l = 0; l < vi.size(); ++l) diff.push_back(O0->nf(vi[l] - vj[l]));
    if (!fstar_in_span(ov.M, diff)) return false;
  }
  return true;
}

CechClass gauss_manin(const GluedScheme& S, const CechClass& omega, long window,
                      bool use_sigma_lifts, const ChartSplittings* given) {
  if (window < 0) window = S.default_window();
  if (!is_global_fomega_section(S, omega))
    throw InputError("gauss_manin: the given family is not a global section of F*Omega^1");
  ChartSplittings local;
  const ChartSplittings* hs = given;
  if (!hs) {
    local = compute_chart_splittings(S);
    hs = &local;
  }
  std::vector<DiffElem> lifts;
  for (size_t ci = 0; ci < S.charts().size(); ++ci) {
    const auto& chart = S.charts()[ci];
    const auto& A0 = chart.A->mod_p();
    const auto& w = omega.chart_values.at(static_cast<int>(ci));
    DiffElem lift = chart.M.zero_elem();
    for (int m = 0; m < chart.A->nvars(); ++m)
      lift.coeffs[static_cast<size_t>(m + 1)] = w[static_cast<size_t>(m)];
    if (use_sigma_lifts) {
      // sigma(F*dx) = d x - alpha(h(d x)): coordinate 0 carries -sum w_m u_m
      FqPoly acc = A0->zero();
      for (int m = 0; m < chart.A->nvars(); ++m)
        acc = acc + w[static_cast<size_t>(m)] * hs->h[ci].values[static_cast<size_t>(m + 1)];
      lift.coeffs[0] = A0->nf(-acc);
    }
    lifts.push_back(chart.M.normalize(lift));
  }
  CechClass out;
  out.degree = 1;
  out.sheaf = Sheaf::O;
  out.window = window;
  for (const auto& ov : S.overlaps()) {
    const auto& O0 = ov.O->mod_p();
    auto Pi = make_pullback(ov.rho_i, S.charts()[static_cast<size_t>(ov.i)].M, ov.M);
    auto Pj = make_pullback(ov.rho_j, S.charts()[static_cast<size_t>(ov.j)].M, ov.M);
    DiffElem g = ov.M.sub(Pi.push(lifts[static_cast<size_t>(ov.i)]),
                          Pj.push(lifts[static_cast<size_t>(ov.j)]));
    auto Ri = build_restriction(S, ov, true, 1);
    auto hv = apply_restriction(Ri, strip_dp(hs->h[static_cast<size_t>(ov.i)]));
    FqPoly w = g.coeffs[0];
    for (int l = 0; l < ov.O->nvars(); ++l)
      w = w + g.coeffs[static_cast<size_t>(l + 1)] * hv[static_cast<size_t>(l)];
    out.pair_values[{ov.i, ov.j}] = {O0->nf(w)};
  }
  return out;
}

CechClass cup_with(const GluedScheme& S, const CechClass& k, const CechClass& omega) {
  if (k.degree != 1 || k.sheaf != Sheaf::HomFOmega)
    throw StructuralError("cup_with: first argument must be Hom(F*Omega,O)-valued");
  if (!is_global_fomega_section(S, omega))
    throw InputError("cup_with: the given family is not a global section of F*Omega^1");
  CechClass out;
  out.degree = 1;
  out.sheaf = Sheaf::O;
  out.window = k.window;
  for (const auto& ov : S.overlaps()) {
    const auto& O0 = ov.O->mod_p();
    auto Pi = make_pullback(ov.rho_i, S.charts()[static_cast<size_t>(ov.i)].M, ov.M);
    const auto& w = omega.chart_values.at(ov.i);
    const auto& kv = k.pair_values.at({ov.i, ov.j});
    FqPoly acc = O0->zero();
    for (int m = 0; m < S.charts()[static_cast<size_t>(ov.i)].A->nvars(); ++m) {
      FqPoly wm = Pi.f0.apply(w[static_cast<size_t>(m)]);
      if (wm.is_zero()) continue;
      for (int l = 0; l < ov.O->nvars(); ++l)
        acc = acc +
              wm * Pi.gen_images[static_cast<size_t>(m + 1)].coeffs[static_cast<size_t>(l + 1)] *
                  kv[static_cast<size_t>(l)];
    }
    out.pair_values[{ov.i, ov.j}] = {O0->nf(acc)};
  }
  return out;
}

std::optional<GlobalLiftResult> global_frobenius_lift(const GluedScheme& S, long window) {
  bool defaulted = window < 0;
  if (defaulted) window = S.default_window();

  auto attempt = [&](long bound) -> std::optional<GlobalLiftResult> {
    AffineSystem sys(S.field());
    std::vector<std::vector<Monomial>> mons(S.charts().size());
    std::vector<std::vector<std::vector<int>>> ids(S.charts().size());
    for (size_t ci = 0; ci < S.charts().size(); ++ci) {
      const auto& chart = S.charts()[ci];
      mons[ci] = chart.A->mod_p()->staircase(bound);
      ids[ci].resize(static_cast<size_t>(chart.A->nvars()));
      for (int s = 0; s < chart.A->nvars(); ++s)
        for (size_t k = 0; k < mons[ci].size(); ++k)
          ids[ci][static_cast<size_t>(s)].push_back(sys.add_unknown());
    }
    for (size_t ci = 0; ci < S.charts().size(); ++ci) {
      const auto& chart = S.charts()[ci];
      const auto& A0 = chart.A->mod_p();
      for (size_t j = 0; j < chart.M.relations.size(); ++j) {
        int scope = static_cast<int>(ci) * 100 + static_cast<int>(j);
        const auto& r = chart.M.relations[j].coeffs;
        sys.add_poly_const(scope, r[0]);
        for (int s = 0; s < chart.A->nvars(); ++s) {
          if (r[static_cast<size_t>(s + 1)].is_zero()) continue;
          for (size_t k = 0; k < mons[ci].size(); ++k) {
            FqPoly coeff =
                A0->nf(r[static_cast<size_t>(s + 1)].times_monomial(mons[ci][k], S.field()->one()));
            if (!coeff.is_zero())
              sys.add_poly_term(scope, coeff, ids[ci][static_cast<size_t>(s)][k]);
          }
        }
      }
    }
    int ov_idx = 0;
    for (const auto& ov : S.overlaps()) {
      const auto& O0 = ov.O->mod_p();
      auto Ri = build_restriction(S, ov, true, 1);
      auto Rj = build_restriction(S, ov, false, 1);
      for (int l = 0; l < ov.O->nvars(); ++l) {
        int scope = 1000000 + ov_idx * 100 + l;
        sys.add_poly_const(scope,
                           O0->nf(Rj.C[static_cast<size_t>(l)] - Ri.C[static_cast<size_t>(l)]));
        for (int side = 0; side < 2; ++side) {
          const auto& R = side ? Rj : Ri;
          int ci = side ? ov.j : ov.i;
          int sign = side ? 1 : -1;
          for (int m = 0; m < S.charts()[static_cast<size_t>(ci)].A->nvars(); ++m) {
            if (R.R[static_cast<size_t>(l)][static_cast<size_t>(m)].is_zero()) continue;
            for (size_t k = 0; k < mons[static_cast<size_t>(ci)].size(); ++k) {
              FqPoly mon = FqPoly::monomial(S.charts()[static_cast<size_t>(ci)].A->nvars(),
                                            MonomialOrder::Grevlex,
                                            mons[static_cast<size_t>(ci)][k], S.field()->one());
              FqPoly coeff =
                  O0->nf(R.R[static_cast<size_t>(l)][static_cast<size_t>(m)] * R.chi.apply(mon));
              if (coeff.is_zero()) continue;
              sys.add_poly_term(scope, sign > 0 ? coeff : -coeff,
                                ids[static_cast<size_t>(ci)][static_cast<size_t>(m)][k]);
            }
          }
        }
      }
      ++ov_idx;
    }
    auto sol = sys.solve();
    if (!sol) return std::nullopt;
    auto vals = sys.decode(sol->particular);
    GlobalLiftResult res;
    res.window = bound;
    for (size_t ci = 0; ci < S.charts().size(); ++ci) {
      const auto& chart = S.charts()[ci];
      Splitting h;
      h.values.assign(static_cast<size_t>(chart.A->nvars() + 1), chart.A->mod_p()->zero());
      h.values[0] = chart.A->mod_p()->one();
      for (int s = 0; s < chart.A->nvars(); ++s) {
        FqPoly f = chart.A->mod_p()->zero();
        for (size_t k = 0; k < mons[ci].size(); ++k) {
          FqElem c = vals[static_cast<size_t>(ids[ci][static_cast<size_t>(s)][k])];
          if (!c.is_zero()) f.add_term(mons[ci][k], c);
        }
        h.values[static_cast<size_t>(s + 1)] = chart.A->mod_p()->nf(f);
      }
      for (const auto& r : chart.M.relations)
        if (!h.apply(chart.M, r).is_zero())
          throw StructuralError("global_frobenius_lift: solver returned an invalid splitting");
      res.lifts.push_back(splitting_to_frobenius(chart.M, h));
      res.splittings.push_back(std::move(h));
    }
    for (const auto& ov : S.overlaps()) {
      auto Ri = build_restriction(S, ov, true, 1);
      auto Rj = build_restriction(S, ov, false, 1);
      auto vi = apply_restriction(Ri, strip_dp(res.splittings[static_cast<size_t>(ov.i)]));
      auto vj = apply_restriction(Rj, strip_dp(res.splittings[static_cast<size_t>(ov.j)]));
      for (size_t l = 0; l < vi.size(); ++l)
        if (!ov.O->mod_p()->nf(vi[l] - vj[l]).is_zero())
          throw StructuralError("global_frobenius_lift: lifts disagree on an overlap");
    }
    return res;
  };

  auto res = attempt(window);
  if (!res && defaulted) res = attempt(2 * window);
  return res;
}

bool is_global_hom_section(const GluedScheme& S, const CechClass& t) {
  if (t.degree != 0 || t.sheaf != Sheaf::HomFOmega)
    throw StructuralError("is_global_hom_section: expected degree-0 Hom-valued data");
  for (size_t ci = 0; ci < S.charts().size(); ++ci) {
    const auto& chart = S.charts()[ci];
    const auto& vals = t.chart_values.at(static_cast<int>(ci));
    for (const auto& row : fstar_relations(chart.M)) {
      FqPoly acc = chart.A->mod_p()->zero();
      for (int m = 0; m < chart.A->nvars(); ++m)
        acc = acc + row[static_cast<size_t>(m)] * vals[static_cast<size_t>(m)];
      if (!chart.A->mod_p()->is_zero(acc)) return false;
    }
  }
  for (const auto& ov : S.overlaps()) {
    auto Ri = build_restriction(S, ov, true, 0);
    auto Rj = build_restriction(S, ov, false, 0);
    auto vi = apply_restriction(Ri, t.chart_values.at(ov.i));
    auto vj = apply_restriction(Rj, t.chart_values.at(ov.j));
    for (size_t l = 0; l < vi.size(); ++l)
      if (!ov.O->mod_p()->nf(vi[l] - vj[l]).is_zero()) return false;
  }
  return true;
}

bool one_cocycle_condition(const GluedScheme& S, const CechClass& xi) {
  if (xi.degree != 1) throw StructuralError("one_cocycle_condition: needs a 1-cochain");
  for (const auto& t3 : S.triples()) {
    const auto& T0 = t3.T->mod_p();
    FqAlgebraHom fij = reduce_hom(t3.from_ij);
    FqAlgebraHom fik = reduce_hom(t3.from_ik);
    FqAlgebraHom fjk = reduce_hom(t3.from_jk);
    const auto& x_ij = xi.pair_values.at({t3.i, t3.j});
    const auto& x_ik = xi.pair_values.at({t3.i, t3.k});
    const auto& x_jk = xi.pair_values.at({t3.j, t3.k});
    if (xi.sheaf == Sheaf::O) {
      FqPoly acc = T0->nf(fjk.apply(x_jk[0]) - fik.apply(x_ik[0]) + fij.apply(x_ij[0]));
      if (!acc.is_zero()) return false;
    } else {
      const auto& ov_jk = S.overlap_at(t3.j, t3.k);
      const auto& Ai = S.charts()[static_cast<size_t>(t3.i)].A;
      for (int v = 0; v < Ai->nvars(); ++v) {
        FqPoly vij = fij.apply(x_ij[static_cast<size_t>(v)]);
        FqPoly vik = fik.apply(x_ik[static_cast<size_t>(v)]);
        DiffElem d = dtot_expand(ov_jk.M, t3.pre_jk[static_cast<size_t>(v)]);
        FqPoly vjk = fjk.apply(eval_functional_beta(ov_jk.M, x_jk, d));
        if (!T0->nf(vjk - vik + vij).is_zero()) return false;
      }
    }
  }
  return true;
}

}  // namespace wittdiff

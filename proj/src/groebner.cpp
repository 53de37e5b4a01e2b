#include "wittdiff/groebner.hpp"

#include <functional>

namespace wittdiff {

DivisionResult poly_divide(const FqPoly& f, const std::vector<FqPoly>& divisors) {
  DivisionResult res;
  res.quotients.assign(divisors.size(), FqPoly(f.nvars(), f.order()));
  res.remainder = FqPoly(f.nvars(), f.order());
  FqPoly work = f;
  while (!work.is_zero()) {
    const auto& lt = work.leading();
    bool reduced = false;
    for (size_t i = 0; i < divisors.size(); ++i) {
      if (divisors[i].is_zero()) continue;
      const auto& dlt = divisors[i].leading();
      if (!dlt.m.divides(lt.m)) continue;
      FqElem c = lt.c / dlt.c;
      Monomial q = lt.m / dlt.m;
      res.quotients[i].add_term(q, c);
      work = work - divisors[i].times_monomial(q, c);
      reduced = true;
      break;
    }
    if (!reduced) {
      res.remainder.add_term(lt.m, lt.c);
      work = work - FqPoly::monomial(work.nvars(), work.order(), lt.m, lt.c);
    }
  }
  return res;
}

namespace {

Monomial mono_lcm(const Monomial& a, const Monomial& b) {
  Monomial r = a;
  for (size_t i = 0; i < r.e.size(); ++i) r.e[i] = std::max(r.e[i], b.e[i]);
  return r;
}

}  // namespace

GroebnerBasis buchberger(const std::vector<FqPoly>& gens, int nvars, MonomialOrder ord,
                         const FqPtr& field) {
  GroebnerBasis out;
  out.field = field;
  out.nvars = nvars;
  out.ord = ord;
  const size_t ngens = gens.size();
  auto zero_row = [&](size_t width) {
    return std::vector<FqPoly>(width, FqPoly(nvars, ord));
  };

  // working basis with cofactors over the input gens
  for (size_t j = 0; j < ngens; ++j) {
    if (gens[j].is_zero()) continue;
    FqElem lc = gens[j].leading().c;
    FqPoly monic = gens[j].scaled(lc.inverse());
    auto cof = zero_row(ngens);
    cof[j] = FqPoly::constant(nvars, ord, lc.inverse());
    out.g.push_back(monic);
    out.from_gens.push_back(std::move(cof));
  }

  // S-pair queue, FIFO; every pair is processed (zero reductions feed syzygies)
  std::vector<std::pair<size_t, size_t>> pairs;
  for (size_t i = 0; i < out.g.size(); ++i)
    for (size_t j = i + 1; j < out.g.size(); ++j) pairs.emplace_back(i, j);

  size_t head = 0;
  while (head < pairs.size()) {
    auto [i, j] = pairs[head++];
    const FqPoly &gi = out.g[i], &gj = out.g[j];
    Monomial l = mono_lcm(gi.leading().m, gj.leading().m);
    Monomial mi = l / gi.leading().m;
    Monomial mj = l / gj.leading().m;
    FqElem one = gi.leading().c.field()->one();
    FqPoly s = gi.times_monomial(mi, one) - gj.times_monomial(mj, one);
    auto div = poly_divide(s, out.g);

    // syzygy/cofactor bookkeeping over the current basis
    std::vector<FqPoly> comb(out.g.size(), FqPoly(nvars, ord));
    comb[i].add_term(mi, one);
    comb[j].add_term(mj, -one);
    for (size_t k = 0; k < out.g.size(); ++k) comb[k] = comb[k] - div.quotients[k];

    if (div.remainder.is_zero()) {
      out.syzygies_g.push_back(std::move(comb));
      continue;
    }
    FqElem lc = div.remainder.leading().c;
    FqPoly monic = div.remainder.scaled(lc.inverse());
    auto cof = zero_row(ngens);
    for (size_t k = 0; k < out.g.size(); ++k)
      for (size_t t = 0; t < ngens; ++t)
        cof[t] = cof[t] + comb[k].scaled(lc.inverse()) * out.from_gens[k][t];
    size_t newidx = out.g.size();
    out.g.push_back(monic);
    out.from_gens.push_back(std::move(cof));
    for (size_t k = 0; k < newidx; ++k) pairs.emplace_back(k, newidx);
  }

  // pad recorded syzygies to the final basis width
  for (auto& row : out.syzygies_g) row.resize(out.g.size(), FqPoly(nvars, ord));

  // express the original gens in the basis (remainders must vanish)
  out.gens_from_g.reserve(ngens);
  for (size_t j = 0; j < ngens; ++j) {
    auto div = poly_divide(gens[j], out.g);
    if (!div.remainder.is_zero())
      throw StructuralError("buchberger: generator does not reduce to zero against its own basis");
    out.gens_from_g.push_back(std::move(div.quotients));
  }
  return out;
}

bool GroebnerBasis::in_staircase(const Monomial& m) const {
  for (const auto& b : g)
    if (b.leading().m.divides(m)) return false;
  return true;
}

std::vector<Monomial> GroebnerBasis::staircase(long maxdeg) const {
  std::vector<Monomial> out;
  Monomial cur(nvars);
  std::function<void(int, long)> rec = [&](int var, long rem) {
    if (var == nvars) {
      if (in_staircase(cur)) out.push_back(cur);
      return;
    }
    for (long e = 0; e <= rem; ++e) {
      cur.e[static_cast<size_t>(var)] = static_cast<uint16_t>(e);
      rec(var + 1, rem - e);
    }
    cur.e[static_cast<size_t>(var)] = 0;
  };
  rec(0, maxdeg);
  std::sort(out.begin(), out.end(),
            [this](const Monomial& a, const Monomial& b) { return mono_cmp(a, b, ord) < 0; });
  return out;
}

std::vector<std::vector<FqPoly>> GroebnerBasis::gen_syzygies() const {
  const size_t ngens = gens_from_g.size();
  std::vector<std::vector<FqPoly>> rows;
  // sigma * from_gens for each basis syzygy sigma
  for (const auto& sigma : syzygies_g) {
    std::vector<FqPoly> row(ngens, FqPoly(nvars, ord));
    for (size_t i = 0; i < g.size(); ++i) {
      if (sigma[i].is_zero()) continue;
      for (size_t t = 0; t < ngens; ++t) row[t] = row[t] + sigma[i] * from_gens[i][t];
    }
    rows.push_back(std::move(row));
  }
  // rows of (Id - B*A), B = gens_from_g, A = from_gens
  for (size_t jrow = 0; jrow < ngens; ++jrow) {
    std::vector<FqPoly> row(ngens, FqPoly(nvars, ord));
    for (size_t i = 0; i < g.size(); ++i) {
      if (gens_from_g[jrow][i].is_zero()) continue;
      for (size_t t = 0; t < ngens; ++t)
        row[t] = row[t] - gens_from_g[jrow][i] * from_gens[i][t];
    }
    row[jrow] = row[jrow] + FqPoly::constant(nvars, ord, field->one());
    bool nonzero = false;
    for (size_t t = 0; t < ngens && !nonzero; ++t) nonzero = !row[t].is_zero();
    if (nonzero) rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace wittdiff

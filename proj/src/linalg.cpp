#include "wittdiff/linalg.hpp"

namespace wittdiff {

GFTable GFTable::make(const FqPtr& f) {
  GFTable t;
  t.field = f;
  t.q = f->q();
  if (t.q > 1024)
    throw StructuralError("GFTable: field too large for the dense solver (q > 1024)");
  size_t q = static_cast<size_t>(t.q);
  t.add.resize(q * q);
  t.mul.resize(q * q);
  t.neg.resize(q);
  t.inv.assign(q, 0);
  std::vector<FqElem> elems(q);
  for (size_t i = 0; i < q; ++i) elems[i] = f->element(static_cast<long>(i));
  for (size_t i = 0; i < q; ++i) {
    t.neg[i] = static_cast<uint16_t>(f->index(-elems[i]));
    if (i) t.inv[i] = static_cast<uint16_t>(f->index(elems[i].inverse()));
    for (size_t j = 0; j < q; ++j) {
      t.add[i * q + j] = static_cast<uint16_t>(f->index(elems[i] + elems[j]));
      t.mul[i * q + j] = static_cast<uint16_t>(f->index(elems[i] * elems[j]));
    }
  }
  return t;
}

std::optional<GFSolution> gf_solve(const GFTable& gf, std::vector<std::vector<uint16_t>> rows,
                                   std::vector<uint16_t> rhs, size_t ncols, bool want_kernel) {
  const size_t nr = rows.size();
  const size_t nc = ncols;
  std::vector<int> pivot_col;  // per eliminated row
  size_t rank = 0;
  for (size_t col = 0; col < nc && rank < nr; ++col) {
    size_t pr = nr;
    for (size_t r = rank; r < nr; ++r)
      if (rows[r][col] != 0) {
        pr = r;
        break;
      }
    if (pr == nr) continue;
    std::swap(rows[pr], rows[rank]);
    std::swap(rhs[pr], rhs[rank]);
    uint16_t iv = gf.inv[rows[rank][col]];
    if (rows[rank][col] != 1) {
      for (size_t c = col; c < nc; ++c) rows[rank][c] = gf.m(rows[rank][c], iv);
      rhs[rank] = gf.m(rhs[rank], iv);
    }
    for (size_t r = 0; r < nr; ++r) {
      if (r == rank) continue;
      uint16_t f = rows[r][col];
      if (f == 0) continue;
      uint16_t nf = gf.neg[f];
      for (size_t c = col; c < nc; ++c)
        if (rows[rank][c] != 0) rows[r][c] = gf.a(rows[r][c], gf.m(nf, rows[rank][c]));
      rhs[r] = gf.a(rhs[r], gf.m(nf, rhs[rank]));
    }
    pivot_col.push_back(static_cast<int>(col));
    ++rank;
  }
  for (size_t r = rank; r < nr; ++r)
    if (rhs[r] != 0) return std::nullopt;

  GFSolution sol;
  sol.particular.assign(nc, 0);
  for (size_t r = 0; r < rank; ++r) sol.particular[static_cast<size_t>(pivot_col[r])] = rhs[r];

  if (want_kernel) {
    std::vector<char> is_pivot(nc, 0);
    for (size_t r = 0; r < rank; ++r) is_pivot[static_cast<size_t>(pivot_col[r])] = 1;
    for (size_t free_col = 0; free_col < nc; ++free_col) {
      if (is_pivot[free_col]) continue;
      std::vector<uint16_t> v(nc, 0);
      v[free_col] = 1;
      for (size_t r = 0; r < rank; ++r)
        v[static_cast<size_t>(pivot_col[r])] = gf.neg[rows[r][free_col]];
      sol.kernel.push_back(std::move(v));
    }
  }
  return sol;
}

int AffineSystem::row_of(int scope, const Monomial& m) {
  auto key = std::make_pair(scope, m.e);
  auto it = rowids_.find(key);
  if (it != rowids_.end()) return it->second;
  int id = static_cast<int>(entries_.size());
  rowids_.emplace(std::move(key), id);
  entries_.emplace_back();
  consts_.push_back(0);
  return id;
}

void AffineSystem::add_poly_term(int scope, const FqPoly& coeffpoly, int unknown) {
  for (const auto& t : coeffpoly.terms()) {
    int r = row_of(scope, t.m);
    entries_[static_cast<size_t>(r)].emplace_back(unknown, static_cast<uint16_t>(gf_.field->index(t.c)));
  }
}

void AffineSystem::add_poly_const(int scope, const FqPoly& c) {
  for (const auto& t : c.terms()) {
    int r = row_of(scope, t.m);
    consts_[static_cast<size_t>(r)] =
        gf_.a(consts_[static_cast<size_t>(r)], static_cast<uint16_t>(gf_.field->index(t.c)));
  }
}

std::optional<GFSolution> AffineSystem::solve(bool want_kernel) const {
  const size_t nr = entries_.size();
  std::vector<std::vector<uint16_t>> rows(nr, std::vector<uint16_t>(static_cast<size_t>(ncols_), 0));
  std::vector<uint16_t> rhs(nr, 0);
  for (size_t r = 0; r < nr; ++r) {
    for (const auto& [col, cidx] : entries_[r])
      rows[r][static_cast<size_t>(col)] = gf_.a(rows[r][static_cast<size_t>(col)], cidx);
    rhs[r] = gf_.neg[consts_[r]];  // sum(terms) = -const
  }
  return gf_solve(gf_, std::move(rows), std::move(rhs), static_cast<size_t>(ncols_), want_kernel);
}

std::vector<FqElem> AffineSystem::decode(const std::vector<uint16_t>& v) const {
  std::vector<FqElem> out;
  out.reserve(v.size());
  for (auto idx : v) out.push_back(gf_.field->element(idx));
  return out;
}

}  // namespace wittdiff

#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "wittdiff/groebner.hpp"

namespace wittdiff {

// Index-coded arithmetic tables for a small F_q (q <= 1024), used by the
// dense solvers. Element <-> index via Fq::element / Fq::index.
struct GFTable {
  FqPtr field;
  long q = 0;
  std::vector<uint16_t> add, mul;  // q*q, row-major
  std::vector<uint16_t> neg, inv;  // inv[0] = 0 placeholder

  static GFTable make(const FqPtr& f);
  uint16_t a(uint16_t x, uint16_t y) const { return add[static_cast<size_t>(x) * static_cast<size_t>(q) + y]; }
  uint16_t m(uint16_t x, uint16_t y) const { return mul[static_cast<size_t>(x) * static_cast<size_t>(q) + y]; }
};

struct GFSolution {
  std::vector<uint16_t> particular;           // one solution
  std::vector<std::vector<uint16_t>> kernel;  // basis of the homogeneous solutions
};

// Solves A x = b over F_q (ncols columns); nullopt when inconsistent.
std::optional<GFSolution> gf_solve(const GFTable& gf, std::vector<std::vector<uint16_t>> rows,
                                   std::vector<uint16_t> rhs, size_t ncols, bool want_kernel);

// Incremental builder for affine-linear systems whose equations are
// "this F_q[x]-linear combination of unknown scalars plus a constant
// polynomial is identically zero", one scalar equation per (scope, monomial).
class AffineSystem {
 public:
  explicit AffineSystem(const FqPtr& field) : gf_(GFTable::make(field)) {}

  int add_unknown() { return ncols_++; }
  int num_unknowns() const { return ncols_; }

  // contribution coeffpoly * unknown to the equations of the given scope
  void add_poly_term(int scope, const FqPoly& coeffpoly, int unknown);
  // constant contribution
  void add_poly_const(int scope, const FqPoly& c);

  std::optional<GFSolution> solve(bool want_kernel = false) const;

  std::vector<FqElem> decode(const std::vector<uint16_t>& v) const;

 private:
  int row_of(int scope, const Monomial& m);

  GFTable gf_;
  int ncols_ = 0;
  std::map<std::pair<int, std::vector<uint16_t>>, int> rowids_;
  std::vector<std::vector<std::pair<int, uint16_t>>> entries_;  // per row: (col, coeff-index)
  std::vector<uint16_t> consts_;                                // per row: accumulated constant
};

}  // namespace wittdiff

#pragma once

#include <vector>

#include "wittdiff/fq.hpp"
#include "wittdiff/poly.hpp"

namespace wittdiff {

using FqPoly = MPoly<FqElem>;

struct DivisionResult {
  std::vector<FqPoly> quotients;
  FqPoly remainder;
};

// Multivariate division: f = sum quotients[i]*divisors[i] + remainder, with no
// remainder monomial divisible by any divisor leading monomial. Zero divisors
// are skipped. Deterministic (first matching divisor wins).
DivisionResult poly_divide(const FqPoly& f, const std::vector<FqPoly>& divisors);

// Buchberger output over F_q with full transformation data:
//   g[i]            monic Groebner basis elements
//   from_gens[i]    g[i] = sum_j from_gens[i][j] * gens[j]
//   gens_from_g[j]  gens[j] = sum_i gens_from_g[j][i] * g[i]
//   syzygies_g      rows s with sum_i s[i] * g[i] = 0, generating Syz(g)
// No interreduction is performed; the basis is deterministic for fixed input.
struct GroebnerBasis {
  FqPtr field;
  int nvars = 0;
  MonomialOrder ord = MonomialOrder::Grevlex;
  std::vector<FqPoly> g;
  std::vector<std::vector<FqPoly>> from_gens;
  std::vector<std::vector<FqPoly>> gens_from_g;
  std::vector<std::vector<FqPoly>> syzygies_g;

  FqPoly nf(const FqPoly& f) const { return poly_divide(f, g).remainder; }
  bool in_staircase(const Monomial& m) const;
  // All staircase monomials of total degree <= maxdeg, ascending in the order.
  std::vector<Monomial> staircase(long maxdeg) const;
  // Generators of the syzygy module of the original input gens:
  // rows tau with sum_j tau[j] * gens[j] = 0.
  std::vector<std::vector<FqPoly>> gen_syzygies() const;
};

GroebnerBasis buchberger(const std::vector<FqPoly>& gens, int nvars, MonomialOrder ord,
                         const FqPtr& field);

}  // namespace wittdiff

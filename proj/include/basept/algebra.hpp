// Exact polynomial operations over the coefficient tower: gcds, square-free
// factorization, reduced parts, root adjunction and intersection numbers.
#pragma once

#include "basept/bipoly.hpp"

#include <optional>
#include <vector>

namespace basept {

// Gcd of a nonempty family, lex-monic.  Throws ZeroInput if any input is 0.
BiPoly gcd_many(const std::vector<BiPoly>& polys);

// h = prod factor^mult up to a constant; factors pairwise coprime, each
// square-free and lex-monic, one entry per occurring multiplicity.
std::vector<std::pair<BiPoly, int>> squarefree_factorization(const BiPoly& h);

// f / gcd(f, df/dx, df/dy), lex-monic.
BiPoly reduced_part(const BiPoly& f);

// Adjoins a root of the square-free polynomial p to the tower.  For a linear
// p the tower is returned unchanged with the explicit root; otherwise a new
// level is created.  Throws NotSquareFree when gcd(p, p') is non-constant.
std::pair<TowerPtr, AlgNum> adjoin_root(TowerPtr tower, const UniPoly& p);

// [f.g]_O: order at x=0 of the y-resultant after shearing both inputs into
// y-general position.  nullopt encodes infinity (shared factor).
std::optional<long> intersection_multiplicity(const BiPoly& f, const BiPoly& g);

// Yun square-free factorization of a univariate polynomial (multiplicity,
// factor monic).  Helper shared by the bivariate routine and the expansion.
std::vector<std::pair<UniPoly, int>> squarefree_factorization_uni(const UniPoly& p);

} // namespace basept

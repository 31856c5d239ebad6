// Newton-Puiseux expansion of a reduced polynomial and the modified variant
// that transports the square-free factors of every generator through the
// expansion, recovering each branch's algebraic multiplicity per generator.
//
// Branches are expanded with rational (Bezout-twisted) substitutions
//   x_i = xi^v x_{i+1}^q,   y_i = xi^u x_{i+1}^p (1 + y_{i+1}),  u q - v p = 1,
// so that one expansion state covers a whole conjugacy package; coefficients
// live in extension towers split on demand.  A finished branch is the
// parametrization x = lambda t^nu, y = sum of terms c_k t^k.
#pragma once

#include "basept/algebra.hpp"

#include <vector>

namespace basept {

struct NewtonPolygonSide {
    long dv = 0, dh = 0;              // primitive slope data (height, width)
    std::pair<long, long> from, to;   // lattice endpoints, bottom-right to top-left
    UniPoly side_poly;                // phi(z) built from the side coefficients
};

// Sides of the lower-left Newton polygon boundary, ordered by increasing
// slope magnitude dv/dh.  Empty iff f is a monomial times a unit.
std::vector<NewtonPolygonSide> newton_polygon(const BiPoly& f);

struct PuiseuxBranch {
    long nu = 1;                                 // ramification index
    std::vector<std::pair<Rat, AlgNum>> terms;   // (global exponent k/nu, coefficient of t^k)
    Rat truncation = Rat(0);                     // series complete below this exponent
    bool y_axis = false;                         // the branch x = 0
    // Parametrization context: x = lambda * t^nu.  For lambda == 1 the terms
    // are literal Puiseux coefficients.
    TowerPtr tower;
    AlgNum lambda = AlgNum(1);
};

struct BranchRecord {
    PuiseuxBranch branch;
    std::vector<long> mults;  // size r+1; mults[r] = multiplicity in the fixed part
    int leaf = -1;            // internal identity: expansion leaf
    int embedding = 0;        // internal identity: class within the leaf
    bool exact = false;       // terms are the complete series (polynomial root)
};

struct TrackedFactor {
    int owner = 0;         // generator index; r denotes the fixed part
    int multiplicity = 1;  // j: exponent of this square-free factor in its owner
    BiPoly poly;           // in current variables, never divisible by x
    long beta = 0;         // accumulated stripped powers of x
};

// One substitution step of the expansion.
struct NPStep {
    AlgNum xi;      // root package of the side polynomial
    long u = 1, v = 0, p = 1, q = 1;  // u*q - v*p == 1
};

// Transports tracked factors through one substitution: transform, strip the
// maximal power of x, drop units.
std::vector<TrackedFactor> advance_tracked_factors(const std::vector<TrackedFactor>& S,
                                                   const NPStep& step);

struct ExpandResult {
    std::vector<BranchRecord> records;
    // Pairwise coincidence in global x-exponents; coin[i][j] for i != j.  For
    // pairs involving the y-axis record the value is measured in the swapped
    // frame (order in y of the difference of the inverted series).
    std::vector<std::vector<Rat>> coin;
};

// The modified Newton-Puiseux algorithm on f = fixed_part * prod(generators).
ExpandResult expand_product(const std::vector<BiPoly>& generators, const BiPoly& fixed_part);

// Maximal exponent to which some pair of conjugates of the two branches
// agree.  Branches must come from the same expansion (or be hand-built over
// nested towers).  Throws NotSeparated if truncations cannot decide.
Rat coincidence(const PuiseuxBranch& b1, const PuiseuxBranch& b2);

} // namespace basept

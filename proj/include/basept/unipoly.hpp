// Dense univariate polynomials over tower elements.
#pragma once

#include "basept/tower.hpp"

#include <string>
#include <vector>

namespace basept {

struct UniPoly {
    std::string var = "t";
    std::vector<AlgNum> c;  // c[i] = coefficient of var^i, no trailing structural zeros

    UniPoly() = default;
    explicit UniPoly(std::string v) : var(std::move(v)) {}
    UniPoly(std::string v, std::vector<AlgNum> coeffs);

    bool is_zero() const { return c.empty(); }
    int degree() const { return static_cast<int>(c.size()) - 1; }  // -1 for zero
    const AlgNum& lc() const { return c.back(); }
    void trim();
    std::string str() const;
};

UniPoly operator+(const UniPoly& a, const UniPoly& b);
UniPoly operator-(const UniPoly& a, const UniPoly& b);
UniPoly operator-(const UniPoly& a);
UniPoly operator*(const UniPoly& a, const UniPoly& b);
UniPoly operator*(const AlgNum& s, const UniPoly& a);

UniPoly derivative(const UniPoly& a);
AlgNum eval(const UniPoly& a, const AlgNum& x);

// Quotient/remainder; the divisor's leading coefficient is inverted (this may
// raise SplitRequest in a product ring).
std::pair<UniPoly, UniPoly> divrem(const UniPoly& a, const UniPoly& b);
// Exact division; throws InternalError if the remainder is nonzero.
UniPoly div_exact(const UniPoly& a, const UniPoly& b);

UniPoly make_monic(const UniPoly& a);
// Monic gcd by the Euclidean algorithm over the tower field.
UniPoly gcd_monic(UniPoly a, UniPoly b);
// a / gcd(a, a'): square-free part, monic.
UniPoly squarefree_part(const UniPoly& a);

} // namespace basept

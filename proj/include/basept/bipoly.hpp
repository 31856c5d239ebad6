// Sparse bivariate polynomials over tower elements, with the gcd, resultant
// and square-free machinery the expansion needs.
#pragma once

#include "basept/unipoly.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace basept {

struct BiPoly {
    // (a, b) -> coefficient of x^a y^b; no structural-zero entries.
    std::map<std::pair<long, long>, AlgNum> m;

    BiPoly() = default;
    static BiPoly constant(AlgNum c);
    static BiPoly monomial(long a, long b, AlgNum c = AlgNum(1));

    bool is_zero() const { return m.empty(); }
    bool is_constant() const;
    long deg_x() const;
    long deg_y() const;
    long total_degree() const;
    // Order of vanishing at the origin (min a+b); -1 for the zero polynomial.
    long ord_origin() const;
    long ord_x() const;  // largest k with x^k | f
    long ord_y() const;

    const AlgNum& coeff(long a, long b) const;
    void add_term(long a, long b, const AlgNum& c);

    bool operator==(const BiPoly& o) const;
    std::string str() const;  // canonical text form, lex-descending with x > y
};

BiPoly operator+(const BiPoly& a, const BiPoly& b);
BiPoly operator-(const BiPoly& a, const BiPoly& b);
BiPoly operator-(const BiPoly& a);
BiPoly operator*(const BiPoly& a, const BiPoly& b);
BiPoly operator*(const AlgNum& s, const BiPoly& a);
BiPoly pow(const BiPoly& a, long e);

BiPoly derivative_x(const BiPoly& a);
BiPoly derivative_y(const BiPoly& a);

// f with x := X, y := Y substituted.
BiPoly subst(const BiPoly& f, const BiPoly& X, const BiPoly& Y);

UniPoly eval_x0(const BiPoly& f, const std::string& var = "y");  // f(0, y)
UniPoly eval_y0(const BiPoly& f, const std::string& var = "x");  // f(x, 0)
AlgNum eval_origin(const BiPoly& f);

BiPoly shift_div_x(const BiPoly& f, long k);  // f / x^k (exact)
BiPoly shift_div_y(const BiPoly& f, long k);
BiPoly mul_x(const BiPoly& f, long k);

// Homogeneous part of lowest total degree.
BiPoly lowest_form(const BiPoly& f);

// Dense-in-y view with K[x] coefficients.
std::vector<UniPoly> to_ydense(const BiPoly& f);
BiPoly from_ydense(const std::vector<UniPoly>& c);

// Exact division (throws InternalError if not exact).
BiPoly div_exact(const BiPoly& a, const BiPoly& b);

// Gcd by primitive PRS in y over K[x]; result normalized so the coefficient
// of the lex-leading monomial (x before y) is 1.
BiPoly gcd(const BiPoly& a, const BiPoly& b);

// Scale so the lex-leading coefficient is 1.
BiPoly lex_monic(const BiPoly& a);

// Resultant with respect to y, an element of K[x] (exact, via the
// subresultant PRS).
UniPoly resultant_y(const BiPoly& a, const BiPoly& b);

} // namespace basept

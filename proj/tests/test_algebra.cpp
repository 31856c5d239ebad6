#include <doctest.h>

#include "basept/algebra.hpp"
#include "basept/cli.hpp"

#include <random>

using namespace basept;

namespace {

BiPoly P(const std::string& s) {
    IdealInput in = parse_ideal(s);
    return in.generators.at(0);
}

std::mt19937 rng(20260809);

BiPoly random_poly(int deg, int terms, bool at_origin = true) {
    while (true) {
        BiPoly f;
        for (int t = 0; t < terms; ++t) {
            long a = rng() % (deg + 1), b = rng() % (deg + 1 - a);
            long c = static_cast<long>(rng() % 9) - 4;
            f.add_term(a, b, AlgNum(c));
        }
        if (at_origin && !f.coeff(0, 0).is_zero()) f.add_term(0, 0, -f.coeff(0, 0));
        if (!f.is_zero()) return f;
    }
}

// Brute-force resultant oracle: evaluate the Sylvester matrix at sample points
// and interpolate.
Rat det_rat(std::vector<std::vector<Rat>> m) {
    int n = static_cast<int>(m.size());
    Rat det(1);
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int rrow = col; rrow < n; ++rrow)
            if (m[rrow][col] != 0) { piv = rrow; break; }
        if (piv < 0) return Rat(0);
        if (piv != col) {
            std::swap(m[piv], m[col]);
            det = -det;
        }
        det *= m[col][col];
        Rat inv = Rat(1) / m[col][col];
        for (int rrow = col + 1; rrow < n; ++rrow) {
            if (m[rrow][col] == 0) continue;
            Rat fac = m[rrow][col] * inv;
            for (int cc = col; cc < n; ++cc) m[rrow][cc] -= fac * m[col][cc];
        }
    }
    return det;
}

Rat eval_unipoly_rat(const UniPoly& p, const Rat& x) {
    Rat acc(0);
    for (size_t i = p.c.size(); i-- > 0;) acc = acc * x + p.c[i].rat();
    return acc;
}

UniPoly sylvester_resultant(const BiPoly& f, const BiPoly& g) {
    auto F = to_ydense(f), G = to_ydense(g);
    int df = static_cast<int>(F.size()) - 1, dg = static_cast<int>(G.size()) - 1;
    int n = df + dg;
    int degbound = f.deg_x() * dg + g.deg_x() * df + 1;
    std::vector<Rat> xs, ys;
    for (long s = 1; static_cast<int>(xs.size()) <= degbound; ++s) {
        Rat x(s, 1);
        std::vector<std::vector<Rat>> m(n, std::vector<Rat>(n, Rat(0)));
        for (int i = 0; i < dg; ++i)
            for (int j = 0; j <= df; ++j) m[i][i + j] = eval_unipoly_rat(F[df - j], x);
        for (int i = 0; i < df; ++i)
            for (int j = 0; j <= dg; ++j) m[dg + i][i + j] = eval_unipoly_rat(G[dg - j], x);
        xs.push_back(x);
        ys.push_back(det_rat(m));
    }
    // Lagrange interpolation
    int npts = static_cast<int>(xs.size());
    std::vector<Rat> coeffs(npts, Rat(0));
    for (int i = 0; i < npts; ++i) {
        std::vector<Rat> basis = {Rat(1)};
        Rat denom(1);
        for (int j = 0; j < npts; ++j) {
            if (j == i) continue;
            denom *= xs[i] - xs[j];
            std::vector<Rat> nb(basis.size() + 1, Rat(0));
            for (size_t k = 0; k < basis.size(); ++k) {
                nb[k] -= basis[k] * xs[j];
                nb[k + 1] += basis[k];
            }
            basis = std::move(nb);
        }
        Rat w = ys[i] / denom;
        for (size_t k = 0; k < basis.size(); ++k) coeffs[k] += w * basis[k];
    }
    UniPoly r("x");
    for (auto& c : coeffs) r.c.push_back(AlgNum(c));
    r.trim();
    return r;
}

} // namespace

TEST_CASE("gcd_many on monomials and explicit factorizations") {
    CHECK(gcd_many({P("x*y"), P("x^2")}) == P("x"));
    CHECK(gcd_many({P("x^2-y^2"), P("x-y")}).str() == "x - y");
    CHECK(gcd_many({P("(y^5+x^7)^2 + y^10*x"), P("x^8*(y^3+x^5)"), P("y^8*(y^2-x^3)")}).str() == "1");
}

TEST_CASE("gcd_many rejects zero input") {
    CHECK_THROWS_AS(gcd_many({P("x"), BiPoly()}), ZeroInput);
}

TEST_CASE("gcd divides every input and quotients are coprime") {
    for (int trial = 0; trial < 20; ++trial) {
        BiPoly a = random_poly(4, 4), b = random_poly(4, 4), c = random_poly(2, 3);
        BiPoly f = a * c, g = b * c;
        if (f.is_zero() || g.is_zero()) continue;
        BiPoly d = gcd_many({f, g});
        BiPoly qf = div_exact(f, d), qg = div_exact(g, d);
        CHECK(gcd_many({qf, qg}).is_constant());
    }
}

TEST_CASE("squarefree_factorization examples") {
    auto fac = squarefree_factorization(P("y*x^2*(y-x)^3"));
    REQUIRE(fac.size() == 3);
    CHECK(fac[0].second == 1);
    CHECK(fac[0].first == P("y"));
    CHECK(fac[1].second == 2);
    CHECK(fac[1].first == P("x"));
    CHECK(fac[2].second == 3);
    CHECK(fac[2].first.str() == "x - y");  // lex-monic normalization of (y-x)

    auto sq = squarefree_factorization(P("(y^2-x^3)^2"));
    REQUIRE(sq.size() == 1);
    CHECK(sq[0].second == 2);
    CHECK(sq[0].first.str() == "x^3 - y^2");
}

TEST_CASE("squarefree_factorization of a reduced polynomial is itself") {
    BiPoly h = P("(y^5+x^7)^2 + y^10*x");
    // independent oracle: gcd(h, dh/dx, dh/dy) must be constant
    BiPoly g = gcd(gcd(h, derivative_x(h)), derivative_y(h));
    CHECK(g.is_constant());
    auto fac = squarefree_factorization(h);
    REQUIRE(fac.size() == 1);
    CHECK(fac[0].second == 1);
    CHECK(fac[0].first == lex_monic(h));
}

TEST_CASE("squarefree reassembly identity") {
    for (int trial = 0; trial < 12; ++trial) {
        BiPoly a = random_poly(3, 3, false), b = random_poly(2, 3, false);
        if (a.is_constant() || b.is_constant()) continue;
        BiPoly h = a * b * b;
        if (h.is_constant() || h.is_zero()) continue;
        auto fac = squarefree_factorization(h);
        BiPoly prod = BiPoly::constant(AlgNum(1));
        for (auto& [f, m] : fac) prod = prod * pow(f, m);
        // equal up to a constant
        CHECK(lex_monic(prod) == lex_monic(h));
        for (size_t i = 0; i < fac.size(); ++i)
            for (size_t j = i + 1; j < fac.size(); ++j)
                CHECK(gcd(fac[i].first, fac[j].first).is_constant());
    }
}

TEST_CASE("reduced_part examples") {
    CHECK(reduced_part(P("x^2*y^3")) == P("x*y"));
    CHECK(reduced_part(P("(y^2-x^3)^2*(y-x)")) == lex_monic(P("(y^2-x^3)*(y-x)")));
}

TEST_CASE("reduced_part has constant gcd with its partials") {
    for (int trial = 0; trial < 10; ++trial) {
        BiPoly a = random_poly(3, 3, false);
        if (a.is_constant() || a.is_zero()) continue;
        BiPoly h = a * a * random_poly(2, 3, false);
        if (h.is_constant() || h.is_zero()) continue;
        BiPoly r = reduced_part(h);
        CHECK(gcd(gcd(r, derivative_x(r)), derivative_y(r)).is_constant());
    }
}

TEST_CASE("resultant agrees with the Sylvester oracle") {
    for (int trial = 0; trial < 12; ++trial) {
        BiPoly f = random_poly(3, 4, false), g = random_poly(3, 4, false);
        if (f.deg_y() < 1 || g.deg_y() < 1) continue;
        UniPoly mine = resultant_y(f, g);
        UniPoly oracle = sylvester_resultant(f, g);
        CHECK((mine - oracle).is_zero());
    }
}

TEST_CASE("intersection multiplicity examples") {
    // resultant oracle: res_y(y, y^2 - x^3) = -x^3, order 3
    auto r = intersection_multiplicity(P("y"), P("y^2-x^3"));
    REQUIRE(r.has_value());
    CHECK(*r == 3);
    auto r2 = intersection_multiplicity(P("x"), P("y"));
    REQUIRE(r2.has_value());
    CHECK(*r2 == 1);
    auto r3 = intersection_multiplicity(P("y-x^2"), P("y+x^2"));
    REQUIRE(r3.has_value());
    CHECK(*r3 == 2);
    // shared factor: infinity
    CHECK(!intersection_multiplicity(P("x*y"), P("x*(y-x)")).has_value());
}

TEST_CASE("intersection multiplicity is symmetric and additive") {
    BiPoly f = P("y^2-x^3"), g1 = P("y-x"), g2 = P("y-x^2-x");
    auto a = intersection_multiplicity(f, g1);
    auto b = intersection_multiplicity(f, g2);
    auto ab = intersection_multiplicity(f, g1 * g2);
    REQUIRE((a && b && ab));
    CHECK(*ab == *a + *b);
    auto sym = intersection_multiplicity(g1, f);
    CHECK(*sym == *a);
}

TEST_CASE("reduced part of the full product matches the factorwise route") {
    BiPoly a1 = P("(y^5+x^7)^2 + y^10*x");
    BiPoly a2 = P("x^8*(y^3+x^5)");
    BiPoly a3 = P("y^8*(y^2-x^3)");
    BiPoly red = reduced_part(a1 * a2 * a3);
    BiPoly expect = lex_monic(a1 * P("x") * P("y^3+x^5") * P("y") * P("y^2-x^3"));
    CHECK(red == expect);
}

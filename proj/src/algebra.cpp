#include "basept/algebra.hpp"

#include <algorithm>

namespace basept {

BiPoly gcd_many(const std::vector<BiPoly>& polys) {
    if (polys.empty()) throw EmptyIdeal();
    for (auto& p : polys)
        if (p.is_zero()) throw ZeroInput();
    BiPoly g = polys[0];
    for (size_t i = 1; i < polys.size() && !g.is_constant(); ++i) g = gcd(g, polys[i]);
    return lex_monic(g);
}

std::vector<std::pair<UniPoly, int>> squarefree_factorization_uni(const UniPoly& p) {
    // Yun's algorithm, characteristic 0.
    std::vector<std::pair<UniPoly, int>> out;
    if (p.degree() <= 0) return out;
    UniPoly dp = derivative(p);
    UniPoly g = gcd_monic(p, dp);
    if (g.degree() == 0) {
        out.emplace_back(make_monic(p), 1);
        return out;
    }
    UniPoly c = make_monic(div_exact(p, g));
    UniPoly d = div_exact(inverse(p.lc()) * dp, g) - derivative(c);
    int i = 1;
    while (c.degree() > 0) {
        UniPoly a = gcd_monic(c, d);
        if (a.is_zero()) a = UniPoly(p.var, {AlgNum(1)});
        if (a.degree() > 0) out.emplace_back(a, i);
        c = div_exact(c, a);
        d = div_exact(d, a) - derivative(c);
        ++i;
    }
    return out;
}

namespace {

// Yun with respect to y on a y-primitive bivariate polynomial.
std::vector<std::pair<BiPoly, int>> yun_y(const BiPoly& p0) {
    std::vector<std::pair<BiPoly, int>> out;
    BiPoly p = lex_monic(p0);
    BiPoly dp = derivative_y(p);
    if (dp.is_zero()) throw InternalError("yun_y: input has no y dependence");
    BiPoly g = gcd(p, dp);
    if (g.is_constant()) {
        out.emplace_back(p, 1);
        return out;
    }
    BiPoly c = div_exact(p, g);
    BiPoly d = div_exact(dp, g) - derivative_y(c);
    int i = 1;
    while (!c.is_constant()) {
        BiPoly a = gcd(c, d);
        if (a.is_zero()) a = BiPoly::constant(AlgNum(1));
        if (!a.is_constant()) out.emplace_back(lex_monic(a), i);
        c = div_exact(c, a);
        d = div_exact(d, a) - derivative_y(c);
        ++i;
    }
    return out;
}

} // namespace

std::vector<std::pair<BiPoly, int>> squarefree_factorization(const BiPoly& h) {
    if (h.is_zero()) throw ZeroInput();
    if (h.is_constant()) throw ConstantInput();
    // Split off the y-free content, factor both parts, then merge by
    // multiplicity (one square-free factor per exponent).
    auto ydense = to_ydense(h);
    UniPoly cont("x");
    {
        for (auto& c : ydense) {
            if (c.is_zero()) continue;
            cont = cont.is_zero() ? make_monic(c) : gcd_monic(cont, c);
            if (cont.degree() == 0) break;
        }
    }
    std::vector<std::pair<BiPoly, int>> out;
    BiPoly pp = h;
    if (cont.degree() > 0) {
        BiPoly cb;
        for (size_t i = 0; i < cont.c.size(); ++i)
            if (!cont.c[i].is_zero()) cb.add_term(static_cast<long>(i), 0, cont.c[i]);
        pp = div_exact(h, cb);
        for (auto& [f, m] : squarefree_factorization_uni(cont)) {
            BiPoly fb;
            for (size_t i = 0; i < f.c.size(); ++i)
                if (!f.c[i].is_zero()) fb.add_term(static_cast<long>(i), 0, f.c[i]);
            out.emplace_back(lex_monic(fb), m);
        }
    }
    if (!pp.is_constant()) {
        for (auto& [f, m] : yun_y(pp)) out.emplace_back(f, m);
    }
    // Merge factors that share a multiplicity so each multiplicity appears once.
    std::sort(out.begin(), out.end(), [](auto& a, auto& b) { return a.second < b.second; });
    std::vector<std::pair<BiPoly, int>> merged;
    for (auto& [f, m] : out) {
        if (!merged.empty() && merged.back().second == m)
            merged.back().first = lex_monic(merged.back().first * f);
        else
            merged.emplace_back(f, m);
    }
    return merged;
}

BiPoly reduced_part(const BiPoly& f) {
    if (f.is_zero()) throw ZeroInput();
    if (f.is_constant()) throw ConstantInput();
    BiPoly g = gcd(f, derivative_x(f));
    g = gcd(g, derivative_y(f));
    if (g.is_constant()) return lex_monic(f);
    return lex_monic(div_exact(f, g));
}

std::pair<TowerPtr, AlgNum> adjoin_root(TowerPtr tower, const UniPoly& p) {
    UniPoly q = make_monic(p);
    if (q.degree() < 1) throw ZeroInput();
    if (q.degree() >= 2) {
        UniPoly g = gcd_monic(q, derivative(q));
        if (g.degree() > 0) throw NotSquareFree();
    }
    if (q.degree() == 1) return {tower, -q.c[0]};
    std::string var = "a" + std::to_string(tower_depth(tower) + 1);
    TowerPtr ext = Tower::extend(tower, var, q.c);
    return {ext, ext->root()};
}

namespace {

// Shear x -> x + t*y so the lowest form does not vanish along y (making the
// y-resultant order count the full local intersection).
BiPoly shear(const BiPoly& f, long t) {
    BiPoly X;
    X.add_term(1, 0, AlgNum(1));
    X.add_term(0, 1, AlgNum(t));
    BiPoly Y = BiPoly::monomial(0, 1);
    return subst(f, X, Y);
}

bool y_general(const BiPoly& f) {
    long d = f.ord_origin();
    return !f.coeff(0, d).is_zero();
}

} // namespace

std::optional<long> intersection_multiplicity(const BiPoly& f, const BiPoly& g) {
    if (f.is_zero() || g.is_zero()) throw ZeroInput();
    if (f.is_constant() || g.is_constant()) return 0;
    if (!gcd(f, g).is_constant()) return std::nullopt;
    // Shear into a position where the resultant order counts only the origin:
    // both lowest forms meet y = 0 transversally, the full y-degree survives
    // at x = 0, and the two curves share no point of {x = 0} besides O.
    long bound = 4 * (f.total_degree() + g.total_degree()) * (f.total_degree() + g.total_degree()) + 8;
    for (long t = 0; t <= bound; ++t) {
        BiPoly F = (t == 0) ? f : shear(f, t);
        BiPoly G = (t == 0) ? g : shear(g, t);
        if (!y_general(F) || !y_general(G)) continue;
        UniPoly f0 = eval_x0(F), g0 = eval_x0(G);
        if (f0.degree() != F.deg_y() || g0.degree() != G.deg_y()) continue;
        long a = 0, b = 0;
        while (a < static_cast<long>(f0.c.size()) && f0.c[a].is_zero()) ++a;
        while (b < static_cast<long>(g0.c.size()) && g0.c[b].is_zero()) ++b;
        UniPoly fr(f0.var, std::vector<AlgNum>(f0.c.begin() + a, f0.c.end()));
        UniPoly gr(g0.var, std::vector<AlgNum>(g0.c.begin() + b, g0.c.end()));
        if (gcd_monic(fr, gr).degree() > 0) continue;  // meet elsewhere on x = 0
        UniPoly res = resultant_y(F, G);
        if (res.is_zero()) return std::nullopt;
        long ord = 0;
        while (ord < static_cast<long>(res.c.size()) && res.c[ord].is_zero()) ++ord;
        return ord;
    }
    throw InternalError("intersection_multiplicity: no separating shear found");
}

} // namespace basept

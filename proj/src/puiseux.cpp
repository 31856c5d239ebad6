#include "basept/puiseux.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

namespace basept {

namespace {

// ----- decisions on polynomials over product rings ------------------------

// Decides whether `p` is nonzero uniformly across tower components.  Returns
// false when all coefficients are structurally zero, true when some
// coefficient is invertible; otherwise splits.
bool decide_poly_nonzero(const std::vector<AlgNum>& coeffs) {
    for (auto& c : coeffs) {
        if (c.is_zero()) continue;
        if (c.is_rational()) return true;
        if (decide_nonzero(c)) return true;  // throws SplitRequest on zero divisors
    }
    return false;
}

bool decide_y_divides(const BiPoly& f) {
    std::vector<AlgNum> cs;
    for (auto& [e, c] : f.m)
        if (e.second == 0) cs.push_back(c);
    return !decide_poly_nonzero(cs);
}

// Order of f(0, y), deciding coefficients from below.  Requires f(0,y) != 0.
long decide_ord_y_at_x0(const BiPoly& f) {
    std::map<long, AlgNum> col;
    for (auto& [e, c] : f.m)
        if (e.first == 0) col[e.second] = c;
    for (auto& [b, c] : col)
        if (decide_nonzero(c)) return b;
    throw InternalError("decide_ord_y_at_x0: f(0,y) vanished");
}

// ----- substitution --------------------------------------------------------

BiPoly np_sub_poly(const BiPoly& f, const NPStep& s, long* stripped) {
    BiPoly out;
    for (auto& [e, c] : f.m) {
        AlgNum base = c * pow(s.xi, s.v * e.first + s.u * e.second);
        long E = s.q * e.first + s.p * e.second;
        for (long j = 0; j <= e.second; ++j) {
            Int bc;
            mpz_bin_uiui(bc.get_mpz_t(), static_cast<unsigned long>(e.second),
                         static_cast<unsigned long>(j));
            out.add_term(E, j, AlgNum(Rat(bc)) * base);
        }
    }
    long N = out.ord_x();
    if (stripped) *stripped = N;
    return N > 0 ? shift_div_x(out, N) : out;
}

} // namespace

std::vector<TrackedFactor> advance_tracked_factors(const std::vector<TrackedFactor>& S,
                                                   const NPStep& step) {
    std::vector<TrackedFactor> out;
    for (const auto& h : S) {
        long beta = 0;
        BiPoly t = np_sub_poly(h.poly, step, &beta);
        const AlgNum& c00 = t.coeff(0, 0);
        if (!c00.is_zero() && decide_nonzero(c00)) continue;  // unit: dropped
        TrackedFactor nf = h;
        nf.poly = std::move(t);
        nf.beta = h.beta + beta;
        out.push_back(std::move(nf));
    }
    return out;
}

// ----- Newton polygon -------------------------------------------------------

std::vector<NewtonPolygonSide> newton_polygon(const BiPoly& f) {
    if (f.is_zero()) throw ZeroInput();
    if (!eval_origin(f).is_zero()) throw NotVanishingAtOrigin();
    std::vector<std::pair<long, long>> pts(f.m.size());
    {
        size_t i = 0;
        for (auto& [e, c] : f.m) pts[i++] = e;
    }
    // bottom-right anchor: minimal b, then minimal a; top-left: minimal a, then minimal b
    auto bottom = *std::min_element(pts.begin(), pts.end(), [](auto& p, auto& q) {
        return std::tie(p.second, p.first) < std::tie(q.second, q.first);
    });
    auto top = *std::min_element(pts.begin(), pts.end(), [](auto& p, auto& q) {
        return std::tie(p.first, p.second) < std::tie(q.first, q.second);
    });
    std::vector<NewtonPolygonSide> sides;
    auto cur = bottom;
    while (cur != top) {
        // next hull vertex: the point up-left of cur minimizing |slope| = dv/dh,
        // farthest on ties
        std::pair<long, long> best{-1, -1};
        Rat best_slope;
        bool have = false;
        for (auto& p : pts) {
            if (p.first >= cur.first || p.second <= cur.second) continue;
            Rat slope(p.second - cur.second, cur.first - p.first);
            slope.canonicalize();
            if (!have || slope < best_slope ||
                (slope == best_slope && p.second > best.second)) {
                have = true;
                best_slope = slope;
                best = p;
            }
        }
        if (!have) throw InternalError("newton_polygon: no path from bottom to top anchor");
        NewtonPolygonSide side;
        side.from = cur;
        side.to = best;
        long dv = best.second - cur.second, dh = cur.first - best.first;
        long g = std::gcd(dv, dh);
        side.dv = dv / g;
        side.dh = dh / g;
        side.side_poly = UniPoly("z");
        side.side_poly.c.assign(g + 1, AlgNum(0));
        for (long t = 0; t <= g; ++t)
            side.side_poly.c[t] = f.coeff(cur.first - t * side.dh, cur.second + t * side.dv);
        side.side_poly.trim();
        sides.push_back(std::move(side));
        cur = best;
    }
    return sides;
}

namespace {

// ----- expansion states -----------------------------------------------------

struct Leaf {
    TowerPtr K;
    AlgNum lambda{1};
    long nu = 1;
    std::vector<std::pair<long, AlgNum>> pterms;  // (t-exponent, coefficient)
    BiPoly f;          // local polynomial, ord_y f(0,y) == 1 unless exact
    AlgNum Qc{1};
    long Qm = 0;
    std::vector<std::pair<int, int>> survivors;  // (owner, multiplicity)
    bool exact = false;                          // root series is exactly zero
    std::vector<AlgNum> tail;                    // local root series coefficients

    Leaf() { tail.push_back(AlgNum(0)); }
};

struct State {
    TowerPtr K;
    BiPoly f;
    std::vector<TrackedFactor> S;
    AlgNum lambda{1};
    long nu = 1;
    std::vector<std::pair<long, AlgNum>> pterms;
    AlgNum Qc{1};
    long Qm = 0;
};

State remap_state(const State& st, const TowerMap& m) {
    State r;
    r.K = nullptr;
    auto mapnum = [&](const AlgNum& a) { return apply(m, a); };
    auto mappoly = [&](const BiPoly& p) {
        BiPoly q;
        for (auto& [e, c] : p.m) q.add_term(e.first, e.second, mapnum(c));
        return q;
    };
    r.f = mappoly(st.f);
    for (auto& h : st.S) {
        TrackedFactor nh = h;
        nh.poly = mappoly(h.poly);
        r.S.push_back(std::move(nh));
    }
    r.lambda = mapnum(st.lambda);
    r.nu = st.nu;
    for (auto& [k, c] : st.pterms) r.pterms.emplace_back(k, mapnum(c));
    r.Qc = mapnum(st.Qc);
    r.Qm = st.Qm;
    // The tower of the remapped state is the deepest tower among its values.
    TowerPtr tw;
    auto bump = [&](const AlgNum& a) { if (tower_depth(a.tower()) > tower_depth(tw)) tw = a.tower(); };
    for (auto& [e, c] : r.f.m) bump(c);
    for (auto& h : r.S) for (auto& [e, c] : h.poly.m) bump(c);
    bump(r.lambda);
    bump(r.Qc);
    for (auto& [k, c] : r.pterms) bump(c);
    r.K = tw;
    return r;
}

Leaf remap_leaf(const Leaf& L, const TowerMap& m) {
    Leaf r;
    auto mapnum = [&](const AlgNum& a) { return apply(m, a); };
    BiPoly q;
    for (auto& [e, c] : L.f.m) q.add_term(e.first, e.second, mapnum(c));
    r.f = std::move(q);
    r.lambda = mapnum(L.lambda);
    r.nu = L.nu;
    r.pterms.clear();
    for (auto& [k, c] : L.pterms) r.pterms.emplace_back(k, mapnum(c));
    r.Qc = mapnum(L.Qc);
    r.Qm = L.Qm;
    r.survivors = L.survivors;
    r.exact = L.exact;
    r.tail.clear();
    for (auto& c : L.tail) r.tail.push_back(mapnum(c));
    TowerPtr tw;
    auto bump = [&](const AlgNum& a) { if (tower_depth(a.tower()) > tower_depth(tw)) tw = a.tower(); };
    for (auto& [e, c] : r.f.m) bump(c);
    bump(r.lambda);
    bump(r.Qc);
    for (auto& [k, c] : r.pterms) bump(c);
    for (auto& c : r.tail) bump(c);
    r.K = tw;
    return r;
}

struct Expander {
    int r = 0;  // number of generators (owners 0..r, r = fixed part)
    std::vector<Leaf> leaves;

    void expand(const State& st) {
        std::vector<Leaf> local;
        try {
            body(st, local);
        } catch (SplitRequest& s) {
            auto [ma, mb] = split_tower_over(s, common_tower(s.tower, st.K));
            expand(remap_state(st, ma));
            expand(remap_state(st, mb));
            return;
        }
        for (auto& l : local) leaves.push_back(std::move(l));
    }

private:
    void emit_exact_leaf(const State& st, std::vector<Leaf>& out) {
        Leaf L;
        L.K = st.K;
        L.lambda = st.lambda;
        L.nu = st.nu;
        L.pterms = st.pterms;
        L.Qc = st.Qc;
        L.Qm = st.Qm;
        L.exact = true;
        for (auto& h : st.S)
            if (decide_y_divides(h.poly)) L.survivors.emplace_back(h.owner, h.multiplicity);
        out.push_back(std::move(L));
    }

    void emit_leaf(const State& st, std::vector<Leaf>& out) {
        Leaf L;
        L.K = st.K;
        L.lambda = st.lambda;
        L.nu = st.nu;
        L.pterms = st.pterms;
        L.Qc = st.Qc;
        L.Qm = st.Qm;
        L.f = st.f;
        for (auto& h : st.S) L.survivors.emplace_back(h.owner, h.multiplicity);
        out.push_back(std::move(L));
    }

    void body(const State& st0, std::vector<Leaf>& out) {
        State st = st0;
        // A y-factor is a series that terminates exactly here.
        if (decide_y_divides(st.f)) {
            emit_exact_leaf(st, out);
            st.f = shift_div_y(st.f, 1);
        }
        if (!eval_origin(st.f).is_zero() && decide_nonzero(eval_origin(st.f)))
            return;  // no further branches through the local origin
        if (st.f.is_constant()) return;
        auto sides = newton_polygon(st.f);
        // Branch exponents mu = dh/dv descending: increasing slope magnitude.
        for (auto& side : sides) {
            UniPoly phi = side.side_poly;
            // Endpoint coefficients are nonzero by construction of the hull;
            // decide them so product-ring components agree on the polygon.
            decide_nonzero(phi.c.front());
            decide_nonzero(phi.c.back());
            UniPoly phibar = squarefree_part(phi);
            process_side(st, side, phibar, out);
        }
    }

    void process_side(const State& st, const NewtonPolygonSide& side, const UniPoly& phibar,
                      std::vector<Leaf>& out) {
        try {
            side_body(st, side, phibar, out);
        } catch (SplitRequest& s) {
            if (s.level >= tower_depth(st.K)) {
                // The fresh root package itself factored: retry per factor.
                if (s.level != tower_depth(st.K))
                    throw InternalError("side split above the fresh level escaped its transaction");
                UniPoly g("z", s.g), h("z", s.h);
                process_side(st, side, g, out);
                process_side(st, side, h, out);
                return;
            }
            auto [ma, mb] = split_tower_over(s, common_tower(s.tower, st.K));
            auto remap_phi = [&](const TowerMap& m) {
                UniPoly p("z");
                p.c.reserve(phibar.c.size());
                for (auto& c : phibar.c) p.c.push_back(apply(m, c));
                p.trim();
                return p;
            };
            process_side(remap_state(st, ma), side, remap_phi(ma), out);
            process_side(remap_state(st, mb), side, remap_phi(mb), out);
        }
    }

    void side_body(const State& st, const NewtonPolygonSide& side, const UniPoly& phibar,
                   std::vector<Leaf>& out) {
        long q = side.dv, p = side.dh;
        TowerPtr K2 = st.K;
        AlgNum xi(0);
        if (phibar.degree() == 1) {
            xi = -(phibar.c[0] * inverse(phibar.c[1]));
        } else {
            std::string var = "a" + std::to_string(tower_depth(st.K) + 1);
            K2 = Tower::extend(st.K, var, phibar.c);
            xi = K2->root();
        }
        // Bezout twist u*q - v*p == 1.
        long u = 1, v = 0;
        if (p == 1) {
            u = 1;
            v = q - 1;
        } else {
            long uu = 1;
            while ((uu * q) % p != 1 % p) ++uu;  // q is invertible mod p
            u = uu;
            v = (u * q - 1) / p;
        }
        NPStep step{xi, u, v, p, q};
        State child;
        child.K = K2;
        long n = 0;
        child.f = np_sub_poly(st.f, step, &n);
        child.S = advance_tracked_factors(st.S, step);
        child.lambda = st.lambda * pow(xi, v * st.nu);
        child.nu = st.nu * q;
        child.Qc = st.Qc * pow(xi, v * st.Qm + u);
        child.Qm = q * st.Qm + p;
        child.pterms.reserve(st.pterms.size() + 1);
        for (auto& [k, c] : st.pterms) child.pterms.emplace_back(q * k, c * pow(xi, v * k));
        child.pterms.emplace_back(child.Qm, child.Qc);
        long delta = decide_ord_y_at_x0(child.f);
        if (delta < 1) throw InternalError("expansion: root did not continue");
        if (delta == 1 && !decide_y_divides(child.f)) {
            emit_leaf(child, out);
            return;
        }
        expand_inner(child, out);
    }

    // Recursion below a side keeps its own transaction so an inner split does
    // not duplicate sibling leaves.
    void expand_inner(const State& st, std::vector<Leaf>& out) {
        std::vector<Leaf> local;
        try {
            body(st, local);
        } catch (SplitRequest& s) {
            auto [ma, mb] = split_tower_over(s, common_tower(s.tower, st.K));
            expand_inner(remap_state(st, ma), out);
            expand_inner(remap_state(st, mb), out);
            return;
        }
        for (auto& l : local) out.push_back(std::move(l));
    }
};

// ----- leaf series -----------------------------------------------------------

// Ensures tail coefficients t^1..t^M are known; decides each coefficient so
// the support is unambiguous (may raise SplitRequest).
void extend_tail(Leaf& L, long M) {
    if (L.exact) return;
    if (static_cast<long>(L.tail.size()) - 1 >= M) return;
    AlgNum a01 = L.f.coeff(0, 1);
    AlgNum ainv = inverse(a01);
    while (static_cast<long>(L.tail.size()) - 1 < M) {
        long m = static_cast<long>(L.tail.size());
        // value = [t^m] f(t, rho(t)) with rho the known part
        // powers of rho mod t^{m+1}
        std::vector<AlgNum> rho(L.tail.begin(), L.tail.end());
        rho.resize(m + 1, AlgNum(0));
        long degy = L.f.deg_y();
        std::vector<std::vector<AlgNum>> pw(degy + 1);
        pw[0] = {AlgNum(1)};
        for (long b = 1; b <= degy; ++b) {
            pw[b].assign(m + 1, AlgNum(0));
            for (long i = 0; i <= m; ++i) {
                if (pw[b - 1].size() <= static_cast<size_t>(i) || pw[b - 1][i].is_zero()) continue;
                for (long j = 0; i + j <= m; ++j) {
                    if (rho[j].is_zero()) continue;
                    pw[b][i + j] = pw[b][i + j] + pw[b - 1][i] * rho[j];
                }
            }
        }
        AlgNum val(0);
        for (auto& [e, c] : L.f.m) {
            long a = e.first, b = e.second;
            if (a > m) continue;
            long need = m - a;
            if (static_cast<size_t>(need) < pw[b].size() && !pw[b][need].is_zero())
                val = val + c * pw[b][need];
        }
        AlgNum d = -(val * ainv);
        if (!d.is_zero()) decide_nonzero(d);  // pin the support componentwise
        L.tail.push_back(std::move(d));
    }
}

// All known terms of the leaf's series with t-exponent <= M (extends lazily).
std::vector<std::pair<long, AlgNum>> leaf_terms(Leaf& L, long M) {
    extend_tail(L, M);
    std::vector<std::pair<long, AlgNum>> out;
    for (auto& [k, c] : L.pterms)
        if (k <= M) out.emplace_back(k, c);
    for (long j = 1; j < static_cast<long>(L.tail.size()) && L.Qm + j <= M; ++j)
        if (!L.tail[j].is_zero()) out.emplace_back(L.Qm + j, L.Qc * L.tail[j]);
    std::sort(out.begin(), out.end(), [](auto& a, auto& b) { return a.first < b.first; });
    return out;
}

// ----- pairwise coincidence engine -------------------------------------------

struct ScanComponent {
    TowerPtr tower;
    std::vector<AlgNum> imagesA, imagesB;  // level images for the two source towers
    AlgNum rhoA{1}, rhoB{1};
    size_t pos = 0;                 // next grid index to examine
    std::vector<int> rsig;          // split lineage at embedding levels
    long kdepth = 0;                // levels of the tower serving K_A (x) K_B
};

struct ScanOutcome {
    // resolved: (exponent, Q-dimension, rsig)
    std::vector<std::tuple<Rat, long, std::vector<int>>> resolved;
    long unresolved_dim = 0;
};

long ctx_dim(const ScanComponent& c) { return c.tower ? c.tower->dim() : 1; }

// Runs the difference scan between the series of two leaves over the combined
// ring K_A (x) K_B [rhoA][rhoB].  `self` distinguishes the leaf-against-itself
// scan.  Terms must already be materialized to t-order <= caps.
ScanOutcome scan_pair(const std::vector<std::pair<long, AlgNum>>& ta, long nuA, const AlgNum& lamA,
                      TowerPtr KA,
                      const std::vector<std::pair<long, AlgNum>>& tb, long nuB, const AlgNum& lamB,
                      TowerPtr KB, const Rat& horizon) {
    // grid of global exponents
    std::set<Rat> grid_set;
    for (auto& [k, c] : ta) grid_set.insert(Rat(k) / nuA);
    for (auto& [k, c] : tb) grid_set.insert(Rat(k) / nuB);
    std::vector<Rat> grid;
    for (auto& e : grid_set)
        if (e <= horizon) grid.push_back(e);
    std::map<Rat, AlgNum> mapA, mapB;
    for (auto& [k, c] : ta) mapA[Rat(k) / nuA] = c;
    for (auto& [k, c] : tb) mapB[Rat(k) / nuB] = c;

    ScanComponent root;
    {
        // clone towers: A levels first, then B levels re-adjoined
        std::vector<TowerPtr> la, lb;
        for (TowerPtr t = KA; t; t = t->base()) la.push_back(t);
        std::reverse(la.begin(), la.end());
        for (TowerPtr t = KB; t; t = t->base()) lb.push_back(t);
        std::reverse(lb.begin(), lb.end());
        TowerPtr cur;
        for (auto& t : la) {
            cur = t;
            root.imagesA.push_back(t->root());
        }
        for (size_t i = 0; i < lb.size(); ++i) {
            std::vector<AlgNum> mp;
            mp.reserve(lb[i]->minpoly().size());
            for (auto& c : lb[i]->minpoly()) mp.push_back(eval_levels(c, root.imagesB));
            cur = Tower::extend(cur, "b" + std::to_string(i + 1), std::move(mp));
            root.imagesB.push_back(cur->root());
        }
        root.kdepth = tower_depth(cur);
        // rho levels: rho^nu = 1/lambda
        auto adjoin_rho = [&](long nu, const AlgNum& laml, const char* name) -> AlgNum {
            if (nu == 1) return inverse(laml);
            std::vector<AlgNum> mp(nu + 1, AlgNum(0));
            mp[0] = -inverse(laml);
            mp[nu] = AlgNum(1);
            cur = Tower::extend(cur, name, std::move(mp));
            return cur->root();
        };
        AlgNum lamAm = eval_levels(lamA, root.imagesA);
        AlgNum lamBm = eval_levels(lamB, root.imagesB);
        root.rhoA = adjoin_rho(nuA, lamAm, "rA");
        root.rhoB = adjoin_rho(nuB, lamBm, "rB");
        root.tower = cur;
    }

    ScanOutcome out;
    std::vector<ScanComponent> work{std::move(root)};
    while (!work.empty()) {
        ScanComponent ctx = std::move(work.back());
        work.pop_back();
        bool resolved = false;
        while (ctx.pos < grid.size()) {
            const Rat& e = grid[ctx.pos];
            AlgNum D(0);
            auto ia = mapA.find(e);
            if (ia != mapA.end()) {
                long k = static_cast<long>(mpz_get_si(Rat(e * nuA).get_num().get_mpz_t()));
                D = D + eval_levels(ia->second, ctx.imagesA) * pow(ctx.rhoA, k);
            }
            auto ib = mapB.find(e);
            if (ib != mapB.end()) {
                long k = static_cast<long>(mpz_get_si(Rat(e * nuB).get_num().get_mpz_t()));
                D = D - eval_levels(ib->second, ctx.imagesB) * pow(ctx.rhoB, k);
            }
            if (D.is_zero()) {
                ++ctx.pos;
                continue;
            }
            try {
                if (decide_nonzero(D)) {
                    out.resolved.emplace_back(e, ctx_dim(ctx), ctx.rsig);
                    resolved = true;
                    break;
                }
                ++ctx.pos;  // structurally nonzero but zero element cannot occur
            } catch (SplitRequest& s) {
                auto [ma, mb] = split_tower_over(s, common_tower(s.tower, ctx.tower));
                auto fork = [&](const TowerMap& m, int tag) {
                    ScanComponent c;
                    c.tower = m.target;
                    for (auto& x : ctx.imagesA) c.imagesA.push_back(apply(m, x));
                    for (auto& x : ctx.imagesB) c.imagesB.push_back(apply(m, x));
                    c.rhoA = apply(m, ctx.rhoA);
                    c.rhoB = apply(m, ctx.rhoB);
                    c.pos = ctx.pos;
                    c.rsig = ctx.rsig;
                    if (s.level < ctx.kdepth) c.rsig.push_back(tag);
                    // recompute the embedding-level depth after collapses
                    TowerPtr kd;
                    for (auto& x : c.imagesA)
                        if (tower_depth(x.tower()) > tower_depth(kd)) kd = x.tower();
                    for (auto& x : c.imagesB)
                        if (tower_depth(x.tower()) > tower_depth(kd)) kd = x.tower();
                    c.kdepth = tower_depth(kd);
                    return c;
                };
                work.push_back(fork(ma, 0));
                work.push_back(fork(mb, 1));
                resolved = true;  // this context is replaced by its forks
                break;
            }
        }
        if (!resolved && ctx.pos >= grid.size()) out.unresolved_dim += ctx_dim(ctx);
    }
    return out;
}

} // namespace

// ----- public coincidence ----------------------------------------------------

Rat coincidence(const PuiseuxBranch& b1, const PuiseuxBranch& b2) {
    if (b1.y_axis || b2.y_axis) {
        const PuiseuxBranch& other = b1.y_axis ? b2 : b1;
        if (other.y_axis) throw InternalError("coincidence: two y-axis branches");
        if (other.terms.empty()) return Rat(0);
        return Rat(1) / other.terms.front().first;
    }
    std::vector<std::pair<long, AlgNum>> ta, tb;
    for (auto& [e, c] : b1.terms) ta.emplace_back(static_cast<long>(mpz_get_si(Rat(e * b1.nu).get_num().get_mpz_t())), c);
    for (auto& [e, c] : b2.terms) tb.emplace_back(static_cast<long>(mpz_get_si(Rat(e * b2.nu).get_num().get_mpz_t())), c);
    Rat horizon = std::min(b1.truncation, b2.truncation);
    auto sc = scan_pair(ta, b1.nu, b1.lambda, b1.tower, tb, b2.nu, b2.lambda, b2.tower, horizon);
    Rat best(-1);
    for (auto& [e, dim, sig] : sc.resolved)
        if (e > best) best = e;
    if (best < 0) throw NotSeparated();
    return best;
}

// ----- expand_product ---------------------------------------------------------

namespace {

struct ClassKey { int leaf; int emb; };

// Nested-block fill of a symmetric d x d coincidence matrix from a value
// multiset with pair counts (ordered pairs).  Values must stack into uniform
// nested blocks; anything else is rejected loudly.
void fill_self_matrix(std::vector<std::vector<Rat>>& co, const std::vector<int>& classes,
                      std::vector<std::pair<Rat, long>> values /*desc, ordered-pair counts*/) {
    long d = static_cast<long>(classes.size());
    if (d <= 1) return;
    std::sort(values.begin(), values.end(), [](auto& a, auto& b) { return a.first > b.first; });
    long bprev = 1;
    std::vector<std::pair<Rat, long>> blocks;  // (value, block size)
    for (auto& [v, n] : values) {
        if (n % d != 0) throw InternalError("conjugate coincidence fill: counts not uniform");
        long b = bprev + n / d;
        blocks.emplace_back(v, b);
        bprev = b;
    }
    if (bprev != d) throw InternalError("conjugate coincidence fill: counts do not cover pairs");
    for (auto& [v, b] : blocks) (void)v;
    for (long i = 0; i < d; ++i)
        for (long j = 0; j < d; ++j) {
            if (i == j) continue;
            for (auto& [v, b] : blocks) {
                if (i / b == j / b) {
                    co[classes[i]][classes[j]] = v;
                    break;
                }
            }
        }
    // validate nesting actually covered everything
    for (long i = 0; i < d; ++i)
        for (long j = 0; j < d; ++j)
            if (i != j && co[classes[i]][classes[j]] == Rat(-7777))
                throw InternalError("conjugate coincidence fill: uncovered pair");
}

} // namespace

ExpandResult expand_product(const std::vector<BiPoly>& generators, const BiPoly& fixed_part) {
    ExpandResult res;
    const int r = static_cast<int>(generators.size());
    for (auto& g : generators)
        if (g.is_zero()) throw ZeroGenerator();
    if (fixed_part.is_zero()) throw ZeroGenerator();
    for (auto& g : generators)
        if (g.ord_origin() == 0) return res;  // unit ideal: no base points

    // x-exponents and tracked square-free factors per owner (r = fixed part)
    std::vector<long> alpha(r + 1, 0);
    std::vector<TrackedFactor> S0;
    std::vector<BiPoly> sqparts;
    for (int k = 0; k <= r; ++k) {
        const BiPoly& gk = (k < r) ? generators[k] : fixed_part;
        if (gk.is_constant()) continue;
        alpha[k] = gk.ord_x();
        BiPoly h = alpha[k] > 0 ? shift_div_x(gk, alpha[k]) : gk;
        if (h.is_constant()) continue;
        BiPoly sq = BiPoly::constant(AlgNum(1));
        for (auto& [f, m] : squarefree_factorization(h)) {
            S0.push_back(TrackedFactor{k, m, f, 0});
            sq = sq * f;
        }
        sqparts.push_back(lex_monic(sq));
    }

    // Reduced part of the product: multiply square-free parts, removing the
    // factors already present (they are each square-free).
    BiPoly fbar = BiPoly::constant(AlgNum(1));
    for (auto& sq : sqparts) {
        BiPoly g = gcd(sq, fbar);
        fbar = fbar * (g.is_constant() ? sq : div_exact(sq, g));
    }
    bool axis_present = false;
    for (int k = 0; k <= r; ++k) axis_present = axis_present || alpha[k] > 0;

    std::vector<Leaf> leaves;
    if (!fbar.is_constant()) {
        if (fbar.ord_x() > 0) throw InternalError("expand_product: x in the square-free parts");
        Expander ex;
        ex.r = r;
        State root;
        root.f = fbar;
        root.S = S0;
        if (root.f.ord_origin() > 0) ex.expand(root);
        leaves = std::move(ex.leaves);
    }

    // ---- materialize supports and compute pairwise coincidences ----
    // Horizon: grow until every cross pair resolves and each self scan's
    // unresolved dimension shrinks to the diagonal.  The x-degree of the
    // y-discriminant bounds how far two distinct series can agree.
    long nL = static_cast<long>(leaves.size());
    const Rat disc_bound = Rat(2 * std::max<long>(fbar.deg_x(), 1) * std::max<long>(fbar.deg_y(), 1) + 4);

    Rat H(4);
    for (auto& L : leaves)
        if (!L.pterms.empty()) {
            Rat last = Rat(L.pterms.back().first) / L.nu;
            if (last + 2 > H) H = last + 2;
        }

    // Retry loop: extending a tail can split a leaf, which restarts the phase.
    std::vector<std::vector<std::pair<long, AlgNum>>> terms;
    std::vector<ScanOutcome> self_scans(0);
    std::map<std::pair<int, int>, ScanOutcome> cross_scans;
    while (true) {
        bool restart = false;
        // keep a slack window past the scan horizon for the cluster walk
        const Rat Hmat = H + 4;
        try {
            terms.assign(nL, {});
            for (long i = 0; i < nL; ++i) {
                long M = static_cast<long>(rat_floor(Hmat * leaves[i].nu).get_si()) + 1;
                terms[i] = leaf_terms(leaves[i], M);
            }
        } catch (SplitRequest&) {
            // split the offending leaf: find it by retrying leaf by leaf
            std::vector<Leaf> next;
            for (auto& L : leaves) {
                try {
                    Leaf cp = L;
                    long M = static_cast<long>(rat_floor(Hmat * cp.nu).get_si()) + 1;
                    extend_tail(cp, M);
                    next.push_back(std::move(cp));
                } catch (SplitRequest& s2) {
                    auto [ma, mb] = split_tower_over(s2, common_tower(s2.tower, L.K));
                    next.push_back(remap_leaf(L, ma));
                    next.push_back(remap_leaf(L, mb));
                }
            }
            leaves = std::move(next);
            nL = static_cast<long>(leaves.size());
            continue;
        }

        // run scans
        self_scans.assign(nL, ScanOutcome{});
        cross_scans.clear();
        bool need_more = false;
        for (long i = 0; i < nL && !need_more; ++i) {
            long d = leaves[i].K ? leaves[i].K->dim() : 1;
            if (d >= 2) {
                self_scans[i] = scan_pair(terms[i], leaves[i].nu, leaves[i].lambda, leaves[i].K,
                                          terms[i], leaves[i].nu, leaves[i].lambda, leaves[i].K, H);
                // unresolved must shrink to exactly the diagonal pairs
                if (self_scans[i].unresolved_dim != d * leaves[i].nu) {
                    if (H > disc_bound)
                        throw InternalError("expand_product: conjugate classes did not separate");
                    need_more = true;
                    break;
                }
            }
            for (long j = i + 1; j < nL; ++j) {
                auto sc = scan_pair(terms[i], leaves[i].nu, leaves[i].lambda, leaves[i].K,
                                    terms[j], leaves[j].nu, leaves[j].lambda, leaves[j].K, H);
                if (sc.unresolved_dim > 0) {
                    if (H > disc_bound)
                        throw InternalError("expand_product: cross-leaf pair did not separate");
                    need_more = true;
                    break;
                }
                cross_scans[{i, j}] = std::move(sc);
            }
        }
        if (need_more) {
            H = H * 2;
            restart = true;
        }
        if (!restart) break;
    }

    // ---- assemble records ----
    std::vector<int> leaf_of_record, emb_of_record;
    for (long i = 0; i < nL; ++i) {
        long d = leaves[i].K ? leaves[i].K->dim() : 1;
        for (long e = 0; e < d; ++e) {
            BranchRecord rec;
            rec.leaf = static_cast<int>(i);
            rec.embedding = static_cast<int>(e);
            rec.exact = leaves[i].exact;
            rec.branch.nu = leaves[i].nu;
            rec.branch.tower = leaves[i].K;
            rec.branch.lambda = leaves[i].lambda;
            rec.branch.truncation = H + 4;
            for (auto& [k, c] : terms[i]) rec.branch.terms.emplace_back(Rat(k) / leaves[i].nu, c);
            rec.mults.assign(r + 1, 0);
            for (auto& [owner, mult] : leaves[i].survivors) {
                if (rec.mults[owner] != 0)
                    throw InternalError("expand_product: two tracked factors of one owner survived");
                rec.mults[owner] = mult;
            }
            res.records.push_back(std::move(rec));
            leaf_of_record.push_back(static_cast<int>(i));
            emb_of_record.push_back(static_cast<int>(e));
        }
    }
    if (axis_present) {
        BranchRecord ax;
        ax.branch.y_axis = true;
        ax.branch.truncation = H + 4;
        ax.mults.assign(r + 1, 0);
        for (int k = 0; k <= r; ++k) ax.mults[k] = alpha[k];
        ax.leaf = -1;
        res.records.push_back(std::move(ax));
        leaf_of_record.push_back(-1);
        emb_of_record.push_back(0);
    }

    // ---- coincidence matrix ----
    long nrec = static_cast<long>(res.records.size());
    res.coin.assign(nrec, std::vector<Rat>(nrec, Rat(-7777)));
    // group records by leaf
    std::map<int, std::vector<int>> by_leaf;
    for (long i = 0; i < nrec; ++i)
        if (leaf_of_record[i] >= 0) by_leaf[leaf_of_record[i]].push_back(static_cast<int>(i));

    for (long i = 0; i < nrec; ++i) {
        for (long j = 0; j < nrec; ++j) {
            if (i == j) continue;
            int li = leaf_of_record[i], lj = leaf_of_record[j];
            if (li < 0 || lj < 0) {
                // axis pair: swapped-frame contact 1/lead
                long o = li < 0 ? j : i;
                const auto& t = res.records[o].branch.terms;
                res.coin[i][j] = t.empty() ? Rat(0) : Rat(1) / t.front().first;
            }
        }
    }
    // cross-leaf class pairs
    for (auto& [key, sc] : cross_scans) {
        auto [li, lj] = key;
        auto& A = by_leaf[li];
        auto& B = by_leaf[lj];
        long nuA = leaves[li].nu, nuB = leaves[lj].nu;
        // group resolved by rsig
        std::map<std::vector<int>, std::pair<Rat, long>> bysig;  // max value, total dim
        for (auto& [e, dim, sig] : sc.resolved) {
            auto it = bysig.find(sig);
            if (it == bysig.end()) bysig[sig] = {e, dim};
            else {
                it->second.first = std::max(it->second.first, e);
                it->second.second += dim;
            }
        }
        // pair counts per value
        std::vector<std::pair<Rat, long>> vals;  // (value, #class pairs)
        for (auto& [sig, pr] : bysig) {
            if (pr.second % (nuA * nuB) != 0)
                throw InternalError("coincidence: component dimension not divisible by ramification");
            vals.emplace_back(pr.first, pr.second / (nuA * nuB));
        }
        std::sort(vals.begin(), vals.end(), [](auto& a, auto& b) { return a.first > b.first; });
        long total = 0;
        for (auto& [v, n] : vals) total += n;
        if (total != static_cast<long>(A.size() * B.size()))
            throw InternalError("coincidence: class pair count mismatch");
        if (vals.size() == 1) {
            for (int a : A)
                for (int b : B) res.coin[a][b] = res.coin[b][a] = vals[0].first;
        } else if (A.size() == 1 || B.size() == 1) {
            auto& row = A.size() == 1 ? B : A;
            int single = A.size() == 1 ? A[0] : B[0];
            size_t idx = 0;
            for (auto& [v, n] : vals)
                for (long c = 0; c < n; ++c) {
                    res.coin[single][row[idx]] = res.coin[row[idx]][single] = v;
                    ++idx;
                }
        } else {
            // block fill: requires uniform row multisets
            long dA = static_cast<long>(A.size()), dB = static_cast<long>(B.size());
            for (auto& [v, n] : vals)
                if (n % dA != 0 || (n / dA) * dA != n)
                    throw InternalError("coincidence: irregular cross-class structure");
            // fill rows cyclically, consistent by symmetry of the multiset
            std::vector<Rat> rowvals;
            for (auto& [v, n] : vals)
                for (long c = 0; c < n / dA; ++c) rowvals.push_back(v);
            if (static_cast<long>(rowvals.size()) != dB)
                throw InternalError("coincidence: cross row size mismatch");
            for (long a = 0; a < dA; ++a)
                for (long b = 0; b < dB; ++b) {
                    const Rat& v = rowvals[(b + a) % dB];
                    res.coin[A[a]][B[b]] = res.coin[B[b]][A[a]] = v;
                }
        }
    }
    // within-leaf class pairs
    for (auto& [li, A] : by_leaf) {
        if (A.size() <= 1) continue;
        const auto& sc = self_scans[li];
        long nu = leaves[li].nu;
        long d = static_cast<long>(A.size());
        // Conjugate twist pattern from the support: for each order o | nu the
        // phi(o) twists of that order first disagree at tau_o.
        std::map<Rat, long> tau_phi;  // tau value -> sum of phi(o) over orders with that tau
        {
            std::vector<long> supp;
            for (auto& [k, c] : terms[li]) supp.push_back(k);
            for (long o = 2; o <= nu; ++o) {
                if (nu % o != 0) continue;
                long phi = 0;
                for (long x = 1; x <= o; ++x)
                    if (std::gcd(x, o) == 1) ++phi;
                long kmin = -1;
                for (long k : supp)
                    if (k % o != 0) { kmin = k; break; }
                if (kmin < 0) throw InternalError("coincidence: ramification not witnessed in support");
                tau_phi[Rat(kmin) / nu] += phi;
            }
        }
        if (sc.unresolved_dim != d * nu)
            throw InternalError("coincidence: self scan diagonal mismatch");
        // Quadruple counts per exponent, with the same-class (diagonal sigma)
        // conjugate quadruples removed.
        std::map<Rat, long> cross;
        for (auto& [e, dim, sig] : sc.resolved) cross[e] += dim;
        for (auto& [e, phi] : tau_phi) {
            long dim = d * nu * phi;
            auto it = cross.find(e);
            if (it == cross.end() || it->second < dim)
                throw InternalError("coincidence: conjugate multiset mismatch");
            it->second -= dim;
            if (it->second == 0) cross.erase(it);
        }
        // A class pair with coincidence c contributes nu quadruples at c for
        // every twist whose tau is >= c, and nu*phi(o) at tau_o for the rest.
        // Solve for the pair counts n_c from the largest exponent down.
        std::map<Rat, long> pairs;  // coincidence value -> ordered pair count
        {
            std::map<Rat, long> left = cross;
            std::vector<Rat> exps;
            for (auto& [e, dim] : left) exps.push_back(e);
            std::sort(exps.rbegin(), exps.rend());
            for (const Rat& c : exps) {
                long have = left.count(c) ? left[c] : 0;
                if (have <= 0) continue;
                long per_pair_at_c = nu;
                for (auto& [t, phi] : tau_phi)
                    if (t >= c) per_pair_at_c += nu * phi;
                if (have % per_pair_at_c != 0)
                    throw InternalError("coincidence: self component count mismatch");
                long n = have / per_pair_at_c;
                pairs[c] += n;
                left[c] -= n * per_pair_at_c;
                for (auto& [t, phi] : tau_phi) {
                    if (t >= c) continue;
                    auto it = left.find(t);
                    long need = n * nu * phi;
                    if (it == left.end() || it->second < need)
                        throw InternalError("coincidence: twist quadruples missing");
                    it->second -= need;
                }
            }
            for (auto& [e, dim] : left)
                if (dim != 0) throw InternalError("coincidence: unconsumed self quadruples");
        }
        std::vector<std::pair<Rat, long>> vals;
        long total = 0;
        for (auto& [e, n] : pairs) {
            vals.emplace_back(e, n);
            total += n;
        }
        if (total != d * (d - 1))
            throw InternalError("coincidence: self class pair count mismatch");
        fill_self_matrix(res.coin, A, vals);
    }
    // ultrametric sanity over non-axis records
    for (long i = 0; i < nrec; ++i)
        for (long j = 0; j < nrec; ++j)
            for (long k = 0; k < nrec; ++k) {
                if (i == j || j == k || i == k) continue;
                if (leaf_of_record[i] < 0 || leaf_of_record[j] < 0 || leaf_of_record[k] < 0) continue;
                Rat lo = std::min(res.coin[i][k], res.coin[j][k]);
                if (res.coin[i][j] < lo)
                    throw InternalError("coincidence: ultrametric violation in class assignment");
            }
    return res;
}

} // namespace basept

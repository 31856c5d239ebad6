#include <doctest.h>

#include "basept/cli.hpp"
#include "basept/puiseux.hpp"

#include <map>

using namespace basept;

namespace {

BiPoly P(const std::string& s) { return parse_ideal(s).generators.at(0); }

// order in t of f(lambda t^nu, S(t)) truncated to t^tmax; -1 when every
// computed coefficient vanishes (order beyond the truncation)
long subst_order(const BiPoly& f, const PuiseuxBranch& b, long tmax) {
    std::map<long, AlgNum> s;
    for (auto& [e, c] : b.terms) {
        Rat k = e * b.nu;
        if (!is_integer(k)) continue;
        long kk = to_long(k.get_num());
        if (kk <= tmax) s[kk] = c;
    }
    auto mulser = [&](const std::map<long, AlgNum>& u, const std::map<long, AlgNum>& v) {
        std::map<long, AlgNum> w;
        for (auto& [i, ci] : u)
            for (auto& [j, cj] : v) {
                if (i + j > tmax) continue;
                AlgNum t = ci * cj;
                auto it = w.find(i + j);
                if (it == w.end()) w[i + j] = t;
                else {
                    it->second = it->second + t;
                    if (it->second.is_zero()) w.erase(it);
                }
            }
        return w;
    };
    std::vector<std::map<long, AlgNum>> spow(1);
    spow[0][0] = AlgNum(1);
    long degy = f.deg_y();
    for (long bdeg = 1; bdeg <= degy; ++bdeg) spow.push_back(mulser(spow.back(), s));
    std::map<long, AlgNum> acc;
    for (auto& [e, c] : f.m) {
        long base = b.nu * e.first;
        if (base > tmax) continue;
        for (auto& [j, cj] : spow[e.second]) {
            if (base + j > tmax) continue;
            AlgNum t = c * pow(b.lambda, e.first) * cj;
            auto it = acc.find(base + j);
            if (it == acc.end()) acc[base + j] = t;
            else {
                it->second = it->second + t;
                if (it->second.is_zero()) acc.erase(it);
            }
        }
    }
    for (auto& [k, c] : acc)
        if (!c.is_zero()) return k;
    return -1;
}

} // namespace

TEST_CASE("newton polygon of the cusp") {
    auto sides = newton_polygon(P("y^2-x^3"));
    REQUIRE(sides.size() == 1);
    CHECK(sides[0].from == std::make_pair(3L, 0L));
    CHECK(sides[0].to == std::make_pair(0L, 2L));
    CHECK(sides[0].dv == 2);
    CHECK(sides[0].dh == 3);
    CHECK(sides[0].side_poly.degree() == 1);
}

TEST_CASE("newton polygon with two sides") {
    auto sides = newton_polygon(P("(y-x)*(y-x^2)"));
    REQUIRE(sides.size() == 2);
    CHECK(sides[0].from == std::make_pair(3L, 0L));
    CHECK(sides[0].to == std::make_pair(1L, 1L));
    CHECK(Rat(sides[0].dv, sides[0].dh) == Rat(1, 2));
    CHECK(sides[1].from == std::make_pair(1L, 1L));
    CHECK(sides[1].to == std::make_pair(0L, 2L));
    CHECK(Rat(sides[1].dv, sides[1].dh) == Rat(1, 1));
}

TEST_CASE("newton polygon of a monomial is empty") {
    auto sides = newton_polygon(P("x*y"));
    CHECK(sides.empty());
    CHECK_THROWS_AS(newton_polygon(P("1+x")), NotVanishingAtOrigin);
}

TEST_CASE("advance_tracked_factors strips x and drops units") {
    NPStep step{AlgNum(1), 1, 0, 1, 1};  // x = x1, y = x1 (1 + y1)
    std::vector<TrackedFactor> S;
    S.push_back({0, 1, P("y-x"), 0});
    S.push_back({1, 1, P("y+x"), 0});
    auto out = advance_tracked_factors(S, step);
    // y - x -> x1 y1, stripped to y1 with beta 1; y + x -> x1 (y1 + 2) whose
    // stripped part is a unit and is dropped
    REQUIRE(out.size() == 1);
    CHECK(out[0].owner == 0);
    CHECK(out[0].beta == 1);
    CHECK(out[0].poly == P("y"));
}

TEST_CASE("expand_product on a constructed product") {
    auto er = expand_product({P("(y-x^2)^3*(y^2-x^3)")}, BiPoly::constant(AlgNum(1)));
    REQUIRE(er.records.size() == 2);
    const BranchRecord* smooth = nullptr;
    const BranchRecord* cusp = nullptr;
    for (auto& r : er.records) {
        if (r.branch.nu == 1) smooth = &r;
        if (r.branch.nu == 2) cusp = &r;
    }
    REQUIRE(smooth != nullptr);
    REQUIRE(cusp != nullptr);
    CHECK(smooth->mults == std::vector<long>{3, 0});
    CHECK(cusp->mults == std::vector<long>{1, 0});
    REQUIRE(!smooth->branch.terms.empty());
    CHECK(smooth->branch.terms[0].first == Rat(2));
    CHECK(cusp->branch.terms[0].first == Rat(3, 2));
    CHECK(coincidence(smooth->branch, cusp->branch) == Rat(3, 2));
}

TEST_CASE("expand_product on two lines") {
    auto er = expand_product({P("y-x"), P("y+x")}, BiPoly::constant(AlgNum(1)));
    REQUIRE(er.records.size() == 2);
    std::vector<std::vector<long>> ms;
    for (auto& r : er.records) ms.push_back(r.mults);
    std::sort(ms.begin(), ms.end());
    CHECK(ms[0] == std::vector<long>{0, 1, 0});
    CHECK(ms[1] == std::vector<long>{1, 0, 0});
    CHECK(er.coin[0][1] == Rat(1));
}

TEST_CASE("expand_product separates branches with deep contact") {
    auto er = expand_product({P("y-x"), P("y-x-x^3")}, BiPoly::constant(AlgNum(1)));
    REQUIRE(er.records.size() == 2);
    CHECK(er.coin[0][1] == Rat(3));
    CHECK(coincidence(er.records[0].branch, er.records[1].branch) == Rat(3));
}

TEST_CASE("coincidence handles conjugates") {
    // y = x^{3/2} against y = x^{3/2} + x^2: max over conjugates is 2
    auto er = expand_product({P("(y^2-x^3)"), P("(y-x^2)^2 - x^3")}, BiPoly::constant(AlgNum(1)));
    REQUIRE(er.records.size() == 2);
    CHECK(er.coin[0][1] == Rat(2));
}

TEST_CASE("coincidence of simple hand-built branches") {
    PuiseuxBranch b1, b2;
    b1.nu = 1;
    b1.terms = {{Rat(2), AlgNum(1)}};
    b1.truncation = Rat(10);
    b2.nu = 1;
    b2.terms = {{Rat(2), AlgNum(-1)}};
    b2.truncation = Rat(10);
    CHECK(coincidence(b1, b2) == Rat(2));
}

TEST_CASE("y-axis and y-branch records") {
    auto er = expand_product({P("x^2*y*(y-x)")}, BiPoly::constant(AlgNum(1)));
    REQUIRE(er.records.size() == 3);
    const BranchRecord* axis = nullptr;
    for (auto& r : er.records)
        if (r.branch.y_axis) axis = &r;
    REQUIRE(axis != nullptr);
    CHECK(axis->mults == std::vector<long>{2, 0});
}

TEST_CASE("per-generator degree bookkeeping") {
    std::vector<BiPoly> gens = {P("(y^2-x^3)*(y-x)^2"), P("y^3+x^5"), P("x^3*(y-x^2)")};
    auto er = expand_product(gens, BiPoly::constant(AlgNum(1)));
    for (size_t k = 0; k < gens.size(); ++k) {
        long alpha = gens[k].ord_x();
        BiPoly h = alpha > 0 ? shift_div_x(gens[k], alpha) : gens[k];
        UniPoly at0 = eval_x0(h);
        long expect = 0;
        while (expect < static_cast<long>(at0.c.size()) && at0.c[expect].is_zero()) ++expect;
        long got = 0;
        for (auto& r : er.records) {
            if (r.branch.y_axis) {
                CHECK(r.mults[k] == alpha);
                continue;
            }
            got += r.branch.nu * r.mults[k];
        }
        CHECK(got == expect);
    }
}

TEST_CASE("re-substitution pushes the order past the truncation") {
    std::vector<BiPoly> gens = {P("(y^2-x^3)*(y-x)"), P("y^2-x^5")};
    auto er = expand_product(gens, BiPoly::constant(AlgNum(1)));
    for (auto& rec : er.records) {
        if (rec.branch.y_axis) continue;
        for (size_t k = 0; k < gens.size(); ++k) {
            long tmax = to_long(rat_floor(rec.branch.truncation * rec.branch.nu)) + rec.branch.nu;
            long ord = subst_order(gens[k], rec.branch, tmax);
            if (rec.mults[k] > 0) {
                CHECK(ord < 0);  // vanishes through the whole truncation
            } else {
                CHECK(ord >= 0);  // stabilizes at the finite contact order
            }
        }
    }
}

TEST_CASE("conjugate classes of one leaf get the aligned contact order") {
    // (y^2 - x^3)^2 - x^7: two conjugate branch classes, each ramified, whose
    // aligned pairs agree through x^2 while anti-aligned pairs split at x^{3/2}
    auto er = expand_product({P("(y^2-x^3)^2-x^7")}, BiPoly::constant(AlgNum(1)));
    REQUIRE(er.records.size() == 2);
    CHECK(er.records[0].branch.nu == 2);
    CHECK(er.records[1].branch.nu == 2);
    CHECK(er.records[0].leaf == er.records[1].leaf);
    CHECK(er.coin[0][1] == Rat(2));
    CHECK(coincidence(er.records[0].branch, er.records[1].branch) == Rat(2));
}

#include <doctest.h>

#include "basept/cli.hpp"
#include "oracle/blowup_oracle.hpp"
#include "support/compare.hpp"
#include "support/golden.hpp"

using namespace basept;
using testsupport::canon;
using testsupport::canon_cluster;
using testsupport::cluster_from_prox;

namespace {

BiPoly P(const std::string& s) { return parse_ideal(s).generators.at(0); }

std::string canon_result(const BasePointsResult& r) {
    return canon_cluster(r.cluster, {r.values});
}

std::string canon_oracle(const oracle::OracleCluster& c) {
    int n = static_cast<int>(c.values.size());
    std::vector<std::vector<long long>> labels(n);
    for (int i = 0; i < n; ++i) labels[i] = {c.values[i]};
    return canon(c.parent, c.parent2, labels);
}

} // namespace

TEST_CASE("maximal ideal has a single base point") {
    auto r = base_points(IdealInput{{P("x"), P("y")}});
    REQUIRE(r.cluster.size() == 1);
    CHECK(r.values == std::vector<long long>{1});
    CHECK(r.mults == std::vector<long long>{1});
}

TEST_CASE("unit ideal yields the empty result") {
    auto r = base_points(IdealInput{{P("1+x"), P("y")}});
    CHECK(r.unit_ideal);
    CHECK(r.cluster.size() == 0);
}

TEST_CASE("principal cusp: base points are its singular cluster") {
    auto r = base_points(IdealInput{{P("y^2-x^3")}});
    REQUIRE(r.cluster.size() == 3);
    CHECK(r.values == std::vector<long long>{2, 3, 6});
    CHECK(r.mults == std::vector<long long>{2, 1, 1});
    CHECK(r.cluster.points[2].is_satellite());
}

TEST_CASE("principal smooth germ has no base points") {
    auto r = base_points(IdealInput{{P("y-x")}});
    CHECK(!r.unit_ideal);
    CHECK(r.cluster.size() == 0);
}

TEST_CASE("common factor recombination") {
    // ((y-x)^2, y (y-x)) = (y-x) * (y-x, y): K = {O} with v' = 1, v_O(g) = 1
    auto r = base_points(IdealInput{{P("(y-x)^2"), P("y*(y-x)")}});
    REQUIRE(r.cluster.size() == 1);
    CHECK(r.values == std::vector<long long>{2});
}

TEST_CASE("min_value_weights on the maximal ideal table") {
    auto er = expand_product({P("x"), P("y")}, BiPoly::constant(AlgNum(1)));
    auto sc = singular_cluster(er, 2);
    auto t = make_value_table(sc);
    auto w = min_value_weights(t);
    REQUIRE(w.cluster.size() == 1);
    CHECK(w.weights == std::vector<long long>{1});
}

TEST_CASE("min_value_weights flags inconsistent tables") {
    ValueTable t;
    t.cluster = cluster_from_prox({{}, {1}});
    t.v_gen = {{1, 0}};  // h_p = 1 > v_p = 0 at the second point
    t.v_fixed = {0, 0};
    CHECK_THROWS_AS(t.recompute_min_h(), InconsistentTable);
}

TEST_CASE("free completion stops when a min achiever misses the branch") {
    // (y - x, y + x): both achieve the minimum at O, no shared branch
    auto er = expand_product({P("y-x"), P("y+x")}, BiPoly::constant(AlgNum(1)));
    auto sc = singular_cluster(er, 2);
    auto t0 = make_value_table(sc);
    auto t1 = complete_free_points(t0);
    CHECK(t1.cluster.size() == t0.cluster.size());
}

TEST_CASE("satellite completion has no candidates on a single point") {
    auto er = expand_product({P("x"), P("y")}, BiPoly::constant(AlgNum(1)));
    auto sc = singular_cluster(er, 2);
    auto t = complete_satellite_points(complete_free_points(make_value_table(sc)));
    CHECK(t.cluster.size() == 3);  // the origin and the two continuations only
}

TEST_CASE("prune keeps all-positive clusters") {
    Cluster c = cluster_from_prox({{}, {1}, {1, 2}});
    auto pr = prune_null_points(c, {2, 3, 6});
    CHECK(pr.cluster.size() == 3);
    CHECK(pr.values == std::vector<long long>{2, 3, 6});
    CHECK(pr.mults == std::vector<long long>{2, 1, 1});
}

TEST_CASE("golden pipeline step by step") {
    IdealInput ideal = parse_ideal(golden::kIdealText);
    auto r = base_points(ideal);

    SUBCASE("step ii: 15 points with the recorded value system") {
        REQUIRE(r.table_kbar.cluster.size() == 15);
        Cluster expect = cluster_from_prox(golden::kbar_prox);
        CHECK(canon_cluster(r.table_kbar.cluster,
                            {r.table_kbar.v_gen[0], r.table_kbar.v_gen[1], r.table_kbar.v_gen[2],
                             r.table_kbar.v_min}) ==
              canon_cluster(expect, {golden::kbar_v1, golden::kbar_v2, golden::kbar_v3,
                                     golden::kbar_vmin}));
    }
    SUBCASE("step iii: exactly two free points") {
        REQUIRE(r.table_kprime.cluster.size() == 17);
        auto prox = golden::kbar_prox;
        for (auto& p : golden::kprime_prox_extra) prox.push_back(p);
        Cluster expect = cluster_from_prox(prox);
        CHECK(canon_cluster(r.table_kprime.cluster,
                            {r.table_kprime.v_gen[0], r.table_kprime.v_gen[1],
                             r.table_kprime.v_gen[2], r.table_kprime.v_min}) ==
              canon_cluster(expect, {golden::kprime_v1, golden::kprime_v2, golden::kprime_v3,
                                     golden::kprime_vmin}));
    }
    SUBCASE("step iv: exactly four satellite points") {
        REQUIRE(r.table_kdprime.cluster.size() == 21);
        auto prox = golden::kbar_prox;
        for (auto& p : golden::kprime_prox_extra) prox.push_back(p);
        for (auto& p : golden::kdprime_prox_extra) prox.push_back(p);
        Cluster expect = cluster_from_prox(prox);
        CHECK(canon_cluster(r.table_kdprime.cluster,
                            {r.table_kdprime.v_gen[0], r.table_kdprime.v_gen[1],
                             r.table_kdprime.v_gen[2], r.table_kdprime.v_min}) ==
              canon_cluster(expect, {golden::kdprime_v1, golden::kdprime_v2, golden::kdprime_v3,
                                     golden::kdprime_vmin}));
    }
    SUBCASE("step v: multiplicities and the pruned 12-point cluster") {
        auto prox = golden::kbar_prox;
        for (auto& p : golden::kprime_prox_extra) prox.push_back(p);
        for (auto& p : golden::kdprime_prox_extra) prox.push_back(p);
        Cluster expect21 = cluster_from_prox(prox);
        CHECK(canon_cluster(r.table_kdprime.cluster, {r.table_kdprime.v_min, r.e_kdprime}) ==
              canon_cluster(expect21, {golden::kdprime_vmin, golden::kdprime_e}));
        REQUIRE(r.cluster.size() == 12);
        Cluster expect = cluster_from_prox(golden::k_prox);
        CHECK(canon_result(r) == canon_cluster(expect, {golden::k_v}));
    }
    SUBCASE("final dual graph") {
        REQUIRE(r.cluster.size() == 12);
        std::vector<std::pair<long long, long long>> edges;
        for (auto& [a, b] : r.graph.edges) {
            long long va = r.values[a], vb = r.values[b];
            edges.emplace_back(std::min(va, vb), std::max(va, vb));
        }
        std::sort(edges.begin(), edges.end());
        auto expect = golden::k_dual_edges_by_value;
        for (auto& [a, b] : expect)
            if (a > b) std::swap(a, b);
        std::sort(expect.begin(), expect.end());
        CHECK(edges == expect);
    }
    SUBCASE("strict consistency of the output") {
        for (auto e : r.mults) CHECK(e > 0);
        auto rho = excesses(WeightedCluster{r.cluster, r.mults, WeightMode::Multiplicities});
        for (auto x : rho) CHECK(x >= 0);
    }
}

TEST_CASE("pipeline agrees with the blow-up oracle") {
    auto check = [&](const std::vector<std::string>& gens, int depth) {
        std::vector<BiPoly> polys;
        for (auto& s : gens) polys.push_back(P(s));
        auto mine = base_points(IdealInput{{polys}});
        auto expect = oracle::oracle_base_points(polys, depth);
        CAPTURE(gens[0]);
        CHECK(canon_result(mine) == canon_oracle(expect));
    };
    check({"x", "y"}, 4);
    check({"y^2-x^3", "x^4"}, 8);
    check({"y^2-x^3", "x*y"}, 6);
    check({"x^2", "y^3"}, 6);
    check({"y^2-x^3", "y^2+x^3"}, 6);
    check({"(y-x)^2", "(y+x)^3"}, 7);
    check({"y^2-2*x^4", "x^3"}, 8);
    check({"x^3-y^7", "y^2"}, 8);
}

TEST_CASE("generator invariance") {
    IdealInput base{{P("y^2-x^3"), P("x*y")}};
    auto r0 = base_points(base);
    SUBCASE("appending a combination changes nothing") {
        IdealInput more = base;
        more.generators.push_back(P("(y^2-x^3)*(1+x) + x*y*(y-2)"));
        auto r1 = base_points(more);
        CHECK(canon_result(r0) == canon_result(r1));
    }
    SUBCASE("unit scaling changes nothing") {
        IdealInput scaled{{P("(y^2-x^3)*(1+x)"), P("x*y")}};
        auto r1 = base_points(scaled);
        CHECK(canon_result(r0) == canon_result(r1));
    }
    SUBCASE("reordering changes nothing") {
        IdealInput swapped{{P("x*y"), P("y^2-x^3")}};
        auto r1 = base_points(swapped);
        CHECK(canon_result(r0) == canon_result(r1));
    }
}

TEST_CASE("values of combinations dominate the generator minimum") {
    // v_p(g1 f1 + g2 f2) >= min(v_p(f1), v_p(f2)) at every tabulated point
    std::vector<BiPoly> gens = {P("y^2-x^3"), P("x*y")};
    BiPoly combo = P("(y^2-x^3)*(y+3) + x*y*(x-y^2)");
    auto tree = oracle::blowup_tree({gens[0], gens[1], combo}, 6);
    for (auto& p : tree.pts) {
        long long vmin = std::min(p.v_gen[0], p.v_gen[1]);
        CHECK(p.v_gen[2] >= vmin);
    }
}

TEST_CASE("oracle agreement on deep satellite structures") {
    auto check = [&](const std::vector<std::string>& gens, int depth) {
        std::vector<BiPoly> polys;
        for (auto& s : gens) polys.push_back(P(s));
        auto mine = base_points(IdealInput{{polys}});
        auto expect = oracle::oracle_base_points(polys, depth);
        int n = static_cast<int>(expect.values.size());
        std::vector<std::vector<long long>> labels(n);
        for (int i = 0; i < n; ++i) labels[i] = {expect.values[i]};
        CAPTURE(gens[0]);
        CHECK(canon_result(mine) == canon(expect.parent, expect.parent2, labels));
    };
    check({"(y^2-x^3)^2-x^7", "x^5"}, 8);
    check({"(y^2-x^3)^2-x^7", "x^2*y^2"}, 8);
    check({"(y-x)^2-x^5", "x^3*(y+x)"}, 8);
    check({"y^4-x^5", "x^3*y"}, 8);
    check({"y^4-2*x^5", "x^4"}, 8);
}

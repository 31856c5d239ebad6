#include <doctest.h>

#include "basept/algebra.hpp"

#include <random>

using namespace basept;

TEST_CASE("adjoin linear root is explicit") {
    UniPoly p("t", {AlgNum(-3), AlgNum(1)});  // t - 3
    auto [tw, root] = adjoin_root(nullptr, p);
    CHECK(tw == nullptr);
    CHECK(root == AlgNum(3));
}

TEST_CASE("adjoin quadratic root") {
    UniPoly p("t", {AlgNum(-2), AlgNum(0), AlgNum(1)});  // t^2 - 2
    auto [tw, a] = adjoin_root(nullptr, p);
    REQUIRE(tw != nullptr);
    CHECK(tw->degree() == 2);
    CHECK((a * a) == AlgNum(2));
    CHECK((a * a - AlgNum(2)).is_zero());
    AlgNum inv = inverse(a);
    CHECK((inv * a) == AlgNum(1));
}

TEST_CASE("two-level tower normal forms") {
    // adjoin i with i^2 = -1, then b with b^2 = i
    auto [t1, i] = adjoin_root(nullptr, UniPoly("t", {AlgNum(1), AlgNum(0), AlgNum(1)}));
    REQUIRE(t1 != nullptr);
    std::vector<AlgNum> mp = {-i, AlgNum(0), AlgNum(1)};
    auto [t2, b] = adjoin_root(t1, UniPoly("u", mp));
    REQUIRE(t2 != nullptr);
    CHECK(t2->depth() == 2);
    CHECK((b * b - i).is_zero());
    CHECK((b * b * b * b + AlgNum(1)).is_zero());  // b^4 = i^2 = -1
    CHECK(t2->dim() == 4);
}

TEST_CASE("adjoin_root rejects non-square-free") {
    UniPoly p("t", {AlgNum(1), AlgNum(2), AlgNum(1)});  // (t+1)^2
    CHECK_THROWS_AS(adjoin_root(nullptr, p), NotSquareFree);
}

TEST_CASE("tower inverse property a * a^-1 == 1") {
    auto [t1, a] = adjoin_root(nullptr, UniPoly("t", {AlgNum(-2), AlgNum(0), AlgNum(1)}));
    std::vector<AlgNum> mp = {AlgNum(-3) * a, AlgNum(0), AlgNum(0), AlgNum(1)};  // u^3 = 3a
    auto [t2, b] = adjoin_root(t1, UniPoly("u", mp));
    std::mt19937 rng(7);
    for (int trial = 0; trial < 25; ++trial) {
        AlgNum x(0);
        for (int i = 0; i < 3; ++i) {
            long c = static_cast<long>(rng() % 7) - 3;
            x = x + AlgNum(c) * pow(b, i) + AlgNum(static_cast<long>(rng() % 5)) * pow(a, i % 2);
        }
        if (x.is_zero()) continue;
        CHECK((x * inverse(x)) == AlgNum(1));
    }
}

TEST_CASE("zero divisor triggers a split with a factored minimal polynomial") {
    // t^2 - 1 is square-free but reducible: inverting (t - 1) must split
    std::vector<AlgNum> mp = {AlgNum(-1), AlgNum(0), AlgNum(1)};
    TowerPtr tw = Tower::extend(nullptr, "t", mp);
    AlgNum t = tw->root();
    AlgNum z = t - AlgNum(1);
    bool split = false;
    try {
        inverse(z);
    } catch (SplitRequest& s) {
        split = true;
        auto [ma, mb] = split_tower(s);
        AlgNum za = apply(ma, z), zb = apply(mb, z);
        bool zero_a = za.is_zero(), zero_b = zb.is_zero();
        CHECK(zero_a != zero_b);
        AlgNum ta = apply(ma, t), tb = apply(mb, t);
        CHECK(ta.is_rational());
        CHECK(tb.is_rational());
        CHECK(((ta == AlgNum(1) && tb == AlgNum(-1)) || (ta == AlgNum(-1) && tb == AlgNum(1))));
    }
    CHECK(split);
}

TEST_CASE("split remaps upper levels") {
    TowerPtr t1 = Tower::extend(nullptr, "t", {AlgNum(-4), AlgNum(0), AlgNum(1)});  // t^2 = 4
    AlgNum t = t1->root();
    TowerPtr t2 = Tower::extend(t1, "u", {-t, AlgNum(0), AlgNum(1)});  // u^2 = t
    AlgNum u = t2->root();
    try {
        inverse(t - AlgNum(2));
        CHECK(false);
    } catch (SplitRequest& s) {
        auto [ma, mb] = split_tower_over(s, t2);
        for (auto* m : {&ma, &mb}) {
            AlgNum uu = apply(*m, u);
            AlgNum tt = apply(*m, t);
            CHECK((uu * uu - tt).is_zero());
        }
    }
}

TEST_CASE("decide_nonzero") {
    CHECK(!decide_nonzero(AlgNum(0)));
    CHECK(decide_nonzero(AlgNum(Rat(3, 7))));
    auto [t1, a] = adjoin_root(nullptr, UniPoly("t", {AlgNum(-2), AlgNum(0), AlgNum(1)}));
    CHECK(decide_nonzero(a - AlgNum(1)));  // sqrt(2) != 1
}

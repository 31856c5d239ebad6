#include "basept/basepoints.hpp"

#include <algorithm>
#include <deque>

namespace basept {

void ValueTable::recompute_min_h() {
    int n = cluster.size();
    int r = num_generators();
    v_min.assign(n, 0);
    for (int i = 0; i < n; ++i) {
        long long mn = 0;
        for (int k = 0; k < r; ++k) mn = (k == 0) ? v_gen[k][i] : std::min(mn, v_gen[k][i]);
        v_min[i] = mn;
    }
    h.assign(n, 0);
    for (int i = 0; i < n; ++i) {
        const Point& p = cluster.points[i];
        if (p.parent) h[i] += v_min[*p.parent];
        if (p.parent2) h[i] += v_min[*p.parent2];
    }
    for (int i = 0; i < n; ++i)
        if (h[i] > v_min[i]) throw InconsistentTable();
}

ValueTable make_value_table(const SingularClusterResult& sc) {
    ValueTable t;
    t.cluster = sc.cluster;
    t.v_gen = sc.v_gen;
    t.v_fixed = sc.v_fixed;
    t.branches.clear();
    for (size_t rec = 0; rec < sc.branches.size(); ++rec) {
        ValueTable::BranchCont bc;
        bc.mults = sc.mults[rec];
        bc.terminal = sc.branches[rec].terminal;
        t.branches.push_back(std::move(bc));
    }
    t.recompute_min_h();
    return t;
}

WeightedCluster min_value_weights(const ValueTable& table) {
    int n = table.cluster.size();
    std::vector<int> newid(n, -1);
    WeightedCluster out;
    out.mode = WeightMode::Values;
    int m = 0;
    for (int i = 0; i < n; ++i) {
        if (table.h[i] >= table.v_min[i]) continue;  // h == v: not a base point
        Point p = table.cluster.points[i];
        if (p.parent) {
            if (newid[*p.parent] < 0) throw InternalError("min_value_weights: not predecessor-closed");
            p.parent = newid[*p.parent];
        }
        if (p.parent2) {
            if (newid[*p.parent2] < 0) throw InternalError("min_value_weights: not predecessor-closed");
            p.parent2 = newid[*p.parent2];
        }
        p.id = m;
        newid[i] = m++;
        out.cluster.points.push_back(p);
        out.weights.push_back(table.v_min[i]);
    }
    return out;
}

ValueTable complete_free_points(const ValueTable& table) {
    ValueTable t = table;
    int r = t.num_generators();
    for (auto& bc : t.branches) {
        if (bc.terminal < 0) continue;
        int p = bc.terminal;
        while (true) {
            bool add = true;
            for (int k = 0; k < r && add; ++k)
                if (t.v_gen[k][p] == t.v_min[p] && bc.mults[k] == 0) add = false;
            if (!add) break;
            Point q;
            q.id = t.cluster.size();
            q.parent = p;
            q.level = t.cluster.points[p].level + 1;
            t.cluster.points.push_back(q);
            for (int k = 0; k < r; ++k) t.v_gen[k].push_back(t.v_gen[k][p] + bc.mults[k]);
            t.v_fixed.push_back(t.v_fixed[p] + bc.mults[r]);
            t.recompute_min_h();
            bc.terminal = q.id;
            p = q.id;
        }
    }
    return t;
}

ValueTable complete_satellite_points(const ValueTable& table) {
    ValueTable t = table;
    int r = t.num_generators();
    auto exists_satellite = [&](int p, int p2) {
        for (auto& q : t.cluster.points)
            if (q.parent && q.parent2 && *q.parent == p && *q.parent2 == p2) return true;
        return false;
    };
    std::deque<std::pair<int, int>> work;  // (p, p') with p proximate to p'
    auto push_pairs = [&](int p) {
        const Point& pt = t.cluster.points[p];
        if (pt.parent) work.emplace_back(p, *pt.parent);
        if (pt.parent2) work.emplace_back(p, *pt.parent2);
    };
    for (int i = 0; i < t.cluster.size(); ++i) push_pairs(i);
    long guard = 0;
    while (!work.empty()) {
        auto [p, p2] = work.front();
        work.pop_front();
        if (exists_satellite(p, p2)) continue;
        bool add = true;
        for (int k = 0; k < r && add; ++k)
            if (t.v_gen[k][p] == t.v_min[p] && t.v_gen[k][p2] == t.v_min[p2]) add = false;
        if (!add) continue;
        Point q;
        q.id = t.cluster.size();
        q.parent = p;
        q.parent2 = p2;
        q.level = t.cluster.points[p].level + 1;
        t.cluster.points.push_back(q);
        for (int k = 0; k < r; ++k) t.v_gen[k].push_back(t.v_gen[k][p] + t.v_gen[k][p2]);
        t.v_fixed.push_back(t.v_fixed[p] + t.v_fixed[p2]);
        t.recompute_min_h();
        push_pairs(q.id);
        if (++guard > 100000) throw InternalError("satellite completion did not terminate");
    }
    return t;
}

PrunedCluster prune_null_points(const Cluster& c, const std::vector<long long>& v) {
    int n = c.size();
    if (static_cast<int>(v.size()) != n) throw DimensionMismatch();
    std::vector<long long> e(n);
    for (int i = 0; i < n; ++i) {
        long long h = 0;
        const Point& p = c.points[i];
        if (p.parent) h += v[*p.parent];
        if (p.parent2) h += v[*p.parent2];
        e[i] = v[i] - h;
        if (e[i] < 0) throw InconsistentTable();
    }
    PrunedCluster out;
    std::vector<int> newid(n, -1);
    for (int i = 0; i < n; ++i) {
        if (e[i] == 0) continue;
        Point p = c.points[i];
        if (p.parent) {
            if (newid[*p.parent] < 0) throw BrokenClosure();
            p.parent = newid[*p.parent];
        }
        if (p.parent2) {
            if (newid[*p.parent2] < 0) throw BrokenClosure();
            p.parent2 = newid[*p.parent2];
        }
        p.id = static_cast<int>(out.cluster.points.size());
        newid[i] = p.id;
        out.cluster.points.push_back(p);
        out.values.push_back(v[i]);
        out.kept.push_back(i);
    }
    // multiplicities restricted to the pruned cluster
    ProximityMatrix P = proximity_matrix(out.cluster);
    WeightedCluster wv{out.cluster, out.values, WeightMode::Values};
    out.mults = base_change(P, wv).weights;
    return out;
}

namespace {

// Indices (into the K-bar cluster) of the singular points of the reduced germ
// of the fixed part.
std::vector<int> fixed_part_singular_points(const SingularClusterResult& sc) {
    int n = sc.cluster.size();
    int r = sc.num_generators;
    std::vector<long long> ered(n, 0);
    std::vector<char> on_eta(n, 0);
    for (size_t rec = 0; rec < sc.branches.size(); ++rec) {
        if (sc.mults[rec][r] == 0) continue;
        for (auto& [p, e] : sc.branches[rec].points) {
            ered[p] += e;
            on_eta[p] = 1;
        }
    }
    std::vector<char> sing(n, 0);
    for (int p = 0; p < n; ++p) {
        if (!on_eta[p]) continue;
        if (ered[p] >= 2) sing[p] = 1;
        if (sc.cluster.points[p].is_satellite()) sing[p] = 1;
    }
    // points preceding a satellite of the fixed-part germ
    for (int p = 0; p < n; ++p) {
        if (!(on_eta[p] && sc.cluster.points[p].is_satellite())) continue;
        std::optional<int> a = sc.cluster.points[p].parent;
        while (a && on_eta[*a]) {
            sing[*a] = 1;
            a = sc.cluster.points[*a].parent;
        }
    }
    std::vector<int> out;
    for (int p = 0; p < n; ++p)
        if (sing[p]) out.push_back(p);
    return out;
}

} // namespace

BasePointsResult base_points(const IdealInput& ideal) {
    BasePointsResult res;
    if (ideal.generators.empty()) throw EmptyIdeal();
    for (auto& a : ideal.generators)
        if (a.is_zero()) throw ZeroGenerator();
    for (auto& a : ideal.generators)
        if (a.ord_origin() == 0) {
            res.unit_ideal = true;  // the ideal is the whole local ring
            return res;
        }

    // step i: a_i = g f_i
    BiPoly g = gcd_many(ideal.generators);
    std::vector<BiPoly> f;
    bool primary_trivial = false;  // a' = (1): principal ideal (g)
    for (auto& a : ideal.generators) {
        BiPoly fi = div_exact(a, g);
        if (fi.is_constant()) primary_trivial = true;
        f.push_back(std::move(fi));
    }

    int r = primary_trivial ? 0 : static_cast<int>(f.size());
    ExpandResult er = primary_trivial ? expand_product({}, g)
                                      : expand_product(f, g.is_constant() ? BiPoly::constant(AlgNum(1)) : g);
    res.sc = singular_cluster(er, r);
    res.table_kbar = make_value_table(res.sc);
    if (r > 0) {
        res.table_kprime = complete_free_points(res.table_kbar);
        res.table_kdprime = complete_satellite_points(res.table_kprime);
    } else {
        res.table_kprime = res.table_kbar;
        res.table_kdprime = res.table_kbar;
    }

    const ValueTable& T = res.table_kdprime;
    int n = T.cluster.size();
    res.e_kdprime.assign(n, 0);
    for (int i = 0; i < n; ++i) res.e_kdprime[i] = T.v_min[i] - T.h[i];

    // steps v-vi: BP(a') by pruning the zero multiplicities
    if (r > 0) {
        res.k = prune_null_points(T.cluster, T.v_min);
    } else {
        res.k = PrunedCluster{};  // BP(a') is empty for a principal ideal
    }

    // step vii: singular points of the reduced fixed-part germ inside K-bar
    res.s_points = g.is_constant() ? std::vector<int>{} : fixed_part_singular_points(res.sc);

    // step viii: B = K union S, beta = v + v(g)
    std::vector<char> in_b(n, 0);
    for (int i : res.k.kept) in_b[i] = 1;
    for (int i : res.s_points) in_b[i] = 1;
    std::vector<int> newid(n, -1);
    for (int i = 0; i < n; ++i) {
        if (!in_b[i]) continue;
        Point p = T.cluster.points[i];
        if (p.parent) {
            if (newid[*p.parent] < 0) throw BrokenClosure();
            p.parent = newid[*p.parent];
        }
        if (p.parent2) {
            if (newid[*p.parent2] < 0) throw BrokenClosure();
            p.parent2 = newid[*p.parent2];
        }
        p.id = static_cast<int>(res.cluster.points.size());
        newid[i] = p.id;
        res.cluster.points.push_back(p);
        res.values.push_back(T.v_min[i] + T.v_fixed[i]);
    }
    if (!res.cluster.points.empty()) {
        ProximityMatrix P = proximity_matrix(res.cluster);
        res.mults = base_change(P, WeightedCluster{res.cluster, res.values, WeightMode::Values}).weights;
        res.graph = dual_graph(res.cluster, res.values);
    }
    return res;
}

} // namespace basept

#include "basept/cluster.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace basept {

ProximityMatrix proximity_matrix(const Cluster& c) {
    int n = c.size();
    for (int i = 0; i < n; ++i) {
        const Point& p = c.points[i];
        if (p.parent && *p.parent >= i) throw UnorderedCluster();
        if (p.parent2 && (*p.parent2 >= i || !p.parent)) throw UnorderedCluster();
    }
    ProximityMatrix P;
    P.p.assign(n, std::vector<int>(n, 0));
    for (int i = 0; i < n; ++i) {
        P.p[i][i] = 1;
        const Point& pt = c.points[i];
        if (pt.parent) P.p[i][*pt.parent] = -1;
        if (pt.parent2) P.p[i][*pt.parent2] = -1;
    }
    return P;
}

WeightedCluster base_change(const ProximityMatrix& P, const WeightedCluster& w) {
    int n = P.size();
    if (static_cast<int>(w.weights.size()) != n || w.cluster.size() != n) throw DimensionMismatch();
    WeightedCluster out = w;
    if (w.mode == WeightMode::Values) {
        // e = P v
        out.weights.assign(n, 0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j <= i; ++j) out.weights[i] += P.p[i][j] * w.weights[j];
        out.mode = WeightMode::Multiplicities;
    } else {
        // v = P^{-1} e by forward substitution: v_i = e_i + sum over proximities
        out.weights.assign(n, 0);
        for (int i = 0; i < n; ++i) {
            long long v = w.weights[i];
            for (int j = 0; j < i; ++j)
                if (P.p[i][j] == -1) v += out.weights[j];
            out.weights[i] = v;
        }
        out.mode = WeightMode::Values;
    }
    return out;
}

std::vector<std::vector<long long>> intersection_matrix(const ProximityMatrix& P) {
    int n = P.size();
    std::vector<std::vector<long long>> N(n, std::vector<long long>(n, 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            long long s = 0;
            for (int k = 0; k < n; ++k) s += static_cast<long long>(P.p[k][i]) * P.p[k][j];
            N[i][j] = -s;
        }
    return N;
}

std::vector<long long> excesses(const WeightedCluster& w) {
    if (w.mode != WeightMode::Multiplicities)
        throw InternalError("excesses: expected multiplicities mode");
    int n = w.cluster.size();
    std::vector<long long> rho = w.weights;
    for (int i = 0; i < n; ++i) {
        const Point& pt = w.cluster.points[i];
        if (pt.parent) rho[*pt.parent] -= w.weights[i];
        if (pt.parent2) rho[*pt.parent2] -= w.weights[i];
    }
    return rho;
}

DualGraph dual_graph(const Cluster& c, const std::vector<long long>& labels) {
    int n = c.size();
    if (static_cast<int>(labels.size()) != n) throw DimensionMismatch();
    DualGraph g;
    g.labels = labels;
    auto proximate = [&](int q, int p) {
        return (c.points[q].parent && *c.points[q].parent == p) ||
               (c.points[q].parent2 && *c.points[q].parent2 == p);
    };
    for (int q = 0; q < n; ++q)
        for (int p = 0; p < q; ++p) {
            if (!proximate(q, p)) continue;
            bool cut = false;
            for (int s = q + 1; s < n && !cut; ++s) cut = proximate(s, p) && proximate(s, q);
            if (!cut) g.edges.emplace_back(p, q);
        }
    return g;
}

std::string to_dot(const DualGraph& g) {
    std::ostringstream os;
    os << "graph {\n";
    for (size_t i = 0; i < g.labels.size(); ++i)
        os << "  n" << (i + 1) << " [label=\"" << g.labels[i] << "\"];\n";
    for (auto& [a, b] : g.edges) os << "  n" << (a + 1) << " -- n" << (b + 1) << ";\n";
    os << "}\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// singular_cluster: merge branch chains into the cluster of the reduced germ
// ---------------------------------------------------------------------------

namespace {

constexpr long kBigHorizonNum = 1L << 20;

struct WCursor {
    int rec = -1;
    bool axis = false;       // the x = 0 branch before its first swap
    std::vector<Rat> E;      // local exponent window, ascending
    bool tail_exact = false; // E is the complete remaining support
    Rat horizon{0};
    long nutilde = 1;
};

enum class Dir { Steep, Free1, DInf };

Dir classify(const WCursor& c) {
    if (c.axis) return Dir::Steep;
    if (c.E.empty()) return Dir::DInf;  // exact zero tail or free integral tail
    if (c.E[0] < 1) return Dir::Steep;
    if (c.E[0] == 1) return Dir::Free1;
    return Dir::DInf;
}

long long cursor_e(const WCursor& c) {
    if (c.axis) return 1;
    if (c.E.empty() || c.E[0] >= 1) return c.nutilde;
    Rat e = Rat(c.nutilde) * c.E[0];
    if (!is_integer(e)) throw InternalError("cursor multiplicity is not an integer");
    return to_long(e.get_num());
}

// Inverted-and-shifted support window after a swap move at lead L.
std::vector<Rat> invert_window(const std::vector<Rat>& E, const Rat& L, const Rat& new_horizon) {
    Rat base = Rat(1) / L - 1;
    std::vector<Rat> offs;
    for (size_t i = 1; i < E.size(); ++i) offs.push_back((E[i] - L) / L);
    std::set<Rat> sums{Rat(0)};
    // closure of nonnegative integer combinations, bounded
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<Rat> add;
        for (auto& s : sums)
            for (auto& o : offs) {
                Rat t = s + o;
                if (base + t > new_horizon) continue;
                if (!sums.count(t)) add.push_back(t);
            }
        for (auto& t : add)
            if (sums.insert(t).second) grew = true;
    }
    std::vector<Rat> out;
    for (auto& s : sums) {
        Rat v = base + s;
        if (v > 0 && v <= new_horizon) out.push_back(v);
    }
    std::sort(out.begin(), out.end());
    return out;
}

struct WalkOutput {
    std::vector<Point> pts;
    std::vector<std::vector<std::pair<int, long long>>> e_at;  // per point: (rec, e)
    std::vector<std::vector<int>> chain;                       // per record: point ids in order
};

struct Walker {
    const std::vector<std::vector<Rat>>* coin = nullptr;
    WalkOutput out;

    int new_point(std::optional<int> parent, std::optional<int> parent2) {
        Point p;
        p.id = static_cast<int>(out.pts.size());
        p.parent = parent;
        p.parent2 = parent2;
        p.level = parent ? out.pts[*parent].level + 1 : 0;
        out.pts.push_back(p);
        out.e_at.emplace_back();
        return p.id;
    }

    void record(int pt, const std::vector<WCursor>& cs) {
        for (auto& c : cs) {
            out.e_at[pt].emplace_back(c.rec, cursor_e(c));
            out.chain[c.rec].push_back(pt);
        }
    }

    // chi is indexed parallel to cs.
    void visit(int pt, std::vector<WCursor> cs, std::vector<std::vector<Rat>> chi) {
        record(pt, cs);
        const Point here = out.pts[pt];

        if (cs.size() == 1) {
            WCursor& c = cs[0];
            bool tangent = false;
            if (!c.axis && !c.E.empty() && c.E[0] > 1 && here.parent2) tangent = true;
            if (!c.axis && c.nutilde == 1 && !tangent) {
                // everything ahead is a free simple point: materialize one
                int q = new_point(pt, std::nullopt);
                out.e_at[q].emplace_back(c.rec, 1);
                out.chain[c.rec].push_back(q);
                return;
            }
        }
        for (auto& c : cs)
            if (!c.axis && c.E.empty() && !c.tail_exact && c.nutilde > 1)
                throw InternalError("singular_cluster: support window exhausted");

        // partition into groups sharing the next point
        int n = static_cast<int>(cs.size());
        std::vector<int> comp(n);
        std::iota(comp.begin(), comp.end(), 0);
        std::function<int(int)> find = [&](int x) { return comp[x] == x ? x : comp[x] = find(comp[x]); };
        auto unite = [&](int a, int b) { comp[find(a)] = find(b); };
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                Dir di = classify(cs[i]), dj = classify(cs[j]);
                if (di == Dir::Steep && dj == Dir::Steep) { unite(i, j); continue; }
                if (di != Dir::Steep && dj != Dir::Steep && chi[i][j] > 1) unite(i, j);
            }
        std::map<int, std::vector<int>> groups;  // root -> member indices
        for (int i = 0; i < n; ++i) groups[find(i)].push_back(i);
        std::vector<std::vector<int>> ordered;
        for (auto& [root, members] : groups) ordered.push_back(members);
        std::sort(ordered.begin(), ordered.end(), [&](auto& a, auto& b) {
            return cs[*std::min_element(a.begin(), a.end(), [&](int x, int y) { return cs[x].rec < cs[y].rec; })].rec <
                   cs[*std::min_element(b.begin(), b.end(), [&](int x, int y) { return cs[x].rec < cs[y].rec; })].rec;
        });

        for (auto& members : ordered) {
            Dir d = classify(cs[members[0]]);
            const bool steep = (d == Dir::Steep);

            std::optional<int> par2;
            if (steep) {
                if (here.parent) par2 = *here.parent;  // corner with the previous exceptional
            } else if (d == Dir::DInf && here.parent2) {
                par2 = *here.parent2;                  // tangent to the older exceptional axis
            }
            int child = new_point(pt, par2);

            // move the cursors
            std::vector<WCursor> sub;
            for (int m : members) sub.push_back(cs[m]);
            std::vector<std::vector<Rat>> schi(sub.size(), std::vector<Rat>(sub.size(), Rat(0)));
            for (size_t a = 0; a < sub.size(); ++a)
                for (size_t b = a + 1; b < sub.size(); ++b)
                    schi[a][b] = schi[b][a] = chi[members[a]][members[b]];

            if (!steep) {
                for (auto& c : sub) {
                    if (c.E.empty()) continue;  // zero tail stays zero
                    if (d == Dir::Free1 && c.E[0] == 1) c.E.erase(c.E.begin());
                    for (auto& e : c.E) e -= 1;
                    c.horizon -= 1;
                }
                for (auto& row : schi)
                    for (auto& v : row) v -= 1;
            } else {
                // swap move: invert every cursor
                std::vector<Rat> lead(sub.size(), Rat(0));  // 0 encodes the axis curve
                for (size_t a = 0; a < sub.size(); ++a)
                    if (!sub[a].axis) lead[a] = sub[a].E.empty() ? Rat(-1) : sub[a].E[0];
                for (size_t a = 0; a < sub.size(); ++a)
                    for (size_t b = a + 1; b < sub.size(); ++b) {
                        Rat v;
                        if (sub[a].axis || sub[b].axis) {
                            const Rat& other = sub[a].axis ? lead[b] : lead[a];
                            v = Rat(1) / other - 1;
                        } else if (lead[a] == lead[b]) {
                            v = (schi[a][b] - lead[a] + 1) / lead[a] - 1;
                        } else {
                            v = Rat(1) / std::max(lead[a], lead[b]) - 1;
                        }
                        schi[a][b] = schi[b][a] = v;
                    }
                for (auto& c : sub) {
                    if (c.axis) {
                        // the axis curve becomes the zero series of the new frame
                        c.axis = false;
                        c.E.clear();
                        c.tail_exact = true;
                        c.nutilde = 1;
                        c.horizon = Rat(kBigHorizonNum);
                        continue;
                    }
                    Rat L = c.E[0];
                    // a one-term exact series inverts to a one-term series
                    bool exact1 = c.tail_exact && c.E.size() == 1;
                    Rat nh = exact1 ? Rat(kBigHorizonNum) : (c.horizon - L + 1) / L - 1;
                    c.E = invert_window(c.E, L, nh);
                    c.horizon = nh;
                    Rat nt = Rat(c.nutilde) * L;
                    if (!is_integer(nt)) throw InternalError("swap: non-integral polydromy");
                    c.nutilde = to_long(nt.get_num());
                    c.tail_exact = exact1;
                }
            }
            visit(child, std::move(sub), std::move(schi));
        }
    }
};

} // namespace

SingularClusterResult singular_cluster(const ExpandResult& branches, int num_generators) {
    SingularClusterResult res;
    res.num_generators = num_generators;
    int nrec = static_cast<int>(branches.records.size());
    for (auto& rec : branches.records) res.mults.push_back(rec.mults);
    if (nrec == 0) return res;

    Walker w;
    w.coin = &branches.coin;
    w.out.chain.assign(nrec, {});
    std::vector<WCursor> cs(nrec);
    for (int i = 0; i < nrec; ++i) {
        cs[i].rec = i;
        const PuiseuxBranch& b = branches.records[i].branch;
        if (b.y_axis) {
            cs[i].axis = true;
            continue;
        }
        for (auto& [e, c] : b.terms) cs[i].E.push_back(e);
        cs[i].horizon = b.truncation;
        cs[i].nutilde = b.nu;
        cs[i].tail_exact = branches.records[i].exact;
    }
    std::vector<std::vector<Rat>> chi(nrec, std::vector<Rat>(nrec, Rat(0)));
    for (int i = 0; i < nrec; ++i)
        for (int j = 0; j < nrec; ++j)
            if (i != j) chi[i][j] = branches.coin[i][j];

    int origin = w.new_point(std::nullopt, std::nullopt);
    w.visit(origin, cs, chi);

    // ---- singularity flags ----
    int m = static_cast<int>(w.out.pts.size());
    std::vector<char> singular(m, 0);
    for (int p = 0; p < m; ++p) {
        long long ered = 0;
        for (auto& [r, e] : w.out.e_at[p]) ered += e;
        if (ered >= 2) singular[p] = 1;
        if (w.out.pts[p].is_satellite()) singular[p] = 1;
    }
    // points preceding a satellite on the germ
    for (int p = 0; p < m; ++p) {
        if (!w.out.pts[p].is_satellite()) continue;
        std::optional<int> a = w.out.pts[p].parent;
        while (a) {
            singular[*a] = 1;
            a = w.out.pts[*a].parent;
        }
        // the second parent chain is covered through the first parents
    }

    // ---- keep set: singular points plus one continuation per branch ----
    std::vector<char> keep(m, 0);
    for (int rec = 0; rec < nrec; ++rec) {
        const auto& ch = w.out.chain[rec];
        int last_sing = -1;
        for (size_t i = 0; i < ch.size(); ++i)
            if (singular[ch[i]]) last_sing = static_cast<int>(i);
        if (last_sing < 0) continue;
        size_t upto = std::min(ch.size() - 1, static_cast<size_t>(last_sing + 1));
        for (size_t i = 0; i <= upto; ++i) keep[ch[i]] = 1;
    }

    // ---- assemble, reindexing in creation order ----
    std::vector<int> newid(m, -1);
    int n = 0;
    for (int p = 0; p < m; ++p)
        if (keep[p]) newid[p] = n++;
    res.cluster.points.clear();
    res.singular.assign(n, false);
    for (int p = 0; p < m; ++p) {
        if (!keep[p]) continue;
        Point q = w.out.pts[p];
        q.id = newid[p];
        if (q.parent) {
            if (newid[*q.parent] < 0) throw BrokenClosure();
            q.parent = newid[*q.parent];
        }
        if (q.parent2) {
            if (newid[*q.parent2] < 0) throw BrokenClosure();
            q.parent2 = newid[*q.parent2];
        }
        res.cluster.points.push_back(q);
        res.singular[newid[p]] = singular[p] != 0;
    }

    // ---- values ----
    int r = num_generators;
    std::vector<std::vector<long long>> e_gen(r, std::vector<long long>(n, 0));
    std::vector<long long> e_fixed(n, 0);
    for (int p = 0; p < m; ++p) {
        if (!keep[p]) continue;
        for (auto& [rec, e] : w.out.e_at[p]) {
            for (int k = 0; k < r; ++k)
                if (res.mults[rec][k] > 0) e_gen[k][newid[p]] += res.mults[rec][k] * e;
            if (res.mults[rec][r] > 0) e_fixed[newid[p]] += res.mults[rec][r] * e;
        }
    }
    auto to_values = [&](std::vector<long long> e) {
        std::vector<long long> v = std::move(e);
        for (int i = 0; i < n; ++i) {
            const Point& pt = res.cluster.points[i];
            if (pt.parent) v[i] += v[*pt.parent];
            if (pt.parent2) v[i] += v[*pt.parent2];
        }
        return v;
    };
    res.v_gen.clear();
    for (int k = 0; k < r; ++k) res.v_gen.push_back(to_values(e_gen[k]));
    res.v_fixed = to_values(e_fixed);
    res.v_min.assign(n, 0);
    for (int i = 0; i < n; ++i) {
        long long mn = 0;
        for (int k = 0; k < r; ++k) mn = (k == 0) ? res.v_gen[k][i] : std::min(mn, res.v_gen[k][i]);
        res.v_min[i] = mn;
    }

    // ---- branch incidence ----
    res.branches.assign(nrec, {});
    for (int rec = 0; rec < nrec; ++rec) {
        for (int p : w.out.chain[rec]) {
            if (!keep[p]) continue;
            long long e = 0;
            for (auto& [rr, ee] : w.out.e_at[p])
                if (rr == rec) e = ee;
            res.branches[rec].points.emplace_back(newid[p], e);
            res.branches[rec].terminal = newid[p];
        }
    }
    return res;
}

} // namespace basept

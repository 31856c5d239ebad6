// The base-points pipeline: value tables on the singular cluster, the free
// and satellite completion passes, zero-multiplicity pruning, and the full
// computation of BP(a) with its intermediate stages kept for auditing.
#pragma once

#include "basept/cluster.hpp"

namespace basept {

struct IdealInput {
    std::vector<BiPoly> generators;
};

struct ValueTable {
    Cluster cluster;
    std::vector<std::vector<long long>> v_gen;  // [generator][point]
    std::vector<long long> v_fixed;             // v_p(g)
    std::vector<long long> v_min;               // min over generators
    std::vector<long long> h;                   // sum of v_min over proximities

    // continuation data per branch for the free-point walk
    struct BranchCont {
        std::vector<long> mults;  // size r+1
        int terminal = -1;        // last cluster point on the branch (-1: none)
    };
    std::vector<BranchCont> branches;

    int num_generators() const { return static_cast<int>(v_gen.size()); }
    void recompute_min_h();
};

ValueTable make_value_table(const SingularClusterResult& sc);

// The subcluster {p : h_p < v_p} weighted by the minimal values.  Throws
// InconsistentTable if h_p > v_p anywhere.
WeightedCluster min_value_weights(const ValueTable& table);

// Appends the missing free base points along branch continuations.
ValueTable complete_free_points(const ValueTable& table);

// Appends the missing satellite base points by fixpoint over proximity pairs.
ValueTable complete_satellite_points(const ValueTable& table);

struct PrunedCluster {
    Cluster cluster;
    std::vector<long long> values;
    std::vector<long long> mults;
    std::vector<int> kept;  // indices into the input cluster
};

// Removes the points with multiplicity v_p - h_p == 0.
PrunedCluster prune_null_points(const Cluster& c, const std::vector<long long>& v);

struct BasePointsResult {
    bool unit_ideal = false;     // some generator is a unit at the origin
    Cluster cluster;             // B = K union S
    std::vector<long long> values;  // beta
    std::vector<long long> mults;   // base change of beta on B
    DualGraph graph;

    // audit trail of Algorithm steps
    SingularClusterResult sc;     // step ii cluster (K-bar) with its tables
    ValueTable table_kbar;        // step ii
    ValueTable table_kprime;      // step iii
    ValueTable table_kdprime;     // step iv
    std::vector<long long> e_kdprime;  // step v multiplicities before pruning
    PrunedCluster k;              // BP(a') = K with its values
    std::vector<int> s_points;    // indices into K'' of S(eta_red)
};

BasePointsResult base_points(const IdealInput& ideal);

} // namespace basept

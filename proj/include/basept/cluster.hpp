// Clusters of infinitely near points: proximity and intersection matrices,
// value/multiplicity base change, excesses, dual graphs, and construction of
// the singular cluster of a reduced germ from branch records.
#pragma once

#include "basept/puiseux.hpp"

#include <optional>
#include <string>
#include <vector>

namespace basept {

struct Point {
    int id = 0;                      // creation index
    std::optional<int> parent;       // the point whose exceptional divisor carries this one
    std::optional<int> parent2;      // second proximity; present iff satellite
    int level = 0;                   // order of neighborhood
    bool is_free() const { return parent.has_value() && !parent2.has_value(); }
    bool is_satellite() const { return parent2.has_value(); }
};

struct Cluster {
    std::vector<Point> points;  // closed under predecessors, parents first
    int size() const { return static_cast<int>(points.size()); }
};

enum class WeightMode { Values, Multiplicities };

struct WeightedCluster {
    Cluster cluster;
    std::vector<long long> weights;
    WeightMode mode = WeightMode::Values;
};

struct ProximityMatrix {
    // Lower triangular; diagonal 1, entry -1 where row point is proximate to
    // the column point.
    std::vector<std::vector<int>> p;
    int size() const { return static_cast<int>(p.size()); }
};

struct DualGraph {
    std::vector<long long> labels;             // per node, in point order
    std::vector<std::pair<int, int>> edges;    // (i, j), i < j, point indices
};

ProximityMatrix proximity_matrix(const Cluster& c);
WeightedCluster base_change(const ProximityMatrix& p, const WeightedCluster& w);
std::vector<std::vector<long long>> intersection_matrix(const ProximityMatrix& p);
std::vector<long long> excesses(const WeightedCluster& w);  // multiplicities mode
DualGraph dual_graph(const Cluster& c, const std::vector<long long>& labels);
std::string to_dot(const DualGraph& g);

// The singular cluster of the reduced product germ built from branch records,
// with one extra free point per branch kept as continuation data.
struct SingularClusterResult {
    Cluster cluster;
    std::vector<bool> singular;                       // per point: singular for the reduced germ
    std::vector<std::vector<long long>> v_gen;        // [generator][point]
    std::vector<long long> v_fixed;                   // v_p(g)
    std::vector<long long> v_min;                     // min over generators
    // branch incidence: per record, (point index, e_p) along its chain, and
    // the index of its last materialized (continuation) point
    struct Incidence {
        std::vector<std::pair<int, long long>> points;
        int terminal = -1;
    };
    std::vector<Incidence> branches;
    std::vector<std::vector<long>> mults;             // copied from the records
    int num_generators = 0;
};

SingularClusterResult singular_cluster(const ExpandResult& branches, int num_generators);

} // namespace basept

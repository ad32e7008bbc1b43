#pragma once

#include "rbhs/graph.hpp"

#include <memory>
#include <vector>

namespace rbhs
{
    enum class Side
    {
        Left,
        Right
    };

    // Pair of exploration walks over an st-ordering. pi_left starts at v_1 and
    // reaches every v_j through nodes of rank <= j; pi_right starts at v_n and
    // reaches every v_j through nodes of rank >= j (the homebase is the one
    // exception: it may serve as a relay on the right walk).
    //
    // left_mark[k] / right_mark[k] hold the position of v_k's first arrival in
    // the respective walk. Subwalks pi[v_i, v_j] are the stretches between
    // marks. On the right walk the homebase mark is the final position, since a
    // relay through the homebase does not count as reaching v_1.
    struct TraversalPair
    {
        std::shared_ptr<const Graph> graph;
        Ordering ordering;
        std::vector<NodeId> pi_left;
        std::vector<NodeId> pi_right;
        std::vector<int> left_mark;  // indexed by rank, entry 0 unused
        std::vector<int> right_mark; // indexed by rank, entry 0 unused
        int size = 0;   // max walk length in edges
        int radius = 0; // max constrained homebase distance

        int node_count() const noexcept { return ordering.size(); }
        NodeId homebase() const { return ordering.homebase(); }
        NodeId node(Rank k) const { return ordering.at(k); }
        Rank rank(NodeId v) const { return ordering.rank(v); }
        const Graph &g() const { return *graph; }
    };

    struct Interval
    {
        Rank lo = 1;
        Rank hi = 1;
        int weight = 0;

        int count() const noexcept { return hi - lo + 1; }
        bool contains(Rank k) const noexcept { return lo <= k && k <= hi; }
        friend bool operator==(const Interval &, const Interval &) = default;
    };

    struct IntervalPartition
    {
        std::vector<Interval> intervals;

        int size() const noexcept { return static_cast<int>(intervals.size()); }
        // 0-based index of the interval holding rank k.
        int index_of(Rank k) const;
    };

    // Throws InvalidOrdering when `o` is not an st-ordering of `g`.
    TraversalPair build_traversal_pair(std::shared_ptr<const Graph> g, const Ordering &o);

    // Replaces every consecutive subwalk longer than 2*radius by a detour
    // through the homebase. Idempotent.
    TraversalPair normalize_property1(const TraversalPair &tp);

    // Convenience: build + normalize with the default ordering.
    TraversalPair make_traversal_pair(std::shared_ptr<const Graph> g);

    // |pi_left[v_lo, v_hi]| + |pi_right[v_lo, v_hi]|; throws IndexError.
    int interval_weight(const TraversalPair &tp, Rank lo, Rank hi);

    // Greedy left-to-right cover: close an interval as soon as its weight
    // reaches 2*radius.
    IntervalPartition partition_viable(const TraversalPair &tp);

    // Shortest homebase -> target path using only ranks in [1, rank(target)]
    // (Left) or [rank(target), n] plus the homebase (Right). Includes both ends.
    std::vector<NodeId> access_path(const TraversalPair &tp, NodeId target, Side side);

    // Subwalk of pi_left from v_from to v_to (from <= to) or of pi_right from
    // v_from to v_to (from >= to), including both ends.
    std::vector<NodeId> subwalk(const TraversalPair &tp, Side side, Rank from, Rank to);

    // Constrained homebase distances r_u(w) / r_v(w) by BFS; used for radius.
    int constrained_distance(const TraversalPair &tp, NodeId target, Side side);
}

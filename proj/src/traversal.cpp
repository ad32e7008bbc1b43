#include "rbhs/traversal.hpp"

#include "rbhs/error.hpp"

#include <algorithm>

namespace rbhs
{
    namespace
    {
        std::vector<bool> rank_window(const TraversalPair &tp, Rank lo, Rank hi, bool with_homebase)
        {
            std::vector<bool> allowed(static_cast<std::size_t>(tp.node_count()), false);
            for (Rank k = lo; k <= hi; ++k)
            {
                allowed[tp.node(k)] = true;
            }
            if (with_homebase)
            {
                allowed[tp.homebase()] = true;
            }
            return allowed;
        }

        std::vector<NodeId> window_path(const TraversalPair &tp, NodeId from, NodeId to, Rank lo, Rank hi,
                                        bool with_homebase)
        {
            auto path = shortest_path(tp.g(), from, to, rank_window(tp, lo, hi, with_homebase));
            if (path.empty())
            {
                throw Error(ErrorCode::InvalidOrdering, "ordering window is disconnected");
            }
            return path;
        }

        // Hop i of the left walk runs from v_i to v_{i+1}; hop i of the right walk
        // runs from v_{i+1} to v_i. Both indexed 1..n-1.
        struct Hops
        {
            std::vector<std::vector<NodeId>> left;
            std::vector<std::vector<NodeId>> right;
        };

        Hops split_hops(const TraversalPair &tp)
        {
            const int n = tp.node_count();
            Hops hops;
            hops.left.resize(n);
            hops.right.resize(n);
            for (Rank i = 1; i < n; ++i)
            {
                hops.left[i].assign(tp.pi_left.begin() + tp.left_mark[i], tp.pi_left.begin() + tp.left_mark[i + 1] + 1);
                hops.right[i].assign(tp.pi_right.begin() + tp.right_mark[i + 1],
                                     tp.pi_right.begin() + tp.right_mark[i] + 1);
            }
            return hops;
        }

        void assemble(TraversalPair &tp, const Hops &hops)
        {
            const int n = tp.node_count();
            tp.pi_left.assign(1, tp.node(1));
            tp.left_mark.assign(n + 1, 0);
            for (Rank i = 1; i < n; ++i)
            {
                tp.pi_left.insert(tp.pi_left.end(), hops.left[i].begin() + 1, hops.left[i].end());
                tp.left_mark[i + 1] = static_cast<int>(tp.pi_left.size()) - 1;
            }
            tp.pi_right.assign(1, tp.node(n));
            tp.right_mark.assign(n + 1, 0);
            for (Rank i = n - 1; i >= 1; --i)
            {
                tp.pi_right.insert(tp.pi_right.end(), hops.right[i].begin() + 1, hops.right[i].end());
                tp.right_mark[i] = static_cast<int>(tp.pi_right.size()) - 1;
            }
            tp.size = static_cast<int>(std::max(tp.pi_left.size(), tp.pi_right.size())) - 1;
        }
    }

    int IntervalPartition::index_of(Rank k) const
    {
        for (int i = 0; i < size(); ++i)
        {
            if (intervals[i].contains(k))
            {
                return i;
            }
        }
        throw Error(ErrorCode::IndexError, "rank not covered by partition");
    }

    int constrained_distance(const TraversalPair &tp, NodeId target, Side side)
    {
        return static_cast<int>(access_path(tp, target, side).size()) - 1;
    }

    TraversalPair build_traversal_pair(std::shared_ptr<const Graph> g, const Ordering &o)
    {
        if (!is_valid_ordering(*g, o))
        {
            throw Error(ErrorCode::InvalidOrdering, "ordering is not an st-ordering of the graph");
        }
        TraversalPair tp;
        tp.graph = std::move(g);
        tp.ordering = o;
        const int n = o.size();

        Hops hops;
        hops.left.resize(n);
        hops.right.resize(n);
        for (Rank i = 1; i < n; ++i)
        {
            hops.left[i] = window_path(tp, tp.node(i), tp.node(i + 1), 1, i + 1, false);
            hops.right[i] = window_path(tp, tp.node(i + 1), tp.node(i), i, n, false);
        }
        assemble(tp, hops);

        int radius = 0;
        for (Rank k = 1; k <= n; ++k)
        {
            radius = std::max(radius, constrained_distance(tp, tp.node(k), Side::Left));
            radius = std::max(radius, constrained_distance(tp, tp.node(k), Side::Right));
        }
        tp.radius = radius;
        return tp;
    }

    TraversalPair normalize_property1(const TraversalPair &tp)
    {
        const int n = tp.node_count();
        const int bound = 2 * tp.radius;
        Hops hops = split_hops(tp);
        for (Rank i = 1; i < n; ++i)
        {
            if (static_cast<int>(hops.left[i].size()) - 1 > bound)
            {
                auto back = access_path(tp, tp.node(i), Side::Left);
                std::reverse(back.begin(), back.end());
                const auto out = access_path(tp, tp.node(i + 1), Side::Left);
                back.insert(back.end(), out.begin() + 1, out.end());
                hops.left[i] = std::move(back);
            }
            if (static_cast<int>(hops.right[i].size()) - 1 > bound)
            {
                auto back = access_path(tp, tp.node(i + 1), Side::Right);
                std::reverse(back.begin(), back.end());
                const auto out = access_path(tp, tp.node(i), Side::Right);
                back.insert(back.end(), out.begin() + 1, out.end());
                hops.right[i] = std::move(back);
            }
        }
        TraversalPair out = tp;
        assemble(out, hops);
        return out;
    }

    TraversalPair make_traversal_pair(std::shared_ptr<const Graph> g)
    {
        const Ordering o = default_ordering(*g);
        return normalize_property1(build_traversal_pair(std::move(g), o));
    }

    int interval_weight(const TraversalPair &tp, Rank lo, Rank hi)
    {
        if (lo < 1 || hi > tp.node_count() || lo > hi)
        {
            throw Error(ErrorCode::IndexError, "interval [" + std::to_string(lo) + "," + std::to_string(hi) + "]");
        }
        return (tp.left_mark[hi] - tp.left_mark[lo]) + (tp.right_mark[lo] - tp.right_mark[hi]);
    }

    IntervalPartition partition_viable(const TraversalPair &tp)
    {
        const int n = tp.node_count();
        IntervalPartition part;
        Rank lo = 1;
        for (Rank k = 1; k <= n; ++k)
        {
            const int w = interval_weight(tp, lo, k);
            if (w >= 2 * tp.radius || k == n)
            {
                part.intervals.push_back(Interval{lo, k, w});
                lo = k + 1;
            }
        }
        return part;
    }

    std::vector<NodeId> access_path(const TraversalPair &tp, NodeId target, Side side)
    {
        const Rank k = tp.rank(target);
        if (side == Side::Left)
        {
            return window_path(tp, tp.homebase(), target, 1, k, false);
        }
        return window_path(tp, tp.homebase(), target, k, tp.node_count(), true);
    }

    std::vector<NodeId> subwalk(const TraversalPair &tp, Side side, Rank from, Rank to)
    {
        const int n = tp.node_count();
        if (from < 1 || to < 1 || from > n || to > n)
        {
            throw Error(ErrorCode::IndexError, "subwalk rank out of range");
        }
        if (side == Side::Left)
        {
            if (from > to)
            {
                throw Error(ErrorCode::IndexError, "left subwalk runs upwards");
            }
            return {tp.pi_left.begin() + tp.left_mark[from], tp.pi_left.begin() + tp.left_mark[to] + 1};
        }
        if (from < to)
        {
            throw Error(ErrorCode::IndexError, "right subwalk runs downwards");
        }
        return {tp.pi_right.begin() + tp.right_mark[from], tp.pi_right.begin() + tp.right_mark[to] + 1};
    }
}

#include "rbhs/error.hpp"
#include "rbhs/suite.hpp"
#include "rbhs/traversal.hpp"

#include <doctest.h>

#include <memory>
#include <string>

using namespace rbhs;

namespace
{
    TraversalPair pair_of(const std::string &spec, std::uint64_t seed = 0)
    {
        return make_traversal_pair(std::make_shared<const Graph>(generate_graph(spec, seed)));
    }

    std::vector<NodeId> ranks_to_nodes(const TraversalPair &tp, std::initializer_list<Rank> ranks)
    {
        std::vector<NodeId> nodes;
        for (Rank k : ranks)
        {
            nodes.push_back(tp.node(k));
        }
        return nodes;
    }

    int path_length(const std::vector<NodeId> &path) { return static_cast<int>(path.size()) - 1; }
}

TEST_CASE("ring:4 traversal pair")
{
    const TraversalPair tp = pair_of("ring:4");
    CHECK(tp.pi_left == ranks_to_nodes(tp, {1, 2, 3, 4}));
    CHECK(tp.pi_right == ranks_to_nodes(tp, {4, 3, 2, 1}));
    CHECK(tp.size == 3);
    // The right side may leave the homebase by any edge, so v2 is one hop away
    // and the radius comes from v3 on both sides.
    CHECK(tp.radius == 2);
    CHECK(constrained_distance(tp, tp.node(2), Side::Right) == 1);
    CHECK(constrained_distance(tp, tp.node(3), Side::Right) == 2);
    CHECK(constrained_distance(tp, tp.node(3), Side::Left) == 2);
    CHECK(check_traversal_pair(tp).empty());
}

TEST_CASE("complete and triangle pairs")
{
    const TraversalPair k5 = pair_of("complete:5");
    CHECK(k5.size == 4);
    CHECK(k5.radius == 1);
    for (Rank i = 1; i < 5; ++i)
    {
        CHECK(interval_weight(k5, i, i + 1) <= 4 * k5.radius);
    }
    CHECK(check_traversal_pair(k5).empty());

    const TraversalPair k3 = pair_of("complete:3");
    CHECK(k3.pi_left == ranks_to_nodes(k3, {1, 2, 3}));
    CHECK(k3.pi_right == ranks_to_nodes(k3, {3, 2, 1}));
    CHECK(k3.size == 2);
}

TEST_CASE("normalization")
{
    const TraversalPair ring = pair_of("ring:4");
    const TraversalPair again = normalize_property1(ring);
    CHECK(again.pi_left == ring.pi_left);
    CHECK(again.pi_right == ring.pi_right);

    for (const char *spec : {"complete:5", "grid:3x4", "random-biconnected:20,40", "random-biconnected:30,33"})
    {
        const TraversalPair tp = pair_of(spec, 11);
        const TraversalPair once = normalize_property1(tp);
        const TraversalPair twice = normalize_property1(once);
        CHECK(once.pi_left == twice.pi_left);
        CHECK(once.pi_right == twice.pi_right);
        for (Rank i = 1; i < tp.node_count(); ++i)
        {
            CHECK(interval_weight(once, i, i + 1) <= 4 * once.radius);
        }
    }
}

TEST_CASE("interval weights")
{
    const TraversalPair ring4 = pair_of("ring:4");
    CHECK(interval_weight(ring4, 2, 3) == 2);
    const TraversalPair ring8 = pair_of("ring:8");
    CHECK(interval_weight(ring8, 1, 8) == 14);
    for (Rank i = 1; i <= 8; ++i)
    {
        CHECK(interval_weight(ring8, i, i) == 0);
    }
    CHECK_THROWS_AS(interval_weight(ring8, 0, 3), Error);
    CHECK_THROWS_AS(interval_weight(ring8, 5, 3), Error);
    CHECK_THROWS_AS(interval_weight(ring8, 1, 9), Error);
}

TEST_CASE("viable partitions")
{
    const auto k5 = partition_viable(pair_of("complete:5"));
    CHECK(k5.intervals == std::vector<Interval>{{1, 2, 2}, {3, 4, 2}, {5, 5, 0}});

    // ring:8 has radius 6 (v7 seen from either side) and every hop pair weighs 2.
    const TraversalPair ring8_pair = pair_of("ring:8");
    CHECK(ring8_pair.radius == 6);
    const auto ring8 = partition_viable(ring8_pair);
    CHECK(ring8.intervals == std::vector<Interval>{{1, 7, 12}, {8, 8, 0}});
    const auto ring4 = partition_viable(pair_of("ring:4"));
    CHECK(ring4.intervals == std::vector<Interval>{{1, 3, 4}, {4, 4, 0}});

    const auto k3 = partition_viable(pair_of("complete:3"));
    CHECK(k3.intervals == std::vector<Interval>{{1, 2, 2}, {3, 3, 0}});
    CHECK(k3.index_of(1) == 0);
    CHECK(k3.index_of(3) == 1);
}

TEST_CASE("access paths")
{
    const TraversalPair ring = pair_of("ring:4");
    CHECK(access_path(ring, ring.node(2), Side::Left) == ranks_to_nodes(ring, {1, 2}));
    CHECK(access_path(ring, ring.node(2), Side::Right) == ranks_to_nodes(ring, {1, 2}));
    CHECK(access_path(ring, ring.node(3), Side::Right) == ranks_to_nodes(ring, {1, 4, 3}));
    CHECK(access_path(ring, ring.node(4), Side::Left) == ranks_to_nodes(ring, {1, 4}));
    for (Side side : {Side::Left, Side::Right})
    {
        CHECK(path_length(access_path(ring, ring.homebase(), side)) == 0);
    }
}

TEST_CASE("subwalks run between marks")
{
    const TraversalPair tp = pair_of("grid:3x4");
    for (Rank i = 1; i < tp.node_count(); ++i)
    {
        const auto left = subwalk(tp, Side::Left, i, i + 1);
        CHECK(left.front() == tp.node(i));
        CHECK(left.back() == tp.node(i + 1));
        const auto right = subwalk(tp, Side::Right, i + 1, i);
        CHECK(right.front() == tp.node(i + 1));
        CHECK(right.back() == tp.node(i));
        CHECK(path_length(left) + path_length(right) == interval_weight(tp, i, i + 1));
    }
}

TEST_CASE("property sweep over random biconnected graphs")
{
    for (std::uint64_t seed = 1; seed <= 60; ++seed)
    {
        const int n = 4 + static_cast<int>(seed % 25);
        const int m = std::min(n * (n - 1) / 2, n + static_cast<int>((seed * 7) % (2 * n + 1)));
        const std::string spec = "random-biconnected:" + std::to_string(n) + "," + std::to_string(m);
        const TraversalPair tp = pair_of(spec, seed);
        INFO(spec << " seed " << seed);
        CHECK(check_traversal_pair(tp) == "");
    }
}

TEST_CASE("the validity checker rejects damaged pairs")
{
    const TraversalPair good = pair_of("grid:3x4");
    REQUIRE(check_traversal_pair(good).empty());

    TraversalPair bad = good;
    std::swap(bad.pi_left[1], bad.pi_left[2]);
    CHECK_FALSE(check_traversal_pair(bad).empty());

    bad = good;
    bad.size += 1;
    CHECK_FALSE(check_traversal_pair(bad).empty());

    bad = good;
    bad.radius += 1;
    CHECK_FALSE(check_traversal_pair(bad).empty());

    bad = good;
    bad.left_mark[3] += 1;
    CHECK_FALSE(check_traversal_pair(bad).empty());

    bad = good;
    bad.pi_right.pop_back();
    CHECK_FALSE(check_traversal_pair(bad).empty());
}

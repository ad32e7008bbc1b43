#include "rbhs/error.hpp"
#include "rbhs/protocols.hpp"
#include "rbhs/suite.hpp"

#include <doctest.h>

#include <cmath>
#include <memory>
#include <string>

using namespace rbhs;

namespace
{
    std::shared_ptr<const TraversalPair> pair_of(const std::string &spec, std::uint64_t seed = 0)
    {
        return std::make_shared<const TraversalPair>(
            make_traversal_pair(std::make_shared<const Graph>(generate_graph(spec, seed))));
    }

    EngineConfig config(std::shared_ptr<const TraversalPair> tp, ProtocolId id, Rank hole, double q,
                        SchedulerPolicy policy = SchedulerPolicy::RoundRobin, int slow = 0, std::uint64_t seed = 1)
    {
        EngineConfig cfg;
        cfg.rbhole = tp->node(hole);
        cfg.tp = std::move(tp);
        cfg.q_true = q;
        cfg.whiteboard_mode = whiteboard_mode_for(id);
        cfg.scheduler = policy;
        cfg.slow_agent = slow;
        cfg.seed = seed;
        return cfg;
    }

    std::vector<std::uint64_t> colors(const RunResult &r, const TraversalPair &tp)
    {
        std::vector<std::uint64_t> out;
        for (Rank k = 1; k <= tp.node_count(); ++k)
        {
            out.push_back(r.whiteboards[tp.node(k)].get(color_key));
        }
        return out;
    }

    bool arrived(const RunResult &r, int agent, NodeId v)
    {
        for (const Event &e : r.transcript.events)
        {
            if (e.agent == agent && e.kind == EventKind::Arrive && e.to == v)
            {
                return true;
            }
        }
        return false;
    }

    int agents_that_moved(const RunResult &r)
    {
        int count = 0;
        for (const AgentSummary &a : r.agents)
        {
            count += a.moves > 0 ? 1 : 0;
        }
        return count;
    }
}

TEST_CASE("visit counts")
{
    CHECK(delta_visits(1.0, 0.05) == 0);
    CHECK(delta_visits(0.5, 0.5) == 1);
    CHECK(delta_visits(0.5, 0.1) == 4);
    CHECK(delta_visits(0.3, 0.05) == 9);
    for (double p : {0.1, 0.3, 0.5, 0.9})
    {
        for (double d : {0.01, 0.05, 0.1, 0.5})
        {
            const int v = delta_visits(p, d);
            CHECK(std::pow(1 - p, v) <= d + 1e-12);
            CHECK((v == 0 || std::pow(1 - p, v - 1) > d));
        }
    }
    CHECK_THROWS_AS(delta_visits(0.0, 0.1), Error);
    CHECK_THROWS_AS(delta_visits(0.5, 0.0), Error);
    CHECK_THROWS_AS(delta_visits(1.5, 0.1), Error);
}

TEST_CASE("virtual black-hole predicate")
{
    for (int j : {0, 1})
    {
        for (Rank i = 1; i <= 6; ++i)
        {
            CHECK_FALSE(virtual_bh_blocked(i, 3, j));
        }
    }
    CHECK(virtual_bh_blocked(4, 2, 0));
    CHECK(virtual_bh_blocked(3, 2, 1));
    CHECK_FALSE(virtual_bh_blocked(3, 2, 0));
    CHECK(virtual_bh_blocked(3, 1, 0));
    CHECK(virtual_bh_blocked(3, 0, 0));
}

TEST_CASE("coloring on ring:4 with a black hole at v3")
{
    const auto tp = pair_of("ring:4");
    const ProtocolRun run = run_protocol(ProtocolId::Coloring, config(tp, ProtocolId::Coloring, 3, 1.0), 0.5, 0.1);
    CHECK(run.result.outcome.kind == OutcomeKind::NoOutput);
    CHECK(run.result.alive() == 0);
    CHECK(colors(run.result, *tp) == std::vector<std::uint64_t>{3, 2, 0, 2});
    CHECK(check_coloring_failure(run.result, *tp, 3).empty());
}

TEST_CASE("coloring with a harmless rB-hole reports")
{
    const auto tp = pair_of("ring:4");
    const ProtocolRun run = run_protocol(ProtocolId::Coloring, config(tp, ProtocolId::Coloring, 3, 0.0), 0.5, 0.1);
    CHECK(run.result.outcome.kind == OutcomeKind::NodeReport);
    CHECK(run.result.outcome.node != tp->homebase());
}

TEST_CASE("coloring failure checker flags wrong colours")
{
    const auto tp = pair_of("ring:4");
    ProtocolRun run = run_protocol(ProtocolId::Coloring, config(tp, ProtocolId::Coloring, 3, 1.0), 0.5, 0.1);
    run.result.whiteboards[tp->node(1)].set(color_key, 2);
    CHECK_FALSE(check_coloring_failure(run.result, *tp, 3).empty());
}

TEST_CASE("ring search with a black hole")
{
    const auto ring8 = pair_of("ring:8");
    for (SchedulerPolicy policy : all_schedulers)
    {
        for (int slow : {0, 1})
        {
            const ProtocolRun run =
                run_protocol(ProtocolId::RingBhs, config(ring8, ProtocolId::RingBhs, 5, 1.0, policy, slow), 1, 0.1);
            CHECK(run.result.outcome.kind == OutcomeKind::NodeReport);
            CHECK(run.result.outcome.node == ring8->node(5));
            CHECK(run.result.alive() == 1);
        }
    }

    const auto ring3 = pair_of("ring:3");
    const ProtocolRun small = run_protocol(ProtocolId::RingBhs, config(ring3, ProtocolId::RingBhs, 2, 1.0), 1, 0.1);
    CHECK(small.result.outcome.node == ring3->node(2));

    const auto ring16 = pair_of("ring:16");
    for (Rank hole = 2; hole <= 16; ++hole)
    {
        const ProtocolRun run = run_protocol(ProtocolId::RingBhs, config(ring16, ProtocolId::RingBhs, hole, 1.0), 1, 0.1);
        CHECK(run.result.outcome.node == ring16->node(hole));
        CHECK(run.result.total_moves() <= 40 * 16 * 4);
    }
}

TEST_CASE("ring search is exact on every small graph and placement")
{
    for (const char *spec : {"ring:5", "ring:12", "complete:4", "complete:6", "complete:9"})
    {
        const auto tp = pair_of(spec, 3);
        REQUIRE(has_ordering_cycle(*tp));
        for (Rank hole = 2; hole <= tp->node_count(); ++hole)
        {
            for (SchedulerPolicy policy : all_schedulers)
            {
                for (int slow : {0, 1})
                {
                    const ProtocolRun run = run_protocol(
                        ProtocolId::RingBhs, config(tp, ProtocolId::RingBhs, hole, 1.0, policy, slow, hole), 1, 0.1);
                    INFO(spec << " hole v" << hole);
                    CHECK(run.result.outcome.node == tp->node(hole));
                    CHECK(run.phases.front().within());
                }
            }
        }
    }
}

TEST_CASE("reducer on complete:9 with a black hole at v5")
{
    const auto tp = pair_of("complete:9");
    REQUIRE(partition_viable(*tp).size() == 5);
    // a^r is slowed so a^l reaches U3 first.
    const ProtocolRun run = run_protocol(
        ProtocolId::Reducer, config(tp, ProtocolId::Reducer, 5, 1.0, SchedulerPolicy::AdversarySlow, 1), 0.5, 0.1);
    CHECK(run.result.outcome.kind == OutcomeKind::IntervalReport);
    CHECK(run.result.outcome.reporter == 1);
    CHECK(run.result.outcome.interval == Interval{5, 6, 2});
    CHECK(run.result.agents[0].status == AgentStatus::Dead);
    CHECK(run.result.agents[0].location == tp->node(5));
    const Whiteboard &home = run.result.whiteboards[tp->homebase()];
    CHECK(home.get("rd.l") == 2);
    CHECK(home.get("rd.r") == 2);
}

TEST_CASE("reducer with a single interval reports without moving")
{
    const auto tp = pair_of("ring:8");
    EngineConfig cfg = config(tp, ProtocolId::Reducer, 4, 1.0);
    Engine engine(cfg);
    add_reducer(engine, IntervalPartition{{Interval{1, 8, 14}}}, 4, ReducerFinish::Report);
    const RunResult r = engine.run();
    CHECK(r.outcome.kind == OutcomeKind::IntervalReport);
    CHECK(r.outcome.interval.lo == 1);
    CHECK(r.outcome.interval.hi == 8);
    CHECK(r.total_moves() == 0);
}

TEST_CASE("binary search on ring:8 over [v3, v6]")
{
    const auto tp = pair_of("ring:8");
    const ProtocolRun run =
        run_protocol(ProtocolId::Algo1, config(tp, ProtocolId::Algo1, 5, 1.0), 1.0, 0.1, Interval{3, 6, 0});
    CHECK(run.result.outcome.kind == OutcomeKind::NodeReport);
    CHECK(run.result.outcome.node == tp->node(5));
    CHECK(agents_that_moved(run.result) == 3);

    const ProtocolRun single =
        run_protocol(ProtocolId::Algo1, config(tp, ProtocolId::Algo1, 5, 1.0), 0.5, 0.1, Interval{5, 5, 0});
    CHECK(single.result.outcome.node == tp->node(5));
    CHECK(single.result.total_moves() == 0);
}

TEST_CASE("linear search on ring:8 over [v3, v6]")
{
    const auto tp = pair_of("ring:8");
    const ProtocolRun run = run_protocol(ProtocolId::Algo2,
                                         config(tp, ProtocolId::Algo2, 5, 1.0, SchedulerPolicy::AdversarySlow, 1),
                                         1.0, 0.1, Interval{3, 6, 0});
    CHECK(run.result.outcome.node == tp->node(5));
    CHECK(arrived(run.result, 0, tp->node(3)));
    CHECK(arrived(run.result, 0, tp->node(4)));
    CHECK(run.result.agents[0].status == AgentStatus::Dead);
    CHECK(run.result.agents[0].location == tp->node(5));
    CHECK(arrived(run.result, 1, tp->node(6)));
    CHECK_FALSE(arrived(run.result, 1, tp->node(5)));

    const ProtocolRun single =
        run_protocol(ProtocolId::Algo2, config(tp, ProtocolId::Algo2, 5, 1.0), 0.5, 0.1, Interval{5, 5, 0});
    CHECK(single.result.outcome.node == tp->node(5));
    CHECK(single.result.total_moves() == 0);

    CHECK_THROWS_AS(run_protocol(ProtocolId::Algo2, config(tp, ProtocolId::Algo2, 5, 1.0), 0.5, 0.1,
                                 Interval{3, 9, 0}),
                    Error);
}

TEST_CASE("composites are exact with black holes")
{
    for (const char *spec : {"ring:6", "ring:16", "complete:5", "grid:3x4", "random-biconnected:11,15"})
    {
        const auto tp = pair_of(spec, 5);
        for (ProtocolId id : {ProtocolId::Reduction, ProtocolId::WbFreeFewAgents, ProtocolId::WbFreeFewMoves})
        {
            if (id == ProtocolId::Reduction && !has_ordering_cycle(*tp))
            {
                CHECK_THROWS_AS(run_protocol(id, config(tp, id, 2, 1.0), 1.0, 0.1), Error);
                continue;
            }
            for (Rank hole = 2; hole <= tp->node_count(); ++hole)
            {
                for (SchedulerPolicy policy : all_schedulers)
                {
                    const ProtocolRun run = run_protocol(id, config(tp, id, hole, 1.0, policy, hole % 2, hole), 1.0, 0.1);
                    INFO(spec << " " << to_string(id) << " hole v" << hole);
                    CHECK(run.result.outcome.kind == OutcomeKind::NodeReport);
                    CHECK(run.result.outcome.node == tp->node(hole));
                    CHECK(run.result.alive_at_homebase(tp->homebase()) >= 1);
                    CHECK(run.agents_used <= team_size(id, *tp));
                    for (const PhaseAccount &phase : run.phases)
                    {
                        CHECK(phase.within());
                    }
                }
            }
        }
    }
}

TEST_CASE("agent budgets")
{
    const auto tp = pair_of("complete:9");
    CHECK(team_size(ProtocolId::Reduction, *tp) == 6);
    CHECK(team_size(ProtocolId::WbFreeFewAgents, *tp) == 4);
    CHECK(team_size(ProtocolId::WbFreeFewMoves, *tp) <= 4 + static_cast<int>(std::ceil(std::log2(tp->radius))));
    CHECK(algo1_pool_size(1) == 2);
    CHECK(algo1_pool_size(4) == 4);
    CHECK(algo1_pool_size(5) == 5);
}

TEST_CASE("protocol names")
{
    for (ProtocolId id : all_protocols)
    {
        CHECK(parse_protocol(to_string(id)) == id);
    }
    CHECK_THROWS_AS(parse_protocol("dijkstra"), Error);
}

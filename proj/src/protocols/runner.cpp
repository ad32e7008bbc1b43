#include "rbhs/error.hpp"
#include "rbhs/protocols.hpp"

#include <algorithm>
#include <cmath>

namespace rbhs
{
    namespace
    {
        double log2_floor1(int x) { return std::max(1.0, std::log2(static_cast<double>(std::max(x, 1)))); }

        // Effective per-stage budget of ALGO1: delta / (log2 r + 1).
        double algo1_delta(const TraversalPair &tp, double delta)
        {
            return delta / (std::log2(static_cast<double>(std::max(tp.radius, 1))) + 1.0);
        }

        PhaseAccount account(std::string name, Team team, int visits, const RunResult &result, double basis,
                             double constant)
        {
            PhaseAccount phase;
            phase.name = std::move(name);
            phase.team = team;
            phase.visits = visits;
            phase.moves = result.moves_of(team.first, team.last());
            phase.basis = basis;
            phase.constant = constant;
            return phase;
        }

        double coloring_basis(const TraversalPair &tp, int visits)
        {
            return static_cast<double>(visits) * tp.node_count() + tp.size;
        }
        double reducer_basis(const TraversalPair &tp, int visits)
        {
            return static_cast<double>(tp.size) + static_cast<double>(visits) * tp.node_count();
        }
        double algo1_basis(const TraversalPair &tp, int visits)
        {
            const double r = tp.radius;
            return r * log2_floor1(tp.radius) + visits * r;
        }
        double algo2_basis(const TraversalPair &tp, int visits)
        {
            const double r = tp.radius;
            return r * r + visits * r;
        }
        double ring_basis(const TraversalPair &tp)
        {
            const double n = tp.node_count();
            return n * std::log2(n);
        }

        void check_interval(const TraversalPair &tp, Interval u)
        {
            if (u.lo < 1 || u.hi > tp.node_count() || u.lo > u.hi)
            {
                throw Error(ErrorCode::IndexError, "interval [" + std::to_string(u.lo) + ", " + std::to_string(u.hi) +
                                                       "] outside the ordering");
            }
        }

        void check_config(const EngineConfig &config)
        {
            if (!config.tp)
            {
                throw Error(ErrorCode::InvalidParams, "engine config carries no traversal pair");
            }
        }
    }

    std::string_view to_string(ProtocolId id) noexcept
    {
        switch (id)
        {
            case ProtocolId::Coloring: return "coloring";
            case ProtocolId::Reduction: return "reduction";
            case ProtocolId::Reducer: return "reducer";
            case ProtocolId::Algo1: return "algo1";
            case ProtocolId::Algo2: return "algo2";
            case ProtocolId::WbFreeFewAgents: return "wbfree-few-agents";
            case ProtocolId::WbFreeFewMoves: return "wbfree-few-moves";
            case ProtocolId::RingBhs: return "ring-bhs";
        }
        return "?";
    }

    ProtocolId parse_protocol(std::string_view text)
    {
        for (ProtocolId id : all_protocols)
        {
            if (to_string(id) == text)
            {
                return id;
            }
        }
        throw Error(ErrorCode::InvalidParams, "unknown protocol '" + std::string(text) + "'");
    }

    WhiteboardMode whiteboard_mode_for(ProtocolId id) noexcept
    {
        switch (id)
        {
            case ProtocolId::Coloring:
            case ProtocolId::Reduction:
            case ProtocolId::RingBhs: return WhiteboardMode::AllNodes;
            default: return WhiteboardMode::HomebaseOnly;
        }
    }

    bool reports_interval(ProtocolId id) noexcept { return id == ProtocolId::Reducer; }

    int team_size(ProtocolId id, const TraversalPair &tp)
    {
        switch (id)
        {
            case ProtocolId::Coloring:
            case ProtocolId::Reducer:
            case ProtocolId::Algo2:
            case ProtocolId::RingBhs: return 2;
            case ProtocolId::Reduction: return 2 + 2 * ring_bhs_protocol().agents;
            case ProtocolId::Algo1: return algo1_pool_size(tp.radius);
            case ProtocolId::WbFreeFewAgents: return 4;
            case ProtocolId::WbFreeFewMoves: return 2 + algo1_pool_size(tp.radius);
        }
        return 0;
    }

    ProtocolRun coloring_run(const EngineConfig &config, const ProtocolParams &params)
    {
        check_config(config);
        Engine engine(config);
        const Team team = add_coloring(engine, params.visits);
        ProtocolRun run{engine.run(), engine.agent_count(), {}};
        run.phases.push_back(
            account("coloring", team, params.visits, run.result, coloring_basis(*config.tp, params.visits), 20));
        return run;
    }

    ProtocolRun ring_bhs_run(const EngineConfig &config)
    {
        check_config(config);
        if (!has_ordering_cycle(*config.tp))
        {
            throw Error(ErrorCode::InvalidParams, "ring search needs v_1 ... v_n to form a cycle");
        }
        Engine engine(config);
        const Team team = add_base(engine, ring_bhs_protocol(), "");
        ProtocolRun run{engine.run(), engine.agent_count(), {}};
        run.phases.push_back(account("ring-bhs", team, 0, run.result, ring_basis(*config.tp), 40));
        return run;
    }

    ProtocolRun reduction_run(const EngineConfig &config, double p, double delta)
    {
        check_config(config);
        const TraversalPair &tp = *config.tp;
        if (!has_ordering_cycle(tp))
        {
            throw Error(ErrorCode::InvalidParams, "ring search needs v_1 ... v_n to form a cycle");
        }
        const int visits = delta_visits(p, delta);
        const BhsProtocol base = ring_bhs_protocol();
        Engine engine(config);
        const Team coloring = add_coloring(engine, visits);
        const Team a0 = add_wrapped(engine, base, 0);
        const Team a1 = add_wrapped(engine, base, 1);
        ProtocolRun run{engine.run(), engine.agent_count(), {}};
        run.phases.push_back(account("coloring", coloring, visits, run.result, coloring_basis(tp, visits), 20));
        run.phases.push_back(account("ring-bhs/0", a0, 0, run.result, ring_basis(tp), 40));
        run.phases.push_back(account("ring-bhs/1", a1, 0, run.result, ring_basis(tp), 40));
        run.phases.push_back(account("reduction", Team{0, engine.agent_count()}, visits, run.result,
                                     ring_basis(tp) + tp.size + static_cast<double>(visits) * tp.node_count(), 20));
        return run;
    }

    ProtocolRun reducer_run(const EngineConfig &config, double p, double delta)
    {
        check_config(config);
        const TraversalPair &tp = *config.tp;
        const int visits = delta_visits(p, delta);
        Engine engine(config);
        const Team team = add_reducer(engine, partition_viable(tp), visits, ReducerFinish::Report);
        ProtocolRun run{engine.run(), engine.agent_count(), {}};
        run.phases.push_back(account("reducer", team, visits, run.result, reducer_basis(tp, visits), 20));
        return run;
    }

    ProtocolRun algo1_run(const EngineConfig &config, double p, double delta, Interval interval)
    {
        check_config(config);
        const TraversalPair &tp = *config.tp;
        check_interval(tp, interval);
        const int visits = delta_visits(p, algo1_delta(tp, delta));
        Engine engine(config);
        const Team team = add_algo1(engine, interval, visits, algo1_pool_size(tp.radius));
        ProtocolRun run{engine.run(), engine.agent_count(), {}};
        run.phases.push_back(account("algo1", team, visits, run.result, algo1_basis(tp, visits), 50));
        return run;
    }

    ProtocolRun algo2_run(const EngineConfig &config, double p, double delta, Interval interval)
    {
        check_config(config);
        const TraversalPair &tp = *config.tp;
        check_interval(tp, interval);
        const int visits = delta_visits(p, delta);
        Engine engine(config);
        const Team team = add_algo2(engine, interval, visits);
        ProtocolRun run{engine.run(), engine.agent_count(), {}};
        run.phases.push_back(account("algo2", team, visits, run.result, algo2_basis(tp, visits), 50));
        return run;
    }

    ProtocolRun whiteboardfree_run(const EngineConfig &config, double p, double delta, bool few_moves)
    {
        check_config(config);
        const TraversalPair &tp = *config.tp;
        const double half = delta / 2;
        const int reducer_visits = delta_visits(p, half);
        Engine engine(config);
        const Team reducer = add_reducer(engine, partition_viable(tp), reducer_visits, ReducerFinish::Handoff);
        Team second;
        int second_visits = 0;
        if (few_moves)
        {
            second_visits = delta_visits(p, algo1_delta(tp, half));
            second = add_algo1(engine, std::nullopt, second_visits, algo1_pool_size(tp.radius));
        }
        else
        {
            second_visits = delta_visits(p, half);
            second = add_algo2(engine, std::nullopt, second_visits);
        }
        ProtocolRun run{engine.run(), engine.agent_count(), {}};
        run.phases.push_back(account("reducer", reducer, reducer_visits, run.result, reducer_basis(tp, reducer_visits), 20));
        if (few_moves)
        {
            run.phases.push_back(account("algo1", second, second_visits, run.result, algo1_basis(tp, second_visits), 50));
        }
        else
        {
            run.phases.push_back(account("algo2", second, second_visits, run.result, algo2_basis(tp, second_visits), 50));
        }
        return run;
    }

    ProtocolRun run_protocol(ProtocolId id, const EngineConfig &config, double p, double delta,
                             std::optional<Interval> interval)
    {
        check_config(config);
        const TraversalPair &tp = *config.tp;
        auto hole_interval = [&] {
            if (interval)
            {
                return *interval;
            }
            const IntervalPartition partition = partition_viable(tp);
            return partition.intervals.at(static_cast<std::size_t>(partition.index_of(tp.rank(config.rbhole))));
        };
        switch (id)
        {
            case ProtocolId::Coloring: return coloring_run(config, ProtocolParams::make(p, delta));
            case ProtocolId::Reduction: return reduction_run(config, p, delta);
            case ProtocolId::Reducer: return reducer_run(config, p, delta);
            case ProtocolId::Algo1: return algo1_run(config, p, delta, hole_interval());
            case ProtocolId::Algo2: return algo2_run(config, p, delta, hole_interval());
            case ProtocolId::WbFreeFewAgents: return whiteboardfree_run(config, p, delta, false);
            case ProtocolId::WbFreeFewMoves: return whiteboardfree_run(config, p, delta, true);
            case ProtocolId::RingBhs: return ring_bhs_run(config);
        }
        throw Error(ErrorCode::InvalidParams, "unknown protocol");
    }
}

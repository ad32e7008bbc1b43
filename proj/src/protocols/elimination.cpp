#include "rbhs/error.hpp"
#include "rbhs/protocols.hpp"

#include <bit>
#include <cmath>

namespace rbhs
{
    namespace
    {
        // Homebase fields through which REDUCER hands its interval to the
        // second phase.
        constexpr std::string_view handoff_lo = "p2.lo";
        constexpr std::string_view handoff_hi = "p2.hi";
        constexpr std::string_view handoff_go = "p2.go";

        using Hold = std::function<bool(const Whiteboard &)>;
        bool handoff_pending(const Whiteboard &wb) { return wb.get(handoff_go) == 0; }

        enum class SweepFinish
        {
            ReportInterval,
            Handoff,
            ReportNode,
        };

        std::vector<Interval> singletons(Interval u)
        {
            std::vector<Interval> units;
            for (Rank k = u.lo; k <= u.hi; ++k)
            {
                units.push_back(Interval{k, k, 0});
            }
            return units;
        }

        // Shared claim loop of REDUCER and ALGO2. Units are explored from the
        // low end by a^l and from the high end by a^r; the homebase keeps how
        // many each has completed, so the next claim of either agent follows
        // from the two counters alone.
        AgentProgram sweep_agent(AgentContext ctx, Side side, std::string prefix, std::vector<Interval> units,
                                 int visits, SweepFinish finish)
        {
            const TraversalPair &tp = ctx.tp();
            if (units.empty())
            {
                const Hold waiting = handoff_pending;
                co_await ctx.suspend_while(waiting);
                units = singletons(Interval{static_cast<Rank>(ctx.read(handoff_lo)),
                                            static_cast<Rank>(ctx.read(handoff_hi)), 0});
            }
            const std::string lkey = prefix + "l";
            const std::string rkey = prefix + "r";
            const std::string &mine = side == Side::Left ? lkey : rkey;
            const int f = static_cast<int>(units.size());

            while (true)
            {
                if (finish == SweepFinish::Handoff && ctx.read(handoff_go) != 0)
                {
                    co_return;
                }
                const int ldone = static_cast<int>(ctx.read(lkey));
                const int rdone = static_cast<int>(ctx.read(rkey));
                const int remaining = f - ldone - rdone;
                if (remaining <= 0)
                {
                    throw Error(ErrorCode::ProtocolBug, "every unit completed without finding the rB-hole");
                }
                if (remaining == 1)
                {
                    const Interval last = units[static_cast<std::size_t>(ldone)];
                    switch (finish)
                    {
                        case SweepFinish::ReportInterval:
                            co_await ctx.report_interval(last);
                            break;
                        case SweepFinish::Handoff:
                            ctx.write(handoff_lo, static_cast<std::uint64_t>(last.lo));
                            ctx.write(handoff_hi, static_cast<std::uint64_t>(last.hi));
                            ctx.write(handoff_go, 1);
                            break;
                        case SweepFinish::ReportNode:
                            if (tp.node(last.lo) == tp.homebase())
                            {
                                throw Error(ErrorCode::ProtocolBug, "elimination left only the homebase");
                            }
                            co_await ctx.report_node(tp.node(last.lo));
                            break;
                    }
                    co_return;
                }
                const int index = side == Side::Left ? ldone : f - 1 - rdone;
                for (NodeId v : interval_itinerary(tp, units[static_cast<std::size_t>(index)], side, visits))
                {
                    co_await ctx.move_to(v);
                }
                ctx.write(mine, ctx.read(mine) + 1);
            }
        }

        std::string pool_key(std::string_view field, int agent)
        {
            return "g1." + std::string(field) + std::to_string(agent);
        }

        // Per-agent assignment record: stage number, half bounds, side.
        void assign(const AgentContext &ctx, int left_agent, int right_agent, std::uint64_t stage, Interval v)
        {
            const Rank k = (v.lo + v.hi) / 2;
            auto put = [&](int agent, Rank lo, Rank hi, Side side) {
                ctx.write(pool_key("lo", agent), static_cast<std::uint64_t>(lo));
                ctx.write(pool_key("hi", agent), static_cast<std::uint64_t>(hi));
                ctx.write(pool_key("side", agent), side == Side::Left ? 0 : 1);
                ctx.write(pool_key("s", agent), stage);
            };
            put(left_agent, v.lo, k, Side::Left);
            put(right_agent, k + 1, v.hi, Side::Right);
        }

        // Binary search over U with a pool of agents waiting at the homebase.
        // g1.t is the current stage and g1.lo / g1.hi its interval; the first
        // agent of a stage to return keeps the other half, halves it again
        // with a partner drawn from the idle mask, and bumps the stage.
        AgentProgram algo1_agent(AgentContext ctx, int index, int pool, std::optional<Interval> given, int visits)
        {
            const TraversalPair &tp = ctx.tp();
            if (index == 0)
            {
                if (!given)
                {
                    const Hold waiting = handoff_pending;
                    co_await ctx.suspend_while(waiting);
                    given = Interval{static_cast<Rank>(ctx.read(handoff_lo)), static_cast<Rank>(ctx.read(handoff_hi)),
                                     0};
                }
                const Interval u = *given;
                if (u.count() == 1)
                {
                    if (tp.node(u.lo) == tp.homebase())
                    {
                        throw Error(ErrorCode::ProtocolBug, "search interval is the homebase");
                    }
                    co_await ctx.report_node(tp.node(u.lo));
                    co_return;
                }
                std::uint64_t idle = 0;
                for (int a = 2; a < pool; ++a)
                {
                    idle |= std::uint64_t{1} << a;
                }
                ctx.write("g1.idle", idle);
                ctx.write("g1.lo", static_cast<std::uint64_t>(u.lo));
                ctx.write("g1.hi", static_cast<std::uint64_t>(u.hi));
                assign(ctx, 0, 1, 1, u);
                ctx.write("g1.t", 1);
            }

            const std::string stage_key = pool_key("s", index);
            std::uint64_t seen = 0;
            while (true)
            {
                // Named local: gcc 11 mishandles lambda temporaries inside co_await.
                const Hold unassigned = [stage_key, seen](const Whiteboard &wb) { return wb.get(stage_key) <= seen; };
                co_await ctx.suspend_while(unassigned);
                const std::uint64_t stage = ctx.read(stage_key);
                seen = stage;
                const Interval half{static_cast<Rank>(ctx.read(pool_key("lo", index))),
                                    static_cast<Rank>(ctx.read(pool_key("hi", index))), 0};
                const Side side = ctx.read(pool_key("side", index)) == 0 ? Side::Left : Side::Right;
                for (NodeId v : interval_itinerary(tp, half, side, visits))
                {
                    co_await ctx.move_to(v);
                }

                if (ctx.read("g1.t") != stage)
                {
                    ctx.write("g1.idle", ctx.read("g1.idle") | (std::uint64_t{1} << index));
                    continue;
                }
                const Interval current{static_cast<Rank>(ctx.read("g1.lo")), static_cast<Rank>(ctx.read("g1.hi")), 0};
                const Interval other = side == Side::Left ? Interval{half.hi + 1, current.hi, 0}
                                                          : Interval{current.lo, half.lo - 1, 0};
                if (other.count() == 1)
                {
                    if (tp.node(other.lo) == tp.homebase())
                    {
                        throw Error(ErrorCode::ProtocolBug, "binary search ended on the homebase");
                    }
                    co_await ctx.report_node(tp.node(other.lo));
                    co_return;
                }
                const std::uint64_t idle = ctx.read("g1.idle");
                if (idle == 0)
                {
                    throw Error(ErrorCode::PoolExhausted, "no idle agent for stage " + std::to_string(stage + 1));
                }
                const int partner = std::countr_zero(idle);
                ctx.write("g1.idle", idle & ~(std::uint64_t{1} << partner));
                ctx.write("g1.lo", static_cast<std::uint64_t>(other.lo));
                ctx.write("g1.hi", static_cast<std::uint64_t>(other.hi));
                assign(ctx, index, partner, stage + 1, other);
                ctx.write("g1.t", stage + 1);
            }
        }
    }

    Team add_reducer(Engine &engine, const IntervalPartition &partition, int visits, ReducerFinish finish)
    {
        Team team{engine.agent_count(), 2};
        const SweepFinish how = finish == ReducerFinish::Report ? SweepFinish::ReportInterval : SweepFinish::Handoff;
        for (Side side : {Side::Left, Side::Right})
        {
            engine.add_agent([side, units = partition.intervals, visits, how](AgentContext ctx) {
                return sweep_agent(ctx, side, "rd.", units, visits, how);
            });
        }
        return team;
    }

    Team add_algo2(Engine &engine, std::optional<Interval> interval, int visits)
    {
        Team team{engine.agent_count(), 2};
        const std::vector<Interval> units = interval ? singletons(*interval) : std::vector<Interval>{};
        for (Side side : {Side::Left, Side::Right})
        {
            engine.add_agent([side, units, visits](AgentContext ctx) {
                return sweep_agent(ctx, side, "a2.", units, visits, SweepFinish::ReportNode);
            });
        }
        return team;
    }

    Team add_algo1(Engine &engine, std::optional<Interval> interval, int visits, int pool)
    {
        Team team{engine.agent_count(), pool};
        for (int i = 0; i < pool; ++i)
        {
            engine.add_agent([i, pool, interval, visits](AgentContext ctx) {
                return algo1_agent(ctx, i, pool, interval, visits);
            });
        }
        return team;
    }

    int algo1_pool_size(int radius)
    {
        return static_cast<int>(std::ceil(std::log2(std::max(radius, 1)))) + 2;
    }
}

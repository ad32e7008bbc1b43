#include "rbhs/protocols.hpp"

#include <algorithm>

namespace rbhs
{
    namespace
    {
        // Hop of the agent's walk that first reaches v_k from its predecessor.
        std::vector<NodeId> hop_into(const TraversalPair &tp, Side side, Rank k)
        {
            return side == Side::Left ? subwalk(tp, Side::Left, k - 1, k) : subwalk(tp, Side::Right, k + 1, k);
        }

        // a^l walks pi_left from v_1, a^r crosses the homebase-v_n edge and walks
        // pi_right. Colours: 0 unexplored, 1 first visit, 2 Delta-visited, 3 the
        // walk has moved past it.
        AgentProgram coloring_agent(AgentContext ctx, Side side, int visits)
        {
            const TraversalPair &tp = ctx.tp();
            const int n = tp.node_count();
            std::vector<bool> visited(static_cast<std::size_t>(n), false);
            const Rank first = side == Side::Left ? 1 : n;
            const int step = side == Side::Left ? 1 : -1;

            if (side == Side::Right)
            {
                co_await ctx.move_to(tp.node(n));
            }

            for (Rank k = first; k >= 1 && k <= n; k += step)
            {
                std::vector<NodeId> hop;
                if (k != first)
                {
                    hop = hop_into(tp, side, k);
                    for (std::size_t i = 1; i < hop.size(); ++i)
                    {
                        co_await ctx.move_to(hop[i]);
                    }
                }
                const NodeId here = tp.node(k);
                const auto color = ctx.read(color_key);
                if (color == 0)
                {
                    ctx.write(color_key, 1);
                    if (k != first)
                    {
                        for (auto it = hop.rbegin() + 1; it != hop.rend(); ++it)
                        {
                            co_await ctx.move_to(*it);
                        }
                        if (ctx.read(color_key) < 3)
                        {
                            ctx.write(color_key, 3);
                        }
                        for (std::size_t i = 1; i < hop.size(); ++i)
                        {
                            co_await ctx.move_to(hop[i]);
                        }
                    }
                    // The node entered from: hop predecessor, or the homebase for v_n.
                    NodeId last = -1;
                    if (k != first)
                    {
                        last = hop[hop.size() - 2];
                    }
                    else if (side == Side::Right)
                    {
                        last = tp.homebase();
                    }
                    if (last >= 0)
                    {
                        for (int i = 0; i < visits; ++i)
                        {
                            co_await ctx.move_to(last);
                            co_await ctx.move_to(here);
                        }
                    }
                    if (ctx.read(color_key) < 2)
                    {
                        ctx.write(color_key, 2);
                    }
                    visited[here] = true;
                }
                else if ((color == 1 || color == 2) && !visited[here])
                {
                    const auto home = access_path(tp, here, side);
                    for (auto it = home.rbegin() + 1; it != home.rend(); ++it)
                    {
                        co_await ctx.move_to(*it);
                    }
                    co_await ctx.report_node(here);
                    co_return;
                }
                else
                {
                    visited[here] = true;
                }
            }
        }
    }

    Team add_coloring(Engine &engine, int visits)
    {
        Team team{engine.agent_count(), 2};
        engine.add_agent([visits](AgentContext ctx) { return coloring_agent(ctx, Side::Left, visits); });
        engine.add_agent([visits](AgentContext ctx) { return coloring_agent(ctx, Side::Right, visits); });
        return team;
    }
}

#include "rbhs/protocols.hpp"

namespace rbhs
{
    namespace
    {
        // Positions 1..n are ranks on the cycle v_1 v_2 ... v_n v_1; position
        // n + 1 is the homebase again, seen from the Down agent's side.
        //
        // Up explores 2, 3, ... from position 1, Down explores n, n-1, ... from
        // position n + 1, each by cautious walk inside its zone. Whiteboard keys:
        //   u        at x: x + 1 was explored by Up
        //   d        at x: x - 1 was explored by Down
        //   ul / ur  limit and round of a zone update for Up (written by Down)
        //   dl / dr  the same for Down (written by Up)
        // An agent that finishes its zone walks to the other's frontier, splits
        // the remaining unexplored stretch and leaves the far half to the other.
        AgentProgram ring_agent(AgentContext ctx, bool up, std::string prefix)
        {
            const TraversalPair &tp = ctx.tp();
            const int n = tp.node_count();
            auto at = [&](int pos) { return tp.node(pos > n ? 1 : pos); };

            const std::string own_flag = prefix + (up ? "u" : "d");
            const std::string other_flag = prefix + (up ? "d" : "u");
            const std::string my_limit_key = prefix + (up ? "ul" : "dl");
            const std::string my_round_key = prefix + (up ? "ur" : "dr");
            const std::string their_limit_key = prefix + (up ? "dl" : "ul");
            const std::string their_round_key = prefix + (up ? "dr" : "ur");

            const int dir = up ? 1 : -1;
            const int my_home = up ? 1 : n + 1;
            const int their_home = up ? n + 1 : 1;
            const int split = (2 + n) / 2;

            int f = my_home;
            int limit = up ? split : split + 1;
            std::uint64_t my_round = 0;
            std::uint64_t sent = 0;

            auto adopt = [&] {
                const auto r = ctx.read(my_round_key);
                if (r > my_round)
                {
                    my_round = r;
                    limit = static_cast<int>(ctx.read(my_limit_key));
                }
            };

            while (true)
            {
                adopt();
                if (f != limit)
                {
                    co_await ctx.move_to(at(f + dir));
                    co_await ctx.move_to(at(f));
                    ctx.write(own_flag, 1);
                    adopt();
                    co_await ctx.move_to(at(f + dir));
                    f += dir;
                    continue;
                }

                // Zone done: go home through our own explored stretch.
                for (int pos = f; pos != my_home;)
                {
                    pos -= dir;
                    co_await ctx.move_to(at(pos));
                }
                // Follow the other agent's flags to its frontier g.
                int g = their_home;
                while (ctx.read(other_flag) != 0)
                {
                    g -= dir;
                    co_await ctx.move_to(at(g));
                }

                const int lo = up ? limit + 1 : g + 1;
                const int hi = up ? g - 1 : limit - 1;
                const int count = hi - lo + 1;
                if (count <= 0)
                {
                    co_return;
                }
                if (count == 1)
                {
                    for (int pos = g; pos != their_home;)
                    {
                        pos += dir;
                        co_await ctx.move_to(at(pos));
                    }
                    co_await ctx.report_node(at(lo));
                    co_return;
                }

                const int mid = (lo + hi) / 2;
                ctx.write(their_limit_key, static_cast<std::uint64_t>(up ? mid + 1 : mid));
                ctx.write(their_round_key, ++sent);

                // Back around the cycle to our own frontier.
                for (int pos = g; pos != their_home;)
                {
                    pos += dir;
                    co_await ctx.move_to(at(pos));
                }
                for (int pos = my_home; pos != f;)
                {
                    pos += dir;
                    co_await ctx.move_to(at(pos));
                }
                limit = up ? mid : mid + 1;
            }
        }
    }

    BhsProtocol ring_bhs_protocol()
    {
        BhsProtocol base;
        base.name = "ring-bhs";
        base.agents = 2;
        base.make = [](int index, std::string prefix) -> ProgramFactory {
            return [index, prefix](AgentContext ctx) { return ring_agent(ctx, index == 0, prefix); };
        };
        return base;
    }

    bool has_ordering_cycle(const TraversalPair &tp)
    {
        const int n = tp.node_count();
        if (n < 3)
        {
            return false;
        }
        for (Rank k = 1; k <= n; ++k)
        {
            if (!tp.g().adjacent(tp.node(k), tp.node(k % n + 1)))
            {
                return false;
            }
        }
        return true;
    }

    Team add_base(Engine &engine, const BhsProtocol &base, const std::string &prefix)
    {
        Team team{engine.agent_count(), base.agents};
        for (int i = 0; i < base.agents; ++i)
        {
            engine.add_agent(base.make(i, prefix));
        }
        return team;
    }

    Team add_wrapped(Engine &engine, const BhsProtocol &base, int j)
    {
        Team team{engine.agent_count(), base.agents};
        const std::string prefix = "x" + std::to_string(j) + ".";
        for (int i = 0; i < base.agents; ++i)
        {
            engine.add_agent(base.make(i, prefix), [j](Rank rank, const Whiteboard &wb) {
                return virtual_bh_blocked(rank, wb.get(color_key), j);
            });
        }
        return team;
    }
}

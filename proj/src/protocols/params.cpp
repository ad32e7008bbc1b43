#include "rbhs/error.hpp"
#include "rbhs/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace rbhs
{
    int delta_visits(double p, double delta_effective)
    {
        if (!(p > 0.0 && p <= 1.0) || !(delta_effective > 0.0 && delta_effective <= 1.0))
        {
            throw Error(ErrorCode::InvalidParams, "need 0 < p <= 1 and 0 < delta <= 1");
        }
        if (p == 1.0 || delta_effective == 1.0)
        {
            return 0;
        }
        const double miss = 1.0 - p;
        int visits = static_cast<int>(std::ceil(std::log(delta_effective) / std::log(miss)));
        visits = std::max(visits, 0);
        // Correct the ceiling against rounding in the logarithms.
        while (visits > 0 && std::pow(miss, visits - 1) <= delta_effective)
        {
            --visits;
        }
        while (std::pow(miss, visits) > delta_effective)
        {
            ++visits;
        }
        return visits;
    }

    ProtocolParams ProtocolParams::make(double p, double delta_effective)
    {
        return ProtocolParams{p, delta_effective, delta_visits(p, delta_effective)};
    }

    bool virtual_bh_blocked(Rank rank, std::uint64_t color, int j)
    {
        const bool same_parity = (rank % 2) == (j % 2);
        return same_parity ? color < 3 : color < 2;
    }

    std::vector<NodeId> interval_itinerary(const TraversalPair &tp, Interval iv, Side side, int visits)
    {
        const Rank entry = side == Side::Left ? iv.lo : iv.hi;
        const Rank exit = side == Side::Left ? iv.hi : iv.lo;

        std::vector<NodeId> walk = access_path(tp, tp.node(entry), side);
        const auto inside = subwalk(tp, side, entry, exit);
        walk.insert(walk.end(), inside.begin() + 1, inside.end());

        std::vector<NodeId> moves;
        std::vector<bool> seen(static_cast<std::size_t>(tp.node_count()), false);
        for (std::size_t i = 1; i < walk.size(); ++i)
        {
            const NodeId v = walk[i];
            moves.push_back(v);
            if (v != tp.homebase() && iv.contains(tp.rank(v)) && !seen[v])
            {
                seen[v] = true;
                for (int k = 0; k < visits; ++k)
                {
                    moves.push_back(walk[i - 1]);
                    moves.push_back(v);
                }
            }
        }
        auto back = access_path(tp, tp.node(exit), side);
        for (auto it = back.rbegin() + 1; it != back.rend(); ++it)
        {
            moves.push_back(*it);
        }
        return moves;
    }
}

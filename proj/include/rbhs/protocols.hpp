#pragma once

#include "rbhs/engine.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rbhs
{
    struct ProtocolParams
    {
        double p = 1.0;     // known lower bound on the kill probability
        double delta = 0.1; // error budget
        int visits = 0;     // Delta, derived from (p, effective delta)

        static ProtocolParams make(double p, double delta_effective);
    };

    // Smallest Delta >= 0 with (1-p)^Delta <= delta_effective; 0 when p = 1.
    // Throws InvalidParams outside 0 < p <= 1, 0 < delta_effective <= 1.
    int delta_visits(double p, double delta_effective);

    // Virtual black-hole predicate of the wrapped protocol A_j at a node of
    // rank `rank` carrying colour `color`.
    bool virtual_bh_blocked(Rank rank, std::uint64_t color, int j);

    inline constexpr std::string_view color_key = "c";

    // A black-hole search protocol expressed against the agent API: `t` agent
    // programs, each given its index and a key prefix that namespaces every
    // whiteboard field it touches.
    struct BhsProtocol
    {
        std::string name;
        int agents = 0;
        std::function<ProgramFactory(int index, std::string prefix)> make;
    };

    // Two-agent divide-and-conquer cautious-walk search on the Hamiltonian
    // cycle v_1, v_2, ..., v_n, v_1 of the shared ordering.
    BhsProtocol ring_bhs_protocol();
    bool has_ordering_cycle(const TraversalPair &tp);

    // Successive destinations for visiting `iv` from `side`: the access path to
    // the entry end, the subwalk with Delta back-and-forth crossings at each
    // first-time interval node, then the access path home.
    std::vector<NodeId> interval_itinerary(const TraversalPair &tp, Interval iv, Side side, int visits);

    // Inclusive agent-id range of a team added to an engine.
    struct Team
    {
        int first = 0;
        int count = 0;
        int last() const noexcept { return first + count - 1; }
    };

    Team add_coloring(Engine &engine, int visits);
    Team add_wrapped(Engine &engine, const BhsProtocol &base, int j);
    Team add_base(Engine &engine, const BhsProtocol &base, const std::string &prefix);

    enum class ReducerFinish
    {
        Report,  // report the surviving interval
        Handoff, // post it on the homebase for a second phase
    };
    Team add_reducer(Engine &engine, const IntervalPartition &partition, int visits, ReducerFinish finish);
    // With no interval the team waits for the reducer's handoff.
    Team add_algo2(Engine &engine, std::optional<Interval> interval, int visits);
    Team add_algo1(Engine &engine, std::optional<Interval> interval, int visits, int pool);

    int algo1_pool_size(int radius);

    enum class ProtocolId
    {
        Coloring,
        Reduction,
        Reducer,
        Algo1,
        Algo2,
        WbFreeFewAgents,
        WbFreeFewMoves,
        RingBhs,
    };
    inline constexpr ProtocolId all_protocols[] = {ProtocolId::Coloring,        ProtocolId::Reduction,
                                                   ProtocolId::Reducer,         ProtocolId::Algo1,
                                                   ProtocolId::Algo2,           ProtocolId::WbFreeFewAgents,
                                                   ProtocolId::WbFreeFewMoves,  ProtocolId::RingBhs};

    std::string_view to_string(ProtocolId id) noexcept;
    ProtocolId parse_protocol(std::string_view text);
    WhiteboardMode whiteboard_mode_for(ProtocolId id) noexcept;
    bool reports_interval(ProtocolId id) noexcept;
    int team_size(ProtocolId id, const TraversalPair &tp);

    // Moves of one protocol phase alongside the envelope it must respect.
    struct PhaseAccount
    {
        std::string name;
        Team team;
        int visits = 0;
        long moves = 0;
        double basis = 0;    // the asymptotic expression, evaluated
        double constant = 0; // generous constant the moves must stay under
        bool within() const noexcept { return moves <= constant * basis; }
    };

    struct ProtocolRun
    {
        RunResult result;
        int agents_used = 0;
        std::vector<PhaseAccount> phases;
    };

    // Builds the agent teams for `id` on a fresh engine and runs it. `interval`
    // feeds the standalone second-phase protocols (algo1, algo2); by default
    // they search the partition interval holding the rB-hole.
    ProtocolRun run_protocol(ProtocolId id, const EngineConfig &config, double p, double delta,
                             std::optional<Interval> interval = std::nullopt);

    ProtocolRun coloring_run(const EngineConfig &config, const ProtocolParams &params);
    ProtocolRun ring_bhs_run(const EngineConfig &config);
    ProtocolRun reduction_run(const EngineConfig &config, double p, double delta);
    ProtocolRun reducer_run(const EngineConfig &config, double p, double delta);
    ProtocolRun algo1_run(const EngineConfig &config, double p, double delta, Interval interval);
    ProtocolRun algo2_run(const EngineConfig &config, double p, double delta, Interval interval);
    ProtocolRun whiteboardfree_run(const EngineConfig &config, double p, double delta, bool few_moves);
}

#include "rbhs/engine.hpp"

#include "rbhs/error.hpp"
#include "rbhs/random.hpp"

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

namespace rbhs
{
    std::string_view to_string(SchedulerPolicy policy) noexcept
    {
        switch (policy)
        {
        case SchedulerPolicy::Random: return "random";
        case SchedulerPolicy::RoundRobin: return "round-robin";
        case SchedulerPolicy::AdversarySlow: return "adversary-slow";
        }
        return "?";
    }

    std::string_view to_string(WhiteboardMode mode) noexcept
    {
        return mode == WhiteboardMode::AllNodes ? "all-nodes" : "homebase-only";
    }

    SchedulerPolicy parse_scheduler(std::string_view text)
    {
        for (auto policy : all_schedulers)
        {
            if (to_string(policy) == text)
            {
                return policy;
            }
        }
        throw Error(ErrorCode::InvalidParams, "unknown scheduler '" + std::string(text) + "'");
    }

    std::string_view to_string(EventKind kind) noexcept
    {
        switch (kind)
        {
        case EventKind::Depart: return "depart";
        case EventKind::Arrive: return "arrive";
        case EventKind::DieEntry: return "die-entry";
        case EventKind::DieExit: return "die-exit";
        case EventKind::WbRead: return "wb-read";
        case EventKind::WbWrite: return "wb-write";
        case EventKind::Suspend: return "suspend";
        case EventKind::Wake: return "wake";
        case EventKind::Report: return "report";
        case EventKind::Halt: return "halt";
        }
        return "?";
    }

    std::string_view to_string(OutcomeKind kind) noexcept
    {
        switch (kind)
        {
        case OutcomeKind::NodeReport: return "node";
        case OutcomeKind::IntervalReport: return "interval";
        case OutcomeKind::NoOutput: return "no-output";
        }
        return "?";
    }

    int default_whiteboard_bits(int node_count)
    {
        int log2n = 0;
        while ((1 << log2n) < node_count)
        {
            ++log2n;
        }
        return 32 * std::max(1, log2n);
    }

    std::uint64_t Whiteboard::get(std::string_view key) const
    {
        auto it = std::lower_bound(m_entries.begin(), m_entries.end(), key,
                                   [](const auto &entry, std::string_view k) { return entry.first < k; });
        return (it != m_entries.end() && it->first == key) ? it->second : 0;
    }

    void Whiteboard::set(std::string_view key, std::uint64_t value)
    {
        auto it = std::lower_bound(m_entries.begin(), m_entries.end(), key,
                                   [](const auto &entry, std::string_view k) { return entry.first < k; });
        if (it != m_entries.end() && it->first == key)
        {
            it->second = value;
        }
        else
        {
            m_entries.emplace(it, std::string(key), value);
        }
    }

    int Whiteboard::used_bits() const
    {
        int bits = 0;
        for (const auto &[key, value] : m_entries)
        {
            bits += std::max(1, static_cast<int>(std::bit_width(value)));
        }
        return bits;
    }

    std::string to_jsonl(const Transcript &t)
    {
        std::ostringstream os;
        for (const auto &e : t.events)
        {
            nlohmann::ordered_json j;
            j["t"] = e.time;
            j["seq"] = e.seq;
            j["agent"] = e.agent;
            j["kind"] = to_string(e.kind);
            if (e.from >= 0)
                j["from"] = e.from;
            if (e.to >= 0)
                j["to"] = e.to;
            if (!e.key.empty())
            {
                j["key"] = e.key;
                j["value"] = e.value;
            }
            os << j.dump() << '\n';
        }
        nlohmann::ordered_json out;
        out["outcome"] = to_string(t.outcome.kind);
        out["node"] = t.outcome.node;
        out["lo"] = t.outcome.interval.lo;
        out["hi"] = t.outcome.interval.hi;
        out["reporter"] = t.outcome.reporter;
        out["t"] = t.outcome.time;
        os << out.dump() << '\n';
        return os.str();
    }

    // ---- AgentContext ----

    NodeId AgentContext::node() const { return m_engine->location_of(m_id); }
    NodeId AgentContext::homebase() const { return m_engine->tp().homebase(); }
    const TraversalPair &AgentContext::tp() const { return m_engine->tp(); }
    const Graph &AgentContext::graph() const { return m_engine->tp().g(); }
    std::uint64_t AgentContext::read(std::string_view key) const { return m_engine->wb_read(m_id, key); }
    void AgentContext::write(std::string_view key, std::uint64_t value) const { m_engine->wb_write(m_id, key, value); }

    detail::RequestAwaiter AgentContext::move_port(int port) const
    {
        const NodeId here = node();
        if (port < 0 || port >= graph().degree(here))
        {
            throw Error(ErrorCode::ProtocolBug, "invalid port " + std::to_string(port));
        }
        return move_to(graph().neighbor_at(here, port));
    }

    detail::RequestAwaiter AgentContext::report_node(NodeId v) const
    {
        Outcome o;
        o.kind = OutcomeKind::NodeReport;
        o.node = v;
        return {detail::ReportRequest{o}};
    }

    detail::RequestAwaiter AgentContext::report_interval(Interval iv) const
    {
        Outcome o;
        o.kind = OutcomeKind::IntervalReport;
        o.interval = iv;
        return {detail::ReportRequest{o}};
    }

    // ---- RunResult ----

    long RunResult::total_moves() const
    {
        long total = 0;
        for (const auto &a : agents)
            total += a.moves;
        return total;
    }

    int RunResult::alive() const
    {
        return static_cast<int>(std::count_if(agents.begin(), agents.end(), [](const auto &a) { return a.alive(); }));
    }

    int RunResult::alive_at_homebase(NodeId homebase) const
    {
        return static_cast<int>(std::count_if(agents.begin(), agents.end(), [&](const auto &a) {
            return a.alive() && a.status != AgentStatus::InTransit && a.location == homebase;
        }));
    }

    long RunResult::moves_of(int first_agent, int last_agent) const
    {
        long total = 0;
        for (int i = first_agent; i <= last_agent && i < static_cast<int>(agents.size()); ++i)
            total += agents[i].moves;
        return total;
    }

    // ---- Engine ----

    Engine::Engine(EngineConfig config) : m_config(std::move(config))
    {
        if (!m_config.tp)
        {
            throw Error(ErrorCode::InvalidParams, "engine needs a traversal pair");
        }
        const int n = m_config.tp->node_count();
        if (m_config.rbhole < 0 || m_config.rbhole >= n || m_config.rbhole == m_config.tp->homebase())
        {
            throw Error(ErrorCode::InvalidParams, "rB-hole must be a non-homebase node");
        }
        if (!(m_config.q_true >= 0.0 && m_config.q_true <= 1.0))
        {
            throw Error(ErrorCode::InvalidParams, "q_true must lie in [0,1]");
        }
        m_boards.resize(static_cast<std::size_t>(n));
        m_capacity_bits =
            m_config.whiteboard_capacity_bits > 0 ? m_config.whiteboard_capacity_bits : default_whiteboard_bits(n);
        m_coins.seed(derive_seed(m_config.seed, 1));
        m_delays.seed(derive_seed(m_config.seed, 2));
    }

    int Engine::add_agent(const ProgramFactory &factory, ArrivalGuard guard)
    {
        const int id = static_cast<int>(m_agents.size());
        m_agents.emplace_back();
        m_agents.back().guard = std::move(guard);
        m_agents.back().location = tp().homebase();
        m_agents.back().program = factory(AgentContext(this, id));
        return id;
    }

    void Engine::schedule(std::int64_t time, int agent, PendingKind kind, NodeId from, NodeId to)
    {
        m_queue.push(Pending{time, agent, m_seq++, kind, from, to});
    }

    void Engine::log(int agent, EventKind kind, NodeId from, NodeId to, std::string_view key, std::uint64_t value)
    {
        if (!m_config.record_transcript)
        {
            return;
        }
        m_transcript.events.push_back(Event{m_now, m_log_seq++, agent, kind, from, to, std::string(key), value});
    }

    bool Engine::coin_kills()
    {
        const bool killed = uniform_unit(m_coins) < m_config.q_true;
        if (!killed)
        {
            m_lucky = true;
        }
        return killed;
    }

    std::int64_t Engine::delay_for(int agent)
    {
        const std::int64_t n = tp().node_count();
        switch (m_config.scheduler)
        {
        case SchedulerPolicy::Random: return 1 + static_cast<std::int64_t>(uniform_below(m_delays, 10 * n));
        case SchedulerPolicy::RoundRobin: return 1;
        case SchedulerPolicy::AdversarySlow: return agent == m_config.slow_agent ? n * n : 1;
        }
        return 1;
    }

    void Engine::require_whiteboard(NodeId v) const
    {
        if (m_config.whiteboard_mode == WhiteboardMode::HomebaseOnly && v != tp().homebase())
        {
            throw Error(ErrorCode::NoWhiteboard, "node " + std::to_string(v) + " has no whiteboard");
        }
    }

    std::uint64_t Engine::wb_read(int agent, std::string_view key)
    {
        const NodeId here = m_agents.at(agent).location;
        require_whiteboard(here);
        const auto value = m_boards[here].get(key);
        log(agent, EventKind::WbRead, here, -1, key, value);
        return value;
    }

    void Engine::wb_write(int agent, std::string_view key, std::uint64_t value)
    {
        const NodeId here = m_agents.at(agent).location;
        require_whiteboard(here);
        Whiteboard &board = m_boards[here];
        board.set(key, value);
        if (board.used_bits() > m_capacity_bits)
        {
            throw Error(ErrorCode::WhiteboardOverflow, "node " + std::to_string(here) + " exceeds " +
                                                           std::to_string(m_capacity_bits) + " bits");
        }
        log(agent, EventKind::WbWrite, here, -1, key, value);
        for (int other = 0; other < agent_count(); ++other)
        {
            AgentSlot &slot = m_agents[other];
            if (slot.status == AgentStatus::Suspended && !slot.wake_scheduled && slot.location == here &&
                !slot.hold(board))
            {
                slot.wake_scheduled = true;
                schedule(m_now, other, PendingKind::Run);
            }
        }
    }

    void Engine::park(int agent, std::function<bool(const Whiteboard &)> hold)
    {
        AgentSlot &slot = m_agents[agent];
        require_whiteboard(slot.location);
        slot.status = AgentStatus::Suspended;
        slot.hold = std::move(hold);
        slot.wake_scheduled = false;
        log(agent, EventKind::Suspend, slot.location);
    }

    RunResult Engine::run()
    {
        for (int id = 0; id < agent_count(); ++id)
        {
            schedule(0, id, PendingKind::Run);
        }
        std::uint64_t processed = 0;
        while (!m_queue.empty() && !m_reported)
        {
            const Pending p = m_queue.top();
            m_queue.pop();
            if (++processed > m_config.event_cap)
            {
                throw Error(ErrorCode::RunawayProtocol, "event cap exceeded (seed " + std::to_string(m_config.seed) + ")");
            }
            m_now = p.time;
            if (p.kind == PendingKind::Arrive)
            {
                handle_arrival(p);
            }
            else
            {
                handle_run(p.agent);
            }
        }

        RunResult result;
        result.outcome = m_outcome;
        m_transcript.outcome = m_outcome;
        result.transcript = std::move(m_transcript);
        result.whiteboards = m_boards;
        result.lucky_survival = m_lucky;
        result.events_processed = processed;
        result.end_time = m_now;
        for (int id = 0; id < agent_count(); ++id)
        {
            const auto &slot = m_agents[id];
            result.agents.push_back(AgentSummary{id, slot.status, slot.location, slot.moves});
        }
        return result;
    }

    void Engine::handle_arrival(const Pending &p)
    {
        AgentSlot &slot = m_agents[p.agent];
        slot.location = p.to;
        if (p.to == m_config.rbhole && coin_kills())
        {
            slot.status = AgentStatus::Dead;
            log(p.agent, EventKind::DieEntry, p.from, p.to);
            return;
        }
        slot.status = AgentStatus::Ready;
        log(p.agent, EventKind::Arrive, p.from, p.to);
        if (slot.guard)
        {
            const Rank k = tp().rank(p.to);
            if (slot.guard(k, m_boards[p.to]))
            {
                auto guard = slot.guard;
                park(p.agent, [guard, k](const Whiteboard &wb) { return guard(k, wb); });
                return;
            }
        }
        resume(p.agent);
    }

    void Engine::handle_run(int agent)
    {
        AgentSlot &slot = m_agents[agent];
        if (slot.status == AgentStatus::Suspended)
        {
            slot.wake_scheduled = false;
            if (slot.hold(m_boards[slot.location]))
            {
                return; // re-armed by a later write
            }
            slot.status = AgentStatus::Ready;
            log(agent, EventKind::Wake, slot.location);
        }
        if (slot.status != AgentStatus::Ready)
        {
            return;
        }
        resume(agent);
    }

    void Engine::resume(int agent)
    {
        for (;;)
        {
            AgentSlot &slot = m_agents[agent];
            auto handle = slot.program.handle();
            handle.resume();
            auto &promise = handle.promise();
            if (promise.error)
            {
                std::rethrow_exception(promise.error);
            }
            if (handle.done())
            {
                slot.status = AgentStatus::Done;
                log(agent, EventKind::Halt, slot.location);
                return;
            }
            detail::Request request = std::exchange(promise.request, std::monostate{});

            if (auto *move = std::get_if<detail::MoveRequest>(&request))
            {
                const NodeId from = slot.location;
                if (move->to < 0 || move->to >= tp().node_count() || !tp().g().adjacent(from, move->to))
                {
                    throw Error(ErrorCode::ProtocolBug, "agent " + std::to_string(agent) + " moved along a missing edge " +
                                                            std::to_string(from) + "->" + std::to_string(move->to));
                }
                ++slot.moves;
                log(agent, EventKind::Depart, from, move->to);
                if (from == m_config.rbhole && coin_kills())
                {
                    slot.status = AgentStatus::Dead;
                    log(agent, EventKind::DieExit, from, move->to);
                    return;
                }
                slot.status = AgentStatus::InTransit;
                schedule(m_now + delay_for(agent), agent, PendingKind::Arrive, from, move->to);
                return;
            }
            if (auto *suspend = std::get_if<detail::SuspendRequest>(&request))
            {
                require_whiteboard(slot.location);
                if (!suspend->hold(m_boards[slot.location]))
                {
                    log(agent, EventKind::Suspend, slot.location);
                    log(agent, EventKind::Wake, slot.location);
                    continue;
                }
                park(agent, std::move(suspend->hold));
                return;
            }
            if (auto *report = std::get_if<detail::ReportRequest>(&request))
            {
                if (slot.location != tp().homebase())
                {
                    throw Error(ErrorCode::ProtocolBug, "report away from the homebase");
                }
                m_outcome = report->outcome;
                m_outcome.reporter = agent;
                m_outcome.time = m_now;
                m_reported = true;
                slot.status = AgentStatus::Reported;
                log(agent, EventKind::Report, slot.location, -1, {},
                    report->outcome.kind == OutcomeKind::NodeReport ? static_cast<std::uint64_t>(report->outcome.node)
                                                                    : static_cast<std::uint64_t>(report->outcome.interval.lo));
                return;
            }
            throw Error(ErrorCode::ProtocolBug, "agent yielded without a request");
        }
    }
}

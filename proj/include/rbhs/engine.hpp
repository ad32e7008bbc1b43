#pragma once

#include "rbhs/traversal.hpp"

#include <coroutine>
#include <cstdint>
#include <exception>
#include <functional>
#include <memory>
#include <optional>
#include <queue>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace rbhs
{
    enum class WhiteboardMode
    {
        AllNodes,
        HomebaseOnly
    };

    enum class SchedulerPolicy
    {
        Random,        // uniform delay in [1, 10n]
        RoundRobin,    // unit delays
        AdversarySlow, // one designated agent moves n^2 times slower
    };

    std::string_view to_string(SchedulerPolicy policy) noexcept;
    std::string_view to_string(WhiteboardMode mode) noexcept;
    SchedulerPolicy parse_scheduler(std::string_view text);
    inline constexpr SchedulerPolicy all_schedulers[] = {SchedulerPolicy::Random, SchedulerPolicy::RoundRobin,
                                                        SchedulerPolicy::AdversarySlow};

    struct EngineConfig
    {
        std::shared_ptr<const TraversalPair> tp;
        NodeId rbhole = -1;
        double q_true = 1.0;
        WhiteboardMode whiteboard_mode = WhiteboardMode::AllNodes;
        int whiteboard_capacity_bits = 0; // 0 selects 32 * ceil(log2 n)
        SchedulerPolicy scheduler = SchedulerPolicy::RoundRobin;
        int slow_agent = 0;
        std::uint64_t seed = 0;
        std::uint64_t event_cap = 20'000'000;
        bool record_transcript = true;
    };

    int default_whiteboard_bits(int node_count);

    // Per-node key/value store. Values are unsigned; each entry costs the bit
    // width of its value (at least one bit). Keys are protocol constants and
    // are not charged.
    class Whiteboard
    {
    public:
        std::uint64_t get(std::string_view key) const;
        void set(std::string_view key, std::uint64_t value);
        int used_bits() const;
        const std::vector<std::pair<std::string, std::uint64_t>> &entries() const noexcept { return m_entries; }

    private:
        std::vector<std::pair<std::string, std::uint64_t>> m_entries; // sorted by key
    };

    enum class EventKind
    {
        Depart,
        Arrive,
        DieEntry,
        DieExit,
        WbRead,
        WbWrite,
        Suspend,
        Wake,
        Report,
        Halt,
    };
    std::string_view to_string(EventKind kind) noexcept;

    struct Event
    {
        std::int64_t time = 0;
        std::uint64_t seq = 0;
        int agent = -1;
        EventKind kind = EventKind::Halt;
        NodeId from = -1;
        NodeId to = -1;
        std::string key;
        std::uint64_t value = 0;
    };

    enum class OutcomeKind
    {
        NodeReport,
        IntervalReport,
        NoOutput
    };
    std::string_view to_string(OutcomeKind kind) noexcept;

    struct Outcome
    {
        OutcomeKind kind = OutcomeKind::NoOutput;
        NodeId node = -1;    // NodeReport
        Interval interval{}; // IntervalReport (ranks)
        int reporter = -1;
        std::int64_t time = 0;
    };

    struct Transcript
    {
        std::vector<Event> events;
        Outcome outcome;
    };

    // One JSON object per line; the final line carries the outcome.
    std::string to_jsonl(const Transcript &t);

    class AgentProgram;

    namespace detail
    {
        struct MoveRequest
        {
            NodeId to = -1;
        };
        struct SuspendRequest
        {
            std::function<bool(const Whiteboard &)> hold;
        };
        struct ReportRequest
        {
            Outcome outcome;
        };
        using Request = std::variant<std::monostate, MoveRequest, SuspendRequest, ReportRequest>;
    }

    // Coroutine type for agent programs. The engine resumes the coroutine when
    // the previously requested action (move, suspension) has completed; an
    // agent that dies is simply never resumed again.
    class AgentProgram
    {
    public:
        struct promise_type
        {
            detail::Request request;
            std::exception_ptr error;

            AgentProgram get_return_object()
            {
                return AgentProgram(std::coroutine_handle<promise_type>::from_promise(*this));
            }
            std::suspend_always initial_suspend() noexcept { return {}; }
            std::suspend_always final_suspend() noexcept { return {}; }
            void return_void() noexcept {}
            void unhandled_exception() noexcept { error = std::current_exception(); }
        };

        AgentProgram() = default;
        explicit AgentProgram(std::coroutine_handle<promise_type> h) : m_handle(h) {}
        AgentProgram(AgentProgram &&other) noexcept : m_handle(std::exchange(other.m_handle, {})) {}
        AgentProgram &operator=(AgentProgram &&other) noexcept
        {
            if (this != &other)
            {
                reset();
                m_handle = std::exchange(other.m_handle, {});
            }
            return *this;
        }
        AgentProgram(const AgentProgram &) = delete;
        AgentProgram &operator=(const AgentProgram &) = delete;
        ~AgentProgram() { reset(); }

        std::coroutine_handle<promise_type> handle() const noexcept { return m_handle; }

    private:
        void reset()
        {
            if (m_handle)
            {
                m_handle.destroy();
                m_handle = {};
            }
        }

        std::coroutine_handle<promise_type> m_handle;
    };

    namespace detail
    {
        struct RequestAwaiter
        {
            Request request;

            bool await_ready() const noexcept { return false; }
            void await_suspend(std::coroutine_handle<AgentProgram::promise_type> h)
            {
                h.promise().request = std::move(request);
            }
            void await_resume() const noexcept {}
        };
    }

    class Engine;

    // Handle an agent program uses to act. Whiteboard access is immediate and
    // atomic (it happens at the current virtual instant); moves, suspensions and
    // reports are awaited.
    class AgentContext
    {
    public:
        AgentContext(Engine *engine, int id) : m_engine(engine), m_id(id) {}

        int id() const noexcept { return m_id; }
        NodeId node() const;
        NodeId homebase() const;
        const TraversalPair &tp() const;
        const Graph &graph() const;

        std::uint64_t read(std::string_view key) const;
        void write(std::string_view key, std::uint64_t value) const;

        detail::RequestAwaiter move_to(NodeId v) const { return {detail::MoveRequest{v}}; }
        detail::RequestAwaiter move_port(int port) const;
        // Resumes once `hold` evaluates false on this node's whiteboard.
        detail::RequestAwaiter suspend_while(std::function<bool(const Whiteboard &)> hold) const
        {
            return {detail::SuspendRequest{std::move(hold)}};
        }
        detail::RequestAwaiter report_node(NodeId v) const;
        detail::RequestAwaiter report_interval(Interval iv) const;

    private:
        Engine *m_engine;
        int m_id;
    };

    using ProgramFactory = std::function<AgentProgram(AgentContext)>;
    // Evaluated on every surviving arrival; returning true parks the agent at
    // the node until the guard turns false on that node's whiteboard.
    using ArrivalGuard = std::function<bool(Rank, const Whiteboard &)>;

    enum class AgentStatus
    {
        Ready,
        InTransit,
        Suspended,
        Dead,
        Done,
        Reported
    };

    struct AgentSummary
    {
        int id = 0;
        AgentStatus status = AgentStatus::Ready;
        NodeId location = -1; // last node reached; for a dead agent the node of death
        int moves = 0;
        bool alive() const noexcept { return status != AgentStatus::Dead; }
    };

    struct RunResult
    {
        Outcome outcome;
        Transcript transcript;
        std::vector<AgentSummary> agents;
        std::vector<Whiteboard> whiteboards;
        bool lucky_survival = false; // some agent survived a coin at the rB-hole
        std::uint64_t events_processed = 0;
        std::int64_t end_time = 0;

        long total_moves() const;
        int alive() const;
        int alive_at_homebase(NodeId homebase) const;
        long moves_of(int first_agent, int last_agent) const; // inclusive range
    };

    class Engine
    {
    public:
        explicit Engine(EngineConfig config);
        Engine(const Engine &) = delete;
        Engine &operator=(const Engine &) = delete;

        int add_agent(const ProgramFactory &factory, ArrivalGuard guard = {});
        int agent_count() const noexcept { return static_cast<int>(m_agents.size()); }

        RunResult run();

        const EngineConfig &config() const noexcept { return m_config; }
        const TraversalPair &tp() const noexcept { return *m_config.tp; }
        const Whiteboard &whiteboard(NodeId v) const { return m_boards.at(v); }

        // Agent-facing primitives (called through AgentContext).
        NodeId location_of(int agent) const { return m_agents.at(agent).location; }
        std::uint64_t wb_read(int agent, std::string_view key);
        void wb_write(int agent, std::string_view key, std::uint64_t value);

    private:
        struct AgentSlot
        {
            AgentProgram program;
            ArrivalGuard guard;
            AgentStatus status = AgentStatus::Ready;
            NodeId location = -1;
            int moves = 0;
            std::function<bool(const Whiteboard &)> hold;
            bool wake_scheduled = false;
        };

        enum class PendingKind
        {
            Run,
            Arrive
        };

        struct Pending
        {
            std::int64_t time;
            int agent;
            std::uint64_t seq;
            PendingKind kind;
            NodeId from;
            NodeId to;

            bool operator>(const Pending &o) const noexcept
            {
                if (time != o.time)
                    return time > o.time;
                if (agent != o.agent)
                    return agent > o.agent;
                return seq > o.seq;
            }
        };

        void schedule(std::int64_t time, int agent, PendingKind kind, NodeId from = -1, NodeId to = -1);
        void log(int agent, EventKind kind, NodeId from = -1, NodeId to = -1, std::string_view key = {},
                 std::uint64_t value = 0);
        bool coin_kills();
        std::int64_t delay_for(int agent);
        void require_whiteboard(NodeId v) const;
        void handle_arrival(const Pending &p);
        void handle_run(int agent);
        void resume(int agent);
        void park(int agent, std::function<bool(const Whiteboard &)> hold);

        EngineConfig m_config;
        std::vector<AgentSlot> m_agents;
        std::vector<Whiteboard> m_boards;
        std::priority_queue<Pending, std::vector<Pending>, std::greater<>> m_queue;
        std::mt19937_64 m_coins;
        std::mt19937_64 m_delays;
        std::int64_t m_now = 0;
        std::uint64_t m_seq = 0;
        std::uint64_t m_log_seq = 0;
        int m_capacity_bits = 0;
        bool m_lucky = false;
        bool m_reported = false;
        Outcome m_outcome;
        Transcript m_transcript;
    };
}

#include "rbhs/harness.hpp"
#include "rbhs/random.hpp"

#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>
#include <string>

using namespace rbhs;

namespace
{
    struct Sample
    {
        TrialSpec spec;
        std::shared_ptr<const TraversalPair> tp;
        ProtocolRun run;
    };

    // Recorded runs of `trials` planned trials.
    std::vector<Sample> samples(const std::string &graph, ProtocolId id, double p, double q, int trials,
                                std::uint64_t seed, const char *placement = "random")
    {
        ExperimentConfig cfg;
        cfg.graph = graph;
        cfg.protocol = id;
        cfg.p = p;
        cfg.q_true = q;
        cfg.trials = trials;
        cfg.seed = seed;
        cfg.guarantee_mode = false;
        cfg.placement = parse_placement(placement);
        auto tp = std::make_shared<const TraversalPair>(make_traversal_pair(load_graph(graph, derive_seed(seed, 0))));
        std::vector<Sample> out;
        for (const TrialSpec &spec : plan_trials(cfg, *tp))
        {
            out.push_back(Sample{spec, tp, run_trial(spec, tp, true)});
        }
        return out;
    }

    std::string where(const Sample &s)
    {
        return std::string(to_string(s.spec.protocol)) + " on " + s.spec.graph + " hole v" +
               std::to_string(s.spec.rbhole) + " " + std::string(to_string(s.spec.scheduler)) + " seed " +
               std::to_string(s.spec.seed);
    }

    std::vector<Sample> mixed_samples()
    {
        std::vector<Sample> all;
        std::uint64_t seed = 100;
        for (ProtocolId id : all_protocols)
        {
            for (const char *graph : {"ring:9", "complete:7"})
            {
                for (double q : {1.0, 0.5, 0.0})
                {
                    const double p = q == 0.0 ? 0.5 : q;
                    for (Sample &s : samples(graph, id, p, q, 12, ++seed))
                    {
                        all.push_back(std::move(s));
                    }
                }
            }
        }
        return all;
    }

    std::set<std::pair<NodeId, NodeId>> bounced_edges(const RunResult &r, int agent, NodeId homebase)
    {
        std::vector<std::pair<NodeId, NodeId>> moves;
        for (const Event &e : r.transcript.events)
        {
            if (e.agent == agent && e.kind == EventKind::Depart)
            {
                moves.emplace_back(e.from, e.to);
            }
        }
        std::set<std::pair<NodeId, NodeId>> out;
        for (std::size_t i = 2; i < moves.size(); ++i)
        {
            const auto [a, b] = moves[i - 2];
            if (moves[i - 1] == std::pair{b, a} && moves[i] == std::pair{a, b} && a != homebase && b != homebase)
            {
                out.emplace(std::min(a, b), std::max(a, b));
            }
        }
        return out;
    }
}

TEST_CASE("engine invariants hold on recorded protocol runs")
{
    for (const Sample &s : mixed_samples())
    {
        INFO(where(s));
        const RunResult &r = s.run.result;
        const NodeId hole = s.tp->node(s.spec.rbhole);

        long departs = 0;
        std::map<int, int> open_moves;
        std::set<int> dead;
        for (const Event &e : r.transcript.events)
        {
            CHECK(dead.count(e.agent) == 0);
            switch (e.kind)
            {
                case EventKind::Depart:
                    ++departs;
                    ++open_moves[e.agent];
                    break;
                case EventKind::Arrive: --open_moves[e.agent]; break;
                case EventKind::DieEntry:
                    CHECK(e.to == hole);
                    --open_moves[e.agent];
                    dead.insert(e.agent);
                    break;
                case EventKind::DieExit:
                    CHECK(e.from == hole);
                    --open_moves[e.agent];
                    dead.insert(e.agent);
                    break;
                default: break;
            }
        }
        CHECK(departs == r.total_moves());
        if (r.outcome.kind == OutcomeKind::NoOutput)
        {
            // Without a report ending the run early every traversal resolves.
            for (const auto &[agent, open] : open_moves)
            {
                CHECK(open == 0);
            }
        }
        for (const AgentSummary &a : r.agents)
        {
            CHECK(a.alive() == (dead.count(a.id) == 0));
        }
    }
}

TEST_CASE("colours never decrease")
{
    for (const ProtocolId id : {ProtocolId::Coloring, ProtocolId::Reduction})
    {
        for (double q : {1.0, 0.5})
        {
            for (const Sample &s : samples("ring:10", id, q, q, 40, 7))
            {
                INFO(where(s));
                std::map<NodeId, std::uint64_t> last;
                for (const Event &e : s.run.result.transcript.events)
                {
                    if (e.kind == EventKind::WbWrite && e.key == "c")
                    {
                        CHECK(e.value >= last[e.from]);
                        last[e.from] = e.value;
                    }
                }
            }
        }
    }
}

TEST_CASE("reducer and linear search agents probe disjoint nodes")
{
    std::size_t probes = 0;
    for (ProtocolId id : {ProtocolId::Reducer, ProtocolId::Algo2})
    {
        for (const char *graph : {"ring:16", "complete:9", "grid:4x5"})
        {
            for (const Sample &s : samples(graph, id, 0.5, 0.3, 30, 11))
            {
                INFO(where(s));
                const RunResult &r = s.run.result;
                const auto left = bounced_edges(r, 0, s.tp->homebase());
                const auto right = bounced_edges(r, 1, s.tp->homebase());
                probes += left.size() + right.size();
                for (const auto &edge : left)
                {
                    CHECK(right.count(edge) == 0);
                }
            }
        }
    }
    CHECK(probes > 0);
}

TEST_CASE("binary search halves are disjoint and cover the stage interval")
{
    for (const char *graph : {"ring:16", "grid:4x5", "random-biconnected:24,40"})
    {
        for (const Sample &s : samples(graph, ProtocolId::Algo1, 0.5, 0.5, 30, 13))
        {
            INFO(where(s));
            std::map<int, std::map<std::string, std::uint64_t>> record;
            std::map<std::uint64_t, std::vector<Interval>> halves;
            std::uint64_t lo = 0;
            std::uint64_t hi = 0;
            std::map<std::uint64_t, Interval> stage_interval;
            for (const Event &e : s.run.result.transcript.events)
            {
                if (e.kind != EventKind::WbWrite || e.key.rfind("g1.", 0) != 0)
                {
                    continue;
                }
                const std::string field = e.key.substr(3);
                if (field == "lo")
                {
                    lo = e.value;
                }
                else if (field == "hi")
                {
                    hi = e.value;
                }
                else if (field == "t")
                {
                    stage_interval[e.value] = Interval{static_cast<Rank>(lo), static_cast<Rank>(hi), 0};
                }
                else if (const std::size_t digits = field.find_first_of("0123456789"); digits != std::string::npos)
                {
                    const int agent = std::stoi(field.substr(digits));
                    const std::string name = field.substr(0, digits);
                    record[agent][name] = e.value;
                    if (name == "s")
                    {
                        halves[e.value].push_back(Interval{static_cast<Rank>(record[agent]["lo"]),
                                                           static_cast<Rank>(record[agent]["hi"]), 0});
                    }
                }
            }
            for (const auto &[stage, parts] : halves)
            {
                REQUIRE(parts.size() == 2);
                const Interval whole = stage_interval.at(stage);
                CHECK(parts[0].lo == whole.lo);
                CHECK(parts[0].hi + 1 == parts[1].lo);
                CHECK(parts[1].hi == whole.hi);
                CHECK(parts[0].lo <= parts[0].hi);
                CHECK(parts[1].lo <= parts[1].hi);
            }
        }
    }
}

TEST_CASE("wrapped agents treat the failed colouring node as a black hole")
{
    int checked = 0;
    for (const char *graph : {"ring:12", "complete:8"})
    {
        for (double q : {1.0, 0.5})
        {
            for (const Sample &s : samples(graph, ProtocolId::Reduction, q, q, 60, 17))
            {
                const RunResult &r = s.run.result;
                if (r.lucky_survival || r.agents[0].alive() || r.agents[1].alive())
                {
                    continue;
                }
                INFO(where(s));
                ++checked;
                const std::string phase = "ring-bhs/" + std::to_string(s.spec.rbhole % 2);
                const auto it = std::find_if(s.run.phases.begin(), s.run.phases.end(),
                                             [&](const PhaseAccount &a) { return a.name == phase; });
                REQUIRE(it != s.run.phases.end());
                const NodeId hole = s.tp->node(s.spec.rbhole);
                std::set<int> entered;
                for (const Event &e : r.transcript.events)
                {
                    if (e.agent < it->team.first || e.agent > it->team.last())
                    {
                        continue;
                    }
                    if (entered.count(e.agent) > 0)
                    {
                        CHECK(e.kind != EventKind::Depart);
                    }
                    if (e.kind == EventKind::Arrive && e.to == hole)
                    {
                        entered.insert(e.agent);
                    }
                }
            }
        }
    }
    CHECK(checked > 0);
}

#include "rbhs/suite.hpp"

#include "rbhs/error.hpp"
#include "rbhs/random.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <deque>
#include <sstream>

namespace rbhs
{
    namespace
    {
        using Clock = std::chrono::steady_clock;

        double seconds_since(Clock::time_point start)
        {
            return std::chrono::duration<double>(Clock::now() - start).count();
        }

        // Plain BFS distance inside `allowed` (from is always permitted); -1 if
        // unreachable. Deliberately independent of the library's path search.
        int window_distance(const Graph &g, NodeId from, NodeId to, const std::vector<bool> &allowed)
        {
            std::vector<int> dist(static_cast<std::size_t>(g.node_count()), -1);
            std::deque<NodeId> queue{from};
            dist[from] = 0;
            while (!queue.empty())
            {
                const NodeId u = queue.front();
                queue.pop_front();
                if (u == to)
                {
                    return dist[u];
                }
                for (NodeId w : g.neighbors(u))
                {
                    if (allowed[w] && dist[w] < 0)
                    {
                        dist[w] = dist[u] + 1;
                        queue.push_back(w);
                    }
                }
            }
            return -1;
        }

        std::vector<bool> ranks_window(const Ordering &o, Rank lo, Rank hi, bool with_homebase)
        {
            std::vector<bool> allowed(static_cast<std::size_t>(o.size()), false);
            for (Rank k = lo; k <= hi; ++k)
            {
                allowed[o.at(k)] = true;
            }
            if (with_homebase)
            {
                allowed[o.homebase()] = true;
            }
            return allowed;
        }

        // Hop lengths of both walks recomputed from distances alone, with the
        // homebase detour applied to hops longer than 2r.
        struct Oracle
        {
            int radius = 0;
            int size = 0;
            std::vector<int> left;  // left[i]: v_i -> v_{i+1}
            std::vector<int> right; // right[i]: v_{i+1} -> v_i
            std::vector<int> rl;    // constrained homebase distances, left side
            std::vector<int> rr;    // right side
        };

        Oracle oracle(const Graph &g, const Ordering &o)
        {
            const int n = o.size();
            const NodeId h = o.homebase();
            Oracle out;
            out.rl.assign(static_cast<std::size_t>(n) + 1, 0);
            out.rr.assign(static_cast<std::size_t>(n) + 1, 0);
            for (Rank k = 1; k <= n; ++k)
            {
                out.rl[k] = window_distance(g, h, o.at(k), ranks_window(o, 1, k, false));
                out.rr[k] = window_distance(g, h, o.at(k), ranks_window(o, k, n, true));
                out.radius = std::max({out.radius, out.rl[k], out.rr[k]});
            }
            out.left.assign(static_cast<std::size_t>(n), 0);
            out.right.assign(static_cast<std::size_t>(n), 0);
            int total_left = 0;
            int total_right = 0;
            for (Rank i = 1; i < n; ++i)
            {
                int l = window_distance(g, o.at(i), o.at(i + 1), ranks_window(o, 1, i + 1, false));
                if (l > 2 * out.radius)
                {
                    l = out.rl[i] + out.rl[i + 1];
                }
                int r = window_distance(g, o.at(i + 1), o.at(i), ranks_window(o, i, n, false));
                if (r > 2 * out.radius)
                {
                    r = out.rr[i + 1] + out.rr[i];
                }
                out.left[i] = l;
                out.right[i] = r;
                total_left += l;
                total_right += r;
            }
            out.size = std::max(total_left, total_right);
            return out;
        }

        template <typename... Parts>
        std::string cat(const Parts &...parts)
        {
            std::ostringstream os;
            (os << ... << parts);
            return os.str();
        }

        struct Tally
        {
            long checked = 0;
            long violations = 0;
            std::string first;

            void check(bool ok, const std::string &what)
            {
                ++checked;
                if (!ok)
                {
                    if (violations == 0)
                    {
                        first = what;
                    }
                    ++violations;
                }
            }
            std::string summary(const char *unit) const
            {
                std::string s = cat(checked, ' ', unit, ", ", violations, " violations");
                if (violations > 0)
                {
                    s += "; first: " + first;
                }
                return s;
            }
        };

        // Per-trial checks shared by criteria 5, 6 and 8.
        struct Shared
        {
            Tally budgets;
            Tally envelopes;
            Tally survivors;
        };

        std::string trial_tag(const TrialRecord &r)
        {
            return cat(to_string(r.spec.protocol), " on ", r.spec.graph, " hole v", r.spec.rbhole, " ",
                       to_string(r.spec.scheduler), " seed ", r.spec.seed);
        }

        void check_envelopes(Shared &shared, const TrialRecord &r)
        {
            for (const PhaseAccount &phase : r.run.phases)
            {
                shared.envelopes.check(phase.within(), cat(trial_tag(r), ": ", phase.name, " moves ", phase.moves, " > ",
                                                           phase.constant, " * ", phase.basis));
            }
        }

        void check_budget(Shared &shared, const TrialRecord &r, const TraversalPair &tp)
        {
            const int used = r.run.agents_used;
            bool ok = true;
            switch (r.spec.protocol)
            {
                case ProtocolId::Reduction: ok = used <= 2 + 2 * ring_bhs_protocol().agents; break;
                case ProtocolId::WbFreeFewAgents: ok = used == 4; break;
                case ProtocolId::WbFreeFewMoves:
                    ok = used <= static_cast<int>(std::ceil(std::log2(std::max(tp.radius, 1)))) + 4;
                    break;
                default: break;
            }
            shared.budgets.check(ok, cat(trial_tag(r), ": ", used, " agents"));
        }

        // Observer for the composite experiments of criteria 2-4.
        TrialObserver composite_observer(Shared &shared, const TraversalPair &tp)
        {
            return [&shared, &tp](const TrialRecord &r) {
                check_budget(shared, r, tp);
                check_envelopes(shared, r);
                shared.survivors.check(r.survivors >= 1, trial_tag(r) + ": no live agent at the homebase");
            };
        }

        ExperimentConfig experiment(const std::string &graph, ProtocolId id, double p, double q, double delta,
                                    int trials, std::uint64_t seed, const SuiteOptions &options)
        {
            ExperimentConfig cfg;
            cfg.graph = graph;
            cfg.protocol = id;
            cfg.p = p;
            cfg.q_true = q;
            cfg.delta = delta;
            cfg.trials = trials;
            cfg.seed = seed;
            cfg.threads = options.threads;
            return cfg;
        }

        std::shared_ptr<const TraversalPair> pair_for(const std::string &graph, std::uint64_t seed)
        {
            return std::make_shared<const TraversalPair>(make_traversal_pair(load_graph(graph, derive_seed(seed, 0))));
        }

        CriterionResult finish(int id, std::string title, bool pass, std::string detail, Clock::time_point start,
                               double limit_seconds = 0)
        {
            CriterionResult r;
            r.id = id;
            r.title = std::move(title);
            r.seconds = seconds_since(start);
            r.pass = pass;
            r.detail = std::move(detail);
            if (limit_seconds > 0 && r.seconds >= limit_seconds)
            {
                r.pass = false;
                r.detail += cat("; runtime over the ", limit_seconds, " s limit");
            }
            return r;
        }

        CriterionResult criterion1(const SuiteOptions &options)
        {
            const auto start = Clock::now();
            std::vector<std::string> specs;
            for (int n = 4; n <= 16; ++n)
            {
                specs.push_back(cat("ring:", n));
            }
            for (int n = 3; n <= 9; ++n)
            {
                specs.push_back(cat("complete:", n));
            }
            specs.push_back("grid:3x4");
            std::mt19937_64 rng(derive_seed(options.seed, 101));
            for (int i = 0; i < 100; ++i)
            {
                const int n = 4 + static_cast<int>(uniform_below(rng, 29));
                const int max_m = std::min(n * (n - 1) / 2, 3 * n);
                const int m = n + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(max_m - n + 1)));
                specs.push_back(cat("random-biconnected:", n, ",", m));
            }
            Tally tally;
            std::uint64_t graph_seed = derive_seed(options.seed, 102);
            for (const std::string &spec : specs)
            {
                graph_seed = splitmix64(graph_seed);
                const auto tp = make_traversal_pair(load_graph(spec, graph_seed));
                const std::string problem = check_traversal_pair(tp);
                tally.check(problem.empty(), spec + ": " + problem);
            }
            return finish(1, "traversal-pair validity", tally.violations == 0, tally.summary("graphs"), start, 10);
        }

        CriterionResult criterion2(const SuiteOptions &options, Shared &shared)
        {
            const auto start = Clock::now();
            std::vector<std::string> graphs;
            for (int n = 4; n <= 16; ++n)
            {
                graphs.push_back(cat("ring:", n));
            }
            for (int n = 4; n <= 9; ++n)
            {
                graphs.push_back(cat("complete:", n));
            }
            const ProtocolId protocols[] = {ProtocolId::Reduction, ProtocolId::WbFreeFewAgents,
                                            ProtocolId::WbFreeFewMoves, ProtocolId::RingBhs};
            Tally tally;
            long trials = 0;
            for (const std::string &graph : graphs)
            {
                const auto tp = pair_for(graph, options.seed);
                for (ProtocolId id : protocols)
                {
                    // Every placement x policy cell, once per choice of slow agent.
                    const int cells = (tp->node_count() - 1) * 3;
                    ExperimentConfig cfg =
                        experiment(graph, id, 1.0, 1.0, 0.1, cells * team_size(id, *tp), options.seed, options);
                    const ExperimentReport rep = run_experiment(cfg, composite_observer(shared, *tp));
                    trials += rep.trials;
                    tally.check(rep.wrong_count == 0 && rep.no_output_count == 0 && rep.min_survivors >= 1,
                                cat(graph, " ", rep.protocol, ": wrong ", rep.wrong_count, ", no-output ",
                                    rep.no_output_count, ", min survivors ", rep.min_survivors));
                }
            }
            return finish(2, "black-hole degeneration", tally.violations == 0,
                          cat(trials, " trials; ", tally.summary("experiments")), start, 60);
        }

        struct Combo
        {
            const char *graph;
            ProtocolId id;
        };
        constexpr Combo mc_combos[] = {{"ring:16", ProtocolId::Reduction},
                                       {"complete:9", ProtocolId::WbFreeFewAgents},
                                       {"complete:9", ProtocolId::WbFreeFewMoves}};

        CriterionResult monte_carlo(int id, std::string title, const std::vector<std::pair<double, double>> &pq,
                                    const SuiteOptions &options, Shared &shared, double limit)
        {
            const auto start = Clock::now();
            Tally tally;
            double worst_margin = -1;
            std::uint64_t seed = derive_seed(options.seed, 300 + static_cast<std::uint64_t>(id));
            for (const Combo &combo : mc_combos)
            {
                for (const auto &[p, q] : pq)
                {
                    for (double delta : {0.05, 0.1})
                    {
                        seed = splitmix64(seed);
                        ExperimentConfig cfg = experiment(combo.graph, combo.id, p, q, delta, 2000, seed, options);
                        const auto tp = pair_for(combo.graph, seed);
                        const ExperimentReport rep = run_experiment(cfg, composite_observer(shared, *tp));
                        const double threshold = acceptance_threshold(delta, rep.trials);
                        worst_margin = std::max(worst_margin, rep.error_rate - threshold);
                        tally.check(rep.error_rate <= threshold && rep.no_output_count == 0,
                                    cat(combo.graph, " ", rep.protocol, " p=", p, " q=", q, " delta=", delta,
                                        ": error rate ", rep.error_rate, " vs ", threshold, ", no-output ",
                                        rep.no_output_count));
                    }
                }
            }
            char margin[64];
            std::snprintf(margin, sizeof margin, "%.4f", worst_margin);
            return finish(id, std::move(title), tally.violations == 0,
                          cat(tally.summary("experiments"), "; worst rate minus threshold ", margin), start, limit);
        }

        CriterionResult criterion5(const Shared &shared)
        {
            const auto start = Clock::now();
            return finish(5, "agent budgets", shared.budgets.violations == 0, shared.budgets.summary("trials"), start);
        }

        CriterionResult criterion6(const SuiteOptions &options, Shared &shared)
        {
            const auto start = Clock::now();
            struct Standalone
            {
                const char *graph;
                ProtocolId id;
                double p;
                double q;
                int trials;
            };
            const Standalone runs[] = {
                {"ring:16", ProtocolId::Coloring, 0.5, 0.5, 500},
                {"complete:9", ProtocolId::Coloring, 0.5, 0.5, 500},
                {"grid:3x4", ProtocolId::Coloring, 0.3, 0.3, 500},
                {"random-biconnected:24,40", ProtocolId::Coloring, 0.5, 0.5, 500},
                {"complete:9", ProtocolId::Reducer, 0.5, 0.5, 2000},
                {"ring:16", ProtocolId::Reducer, 0.3, 0.3, 500},
                {"grid:4x5", ProtocolId::Reducer, 0.5, 0.5, 500},
                {"ring:16", ProtocolId::Algo1, 0.5, 0.5, 500},
                {"grid:4x5", ProtocolId::Algo1, 0.3, 0.3, 500},
                {"random-biconnected:24,40", ProtocolId::Algo1, 0.5, 0.5, 500},
                {"ring:16", ProtocolId::Algo2, 0.5, 0.5, 500},
                {"grid:4x5", ProtocolId::Algo2, 0.3, 0.3, 500},
                {"random-biconnected:24,40", ProtocolId::Algo2, 0.5, 0.5, 500},
                {"ring:16", ProtocolId::RingBhs, 1.0, 1.0, 90},
                {"complete:9", ProtocolId::RingBhs, 1.0, 1.0, 48},
            };
            std::uint64_t seed = derive_seed(options.seed, 600);
            for (const Standalone &s : runs)
            {
                seed = splitmix64(seed);
                ExperimentConfig cfg = experiment(s.graph, s.id, s.p, s.q, 0.1, s.trials, seed, options);
                cfg.placement = parse_placement("random");
                run_experiment(cfg, [&](const TrialRecord &r) { check_envelopes(shared, r); });
            }
            return finish(6, "move envelopes", shared.envelopes.violations == 0,
                          shared.envelopes.summary("phase checks"), start);
        }

        CriterionResult criterion7(const SuiteOptions &options)
        {
            const auto start = Clock::now();
            const char *graphs[] = {"ring:16", "complete:9", "grid:3x4", "random-biconnected:16,24"};
            Tally tally;
            long no_output = 0;
            std::uint64_t seed = derive_seed(options.seed, 700);
            for (double q : {1.0, 0.5})
            {
                for (const char *graph : graphs)
                {
                    seed = splitmix64(seed);
                    ExperimentConfig cfg = experiment(graph, ProtocolId::Coloring, 0.5, q, 0.1, 250, seed, options);
                    cfg.placement = parse_placement("random");
                    const auto tp = pair_for(graph, seed);
                    run_experiment(cfg, [&](const TrialRecord &r) {
                        if (r.run.result.outcome.kind != OutcomeKind::NoOutput || r.run.result.lucky_survival)
                        {
                            return;
                        }
                        ++no_output;
                        const std::string problem = check_coloring_failure(r.run.result, *tp, r.spec.rbhole);
                        tally.check(problem.empty(), trial_tag(r) + ": " + problem);
                    });
                }
            }
            return finish(7, "coloring failure pattern", tally.violations == 0 && no_output > 0,
                          cat(no_output, " failed runs without lucky survival checked, ", tally.violations,
                              " violations", tally.violations > 0 ? "; first: " + tally.first : std::string()),
                          start);
        }

        CriterionResult criterion8(const Shared &shared)
        {
            const auto start = Clock::now();
            return finish(8, "survivor guarantee", shared.survivors.violations == 0 && shared.survivors.checked > 0,
                          shared.survivors.summary("trials"), start);
        }

        CriterionResult criterion9(const SuiteOptions &options)
        {
            const auto start = Clock::now();
            Tally tally;
            struct Case
            {
                const char *graph;
                ProtocolId id;
                double p;
                double q;
            };
            const Case cases[] = {
                {"ring:8", ProtocolId::Reduction, 0.5, 0.5},       {"complete:9", ProtocolId::WbFreeFewMoves, 0.3, 0.7},
                {"complete:9", ProtocolId::WbFreeFewAgents, 0.5, 0.5}, {"grid:3x4", ProtocolId::Coloring, 0.5, 0.5},
                {"ring:16", ProtocolId::Algo1, 0.5, 0.5},          {"grid:4x5", ProtocolId::Algo2, 0.3, 0.3},
                {"ring:8", ProtocolId::RingBhs, 1.0, 1.0},         {"random-biconnected:20,30", ProtocolId::Reducer, 0.5, 0.5},
            };
            std::uint64_t seed = derive_seed(options.seed, 900);
            for (const Case &c : cases)
            {
                for (SchedulerPolicy policy : all_schedulers)
                {
                    seed = splitmix64(seed);
                    TrialSpec spec;
                    spec.graph = c.graph;
                    spec.graph_seed = derive_seed(seed, 0);
                    spec.protocol = c.id;
                    spec.p = c.p;
                    spec.q_true = c.q;
                    spec.scheduler = policy;
                    spec.slow_agent = 1;
                    spec.seed = seed;
                    const auto tp = trial_traversal_pair(spec);
                    spec.rbhole = 2 + static_cast<Rank>(seed % static_cast<std::uint64_t>(tp->node_count() - 1));
                    const std::string a = transcript_document(spec, run_trial(spec, tp, true));
                    const std::string b = transcript_document(spec, run_trial(spec, trial_traversal_pair(spec), true));
                    tally.check(a == b, cat(c.graph, " ", to_string(c.id), ": transcripts differ"));
                    const ReplayResult replay = replay_transcript(a);
                    tally.check(replay.identical, cat(c.graph, " ", to_string(c.id), ": replay ", replay.detail));
                }
            }
            ExperimentConfig cfg = experiment("ring:8", ProtocolId::Reduction, 0.5, 0.5, 0.1, 300, options.seed, options);
            cfg.placement = parse_placement("random");
            const std::string first = report_json(run_experiment(cfg));
            tally.check(first == report_json(run_experiment(cfg)), "experiment report differs between runs");
            cfg.threads = 4;
            tally.check(first == report_json(run_experiment(cfg)), "experiment report depends on the thread count");
            return finish(9, "determinism", tally.violations == 0, tally.summary("comparisons"), start);
        }
    }

    std::string check_traversal_pair(const TraversalPair &tp)
    {
        const Graph &g = tp.g();
        const int n = tp.node_count();
        const NodeId h = tp.homebase();
        if (n < 2 || tp.pi_left.empty() || tp.pi_right.empty())
        {
            return "degenerate pair";
        }
        if (tp.pi_left.front() != tp.node(1) || tp.pi_right.front() != tp.node(n) || tp.pi_right.back() != h)
        {
            return "walk endpoints";
        }
        for (const auto *walk : {&tp.pi_left, &tp.pi_right})
        {
            for (std::size_t i = 1; i < walk->size(); ++i)
            {
                if (!g.adjacent((*walk)[i - 1], (*walk)[i]))
                {
                    return cat("walk uses a missing edge at position ", i);
                }
            }
        }
        // First occurrences, marks and the prefix / suffix crossing property.
        std::vector<int> first_left(static_cast<std::size_t>(n) + 1, -1);
        std::vector<int> first_right(static_cast<std::size_t>(n) + 1, -1);
        for (int i = 0; i < static_cast<int>(tp.pi_left.size()); ++i)
        {
            const Rank k = tp.rank(tp.pi_left[i]);
            if (first_left[k] < 0)
            {
                first_left[k] = i;
            }
        }
        for (int i = 0; i < static_cast<int>(tp.pi_right.size()); ++i)
        {
            const Rank k = tp.rank(tp.pi_right[i]);
            if (first_right[k] < 0)
            {
                first_right[k] = i;
            }
        }
        for (Rank j = 1; j <= n; ++j)
        {
            if (first_left[j] < 0 || first_right[j] < 0)
            {
                return cat("v", j, " missing from a walk");
            }
            if (tp.left_mark[j] != first_left[j])
            {
                return cat("left mark of v", j);
            }
            if (j > 1 && tp.right_mark[j] != first_right[j])
            {
                return cat("right mark of v", j);
            }
            if (j < n && tp.left_mark[j] >= tp.left_mark[j + 1])
            {
                return "left first occurrences out of order";
            }
            if (j < n && tp.right_mark[j] <= tp.right_mark[j + 1])
            {
                return "right first occurrences out of order";
            }
            for (int i = 0; i < first_left[j]; ++i)
            {
                if (tp.rank(tp.pi_left[i]) > j)
                {
                    return cat("left walk crosses v", tp.rank(tp.pi_left[i]), " before reaching v", j);
                }
            }
            for (int i = 0; i < tp.right_mark[j]; ++i)
            {
                const NodeId v = tp.pi_right[i];
                if (v != h && tp.rank(v) < j)
                {
                    return cat("right walk crosses v", tp.rank(v), " before reaching v", j);
                }
            }
        }
        if (tp.right_mark[1] != static_cast<int>(tp.pi_right.size()) - 1)
        {
            return "homebase mark on the right walk";
        }

        const Oracle o = oracle(g, tp.ordering);
        const int walk_size = static_cast<int>(std::max(tp.pi_left.size(), tp.pi_right.size())) - 1;
        if (tp.size != walk_size)
        {
            return cat("size ", tp.size, " but longest walk has ", walk_size, " edges");
        }
        if (tp.radius != o.radius)
        {
            return cat("radius ", tp.radius, " vs oracle ", o.radius);
        }
        if (tp.size != o.size)
        {
            return cat("size ", tp.size, " vs oracle ", o.size);
        }
        if (tp.radius > tp.size || tp.size > (n - 1) * n)
        {
            return "size / radius ordering";
        }
        for (Rank i = 1; i < n; ++i)
        {
            const int w = interval_weight(tp, i, i + 1);
            if (w != o.left[i] + o.right[i])
            {
                return cat("weight of [v", i, ", v", i + 1, "] is ", w, " vs oracle ", o.left[i] + o.right[i]);
            }
            if (w > 4 * tp.radius)
            {
                return cat("weight above 4r at v", i);
            }
        }
        const TraversalPair again = normalize_property1(tp);
        if (again.pi_left != tp.pi_left || again.pi_right != tp.pi_right)
        {
            return "normalization is not idempotent";
        }

        // Greedy replay on oracle weights.
        const IntervalPartition part = partition_viable(tp);
        std::vector<Interval> expected;
        Rank lo = 1;
        int weight = 0;
        for (Rank k = 1; k <= n; ++k)
        {
            if (k > lo)
            {
                weight += o.left[k - 1] + o.right[k - 1];
            }
            if (weight >= 2 * o.radius || k == n)
            {
                expected.push_back(Interval{lo, k, weight});
                lo = k + 1;
                weight = 0;
            }
        }
        if (part.intervals != expected)
        {
            return "partition differs from the greedy replay";
        }
        Rank next = 1;
        for (int i = 0; i < part.size(); ++i)
        {
            const Interval &iv = part.intervals[static_cast<std::size_t>(i)];
            if (iv.lo != next || iv.hi < iv.lo)
            {
                return "partition is not a disjoint cover";
            }
            next = iv.hi + 1;
            if (i + 1 < part.size() && iv.weight < 2 * tp.radius)
            {
                return cat("interval ", i + 1, " lighter than 2r");
            }
            if (iv.weight > 6 * tp.radius || iv.count() > tp.radius + 1)
            {
                return cat("interval ", i + 1, " is not viable");
            }
        }
        if (next != n + 1)
        {
            return "partition does not reach v_n";
        }

        for (Rank k = 1; k <= n; ++k)
        {
            for (Side side : {Side::Left, Side::Right})
            {
                const auto path = access_path(tp, tp.node(k), side);
                const int expect = side == Side::Left ? o.rl[k] : o.rr[k];
                if (path.front() != h || path.back() != tp.node(k) || static_cast<int>(path.size()) - 1 != expect ||
                    expect > tp.radius)
                {
                    return cat("access path to v", k);
                }
                for (std::size_t i = 0; i < path.size(); ++i)
                {
                    const Rank r = tp.rank(path[i]);
                    const bool inside = side == Side::Left ? r <= k : (r >= k || path[i] == h);
                    if (!inside || (i > 0 && !g.adjacent(path[i - 1], path[i])))
                    {
                        return cat("access path to v", k, " leaves its window");
                    }
                }
            }
        }
        return {};
    }

    std::string check_coloring_failure(const RunResult &result, const TraversalPair &tp, Rank g)
    {
        const int n = tp.node_count();
        auto color = [&](Rank k) { return result.whiteboards.at(tp.node(k)).get(color_key); };
        if (color(g) >= 3)
        {
            return cat("c(v_g) = ", color(g));
        }
        for (Rank j = 1; j <= n; ++j)
        {
            if (j >= g - 1 && j <= g + 1)
            {
                continue;
            }
            if (color(j) != 3)
            {
                return cat("c(v", j, ") = ", color(j), " with g = ", g);
            }
        }
        if (g > 1 && color(g - 1) < 2)
        {
            return cat("c(v_{g-1}) = ", color(g - 1));
        }
        if (g < n && color(g + 1) < 2)
        {
            return cat("c(v_{g+1}) = ", color(g + 1));
        }
        return {};
    }

    std::string format_result(const CriterionResult &r)
    {
        char timing[32];
        std::snprintf(timing, sizeof timing, "%.1f s", r.seconds);
        return cat("criterion ", r.id, ": ", r.pass ? "PASS" : "FAIL", "  ", r.title, " (", r.detail, ") [", timing,
                   "]");
    }

    std::vector<CriterionResult> run_acceptance_suite(const SuiteOptions &options,
                                                      const std::function<void(const CriterionResult &)> &on_done)
    {
        std::vector<CriterionResult> results;
        auto record = [&](CriterionResult r) {
            if (on_done)
            {
                on_done(r);
            }
            results.push_back(std::move(r));
        };
        Shared shared;
        record(criterion1(options));
        record(criterion2(options, shared));
        record(monte_carlo(3, "error-probability bounds", {{0.3, 0.3}, {0.5, 0.5}}, options, shared, 300));
        record(monte_carlo(4, "pessimistic p robustness", {{0.3, 0.7}}, options, shared, 0));
        record(criterion5(shared));
        record(criterion6(options, shared));
        record(criterion7(options));
        record(criterion8(shared));
        record(criterion9(options));
        return results;
    }
}

#include "rbhs/harness.hpp"

#include "rbhs/error.hpp"
#include "rbhs/random.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

namespace rbhs
{
    namespace
    {
        using ojson = nlohmann::ordered_json;

        bool is_generator(const std::string &spec)
        {
            for (std::string_view prefix : {"ring:", "complete:", "grid:", "random-biconnected:"})
            {
                if (spec.rfind(prefix, 0) == 0)
                {
                    return true;
                }
            }
            return false;
        }

        std::string strip_code(const Error &e)
        {
            const std::string what = e.what();
            const auto colon = what.find(": ");
            return colon == std::string::npos ? what : what.substr(colon + 2);
        }

        std::string fixed6(double x)
        {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.6f", x);
            return buf;
        }

        ojson wilson_json(const WilsonInterval &w) { return ojson{{"lo", w.lo}, {"hi", w.hi}}; }
    }

    std::string Placement::str() const
    {
        switch (kind)
        {
            case PlacementKind::Fixed: return "fixed:" + std::to_string(rank);
            case PlacementKind::Exhaustive: return "exhaustive";
            case PlacementKind::Random: return "random";
        }
        return "?";
    }

    Placement parse_placement(std::string_view text)
    {
        if (text == "exhaustive")
        {
            return Placement{PlacementKind::Exhaustive, 2};
        }
        if (text == "random")
        {
            return Placement{PlacementKind::Random, 2};
        }
        if (text.rfind("fixed:", 0) == 0)
        {
            const std::string digits(text.substr(6));
            if (!digits.empty() && std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; }))
            {
                return Placement{PlacementKind::Fixed, std::stoi(digits)};
            }
        }
        throw Error(ErrorCode::InvalidParams, "placement must be exhaustive, random or fixed:K, got '" +
                                                  std::string(text) + "'");
    }

    std::shared_ptr<const Graph> load_graph(const std::string &spec, std::uint64_t seed)
    {
        if (is_generator(spec))
        {
            return std::make_shared<const Graph>(generate_graph(spec, seed));
        }
        std::ifstream in(spec);
        if (!in)
        {
            throw Error(ErrorCode::IoError, "cannot read graph file '" + spec + "'");
        }
        std::ostringstream text;
        text << in.rdbuf();
        return std::make_shared<const Graph>(parse_graph(text.str()));
    }

    void ExperimentConfig::validate() const
    {
        if (trials < 1)
        {
            throw Error(ErrorCode::InvalidParams, "trials must be positive");
        }
        if (!(p > 0.0 && p <= 1.0) || !(delta > 0.0 && delta <= 1.0) || !(q_true >= 0.0 && q_true <= 1.0))
        {
            throw Error(ErrorCode::InvalidParams, "need 0 < p <= 1, 0 <= q_true <= 1, 0 < delta <= 1");
        }
        if (guarantee_mode && q_true < p)
        {
            throw Error(ErrorCode::InvalidParams, "q_true below the assumed lower bound p");
        }
        if (threads < 1)
        {
            throw Error(ErrorCode::InvalidParams, "threads must be positive");
        }
    }

    std::string_view to_string(Verdict v) noexcept
    {
        switch (v)
        {
            case Verdict::Correct: return "correct";
            case Verdict::Wrong: return "wrong";
            case Verdict::NoOutput: return "no-output";
        }
        return "?";
    }

    Verdict classify(const Outcome &outcome, const TraversalPair &tp, NodeId rbhole)
    {
        switch (outcome.kind)
        {
            case OutcomeKind::NoOutput: return Verdict::NoOutput;
            case OutcomeKind::NodeReport: return outcome.node == rbhole ? Verdict::Correct : Verdict::Wrong;
            case OutcomeKind::IntervalReport:
                return outcome.interval.contains(tp.rank(rbhole)) ? Verdict::Correct : Verdict::Wrong;
        }
        return Verdict::NoOutput;
    }

    EngineConfig engine_config(const TrialSpec &spec, std::shared_ptr<const TraversalPair> tp, bool record)
    {
        if (spec.rbhole < 2 || spec.rbhole > tp->node_count())
        {
            throw Error(ErrorCode::InvalidParams, "rB-hole rank " + std::to_string(spec.rbhole) + " outside [2, n]");
        }
        EngineConfig config;
        config.rbhole = tp->node(spec.rbhole);
        config.tp = std::move(tp);
        config.q_true = spec.q_true;
        config.whiteboard_mode = whiteboard_mode_for(spec.protocol);
        config.scheduler = spec.scheduler;
        config.slow_agent = spec.slow_agent;
        config.seed = spec.seed;
        config.record_transcript = record;
        return config;
    }

    ProtocolRun run_trial(const TrialSpec &spec, std::shared_ptr<const TraversalPair> tp, bool record)
    {
        return run_protocol(spec.protocol, engine_config(spec, std::move(tp), record), spec.p, spec.delta);
    }

    WilsonInterval wilson_interval(long wrong, long n, double z)
    {
        if (n <= 0 || wrong < 0 || wrong > n)
        {
            throw Error(ErrorCode::InvalidParams, "wilson interval needs 0 <= wrong <= n and n >= 1");
        }
        const double nn = static_cast<double>(n);
        const double phat = static_cast<double>(wrong) / nn;
        const double z2 = z * z;
        const double denom = 1.0 + z2 / nn;
        const double centre = (phat + z2 / (2.0 * nn)) / denom;
        const double half = z / denom * std::sqrt(phat * (1.0 - phat) / nn + z2 / (4.0 * nn * nn));
        WilsonInterval w{std::clamp(centre - half, 0.0, 1.0), std::clamp(centre + half, 0.0, 1.0)};
        // Keep the point estimate inside despite rounding at the boundaries.
        w.lo = std::min(w.lo, phat);
        w.hi = std::max(w.hi, phat);
        return w;
    }

    double acceptance_threshold(double delta, long trials)
    {
        return delta + 3.0 * std::sqrt(delta * (1.0 - delta) / static_cast<double>(trials));
    }

    std::vector<TrialSpec> plan_trials(const ExperimentConfig &cfg, const TraversalPair &tp)
    {
        const int n = tp.node_count();
        std::vector<Rank> ranks;
        switch (cfg.placement.kind)
        {
            case PlacementKind::Fixed:
                if (cfg.placement.rank < 2 || cfg.placement.rank > n)
                {
                    throw Error(ErrorCode::InvalidParams,
                                "fixed placement rank must lie in [2, " + std::to_string(n) + "]");
                }
                ranks.push_back(cfg.placement.rank);
                break;
            case PlacementKind::Exhaustive:
                for (Rank k = 2; k <= n; ++k)
                {
                    ranks.push_back(k);
                }
                break;
            case PlacementKind::Random: ranks.push_back(0); break;
        }
        std::vector<SchedulerPolicy> policies;
        if (cfg.scheduler)
        {
            policies.push_back(*cfg.scheduler);
        }
        else
        {
            policies.assign(std::begin(all_schedulers), std::end(all_schedulers));
        }

        const int cells = static_cast<int>(ranks.size() * policies.size());
        const int team = team_size(cfg.protocol, tp);
        const int policy_count = static_cast<int>(policies.size());
        std::vector<TrialSpec> specs;
        specs.reserve(static_cast<std::size_t>(cfg.trials));
        for (int i = 0; i < cfg.trials; ++i)
        {
            const int cell = i % cells;
            TrialSpec s;
            s.graph = cfg.graph;
            s.graph_seed = derive_seed(cfg.seed, 0);
            s.protocol = cfg.protocol;
            s.p = cfg.p;
            s.q_true = cfg.q_true;
            s.delta = cfg.delta;
            s.scheduler = policies[static_cast<std::size_t>(cell % policy_count)];
            s.slow_agent = (i / cells) % team;
            s.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(i) + 1);
            s.rbhole = ranks[static_cast<std::size_t>(cell / policy_count)];
            if (cfg.placement.kind == PlacementKind::Random)
            {
                std::mt19937_64 rng(derive_seed(s.seed, 3));
                s.rbhole = 2 + static_cast<Rank>(uniform_below(rng, static_cast<std::uint64_t>(n - 1)));
            }
            specs.push_back(s);
        }
        return specs;
    }

    ExperimentReport run_experiment(const ExperimentConfig &cfg, const TrialObserver &observer)
    {
        cfg.validate();
        auto tp = std::make_shared<const TraversalPair>(make_traversal_pair(load_graph(cfg.graph, derive_seed(cfg.seed, 0))));
        const std::vector<TrialSpec> specs = plan_trials(cfg, *tp);
        const int trials = static_cast<int>(specs.size());

        std::vector<TrialRecord> records(specs.size());
        std::vector<std::exception_ptr> errors(specs.size());
        std::atomic<int> next{0};
        auto work = [&] {
            for (int i = next++; i < trials; i = next++)
            {
                try
                {
                    TrialRecord &r = records[static_cast<std::size_t>(i)];
                    r.index = i;
                    r.spec = specs[static_cast<std::size_t>(i)];
                    r.run = run_trial(r.spec, tp, false);
                    r.verdict = classify(r.run.result.outcome, *tp, tp->node(r.spec.rbhole));
                    r.survivors = r.run.result.alive_at_homebase(tp->homebase());
                }
                catch (...)
                {
                    errors[static_cast<std::size_t>(i)] = std::current_exception();
                }
            }
        };
        const int threads = std::min(cfg.threads, trials);
        if (threads <= 1)
        {
            work();
        }
        else
        {
            std::vector<std::thread> pool;
            for (int t = 0; t < threads; ++t)
            {
                pool.emplace_back(work);
            }
            for (auto &t : pool)
            {
                t.join();
            }
        }
        for (int i = 0; i < trials; ++i)
        {
            if (!errors[static_cast<std::size_t>(i)])
            {
                continue;
            }
            const std::string where =
                " [trial " + std::to_string(i) + ", seed " + std::to_string(specs[static_cast<std::size_t>(i)].seed) + "]";
            try
            {
                std::rethrow_exception(errors[static_cast<std::size_t>(i)]);
            }
            catch (const Error &e)
            {
                throw Error(e.code(), strip_code(e) + where);
            }
        }

        ExperimentReport rep;
        rep.graph = cfg.graph;
        rep.protocol = std::string(to_string(cfg.protocol));
        rep.p = cfg.p;
        rep.q_true = cfg.q_true;
        rep.delta = cfg.delta;
        rep.seed = cfg.seed;
        rep.scheduler = cfg.scheduler ? std::string(to_string(*cfg.scheduler)) : "all";
        rep.placement = cfg.placement.str();
        rep.n = tp->node_count();
        rep.size = tp->size;
        rep.radius = tp->radius;
        rep.trials = trials;
        rep.min_survivors = std::numeric_limits<int>::max();

        std::map<std::pair<int, Rank>, CellRow> cells;
        double moves_sum = 0;
        for (const TrialRecord &r : records)
        {
            if (observer)
            {
                observer(r);
            }
            const long moves = r.run.result.total_moves();
            moves_sum += static_cast<double>(moves);
            rep.moves_max = std::max(rep.moves_max, moves);
            rep.agents_max_used = std::max(rep.agents_max_used, r.run.agents_used);
            rep.min_survivors = std::min(rep.min_survivors, r.survivors);
            rep.lucky_trials += r.run.result.lucky_survival ? 1 : 0;
            bool violated = false;
            for (const PhaseAccount &phase : r.run.phases)
            {
                violated = violated || !phase.within();
                if (phase.basis > 0)
                {
                    double &c = rep.fitted_constants[phase.name];
                    c = std::max(c, static_cast<double>(phase.moves) / phase.basis);
                }
            }
            rep.envelope_violations += violated ? 1 : 0;
            switch (r.verdict)
            {
                case Verdict::Correct: ++rep.correct_count; break;
                case Verdict::Wrong: ++rep.wrong_count; break;
                case Verdict::NoOutput: ++rep.no_output_count; break;
            }

            CellRow &cell = cells[{static_cast<int>(r.spec.scheduler), r.spec.rbhole}];
            if (cell.trials == 0)
            {
                cell.policy = std::string(to_string(r.spec.scheduler));
                cell.placement = r.spec.rbhole;
                cell.min_survivors = r.survivors;
            }
            ++cell.trials;
            cell.wrong += r.verdict == Verdict::Wrong ? 1 : 0;
            cell.no_output += r.verdict == Verdict::NoOutput ? 1 : 0;
            cell.moves_max = std::max(cell.moves_max, moves);
            cell.min_survivors = std::min(cell.min_survivors, r.survivors);
        }
        for (auto &[key, row] : cells)
        {
            rep.breakdown.push_back(row);
        }
        rep.error_rate = static_cast<double>(rep.wrong_count) / trials;
        rep.wilson95 = wilson_interval(rep.wrong_count, trials, 1.96);
        const int produced = trials - rep.no_output_count;
        if (produced > 0)
        {
            rep.conditional_error_rate = static_cast<double>(rep.wrong_count) / produced;
        }
        rep.moves_mean = moves_sum / trials;
        return rep;
    }

    std::string report_json(const ExperimentReport &r)
    {
        ojson j;
        j["graph"] = r.graph;
        j["protocol"] = r.protocol;
        j["p"] = r.p;
        j["q_true"] = r.q_true;
        j["delta"] = r.delta;
        j["seed"] = r.seed;
        j["scheduler"] = r.scheduler;
        j["placement"] = r.placement;
        j["n"] = r.n;
        j["size"] = r.size;
        j["radius"] = r.radius;
        j["trials"] = r.trials;
        j["wrong_count"] = r.wrong_count;
        j["correct_count"] = r.correct_count;
        j["no_output_count"] = r.no_output_count;
        j["error_rate"] = r.error_rate;
        j["wilson95"] = wilson_json(r.wilson95);
        j["conditional_error_rate"] = r.conditional_error_rate ? ojson(*r.conditional_error_rate) : ojson(nullptr);
        j["moves"] = ojson{{"mean", r.moves_mean}, {"max", r.moves_max}};
        j["agents"] = ojson{{"max_used", r.agents_max_used}, {"min_survivors", r.min_survivors}};
        j["lucky_trials"] = r.lucky_trials;
        j["envelope_violations"] = r.envelope_violations;
        ojson fitted = ojson::object();
        for (const auto &[name, c] : r.fitted_constants)
        {
            fitted[name] = c;
        }
        j["fitted_constants"] = fitted;
        ojson rows = ojson::array();
        for (const CellRow &row : r.breakdown)
        {
            rows.push_back(ojson{{"policy", row.policy},
                                 {"placement", row.placement},
                                 {"trials", row.trials},
                                 {"wrong", row.wrong},
                                 {"no_output", row.no_output},
                                 {"moves_max", row.moves_max},
                                 {"min_survivors", row.min_survivors}});
        }
        j["breakdown"] = rows;
        return j.dump(2) + "\n";
    }

    ExperimentReport parse_report_json(std::string_view text)
    {
        ExperimentReport r;
        try
        {
            const auto j = nlohmann::json::parse(text);
            r.graph = j.at("graph").get<std::string>();
            r.protocol = j.at("protocol").get<std::string>();
            r.p = j.at("p").get<double>();
            r.q_true = j.at("q_true").get<double>();
            r.delta = j.at("delta").get<double>();
            r.seed = j.at("seed").get<std::uint64_t>();
            r.scheduler = j.at("scheduler").get<std::string>();
            r.placement = j.at("placement").get<std::string>();
            r.n = j.at("n").get<int>();
            r.size = j.at("size").get<int>();
            r.radius = j.at("radius").get<int>();
            r.trials = j.at("trials").get<int>();
            r.wrong_count = j.at("wrong_count").get<int>();
            r.correct_count = j.at("correct_count").get<int>();
            r.no_output_count = j.at("no_output_count").get<int>();
            r.error_rate = j.at("error_rate").get<double>();
            r.wilson95 = WilsonInterval{j.at("wilson95").at("lo").get<double>(), j.at("wilson95").at("hi").get<double>()};
            if (!j.at("conditional_error_rate").is_null())
            {
                r.conditional_error_rate = j.at("conditional_error_rate").get<double>();
            }
            r.moves_mean = j.at("moves").at("mean").get<double>();
            r.moves_max = j.at("moves").at("max").get<long>();
            r.agents_max_used = j.at("agents").at("max_used").get<int>();
            r.min_survivors = j.at("agents").at("min_survivors").get<int>();
            r.lucky_trials = j.at("lucky_trials").get<int>();
            r.envelope_violations = j.at("envelope_violations").get<int>();
            for (const auto &[name, c] : j.at("fitted_constants").items())
            {
                r.fitted_constants[name] = c.get<double>();
            }
            for (const auto &row : j.at("breakdown"))
            {
                r.breakdown.push_back(CellRow{row.at("policy").get<std::string>(), row.at("placement").get<Rank>(),
                                              row.at("trials").get<int>(), row.at("wrong").get<int>(),
                                              row.at("no_output").get<int>(), row.at("moves_max").get<long>(),
                                              row.at("min_survivors").get<int>()});
            }
        }
        catch (const nlohmann::json::exception &e)
        {
            throw Error(ErrorCode::ParseError, std::string("report: ") + e.what());
        }
        return r;
    }

    std::string report_csv(const ExperimentReport &r)
    {
        std::ostringstream os;
        os << "policy,placement,trials,wrong,no_output,error_rate,moves_max,min_survivors\n";
        for (const CellRow &row : r.breakdown)
        {
            os << row.policy << ',' << row.placement << ',' << row.trials << ',' << row.wrong << ',' << row.no_output
               << ',' << fixed6(row.trials > 0 ? static_cast<double>(row.wrong) / row.trials : 0.0) << ','
               << row.moves_max << ',' << row.min_survivors << '\n';
        }
        os << "all,all," << r.trials << ',' << r.wrong_count << ',' << r.no_output_count << ',' << fixed6(r.error_rate)
           << ',' << r.moves_max << ',' << r.min_survivors << '\n';
        return os.str();
    }

    void emit_report(const ExperimentReport &report, ReportFormat format, const std::string &path)
    {
        std::ofstream out(path, std::ios::binary);
        if (!out)
        {
            throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
        }
        out << (format == ReportFormat::Json ? report_json(report) : report_csv(report));
        out.flush();
        if (!out)
        {
            throw Error(ErrorCode::IoError, "write to '" + path + "' failed");
        }
    }

    std::string trial_spec_json(const TrialSpec &s)
    {
        ojson j;
        j["graph"] = s.graph;
        j["graph_seed"] = s.graph_seed;
        j["protocol"] = to_string(s.protocol);
        j["p"] = s.p;
        j["q_true"] = s.q_true;
        j["delta"] = s.delta;
        j["scheduler"] = to_string(s.scheduler);
        j["slow_agent"] = s.slow_agent;
        j["rbhole"] = s.rbhole;
        j["seed"] = s.seed;
        return ojson{{"trial", j}}.dump();
    }

    TrialSpec parse_trial_spec(std::string_view json_line)
    {
        try
        {
            const auto j = nlohmann::json::parse(json_line).at("trial");
            TrialSpec s;
            s.graph = j.at("graph").get<std::string>();
            s.graph_seed = j.at("graph_seed").get<std::uint64_t>();
            s.protocol = parse_protocol(j.at("protocol").get<std::string>());
            s.p = j.at("p").get<double>();
            s.q_true = j.at("q_true").get<double>();
            s.delta = j.at("delta").get<double>();
            s.scheduler = parse_scheduler(j.at("scheduler").get<std::string>());
            s.slow_agent = j.at("slow_agent").get<int>();
            s.rbhole = j.at("rbhole").get<Rank>();
            s.seed = j.at("seed").get<std::uint64_t>();
            return s;
        }
        catch (const nlohmann::json::exception &e)
        {
            throw Error(ErrorCode::ParseError, std::string("transcript header: ") + e.what());
        }
    }

    std::string transcript_document(const TrialSpec &spec, const ProtocolRun &run)
    {
        return trial_spec_json(spec) + "\n" + to_jsonl(run.result.transcript);
    }

    std::shared_ptr<const TraversalPair> trial_traversal_pair(const TrialSpec &spec)
    {
        return std::make_shared<const TraversalPair>(make_traversal_pair(load_graph(spec.graph, spec.graph_seed)));
    }

    ReplayResult replay_transcript(const std::string &document)
    {
        const auto eol = document.find('\n');
        const TrialSpec spec = parse_trial_spec(document.substr(0, eol));
        const std::string again = transcript_document(spec, run_trial(spec, trial_traversal_pair(spec), true));
        if (again == document)
        {
            return ReplayResult{true, "identical"};
        }
        std::istringstream a(document);
        std::istringstream b(again);
        std::string la;
        std::string lb;
        for (int line = 1;; ++line)
        {
            const bool ga = static_cast<bool>(std::getline(a, la));
            const bool gb = static_cast<bool>(std::getline(b, lb));
            if (!ga || !gb || la != lb)
            {
                return ReplayResult{false, "first difference at line " + std::to_string(line)};
            }
        }
    }
}

#include "rbhs/error.hpp"
#include "rbhs/harness.hpp"
#include "rbhs/random.hpp"
#include "rbhs/suite.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace
{
    using namespace rbhs;

    void write_text(const std::string &path, const std::string &text)
    {
        if (path.empty() || path == "-")
        {
            std::cout << text;
            return;
        }
        std::ofstream out(path, std::ios::binary);
        out << text;
        if (!out)
        {
            throw Error(ErrorCode::IoError, "cannot write " + path);
        }
    }

    std::string read_text(const std::string &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
        {
            throw Error(ErrorCode::IoError, "cannot read " + path);
        }
        std::ostringstream os;
        os << in.rdbuf();
        return os.str();
    }

    std::uint64_t effective_seed(std::uint64_t flag)
    {
        if (const char *env = std::getenv("RBHS_SEED"); env != nullptr && *env != '\0')
        {
            try
            {
                return std::stoull(env);
            }
            catch (const std::exception &)
            {
                throw Error(ErrorCode::InvalidParams, std::string("RBHS_SEED is not an unsigned integer: ") + env);
            }
        }
        return flag;
    }

    bool ends_with(const std::string &s, std::string_view suffix)
    {
        return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
    }

    struct RunArgs
    {
        ExperimentConfig cfg;
        std::string protocol = "reduction";
        std::string scheduler = "all";
        std::string placement = "exhaustive";
        std::string out;
        std::string transcript;
        bool no_guarantee = false;
    };

    int run_command(RunArgs &args)
    {
        ExperimentConfig &cfg = args.cfg;
        cfg.seed = effective_seed(cfg.seed);
        cfg.protocol = parse_protocol(args.protocol);
        if (args.scheduler != "all")
        {
            cfg.scheduler = parse_scheduler(args.scheduler);
        }
        cfg.placement = parse_placement(args.placement);
        cfg.guarantee_mode = !args.no_guarantee;
        cfg.validate();

        const ExperimentReport report = run_experiment(cfg);
        const ReportFormat format = ends_with(args.out, ".csv") ? ReportFormat::Csv : ReportFormat::Json;
        if (args.out.empty() || args.out == "-")
        {
            std::cout << report_json(report) << '\n';
        }
        else
        {
            emit_report(report, format, args.out);
        }

        if (!args.transcript.empty())
        {
            const TraversalPair tp = make_traversal_pair(load_graph(cfg.graph, derive_seed(cfg.seed, 0)));
            const TrialSpec spec = plan_trials(cfg, tp).front();
            write_text(args.transcript, transcript_document(spec, run_trial(spec, trial_traversal_pair(spec), true)));
        }

        bool pass = report.envelope_violations == 0;
        if (cfg.guarantee_mode && report.error_rate > acceptance_threshold(cfg.delta, report.trials))
        {
            pass = false;
        }
        std::cerr << report.protocol << " on " << report.graph << ": " << report.trials << " trials, "
                  << report.wrong_count << " wrong, " << report.no_output_count << " without output, "
                  << report.envelope_violations << " envelope violations\n";
        return pass ? 0 : 1;
    }

    int tp_command(const std::string &graph, std::uint64_t seed, const std::string &out)
    {
        const TraversalPair tp = make_traversal_pair(load_graph(graph, derive_seed(effective_seed(seed), 0)));
        nlohmann::ordered_json doc;
        std::vector<NodeId> ordering;
        for (Rank k = 1; k <= tp.node_count(); ++k)
        {
            ordering.push_back(tp.node(k));
        }
        doc["ordering"] = ordering;
        doc["pi_l"] = tp.pi_left;
        doc["pi_r"] = tp.pi_right;
        doc["size"] = tp.size;
        doc["radius"] = tp.radius;
        nlohmann::ordered_json parts = nlohmann::ordered_json::array();
        for (const Interval &iv : partition_viable(tp).intervals)
        {
            parts.push_back({{"lo", iv.lo}, {"hi", iv.hi}, {"weight", iv.weight}});
        }
        doc["partition"] = parts;
        write_text(out, doc.dump(2) + "\n");
        return 0;
    }

    int replay_command(const std::string &path)
    {
        const ReplayResult result = replay_transcript(read_text(path));
        if (result.identical)
        {
            std::cout << "identical\n";
        }
        else
        {
            std::cout << "different: " << result.detail << '\n';
        }
        return result.identical ? 0 : 1;
    }

    int suite_command(SuiteOptions options)
    {
        options.seed = effective_seed(options.seed);
        bool pass = true;
        run_acceptance_suite(options, [&](const CriterionResult &r) {
            std::cout << format_result(r) << std::endl;
            pass = pass && r.pass;
        });
        return pass ? 0 : 1;
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"Simulator and protocols for locating a malicious host with unreliable mobile agents"};
    app.require_subcommand(1);

    RunArgs run;
    auto *run_cmd = app.add_subcommand("run", "Run a Monte Carlo experiment and write its report");
    run_cmd->add_option("--graph", run.cfg.graph, "ring:N, complete:N, grid:AxB, random-biconnected:N,M or an edge file")
        ->required();
    run_cmd->add_option("--protocol", run.protocol, "coloring, reduction, reducer, algo1, algo2, wbfree-few-agents, "
                                                    "wbfree-few-moves or ring-bhs");
    run_cmd->add_option("--p", run.cfg.p, "Assumed kill probability");
    run_cmd->add_option("--q-true", run.cfg.q_true, "Actual kill probability");
    run_cmd->add_option("--delta", run.cfg.delta, "Target error probability");
    run_cmd->add_option("--trials", run.cfg.trials, "Number of trials");
    run_cmd->add_option("--seed", run.cfg.seed, "Master seed (RBHS_SEED overrides)");
    run_cmd->add_option("--scheduler", run.scheduler, "random, round-robin, adversary-slow or all");
    run_cmd->add_option("--placement", run.placement, "exhaustive, random or fixed:K");
    run_cmd->add_option("--threads", run.cfg.threads, "Worker threads");
    run_cmd->add_option("--out", run.out, "Report path; .csv selects CSV, anything else JSON");
    run_cmd->add_option("--transcript", run.transcript, "Write the first trial's transcript here");
    run_cmd->add_flag("--no-guarantee", run.no_guarantee, "Allow q-true below p");

    std::string tp_graph;
    std::string tp_out;
    std::uint64_t tp_seed = 0;
    auto *tp_cmd = app.add_subcommand("tp", "Emit the traversal pair and interval partition of a graph");
    tp_cmd->add_option("--graph", tp_graph, "Graph descriptor or edge file")->required();
    tp_cmd->add_option("--seed", tp_seed, "Seed for random generators (RBHS_SEED overrides)");
    tp_cmd->add_option("--out", tp_out, "Output path (stdout by default)");

    std::string transcript;
    auto *replay_cmd = app.add_subcommand("replay", "Rerun the trial a transcript names and compare");
    replay_cmd->add_option("--transcript", transcript, "Transcript path")->required();

    SuiteOptions suite;
    auto *suite_cmd = app.add_subcommand("suite", "Run the acceptance battery");
    suite_cmd->add_option("--seed", suite.seed, "Master seed (RBHS_SEED overrides)");
    suite_cmd->add_option("--threads", suite.threads, "Worker threads");

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*run_cmd)
        {
            return run_command(run);
        }
        if (*tp_cmd)
        {
            return tp_command(tp_graph, tp_seed, tp_out);
        }
        if (*replay_cmd)
        {
            return replay_command(transcript);
        }
        if (*suite_cmd)
        {
            return suite_command(suite);
        }
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}

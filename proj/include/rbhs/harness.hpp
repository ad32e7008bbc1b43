#pragma once

#include "rbhs/protocols.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rbhs
{
    enum class PlacementKind
    {
        Fixed,
        Exhaustive, // every non-homebase rank in turn
        Random,
    };

    struct Placement
    {
        PlacementKind kind = PlacementKind::Exhaustive;
        Rank rank = 2; // Fixed only: the rB-hole is v_rank

        std::string str() const;
    };

    // "exhaustive", "random" or "fixed:K" (K a rank, 2 <= K <= n).
    Placement parse_placement(std::string_view text);

    // Generator descriptor (ring:N, complete:N, grid:AxB, random-biconnected:N,M)
    // or the path of an edge-list file.
    std::shared_ptr<const Graph> load_graph(const std::string &spec, std::uint64_t seed);

    struct ExperimentConfig
    {
        std::string graph = "ring:8";
        ProtocolId protocol = ProtocolId::Reduction;
        double p = 1.0;
        double q_true = 1.0;
        double delta = 0.1;
        int trials = 1;
        std::uint64_t seed = 0;
        std::optional<SchedulerPolicy> scheduler; // empty: cycle through all policies
        Placement placement;
        bool guarantee_mode = true; // require q_true >= p
        int threads = 1;

        // Throws InvalidParams.
        void validate() const;
    };

    // Everything needed to rerun one trial in isolation.
    struct TrialSpec
    {
        std::string graph;
        std::uint64_t graph_seed = 0;
        ProtocolId protocol = ProtocolId::Reduction;
        double p = 1.0;
        double q_true = 1.0;
        double delta = 0.1;
        SchedulerPolicy scheduler = SchedulerPolicy::RoundRobin;
        int slow_agent = 0;
        Rank rbhole = 2;
        std::uint64_t seed = 0;

        friend bool operator==(const TrialSpec &, const TrialSpec &) = default;
    };

    enum class Verdict
    {
        Correct,
        Wrong,
        NoOutput,
    };
    std::string_view to_string(Verdict v) noexcept;

    // A trial is wrong iff it produced an output that misses the rB-hole.
    Verdict classify(const Outcome &outcome, const TraversalPair &tp, NodeId rbhole);

    EngineConfig engine_config(const TrialSpec &spec, std::shared_ptr<const TraversalPair> tp, bool record);
    ProtocolRun run_trial(const TrialSpec &spec, std::shared_ptr<const TraversalPair> tp, bool record);

    struct TrialRecord
    {
        int index = 0;
        TrialSpec spec;
        ProtocolRun run;
        Verdict verdict = Verdict::NoOutput;
        int survivors = 0; // live agents at the homebase at termination
    };

    struct WilsonInterval
    {
        double lo = 0;
        double hi = 0;
        friend bool operator==(const WilsonInterval &, const WilsonInterval &) = default;
    };

    // Wilson score interval; throws InvalidParams when n = 0 or wrong > n.
    WilsonInterval wilson_interval(long wrong, long n, double z);

    // delta + 3 sqrt(delta (1 - delta) / trials)
    double acceptance_threshold(double delta, long trials);

    struct CellRow
    {
        std::string policy;
        Rank placement = 0;
        int trials = 0;
        int wrong = 0;
        int no_output = 0;
        long moves_max = 0;
        int min_survivors = 0;
        friend bool operator==(const CellRow &, const CellRow &) = default;
    };

    struct ExperimentReport
    {
        std::string graph;
        std::string protocol;
        double p = 0;
        double q_true = 0;
        double delta = 0;
        std::uint64_t seed = 0;
        std::string scheduler;
        std::string placement;
        int n = 0;
        int size = 0;
        int radius = 0;

        int trials = 0;
        int wrong_count = 0;
        int correct_count = 0;
        int no_output_count = 0;
        double error_rate = 0;
        WilsonInterval wilson95;
        std::optional<double> conditional_error_rate; // empty when no trial produced output
        double moves_mean = 0;
        long moves_max = 0;
        int agents_max_used = 0;
        int min_survivors = 0;
        int lucky_trials = 0;
        int envelope_violations = 0;
        std::map<std::string, double> fitted_constants; // max moves / basis per phase
        std::vector<CellRow> breakdown;

        friend bool operator==(const ExperimentReport &, const ExperimentReport &) = default;
    };

    using TrialObserver = std::function<void(const TrialRecord &)>;

    // Runs every trial and aggregates. The observer sees trials in index
    // order whatever the thread count. Library errors are rethrown with the
    // offending trial index and seed appended.
    ExperimentReport run_experiment(const ExperimentConfig &cfg, const TrialObserver &observer = {});

    // The trial list run_experiment would execute, without running it.
    std::vector<TrialSpec> plan_trials(const ExperimentConfig &cfg, const TraversalPair &tp);

    enum class ReportFormat
    {
        Json,
        Csv
    };
    std::string report_json(const ExperimentReport &report);
    std::string report_csv(const ExperimentReport &report);
    ExperimentReport parse_report_json(std::string_view text);
    // Throws IoError.
    void emit_report(const ExperimentReport &report, ReportFormat format, const std::string &path);

    // A transcript file: one header line with the trial spec, then the event
    // lines of to_jsonl.
    std::string transcript_document(const TrialSpec &spec, const ProtocolRun &run);
    std::string trial_spec_json(const TrialSpec &spec);
    TrialSpec parse_trial_spec(std::string_view json_line);

    struct ReplayResult
    {
        bool identical = false;
        std::string detail;
    };
    // Reruns the trial named in the header and compares byte for byte.
    ReplayResult replay_transcript(const std::string &document);
    std::shared_ptr<const TraversalPair> trial_traversal_pair(const TrialSpec &spec);
}

#include "rbhs/error.hpp"
#include "rbhs/harness.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace rbhs;

namespace
{
    std::string read_file(const std::filesystem::path &path)
    {
        std::ifstream in(path, std::ios::binary);
        std::ostringstream os;
        os << in.rdbuf();
        return os.str();
    }

    ExperimentConfig golden_config()
    {
        ExperimentConfig cfg;
        cfg.graph = "ring:8";
        cfg.protocol = ProtocolId::Reduction;
        cfg.p = 0.5;
        cfg.q_true = 0.5;
        cfg.delta = 0.1;
        cfg.trials = 60;
        cfg.seed = 7;
        cfg.placement = parse_placement("random");
        return cfg;
    }

    std::filesystem::path temp_path(const char *name)
    {
        return std::filesystem::temp_directory_path() / name;
    }
}

TEST_CASE("wilson interval")
{
    // Closed form evaluated at 40 digits: 3.8416 / 103.8416.
    const WilsonInterval zero = wilson_interval(0, 100, 1.96);
    CHECK(zero.lo == 0.0);
    CHECK(zero.hi == doctest::Approx(0.0369948074760019106).epsilon(1e-12));
    CHECK(wilson_interval(50, 100, 0.0) == WilsonInterval{0.5, 0.5});
    CHECK(wilson_interval(100, 100, 1.96).hi == 1.0);
    for (long wrong = 0; wrong <= 40; ++wrong)
    {
        const WilsonInterval w = wilson_interval(wrong, 40, 1.96);
        const double rate = static_cast<double>(wrong) / 40;
        CHECK(w.lo <= rate);
        CHECK(rate <= w.hi);
    }
    CHECK_THROWS_AS(wilson_interval(0, 0, 1.96), Error);
    CHECK_THROWS_AS(wilson_interval(5, 4, 1.96), Error);
    CHECK(acceptance_threshold(0.05, 2000) == doctest::Approx(0.05 + 3 * std::sqrt(0.05 * 0.95 / 2000)));
}

TEST_CASE("placements")
{
    CHECK(parse_placement("exhaustive").kind == PlacementKind::Exhaustive);
    CHECK(parse_placement("random").kind == PlacementKind::Random);
    const Placement fixed = parse_placement("fixed:5");
    CHECK(fixed.kind == PlacementKind::Fixed);
    CHECK(fixed.rank == 5);
    CHECK(fixed.str() == "fixed:5");
    CHECK_THROWS_AS(parse_placement("fixed:x"), Error);
    CHECK_THROWS_AS(parse_placement("everywhere"), Error);
}

TEST_CASE("config validation")
{
    ExperimentConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.trials = 0;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg.trials = 1;
    cfg.p = 0.5;
    cfg.q_true = 0.3;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg.guarantee_mode = false;
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("classification")
{
    const auto tp = make_traversal_pair(load_graph("ring:8", 0));
    Outcome out;
    CHECK(classify(out, tp, tp.node(4)) == Verdict::NoOutput);
    out.kind = OutcomeKind::NodeReport;
    out.node = tp.node(4);
    CHECK(classify(out, tp, tp.node(4)) == Verdict::Correct);
    CHECK(classify(out, tp, tp.node(5)) == Verdict::Wrong);
    out.kind = OutcomeKind::IntervalReport;
    out.interval = Interval{3, 6, 0};
    CHECK(classify(out, tp, tp.node(5)) == Verdict::Correct);
    CHECK(classify(out, tp, tp.node(7)) == Verdict::Wrong);
}

TEST_CASE("black holes on ring:16 are always found")
{
    ExperimentConfig cfg;
    cfg.graph = "ring:16";
    cfg.protocol = ProtocolId::Reduction;
    cfg.trials = 15 * 3;
    const ExperimentReport rep = run_experiment(cfg);
    CHECK(rep.error_rate == 0);
    CHECK(rep.no_output_count == 0);
    CHECK(rep.wrong_count + rep.correct_count + rep.no_output_count == rep.trials);
    CHECK(rep.breakdown.size() == 45);
}

TEST_CASE("a single trial report matches that trial")
{
    ExperimentConfig cfg = golden_config();
    cfg.trials = 1;
    TrialRecord seen;
    const ExperimentReport rep = run_experiment(cfg, [&](const TrialRecord &r) { seen = r; });
    CHECK(rep.trials == 1);
    CHECK(rep.correct_count == (seen.verdict == Verdict::Correct ? 1 : 0));
    CHECK(rep.wrong_count == (seen.verdict == Verdict::Wrong ? 1 : 0));
    CHECK(rep.moves_max == seen.run.result.total_moves());
    const auto plan = plan_trials(cfg, make_traversal_pair(load_graph(cfg.graph, 0)));
    CHECK(plan.front() == seen.spec);
}

TEST_CASE("reports are deterministic and thread independent")
{
    ExperimentConfig cfg = golden_config();
    cfg.protocol = ProtocolId::WbFreeFewMoves;
    cfg.graph = "grid:3x4";
    const std::string once = report_json(run_experiment(cfg));
    CHECK(once == report_json(run_experiment(cfg)));
    cfg.threads = 3;
    CHECK(once == report_json(run_experiment(cfg)));
}

TEST_CASE("json round trip")
{
    const ExperimentReport rep = run_experiment(golden_config());
    CHECK(parse_report_json(report_json(rep)) == rep);
    ExperimentReport empty;
    CHECK(parse_report_json(report_json(empty)) == empty);
}

TEST_CASE("csv layout")
{
    ExperimentReport empty;
    empty.graph = "ring:8";
    empty.protocol = "reduction";
    const std::string csv = report_csv(empty);
    int lines = 0;
    for (char c : csv)
    {
        lines += c == '\n' ? 1 : 0;
    }
    CHECK(lines == 2);
    CHECK(csv.find("\nall,all,") != std::string::npos);

    const ExperimentReport rep = run_experiment(golden_config());
    const std::string full = report_csv(rep);
    lines = 0;
    for (char c : full)
    {
        lines += c == '\n' ? 1 : 0;
    }
    CHECK(lines == 2 + static_cast<int>(rep.breakdown.size()));
}

TEST_CASE("golden report")
{
    const auto out = temp_path("rbhs_golden_check.json");
    emit_report(run_experiment(golden_config()), ReportFormat::Json, out.string());
    CHECK(read_file(out) == read_file(std::filesystem::path(RBHS_TEST_DATA) / "ring8_reduction.json"));
    std::filesystem::remove(out);
}

TEST_CASE("emit errors")
{
    const ExperimentReport rep;
    CHECK_THROWS_AS(emit_report(rep, ReportFormat::Json, "/nonexistent-dir/x/report.json"), Error);
}

TEST_CASE("transcripts replay")
{
    ExperimentConfig cfg = golden_config();
    const auto tp = make_traversal_pair(load_graph(cfg.graph, 0));
    const TrialSpec spec = plan_trials(cfg, tp).at(3);
    CHECK(parse_trial_spec(trial_spec_json(spec)) == spec);
    const std::string doc = transcript_document(spec, run_trial(spec, trial_traversal_pair(spec), true));
    const ReplayResult same = replay_transcript(doc);
    CHECK(same.identical);

    std::string tampered = doc;
    const auto pos = tampered.find("\"t\":", tampered.find('\n'));
    REQUIRE(pos != std::string::npos);
    tampered.insert(pos + 4, "1");
    const ReplayResult differs = replay_transcript(tampered);
    CHECK_FALSE(differs.identical);
    CHECK_FALSE(differs.detail.empty());
}

TEST_CASE("errors name the offending trial")
{
    ExperimentConfig cfg;
    cfg.graph = "grid:3x4";
    cfg.protocol = ProtocolId::Reduction;
    try
    {
        run_experiment(cfg);
        FAIL("expected an error");
    }
    catch (const Error &e)
    {
        CHECK(std::string(e.what()).find("seed") != std::string::npos);
    }
}

TEST_CASE("graph loading")
{
    CHECK(load_graph("complete:5", 0)->edge_count() == 10);
    const auto path = temp_path("rbhs_triangle.edges");
    {
        std::ofstream out(path);
        out << "0 1\n1 2\n2 0\n";
    }
    CHECK(load_graph(path.string(), 0)->node_count() == 3);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(load_graph("/nonexistent/graph.edges", 0), Error);
}

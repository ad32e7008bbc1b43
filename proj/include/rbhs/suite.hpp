#pragma once

#include "rbhs/harness.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace rbhs
{
    struct CriterionResult
    {
        int id = 0;
        std::string title;
        bool pass = false;
        std::string detail;
        double seconds = 0;
    };

    struct SuiteOptions
    {
        std::uint64_t seed = 42;
        int threads = 1;
    };

    // Runs the nine acceptance criteria in order. `on_done` fires as each
    // verdict becomes available.
    std::vector<CriterionResult> run_acceptance_suite(const SuiteOptions &options,
                                                      const std::function<void(const CriterionResult &)> &on_done = {});

    // "criterion 3: PASS  error bounds ... (detail) [1.2 s]"
    std::string format_result(const CriterionResult &r);

    // Checks of criterion 1 against independent BFS oracles; returns an empty
    // string on success, else the first violation found.
    std::string check_traversal_pair(const TraversalPair &tp);

    // The colour conditions a failed COLORING run must leave behind when the
    // rB-hole sits at rank g; empty string on success.
    std::string check_coloring_failure(const RunResult &result, const TraversalPair &tp, Rank g);
}

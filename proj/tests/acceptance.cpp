#include "rbhs/suite.hpp"

#include <cstdlib>
#include <iostream>

int main()
{
    rbhs::SuiteOptions options;
    if (const char *env = std::getenv("RBHS_SEED"); env != nullptr && *env != '\0')
    {
        options.seed = std::strtoull(env, nullptr, 10);
    }
    bool pass = true;
    rbhs::run_acceptance_suite(options, [&](const rbhs::CriterionResult &r) {
        std::cout << rbhs::format_result(r) << std::endl;
        pass = pass && r.pass;
    });
    return pass ? EXIT_SUCCESS : EXIT_FAILURE;
}
